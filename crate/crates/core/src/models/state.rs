//! Simulated risk-factor panels on the exposure-date grid.

/// A named risk factor; the index refers to the system's currency list
/// (0 is always the base currency).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FactorId {
    /// Hull-White short rate of a currency.
    ShortRate(usize),
    /// Spot FX converting one unit of a foreign currency into base units.
    FxSpot(usize),
    /// First G2 factor of a currency.
    G2X(usize),
    /// Second G2 factor of a currency.
    G2Y(usize),
}

impl FactorId {
    pub fn currency(&self) -> usize {
        match *self {
            FactorId::ShortRate(c) | FactorId::FxSpot(c) | FactorId::G2X(c) | FactorId::G2Y(c) => c,
        }
    }
}

/// Simulated factor values and the money-savings account on all exposure
/// dates. Immutable after construction; shared read-only across threads.
#[derive(Clone, Debug)]
pub struct ModelState {
    dates: Vec<f64>,
    n_paths: usize,
    factors: Vec<FactorId>,
    /// Layout `[date][factor][path]`: each (date, factor) slice is contiguous.
    values: Vec<f64>,
    /// `M(T_k)` per path, layout `[date][path]`; `M(t_0) = 1` implicitly.
    numeraire: Vec<f64>,
    seed: u64,
}

impl ModelState {
    /// Assembles the state from a path-major simulation buffer of layout
    /// `[path][date][factor]` plus `[path][date]` numeraire values.
    pub(crate) fn from_path_major(
        dates: Vec<f64>,
        factors: Vec<FactorId>,
        n_paths: usize,
        seed: u64,
        path_major: &[f64],
        numeraire_pm: &[f64],
    ) -> Self {
        let nd = dates.len();
        let nf = factors.len();
        assert_eq!(path_major.len(), n_paths * nd * nf);
        assert_eq!(numeraire_pm.len(), n_paths * nd);
        let mut values = vec![0.0; path_major.len()];
        let mut numeraire = vec![0.0; numeraire_pm.len()];
        for p in 0..n_paths {
            for k in 0..nd {
                for f in 0..nf {
                    values[(k * nf + f) * n_paths + p] = path_major[(p * nd + k) * nf + f];
                }
                numeraire[k * n_paths + p] = numeraire_pm[p * nd + k];
            }
        }
        Self { dates, n_paths, factors, values, numeraire, seed }
    }

    pub fn dates(&self) -> &[f64] {
        &self.dates
    }

    pub fn n_paths(&self) -> usize {
        self.n_paths
    }

    pub fn factors(&self) -> &[FactorId] {
        &self.factors
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn factor_index(&self, id: FactorId) -> Option<usize> {
        self.factors.iter().position(|f| *f == id)
    }

    /// All paths of one factor at one exposure date.
    pub fn factor_values(&self, date_idx: usize, factor_idx: usize) -> &[f64] {
        let nf = self.factors.len();
        let start = (date_idx * nf + factor_idx) * self.n_paths;
        &self.values[start..start + self.n_paths]
    }

    /// `M(T_k)` across paths.
    pub fn numeraire(&self, date_idx: usize) -> &[f64] {
        &self.numeraire[date_idx * self.n_paths..(date_idx + 1) * self.n_paths]
    }

    /// Discount factors `M(t_0)/M(T_k) = 1/M(T_k)` across paths.
    pub fn discount_factors(&self, date_idx: usize) -> Vec<f64> {
        self.numeraire(date_idx).iter().map(|m| 1.0 / m).collect()
    }

    /// Columnar text dump for debugging: one row per (date, path) with all
    /// factors and the numeraire, truncated to `max_paths` paths.
    pub fn dump_columnar(&self, max_paths: usize) -> String {
        use std::fmt::Write;
        let mut s = String::new();
        let _ = write!(s, "date\tpath");
        for f in &self.factors {
            let _ = write!(s, "\t{f:?}");
        }
        let _ = writeln!(s, "\tnumeraire");
        let shown = self.n_paths.min(max_paths);
        for (k, t) in self.dates.iter().enumerate() {
            for p in 0..shown {
                let _ = write!(s, "{t}\t{p}");
                for f in 0..self.factors.len() {
                    let _ = write!(s, "\t{}", self.factor_values(k, f)[p]);
                }
                let _ = writeln!(s, "\t{}", self.numeraire(k)[p]);
            }
        }
        s
    }
}
