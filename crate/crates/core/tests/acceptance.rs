//! Acceptance suite: one test per acceptance criterion, each printing a
//! `PASS` line with its headline numbers. Tolerances are pinned in the
//! assertions. Heavy fixtures (the seven-factor simulation and its
//! brute-force reference) are shared across criteria through `OnceLock`.

use std::sync::OnceLock;
use std::time::Instant;

use sparse_exposure::exposure::{
    domain_box_from_paths, error_metrics, evaluate_exposures, series_errors, ExposureRun,
    ProxyConfig,
};
use sparse_exposure::instruments::{
    generate_portfolio, swap_value_g2, swap_value_hw, swaption_value_g2, GeneratorConfig,
    PortfolioEvaluator, PortfolioSpec, SwapSpec, SwaptionSpec, Trade,
};
use sparse_exposure::math::linalg::cholesky_lower;
use sparse_exposure::math::rng::{normal_draw, StreamRng};
use sparse_exposure::math::stats;
use sparse_exposure::models::{
    BshwSystem, DiscountCurve, FxLeg, G2FxLeg, G2FxSystem, G2Params, HullWhiteParams, SystemModel,
};
use sparse_exposure::report::profile_csv;
use sparse_exposure::sparse_grid::{
    chebyshev_extrema, fit_interpolant, DomainBox, SparseGrid,
};

const PFE_LEVELS: [f64; 2] = [0.95, 0.99];

fn equally_spaced(n: usize, dt: f64) -> Vec<f64> {
    (1..=n).map(|k| k as f64 * dt).collect()
}

/// Base-currency Hull-White parameters of the multi-currency experiment.
fn base_hw() -> HullWhiteParams {
    HullWhiteParams::fitted(0.003, 0.01, DiscountCurve::flat(0.01))
}

/// The reference 7x7 driver correlation matrix, ordered
/// `[r_eur, fx_usd, fx_gbp, fx_pln, r_usd, r_gbp, r_pln]`.
fn seven_factor_correlation() -> Vec<f64> {
    vec![
        1.0, 0.5, 0.5, 0.65, 0.7, 0.75, 0.8, //
        0.5, 1.0, 0.45, 0.35, 0.5, 0.5, 0.6, //
        0.5, 0.45, 1.0, 0.5, 0.5, 0.5, 0.7, //
        0.65, 0.35, 0.5, 1.0, 0.5, 0.5, 0.5, //
        0.7, 0.5, 0.5, 0.5, 1.0, 0.5, 0.58, //
        0.75, 0.5, 0.5, 0.5, 0.5, 1.0, 0.55, //
        0.8, 0.6, 0.7, 0.5, 0.58, 0.55, 1.0,
    ]
}

/// The three-foreign-currency BSHW system with the reference parameter set
/// (the base discount curve and FX volatilities are engine choices).
fn seven_factor_system() -> SystemModel {
    let leg = |ccy: &str, rate: f64, lambda: f64, eta: f64, spot: f64, vol: f64| FxLeg {
        currency: ccy.into(),
        rates: HullWhiteParams::fitted(lambda, eta, DiscountCurve::flat(rate)),
        fx_spot: spot,
        fx_vol: vol,
    };
    SystemModel::Bshw(BshwSystem {
        base_currency: "EUR".into(),
        base: base_hw(),
        legs: vec![
            leg("USD", 0.01, 0.003, 0.01, 1.2, 0.15),
            leg("GBP", 0.015, 0.002, 0.02, 0.86, 0.12),
            leg("PLN", 0.02, 0.001, 0.003, 4.59, 0.10),
        ],
        correlation: seven_factor_correlation(),
    })
}

/// Two-factor Gaussian parameters per currency for the mixed
/// swap/swaption experiment.
fn g2_leg_params(which: usize) -> G2Params {
    let (l1, e1, l2, e2, rate) = match which {
        0 => (0.50, 0.008, 0.050, 0.0040, 0.01),
        1 => (0.45, 0.009, 0.060, 0.0050, 0.01),
        2 => (0.40, 0.010, 0.055, 0.0045, 0.015),
        _ => (0.35, 0.007, 0.045, 0.0035, 0.02),
    };
    G2Params {
        lambda1: l1,
        eta1: e1,
        lambda2: l2,
        eta2: e2,
        rho: -0.6,
        curve: DiscountCurve::flat(rate),
    }
}

fn g2_multi_system() -> SystemModel {
    let d = 11usize;
    let mut corr = vec![0.0; d * d];
    for i in 0..d {
        corr[i * d + i] = 1.0;
    }
    let mut set = |i: usize, j: usize, v: f64| {
        corr[i * d + j] = v;
        corr[j * d + i] = v;
    };
    // Within-currency factor pairs.
    set(0, 1, -0.6);
    set(5, 6, -0.6);
    set(7, 8, -0.6);
    set(9, 10, -0.6);
    // FX-FX block.
    set(2, 3, 0.3);
    set(2, 4, 0.3);
    set(3, 4, 0.3);
    SystemModel::G2Fx(G2FxSystem {
        base_currency: "EUR".into(),
        base: g2_leg_params(0),
        legs: vec![
            G2FxLeg { currency: "USD".into(), rates: g2_leg_params(1), fx_spot: 1.2, fx_vol: 0.15 },
            G2FxLeg { currency: "GBP".into(), rates: g2_leg_params(2), fx_spot: 0.86, fx_vol: 0.12 },
            G2FxLeg { currency: "PLN".into(), rates: g2_leg_params(3), fx_spot: 4.59, fx_vol: 0.10 },
        ],
        correlation: corr,
    })
}

struct MultiFixture {
    system: SystemModel,
    portfolio: PortfolioSpec,
    state: sparse_exposure::models::ModelState,
    brute: ExposureRun,
}

/// Shared seven-factor experiment: 75 equally spaced dates, 25k paths and
/// the brute-force reference on those paths.
fn seven_factor_fixture() -> &'static MultiFixture {
    static FIXTURE: OnceLock<MultiFixture> = OnceLock::new();
    FIXTURE.get_or_init(|| {
        let system = seven_factor_system();
        let portfolio = generate_portfolio(
            &GeneratorConfig { seed: 2201, swaps_per_currency: 8, ..Default::default() },
            &system,
        );
        let state = system.simulate(&equally_spaced(75, 0.2), 25_000, 20_240).unwrap();
        let evaluator = PortfolioEvaluator::new(&system, &portfolio).unwrap();
        let brute =
            evaluate_exposures(&evaluator, &state, &ProxyConfig::brute_force(), &PFE_LEVELS)
                .unwrap();
        MultiFixture { system, portfolio, state, brute }
    })
}

#[test]
fn criterion_01_grid_counts() {
    let start = Instant::now();
    // Column mu = 1..4 per dimension row; usize::MAX marks unlisted cells.
    const TABLE: [[usize; 4]; 8] = [
        [3, 5, 9, usize::MAX],
        [5, 13, 29, 65],
        [7, 25, 69, 177],
        [9, 41, 137, 401],
        [11, 61, 241, 801],
        [13, 85, 389, 1457],
        [15, 113, 589, 2465],
        [17, 145, 849, 3937],
    ];
    for (row, counts) in TABLE.iter().enumerate() {
        let d = row + 1;
        for (col, &want) in counts.iter().enumerate() {
            if want == usize::MAX {
                continue;
            }
            let grid = SparseGrid::new(d, col + 1).unwrap();
            assert_eq!(grid.len(), want, "node count at d={d} mu={}", col + 1);
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "grid construction took {elapsed:?}");
    println!("acceptance criterion 1 (grid-count exactness, {elapsed:?}): PASS");
}

#[test]
fn criterion_02_interpolation_condition() {
    let mut rng = StreamRng::new(31);
    for (d, mu) in [(2usize, 2usize), (3, 2), (7, 2)] {
        let grid = std::sync::Arc::new(SparseGrid::new(d, mu).unwrap());
        for _ in 0..20 {
            // Random smooth target: exp of a random affine form plus a
            // trigonometric ripple.
            let a: Vec<f64> = (0..d).map(|_| rng.uniform_in(-1.0, 1.0)).collect();
            let b: Vec<f64> = (0..d).map(|_| rng.uniform_in(-2.0, 2.0)).collect();
            let c = rng.uniform_in(-3.0, 3.0);
            let f = |x: &[f64]| {
                let s: f64 = x.iter().zip(&a).map(|(xi, ai)| ai * xi).sum();
                let t: f64 = x.iter().zip(&b).map(|(xi, bi)| bi * xi).sum();
                (0.5 * s).exp() + c * t.sin()
            };
            let values: Vec<f64> = grid.iter_nodes().map(f).collect();
            let interp = fit_interpolant(&grid, &values, DomainBox::unit(d)).unwrap();
            for (i, node) in grid.iter_nodes().enumerate() {
                let err = (interp.eval(node) - values[i]).abs();
                assert!(
                    err <= 1e-10 * (1.0 + values[i].abs()),
                    "node residual {err} at d={d} mu={mu}"
                );
            }
        }
        // Linear targets are reproduced away from the nodes.
        let a: Vec<f64> = (0..d).map(|_| rng.uniform_in(-2.0, 2.0)).collect();
        let c = rng.uniform_in(-1.0, 1.0);
        let values: Vec<f64> = grid
            .iter_nodes()
            .map(|x| c + x.iter().zip(&a).map(|(xi, ai)| ai * xi).sum::<f64>())
            .collect();
        let interp = fit_interpolant(&grid, &values, DomainBox::unit(d)).unwrap();
        for _ in 0..1000 {
            let x: Vec<f64> = (0..d).map(|_| rng.uniform_in(-1.0, 1.0)).collect();
            let want = c + x.iter().zip(&a).map(|(xi, ai)| ai * xi).sum::<f64>();
            let got = interp.eval(&x);
            assert!(
                (got - want).abs() <= 1e-9 * (1.0 + want.abs()),
                "linear reproduction failed at d={d}: {got} vs {want}"
            );
        }
    }
    println!("acceptance criterion 2 (interpolation condition): PASS");
}

#[test]
fn criterion_03_nestedness() {
    for d in 1..=7usize {
        for mu in 0..=2usize {
            let small = SparseGrid::new(d, mu).unwrap();
            let big = SparseGrid::new(d, mu + 1).unwrap();
            let set: std::collections::BTreeSet<Vec<u64>> = big
                .iter_nodes()
                .map(|n| n.iter().map(|x| x.to_bits()).collect())
                .collect();
            for node in small.iter_nodes() {
                let key: Vec<u64> = node.iter().map(|x| x.to_bits()).collect();
                assert!(set.contains(&key), "missing node at d={d} mu={mu}");
            }
        }
    }
    println!("acceptance criterion 3 (nestedness): PASS");
}

#[test]
fn criterion_04_model_moments_and_martingales() {
    let start = Instant::now();
    let n_paths = 100_000usize;
    // Conditional moments at pinned horizons.
    let params = base_hw();
    let system = SystemModel::HullWhiteSingle { currency: "EUR".into(), params: params.clone() };
    let state = system.simulate(&[1.0, 5.0, 10.0], n_paths, 41).unwrap();
    for (k, &t) in state.dates().iter().enumerate() {
        let rs = state.factor_values(k, 0);
        let want_mean = params.cond_mean(params.r0, 0.0, t);
        let want_var = params.cond_var(0.0, t);
        let se_mean = (want_var / n_paths as f64).sqrt();
        let se_var = want_var * (2.0 / (n_paths as f64 - 1.0)).sqrt();
        let mean = stats::mean(rs);
        let var = stats::variance(rs);
        assert!((mean - want_mean).abs() < 4.0 * se_mean, "HW mean at T={t}");
        assert!((var - want_var).abs() < 4.0 * se_var, "HW variance at T={t}");
    }
    // Martingale: E[M(t0)/M(T)] = P(0,T) on a fine grid (trapezoid bias is
    // far below the Monte Carlo resolution at these parameters).
    let dates = equally_spaced(40, 0.25);
    let state = system.simulate(&dates, n_paths, 42).unwrap();
    for &k in &[9usize, 19, 39] {
        let d = state.discount_factors(k);
        let got = stats::mean(&d);
        let se = stats::mean_standard_error(&d);
        let want = params.curve.discount(dates[k]);
        assert!(
            (got - want).abs() < 3.0 * se,
            "HW martingale at T={}: {got} vs {want} (se {se})",
            dates[k]
        );
    }
    let g2 = SystemModel::G2Single { currency: "EUR".into(), params: g2_leg_params(0) };
    let state = g2.simulate(&dates, n_paths, 43).unwrap();
    for &k in &[9usize, 19, 39] {
        let d = state.discount_factors(k);
        let got = stats::mean(&d);
        let se = stats::mean_standard_error(&d);
        let want = g2_leg_params(0).curve.discount(dates[k]);
        assert!(
            (got - want).abs() < 3.0 * se,
            "G2 martingale at T={}: {got} vs {want} (se {se})",
            dates[k]
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 120.0, "criterion 4 took {elapsed:?}");
    println!("acceptance criterion 4 (model moments and martingales, {elapsed:?}): PASS");
}

#[test]
fn criterion_05_swaption_oracle() {
    let start = Instant::now();
    let params = g2_leg_params(0);
    let n_paths = 200_000u64;
    let mut worst: f64 = 0.0;
    for (ei, &expiry) in [2.0f64, 5.0, 8.0].iter().enumerate() {
        let times: Vec<f64> = (0..=10).map(|i| expiry + 0.5 * i as f64).collect();
        let par = sparse_exposure::instruments::par_rate(&params.curve, &times);
        for (si, strike_scale) in [0.8f64, 1.0, 1.25].iter().enumerate() {
            let spec = SwaptionSpec {
                expiry,
                underlying: SwapSpec {
                    currency: "EUR".into(),
                    notional: 1e6,
                    fixed_rate: par * strike_scale,
                    payer: true,
                    times: times.clone(),
                },
                payer: true,
            };
            let semi = swaption_value_g2(&spec, &params, 0.0, 0.0, 0.0).unwrap();
            // Exact oracle: (x(T), y(T), integral of the factors) is
            // trivariate normal, so discounting carries no time-step bias.
            let cov = params.terminal_and_integral_covariance(expiry);
            let l = cholesky_lower(&cov, 3).unwrap();
            let det = params.curve.discount(expiry) * (-0.5 * params.v2(0.0, expiry)).exp();
            let seed = 5_000 + (ei * 3 + si) as u64;
            let mut sum = 0.0;
            let mut sumsq = 0.0;
            for p in 0..n_paths {
                let z0 = normal_draw(seed, p, 0, 0);
                let z1 = normal_draw(seed, p, 0, 1);
                let z2 = normal_draw(seed, p, 0, 2);
                let x = l[0] * z0;
                let y = l[3] * z0 + l[4] * z1;
                let i = l[6] * z0 + l[7] * z1 + l[8] * z2;
                let payoff = swap_value_g2(&spec.underlying, &params, expiry, x, y).max(0.0);
                let v = det * (-i).exp() * payoff;
                sum += v;
                sumsq += v * v;
            }
            let mc = sum / n_paths as f64;
            let se = ((sumsq / n_paths as f64 - mc * mc) / n_paths as f64).sqrt();
            let dev = (semi - mc).abs() / se;
            worst = worst.max(dev);
            assert!(
                dev < 3.0,
                "swaption (T={expiry}, K={:.4}): semi {semi} vs MC {mc} (se {se}, {dev:.2} SE)",
                par * strike_scale
            );
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 300.0, "criterion 5 took {elapsed:?}");
    println!(
        "acceptance criterion 5 (swaption vs Monte Carlo oracle, worst {worst:.2} SE, {elapsed:?}): PASS"
    );
}

#[test]
fn criterion_06_single_currency_reproduction() {
    let start = Instant::now();
    let system = SystemModel::HullWhiteSingle { currency: "EUR".into(), params: base_hw() };
    let portfolio = generate_portfolio(
        &GeneratorConfig { seed: 601, swaps_per_currency: 25, ..Default::default() },
        &system,
    );
    assert_eq!(portfolio.trades.len(), 25);
    let evaluator = PortfolioEvaluator::new(&system, &portfolio).unwrap();
    let state = system.simulate(&equally_spaced(50, 0.5), 10_000, 3101).unwrap();
    let brute =
        evaluate_exposures(&evaluator, &state, &ProxyConfig::brute_force(), &PFE_LEVELS).unwrap();
    assert_eq!(brute.profile.reference_evals, 500_000);

    let mut max_rel = Vec::new();
    for n1 in [3usize, 4] {
        let run = evaluate_exposures(
            &evaluator,
            &state,
            &ProxyConfig::per_currency(n1, 1),
            &PFE_LEVELS,
        )
        .unwrap();
        assert_eq!(run.profile.per_sub_evals, vec![("EUR".to_string(), 50 * n1 as u64)]);
        assert_eq!(run.profile.evals_per_date, vec![n1 as u64; 50]);
        let errors = error_metrics(&brute.profile, &run.profile).unwrap();
        max_rel.push((n1, errors.ee.max_relative, errors.pfe[1].1.max_relative));
    }
    let (_, ee4, pfe4) = max_rel[1];
    assert!(ee4 <= 0.01, "EE max relative error at n1=4: {ee4}");
    assert!(pfe4 <= 0.01, "PFE_0.99 max relative error at n1=4: {pfe4}");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 300.0, "criterion 6 took {elapsed:?}");
    println!(
        "acceptance criterion 6 (1D reproduction; ledger 150/200 vs 500k; EE {ee4:.2e}, PFE99 {pfe4:.2e}, {elapsed:?}): PASS"
    );
}

#[test]
fn criterion_07_seven_factor_level_trend() {
    let start = Instant::now();
    let fx = seven_factor_fixture();
    let evaluator = PortfolioEvaluator::new(&fx.system, &fx.portfolio).unwrap();
    let mut ee_errors = Vec::new();
    for (mu, nodes, speedup) in [(1usize, 15u64, 1666u64), (2, 113, 221), (3, 589, 42)] {
        let run =
            evaluate_exposures(&evaluator, &fx.state, &ProxyConfig::full_grid(mu), &PFE_LEVELS)
                .unwrap();
        assert_eq!(run.profile.evals_per_date, vec![nodes; 75]);
        assert_eq!(run.profile.per_sub_evals, vec![("portfolio".to_string(), 75 * nodes)]);
        assert_eq!(run.profile.speedup_truncated(), speedup, "speed-up at mu={mu}");
        let errors = error_metrics(&fx.brute.profile, &run.profile).unwrap();
        ee_errors.push(errors.ee.mean_relative);
    }
    assert!(
        ee_errors[0] > ee_errors[1] && ee_errors[1] > ee_errors[2],
        "EE error not strictly decreasing: {ee_errors:?}"
    );
    assert!(ee_errors[1] < 0.2, "EE error at mu=2: {}", ee_errors[1]);
    assert!(ee_errors[2] < 0.05, "EE error at mu=3: {}", ee_errors[2]);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1800.0, "criterion 7 took {elapsed:?}");
    println!(
        "acceptance criterion 7 (7D level trend; EE errors {:.4}/{:.4}/{:.4}; counts 75x15/113/589; speed-ups 1666/221/42, {elapsed:?}): PASS",
        ee_errors[0], ee_errors[1], ee_errors[2]
    );
}

#[test]
fn criterion_08_divide_and_conquer() {
    let start = Instant::now();
    let fx = seven_factor_fixture();
    let evaluator = PortfolioEvaluator::new(&fx.system, &fx.portfolio).unwrap();
    let mut last_ee = 0.0;
    for n1 in 2usize..=6 {
        let run = evaluate_exposures(
            &evaluator,
            &fx.state,
            &ProxyConfig::per_currency(n1, 1),
            &PFE_LEVELS,
        )
        .unwrap();
        // 75 x n1 evaluations per sub-portfolio, one per currency.
        let want: Vec<(String, u64)> = ["EUR", "USD", "GBP", "PLN"]
            .iter()
            .map(|c| (c.to_string(), 75 * n1 as u64))
            .collect();
        assert_eq!(run.profile.per_sub_evals, want);
        assert_eq!(run.profile.speedup(), 25_000.0 / n1 as f64);
        let errors = error_metrics(&fx.brute.profile, &run.profile).unwrap();
        last_ee = errors.ee.mean_relative;
    }
    assert!(last_ee < 0.01, "EE error at n1=6: {last_ee}");

    // Sub-portfolio-sum identity: decomposed valuation reproduces the full
    // valuation bit for bit at sampled (date, path) states.
    let cache = evaluator.date_cache(fx.state.dates()[30]).unwrap();
    let n_factors = fx.state.factors().len();
    for p in [0usize, 117, 24_999] {
        let slices: Vec<&[f64]> =
            (0..n_factors).map(|f| fx.state.factor_values(30, f)).collect();
        let full = evaluator.full_value(&cache, |f| slices[f][p]).unwrap();
        let mut sum = evaluator.sub_value(&cache, 0, &[slices[0][p]]).unwrap();
        for (sub_idx, fx_idx, rate_idx) in [(1usize, 1usize, 4usize), (2, 2, 5), (3, 3, 6)] {
            sum += slices[fx_idx][p]
                * evaluator.sub_value(&cache, sub_idx, &[slices[rate_idx][p]]).unwrap();
        }
        assert_eq!(full.to_bits(), sum.to_bits(), "sub-sum identity at path {p}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 900.0, "criterion 8 took {elapsed:?}");
    println!(
        "acceptance criterion 8 (divide and conquer; EE error at n1=6 {last_ee:.2e}; counts 75 x n1 per sub; speed-up 25000/n1, {elapsed:?}): PASS"
    );
}

#[test]
fn criterion_09_two_factor_mixed_book_trend() {
    let start = Instant::now();
    let system = g2_multi_system();
    let portfolio = generate_portfolio(
        &GeneratorConfig {
            seed: 901,
            swaps_per_currency: 3,
            swaptions_per_currency: 2,
            notional_range: (1e5, 1e6),
            swaption_tenor_years: (1.0, 6.0),
            ..Default::default()
        },
        &system,
    );
    let n_swaptions = portfolio
        .trades
        .iter()
        .filter(|t| matches!(t, Trade::Swaption(_)))
        .count();
    assert_eq!(n_swaptions, 8, "balanced book carries swaptions in every currency");
    let evaluator = PortfolioEvaluator::new(&system, &portfolio).unwrap();
    let state = system.simulate(&equally_spaced(75, 0.2), 25_000, 909).unwrap();
    let brute =
        evaluate_exposures(&evaluator, &state, &ProxyConfig::brute_force(), &PFE_LEVELS).unwrap();
    let mut ee_errors = Vec::new();
    for (mu, nodes) in [(1usize, 5u64), (2, 13)] {
        let run = evaluate_exposures(
            &evaluator,
            &state,
            &ProxyConfig::per_currency(3, mu),
            &PFE_LEVELS,
        )
        .unwrap();
        assert_eq!(run.profile.evals_per_date, vec![nodes; 75]);
        let errors = error_metrics(&brute.profile, &run.profile).unwrap();
        ee_errors.push(errors.ee.mean_relative);
    }
    assert!(ee_errors[1] < ee_errors[0], "EE error not decreasing: {ee_errors:?}");
    assert!(ee_errors[1] < 0.1, "EE error at mu=2: {}", ee_errors[1]);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1800.0, "criterion 9 took {elapsed:?}");
    println!(
        "acceptance criterion 9 (two-factor mixed book; EE errors {:.4} -> {:.4}, {elapsed:?}): PASS",
        ee_errors[0], ee_errors[1]
    );
}

#[test]
fn criterion_10_determinism_across_thread_counts() {
    let start = Instant::now();
    let system = seven_factor_system();
    let portfolio = generate_portfolio(
        &GeneratorConfig { seed: 2201, swaps_per_currency: 8, ..Default::default() },
        &system,
    );
    let run_with = |threads: usize| -> (String, String) {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let state = system.simulate(&equally_spaced(75, 0.2), 25_000, 20_240).unwrap();
            let evaluator = PortfolioEvaluator::new(&system, &portfolio).unwrap();
            let brute =
                evaluate_exposures(&evaluator, &state, &ProxyConfig::brute_force(), &PFE_LEVELS)
                    .unwrap();
            let proxy =
                evaluate_exposures(&evaluator, &state, &ProxyConfig::full_grid(2), &PFE_LEVELS)
                    .unwrap();
            (profile_csv(&brute.profile), profile_csv(&proxy.profile))
        })
    };
    let (brute_a, proxy_a) = run_with(1);
    let (brute_b, proxy_b) = run_with(rayon::current_num_threads().max(2));
    assert_eq!(brute_a.as_bytes(), brute_b.as_bytes(), "brute-force CSVs differ");
    assert_eq!(proxy_a.as_bytes(), proxy_b.as_bytes(), "proxy CSVs differ");
    let elapsed = start.elapsed();
    println!("acceptance criterion 10 (byte-identical CSVs across thread counts, {elapsed:?}): PASS");
}

#[test]
fn criterion_11_property_suite() {
    // PFE monotone in the confidence level and EE non-negative.
    let system = SystemModel::HullWhiteSingle { currency: "EUR".into(), params: base_hw() };
    let portfolio = generate_portfolio(
        &GeneratorConfig { seed: 1101, swaps_per_currency: 10, ..Default::default() },
        &system,
    );
    let evaluator = PortfolioEvaluator::new(&system, &portfolio).unwrap();
    let state = system.simulate(&equally_spaced(20, 0.5), 4_000, 1111).unwrap();
    let run = evaluate_exposures(
        &evaluator,
        &state,
        &ProxyConfig::brute_force(),
        &[0.9, 0.95, 0.99],
    )
    .unwrap();
    for (k, row) in run.profile.pfe.iter().enumerate() {
        assert!(run.profile.ee[k] >= 0.0);
        assert!(row[0] <= row[1] && row[1] <= row[2], "PFE not monotone at date {k}");
    }

    // Payer plus receiver of the identical swap cancels exactly.
    let params = base_hw();
    let payer = SwapSpec::standard("EUR", 7.5e5, 0.0123, true, 0.0, 24, 0.5);
    let receiver = SwapSpec { payer: false, ..payer.clone() };
    let mut rng = StreamRng::new(77);
    for _ in 0..50 {
        let t = rng.uniform_in(0.0, 12.0);
        let r = rng.uniform_in(-0.02, 0.06);
        assert_eq!(
            swap_value_hw(&payer, &params, t, r) + swap_value_hw(&receiver, &params, t, r),
            0.0
        );
    }

    // A par-strike swap values to zero at inception.
    let times: Vec<f64> = (0..=20).map(|k| 0.5 * k as f64).collect();
    let par = sparse_exposure::instruments::par_rate(&params.curve, &times);
    let v = swap_value_hw(
        &SwapSpec { currency: "EUR".into(), notional: 1e6, fixed_rate: par, payer: true, times },
        &params,
        0.0,
        params.r0,
    );
    assert!(v.abs() <= 1e-10 * 1e6, "par swap value {v}");

    // Error-metric worked examples hold exactly.
    let m = series_errors(&[1.0, 2.0, 0.0], &[1.1, 1.8, 0.3]);
    assert!((m.mean_relative - 0.2 / 3.0).abs() < 1e-15);
    let f = [0.5, 1.0, 7.0];
    let g: Vec<f64> = f.iter().map(|x| 1.1 * x).collect();
    assert!((series_errors(&f, &g).mean_relative - 0.1).abs() < 1e-14);

    // Domain-box coverage fraction is close to 2 alpha - 1.
    let state = system.simulate(&[2.0], 50_000, 314).unwrap();
    for alpha in [0.8f64, 0.95] {
        let (bx, _) = domain_box_from_paths(&state, 0, &[0], alpha).unwrap();
        let rs = state.factor_values(0, 0);
        let inside = rs
            .iter()
            .filter(|&&r| r >= bx.lower()[0] && r <= bx.upper()[0])
            .count() as f64
            / rs.len() as f64;
        let want = 2.0 * alpha - 1.0;
        let se = (want * (1.0 - want) / rs.len() as f64).sqrt();
        assert!(
            (inside - want).abs() < 3.0 * se + 2.0 / rs.len() as f64,
            "coverage {inside} vs {want} at alpha={alpha}"
        );
    }

    // Extrema sanity retained from the unidimensional construction.
    assert_eq!(chebyshev_extrema(3).unwrap(), vec![-1.0, 0.0, 1.0]);
    println!("acceptance criterion 11 (property suite): PASS");
}
