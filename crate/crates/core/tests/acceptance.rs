//! Acceptance suite: one test per exit criterion, each printing a
//! `PASS criterion NN ...` line with the measured values. Run with
//! `cargo test -p batchlab-core --test acceptance -- --nocapture` to see
//! the lines.

use batchlab_core::suite::{run_suite, Suite};
use batchlab_core::sweep::{compare_algorithms, run_time_sweep, SweepSpec};
use batchlab_core::{
    exact, rng, simulate, stats, thresholds, zeta, Algorithm, Mode, OverlapDistribution,
    OverlapVector, Statistic,
};
use std::f64::consts::PI;
use std::time::Instant;

fn vector(vs: &[f64]) -> OverlapVector {
    OverlapVector::new(vs.to_vec()).unwrap()
}

fn report(no: u32, what: &str, detail: String, elapsed: f64, budget: f64) {
    println!("PASS criterion {no:02} {what}: {detail} ({elapsed:.2}s, budget {budget:.0}s)");
    assert!(
        elapsed < budget,
        "criterion {no} exceeded its runtime budget: {elapsed:.1}s >= {budget}s"
    );
}

#[test]
fn criterion_01_exact_engine_oracle_equivalence() {
    let start = Instant::now();
    let mut g = rng::stream(101, 0);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let n = 1 + g.below(12) as usize;
        let p = vector(&(0..n).map(|_| 0.95 * g.next_f64()).collect::<Vec<_>>());
        let series = exact::expected_time(&p, 1e-10).unwrap().expected_time;
        let subsets = exact::inclusion_exclusion_time(&p).unwrap();
        worst = worst.max((series - subsets).abs());
    }
    assert!(
        worst <= thresholds::EXACT_ORACLE_ABS_TOL,
        "worst gap {worst}"
    );
    report(
        1,
        "series vs inclusion-exclusion",
        format!("max |gap| = {worst:.3e} <= 1e-8 over 100 vectors"),
        start.elapsed().as_secs_f64(),
        10.0,
    );
}

#[test]
fn criterion_02_closed_form_identities() {
    let start = Instant::now();
    let tol = thresholds::IDENTITY_ABS_TOL;
    let t = exact::expected_time(&vector(&[0.5]), 1e-12).unwrap().expected_time;
    assert!((t - 2.0).abs() <= tol, "{t}");
    let t = exact::expected_time(&vector(&[0.5, 0.5]), 1e-12)
        .unwrap()
        .expected_time;
    assert!((t - 8.0 / 3.0).abs() <= tol, "{t}");
    let t = exact::inclusion_exclusion_time(&vector(&[0.5, 1.0 / 3.0])).unwrap();
    assert!((t - 2.3).abs() <= tol, "{t}");
    assert_eq!(exact::n_delta(&vector(&[0.5]), 0.1).unwrap(), 4);
    report(
        2,
        "closed-form identities",
        "T([1/2]) = 2, T([1/2,1/2]) = 8/3, T_ie([1/2,1/3]) = 2.3, N_0.1([1/2]) = 4".into(),
        start.elapsed().as_secs_f64(),
        10.0,
    );
}

#[test]
fn criterion_03_simulator_engine_agreement() {
    let start = Instant::now();
    let dist = OverlapDistribution::power(0.0).unwrap();
    let mut g = rng::stream(303, 0);
    let runs = 100_000u64;
    let mut worst_sigma = 0.0f64;
    let mut vectors = Vec::new();
    for trial in 0..20u64 {
        let n = 1 + g.below(50) as usize;
        let p = vector(&(0..n).map(|_| 0.95 * g.next_f64()).collect::<Vec<_>>());
        let exact_t = exact::expected_time(&p, 1e-10).unwrap().expected_time;
        let set = simulate::run_ensemble(
            Algorithm::Batch,
            Mode::Quenched,
            &dist,
            n,
            runs,
            7000 + trial,
            Some(&p),
        )
        .unwrap();
        let s: Vec<f64> = set.samples.iter().map(|&w| w as f64).collect();
        let sigma = (stats::mean(&s) - exact_t).abs() / stats::standard_error(&s);
        worst_sigma = worst_sigma.max(sigma);
        vectors.push(p);
    }
    assert!(
        worst_sigma <= thresholds::SIM_ENGINE_SE_FACTOR,
        "worst deviation {worst_sigma} standard errors"
    );

    // Empirical CDF of the batch time against the learned-probability curve.
    let mut worst_dkw = 0.0f64;
    for (i, p) in vectors.iter().take(3).enumerate() {
        let set = simulate::run_ensemble(
            Algorithm::Batch,
            Mode::Quenched,
            &dist,
            p.len(),
            runs,
            7100 + i as u64,
            Some(p),
        )
        .unwrap();
        let kmax = *set.samples.iter().max().unwrap();
        let mut counts = vec![0u64; (kmax + 1) as usize];
        for &w in &set.samples {
            counts[w as usize] += 1;
        }
        let mut cum = 0u64;
        for (k, &c) in counts.iter().enumerate() {
            cum += c;
            let emp = cum as f64 / runs as f64;
            let model = exact::learned_probability(p, k as u64);
            worst_dkw = worst_dkw.max((emp - model).abs());
        }
    }
    assert!(worst_dkw <= thresholds::DKW_BAND, "sup CDF gap {worst_dkw}");
    report(
        3,
        "batch simulator vs exact engine",
        format!("max deviation {worst_sigma:.2} SE (<= 4), sup CDF gap {worst_dkw:.4} (<= 0.01)"),
        start.elapsed().as_secs_f64(),
        60.0,
    );
}

#[test]
fn criterion_04_moment_zeta_values() {
    let start = Instant::now();
    let uniform = OverlapDistribution::power(0.0).unwrap();
    let linear = OverlapDistribution::power(1.0).unwrap();
    let tol = thresholds::ZETA_ABS_TOL;

    let z = zeta::zeta(&uniform, 2.0, 1e-9).unwrap();
    let basel = PI * PI / 6.0 - 1.0;
    assert!((z.value - basel).abs() <= tol, "{} vs {basel}", z.value);

    let z1 = zeta::zeta(&linear, 1.0, 1e-9).unwrap();
    assert!((z1.value - 1.0).abs() <= tol, "{}", z1.value);

    let mc = zeta::zeta_lemma_check(&uniform, 2, 1_000_000, 404).unwrap();
    assert!(
        (mc - PI * PI / 6.0).abs() <= thresholds::ZETA_LEMMA_MC_TOL,
        "{mc}"
    );
    report(
        4,
        "moment zeta spot values",
        format!(
            "zeta(beta=0, s=2) = {:.9} (pi^2/6-1), zeta(beta=1, s=1) = {:.9}, MC lemma = {:.4}",
            z.value, z1.value, mc
        ),
        start.elapsed().as_secs_f64(),
        30.0,
    );
}

#[test]
fn criterion_05_t1_desk_scale() {
    let start = Instant::now();
    let linear = OverlapDistribution::power(1.0).unwrap();
    let limit = (2.0 * PI).sqrt();
    let ratio = zeta::annealed_time(&linear, 1_000_000, 1e-8).unwrap() / 1000.0;
    let gap = (ratio - limit).abs() / limit;
    assert!(gap <= thresholds::T1_DESK_REL_TOL, "ratio {ratio}");

    let mut worst_rel = 0.0f64;
    for n in 1..=40u64 {
        let direct = zeta::annealed_time(&linear, n, 1e-9).unwrap();
        let alternating = zeta::annealed_time_alternating(&linear, n).unwrap();
        worst_rel = worst_rel.max((direct - alternating).abs() / direct);
    }
    assert!(
        worst_rel <= thresholds::ALTERNATING_REL_TOL,
        "alternating gap {worst_rel}"
    );
    report(
        5,
        "sublinear-regime limit",
        format!(
            "annealed/sqrt(n) = {ratio:.5} vs sqrt(2 pi) = {limit:.5} (gap {:.2}%), \
             alternating form agrees to {worst_rel:.1e}",
            100.0 * gap
        ),
        start.elapsed().as_secs_f64(),
        30.0,
    );
}

#[test]
fn criterion_06_alpha1_n_log_n_correction() {
    let start = Instant::now();
    let rep = run_suite(Suite::Alpha1, 606).unwrap();
    for line in rep.lines() {
        println!("  {line}");
    }
    assert!(rep.passed, "{:#?}", rep.lines());
    report(
        6,
        "uniform-family n ln n correction",
        format!(
            "-T2/(n ln n) at 2^14..2^16 = [{}]",
            rep.reports[0]
                .rows
                .iter()
                .map(|r| format!("{:.4}", r.value))
                .collect::<Vec<_>>()
                .join(", ")
        ),
        start.elapsed().as_secs_f64(),
        30.0,
    );
}

#[test]
fn criterion_07_expmin_and_weibull_limits() {
    let start = Instant::now();
    let expmin = run_suite(Suite::Expmin, 707).unwrap();
    for line in expmin.lines() {
        println!("  {line}");
    }
    assert!(expmin.passed, "{:#?}", expmin.lines());
    let weibull = run_suite(Suite::Weibull, 707).unwrap();
    for line in weibull.lines() {
        println!("  {line}");
    }
    assert!(weibull.passed, "{:#?}", weibull.lines());
    let scaled0 = expmin.reports[0].rows.last().unwrap().value;
    let scaled1 = expmin.reports[1].rows.last().unwrap().value;
    report(
        7,
        "extreme-value limits",
        format!(
            "n E[min q] (beta=0) = {scaled0:.4} -> 1, sqrt(n) E[min q] (beta=1) = {scaled1:.4} \
             -> {:.4}; KS = {:.4}/{:.4}",
            (PI).sqrt() / 2.0,
            weibull.reports[0].rows[0].value,
            weibull.reports[0].rows[1].value,
        ),
        start.elapsed().as_secs_f64(),
        60.0,
    );
}

#[test]
fn criterion_08_batchthm_exponents() {
    let start = Instant::now();
    let rep = run_suite(Suite::Batchthm, 808).unwrap();
    for line in rep.lines() {
        println!("  {line}");
    }
    assert!(rep.passed, "{:#?}", rep.lines());
    let exps: Vec<String> = rep
        .reports
        .iter()
        .map(|r| format!("{:.3}", r.fit.as_ref().unwrap().exponent))
        .collect();
    report(
        8,
        "batch N_Delta exponents",
        format!(
            "fitted exponents (beta = 0, 1, -0.5): {} (targets 1, 0.5, 2)",
            exps.join(", ")
        ),
        start.elapsed().as_secs_f64(),
        300.0,
    );
}

#[test]
fn criterion_09_mainprev_bands() {
    let start = Instant::now();
    let rep = run_suite(Suite::Mainprev, 909).unwrap();
    for line in rep.lines() {
        println!("  {line}");
    }
    assert!(rep.passed, "{:#?}", rep.lines());
    report(
        9,
        "guessing-learner bands",
        format!(
            "beta=0 n ln n spreads: ml {:.2}, fm {:.2} (<= 3); beta=1 exponents: ml {:.3}, fm {:.3}",
            rep.reports[0].checks[0].measured,
            rep.reports[1].checks[0].measured,
            rep.reports[2].fit.as_ref().unwrap().exponent,
            rep.reports[3].fit.as_ref().unwrap().exponent,
        ),
        start.elapsed().as_secs_f64(),
        600.0,
    );
}

#[test]
fn criterion_10_algorithm_comparison() {
    let start = Instant::now();
    let grid: Vec<u64> = (8..=13).map(|e| 1u64 << e).collect();
    let sublinear = compare_algorithms(1.0, 0.1, &grid, 400, 400, 1010).unwrap();
    for c in &sublinear.checks {
        println!("  {}", c.line());
    }
    assert!(sublinear.passed(), "{:#?}", sublinear.checks);
    let uniform = compare_algorithms(0.0, 0.1, &grid, 400, 400, 1010).unwrap();
    for c in &uniform.checks {
        println!("  {}", c.line());
    }
    assert!(uniform.passed(), "{:#?}", uniform.checks);
    report(
        10,
        "batch vs competitors",
        format!(
            "beta=1 worst batch/other ratio = {:.3} (< 1); beta=0 worst adjacent \
             batch/full-memory ratio step = {:.3} (< 1)",
            sublinear.checks[0].measured, uniform.checks[0].measured
        ),
        start.elapsed().as_secs_f64(),
        300.0,
    );
}

#[test]
fn criterion_11_byte_identical_reproducibility() {
    let start = Instant::now();
    let spec = SweepSpec {
        algorithm: Algorithm::Batch,
        mode: Mode::Annealed,
        beta: 1.0,
        support_max: 1.0,
        n_grid: vec![64, 128, 256, 512],
        runs_per_n: 2000,
        delta: 0.1,
        seed: 1111,
        statistic: Statistic::Median,
    };
    let pool1 = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let pool8 = rayon::ThreadPoolBuilder::new()
        .num_threads(8)
        .build()
        .unwrap();

    let sweep1 = pool1.install(|| run_time_sweep(&spec)).unwrap();
    let sweep8 = pool8.install(|| run_time_sweep(&spec)).unwrap();
    let sweep8b = pool8.install(|| run_time_sweep(&spec)).unwrap();
    assert_eq!(sweep1.to_json(), sweep8.to_json());
    assert_eq!(sweep1.rows_csv(), sweep8.rows_csv());
    assert_eq!(sweep8.to_json(), sweep8b.to_json());

    let grid = [64u64, 128, 256, 512];
    let cmp1 = pool1.install(|| compare_algorithms(1.0, 0.1, &grid, 50, 50, 22)).unwrap();
    let cmp8 = pool8.install(|| compare_algorithms(1.0, 0.1, &grid, 50, 50, 22)).unwrap();
    assert_eq!(cmp1.to_json(), cmp8.to_json());

    let s1 = pool1.install(|| run_suite(Suite::Weibull, 33)).unwrap();
    let s8 = pool8.install(|| run_suite(Suite::Weibull, 33)).unwrap();
    assert_eq!(s1.to_json(), s8.to_json());
    report(
        11,
        "reproducibility",
        "sweep, compare, and suite outputs byte-identical under 1 and 8 workers".into(),
        start.elapsed().as_secs_f64(),
        120.0,
    );
}
