use micropolar::field::SpectralField;
use micropolar::grid::Grid;
use micropolar::lp::DyadicPartition;
use micropolar::random::SpectrumProfile;
use micropolar::solver::*;
use micropolar::verify::*;
use micropolar::{Error, PhysicalParams, State, TheoremMode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn config(n: usize, horizon: f64, dt: f64) -> SolverConfig {
    let p = PhysicalParams {
        nu: 1.0,
        k: 0.1,
        gamma: 1.0,
        alpha: 1.0,
        beta: 1.0,
    };
    SolverConfig::new(Grid::new(2, n).unwrap(), p, TheoremMode::Theorem1, horizon, dt)
}

fn zeros(g: Grid) -> (SpectralField, SpectralField) {
    let s = State::zeros(g);
    (s.u, s.w)
}

#[test]
fn cauchy_report_basics() {
    let cfg = config(16, 0.02, 1e-3);
    let g = cfg.grid().unwrap();
    let (u0, w0) = single_mode_data(g, 1e-3);
    let seed = seed_iterate(&u0, &w0, &cfg).unwrap();
    let r = cauchy_report(&[seed.clone(), seed.clone()]).unwrap();
    assert_eq!(r.diffs, vec![0.0]);
    assert!(matches!(cauchy_report(&[seed]), Err(Error::InsufficientData(_))));

    let (z, zw) = zeros(g);
    let run = run_picard(&z, &zw, &cfg).unwrap();
    assert!(cauchy_report(&run.iterates).unwrap().diffs.iter().all(|&d| d == 0.0));

    let cfg = config(32, 0.1, 1e-3);
    let (u0, w0) = single_mode_data(cfg.grid().unwrap(), 1e-3);
    let run = run_picard(&u0, &w0, &cfg).unwrap();
    let r = cauchy_report(&run.iterates).unwrap();
    assert_eq!(r.diffs, run.diffs);
    assert!(r.ratio < 1.0, "ratio {}", r.ratio);
}

#[test]
fn gronwall_matches_analytic_integral() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let terms: Vec<(f64, f64, f64)> = (0..4)
        .map(|_| (rng.gen_range(0.0..2.0), rng.gen_range(0.5..6.0), rng.gen_range(0.0..std::f64::consts::TAU)))
        .collect();
    let c = |t: f64| -> f64 { terms.iter().map(|(a, w, p)| a * (1.0 + (w * t + p).sin())).sum() };
    let integral = |t: f64| -> f64 {
        terms
            .iter()
            .map(|(a, w, p)| a * (t - ((w * t + p).cos() - p.cos()) / w))
            .sum()
    };
    let times: Vec<f64> = (0..=10_000).map(|i| i as f64 * 1e-4).collect();
    let rate: Vec<f64> = times.iter().map(|&t| c(t)).collect();
    let b = gronwall_envelope(&times, &rate, 0.3).unwrap();
    for (t, bi) in times.iter().zip(&b) {
        let exact = 0.3 * integral(*t).exp();
        assert!((bi - exact).abs() <= 1e-8 * exact);
    }
}

#[test]
fn gronwall_is_monotone_in_data_and_rate() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let times: Vec<f64> = (0..50).map(|i| i as f64 * 0.02).collect();
    let low: Vec<f64> = (0..50).map(|_| rng.gen_range(0.0..1.0)).collect();
    let high: Vec<f64> = low.iter().map(|x| x + rng.gen_range(0.0..1.0)).collect();
    let a = gronwall_envelope(&times, &low, 1.0).unwrap();
    let b = gronwall_envelope(&times, &high, 1.0).unwrap();
    let c = gronwall_envelope(&times, &low, 2.0).unwrap();
    for i in 0..50 {
        assert!(a[i] <= b[i] && a[i] <= c[i]);
    }
    for pair in a.windows(2) {
        assert!(pair[1] >= pair[0]);
    }
}

#[test]
fn zero_perturbation_gives_identical_twins() {
    let cfg = config(16, 0.05, 1e-3);
    let (u0, w0) = random_data(cfg.grid().unwrap(), &SpectrumProfile { amplitude: 0.1, ..Default::default() }, 1);
    let r = uniqueness_experiment(&u0, &w0, 0.0, &cfg, 5, None).unwrap();
    assert!(r.twins_identical);
    assert!(r.series.observed.iter().all(|&d| d == 0.0));
    assert!(r.series.valid());
}

#[test]
fn pure_dissipation_never_grows_the_difference() {
    let mut cfg = config(16, 0.1, 1e-3);
    cfg.disable_advection = true;
    cfg.disable_coupling = true;
    let (u0, w0) = random_data(cfg.grid().unwrap(), &SpectrumProfile::default(), 2);
    let r = uniqueness_experiment(&u0, &w0, 1e-6, &cfg, 7, None).unwrap();
    assert!(r.raw_rate.iter().all(|&c| c == 0.0));
    for pair in r.series.observed.windows(2) {
        assert!(pair[1] <= pair[0]);
    }
    assert!(r.series.bound.iter().all(|&b| b == r.series.bound[0]));
    assert!(r.series.valid());
}

#[test]
fn small_perturbation_stays_inside_the_envelope() {
    let cfg = config(32, 0.1, 1e-3);
    let (u0, w0) = random_data(cfg.grid().unwrap(), &SpectrumProfile { amplitude: 1e-2, ..Default::default() }, 3);
    let r = uniqueness_experiment(&u0, &w0, 1e-6, &cfg, 8, None).unwrap();
    assert!(r.c.is_finite());
    assert!(r.series.valid());
    let growth = r.series.observed.last().unwrap() / r.series.observed[0];
    let integral: f64 = r.series.rate.windows(2).zip(r.series.times.windows(2))
        .map(|(c, t)| 0.5 * (c[0] + c[1]) * (t[1] - t[0]))
        .sum();
    assert!(growth.is_finite());
    assert!(growth <= integral.exp() * (1.0 + r.series.slack));
}

#[test]
fn energy_of_zero_trajectory_balances_exactly() {
    let cfg = config(16, 0.02, 1e-3);
    let (u0, w0) = zeros(cfg.grid().unwrap());
    let tr = direct_solve(&u0, &w0, &cfg).unwrap();
    let a = energy_audit(&tr, &cfg).unwrap();
    assert!(a.residual.iter().all(|&r| r == 0.0));
}

#[test]
fn energy_residual_is_second_order_without_advection() {
    let mut cfg = config(16, 0.1, 1e-2);
    cfg.disable_advection = true;
    let (u0, w0) = random_data(cfg.grid().unwrap(), &SpectrumProfile::default(), 4);
    let coarse = energy_audit(&direct_solve(&u0, &w0, &cfg).unwrap(), &cfg).unwrap();
    let fine_cfg = cfg.with_dt(5e-3);
    let fine = energy_audit(&direct_solve(&u0, &w0, &fine_cfg).unwrap(), &fine_cfg).unwrap();
    let ratio = coarse.max_abs_residual / fine.max_abs_residual;
    assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
}

#[test]
fn coupling_work_vanishes_without_coupling_constant() {
    let mut cfg = config(16, 0.02, 1e-3);
    cfg.params.k = 0.0;
    let (u0, w0) = random_data(cfg.grid().unwrap(), &SpectrumProfile::default(), 4);
    let a = energy_audit(&direct_solve(&u0, &w0, &cfg).unwrap(), &cfg).unwrap();
    assert!(a.coupling_work.iter().all(|&w| w == 0.0));
}

#[test]
fn full_run_balances_energy() {
    let cfg = config(32, 0.1, 1e-3);
    let smooth = SpectrumProfile {
        exponent: 1.0,
        cutoff: 2.0,
        amplitude: 0.1,
    };
    let (u0, w0) = random_data(cfg.grid().unwrap(), &smooth, 6);
    let a = energy_audit(&direct_solve(&u0, &w0, &cfg).unwrap(), &cfg).unwrap();
    assert!(a.max_abs_residual <= 1e-6, "residual {}", a.max_abs_residual);
}

#[test]
fn apriori_monitor_cases() {
    let cfg = config(32, 0.1, 1e-3);
    let g = cfg.grid().unwrap();
    let (z, zw) = zeros(g);
    let bounds = YBounds {
        m: 1.0,
        delta: 0.25,
        horizon: 0.1,
    };
    let zero = direct_solve(&z, &zw, &cfg).unwrap();
    let r = apriori_monitor(&zero, &bounds, &cfg.params, cfg.mode);
    assert!(r.passes());
    assert_eq!(r.margins, [1.0, 1.0, 0.25, 0.25]);

    let (u0, w0) = single_mode_data(g, 1e-3);
    let choice = select_parameters(&u0, &w0, &cfg).unwrap();
    let run_cfg = cfg.with_horizon(choice.bounds.horizon);
    let run = run_picard(&u0, &w0, &run_cfg).unwrap();
    assert!(run.converged);
    for it in &run.iterates {
        assert!(apriori_monitor(it, &choice.bounds, &cfg.params, cfg.mode).passes());
    }

    let big = run_picard(&u0.scale(1000.0), &w0.scale(1000.0), &run_cfg).unwrap();
    let r = apriori_monitor(big.final_iterate(), &choice.bounds, &cfg.params, cfg.mode);
    assert!(!r.passes());
}

#[test]
fn block_terms_are_finite_and_nonnegative() {
    let cfg = config(16, 0.02, 1e-3);
    let g = cfg.grid().unwrap();
    let (u0, w0) = single_mode_data(g, 1e-3);
    let run = run_picard(&u0, &w0, &cfg).unwrap();
    let p = DyadicPartition::build(g).unwrap();
    let n = run.iterates.len();
    let blocks = block_terms(&p, &run.iterates[n - 1], &run.iterates[n - 2]).unwrap();
    assert_eq!(blocks.len(), p.block_count());
    for b in &blocks {
        assert!(b.j_terms.iter().chain(&b.k_terms).all(|x| x.is_finite() && *x >= 0.0));
    }
    // data in blocks -1 and 0 only
    assert!(blocks[1].j_terms[3] > 0.0);
    assert!(blocks.last().unwrap().j_terms[3] <= 1e-20 * blocks[1].j_terms[3]);
}
