use micropolar::field::SpectralField;
use micropolar::grid::Grid;
use micropolar::lp::{besov_norm, BesovIndex, DyadicPartition};
use micropolar::random::SpectrumProfile;
use micropolar::solver::integrator::ExplicitTerms;
use micropolar::solver::*;
use micropolar::{Error, PhysicalParams, State, TheoremMode};
use rustfft::num_complex::Complex64;

fn params(beta: f64) -> PhysicalParams {
    PhysicalParams {
        nu: 1.0,
        k: 0.1,
        gamma: 1.0,
        alpha: 1.0,
        beta,
    }
}

fn config(n: usize, horizon: f64, dt: f64) -> SolverConfig {
    SolverConfig::new(Grid::new(2, n).unwrap(), params(1.0), TheoremMode::Theorem1, horizon, dt)
}

fn zero_data(g: Grid) -> (SpectralField, SpectralField) {
    let s = State::zeros(g);
    (s.u, s.w)
}

#[test]
fn picard_on_zero_data_stays_zero() {
    let cfg = config(16, 0.02, 1e-3);
    let (u0, w0) = zero_data(cfg.grid().unwrap());
    let run = run_picard(&u0, &w0, &cfg).unwrap();
    assert!(run.converged);
    assert_eq!(run.iterates.len(), 2);
    assert!(run.diffs.iter().all(|&d| d == 0.0));
    for it in &run.iterates {
        assert!(it.states().iter().all(|s| s.energy_sq() == 0.0));
    }
}

#[test]
fn without_coupling_velocity_iterates_ignore_microrotation() {
    let mut cfg = config(16, 0.02, 1e-3);
    cfg.params.k = 0.0;
    cfg.max_picard_iters = 4;
    let g = cfg.grid().unwrap();
    let (u0, w0) = random_data(g, &SpectrumProfile { amplitude: 0.1, ..Default::default() }, 3);
    let zero_w = SpectralField::zeros(g, 1);
    let a = run_picard(&u0, &w0, &cfg).unwrap();
    let b = run_picard(&u0, &zero_w, &cfg).unwrap();
    for (x, y) in a.iterates.iter().zip(&b.iterates) {
        for (s, t) in x.states().iter().zip(y.states()) {
            assert_eq!(s.u, t.u);
        }
    }
}

fn rk4_oracle(cfg: &SolverConfig, frozen: &State, start: &State, dt: f64, substeps: usize) -> State {
    let rates = LinearRates::new(&cfg.grid().unwrap(), &cfg.params, cfg.mode).unwrap();
    let terms = ExplicitTerms::from_config(cfg);
    let f = |s: &State| -> (SpectralField, SpectralField) {
        let (nu, nw) = terms.evaluate(&frozen.u, frozen, s).unwrap();
        let lu = s.u.map_coeffs(|i, _, z| -rates.u[i] * z);
        let lw = s.w.map_coeffs(|i, _, z| -rates.w[i] * z);
        (&nu + &lu, &nw + &lw)
    };
    let h = dt / substeps as f64;
    let mut s = start.clone();
    for _ in 0..substeps {
        let shift = |s: &State, k: &(SpectralField, SpectralField), c: f64| State {
            u: s.u.axpy(c, &k.0).unwrap(),
            w: s.w.axpy(c, &k.1).unwrap(),
            t: s.t,
        };
        let k1 = f(&s);
        let k2 = f(&shift(&s, &k1, h / 2.0));
        let k3 = f(&shift(&s, &k2, h / 2.0));
        let k4 = f(&shift(&s, &k3, h));
        let u = s.u.axpy(h / 6.0, &k1.0).unwrap().axpy(h / 3.0, &k2.0).unwrap();
        let u = u.axpy(h / 3.0, &k3.0).unwrap().axpy(h / 6.0, &k4.0).unwrap();
        let w = s.w.axpy(h / 6.0, &k1.1).unwrap().axpy(h / 3.0, &k2.1).unwrap();
        let w = w.axpy(h / 3.0, &k3.1).unwrap().axpy(h / 6.0, &k4.1).unwrap();
        s = State { u, w, t: s.t + h };
    }
    s
}

fn one_step_error(dt: f64, amplitude: f64) -> (f64, f64) {
    let cfg = config(32, dt, dt);
    let g = cfg.grid().unwrap();
    let (u0, w0) = single_mode_data(g, amplitude);
    let seed = seed_iterate(&u0, &w0, &cfg).unwrap();
    let next = picard_step(&seed, &u0, &w0, 1, &cfg).unwrap();
    let oracle = |m| rk4_oracle(&cfg, seed.first(), seed.first(), dt, m);
    let (a, b) = (oracle(100), oracle(200));
    // Richardson on the fourth-order oracle
    let u = &b.u + &(&b.u - &a.u).scale(1.0 / 15.0);
    let w = &b.w + &(&b.w - &a.w).scale(1.0 / 15.0);
    let got = next.last();
    let err = (&got.u - &u).l2_norm() + (&got.w - &w).l2_norm();
    (err, u0.l2_norm() + w0.l2_norm())
}

#[test]
fn picard_step_matches_duhamel_oracle() {
    let (err, size) = one_step_error(1e-3, 1e-3);
    assert!(err <= 1e-6 * size, "err {err:e}");
    let (e1, _) = one_step_error(0.02, 1.0);
    let (e2, _) = one_step_error(0.01, 1.0);
    assert!(e1 / e2 > 6.0, "local order ratio {}", e1 / e2);
}

#[test]
fn picard_contracts_on_small_single_mode_data() {
    let cfg = config(32, 0.1, 1e-3);
    let (u0, w0) = single_mode_data(cfg.grid().unwrap(), 1e-3);
    let run = run_picard(&u0, &w0, &cfg).unwrap();
    assert!(run.converged, "diffs {:?}", run.diffs);
    for pair in run.diffs.windows(2).skip(2) {
        assert!(pair[1] <= 0.5 * pair[0], "diffs {:?}", run.diffs);
    }
    for it in &run.iterates {
        assert!(it.max_divergence() <= 1e-10);
    }
}

#[test]
fn shorter_horizon_never_increases_iterate_differences() {
    let mut cfg = config(32, 0.1, 1e-3);
    cfg.max_picard_iters = 6;
    cfg.cauchy_tol = 1e-30;
    let (u0, w0) = single_mode_data(cfg.grid().unwrap(), 1e-3);
    let long = run_picard(&u0, &w0, &cfg).unwrap();
    let short = run_picard(&u0, &w0, &cfg.with_horizon(0.05)).unwrap();
    for (a, b) in short.diffs.iter().zip(&long.diffs) {
        assert!(a <= b, "short {:?} long {:?}", short.diffs, long.diffs);
    }
}

#[test]
fn picard_rejects_mismatched_horizon() {
    let cfg = config(16, 0.02, 1e-3);
    let (u0, w0) = single_mode_data(cfg.grid().unwrap(), 1e-3);
    let seed = seed_iterate(&u0, &w0, &cfg).unwrap();
    let r = picard_step(&seed, &u0, &w0, 1, &cfg.with_horizon(0.03));
    assert!(matches!(r, Err(Error::Config(_))));
}

#[test]
fn direct_solve_of_zero_data_is_zero() {
    let cfg = config(16, 0.02, 1e-3);
    let (u0, w0) = zero_data(cfg.grid().unwrap());
    let tr = direct_solve(&u0, &w0, &cfg).unwrap();
    assert_eq!(tr.len(), 21);
    assert!(tr.states().iter().all(|s| s.energy_sq() == 0.0));
}

#[test]
fn heat_limit_decays_exactly() {
    let mut cfg = config(16, 0.1, 1e-2);
    cfg.disable_advection = true;
    cfg.disable_coupling = true;
    let g = cfg.grid().unwrap();
    let (u0, w0) = random_data(g, &SpectrumProfile::default(), 9);
    let tr = direct_solve(&u0, &w0, &cfg).unwrap();
    let p = cfg.params;
    for s in tr.states() {
        let u = u0.map_coeffs(|i, _, z| {
            let m = g.mode(i);
            z * (-(p.nu + p.k) * m.norm * m.norm * s.t).exp()
        });
        let w = w0.map_coeffs(|i, _, z| {
            let m = g.mode(i);
            z * (-(p.gamma * m.norm * m.norm + 4.0 * p.k) * s.t).exp()
        });
        assert!((&s.u - &u).max_abs_coeff() < 1e-10);
        assert!((&s.w - &w).max_abs_coeff() < 1e-10);
    }
}

#[test]
fn direct_solve_is_second_order() {
    let cfg = config(16, 0.2, 0.02);
    let g = cfg.grid().unwrap();
    let (u0, w0) = random_data(g, &SpectrumProfile { amplitude: 1.0, ..Default::default() }, 4);
    let finals: Vec<State> = [0.02, 0.01, 0.005]
        .iter()
        .map(|&dt| direct_solve(&u0, &w0, &cfg.with_dt(dt)).unwrap().last().clone())
        .collect();
    let e = |a: &State, b: &State| {
        let (x, y) = a.distance(b);
        x + y
    };
    let ratio = e(&finals[0], &finals[1]) / e(&finals[1], &finals[2]);
    assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
}

#[test]
fn direct_solve_keeps_velocity_solenoidal_and_respects_stride() {
    let mut cfg = config(16, 0.05, 1e-3);
    cfg.store_stride = 7;
    let g = cfg.grid().unwrap();
    let (u0, w0) = random_data(g, &SpectrumProfile { amplitude: 2.0, ..Default::default() }, 5);
    let tr = direct_solve(&u0, &w0, &cfg).unwrap();
    assert_eq!(tr.len(), cfg.stored_steps().len());
    assert!((tr.horizon() - 0.05).abs() < 1e-15);
    assert!(tr.max_divergence() <= 1e-10);
}

#[test]
fn direct_solve_decouples_when_k_vanishes() {
    let mut cfg = config(16, 0.02, 1e-3);
    cfg.params.k = 0.0;
    let g = cfg.grid().unwrap();
    let (u0, w0) = random_data(g, &SpectrumProfile::default(), 6);
    let a = direct_solve(&u0, &w0, &cfg).unwrap();
    let b = direct_solve(&u0, &SpectralField::zeros(g, 1), &cfg).unwrap();
    for (s, t) in a.states().iter().zip(b.states()) {
        assert_eq!(s.u, t.u);
    }
}

#[test]
fn direct_solve_rejects_bad_data() {
    let cfg = config(16, 0.02, 1e-3);
    let g = cfg.grid().unwrap();
    let u = SpectralField::from_fn(g, 2, |x| vec![x[0].sin(), 0.0]);
    let w = SpectralField::zeros(g, 1);
    assert!(matches!(direct_solve(&u, &w, &cfg), Err(Error::Contract(_))));
    let mut aliased = SpectralField::zeros(g, 2);
    aliased.set_real_mode(0, &[0, 7], Complex64::new(1.0, 0.0));
    assert!(matches!(direct_solve(&aliased, &w, &cfg), Err(Error::Contract(_))));
}

#[test]
fn direct_solve_reports_blow_up_time() {
    let mut cfg = config(16, 1.0, 0.5);
    cfg.exploratory = true;
    cfg.params.nu = -1e3;
    cfg.params.k = 0.0;
    let g = cfg.grid().unwrap();
    let (u0, w0) = random_data(g, &SpectrumProfile::default(), 1);
    match direct_solve(&u0, &w0, &cfg) {
        Err(Error::Config(_)) => {}
        other => panic!("expected rejection of negative viscosity, got {other:?}"),
    }
    let mut cfg = config(16, 1.0, 0.25);
    cfg.params.k = 0.0;
    let (u0, w0) = random_data(g, &SpectrumProfile { amplitude: 1e150, ..Default::default() }, 1);
    match direct_solve(&u0, &w0, &cfg) {
        Err(Error::Divergence { time, .. }) => assert!(time > 0.0 && time <= 1.0),
        other => panic!("expected divergence, got {other:?}"),
    }
}

#[test]
fn y_norms_of_simple_trajectories() {
    let cfg = config(32, 0.1, 1e-2);
    let g = cfg.grid().unwrap();
    let (z0, zw) = zero_data(g);
    let zero = direct_solve(&z0, &zw, &cfg).unwrap();
    let y = compute_y_norms(&zero, &cfg.params, cfg.mode);
    assert_eq!((y.u_sup, y.w_sup, y.u_int, y.w_int), (0.0, 0.0, 0.0, 0.0));

    let (u0, w0) = single_mode_data(g, 1e-3);
    let seed = seed_iterate(&u0, &w0, &cfg).unwrap();
    let y = compute_y_norms(&seed, &cfg.params, cfg.mode);
    let partition = DyadicPartition::build(g).unwrap();
    let smooth = besov_norm(&partition, &seed.first().u, BesovIndex::l2_sum(2.0)).unwrap();
    assert!((y.u_int - 0.1 * smooth).abs() < 1e-15 * smooth);

    let mut heat = cfg.clone();
    heat.disable_advection = true;
    heat.disable_coupling = true;
    let tr = direct_solve(&u0, &w0, &heat).unwrap();
    let y = compute_y_norms(&tr, &heat.params, heat.mode);
    let at_zero = besov_norm(&partition, &u0, BesovIndex::l2_sum(0.0)).unwrap();
    assert_eq!(y.u_sup, at_zero);
}

#[test]
fn select_parameters_on_zero_data_flags() {
    let cfg = config(16, 0.1, 1e-3);
    let (u0, w0) = zero_data(cfg.grid().unwrap());
    let p = select_parameters(&u0, &w0, &cfg).unwrap();
    assert!(p.zero_data);
    assert_eq!(p.bounds.m, 0.0);
    assert_eq!(p.bounds.horizon, 0.1);
}

#[test]
fn select_parameters_budget_matches_norm_oracle() {
    let cfg = config(32, 0.1, 1e-3);
    let g = cfg.grid().unwrap();
    let a = 1e-3;
    let (u0, w0) = single_mode_data(g, a);
    let p = select_parameters(&u0, &w0, &cfg).unwrap();
    let partition = DyadicPartition::build(g).unwrap();
    let m = 2.0
        * (besov_norm(&partition, &u0, BesovIndex::l2_sum(0.0)).unwrap()
            + besov_norm(&partition, &w0, BesovIndex::l2_sum(0.0)).unwrap());
    assert!((p.bounds.m - m).abs() <= 1e-15 * m);
    assert!((p.bounds.delta - m / 4.0).abs() <= 1e-15 * m);
    assert!(p.bounds.horizon <= 0.1);
    assert!(p.seed_velocity <= p.bounds.delta);
    assert!(p.tail <= p.bounds.delta / 4.0);

    let doubled = select_parameters(&u0.scale(2.0), &w0.scale(2.0), &cfg).unwrap();
    assert_eq!(doubled.bounds.m, 2.0 * p.bounds.m);
}

#[test]
fn select_parameters_reports_no_admissible_horizon() {
    let mut cfg = config(32, 0.1, 1e-2);
    cfg.c_fit = 1e9;
    let (u0, w0) = single_mode_data(cfg.grid().unwrap(), 1.0);
    assert!(matches!(select_parameters(&u0, &w0, &cfg), Err(Error::Config(_))));
}

#[test]
fn theorem2_picard_converges() {
    let mut cfg = config(32, 0.1, 1e-3);
    cfg.mode = TheoremMode::Theorem2;
    cfg.params = params(0.0);
    let (u0, w0) = single_mode_data(cfg.grid().unwrap(), 1e-3);
    let run = run_picard(&u0, &w0, &cfg).unwrap();
    assert!(run.converged);
}

#[test]
fn picard_limit_matches_direct_solve() {
    let cfg = config(32, 0.1, 1e-3);
    let (u0, w0) = single_mode_data(cfg.grid().unwrap(), 1e-3);
    let run = run_picard(&u0, &w0, &cfg).unwrap();
    let direct = direct_solve(&u0, &w0, &cfg).unwrap();
    let (du, dw) = run.final_iterate().sup_distance(&direct).unwrap();
    assert!(du + dw <= 10.0 * cfg.cauchy_tol, "distance {}", du + dw);
}

#[test]
fn three_dimensional_runs_stay_solenoidal() {
    let g = Grid::new(3, 16).unwrap();
    let cfg = SolverConfig::new(g, params(1.0), TheoremMode::Theorem1, 0.02, 1e-2);
    let (u0, w0) = random_data(g, &SpectrumProfile { amplitude: 0.5, ..Default::default() }, 2);
    let tr = direct_solve(&u0, &w0, &cfg).unwrap();
    assert!(tr.max_divergence() <= 1e-10);
}
