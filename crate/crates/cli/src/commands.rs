use std::fs;
use std::path::{Path, PathBuf};

use micropolar::field::SpectralField;
use micropolar::io::{
    build_initial, export_rows, export_series, load_config, read_snapshot, write_snapshot, NormSeries, RunManifest,
};
use micropolar::lp::audit::{
    bernstein_corpus, bernstein_rows, partition_audit, triple_corpus, triple_rows,
};
use micropolar::lp::{besov_norm, BesovIndex, DyadicPartition};
use micropolar::solver::{direct_solve, run_picard, select_parameters, InitialData, SolverConfig};
use micropolar::verify::{apriori_monitor, cauchy_report, energy_audit, uniqueness_experiment, Verdict};
use micropolar::{Grid, Result};
use serde_json::json;

const DEFAULT_INITIAL: InitialData = InitialData::SingleMode { amplitude: 1e-3 };

fn initial_of(cfg: &SolverConfig) -> InitialData {
    cfg.initial.clone().unwrap_or(DEFAULT_INITIAL)
}

fn load(config: &Path) -> Result<(SolverConfig, InitialData, SpectralField, SpectralField)> {
    let cfg = load_config(config)?;
    let init = initial_of(&cfg);
    let (u0, w0) = build_initial(&init, cfg.grid()?)?;
    Ok((cfg, init, u0, w0))
}

fn print_json(value: &serde_json::Value) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn emit(value: &serde_json::Value, out: Option<&Path>) -> Result<()> {
    if let Some(path) = out {
        fs::write(path, serde_json::to_string_pretty(value)?)?;
    }
    print_json(value)
}

fn seeds_of(init: &InitialData) -> Vec<u64> {
    match init {
        InitialData::Random { seed, .. } => vec![*seed],
        _ => Vec::new(),
    }
}

fn prepare_run_dir(out: &Path, cfg: SolverConfig, initial: InitialData, snapshots: &[&str]) -> Result<()> {
    fs::create_dir_all(out)?;
    RunManifest {
        seeds: seeds_of(&initial),
        config: cfg,
        initial,
        output_dir: out.display().to_string(),
        tool_version: env!("CARGO_PKG_VERSION").into(),
        created_at: chrono::Utc::now().to_rfc3339(),
        snapshots: snapshots.iter().map(|s| s.to_string()).collect(),
    }
    .write_into(out)
}

pub fn run(config: &Path, out: &Path) -> Result<()> {
    let (cfg, init, u0, w0) = load(config)?;
    prepare_run_dir(out, cfg.clone(), init, &["initial.mpsf", "final.mpsf"])?;
    let traj = direct_solve(&u0, &w0, &cfg)?;
    write_snapshot(traj.first(), out.join("initial.mpsf"))?;
    write_snapshot(traj.last(), out.join("final.mpsf"))?;
    let mut series = NormSeries::new();
    series.push_trajectory(&traj, 0, &cfg);
    export_series(&series, out.join("series.csv"))?;
    print_json(&json!({
        "steps": cfg.steps(),
        "stored": traj.len(),
        "final_time": traj.last().t,
        "final_energy": traj.last().energy_sq(),
        "max_divergence": traj.max_divergence(),
    }))
}

pub fn picard(config: &Path, out: &Path) -> Result<()> {
    let (cfg, init, u0, w0) = load(config)?;
    prepare_run_dir(out, cfg.clone(), init, &["final.mpsf"])?;
    let run = run_picard(&u0, &w0, &cfg)?;
    let mut series = NormSeries::new();
    for (i, it) in run.iterates.iter().enumerate() {
        series.push_trajectory(it, i, &cfg);
    }
    export_series(&series, out.join("series.csv"))?;
    write_snapshot(run.final_iterate().last(), out.join("final.mpsf"))?;
    let report = cauchy_report(&run.iterates)?;
    let value = json!({
        "converged": run.converged,
        "iterates": run.iterates.len(),
        "diffs": run.diffs,
        "diff_parts": run.diff_parts,
        "ratio": report.ratio,
    });
    fs::write(out.join("cauchy.json"), serde_json::to_string_pretty(&value)?)?;
    print_json(&value)
}

pub fn params(config: &Path, out: Option<&Path>) -> Result<()> {
    let (cfg, _, u0, w0) = load(config)?;
    let choice = select_parameters(&u0, &w0, &cfg)?;
    emit(&serde_json::to_value(choice)?, out)
}

pub struct AuditTarget {
    pub config: Option<PathBuf>,
    pub d: usize,
    pub n: usize,
    pub seed: u64,
    pub out: PathBuf,
}

impl AuditTarget {
    fn grid(&self) -> Result<Grid> {
        match &self.config {
            Some(path) => load_config(path)?.grid(),
            None => Grid::new(self.d, self.n),
        }
    }
}

fn default_blocks(partition: &DyadicPartition, requested: &[i32], top: i32) -> Vec<i32> {
    if requested.is_empty() {
        (1..=top.min(partition.j_max())).collect()
    } else {
        requested.to_vec()
    }
}

pub fn audit_bernstein(t: &AuditTarget, a: f64, p: f64, q: f64, count: usize, js: &[i32]) -> Result<()> {
    let grid = t.grid()?;
    let partition = DyadicPartition::build(grid)?;
    let js = default_blocks(&partition, js, i32::MAX);
    let fits = bernstein_corpus(&partition, &js, a, p, q, count, t.seed)?;
    export_rows(&bernstein_rows(&fits, grid.n(), t.seed), &t.out)?;
    let summary: Vec<_> = fits
        .iter()
        .map(|f| json!({"j": f.j, "a": f.a, "c1": f.c1, "c2": f.c2}))
        .collect();
    print_json(&json!({ "audit": "bernstein", "p": p, "q": q, "count": count, "fits": summary }))
}

pub fn audit_triple(t: &AuditTarget, count: usize, js: &[i32]) -> Result<()> {
    let grid = t.grid()?;
    let partition = DyadicPartition::build(grid)?;
    let js = default_blocks(&partition, js, 4);
    let corpus = triple_corpus(grid, &js, count, t.seed)?;
    export_rows(&triple_rows(&corpus, grid.n(), t.seed), &t.out)?;
    print_json(&json!({
        "audit": "triple",
        "count": count,
        "blocks": js,
        "c_fit": corpus.c_fit,
        "violations": corpus.violations_at(corpus.c_fit),
        "unbounded": corpus.violations,
    }))
}

pub fn audit_partition(t: &AuditTarget) -> Result<()> {
    let grid = t.grid()?;
    let report = partition_audit(&DyadicPartition::build(grid)?);
    export_rows(&report.rows(grid.n()), &t.out)?;
    print_json(&serde_json::to_value(report)?)
}

fn verdict(name: &str, pass: bool, margin: f64, c_fit: Option<f64>, cfg: &SolverConfig, seed: Option<u64>) -> Verdict {
    Verdict {
        name: name.into(),
        pass,
        margin,
        c_fit,
        dt: cfg.dt,
        n: cfg.n,
        seed,
    }
}

fn emit_verdict(v: &Verdict, out: Option<&Path>) -> Result<()> {
    emit(&serde_json::to_value(v)?, out)
}

pub fn verify_uniqueness(config: &Path, scale: f64, seed: u64, c: Option<f64>, out: Option<&Path>) -> Result<()> {
    let (cfg, _, u0, w0) = load(config)?;
    let r = uniqueness_experiment(&u0, &w0, scale, &cfg, seed, c)?;
    let pass = r.series.valid() && r.c.is_finite();
    emit_verdict(&verdict("uniqueness", pass, r.series.margin(), Some(r.c), &cfg, Some(seed)), out)
}

pub fn verify_energy(config: &Path, tol: f64, out: Option<&Path>) -> Result<()> {
    let (cfg, init, u0, w0) = load(config)?;
    let audit = energy_audit(&direct_solve(&u0, &w0, &cfg)?, &cfg)?;
    let margin = tol - audit.max_abs_residual;
    let seed = seeds_of(&init).first().copied();
    emit_verdict(&verdict("energy", margin >= 0.0, margin, None, &cfg, seed), out)
}

pub fn verify_apriori(config: &Path, out: Option<&Path>) -> Result<()> {
    let (cfg, init, u0, w0) = load(config)?;
    let choice = select_parameters(&u0, &w0, &cfg)?;
    let run = run_picard(&u0, &w0, &cfg.with_horizon(choice.bounds.horizon))?;
    let reports: Vec<_> = run
        .iterates
        .iter()
        .map(|it| apriori_monitor(it, &choice.bounds, &cfg.params, cfg.mode))
        .collect();
    let pass = run.converged && reports.iter().all(|r| r.passes());
    let margin = reports.iter().map(|r| r.min_margin()).fold(f64::INFINITY, f64::min);
    let seed = seeds_of(&init).first().copied();
    emit_verdict(&verdict("apriori", pass, margin, Some(cfg.c_fit), &cfg, seed), out)
}

pub fn norms(field: &Path, s: f64, p: f64, q: f64, microrotation: bool) -> Result<()> {
    let state = read_snapshot(field)?;
    let partition = DyadicPartition::build(*state.grid())?;
    let f = if microrotation { &state.w } else { &state.u };
    let idx = BesovIndex::new(s, p, q)?;
    println!("{:.16e}", besov_norm(&partition, f, idx)?);
    Ok(())
}
