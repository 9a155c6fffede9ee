use serde::Serialize;

use crate::error::{Error, Result};
use crate::lp::DyadicPartition;
use crate::solver::trajectory::trapezoid;
use crate::solver::{compute_y_norms, Trajectory, YBounds, YNorms};
use crate::state::{PhysicalParams, TheoremMode};

/// Time-integrated block terms with unit constants. `j_terms` drive the
/// velocity block `j`, `k_terms` the microrotation block:
///
/// ```text
/// J₁ = ‖Δⱼu⁺‖ Σ_{m≤j−1} 2^{(1+d/2)m}‖Δₘu‖    K₁ = 2^j ‖Δⱼu‖
/// J₂ = ‖Δⱼu‖ Σ_{m≤j} 2^{(1+d/2)m}‖Δₘu⁺‖      K₂ = ‖Δⱼw⁺‖ Σ_{m≤j−1} 2^{(1+d/2)m}‖Δₘu‖
/// J₃ = 2^j Σ_{k≥j−1} 2^{dk/2}‖Δ̃ₖu⁺‖‖Δₖu‖      K₃ = ‖Δⱼu‖ Σ_{m≤j} 2^{(1+d/2)m}‖Δₘw⁺‖
/// J₄ = 2^j ‖Δⱼw‖                             K₄ = Σ_{k≥j−1} 2^j 2^{dk/2}‖Δ̃ₖw⁺‖‖Δₖu‖
/// ```
///
/// where `⁺` marks the current iterate and unmarked fields the previous one.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlockTerms {
    pub j: i32,
    pub j_terms: [f64; 4],
    pub k_terms: [f64; 4],
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AprioriReport {
    pub norms: YNorms,
    pub bounds: YBounds,
    pub u_sup_ok: bool,
    pub w_sup_ok: bool,
    pub u_int_ok: bool,
    pub w_int_ok: bool,
    /// Bound minus value, in the order `u_sup, w_sup, u_int, w_int`.
    pub margins: [f64; 4],
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub blocks: Vec<BlockTerms>,
}

impl AprioriReport {
    pub fn passes(&self) -> bool {
        self.u_sup_ok && self.w_sup_ok && self.u_int_ok && self.w_int_ok
    }

    pub fn min_margin(&self) -> f64 {
        self.margins.iter().cloned().fold(f64::INFINITY, f64::min)
    }
}

pub fn apriori_monitor(
    traj: &Trajectory,
    bounds: &YBounds,
    params: &PhysicalParams,
    mode: TheoremMode,
) -> AprioriReport {
    let norms = compute_y_norms(traj, params, mode);
    let margins = [
        bounds.m - norms.u_sup,
        bounds.m - norms.w_sup,
        bounds.delta - norms.u_int,
        bounds.delta - norms.w_int,
    ];
    AprioriReport {
        norms,
        bounds: *bounds,
        u_sup_ok: margins[0] >= 0.0,
        w_sup_ok: margins[1] >= 0.0,
        u_int_ok: margins[2] >= 0.0,
        w_int_ok: margins[3] >= 0.0,
        margins,
        blocks: Vec::new(),
    }
}

fn at(v: &[f64], j: i32) -> f64 {
    if j < -1 {
        0.0
    } else {
        v.get((j + 1) as usize).copied().unwrap_or(0.0)
    }
}

/// Block diagnostics of `current` driven by `previous` (pass the same
/// trajectory twice for a direct solve).
pub fn block_terms(
    partition: &DyadicPartition,
    current: &Trajectory,
    previous: &Trajectory,
) -> Result<Vec<BlockTerms>> {
    if current.len() != previous.len() {
        return Err(Error::Config("iterates use different time grids".into()));
    }
    let d = partition.grid().d() as f64;
    let smooth = 1.0 + d / 2.0;
    let times = current.times();
    let tilde: Vec<(Vec<f64>, Vec<f64>)> = current
        .states()
        .iter()
        .map(|s| (partition.tilde_l2_norms(&s.u), partition.tilde_l2_norms(&s.w)))
        .collect();
    let mut out = Vec::new();
    for j in partition.blocks() {
        let mut series = vec![[0.0; 8]; current.len()];
        for (i, row) in series.iter_mut().enumerate() {
            let cur = &current.block_norms()[i];
            let prev = &previous.block_norms()[i];
            let (tu, tw) = &tilde[i];
            let low = |v: &[f64], top: i32| -> f64 {
                (-1..=top).map(|m| (smooth * m as f64).exp2() * at(v, m)).sum()
            };
            let high = |t: &[f64]| -> f64 {
                ((j - 1).max(-1)..=partition.j_max())
                    .map(|k| (j as f64 + d / 2.0 * k as f64).exp2() * at(t, k) * at(&prev.u, k))
                    .sum()
            };
            let two_j = (j as f64).exp2();
            *row = [
                at(&cur.u, j) * low(&prev.u, j - 1),
                at(&prev.u, j) * low(&cur.u, j),
                high(tu),
                two_j * at(&prev.w, j),
                two_j * at(&prev.u, j),
                at(&cur.w, j) * low(&prev.u, j - 1),
                at(&prev.u, j) * low(&cur.w, j),
                high(tw),
            ];
        }
        let integral = |c: usize| trapezoid(&times, &series.iter().map(|r| r[c]).collect::<Vec<_>>());
        out.push(BlockTerms {
            j,
            j_terms: [integral(0), integral(1), integral(2), integral(3)],
            k_terms: [integral(4), integral(5), integral(6), integral(7)],
        });
    }
    Ok(out)
}
