//! Numerical audits of the block inequalities: Bernstein bounds, the
//! triple-product bounds for `Δ_j(F·∇G)·Δ_jH`, and the partition of unity.
//! Constants are fitted from corpora, never assumed.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::besov::lp_norm;
use super::partition::DyadicPartition;
use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::grid::Grid;
use crate::ops;
use crate::random::{random_field, random_solenoidal, SpectrumProfile};

/// One CSV row of an audit report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditRow {
    pub audit_name: String,
    pub j: i32,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub n: usize,
    pub seed: u64,
}

fn ratio(lhs: f64, rhs: f64) -> f64 {
    if rhs > 0.0 {
        lhs / rhs
    } else if lhs == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

// ---------------------------------------------------------------------------
// Bernstein

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BernsteinRecord {
    pub j: i32,
    pub a: f64,
    pub p: f64,
    pub q: f64,
    /// `‖(−Δ)^a f‖_{L^q}`
    pub lhs: f64,
    /// `2^{2aj + jd(1/p − 1/q)} ‖f‖_{L^p}`
    pub rhs: f64,
    /// `lhs / rhs`, the empirical upper constant.
    pub ratio: f64,
    /// `lhs / (2^{2aj} ‖f‖_{L^q})`, the empirical lower constant.
    pub lower_ratio: f64,
}

/// Both sides of the Bernstein inequalities for a field supported in the
/// `j`-th dyadic annulus.
pub fn bernstein_audit(
    partition: &DyadicPartition,
    f: &SpectralField,
    j: i32,
    a: f64,
    p: f64,
    q: f64,
) -> Result<BernsteinRecord> {
    if !(p >= 1.0) || !(q >= 1.0) {
        return Err(Error::Domain(format!("integrability exponents must be >= 1 (p={p}, q={q})")));
    }
    if q < p {
        return Err(Error::Domain(format!("Bernstein audit needs q >= p (p={p}, q={q})")));
    }
    if j < 0 || j > partition.j_max() {
        return Err(Error::Range(format!(
            "annulus index {j} outside 0..={}",
            partition.j_max()
        )));
    }
    let w = partition.weights(j).expect("block in range");
    let outside = f
        .coeffs()
        .iter()
        .flat_map(|c| c.iter().zip(w))
        .filter(|(_, &wi)| wi == 0.0)
        .map(|(z, _)| z.norm())
        .fold(0.0, f64::max);
    if outside > 1e-14 * f.max_abs_coeff() {
        return Err(Error::Contract(format!(
            "field is not supported in annulus {j} (stray content {outside:.3e})"
        )));
    }
    let d = f.grid().d() as f64;
    let lap = ops::fractional_laplacian(f, a)?;
    let lhs = lp_norm(&lap, q);
    let gain = if q.is_infinite() { 1.0 / p } else { 1.0 / p - 1.0 / q };
    let scale = (2.0 * a * j as f64).exp2();
    let rhs = (2.0 * a * j as f64 + j as f64 * d * gain).exp2() * lp_norm(f, p);
    let lower_ratio = ratio(lhs, scale * lp_norm(f, q));
    Ok(BernsteinRecord {
        j,
        a,
        p,
        q,
        lhs,
        rhs,
        ratio: ratio(lhs, rhs),
        lower_ratio,
    })
}

/// Corpus summary for one `(j, a)` pair.
#[derive(Clone, Debug, Serialize)]
pub struct BernsteinFit {
    pub j: i32,
    pub a: f64,
    /// min of the lower ratio over the corpus
    pub c1: f64,
    /// max of the upper ratio over the corpus
    pub c2: f64,
    pub records: Vec<BernsteinRecord>,
}

/// Random fields with a flat spectrum, cut to annulus `j`.
pub fn annulus_field(partition: &DyadicPartition, j: i32, seed: u64) -> Result<SpectralField> {
    let profile = SpectrumProfile {
        exponent: 0.0,
        cutoff: f64::INFINITY,
        amplitude: 1.0,
    };
    let raw = random_field(*partition.grid(), 1, &profile, seed, false);
    partition.dyadic_block(&raw, j)
}

pub fn bernstein_corpus(
    partition: &DyadicPartition,
    js: &[i32],
    a: f64,
    p: f64,
    q: f64,
    count: usize,
    seed: u64,
) -> Result<Vec<BernsteinFit>> {
    js.iter()
        .map(|&j| {
            let records: Vec<BernsteinRecord> = (0..count)
                .into_par_iter()
                .map(|i| {
                    let member_seed = seed.wrapping_add(1000 * j as u64 + i as u64);
                    let f = annulus_field(partition, j, member_seed)?;
                    bernstein_audit(partition, &f, j, a, p, q)
                })
                .collect::<Result<_>>()?;
            let c1 = records.iter().map(|r| r.lower_ratio).fold(f64::INFINITY, f64::min);
            let c2 = records.iter().map(|r| r.ratio).fold(0.0, f64::max);
            Ok(BernsteinFit {
                j,
                a,
                c1,
                c2,
                records,
            })
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Triple products

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TripleForm {
    /// Independent `H`.
    General,
    /// `H = G`, where the leading sum carries `2^{(1+d/2)m}` instead of `2^j 2^{dm/2}`.
    Diagonal,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TripleRecord {
    pub j: i32,
    pub form: TripleForm,
    /// `|⟨Δ_j(F·∇G), Δ_j H⟩|`
    pub lhs: f64,
    /// The three summands of the bound, each already multiplied by `‖Δ_j H‖`.
    pub rhs_terms: [f64; 3],
    pub rhs: f64,
    pub ratio: f64,
}

fn block_norm(norms: &[f64], j: i32) -> f64 {
    let slot = j + 1;
    if slot < 0 || slot as usize >= norms.len() {
        0.0
    } else {
        norms[slot as usize]
    }
}

/// The three-sum right-hand side built from block norms of `F` and `G`.
/// The high-high sum runs over `k ≥ j - 1`.
pub fn triple_bound_terms(
    d: usize,
    j: i32,
    f_norms: &[f64],
    g_norms: &[f64],
    g_tilde: &[f64],
    h_block: f64,
    form: TripleForm,
) -> [f64; 3] {
    let half_d = d as f64 / 2.0;
    let j_top = f_norms.len() as i32 - 2;
    let near_g: f64 = (j - 2..=j + 2).map(|k| block_norm(g_norms, k)).sum();
    let near_f: f64 = (j - 2..=j + 2).map(|k| block_norm(f_norms, k)).sum();
    let low_f: f64 = (-1..j)
        .map(|m| {
            let w = match form {
                TripleForm::General => (j as f64 + half_d * m as f64).exp2(),
                TripleForm::Diagonal => ((1.0 + half_d) * m as f64).exp2(),
            };
            w * block_norm(f_norms, m)
        })
        .sum();
    let low_g: f64 = (-1..j)
        .map(|m| ((1.0 + half_d) * m as f64).exp2() * block_norm(g_norms, m))
        .sum();
    let high: f64 = ((j - 1).max(-1)..=j_top)
        .map(|k| (j as f64 + half_d * k as f64).exp2() * block_norm(f_norms, k) * block_norm(g_tilde, k))
        .sum();
    [
        h_block * low_f * near_g,
        h_block * near_f * low_g,
        h_block * high,
    ]
}

/// Audit `|⟨Δ_j(F·∇G), Δ_j H⟩|` against its block bound. Pass `h = None` for
/// the diagonal form `H = G`.
pub fn triple_product_audit(
    partition: &DyadicPartition,
    f: &SpectralField,
    g: &SpectralField,
    h: Option<&SpectralField>,
    j: i32,
) -> Result<TripleRecord> {
    let div = ops::divergence(f)?.max_abs_physical();
    if div > 1e-10 {
        return Err(Error::Contract(format!(
            "transport field must be divergence-free (max |div| = {div:.3e})"
        )));
    }
    let (h, form) = match h {
        Some(h) => (h, TripleForm::General),
        None => (g, TripleForm::Diagonal),
    };
    g.check_same_shape(h)?;
    let transport = ops::advect(f, g)?;
    let lhs = partition
        .dyadic_block(&transport, j)?
        .inner(&partition.dyadic_block(h, j)?)?
        .abs();
    let f_norms = partition.block_l2_norms(f);
    let g_norms = partition.block_l2_norms(g);
    let g_tilde = partition.tilde_l2_norms(g);
    let h_block = block_norm(&partition.block_l2_norms(h), j);
    let rhs_terms = triple_bound_terms(
        f.grid().d(),
        j,
        &f_norms,
        &g_norms,
        &g_tilde,
        h_block,
        form,
    );
    let rhs: f64 = rhs_terms.iter().sum();
    Ok(TripleRecord {
        j,
        form,
        lhs,
        rhs_terms,
        rhs,
        ratio: ratio(lhs, rhs),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TripleCorpus {
    pub records: Vec<TripleRecord>,
    /// Single constant with `lhs ≤ c_fit · rhs` for every member.
    pub c_fit: f64,
    /// Members whose bound is zero while the pairing is not.
    pub violations: usize,
    pub seeds: Vec<u64>,
}

/// Random divergence-free triples, each audited in both forms at every `j`.
pub fn triple_corpus(grid: Grid, js: &[i32], count: usize, seed: u64) -> Result<TripleCorpus> {
    let partition = DyadicPartition::shared(grid)?;
    let profile = SpectrumProfile::default();
    let d = grid.d();
    let seeds: Vec<u64> = (0..count as u64).map(|i| seed.wrapping_add(3 * i)).collect();
    let per_member: Vec<Vec<TripleRecord>> = seeds
        .par_iter()
        .map(|&s| {
            let f = random_solenoidal(grid, &profile, s);
            let g = random_field(grid, d, &profile, s + 1, true);
            let h = random_field(grid, d, &profile, s + 2, true);
            let mut out = Vec::with_capacity(2 * js.len());
            for &j in js {
                out.push(triple_product_audit(&partition, &f, &g, Some(&h), j)?);
                out.push(triple_product_audit(&partition, &f, &g, None, j)?);
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let records: Vec<TripleRecord> = per_member.into_iter().flatten().collect();
    let violations = records.iter().filter(|r| !r.ratio.is_finite()).count();
    let c_fit = records
        .iter()
        .map(|r| r.ratio)
        .filter(|r| r.is_finite())
        .fold(0.0, f64::max);
    Ok(TripleCorpus {
        records,
        c_fit,
        violations,
        seeds,
    })
}

impl TripleCorpus {
    /// Members with `lhs > c · rhs` (relative slack `1e-12`).
    pub fn violations_at(&self, c: f64) -> usize {
        self.records
            .iter()
            .filter(|r| r.lhs > c * r.rhs * (1.0 + 1e-12) + f64::MIN_POSITIVE)
            .count()
    }
}

// ---------------------------------------------------------------------------
// Partition of unity

#[derive(Clone, Debug, Serialize)]
pub struct PartitionAudit {
    pub j_max: i32,
    pub resolved_radius: f64,
    /// `max |φ + Σψ_j − 1|` over lattice points inside the resolved ball
    pub max_residual: f64,
    /// `max ψ_j ψ_k` over all pairs with `|j − k| ≥ 2`
    pub max_overlap: f64,
}

pub fn partition_audit(partition: &DyadicPartition) -> PartitionAudit {
    let grid = partition.grid();
    let r = partition.resolved_radius();
    let max_residual = grid
        .modes()
        .filter(|m| m.norm <= r)
        .map(|m| (partition.partition_sum(m.index) - 1.0).abs())
        .fold(0.0, f64::max);
    let mut max_overlap: f64 = 0.0;
    for j in partition.blocks() {
        for k in partition.blocks().filter(|&k| k >= j + 2) {
            let a = partition.weights(j).expect("in range");
            let b = partition.weights(k).expect("in range");
            for (x, y) in a.iter().zip(b) {
                max_overlap = max_overlap.max(x * y);
            }
        }
    }
    PartitionAudit {
        j_max: partition.j_max(),
        resolved_radius: r,
        max_residual,
        max_overlap,
    }
}

impl PartitionAudit {
    pub fn rows(&self, n: usize) -> Vec<AuditRow> {
        vec![AuditRow {
            audit_name: "partition".into(),
            j: self.j_max,
            lhs: self.max_residual,
            rhs: 1e-12,
            ratio: self.max_residual / 1e-12,
            n,
            seed: 0,
        }]
    }
}

pub fn bernstein_rows(fits: &[BernsteinFit], n: usize, seed: u64) -> Vec<AuditRow> {
    fits.iter()
        .flat_map(|fit| {
            fit.records.iter().map(move |r| AuditRow {
                audit_name: format!("bernstein_a{}", fit.a),
                j: r.j,
                lhs: r.lhs,
                rhs: r.rhs,
                ratio: r.ratio,
                n,
                seed,
            })
        })
        .collect()
}

pub fn triple_rows(corpus: &TripleCorpus, n: usize, seed: u64) -> Vec<AuditRow> {
    corpus
        .records
        .iter()
        .map(|r| AuditRow {
            audit_name: match r.form {
                TripleForm::General => "triple_general".into(),
                TripleForm::Diagonal => "triple_diagonal".into(),
            },
            j: r.j,
            lhs: r.lhs,
            rhs: r.rhs,
            ratio: r.ratio,
            n,
            seed,
        })
        .collect()
}
