//! Inhomogeneous Besov norms `‖2^{sj}‖Δ_j f‖_{L^p}‖_{ℓ^q}`, truncated at `j_max`.
//!
//! L^p norms use the normalized measure. For `p = 2` they come from
//! Parseval; otherwise from the rectangle rule on the collocation grid
//! (`p = ∞` is the max over collocation points). Vector fields use the
//! pointwise Euclidean magnitude.

use serde::{Deserialize, Serialize};

use super::partition::DyadicPartition;
use crate::error::{Error, Result};
use crate::field::SpectralField;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BesovIndex {
    pub s: f64,
    pub p: f64,
    pub q: f64,
}

impl BesovIndex {
    pub fn new(s: f64, p: f64, q: f64) -> Result<Self> {
        let idx = BesovIndex { s, p, q };
        idx.validate()?;
        Ok(idx)
    }

    /// `B^s_{2,1}`, the scale used throughout the solver diagnostics.
    pub fn l2_sum(s: f64) -> Self {
        BesovIndex { s, p: 2.0, q: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.s.is_finite() {
            return Err(Error::Domain(format!("regularity s must be finite, got {}", self.s)));
        }
        for (name, v) in [("p", self.p), ("q", self.q)] {
            if !(v >= 1.0) {
                return Err(Error::Domain(format!("{name} must lie in [1, inf], got {v}")));
            }
        }
        Ok(())
    }
}

/// Normalized `L^p` norm of physical samples (Euclidean magnitude across components).
pub fn lp_norm_samples(samples: &[Vec<f64>], p: f64) -> f64 {
    let len = samples[0].len();
    let mag = |i: usize| samples.iter().map(|c| c[i] * c[i]).sum::<f64>().sqrt();
    if p.is_infinite() {
        (0..len).map(mag).fold(0.0, f64::max)
    } else {
        let mean = (0..len).map(|i| mag(i).powf(p)).sum::<f64>() / len as f64;
        mean.powf(1.0 / p)
    }
}

pub fn lp_norm(f: &SpectralField, p: f64) -> f64 {
    if p == 2.0 {
        f.l2_norm()
    } else {
        lp_norm_samples(&f.to_physical(), p)
    }
}

/// `‖Δ_j f‖_{L^p}` for `j = -1..=j_max`.
pub fn block_lp_norms(partition: &DyadicPartition, f: &SpectralField, p: f64) -> Result<Vec<f64>> {
    if p == 2.0 {
        if f.grid() != partition.grid() {
            return Err(Error::Config("field and partition live on different grids".into()));
        }
        return Ok(partition.block_l2_norms(f));
    }
    partition
        .blocks()
        .map(|j| Ok(lp_norm(&partition.dyadic_block(f, j)?, p)))
        .collect()
}

/// Combine per-block norms (entry 0 is `j = -1`) into `‖2^{sj} b_j‖_{ℓ^q}`.
pub fn combine_blocks(block_norms: &[f64], s: f64, q: f64) -> f64 {
    let weighted = block_norms
        .iter()
        .enumerate()
        .map(|(slot, b)| (s * (slot as f64 - 1.0)).exp2() * b);
    if q.is_infinite() {
        weighted.fold(0.0, f64::max)
    } else if q == 1.0 {
        weighted.sum()
    } else {
        weighted.map(|x| x.powf(q)).sum::<f64>().powf(1.0 / q)
    }
}

pub fn besov_norm(partition: &DyadicPartition, f: &SpectralField, idx: BesovIndex) -> Result<f64> {
    idx.validate()?;
    let blocks = block_lp_norms(partition, f, idx.p)?;
    Ok(combine_blocks(&blocks, idx.s, idx.q))
}

/// A Besov norm together with the energy the truncation at `j_max` dropped.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BesovReport {
    pub value: f64,
    pub tail_energy: f64,
}

pub fn besov_report(
    partition: &DyadicPartition,
    f: &SpectralField,
    idx: BesovIndex,
) -> Result<BesovReport> {
    Ok(BesovReport {
        value: besov_norm(partition, f, idx)?,
        tail_energy: partition.tail_energy(f),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::lp::partition::psi;
    use crate::random::{random_field, SpectrumProfile};
    use rustfft::num_complex::Complex64;

    fn setup(n: usize) -> (Grid, DyadicPartition) {
        let g = Grid::new(2, n).unwrap();
        (g, DyadicPartition::build(g).unwrap())
    }

    #[test]
    fn zero_field_has_zero_norm() {
        let (g, p) = setup(16);
        let z = SpectralField::zeros(g, 2);
        for idx in [
            BesovIndex::new(0.0, 2.0, 1.0).unwrap(),
            BesovIndex::new(-1.5, 3.0, f64::INFINITY).unwrap(),
            BesovIndex::new(2.0, f64::INFINITY, 2.0).unwrap(),
        ] {
            assert_eq!(besov_norm(&p, &z, idx).unwrap(), 0.0);
        }
    }

    #[test]
    fn rejects_out_of_range_exponents() {
        assert!(matches!(BesovIndex::new(0.0, 0.5, 1.0), Err(Error::Domain(_))));
        assert!(matches!(BesovIndex::new(0.0, 2.0, f64::NAN), Err(Error::Domain(_))));
    }

    #[test]
    fn single_mode_matches_per_block_oracle() {
        let (g, p) = setup(32);
        let mut f = SpectralField::zeros(g, 1);
        // |ξ₀| = 4
        f.set_real_mode(0, &[4, 0], Complex64::new(0.3, 0.4));
        let got = besov_norm(&p, &f, BesovIndex::new(1.0, 2.0, 2.0).unwrap()).unwrap();
        let sum: f64 = (0..=p.j_max())
            .map(|j| {
                let w = psi(4.0 / 2f64.powi(j));
                4f64.powi(j) * w * w
            })
            .sum();
        let want = f.l2_norm() * sum.sqrt();
        assert!((got - want).abs() < 1e-14 * want);
    }

    #[test]
    fn blockwise_summands_scale_with_regularity() {
        let (g, p) = setup(32);
        let f = random_field(g, 1, &SpectrumProfile::default(), 5, true);
        let blocks = block_lp_norms(&p, &f, 2.0).unwrap();
        let (s1, s2) = (-0.5, 1.25);
        for (slot, b) in blocks.iter().enumerate() {
            let j = slot as f64 - 1.0;
            let a = (s1 * j).exp2() * b;
            let c = (s2 * j).exp2() * b;
            if c > 0.0 {
                assert!((a / c - ((s1 - s2) * j).exp2()).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn b022_brackets_l2_norm() {
        let (g, p) = setup(32);
        for seed in 0..10 {
            let f = random_field(g, 1, &SpectrumProfile::default(), seed, true);
            let b = besov_norm(&p, &f, BesovIndex::new(0.0, 2.0, 2.0).unwrap()).unwrap();
            let l2 = f.l2_norm();
            assert!(b <= l2 * (1.0 + 1e-12));
            assert!(b >= l2 / 2f64.sqrt() * (1.0 - 1e-12));
        }
    }

    #[test]
    fn quadrature_lp_agrees_with_parseval_at_p2() {
        let (g, p) = setup(32);
        let f = random_field(g, 2, &SpectrumProfile::default(), 8, true);
        let quad = lp_norm_samples(&f.to_physical(), 2.0);
        assert!((quad - f.l2_norm()).abs() < 1e-12 * f.l2_norm());
        let via_blocks: Vec<f64> = p
            .blocks()
            .map(|j| lp_norm_samples(&p.dyadic_block(&f, j).unwrap().to_physical(), 2.0))
            .collect();
        let parseval = p.block_l2_norms(&f);
        for (a, b) in via_blocks.iter().zip(&parseval) {
            assert!((a - b).abs() < 1e-12 * f.l2_norm());
        }
    }

    #[test]
    fn sup_over_blocks_for_q_infinity() {
        let norms = [1.0, 2.0, 0.5];
        assert_eq!(combine_blocks(&norms, 0.0, f64::INFINITY), 2.0);
        assert_eq!(combine_blocks(&norms, 1.0, 1.0), 0.5 + 2.0 + 1.0);
    }
}
