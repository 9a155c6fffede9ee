//! Paraproduct split `FG = T_F G + T_G F + R(F, G)`.

use super::partition::DyadicPartition;
use crate::error::Result;
use crate::field::SpectralField;
use crate::ops;

#[derive(Clone, Debug)]
pub struct BonyParts {
    /// `Σ_k S_{k-1}F · Δ_k G`
    pub low_high: SpectralField,
    /// `Σ_k Δ_k F · S_{k-1}G`
    pub high_low: SpectralField,
    /// `Σ_k Δ_k F · Δ̃_k G`
    pub high_high: SpectralField,
}

impl BonyParts {
    pub fn total(&self) -> SpectralField {
        &(&self.low_high + &self.high_low) + &self.high_high
    }
}

/// Split the dealiased product of `f` and `g` (see [`ops::product`] for the
/// component rules) into its three paraproduct parts.
pub fn bony_decompose(
    partition: &DyadicPartition,
    f: &SpectralField,
    g: &SpectralField,
) -> Result<BonyParts> {
    let f_blocks: Vec<SpectralField> = partition
        .blocks()
        .map(|j| partition.dyadic_block(f, j))
        .collect::<Result<_>>()?;
    let g_blocks: Vec<SpectralField> = partition
        .blocks()
        .map(|j| partition.dyadic_block(g, j))
        .collect::<Result<_>>()?;
    let template = ops::product(f, g)?;
    let zero = || SpectralField::zeros(*f.grid(), template.components());
    let mut low_high = zero();
    let mut high_low = zero();
    let mut high_high = zero();

    for k in partition.blocks() {
        let slot = (k + 1) as usize;
        // S_{k-1} = Σ_{m ≤ k-2} Δ_m, empty for k ≤ 0
        if k >= 1 {
            let f_low = partition.low_pass(f, k - 1)?;
            let g_low = partition.low_pass(g, k - 1)?;
            low_high = &low_high + &ops::product(&f_low, &g_blocks[slot])?;
            high_low = &high_low + &ops::product(&f_blocks[slot], &g_low)?;
        }
        let g_tilde = partition.tilde_block(g, k)?;
        high_high = &high_high + &ops::product(&f_blocks[slot], &g_tilde)?;
    }
    Ok(BonyParts {
        low_high,
        high_low,
        high_high,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::random::{random_field, SpectrumProfile};
    use rustfft::num_complex::Complex64;

    fn setup() -> (Grid, DyadicPartition) {
        let g = Grid::new(2, 16).unwrap();
        (g, DyadicPartition::build(g).unwrap())
    }

    #[test]
    fn parts_sum_to_product() {
        let (g, p) = setup();
        let f = random_field(g, 1, &SpectrumProfile::default(), 1, true);
        let h = random_field(g, 1, &SpectrumProfile::default(), 2, true);
        let parts = bony_decompose(&p, &f, &h).unwrap();
        let prod = ops::product(&f, &h).unwrap();
        let err = (&parts.total() - &prod).l2_norm();
        assert!(err <= 1e-10 * prod.l2_norm());
    }

    #[test]
    fn single_modes_match_convolution_oracle() {
        let (g, p) = setup();
        let mut f = SpectralField::zeros(g, 1);
        f.set_real_mode(0, &[2, 1], Complex64::new(0.5, -0.25));
        let parts = bony_decompose(&p, &f, &f).unwrap();
        // (a e^{iξx} + ā e^{-iξx})² = a² e^{2iξx} + 2|a|² + conj
        let a = Complex64::new(0.5, -0.25);
        let mut oracle = SpectralField::zeros(g, 1);
        oracle.set_real_mode(0, &[4, 2], a * a);
        oracle.set_coeff(0, &[0, 0], Complex64::new(2.0 * a.norm_sqr(), 0.0));
        assert!((&parts.total() - &oracle).max_abs_coeff() < 1e-15);
    }

    #[test]
    fn constant_factor_only_feeds_high_low_when_f_has_no_low_blocks() {
        let (g, p) = setup();
        let mut f = SpectralField::zeros(g, 1);
        // |ξ| ≥ 3 keeps f out of Δ_{-1} and Δ_0
        f.set_real_mode(0, &[3, 1], Complex64::new(0.2, 0.1));
        f.set_real_mode(0, &[0, 4], Complex64::new(-0.3, 0.0));
        let c = SpectralField::from_fn(g, 1, |_| vec![1.5]);
        let parts = bony_decompose(&p, &f, &c).unwrap();
        assert!(parts.low_high.max_abs_coeff() < 1e-15);
        assert!(parts.high_high.max_abs_coeff() < 1e-15);
        assert!((&parts.high_low - &f.scale(1.5)).max_abs_coeff() < 1e-15);
    }

    #[test]
    fn zero_factor_gives_zero_parts() {
        let (g, p) = setup();
        let z = SpectralField::zeros(g, 1);
        let h = random_field(g, 1, &SpectrumProfile::default(), 3, true);
        let parts = bony_decompose(&p, &z, &h).unwrap();
        assert_eq!(parts.low_high.max_abs_coeff(), 0.0);
        assert_eq!(parts.high_low.max_abs_coeff(), 0.0);
        assert_eq!(parts.high_high.max_abs_coeff(), 0.0);
    }
}
