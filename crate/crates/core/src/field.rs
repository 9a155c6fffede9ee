//! Real periodic fields stored as Fourier coefficients.
//!
//! Normalization: `f(x) = Σ_ξ c_ξ e^{iξ·x}`, so the constant field 1 has the
//! single coefficient `c_0 = 1`. Norms are taken against the normalized
//! measure `dx / |box|`, which makes Parseval hold with unit constant:
//! `‖f‖_{L²}² = N^{-1} Σ_x |f(x)|² = Σ_ξ |c_ξ|²`.

use std::ops::{Add, Mul, Neg, Sub};

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft;
use crate::grid::Grid;

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField {
    grid: Grid,
    comps: Vec<Vec<Complex64>>,
}

impl SpectralField {
    pub fn zeros(grid: Grid, components: usize) -> Self {
        SpectralField {
            grid,
            comps: vec![vec![Complex64::default(); grid.len()]; components],
        }
    }

    pub fn from_coeffs(grid: Grid, comps: Vec<Vec<Complex64>>) -> Result<Self> {
        if comps.is_empty() {
            return Err(Error::Shape("a field needs at least one component".into()));
        }
        if let Some(c) = comps.iter().find(|c| c.len() != grid.len()) {
            return Err(Error::Config(format!(
                "coefficient count {} does not match grid size {}",
                c.len(),
                grid.len()
            )));
        }
        Ok(SpectralField { grid, comps })
    }

    /// Forward transform of physical samples, one slice per component.
    pub fn from_physical(grid: Grid, samples: &[Vec<f64>]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Shape("a field needs at least one component".into()));
        }
        if let Some(s) = samples.iter().find(|s| s.len() != grid.len()) {
            return Err(Error::Config(format!(
                "sample count {} does not match grid size {}",
                s.len(),
                grid.len()
            )));
        }
        let comps = samples.iter().map(|s| fft::forward(&grid, s)).collect();
        Ok(SpectralField { grid, comps })
    }

    /// Build a field by sampling `f(x) -> [component values]` on the collocation grid.
    pub fn from_fn<F>(grid: Grid, components: usize, f: F) -> Self
    where
        F: Fn(&[f64; 3]) -> Vec<f64>,
    {
        let mut samples = vec![vec![0.0; grid.len()]; components];
        for idx in 0..grid.len() {
            let vals = f(&grid.point(idx));
            for (column, v) in samples.iter_mut().zip(vals) {
                column[idx] = v;
            }
        }
        Self::from_physical(grid, &samples).expect("sample shape is consistent by construction")
    }

    pub fn to_physical(&self) -> Vec<Vec<f64>> {
        self.comps.iter().map(|c| fft::inverse(&self.grid, c)).collect()
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn components(&self) -> usize {
        self.comps.len()
    }

    pub fn is_scalar(&self) -> bool {
        self.comps.len() == 1
    }

    pub fn component(&self, c: usize) -> &[Complex64] {
        &self.comps[c]
    }

    pub fn coeffs(&self) -> &[Vec<Complex64>] {
        &self.comps
    }

    pub fn into_coeffs(self) -> Vec<Vec<Complex64>> {
        self.comps
    }

    pub fn coeff(&self, c: usize, k: &[i64]) -> Complex64 {
        self.comps[c][self.grid.index_of(k)]
    }

    pub fn set_coeff(&mut self, c: usize, k: &[i64], value: Complex64) {
        let idx = self.grid.index_of(k);
        self.comps[c][idx] = value;
    }

    /// Set the coefficient at `k` and its conjugate partner at `-k`.
    pub fn set_real_mode(&mut self, c: usize, k: &[i64], value: Complex64) {
        let idx = self.grid.index_of(k);
        let conj = self.grid.conjugate_index(idx);
        self.comps[c][idx] = value;
        self.comps[c][conj] = if conj == idx {
            Complex64::new(value.re, 0.0)
        } else {
            value.conj()
        };
    }

    /// Coefficient-wise map; `f(mode_index, component, coefficient)`.
    pub fn map_coeffs<F>(&self, f: F) -> Self
    where
        F: Fn(usize, usize, Complex64) -> Complex64,
    {
        let comps = self
            .comps
            .iter()
            .enumerate()
            .map(|(c, v)| v.iter().enumerate().map(|(i, &z)| f(i, c, z)).collect())
            .collect();
        SpectralField {
            grid: self.grid,
            comps,
        }
    }

    /// Multiply every component by a real per-mode multiplier.
    pub fn apply_multiplier(&self, m: &[f64]) -> Self {
        debug_assert_eq!(m.len(), self.grid.len());
        self.map_coeffs(|i, _, z| z * m[i])
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map_coeffs(|_, _, z| z * s)
    }

    pub fn axpy(&self, a: f64, other: &SpectralField) -> Result<Self> {
        self.check_same_shape(other)?;
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(x, y)| x.iter().zip(y).map(|(&p, &q)| p + q * a).collect())
            .collect();
        Ok(SpectralField {
            grid: self.grid,
            comps,
        })
    }

    pub fn check_same_shape(&self, other: &SpectralField) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::Config("fields live on different grids".into()));
        }
        if self.components() != other.components() {
            return Err(Error::Shape(format!(
                "component counts differ: {} vs {}",
                self.components(),
                other.components()
            )));
        }
        Ok(())
    }

    /// Squared L² norm (normalized measure), summed over components.
    pub fn norm_sq(&self) -> f64 {
        self.comps
            .iter()
            .flat_map(|c| c.iter())
            .map(|z| z.norm_sqr())
            .sum()
    }

    pub fn l2_norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Real inner product `∫ f·g dx / |box|`.
    pub fn inner(&self, other: &SpectralField) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self
            .comps
            .iter()
            .zip(&other.comps)
            .flat_map(|(a, b)| a.iter().zip(b))
            .map(|(p, q)| p.re * q.re + p.im * q.im)
            .sum())
    }

    /// Mean value of each component (the zero mode).
    pub fn mean(&self) -> Vec<f64> {
        self.comps.iter().map(|c| c[0].re).collect()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.comps
            .iter()
            .flat_map(|c| c.iter())
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Largest physical-space magnitude over all components and collocation points.
    pub fn max_abs_physical(&self) -> f64 {
        self.to_physical()
            .iter()
            .flat_map(|c| c.iter())
            .map(|v| v.abs())
            .fold(0.0, f64::max)
    }

    /// Zero every mode outside the 2/3-rule box.
    pub fn dealias(&self) -> Self {
        let grid = self.grid;
        self.map_coeffs(|i, _, z| {
            if grid.mode(i).dealiased {
                z
            } else {
                Complex64::default()
            }
        })
    }

    /// Largest coefficient outside the 2/3-rule box.
    pub fn aliased_content(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for m in self.grid.modes().filter(|m| !m.dealiased) {
            for c in &self.comps {
                worst = worst.max(c[m.index].norm());
            }
        }
        worst
    }

    /// True when the content outside the 2/3 box is at round-off level.
    pub fn is_dealiased(&self) -> bool {
        self.aliased_content() <= 1e-13 * self.max_abs_coeff().max(f64::MIN_POSITIVE)
    }

    /// Worst violation of `c(-ξ) = conj(c(ξ))`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for c in &self.comps {
            for (i, z) in c.iter().enumerate() {
                let partner = c[self.grid.conjugate_index(i)];
                worst = worst.max((z - partner.conj()).norm());
            }
        }
        worst
    }

    /// Project onto the Hermitian-symmetric subspace.
    pub fn symmetrize(&self) -> Self {
        let grid = self.grid;
        let comps = self
            .comps
            .iter()
            .map(|c| {
                (0..c.len())
                    .map(|i| (c[i] + c[grid.conjugate_index(i)].conj()) * 0.5)
                    .collect()
            })
            .collect();
        SpectralField { grid, comps }
    }

    pub fn select(&self, range: std::ops::Range<usize>) -> Self {
        SpectralField {
            grid: self.grid,
            comps: self.comps[range].to_vec(),
        }
    }

    pub fn concat(&self, other: &SpectralField) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::Config("fields live on different grids".into()));
        }
        let mut comps = self.comps.clone();
        comps.extend(other.comps.iter().cloned());
        Ok(SpectralField {
            grid: self.grid,
            comps,
        })
    }

    pub fn has_non_finite(&self) -> bool {
        self.comps
            .iter()
            .flat_map(|c| c.iter())
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
    }
}

impl Add for &SpectralField {
    type Output = SpectralField;

    fn add(self, rhs: &SpectralField) -> SpectralField {
        self.axpy(1.0, rhs).expect("field shapes must agree")
    }
}

impl Sub for &SpectralField {
    type Output = SpectralField;

    fn sub(self, rhs: &SpectralField) -> SpectralField {
        self.axpy(-1.0, rhs).expect("field shapes must agree")
    }
}

impl Mul<f64> for &SpectralField {
    type Output = SpectralField;

    fn mul(self, rhs: f64) -> SpectralField {
        self.scale(rhs)
    }
}

impl Neg for &SpectralField {
    type Output = SpectralField;

    fn neg(self) -> SpectralField {
        self.scale(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_field_has_only_mean_mode() {
        let g = Grid::new(2, 16).unwrap();
        let f = SpectralField::from_fn(g, 1, |_| vec![1.0]);
        assert!((f.component(0)[0] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let rest = f.component(0)[1..].iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(rest < 1e-15);
    }

    #[test]
    fn cosine_splits_into_two_halves() {
        let g = Grid::new(2, 16).unwrap();
        let f = SpectralField::from_fn(g, 1, |x| vec![x[0].cos()]);
        assert!((f.coeff(0, &[1, 0]) - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        assert!((f.coeff(0, &[-1, 0]) - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        assert!((f.norm_sq() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn parseval_matches_physical_mean_square() {
        let g = Grid::new(3, 8).unwrap();
        let f = SpectralField::from_fn(g, 2, |x| {
            vec![(x[0] + 2.0 * x[2]).sin() + 0.3, x[1].cos() * x[0].sin()]
        });
        let phys = f.to_physical();
        let ms: f64 = phys
            .iter()
            .flat_map(|c| c.iter())
            .map(|v| v * v)
            .sum::<f64>()
            / g.len() as f64;
        assert!((ms - f.norm_sq()).abs() < 1e-12 * ms);
    }

    #[test]
    fn mismatched_samples_are_config_errors() {
        let g = Grid::new(2, 8).unwrap();
        let err = SpectralField::from_physical(g, &[vec![0.0; 10]]).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    #[test]
    fn symmetrize_removes_hermitian_defect() {
        let g = Grid::new(2, 8).unwrap();
        let mut f = SpectralField::zeros(g, 1);
        f.set_coeff(0, &[1, 2], Complex64::new(1.0, 2.0));
        assert!(f.hermitian_defect() > 0.5);
        let s = f.symmetrize();
        assert!(s.hermitian_defect() < 1e-16);
    }
}
