//! Dyadic partition of unity sampled on the lattice, and the block
//! operators `Δ_j`, `S_j` built from it. Blocks are applied as Fourier
//! multipliers; the convolution kernels never materialize.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::grid::Grid;

/// Inner radius of the plateau `φ = 1`.
pub const BALL_INNER: f64 = 3.0 / 4.0;
/// Outer radius of `supp φ`.
pub const BALL_OUTER: f64 = 4.0 / 3.0;
/// Annulus bounds for `supp ψ`.
pub const ANNULUS_INNER: f64 = 3.0 / 4.0;
pub const ANNULUS_OUTER: f64 = 8.0 / 3.0;

fn mollifier(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        (-1.0 / x).exp()
    }
}

/// Smooth radial bump: 1 on `r ≤ 3/4`, 0 on `r ≥ 4/3`, `C^∞` in between
/// through the `exp(-1/x)` transition.
pub fn phi(r: f64) -> f64 {
    let t = (r - BALL_INNER) / (BALL_OUTER - BALL_INNER);
    if t <= 0.0 {
        1.0
    } else if t >= 1.0 {
        0.0
    } else {
        let a = mollifier(1.0 - t);
        a / (a + mollifier(t))
    }
}

/// `ψ(r) = φ(r/2) − φ(r)`, supported in `[3/4, 8/3]`.
pub fn psi(r: f64) -> f64 {
    phi(r / 2.0) - phi(r)
}

#[derive(Clone, Debug)]
pub struct DyadicPartition {
    grid: Grid,
    j_max: i32,
    phi_samples: Vec<f64>,
    /// `psi_samples[j]` holds `ψ(2^{-j}ξ)` for `j = 0..=j_max`.
    psi_samples: Vec<Vec<f64>>,
}

impl DyadicPartition {
    /// `j_max = ⌈log₂(n/3)⌉`, so the top block reaches past the 2/3-rule box.
    pub fn build(grid: Grid) -> Result<Self> {
        let j_max = (grid.n() as f64 / 3.0).log2().ceil() as i32;
        if j_max < 1 {
            return Err(Error::Config(format!(
                "n = {} is too small to host dyadic blocks j >= 1",
                grid.n()
            )));
        }
        let norms: Vec<f64> = grid.modes().map(|m| m.norm).collect();
        let phi_samples = norms.iter().map(|&r| phi(r)).collect();
        let psi_samples = (0..=j_max)
            .map(|j| {
                let s = (-j as f64).exp2();
                norms.iter().map(|&r| psi(r * s)).collect()
            })
            .collect();
        Ok(DyadicPartition {
            grid,
            j_max,
            phi_samples,
            psi_samples,
        })
    }

    /// Process-wide cached partition for a grid.
    pub fn shared(grid: Grid) -> Result<Arc<DyadicPartition>> {
        type Cache = Mutex<HashMap<(usize, usize, u64), Arc<DyadicPartition>>>;
        static CACHE: OnceLock<Cache> = OnceLock::new();
        let key = (grid.d(), grid.n(), grid.box_length().to_bits());
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(p) = cache.lock().expect("partition cache poisoned").get(&key) {
            return Ok(p.clone());
        }
        let built = Arc::new(Self::build(grid)?);
        cache
            .lock()
            .expect("partition cache poisoned")
            .insert(key, built.clone());
        Ok(built)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn j_max(&self) -> i32 {
        self.j_max
    }

    /// Block indices `-1..=j_max`.
    pub fn blocks(&self) -> impl Iterator<Item = i32> {
        -1..=self.j_max
    }

    pub fn block_count(&self) -> usize {
        (self.j_max + 2) as usize
    }

    /// Radius of the ball on which `φ + Σ_{j≤j_max} ψ_j = 1` is asserted.
    pub fn resolved_radius(&self) -> f64 {
        BALL_INNER * (self.j_max as f64).exp2() * self.grid.k_unit()
    }

    pub fn phi_samples(&self) -> &[f64] {
        &self.phi_samples
    }

    pub fn psi_samples(&self, j: i32) -> Option<&[f64]> {
        if (0..=self.j_max).contains(&j) {
            Some(&self.psi_samples[j as usize])
        } else {
            None
        }
    }

    /// Multiplier of `Δ_j`; `None` when the block is identically zero.
    pub fn weights(&self, j: i32) -> Option<&[f64]> {
        if j == -1 {
            Some(&self.phi_samples)
        } else {
            self.psi_samples(j)
        }
    }

    /// `φ(ξ) + Σ_j ψ(2^{-j}ξ)` at a lattice index.
    pub fn partition_sum(&self, index: usize) -> f64 {
        self.phi_samples[index] + self.psi_samples.iter().map(|p| p[index]).sum::<f64>()
    }

    fn check_block(&self, j: i32) -> Result<()> {
        if j > self.j_max {
            Err(Error::Range(format!(
                "block index {j} exceeds j_max = {}",
                self.j_max
            )))
        } else {
            Ok(())
        }
    }

    /// `Δ_j f`; zero for `j ≤ -2`.
    pub fn dyadic_block(&self, f: &SpectralField, j: i32) -> Result<SpectralField> {
        self.check_grid(f)?;
        self.check_block(j)?;
        Ok(match self.weights(j) {
            Some(w) => f.apply_multiplier(w),
            None => SpectralField::zeros(self.grid, f.components()),
        })
    }

    /// `S_j f = Σ_{k ≤ j-1} Δ_k f`; `S_{j_max+1}` is the identity on dealiased fields.
    pub fn low_pass(&self, f: &SpectralField, j: i32) -> Result<SpectralField> {
        self.check_grid(f)?;
        if j > self.j_max + 1 {
            return Err(Error::Range(format!(
                "low-pass index {j} exceeds j_max + 1 = {}",
                self.j_max + 1
            )));
        }
        Ok(f.apply_multiplier(&self.low_pass_weights(j)))
    }

    pub fn low_pass_weights(&self, j: i32) -> Vec<f64> {
        let mut w = vec![0.0; self.grid.len()];
        for k in -1..j {
            if let Some(b) = self.weights(k) {
                for (acc, x) in w.iter_mut().zip(b) {
                    *acc += x;
                }
            }
        }
        w
    }

    /// `Δ̃_k = Δ_{k-1} + Δ_k + Δ_{k+1}`, blocks outside `-1..=j_max` count as zero.
    pub fn tilde_weights(&self, k: i32) -> Vec<f64> {
        let mut w = vec![0.0; self.grid.len()];
        for j in k - 1..=k + 1 {
            if let Some(b) = self.weights(j) {
                for (acc, x) in w.iter_mut().zip(b) {
                    *acc += x;
                }
            }
        }
        w
    }

    pub fn tilde_block(&self, f: &SpectralField, k: i32) -> Result<SpectralField> {
        self.check_grid(f)?;
        Ok(f.apply_multiplier(&self.tilde_weights(k)))
    }

    /// `‖Δ_j f‖_{L²}` for `j = -1..=j_max` (entry 0 is `j = -1`), via Parseval.
    pub fn block_l2_norms(&self, f: &SpectralField) -> Vec<f64> {
        let mut out = vec![0.0; self.block_count()];
        for comp in f.coeffs() {
            let energy: Vec<f64> = comp.iter().map(|z| z.norm_sqr()).collect();
            for (slot, j) in self.blocks().enumerate() {
                let w = self.weights(j).expect("block in range");
                out[slot] += energy.iter().zip(w).map(|(e, x)| e * x * x).sum::<f64>();
            }
        }
        out.iter().map(|e| e.sqrt()).collect()
    }

    /// `‖Δ̃_k f‖_{L²}` for `k = -1..=j_max`.
    pub fn tilde_l2_norms(&self, f: &SpectralField) -> Vec<f64> {
        let energy: Vec<f64> = (0..self.grid.len())
            .map(|i| f.coeffs().iter().map(|c| c[i].norm_sqr()).sum())
            .collect();
        self.blocks()
            .map(|k| {
                let w = self.tilde_weights(k);
                energy
                    .iter()
                    .zip(&w)
                    .map(|(e, x)| e * x * x)
                    .sum::<f64>()
                    .sqrt()
            })
            .collect()
    }

    /// Energy of `f` not captured by the resolved blocks, `‖f − Σ_j Δ_j f‖²`.
    pub fn tail_energy(&self, f: &SpectralField) -> f64 {
        (0..self.grid.len())
            .map(|i| {
                let miss = 1.0 - self.partition_sum(i);
                f.coeffs().iter().map(|c| c[i].norm_sqr()).sum::<f64>() * miss * miss
            })
            .sum()
    }

    fn check_grid(&self, f: &SpectralField) -> Result<()> {
        if f.grid() != &self.grid {
            Err(Error::Config("field and partition live on different grids".into()))
        } else {
            Ok(())
        }
    }
}
