//! Multi-dimensional FFT over the lattice, built from 1D `rustfft` plans
//! applied axis by axis. Plans are cached per length and shared read-only.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::grid::Grid;

struct PlanPair {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

fn plans(n: usize) -> Arc<PlanPair> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<PlanPair>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("fft plan cache poisoned");
    guard
        .entry(n)
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            Arc::new(PlanPair {
                forward: planner.plan_fft_forward(n),
                inverse: planner.plan_fft_inverse(n),
            })
        })
        .clone()
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Unnormalized d-dimensional transform in place.
pub fn transform_in_place(grid: &Grid, data: &mut [Complex64], direction: Direction) {
    let n = grid.n();
    let d = grid.d();
    debug_assert_eq!(data.len(), grid.len());
    let pair = plans(n);
    let fft = match direction {
        Direction::Forward => &pair.forward,
        Direction::Inverse => &pair.inverse,
    };
    let total = data.len();
    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
    let mut lines = vec![Complex64::default(); total];
    for axis in 0..d {
        let stride = n.pow((d - 1 - axis) as u32);
        if stride == 1 {
            fft.process_with_scratch(data, &mut scratch);
            continue;
        }
        // gather every line along `axis` into contiguous rows
        let block = stride * n;
        let mut row = 0;
        for outer in (0..total).step_by(block) {
            for inner in 0..stride {
                let base = outer + inner;
                let dst = &mut lines[row * n..(row + 1) * n];
                for (i, v) in dst.iter_mut().enumerate() {
                    *v = data[base + i * stride];
                }
                row += 1;
            }
        }
        fft.process_with_scratch(&mut lines, &mut scratch);
        row = 0;
        for outer in (0..total).step_by(block) {
            for inner in 0..stride {
                let base = outer + inner;
                let src = &lines[row * n..(row + 1) * n];
                for (i, v) in src.iter().enumerate() {
                    data[base + i * stride] = *v;
                }
                row += 1;
            }
        }
    }
}

/// Physical samples to coefficients, `c_ξ = N^{-1} Σ_x f(x) e^{-iξ·x}`.
pub fn forward(grid: &Grid, samples: &[f64]) -> Vec<Complex64> {
    let mut data: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    transform_in_place(grid, &mut data, Direction::Forward);
    let scale = 1.0 / grid.len() as f64;
    for v in data.iter_mut() {
        *v *= scale;
    }
    data
}

/// Coefficients to physical samples, `f(x) = Σ_ξ c_ξ e^{iξ·x}`; the imaginary
/// residue of a Hermitian coefficient set is dropped.
pub fn inverse(grid: &Grid, coeffs: &[Complex64]) -> Vec<f64> {
    let mut data = coeffs.to_vec();
    transform_in_place(grid, &mut data, Direction::Inverse);
    data.into_iter().map(|c| c.re).collect()
}
