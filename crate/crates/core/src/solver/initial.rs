use rustfft::num_complex::Complex64;

use crate::field::SpectralField;
use crate::grid::Grid;
use crate::random::{random_field, random_solenoidal, SpectrumProfile};

/// `u₀ = A(sin x₂, 0)`, `w₀ = A cos x₁` in 2D;
/// `u₀ = A(sin x₂, sin x₃, sin x₁)`, `w₀ = A(cos x₁, cos x₂, cos x₃)` in 3D.
/// Coefficients are set exactly.
pub fn single_mode_data(grid: Grid, amplitude: f64) -> (SpectralField, SpectralField) {
    let d = grid.d();
    let sine = Complex64::new(0.0, -0.5 * amplitude);
    let cosine = Complex64::new(0.5 * amplitude, 0.0);
    let unit = |axis: usize| {
        let mut k = vec![0i64; d];
        k[axis] = 1;
        k
    };
    let mut u = SpectralField::zeros(grid, d);
    let mut w = SpectralField::zeros(grid, grid.microrotation_components());
    if d == 2 {
        u.set_real_mode(0, &unit(1), sine);
        w.set_real_mode(0, &unit(0), cosine);
    } else {
        for c in 0..3 {
            u.set_real_mode(c, &unit((c + 1) % 3), sine);
            w.set_real_mode(c, &unit(c), cosine);
        }
    }
    (u, w)
}

/// Seeded dealiased data: solenoidal `u₀` from `seed`, `w₀` from `seed + 1`.
pub fn random_data(grid: Grid, profile: &SpectrumProfile, seed: u64) -> (SpectralField, SpectralField) {
    (
        random_solenoidal(grid, profile, seed),
        random_field(grid, grid.microrotation_components(), profile, seed.wrapping_add(1), true),
    )
}
