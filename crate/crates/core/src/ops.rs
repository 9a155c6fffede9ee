//! Differential and projection operators on spectral fields.
//!
//! Everything here is a Fourier multiplier except the pseudo-spectral
//! products ([`product`], [`advect`]), which go through physical space and
//! come back masked by the 2/3 rule.

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::grid::Grid;
use crate::state::{PhysicalParams, State};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Per-mode symbol `|ξ|^{2a}` with the zero mode mapped to 0 for `a > 0`
/// and to 1 for `a = 0`.
pub fn fractional_symbol(grid: &Grid, a: f64) -> Result<Vec<f64>> {
    if !(a >= 0.0) {
        return Err(Error::Domain(format!("fractional exponent must be >= 0, got {a}")));
    }
    Ok(grid
        .modes()
        .map(|m| {
            if a == 0.0 {
                1.0
            } else if m.norm == 0.0 {
                0.0
            } else {
                m.norm.powf(2.0 * a)
            }
        })
        .collect())
}

/// `(-Δ)^a f`.
pub fn fractional_laplacian(f: &SpectralField, a: f64) -> Result<SpectralField> {
    let symbol = fractional_symbol(f.grid(), a)?;
    Ok(f.apply_multiplier(&symbol))
}

/// Leray projection `v - κ(κ·v)/|κ|²` on every mode; the zero mode (and the
/// pure Nyquist modes, which carry no derivative) pass through unchanged.
pub fn leray_project(v: &SpectralField) -> Result<SpectralField> {
    let grid = *v.grid();
    let d = grid.d();
    if v.components() != d {
        return Err(Error::Shape(format!(
            "Leray projection needs a {d}-component vector field, got {} components",
            v.components()
        )));
    }
    let mut out: Vec<Vec<Complex64>> = v.coeffs().to_vec();
    for m in grid.modes() {
        let k2: f64 = m.kappa[..d].iter().map(|x| x * x).sum();
        if k2 == 0.0 {
            continue;
        }
        let mut dot = Complex64::default();
        for a in 0..d {
            dot += v.component(a)[m.index] * m.kappa[a];
        }
        for (a, comp) in out.iter_mut().enumerate() {
            comp[m.index] -= dot * (m.kappa[a] / k2);
        }
    }
    SpectralField::from_coeffs(grid, out)
}

/// Partial derivative along `axis` of every component.
pub fn partial(f: &SpectralField, axis: usize) -> SpectralField {
    let grid = *f.grid();
    f.map_coeffs(|i, _, z| z * I * grid.mode(i).kappa[axis])
}

pub fn gradient(f: &SpectralField) -> Result<SpectralField> {
    if !f.is_scalar() {
        return Err(Error::Shape("gradient expects a scalar field".into()));
    }
    let grid = *f.grid();
    let comps = (0..grid.d())
        .map(|a| partial(f, a).into_coeffs().remove(0))
        .collect();
    SpectralField::from_coeffs(grid, comps)
}

/// `Σ_i ∂_i v_i`.
pub fn divergence(v: &SpectralField) -> Result<SpectralField> {
    let grid = *v.grid();
    let d = grid.d();
    if v.components() != d {
        return Err(Error::Shape(format!(
            "divergence needs a {d}-component vector field, got {} components",
            v.components()
        )));
    }
    let mut out = vec![Complex64::default(); grid.len()];
    for m in grid.modes() {
        let mut acc = Complex64::default();
        for a in 0..d {
            acc += v.component(a)[m.index] * m.kappa[a];
        }
        out[m.index] = acc * I;
    }
    SpectralField::from_coeffs(grid, vec![out])
}

/// Curl with the 2D micropolar conventions: a 2-vector maps to the scalar
/// `∂₁v₂ − ∂₂v₁` and a scalar maps to the vector `(∂₂w, −∂₁w)`. In 3D the
/// usual vector curl.
pub fn curl(f: &SpectralField) -> Result<SpectralField> {
    let grid = *f.grid();
    let n = grid.len();
    let comps = f.coeffs();
    match (grid.d(), f.components()) {
        (2, 2) => {
            let mut out = vec![Complex64::default(); n];
            for m in grid.modes() {
                let i = m.index;
                out[i] = I * (comps[1][i] * m.kappa[0] - comps[0][i] * m.kappa[1]);
            }
            SpectralField::from_coeffs(grid, vec![out])
        }
        (2, 1) => {
            let mut a = vec![Complex64::default(); n];
            let mut b = vec![Complex64::default(); n];
            for m in grid.modes() {
                let i = m.index;
                a[i] = I * comps[0][i] * m.kappa[1];
                b[i] = -I * comps[0][i] * m.kappa[0];
            }
            SpectralField::from_coeffs(grid, vec![a, b])
        }
        (3, 3) => {
            let mut out = vec![vec![Complex64::default(); n]; 3];
            for m in grid.modes() {
                let i = m.index;
                let k = m.kappa;
                out[0][i] = I * (comps[2][i] * k[1] - comps[1][i] * k[2]);
                out[1][i] = I * (comps[0][i] * k[2] - comps[2][i] * k[0]);
                out[2][i] = I * (comps[1][i] * k[0] - comps[0][i] * k[1]);
            }
            SpectralField::from_coeffs(grid, out)
        }
        (d, c) => Err(Error::Shape(format!(
            "curl is undefined for a {c}-component field in {d}D"
        ))),
    }
}

/// Which state component a curl is taken of.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurlOf {
    Velocity,
    Microrotation,
}

/// Curl with a shape check against the role of the argument.
pub fn curl_map(f: &SpectralField, which: CurlOf) -> Result<SpectralField> {
    let grid = f.grid();
    let expected = match which {
        CurlOf::Velocity => grid.d(),
        CurlOf::Microrotation => grid.microrotation_components(),
    };
    if f.components() != expected {
        return Err(Error::Shape(format!(
            "{which:?} field in {}D has {expected} components, got {}",
            grid.d(),
            f.components()
        )));
    }
    curl(f)
}

fn require_dealiased(f: &SpectralField, what: &str) -> Result<()> {
    if f.is_dealiased() {
        Ok(())
    } else {
        Err(Error::Contract(format!(
            "{what} carries content outside the 2/3-rule box ({:.3e})",
            f.aliased_content()
        )))
    }
}

fn to_spectral_dealiased(grid: &Grid, samples: &[Vec<f64>]) -> SpectralField {
    SpectralField::from_physical(*grid, samples)
        .expect("sample shape is consistent by construction")
        .dealias()
}

/// Pseudo-spectral pointwise product. A scalar factor broadcasts over the
/// other factor's components; equal component counts multiply componentwise.
pub fn product(f: &SpectralField, g: &SpectralField) -> Result<SpectralField> {
    if f.grid() != g.grid() {
        return Err(Error::Config("fields live on different grids".into()));
    }
    let (fc, gc) = (f.components(), g.components());
    if fc != gc && fc != 1 && gc != 1 {
        return Err(Error::Shape(format!(
            "cannot multiply {fc}-component and {gc}-component fields"
        )));
    }
    let fp = f.to_physical();
    let gp = g.to_physical();
    let out_c = fc.max(gc);
    let samples: Vec<Vec<f64>> = (0..out_c)
        .map(|c| {
            let a = &fp[if fc == 1 { 0 } else { c }];
            let b = &gp[if gc == 1 { 0 } else { c }];
            a.iter().zip(b).map(|(x, y)| x * y).collect()
        })
        .collect();
    Ok(to_spectral_dealiased(f.grid(), &samples))
}

/// `(u·∇)v` for a d-vector `u` and any `v`, dealiased by the 2/3 rule.
pub fn advect(u: &SpectralField, v: &SpectralField) -> Result<SpectralField> {
    let grid = *u.grid();
    let d = grid.d();
    if v.grid() != &grid {
        return Err(Error::Config("fields live on different grids".into()));
    }
    if u.components() != d {
        return Err(Error::Shape(format!(
            "advecting velocity needs {d} components, got {}",
            u.components()
        )));
    }
    require_dealiased(u, "advecting velocity")?;
    require_dealiased(v, "advected field")?;
    let up = u.to_physical();
    let mut samples = vec![vec![0.0; grid.len()]; v.components()];
    for (axis, ua) in up.iter().enumerate().take(d) {
        let dv = partial(v, axis).to_physical();
        for (acc, dvc) in samples.iter_mut().zip(&dv) {
            for ((s, &ui), &g) in acc.iter_mut().zip(ua).zip(dvc) {
                *s += ui * g;
            }
        }
    }
    Ok(to_spectral_dealiased(&grid, &samples))
}

/// Diagnostic pressure: `∇Π` is the gradient part of `−u·∇u + 2k∇×w`, mean zero.
pub fn recover_pressure(state: &State, params: &PhysicalParams) -> Result<SpectralField> {
    let grid = *state.grid();
    let d = grid.d();
    let mut forcing = advect(&state.u, &state.u)?.scale(-1.0);
    if params.k != 0.0 {
        let c = curl_map(&state.w, CurlOf::Microrotation)?;
        forcing = forcing.axpy(2.0 * params.k, &c)?;
    }
    let mut out = vec![Complex64::default(); grid.len()];
    for m in grid.modes() {
        let k2: f64 = m.kappa[..d].iter().map(|x| x * x).sum();
        if k2 == 0.0 {
            continue;
        }
        let mut dot = Complex64::default();
        for a in 0..d {
            dot += forcing.component(a)[m.index] * m.kappa[a];
        }
        out[m.index] = -I * dot / k2;
    }
    SpectralField::from_coeffs(grid, vec![out])
}
