//! Periodic lattice geometry.
//!
//! Coefficients are stored in row-major order over the `n^d` lattice, axis 0
//! slowest. Lattice index `i` along an axis carries the integer wavenumber
//! `i` for `i < n/2` and `i - n` otherwise, so integers cover `[-n/2, n/2)`.
//! Physical wavenumbers are the integers scaled by `2π / box_length`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    d: usize,
    n: usize,
    box_length: f64,
}

/// One lattice point in Fourier space.
#[derive(Clone, Copy, Debug)]
pub struct Mode {
    pub index: usize,
    /// Integer wavenumbers, unused trailing entries are 0.
    pub k: [i64; 3],
    /// Physical wavevector.
    pub xi: [f64; 3],
    /// Wavevector used by odd-order derivatives: the Nyquist component is
    /// zeroed so real fields stay real.
    pub kappa: [f64; 3],
    pub norm: f64,
    pub dealiased: bool,
}

impl Grid {
    pub fn new(d: usize, n: usize) -> Result<Self> {
        Self::with_box(d, n, 2.0 * PI)
    }

    pub fn with_box(d: usize, n: usize, box_length: f64) -> Result<Self> {
        if d != 2 && d != 3 {
            return Err(Error::Config(format!("dimension must be 2 or 3, got {d}")));
        }
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::Config(format!(
                "modes per dimension must be a power of two >= 8, got {n}"
            )));
        }
        if !(box_length.is_finite() && box_length > 0.0) {
            return Err(Error::Config(format!("box length must be positive, got {box_length}")));
        }
        Ok(Grid { d, n, box_length })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn box_length(&self) -> f64 {
        self.box_length
    }

    /// Number of lattice points, `n^d`.
    pub fn len(&self) -> usize {
        self.n.pow(self.d as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_standard_box(&self) -> bool {
        self.box_length == 2.0 * PI
    }

    /// Physical wavenumber per unit integer wavenumber.
    pub fn k_unit(&self) -> f64 {
        2.0 * PI / self.box_length
    }

    /// Largest integer wavenumber kept by the 2/3 rule.
    pub fn dealias_cutoff(&self) -> i64 {
        (self.n / 3) as i64
    }

    pub fn wavenumber(&self, i: usize) -> i64 {
        if i < self.n / 2 {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    /// Lattice index along one axis for an integer wavenumber.
    pub fn axis_index(&self, k: i64) -> usize {
        k.rem_euclid(self.n as i64) as usize
    }

    pub fn index_of(&self, k: &[i64]) -> usize {
        k.iter()
            .take(self.d)
            .fold(0usize, |acc, &ki| acc * self.n + self.axis_index(ki))
    }

    /// Flat index of `-k`.
    pub fn conjugate_index(&self, index: usize) -> usize {
        let mut rest = index;
        let mut out = 0usize;
        let mut scale = 1usize;
        for _ in 0..self.d {
            let i = rest % self.n;
            rest /= self.n;
            out += ((self.n - i) % self.n) * scale;
            scale *= self.n;
        }
        out
    }

    pub fn mode(&self, index: usize) -> Mode {
        let mut k = [0i64; 3];
        let mut rest = index;
        for axis in (0..self.d).rev() {
            k[axis] = self.wavenumber(rest % self.n);
            rest /= self.n;
        }
        let unit = self.k_unit();
        let nyquist = -(self.n as i64) / 2;
        let cutoff = self.dealias_cutoff();
        let mut xi = [0.0; 3];
        let mut kappa = [0.0; 3];
        let mut dealiased = true;
        for axis in 0..self.d {
            xi[axis] = k[axis] as f64 * unit;
            kappa[axis] = if k[axis] == nyquist { 0.0 } else { xi[axis] };
            dealiased &= k[axis].abs() <= cutoff;
        }
        let norm = xi.iter().map(|x| x * x).sum::<f64>().sqrt();
        Mode {
            index,
            k,
            xi,
            kappa,
            norm,
            dealiased,
        }
    }

    pub fn modes(&self) -> impl Iterator<Item = Mode> + '_ {
        (0..self.len()).map(move |i| self.mode(i))
    }

    /// Collocation point coordinates for a flat physical index.
    pub fn point(&self, index: usize) -> [f64; 3] {
        let h = self.box_length / self.n as f64;
        let mut x = [0.0; 3];
        let mut rest = index;
        for axis in (0..self.d).rev() {
            x[axis] = (rest % self.n) as f64 * h;
            rest /= self.n;
        }
        x
    }

    /// Number of components of the microrotation field: scalar in 2D.
    pub fn microrotation_components(&self) -> usize {
        if self.d == 2 {
            1
        } else {
            3
        }
    }
}
