use serde::Serialize;

use crate::error::{Error, Result};
use crate::solver::trajectory::cumulative_trapezoid;

/// `B(t) = y0 · exp(∫₀ᵗ C)` with the integral by the trapezoid rule on `times`.
pub fn gronwall_envelope(times: &[f64], rate: &[f64], y0: f64) -> Result<Vec<f64>> {
    if !(y0 >= 0.0) {
        return Err(Error::Domain(format!("initial value must be >= 0, got {y0}")));
    }
    if times.len() != rate.len() {
        return Err(Error::Shape(format!(
            "{} times but {} rate samples",
            times.len(),
            rate.len()
        )));
    }
    if y0 == 0.0 {
        return Ok(vec![0.0; times.len()]);
    }
    Ok(cumulative_trapezoid(times, rate)
        .into_iter()
        .map(|i| y0 * i.exp())
        .collect())
}

/// Observed squared difference `D(t)` against its envelope `B(t)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnvelopeSeries {
    pub times: Vec<f64>,
    /// `C(t)`, already multiplied by the fitted constant
    pub rate: Vec<f64>,
    pub bound: Vec<f64>,
    pub observed: Vec<f64>,
    pub slack: f64,
}

impl EnvelopeSeries {
    pub fn new(times: Vec<f64>, rate: Vec<f64>, observed: Vec<f64>, slack: f64) -> Result<Self> {
        if observed.len() != times.len() {
            return Err(Error::Shape("observed series does not match the time grid".into()));
        }
        let bound = gronwall_envelope(&times, &rate, observed.first().copied().unwrap_or(0.0))?;
        Ok(EnvelopeSeries {
            times,
            rate,
            bound,
            observed,
            slack,
        })
    }

    /// `max_t D(t) / (B(t)(1 + slack))`, with `0/0 = 0`.
    pub fn worst_ratio(&self) -> f64 {
        self.observed
            .iter()
            .zip(&self.bound)
            .map(|(&d, &b)| {
                if d == 0.0 {
                    0.0
                } else {
                    d / (b * (1.0 + self.slack))
                }
            })
            .fold(0.0, f64::max)
    }

    pub fn valid(&self) -> bool {
        self.worst_ratio() <= 1.0
    }

    pub fn margin(&self) -> f64 {
        1.0 - self.worst_ratio()
    }
}
