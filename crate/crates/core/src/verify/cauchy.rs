use serde::Serialize;

use crate::error::{Error, Result};
use crate::solver::Trajectory;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CauchyReport {
    /// `sup_t‖u⁽ⁱ⁺¹⁾ − u⁽ⁱ⁾‖ + sup_t‖w⁽ⁱ⁺¹⁾ − w⁽ⁱ⁾‖`, one entry per consecutive pair.
    pub diffs: Vec<f64>,
    /// Geometric ratio from a least-squares fit of `ln diff` against the index.
    pub ratio: f64,
}

/// Least-squares geometric ratio of `diffs[from..]`. Zero entries end the
/// fit (the sequence has converged exactly); fewer than two usable entries
/// give ratio 0 when the sequence vanishes and an error otherwise.
pub fn fit_ratio(diffs: &[f64], from: usize) -> Result<f64> {
    let tail = diffs.get(from..).unwrap_or(&[]);
    let points: Vec<(f64, f64)> = tail
        .iter()
        .take_while(|&&d| d > 0.0)
        .enumerate()
        .map(|(i, d)| (i as f64, d.ln()))
        .collect();
    if points.len() < 2 {
        if tail.contains(&0.0) {
            return Ok(0.0);
        }
        return Err(Error::InsufficientData(format!(
            "need two nonzero differences from index {from}, have {}",
            points.len()
        )));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = points.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    Ok((sxy / sxx).exp())
}

pub fn cauchy_report(iterates: &[Trajectory]) -> Result<CauchyReport> {
    if iterates.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "a Cauchy report needs at least 2 iterates, got {}",
            iterates.len()
        )));
    }
    let diffs = iterates
        .windows(2)
        .map(|p| p[1].sup_distance(&p[0]).map(|(u, w)| u + w))
        .collect::<Result<Vec<f64>>>()?;
    let ratio = if diffs.iter().all(|&d| d == 0.0) {
        0.0
    } else {
        fit_ratio(&diffs, 0).unwrap_or(f64::NAN)
    };
    Ok(CauchyReport { diffs, ratio })
}
