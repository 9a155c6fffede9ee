use std::fs::File;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::solver::{SolverConfig, Trajectory, YIndices};

/// One long-format row; `value` is written with 17 significant digits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormRow {
    pub t: f64,
    pub iterate: usize,
    pub norm: String,
    pub value: f64,
}

/// Append-only table of norm values.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct NormSeries {
    rows: Vec<NormRow>,
}

impl NormSeries {
    pub fn new() -> Self {
        NormSeries::default()
    }

    pub fn push(&mut self, t: f64, iterate: usize, norm: impl Into<String>, value: f64) {
        self.rows.push(NormRow {
            t,
            iterate,
            norm: norm.into(),
            value,
        });
    }

    pub fn rows(&self) -> &[NormRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Working-space norms and raw block norms of every stored state.
    pub fn push_trajectory(&mut self, traj: &Trajectory, iterate: usize, cfg: &SolverConfig) {
        let idx = YIndices::new(cfg.d, &cfg.params, cfg.mode);
        for (s, b) in traj.states().iter().zip(traj.block_norms()) {
            self.push(s.t, iterate, "u_sup", b.u_besov(idx.u_sup));
            self.push(s.t, iterate, "w_sup", b.w_besov(idx.w_sup));
            self.push(s.t, iterate, "u_int", b.u_besov(idx.u_int));
            self.push(s.t, iterate, "w_int", b.w_besov(idx.w_int));
            self.push(s.t, iterate, "energy", s.energy_sq());
            for (slot, v) in b.u.iter().enumerate() {
                self.push(s.t, iterate, format!("u_block_{}", slot as i32 - 1), *v);
            }
            for (slot, v) in b.w.iter().enumerate() {
                self.push(s.t, iterate, format!("w_block_{}", slot as i32 - 1), *v);
            }
        }
    }
}

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn export_series(series: &NormSeries, path: impl AsRef<Path>) -> Result<()> {
    let mut w = csv::Writer::from_writer(File::create(path)?);
    w.write_record(["t", "iterate", "norm", "value"])?;
    for r in series.rows() {
        w.write_record([fmt(r.t), r.iterate.to_string(), r.norm.clone(), fmt(r.value)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_series(path: impl AsRef<Path>) -> Result<NormSeries> {
    let mut r = csv::Reader::from_path(path)?;
    let rows = r.deserialize().collect::<std::result::Result<Vec<NormRow>, _>>()?;
    Ok(NormSeries { rows })
}

/// Write any serializable records as CSV, header taken from the field names.
pub fn export_rows<T: Serialize>(rows: &[T], path: impl AsRef<Path>) -> Result<()> {
    let mut w = csv::Writer::from_writer(File::create(path)?);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
