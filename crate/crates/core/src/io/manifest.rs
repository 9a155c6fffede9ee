use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::grid::Grid;
use crate::solver::{random_data, single_mode_data, InitialData, SolverConfig};

use super::snapshot::read_snapshot_for;

pub const MANIFEST_NAME: &str = "manifest.json";

/// Everything needed to reproduce a run directory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config: SolverConfig,
    pub initial: InitialData,
    pub output_dir: String,
    pub tool_version: String,
    pub created_at: String,
    #[serde(default)]
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub snapshots: Vec<String>,
}

impl RunManifest {
    /// Write `manifest.json` into `dir`, refusing to replace an existing one.
    pub fn write_into(&self, dir: impl AsRef<Path>) -> Result<()> {
        let path = dir.as_ref().join(MANIFEST_NAME);
        if path.exists() {
            return Err(Error::Config(format!(
                "{} already holds a manifest",
                dir.as_ref().display()
            )));
        }
        fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }

    pub fn read_from(dir: impl AsRef<Path>) -> Result<Self> {
        let text = fs::read_to_string(dir.as_ref().join(MANIFEST_NAME))?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Materialize initial data on `grid`.
pub fn build_initial(init: &InitialData, grid: Grid) -> Result<(SpectralField, SpectralField)> {
    match init {
        InitialData::SingleMode { amplitude } => Ok(single_mode_data(grid, *amplitude)),
        InitialData::Random { seed, profile } => Ok(random_data(grid, profile, *seed)),
        InitialData::Snapshot { path } => {
            let s = read_snapshot_for(path, &grid)?;
            Ok((s.u, s.w))
        }
    }
}
