use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::solver::SolverConfig;

/// Parse and validate a JSON config; missing optional keys take defaults.
pub fn parse_config(text: &str) -> Result<SolverConfig> {
    let cfg: SolverConfig =
        serde_json::from_str(text).map_err(|e| Error::Config(format!("cannot parse config: {e}")))?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: impl AsRef<Path>) -> Result<SolverConfig> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    parse_config(&text).map_err(|e| match e {
        Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Pretty JSON with every field, defaults included.
pub fn config_to_json(cfg: &SolverConfig) -> String {
    serde_json::to_string_pretty(cfg).expect("config serializes")
}
