use serde::{Deserialize, Serialize};

/// Pass/fail record written by every `verify` command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub margin: f64,
    pub c_fit: Option<f64>,
    pub dt: f64,
    pub n: usize,
    pub seed: Option<u64>,
}
