//! Configuration files, snapshots, norm series and run manifests.

pub mod config;
pub mod manifest;
pub mod series;
pub mod snapshot;

pub use config::{config_to_json, load_config, parse_config};
pub use manifest::{build_initial, RunManifest};
pub use series::{export_rows, export_series, read_series, NormRow, NormSeries};
pub use snapshot::{read_field, read_snapshot, read_snapshot_for, write_field, write_snapshot};
