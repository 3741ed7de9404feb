//! Config-driven experiment runs: presets, key=value files, CSV and manifest
//! output.

pub mod config;
pub mod execute;
pub mod presets;

pub use config::{parse_kv, OutputMode, RunConfig};
pub use execute::{execute, read_manifest, config_from_manifest, Manifest, PointFailure, RunReport};
pub use presets::{preset_entries, Preset};
