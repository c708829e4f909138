//! Run configuration, command implementations and table export.

mod commands;
mod config;
mod export;

pub use commands::{
    cmd_build, cmd_export, cmd_holder, cmd_levels, cmd_validate, levels_file, Check, ExportBundle,
    HolderOutput, Manifest, ValidateReport, HOLDER_FILE, MANIFEST_FILE, SAMPLES_FILE,
};
pub use config::{QRecipeSpec, QTableSpec, RunConfig};
pub use export::{render_csv, sha256_hex, TableEntry};
