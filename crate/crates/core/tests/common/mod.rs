#![allow(dead_code)]

use std::path::PathBuf;

use fuzzy_fif::io::RunConfig;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

pub fn fixture(name: &str) -> RunConfig {
    RunConfig::load(&fixture_path(name)).expect("fixture loads")
}
