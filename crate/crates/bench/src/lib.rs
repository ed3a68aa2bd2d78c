//! Shared fixtures for the benchmarks.

use std::path::PathBuf;

use canal_core::{load_scene, Scene};

pub fn scene(name: &str) -> Scene {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenes").join(format!("{name}.toml"));
    load_scene(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}
