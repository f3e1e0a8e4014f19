//! Bundled example surfaces.
//!
//! The `fixtures/` directory at the repository root ships triangulations of
//! the surfaces (0,3), (0,4) and (1,2). The environment variable
//! `QTGRAV_FIXTURES` overrides the directory.

use std::path::PathBuf;

use crate::triangulation::{LabeledTriangulation, TriangulationError, TriangulationFile};

/// Environment variable overriding the fixture directory.
pub const FIXTURE_ENV: &str = "QTGRAV_FIXTURES";

/// File names of the bundled surfaces, in the order (0,3), (0,4), (1,2).
pub const BUNDLED: [&str; 3] = ["example_0_3.json", "example_0_4.json", "example_1_2.json"];

/// The fixture directory: `$QTGRAV_FIXTURES` if set, else the repository copy.
pub fn fixture_dir() -> PathBuf {
    std::env::var_os(FIXTURE_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures")))
}

/// Loads a triangulation file from the fixture directory.
pub fn load(name: &str) -> Result<LabeledTriangulation, TriangulationError> {
    let path = fixture_dir().join(name);
    let text = std::fs::read_to_string(&path)
        .map_err(|e| TriangulationError::Format(format!("{}: {e}", path.display())))?;
    TriangulationFile::from_json(&text)?.to_triangulation()
}

/// All bundled surfaces, in the order of [`BUNDLED`].
pub fn bundled() -> Result<Vec<LabeledTriangulation>, TriangulationError> {
    BUNDLED.iter().map(|n| load(n)).collect()
}
