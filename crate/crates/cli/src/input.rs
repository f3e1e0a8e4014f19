//! Reading triangulation and word files.
//!
//! A path that does not exist as given is looked up next to the file that
//! refers to it (for the `start` of a word file) and then in the fixture
//! directory, so bundled surfaces can be named by file name alone.

use std::path::{Path, PathBuf};

use qtgrav::fixtures::fixture_dir;
use qtgrav::triangulation::{
    LabeledTriangulation, MappingClassLoop, TriangulationError, TriangulationFile, WordFile,
};

/// The first existing candidate for `path`, or `path` itself.
pub fn resolve(path: &Path, base: Option<&Path>) -> PathBuf {
    let candidates = std::iter::once(path.to_path_buf())
        .chain(base.map(|b| b.join(path)))
        .chain(std::iter::once(fixture_dir().join(path)));
    for c in candidates {
        if c.is_file() {
            return c;
        }
    }
    path.to_path_buf()
}

fn read(path: &Path) -> Result<String, TriangulationError> {
    std::fs::read_to_string(path)
        .map_err(|e| TriangulationError::Format(format!("{}: {e}", path.display())))
}

/// Loads and validates a triangulation file.
pub fn triangulation(path: &Path) -> Result<LabeledTriangulation, TriangulationError> {
    TriangulationFile::from_json(&read(&resolve(path, None))?)?.to_triangulation()
}

/// Loads a word file and its start triangulation as a loop. A missing
/// `closing_iso` means the identity.
pub fn mapping_loop(path: &Path) -> Result<MappingClassLoop, TriangulationError> {
    let path = resolve(path, None);
    let file = WordFile::from_json(&read(&path)?)?;
    let start = if let Some(p) = file.start_path() {
        let base = path.parent().map(Path::to_path_buf);
        TriangulationFile::from_json(&read(&resolve(Path::new(p), base.as_deref()))?)?
            .to_triangulation()?
    } else if let Some(inline) = file.start_inline() {
        inline?.to_triangulation()?
    } else {
        return Err(TriangulationError::Format(
            "`start` must be a path or a triangulation object".into(),
        ));
    };
    file.to_loop(start)
}
