//! JSON curvature files: a dimension and a generating set of components,
//! completed over the symmetry orbits on load.
//!
//! ```json
//! {
//!   "dimension": 4,
//!   "components": [ { "i": 1, "j": 2, "k": 1, "l": 2, "value": 0.7 } ],
//!   "metadata": { "label": "single blade" }
//! }
//! ```

use std::path::{Path, PathBuf};

use getzler_core::exterior::MAX_DIMENSION;
use getzler_core::geometry::RiemannTensor;
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use crate::InputError;

/// Environment variable naming the directory that relative curvature paths
/// are resolved against.
pub const FIXTURE_DIR_ENV: &str = "GETZLER_FIXTURE_DIR";

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Component {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub l: usize,
    pub value: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile<'a> {
    #[serde(borrow)]
    dimension: &'a RawValue,
    #[serde(borrow)]
    components: Vec<&'a RawValue>,
    #[serde(default)]
    metadata: Option<Metadata>,
}

/// A validated curvature file.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureFile {
    pub dimension: usize,
    pub components: Vec<Component>,
    pub metadata: Metadata,
    pub tensor: RiemannTensor,
}

/// 1-based line of a byte offset.
fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].bytes().filter(|b| *b == b'\n').count() + 1
}

/// Line on which a borrowed raw value starts.
fn raw_line(text: &str, raw: &RawValue) -> usize {
    let offset = raw.get().as_ptr() as usize - text.as_ptr() as usize;
    line_of(text, offset)
}

impl CurvatureFile {
    /// Parses and validates; `origin` names the input in diagnostics.
    pub fn parse(text: &str, origin: &str) -> Result<Self, InputError> {
        let at = |line: usize, message: String| InputError::Malformed { origin: origin.to_string(), line, message };
        let raw: RawFile<'_> = serde_json::from_str(text).map_err(|e| at(e.line(), e.to_string()))?;

        let dim_line = raw_line(text, raw.dimension);
        let dimension: usize = serde_json::from_str(raw.dimension.get())
            .map_err(|_| at(dim_line, format!("dimension must be a positive integer, found {}", raw.dimension.get())))?;
        if dimension < 2 || dimension % 2 == 1 || dimension > MAX_DIMENSION {
            return Err(at(dim_line, format!("dimension must be even and in 2..={MAX_DIMENSION}, found {dimension}")));
        }

        let mut components = Vec::with_capacity(raw.components.len());
        for (idx, rv) in raw.components.iter().enumerate() {
            let line = raw_line(text, rv);
            let c: Component =
                serde_json::from_str(rv.get()).map_err(|e| at(line, format!("component {idx}: {e}")))?;
            for (name, index) in [("i", c.i), ("j", c.j), ("k", c.k), ("l", c.l)] {
                if index == 0 || index > dimension {
                    return Err(at(line, format!("component {idx}: index {name} = {index} outside 1..={dimension}")));
                }
            }
            if !c.value.is_finite() {
                return Err(at(line, format!("component {idx}: value is not finite")));
            }
            if (c.i == c.j || c.k == c.l) && c.value != 0.0 {
                return Err(at(
                    line,
                    format!(
                        "component {idx}: R_{}{}{}{} must vanish by antisymmetry, found {}",
                        c.i, c.j, c.k, c.l, c.value
                    ),
                ));
            }
            let prefix: Vec<_> = components.iter().chain(std::iter::once(&c)).map(Component::tuple).collect();
            if let Err(e) = RiemannTensor::from_generators(dimension, &prefix) {
                if matches!(e, getzler_core::Error::CurvatureSymmetry { symmetry, .. } if symmetry.starts_with("consistency")) {
                    return Err(at(line, format!("component {idx} contradicts an earlier component: {e}")));
                }
            }
            components.push(c);
        }
        let list_line = raw.components.first().map_or(dim_line, |rv| raw_line(text, rv));
        let generators: Vec<_> = components.iter().map(Component::tuple).collect();
        let tensor = RiemannTensor::from_generators(dimension, &generators).map_err(|e| at(list_line, e.to_string()))?;
        Ok(Self { dimension, components, metadata: raw.metadata.unwrap_or_default(), tensor })
    }

    pub fn load(path: &Path) -> Result<(Self, Vec<u8>), InputError> {
        let resolved = resolve(path);
        let bytes = std::fs::read(&resolved)
            .map_err(|e| InputError::Io { path: resolved.display().to_string(), message: e.to_string() })?;
        let text = std::str::from_utf8(&bytes).map_err(|e| InputError::Malformed {
            origin: resolved.display().to_string(),
            line: line_of(&String::from_utf8_lossy(&bytes), e.valid_up_to()),
            message: "file is not valid UTF-8".to_string(),
        })?;
        let file = Self::parse(text, &resolved.display().to_string())?;
        Ok((file, bytes))
    }
}

impl Component {
    fn tuple(&self) -> (usize, usize, usize, usize, f64) {
        (self.i, self.j, self.k, self.l, self.value)
    }
}

/// Relative paths that do not exist as given are looked up in the fixture
/// directory, when one is configured.
pub fn resolve(path: &Path) -> PathBuf {
    if path.is_relative() && !path.exists() {
        if let Some(dir) = std::env::var_os(FIXTURE_DIR_ENV) {
            return Path::new(&dir).join(path);
        }
    }
    path.to_path_buf()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn err_line(text: &str) -> usize {
        match CurvatureFile::parse(text, "test") {
            Err(InputError::Malformed { line, .. }) => line,
            other => panic!("expected a malformed-input error, got {other:?}"),
        }
    }

    #[test]
    fn completes_orbits() {
        let f = CurvatureFile::parse(
            r#"{"dimension": 4, "components": [{"i": 1, "j": 2, "k": 1, "l": 2, "value": 0.5}]}"#,
            "test",
        )
        .unwrap();
        assert_eq!(f.tensor.get(2, 1, 2, 1), 0.5);
        assert_eq!(f.tensor.get(1, 2, 2, 1), -0.5);
    }

    #[test]
    fn diagnostics_point_at_the_offending_line() {
        let bad_index = "{\n  \"dimension\": 4,\n  \"components\": [\n    {\"i\": 1, \"j\": 2, \"k\": 1, \"l\": 2, \"value\": 0.5},\n    {\"i\": 1, \"j\": 5, \"k\": 1, \"l\": 2, \"value\": 0.5}\n  ]\n}";
        assert_eq!(err_line(bad_index), 5);
        let odd = "{\n  \"dimension\": 3,\n  \"components\": []\n}";
        assert_eq!(err_line(odd), 2);
        let syntax = "{\n  \"dimension\": 4,\n  \"components\": [\n    {\"i\": 1,, }\n  ]\n}";
        assert_eq!(err_line(syntax), 4);
        let clash = "{\n  \"dimension\": 4,\n  \"components\": [\n    {\"i\": 1, \"j\": 2, \"k\": 3, \"l\": 4, \"value\": 0.5},\n    {\"i\": 3, \"j\": 4, \"k\": 1, \"l\": 2, \"value\": 0.2}\n  ]\n}";
        assert_eq!(err_line(clash), 5);
        let bianchi = "{\n  \"dimension\": 4,\n  \"components\": [\n    {\"i\": 1, \"j\": 2, \"k\": 3, \"l\": 4, \"value\": 0.5}\n  ]\n}";
        assert_eq!(err_line(bianchi), 4);
    }
}
