//! Built-in device descriptions and architecture lookup.

use std::path::Path;

use codar_core::qam::{
    grid_architecture, load_architecture, Architecture, ArchitectureConfig, DurationMap,
};

/// Names and JSON sources of the bundled devices.
pub const PRESETS: &[(&str, &str)] = &[
    ("fig2-square", include_str!("../presets/fig2-square.json")),
    ("six-qubit", include_str!("../presets/six-qubit.json")),
    (
        "q16-melbourne",
        include_str!("../presets/q16-melbourne.json"),
    ),
    ("q20-tokyo", include_str!("../presets/q20-tokyo.json")),
    ("q54-sycamore", include_str!("../presets/q54-sycamore.json")),
];

#[derive(Debug, thiserror::Error)]
pub enum ArchError {
    #[error("unknown architecture `{0}`: not a preset, `grid:RxC`, or an existing file")]
    Unknown(String),
    #[error("bad grid spec `{0}`: expected `grid:RxC` with R, C >= 1")]
    BadGrid(String),
    #[error("reading {path}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("parsing {path}")]
    Json {
        path: String,
        source: serde_json::Error,
    },
    #[error("architecture {name}: {message}")]
    Invalid { name: String, message: String },
}

/// Parses and validates an architecture document.
pub fn from_json(origin: &str, text: &str) -> Result<Architecture, ArchError> {
    let cfg: ArchitectureConfig = serde_json::from_str(text).map_err(|source| ArchError::Json {
        path: origin.to_string(),
        source,
    })?;
    load_architecture(&cfg).map_err(|e| ArchError::Invalid {
        name: cfg.name.clone(),
        message: e.to_string(),
    })
}

pub fn preset(name: &str) -> Option<Result<Architecture, ArchError>> {
    PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(n, text)| from_json(n, text))
}

fn grid(spec: &str) -> Result<Architecture, ArchError> {
    let bad = || ArchError::BadGrid(spec.to_string());
    let dims = spec.strip_prefix("grid:").ok_or_else(bad)?;
    let (r, c) = dims.split_once(['x', 'X']).ok_or_else(bad)?;
    let rows: usize = r.trim().parse().map_err(|_| bad())?;
    let cols: usize = c.trim().parse().map_err(|_| bad())?;
    if rows == 0 || cols == 0 {
        return Err(bad());
    }
    grid_architecture(rows, cols, DurationMap::default()).map_err(|e| ArchError::Invalid {
        name: spec.to_string(),
        message: e.to_string(),
    })
}

/// Resolves a preset name, a `grid:RxC` spec, or a path to a JSON document.
pub fn resolve(spec: &str) -> Result<Architecture, ArchError> {
    if let Some(found) = preset(spec) {
        return found;
    }
    if spec.starts_with("grid:") {
        return grid(spec);
    }
    let path = Path::new(spec);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|source| ArchError::Io {
            path: spec.to_string(),
            source,
        })?;
        return from_json(spec, &text);
    }
    Err(ArchError::Unknown(spec.to_string()))
}
