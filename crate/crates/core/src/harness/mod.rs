//! Sweep orchestration and artifact output.

mod config;
mod csv;
mod manifest;
mod run;
mod svg;

pub use self::config::{ClassicalSettings, KbarGrid, Mode, OutputPaths, SweepConfig, MAX_KICKS};
pub use self::csv::{csv_string, emit_csv, parse_csv, CSV_HEADER};
pub use self::manifest::Manifest;
pub use self::run::{run_config, PointFailure, SweepResult};
pub use self::svg::{emit_svg, svg_string};

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid config: {field}: {constraint}")]
    Invalid { field: String, constraint: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("csv line {line}: {message}")]
    Csv { line: usize, message: String },
    #[error("nothing to plot: the sweep produced no rows")]
    EmptyResult,
    #[error("worker pool: {0}")]
    Pool(String),
}

/// Which computation produced a row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Analytic,
    Quantum,
    Classical,
    /// `|analytic - quantum|` in compare mode.
    GapAbs,
    /// `|analytic - quantum| / |analytic|` in compare mode.
    GapRel,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Analytic => "analytic",
            Method::Quantum => "quantum",
            Method::Classical => "classical",
            Method::GapAbs => "gap_abs",
            Method::GapRel => "gap_rel",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "analytic" => Ok(Method::Analytic),
            "quantum" => Ok(Method::Quantum),
            "classical" => Ok(Method::Classical),
            "gap_abs" => Ok(Method::GapAbs),
            "gap_rel" => Ok(Method::GapRel),
            other => Err(format!("unknown method `{other}`")),
        }
    }
}

/// One energy at one `(kbar, phi_d, kicks)` point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub kbar: f64,
    pub phi_d: f64,
    pub kicks: usize,
    pub energy: f64,
    pub method: Method,
}
