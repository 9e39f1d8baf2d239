//! Skein module dimensions of closed 3-manifolds from the command line.

pub mod expr;
pub mod report;
pub mod run;

use std::fmt;
use std::path::PathBuf;

use clap::ValueEnum;
use serde::Serialize;

pub use expr::{Gluing, ManifoldExpr, ParseError};
pub use report::{Outcome, Report};
pub use run::{is_cached, RunError, Runner};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    /// Relative tensor product of handlebody modules.
    Internal,
    /// Diagrammatic pairing over the torus skein algebra, genus one only.
    Fg,
    /// Both, failing unless they agree.
    Both,
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Internal => "internal",
            Engine::Fg => "fg",
            Engine::Both => "both",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    /// Largest truncation degree; by default each engine grows its own.
    pub max_degree: Option<usize>,
    pub engine: Engine,
    pub samples: usize,
    pub seed: u64,
    pub window: usize,
    /// Work over `Q(s)` instead of sampling `F_p`.
    pub exact: bool,
    pub threads: Option<usize>,
    pub cache: Option<PathBuf>,
    pub emit_basis: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { max_degree: None, engine: Engine::Internal, samples: 3, seed: 0, window: 3, exact: false, threads: None, cache: None, emit_basis: false }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.max_degree.is_some_and(|d| d < 2) {
            return Err("max degree must be at least 2".into());
        }
        if self.samples < 1 {
            return Err("at least one sample is needed".into());
        }
        if self.window < 1 {
            return Err("the stabilization window must be positive".into());
        }
        Ok(())
    }
}

/// Exit status: 0 when stabilized, 2 when not.
pub fn exit_code(r: &Report) -> i32 {
    if r.stabilized {
        0
    } else {
        2
    }
}
