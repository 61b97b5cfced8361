//! Uniform entry point over all coreness engines.

use std::fmt;
use std::str::FromStr;

use crate::fastk::{fastk_run, FastConfig};
use crate::graph::Graph;
use crate::kernel::sequentialk_run;
use crate::oracle::{peel_coreness, CorenessResult};
use crate::parallelk::{parallelk_run, ParallelConfig};
use crate::report::{Instrumentation, RunReport};
use crate::schedule::ConfigError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Oracle,
    SequentialK,
    ParallelK,
    FastK,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Oracle,
        Algorithm::SequentialK,
        Algorithm::ParallelK,
        Algorithm::FastK,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Oracle => "oracle",
            Algorithm::SequentialK => "sequentialk",
            Algorithm::ParallelK => "parallelk",
            Algorithm::FastK => "fastk",
        }
    }

    /// Whether thread count and batch size apply.
    pub fn is_parallel(self) -> bool {
        matches!(self, Algorithm::ParallelK | Algorithm::FastK)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == lower)
            .ok_or_else(|| {
                format!(
                    "unknown algorithm {s:?} (expected oracle, sequentialk, parallelk or fastk)"
                )
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EngineConfig {
    pub algorithm: Algorithm,
    pub parallel: ParallelConfig,
    pub fast: FastConfig,
}

impl EngineConfig {
    pub fn new(algorithm: Algorithm) -> Self {
        Self {
            algorithm,
            parallel: ParallelConfig::default(),
            fast: FastConfig::default(),
        }
    }

    /// Sets thread count and batch size of both parallel engines.
    pub fn with_threads_batch(mut self, threads: usize, batch: usize) -> Self {
        self.parallel.threads = threads;
        self.parallel.batch = batch;
        self.fast.threads = threads;
        self.fast.batch = batch;
        self
    }
}

/// Runs the configured engine. The oracle reports no iterations.
pub fn run_engine(
    g: &Graph,
    cfg: &EngineConfig,
    instr: Instrumentation<'_>,
) -> Result<(CorenessResult, RunReport), ConfigError> {
    match cfg.algorithm {
        Algorithm::Oracle => Ok((peel_coreness(g), RunReport::default())),
        Algorithm::SequentialK => Ok(sequentialk_run(g, instr)),
        Algorithm::ParallelK => parallelk_run(g, &cfg.parallel, instr),
        Algorithm::FastK => fastk_run(g, &cfg.fast, instr),
    }
}
