//! CSV records. Every timing row carries its full configuration.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use kcore::{Algorithm, EngineConfig, Graph, Mismatch};
use serde::Serialize;

use crate::error::CliError;

#[derive(Clone, Debug, Serialize)]
pub struct RunRow {
    pub graph: String,
    pub algo: &'static str,
    /// ParallelK only.
    pub strategy: Option<&'static str>,
    /// `single-round` or `two-phase`; ParallelK only.
    pub phase_mode: Option<&'static str>,
    pub threads: Option<usize>,
    pub batch: Option<usize>,
    pub selective_send: Option<bool>,
    pub sorted_neighbors: Option<bool>,
    pub extended_notify: Option<bool>,
    pub hybrid_tail: Option<bool>,
    pub instrumented: bool,
    pub rep: u32,
    pub seconds: f64,
    pub mean_seconds: f64,
    /// Mean time at the smallest thread count over mean time at this one.
    pub speedup: Option<f64>,
    pub iterations: usize,
    pub messages: Option<u64>,
    pub tail_pops: Option<u64>,
    pub k_max: u32,
    /// `pass`, `fail` or `skipped`.
    pub verified: &'static str,
}

impl RunRow {
    /// Row with the configuration columns filled in.
    pub fn describe(graph: &str, cfg: &EngineConfig, instrumented: bool) -> Self {
        let (p, f) = (&cfg.parallel, &cfg.fast);
        let mut row = RunRow {
            graph: graph.to_string(),
            algo: cfg.algorithm.name(),
            strategy: None,
            phase_mode: None,
            threads: None,
            batch: None,
            selective_send: None,
            sorted_neighbors: None,
            extended_notify: None,
            hybrid_tail: None,
            instrumented,
            rep: 0,
            seconds: 0.0,
            mean_seconds: 0.0,
            speedup: None,
            iterations: 0,
            messages: None,
            tail_pops: None,
            k_max: 0,
            verified: "skipped",
        };
        match cfg.algorithm {
            Algorithm::ParallelK => {
                row.strategy = Some(p.strategy.name());
                row.phase_mode = Some(if p.single_round {
                    "single-round"
                } else {
                    "two-phase"
                });
                row.threads = Some(p.threads);
                row.batch = Some(p.batch);
                row.selective_send = Some(p.selective_send);
                row.sorted_neighbors = Some(p.sorted_neighbors);
            }
            Algorithm::FastK => {
                row.threads = Some(f.threads);
                row.batch = Some(f.batch);
                row.extended_notify = Some(f.extended_notify);
                row.hybrid_tail = Some(f.hybrid_tail);
            }
            Algorithm::SequentialK | Algorithm::Oracle => row.threads = Some(1),
        }
        row
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceRow {
    pub graph: String,
    pub algo: &'static str,
    pub strategy: Option<&'static str>,
    pub threads: Option<usize>,
    pub batch: Option<usize>,
    pub rep: u32,
    pub iteration: usize,
    pub mean_error: f64,
    pub active_count: usize,
    pub active_fraction: f64,
}

/// A CSV writer on a file, or on stdout when `path` is `None`.
pub fn writer(path: Option<&Path>) -> Result<csv::Writer<Box<dyn Write>>, CliError> {
    let sink: Box<dyn Write> = match path {
        Some(p) => {
            Box::new(io::BufWriter::new(File::create(p).map_err(|e| {
                CliError::io(format!("creating {}", p.display()), e)
            })?))
        }
        None => Box::new(io::stdout().lock()),
    };
    Ok(csv::Writer::from_writer(sink))
}

/// `node,coreness` keyed by the labels of the input file.
pub fn write_coreness(path: &Path, g: &Graph, coreness: &[u32]) -> Result<(), CliError> {
    let mut w = writer(Some(path))?;
    w.write_record(["node", "coreness"])?;
    for u in g.nodes() {
        w.serialize((g.label(u), coreness[u as usize]))?;
    }
    w.flush()
        .map_err(|e| CliError::io(format!("writing {}", path.display()), e))
}

#[derive(Serialize)]
struct MismatchRow<'a> {
    run: &'a str,
    node: u64,
    candidate: u32,
    truth: u32,
}

/// Appends `(run, mismatches)` pairs to a CSV report.
pub fn write_mismatches(
    path: &Path,
    g: &Graph,
    runs: &[(String, Vec<Mismatch>)],
) -> Result<(), CliError> {
    let mut w = writer(Some(path))?;
    for (run, list) in runs {
        for m in list {
            w.serialize(MismatchRow {
                run,
                node: g.label(m.node),
                candidate: m.candidate,
                truth: m.truth,
            })?;
        }
    }
    w.flush()
        .map_err(|e| CliError::io(format!("writing {}", path.display()), e))
}
