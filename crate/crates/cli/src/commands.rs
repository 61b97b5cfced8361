use std::collections::HashMap;
use std::fs::File;
use std::io::{self, BufReader};
use std::path::{Path, PathBuf};
use std::time::Instant;

use kcore::datasets;
use kcore::{
    load_path, peel_coreness, run_engine, verify, Algorithm, CorenessResult, EngineConfig, Graph,
    Instrumentation, Mismatch,
};
use serde::Deserialize;

use crate::args::{Axis, EngineArgs, RunArgs, SweepArgs, VerifyArgs};
use crate::error::CliError;
use crate::rows::{self, RunRow, TraceRow};

/// A loaded graph and, when needed, its oracle coreness.
pub struct Session {
    pub name: String,
    pub graph: Graph,
    pub truth: Option<CorenessResult>,
}

/// An existing file, or the local copy of a manifest dataset.
pub fn resolve_input(input: &str) -> Result<(String, PathBuf), CliError> {
    let path = Path::new(input);
    if path.is_file() {
        let file = path
            .file_name()
            .map(|f| f.to_string_lossy().into_owned())
            .unwrap_or_default();
        let name = file
            .trim_end_matches(".gz")
            .trim_end_matches(".txt")
            .to_string();
        return Ok((name, path.to_path_buf()));
    }
    let dir = datasets::data_dir();
    datasets::find(input)
        .and_then(|d| Some((d.name.to_string(), d.locate(&dir)?)))
        .ok_or_else(|| {
            CliError::io(
                format!("reading {input}"),
                io::Error::new(
                    io::ErrorKind::NotFound,
                    format!("no such file, nor a dataset in {}", dir.display()),
                ),
            )
        })
}

pub fn load_session(input: &str, with_truth: bool) -> Result<Session, CliError> {
    let (name, path) = resolve_input(input)?;
    let graph = load_path(&path).map_err(|source| CliError::Graph {
        context: format!("loading {}", path.display()),
        source,
    })?;
    let truth = with_truth.then(|| peel_coreness(&graph));
    Ok(Session { name, graph, truth })
}

/// One configuration per thread count and batch size; a single one for
/// the sequential engines.
pub fn configs(args: &EngineArgs) -> Vec<EngineConfig> {
    let mut base = EngineConfig::new(args.algo);
    base.parallel.strategy = args.strategy;
    let p = &mut base.parallel;
    let f = &mut base.fast;
    p.selective_send = args.selective_send.unwrap_or(p.selective_send);
    p.single_round = args.single_round.unwrap_or(p.single_round);
    p.sorted_neighbors = args.sorted_neighbors.unwrap_or(p.sorted_neighbors);
    f.extended_notify = args.extended_notify.unwrap_or(f.extended_notify);
    f.hybrid_tail = args.hybrid_tail.unwrap_or(f.hybrid_tail);
    if !args.algo.is_parallel() {
        return vec![base];
    }
    let mut out = Vec::new();
    for &b in &args.batch.0 {
        for &t in &args.threads.0 {
            out.push(base.with_threads_batch(t, b));
        }
    }
    out
}

struct Point {
    rows: Vec<RunRow>,
    traces: Vec<TraceRow>,
    mismatches: Vec<(String, Vec<Mismatch>)>,
    last: CorenessResult,
}

fn run_point(
    s: &Session,
    cfg: &EngineConfig,
    args: &RunArgs,
    reps: u32,
) -> Result<Point, CliError> {
    let instrumented = args.trace_convergence || args.count_messages || args.audit_activation;
    let instr = Instrumentation {
        truth: if args.trace_convergence {
            s.truth.as_ref()
        } else {
            None
        },
        count_messages: args.count_messages,
        audit_activation: args.audit_activation,
    };
    let mut point = Point {
        rows: Vec::new(),
        traces: Vec::new(),
        mismatches: Vec::new(),
        last: CorenessResult::new(Vec::new()),
    };
    for rep in 1..=reps {
        let start = Instant::now();
        let (result, report) = run_engine(&s.graph, cfg, instr)?;
        let seconds = start.elapsed().as_secs_f64();

        let mut row = RunRow::describe(&s.name, cfg, instrumented);
        if let (false, Some(truth)) = (args.no_verify, &s.truth) {
            let diff = verify(&result, truth);
            row.verified = if diff.is_empty() { "pass" } else { "fail" };
            if !diff.is_empty() {
                point
                    .mismatches
                    .push((format!("{}/rep{rep}", describe(cfg)), diff));
            }
        }
        row.rep = rep;
        row.seconds = seconds;
        row.iterations = report.iterations;
        row.messages = report.messages_sent;
        row.tail_pops = report.tail.as_ref().map(|t| t.pops);
        row.k_max = result.k_max();
        for it in &report.trace {
            point.traces.push(TraceRow {
                graph: s.name.clone(),
                algo: row.algo,
                strategy: row.strategy,
                threads: row.threads,
                batch: row.batch,
                rep,
                iteration: it.iteration,
                mean_error: it.mean_error,
                active_count: it.active_count,
                active_fraction: it.active_fraction,
            });
        }
        point.rows.push(row);
        point.last = result;
    }
    let mean = point.rows.iter().map(|r| r.seconds).sum::<f64>() / point.rows.len() as f64;
    point.rows.iter_mut().for_each(|r| r.mean_seconds = mean);
    Ok(point)
}

fn describe(cfg: &EngineConfig) -> String {
    match cfg.algorithm {
        Algorithm::ParallelK => format!(
            "parallelk/{}/T{}/B{}",
            cfg.parallel.strategy, cfg.parallel.threads, cfg.parallel.batch
        ),
        Algorithm::FastK => format!("fastk/T{}/B{}", cfg.fast.threads, cfg.fast.batch),
        a => a.name().to_string(),
    }
}

/// Fills `speedup` relative to the smallest thread count of each batch size.
fn fill_speedup(rows: &mut [RunRow]) {
    let mut base: HashMap<Option<usize>, (Option<usize>, f64)> = HashMap::new();
    for r in rows.iter() {
        let e = base.entry(r.batch).or_insert((r.threads, r.mean_seconds));
        if r.threads < e.0 {
            *e = (r.threads, r.mean_seconds);
        }
    }
    for r in rows.iter_mut() {
        let (_, t1) = base[&r.batch];
        r.speedup = (r.mean_seconds > 0.0).then(|| t1 / r.mean_seconds);
    }
}

fn flush<W: io::Write>(mut w: csv::Writer<W>, what: &Option<PathBuf>) -> Result<(), CliError> {
    w.flush().map_err(|e| {
        let target = what
            .as_ref()
            .map_or("stdout".into(), |p| p.display().to_string());
        CliError::io(format!("writing {target}"), e)
    })
}

fn trace_path(args: &RunArgs) -> Option<PathBuf> {
    args.trace_out.clone().or_else(|| {
        args.engine
            .out
            .as_ref()
            .map(|o| o.with_extension("trace.csv"))
    })
}

fn mismatch_report(
    dir: &Path,
    s: &Session,
    algo: Algorithm,
    runs: &[(String, Vec<Mismatch>)],
) -> Result<CliError, CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::io(format!("creating {}", dir.display()), e))?;
    let report = dir.join(format!("mismatch-{}-{}.csv", s.name, algo.name()));
    rows::write_mismatches(&report, &s.graph, runs)?;
    Ok(CliError::Mismatch {
        mismatched: runs.iter().map(|(_, m)| m.len()).max().unwrap_or(0),
        runs: runs.len(),
        report,
    })
}

/// Runs every point; verification failures do not stop later points.
pub fn run(args: &RunArgs) -> Result<(), CliError> {
    let s = load_session(
        &args.engine.input,
        !args.no_verify || args.trace_convergence,
    )?;
    let mut all_rows = Vec::new();
    let mut traces = Vec::new();
    let mut mismatches = Vec::new();
    let mut last = None;
    for cfg in configs(&args.engine) {
        let point = run_point(&s, &cfg, args, args.reps)?;
        all_rows.extend(point.rows);
        traces.extend(point.traces);
        if !point.mismatches.is_empty() {
            eprintln!("verification failed: {}", describe(&cfg));
        }
        mismatches.extend(point.mismatches);
        last = Some(point.last);
    }
    fill_speedup(&mut all_rows);

    let mut w = rows::writer(args.engine.out.as_deref())?;
    for row in &all_rows {
        w.serialize(row)?;
    }
    flush(w, &args.engine.out)?;
    if args.trace_convergence {
        match trace_path(args) {
            Some(path) => {
                let mut w = rows::writer(Some(&path))?;
                for t in &traces {
                    w.serialize(t)?;
                }
                flush(w, &Some(path))?;
            }
            None => {
                eprintln!("--trace-convergence without --out or --trace-out: trace not written")
            }
        }
    }
    if let (Some(path), Some(result)) = (&args.coreness_out, &last) {
        rows::write_coreness(path, &s.graph, result.coreness())?;
    }
    if mismatches.is_empty() {
        Ok(())
    } else {
        Err(mismatch_report(
            &args.engine.report_dir,
            &s,
            args.engine.algo,
            &mismatches,
        )?)
    }
}

pub fn sweep(args: &SweepArgs) -> Result<(), CliError> {
    let e = &args.run.engine;
    if !e.algo.is_parallel() {
        return Err(CliError::Usage(format!(
            "sweep needs a parallel engine, not {}",
            e.algo
        )));
    }
    let (varied, fixed, fixed_name) = match args.axis {
        Axis::Threads => (&e.threads, &e.batch, "--batch"),
        Axis::Batch => (&e.batch, &e.threads, "--threads"),
    };
    if fixed.0.len() != 1 {
        return Err(CliError::Usage(format!(
            "{fixed_name} must be a single value when sweeping {:?}",
            args.axis
        )));
    }
    if varied.0.is_empty() {
        return Err(CliError::Usage("empty sweep axis".into()));
    }
    run(&args.run)
}

/// One instrumented run per point; writes the per-iteration rows.
pub fn trace(args: &RunArgs) -> Result<(), CliError> {
    let s = load_session(&args.engine.input, true)?;
    let traced = RunArgs {
        trace_convergence: true,
        ..args.clone()
    };
    let mut w = rows::writer(args.engine.out.as_deref())?;
    let mut mismatches = Vec::new();
    for cfg in configs(&args.engine) {
        let point = run_point(&s, &cfg, &traced, 1)?;
        for t in &point.traces {
            w.serialize(t)?;
        }
        mismatches.extend(point.mismatches);
    }
    flush(w, &args.engine.out)?;
    if mismatches.is_empty() {
        Ok(())
    } else {
        Err(mismatch_report(
            &args.engine.report_dir,
            &s,
            args.engine.algo,
            &mismatches,
        )?)
    }
}

#[derive(Deserialize)]
struct CorenessRow {
    node: u64,
    coreness: u32,
}

fn read_coreness(path: &Path, g: &Graph) -> Result<CorenessResult, CliError> {
    let file =
        File::open(path).map_err(|e| CliError::io(format!("opening {}", path.display()), e))?;
    let mut values = vec![None; g.node_count()];
    for rec in csv::Reader::from_reader(BufReader::new(file)).deserialize() {
        let row: CorenessRow = rec?;
        let u = g.node_for_label(row.node).ok_or_else(|| {
            CliError::Usage(format!(
                "{}: node {} is not in the graph",
                path.display(),
                row.node
            ))
        })?;
        values[u as usize] = Some(row.coreness);
    }
    let missing = values.iter().filter(|v| v.is_none()).count();
    if missing > 0 {
        return Err(CliError::Usage(format!(
            "{}: {missing} node(s) have no coreness",
            path.display()
        )));
    }
    Ok(CorenessResult::new(values.into_iter().flatten().collect()))
}

pub fn verify_cmd(args: &VerifyArgs) -> Result<(), CliError> {
    let s = load_session(&args.engine.input, true)?;
    let truth = s.truth.as_ref().expect("oracle computed");
    let mut runs = Vec::new();
    if let Some(path) = &args.coreness {
        runs.push((path.display().to_string(), read_coreness(path, &s.graph)?));
    } else {
        for cfg in configs(&args.engine) {
            runs.push((
                describe(&cfg),
                run_engine(&s.graph, &cfg, Instrumentation::none())?.0,
            ));
        }
    }
    let mut failed = Vec::new();
    for (name, result) in runs {
        let diff = verify(&result, truth);
        if diff.is_empty() {
            println!("ok {name}: {} nodes, kMax {}", result.len(), result.k_max());
        } else {
            println!(
                "mismatch {name}: {} of {} nodes differ",
                diff.len(),
                result.len()
            );
            failed.push((name, diff));
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(mismatch_report(
            &args.engine.report_dir,
            &s,
            args.engine.algo,
            &failed,
        )?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(threads: usize, batch: usize, mean: f64) -> RunRow {
        let cfg = EngineConfig::new(Algorithm::FastK).with_threads_batch(threads, batch);
        RunRow {
            mean_seconds: mean,
            ..RunRow::describe("g", &cfg, false)
        }
    }

    #[test]
    fn speedup_is_relative_to_fewest_threads() {
        let mut rows = vec![row(4, 256, 1.0), row(1, 256, 3.0), row(2, 64, 2.0)];
        fill_speedup(&mut rows);
        assert_eq!(rows[0].speedup, Some(3.0));
        assert_eq!(rows[1].speedup, Some(1.0));
        assert_eq!(rows[2].speedup, Some(1.0));
    }
}
