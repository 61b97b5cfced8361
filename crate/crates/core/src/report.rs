//! Per-run statistics and the optional convergence instrumentation shared by
//! all engines.

use crate::oracle::CorenessResult;

/// What an engine should measure besides the coreness itself.
///
/// Supplying `truth` turns on convergence tracing: every iteration boundary
/// snapshots the estimates, records the mean distance from the true coreness
/// and checks that no estimate increased or dropped below the truth. Engines
/// add synchronization to take consistent snapshots, so instrumented runs
/// should not be used for timing.
#[derive(Clone, Copy, Debug, Default)]
pub struct Instrumentation<'a> {
    pub truth: Option<&'a CorenessResult>,
    pub count_messages: bool,
    /// FastK only: at every iteration end, check that no idle node would
    /// lower its estimate. Costs a pass over all edges per iteration.
    pub audit_activation: bool,
}

impl<'a> Instrumentation<'a> {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn convergence(truth: &'a CorenessResult) -> Self {
        Self {
            truth: Some(truth),
            count_messages: true,
            audit_activation: false,
        }
    }

    pub fn messages() -> Self {
        Self {
            truth: None,
            count_messages: true,
            audit_activation: false,
        }
    }

    pub fn is_tracing(&self) -> bool {
        self.truth.is_some()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IterationStats {
    /// 0 is the initial state (estimates equal degrees).
    pub iteration: usize,
    /// Mean over nodes of `estimate - coreness`.
    pub mean_error: f64,
    /// Nodes that will recompute (or, for message engines, resend) next.
    pub active_count: usize,
    pub active_fraction: f64,
}

/// Statistics of FastK's sequential priority-queue tail.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TailStats {
    /// Number of parallel iterations completed before the switch.
    pub entered_after: usize,
    pub initial_queue: usize,
    /// Queue entries processed (stale entries excluded).
    pub pops: u64,
    pub updates: u64,
    pub notifications: u64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunReport {
    /// Completed synchronized iterations (initialization excluded).
    pub iterations: usize,
    /// Messages enqueued (message engines) or activation notifications
    /// (FastK). `None` unless message counting was requested.
    pub messages_sent: Option<u64>,
    pub messages_received: Option<u64>,
    pub trace: Vec<IterationStats>,
    /// Estimate increases seen between consecutive snapshots.
    pub monotonicity_violations: u64,
    /// Estimates seen below the true coreness.
    pub soundness_violations: u64,
    /// Idle nodes whose recomputation would have lowered their estimate.
    pub activation_violations: u64,
    pub tail: Option<TailStats>,
}

impl RunReport {
    pub fn final_error(&self) -> Option<f64> {
        self.trace.last().map(|s| s.mean_error)
    }
}

/// Appends one trace row: mean `est - truth` and the active fraction.
pub fn record_iteration(
    report: &mut RunReport,
    est: &[u32],
    truth: &CorenessResult,
    active_count: usize,
) {
    assert_eq!(est.len(), truth.len());
    let n = est.len();
    let total: i64 = est
        .iter()
        .zip(truth.coreness())
        .map(|(&e, &c)| e as i64 - c as i64)
        .sum();
    let (mean_error, active_fraction) = if n == 0 {
        (0.0, 0.0)
    } else {
        (total as f64 / n as f64, active_count as f64 / n as f64)
    };
    report.trace.push(IterationStats {
        iteration: report.trace.len(),
        mean_error,
        active_count,
        active_fraction,
    });
}

/// Tracks successive estimate snapshots of one run.
pub(crate) struct ConvergenceProbe<'a> {
    truth: &'a CorenessResult,
    previous: Option<Vec<u32>>,
}

impl<'a> ConvergenceProbe<'a> {
    pub(crate) fn new(truth: &'a CorenessResult) -> Self {
        Self {
            truth,
            previous: None,
        }
    }

    pub(crate) fn observe(&mut self, report: &mut RunReport, est: Vec<u32>, active_count: usize) {
        if let Some(prev) = &self.previous {
            report.monotonicity_violations += est
                .iter()
                .zip(prev)
                .filter(|(now, before)| now > before)
                .count() as u64;
        }
        report.soundness_violations += est
            .iter()
            .zip(self.truth.coreness())
            .filter(|(e, c)| e < c)
            .count() as u64;
        record_iteration(report, &est, self.truth, active_count);
        self.previous = Some(est);
    }
}
