//! FastK: all workers share one estimate array and one activation array.
//!
//! An iteration is bulk-synchronous:
//!
//! 1. *process*: workers claim batches of nodes, skip inactive ones, clear
//!    the active flag of the rest and recompute their estimate from the
//!    global array, which nobody writes during this phase. New estimates and
//!    the neighbors to wake are buffered locally.
//! 2. *update*: each worker writes its own buffered estimates (ids are
//!    disjoint across workers) and sets the active flags it collected.
//! 3. *iteration end*: everyone reads the shared `changed` flag and the
//!    number of nodes woken for the next iteration.
//!
//! With the extended notification rule a neighbor `v` is only woken when
//! `u` used to count towards `v`'s estimate and no longer does. That test
//! must see `v`'s estimate after this iteration's writes, so it runs in an
//! extra notify phase after the update phase.
//!
//! Once fewer nodes than one batch are active, the run can hand over to a
//! single thread that drains the remaining work from a priority queue,
//! lowest estimate first, applying every update immediately.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::sync::atomic::{AtomicBool, AtomicU32, AtomicU64, AtomicUsize, Ordering::Relaxed};
use std::sync::Barrier;

use parking_lot::Mutex;

use crate::graph::{Graph, NodeId};
use crate::kernel::IndexScratch;
use crate::oracle::CorenessResult;
use crate::report::{ConvergenceProbe, Instrumentation, RunReport, TailStats};
use crate::schedule::{self, BatchCursor, ConfigError, DEFAULT_BATCH, DEFAULT_THREADS};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FastConfig {
    pub threads: usize,
    pub batch: usize,
    /// Switch to the sequential priority-queue tail once fewer than `batch`
    /// nodes are active.
    pub hybrid_tail: bool,
    /// Wake `v` only if `u` dropped from `>= est[v]` to below it; otherwise
    /// whenever `u`'s new estimate is below `est[v]`.
    pub extended_notify: bool,
}

impl Default for FastConfig {
    fn default() -> Self {
        Self {
            threads: DEFAULT_THREADS,
            batch: DEFAULT_BATCH,
            hybrid_tail: true,
            extended_notify: true,
        }
    }
}

impl FastConfig {
    pub fn new(threads: usize, batch: usize) -> Self {
        Self {
            threads,
            batch,
            ..Self::default()
        }
    }
}

/// Extended notification rule: `u`'s drop from `old_core_u` to
/// `new_core_u` can only affect `v` if `u` was counted at `v`'s level
/// before and is not any more.
#[inline]
pub fn should_notify(new_core_u: u32, old_core_u: u32, est_v: u32) -> bool {
    debug_assert!(new_core_u <= old_core_u);
    new_core_u < est_v && old_core_u >= est_v
}

#[inline]
fn notify(extended: bool, new_core_u: u32, old_core_u: u32, est_v: u32) -> bool {
    if extended {
        should_notify(new_core_u, old_core_u, est_v)
    } else {
        est_v > new_core_u
    }
}

/// Whether the parallel phase should hand over to the sequential tail.
#[inline]
pub fn switch_condition(active_count: usize, batch: usize) -> bool {
    active_count < batch
}

/// The global estimate and activation arrays.
pub struct SharedState {
    est: Vec<AtomicU32>,
    active: Vec<AtomicBool>,
    /// Iteration that last wrote each estimate; checks that the process
    /// phase never reads a value written in the same iteration.
    #[cfg(debug_assertions)]
    written_in: Vec<AtomicU32>,
}

impl SharedState {
    /// Estimates start at the degrees and every node is active.
    pub fn new(g: &Graph) -> Self {
        let est = g.nodes().map(|u| g.degree(u) as u32).collect();
        Self::from_parts(est, vec![true; g.node_count()])
    }

    pub fn from_parts(est: Vec<u32>, active: Vec<bool>) -> Self {
        assert_eq!(est.len(), active.len());
        Self {
            #[cfg(debug_assertions)]
            written_in: est.iter().map(|_| AtomicU32::new(0)).collect(),
            est: est.into_iter().map(AtomicU32::new).collect(),
            active: active.into_iter().map(AtomicBool::new).collect(),
        }
    }

    #[inline]
    pub fn estimate(&self, u: NodeId) -> u32 {
        self.est[u as usize].load(Relaxed)
    }

    #[inline]
    pub fn is_active(&self, u: NodeId) -> bool {
        self.active[u as usize].load(Relaxed)
    }

    pub fn active_count(&self) -> usize {
        self.active.iter().filter(|a| a.load(Relaxed)).count()
    }

    pub fn snapshot(&self) -> Vec<u32> {
        self.est.iter().map(|e| e.load(Relaxed)).collect()
    }

    pub fn into_result(self) -> CorenessResult {
        CorenessResult::new(self.est.into_iter().map(AtomicU32::into_inner).collect())
    }

    /// Read of `est[v]` during the process phase of `iteration`.
    #[inline]
    fn read_in_process(&self, v: NodeId, iteration: u32) -> u32 {
        #[cfg(debug_assertions)]
        assert!(
            self.written_in[v as usize].load(Relaxed) < iteration,
            "estimate of {v} read in the same iteration it was written"
        );
        let _ = iteration;
        self.estimate(v)
    }

    #[inline]
    fn write(&self, u: NodeId, value: u32, iteration: u32) {
        #[cfg(debug_assertions)]
        self.written_in[u as usize].store(iteration, Relaxed);
        let _ = iteration;
        self.est[u as usize].store(value, Relaxed);
    }

    /// Idle nodes whose recomputation would lower their estimate.
    fn lost_activations(&self, g: &Graph) -> u64 {
        let mut scratch = IndexScratch::new();
        g.nodes()
            .filter(|&u| !self.is_active(u))
            .filter(|&u| {
                let cur = self.estimate(u);
                let nbrs = g.neighbors(u).iter().map(|&v| self.estimate(v));
                scratch.compute(nbrs, cur) < cur
            })
            .count() as u64
    }
}

/// Min-queue of `(estimate, node)` for the sequential tail.
#[derive(Debug, Default)]
pub struct TailQueue {
    heap: BinaryHeap<Reverse<(u32, NodeId)>>,
}

impl TailQueue {
    pub fn new() -> Self {
        Self::default()
    }

    /// Queues every currently active node.
    pub fn from_active(state: &SharedState) -> Self {
        let heap = state
            .active
            .iter()
            .enumerate()
            .filter(|(_, a)| a.load(Relaxed))
            .map(|(u, _)| Reverse((state.estimate(u as NodeId), u as NodeId)))
            .collect();
        Self { heap }
    }

    pub fn push(&mut self, estimate: u32, u: NodeId) {
        self.heap.push(Reverse((estimate, u)));
    }

    pub fn pop(&mut self) -> Option<(u32, NodeId)> {
        self.heap.pop().map(|Reverse(entry)| entry)
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }
}

/// Drains `queue` on the calling thread, lowest estimate first. Updates
/// are applied immediately; woken neighbors are flagged and queued once.
/// Entries whose node is no longer active are skipped.
pub fn sequential_tail(
    g: &Graph,
    state: &SharedState,
    queue: &mut TailQueue,
    extended_notify: bool,
) -> TailStats {
    let mut stats = TailStats {
        initial_queue: queue.len(),
        ..TailStats::default()
    };
    let mut scratch = IndexScratch::new();
    while let Some((_, u)) = queue.pop() {
        if !state.active[u as usize].swap(false, Relaxed) {
            continue;
        }
        stats.pops += 1;
        let old = state.estimate(u);
        let nbrs = g.neighbors(u);
        let new = scratch.compute(nbrs.iter().map(|&v| state.estimate(v)), old);
        if new >= old {
            continue;
        }
        state.est[u as usize].store(new, Relaxed);
        stats.updates += 1;
        for &v in nbrs {
            let est_v = state.estimate(v);
            if notify(extended_notify, new, old, est_v) {
                stats.notifications += 1;
                if !state.active[v as usize].swap(true, Relaxed) {
                    queue.push(est_v, v);
                }
            }
        }
    }
    stats
}

/// Per-iteration flags; two slots alternate so the slot of iteration
/// `i + 1` can be cleared during iteration `i`.
#[derive(Default)]
struct RoundSlot {
    changed: AtomicBool,
    woken: AtomicUsize,
}

impl RoundSlot {
    fn reset(&self) {
        self.changed.store(false, Relaxed);
        self.woken.store(0, Relaxed);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Exit {
    Converged(u32),
    Switch(u32),
}

struct Tracer<'a> {
    probe: ConvergenceProbe<'a>,
    report: RunReport,
    audit: bool,
}

struct Shared<'a> {
    g: &'a Graph,
    state: &'a SharedState,
    cfg: &'a FastConfig,
    cursor: BatchCursor,
    slots: [RoundSlot; 2],
    barrier: Barrier,
    notifications: AtomicU64,
    tracer: Option<Mutex<Tracer<'a>>>,
}

impl Shared<'_> {
    fn worker(&self) -> Exit {
        let Shared { g, state, cfg, .. } = *self;
        let extended = cfg.extended_notify;
        let mut scratch = IndexScratch::new();
        let mut updates: Vec<(NodeId, u32, u32)> = Vec::new();
        let mut woken: Vec<NodeId> = Vec::new();
        let mut notifications = 0u64;
        let mut iteration = 0u32;

        let exit = loop {
            iteration += 1;
            let slot = &self.slots[iteration as usize % 2];
            updates.clear();
            woken.clear();
            let mut local_changed = false;

            // Process phase.
            if self.barrier.wait().is_leader() {
                self.slots[(iteration as usize + 1) % 2].reset();
            }
            while let Some(range) = self.cursor.claim() {
                for u in range {
                    if !state.active[u].load(Relaxed) {
                        continue;
                    }
                    state.active[u].store(false, Relaxed);
                    let u = u as NodeId;
                    let old = state.estimate(u);
                    let nbrs = g.neighbors(u);
                    let new = scratch.compute(
                        nbrs.iter().map(|&v| state.read_in_process(v, iteration)),
                        old,
                    );
                    if new < old {
                        updates.push((u, new, old));
                        local_changed = true;
                        if !extended {
                            woken.extend(
                                nbrs.iter()
                                    .copied()
                                    .filter(|&v| state.read_in_process(v, iteration) > new),
                            );
                        }
                    }
                }
            }
            if local_changed {
                slot.changed.fetch_or(true, Relaxed);
            }

            // Update phase.
            if self.barrier.wait().is_leader() {
                self.cursor.reset();
            }
            for &(u, new, _) in &updates {
                state.write(u, new, iteration);
            }

            if extended {
                // Notify phase: estimates are final for this iteration.
                self.barrier.wait();
                for &(u, new, old) in &updates {
                    woken.extend(
                        g.neighbors(u)
                            .iter()
                            .copied()
                            .filter(|&v| should_notify(new, old, state.estimate(v))),
                    );
                }
            }
            notifications += woken.len() as u64;
            let newly = woken
                .iter()
                .filter(|&&v| !state.active[v as usize].swap(true, Relaxed))
                .count();
            slot.woken.fetch_add(newly, Relaxed);

            // Iteration end.
            let leader = self.barrier.wait().is_leader();
            let changed = slot.changed.load(Relaxed);
            let active_next = slot.woken.load(Relaxed);
            if let Some(tracer) = &self.tracer {
                if leader {
                    let mut t = tracer.lock();
                    let Tracer {
                        probe,
                        report,
                        audit,
                    } = &mut *t;
                    probe.observe(report, state.snapshot(), active_next);
                    if *audit {
                        report.activation_violations += state.lost_activations(g);
                    }
                }
                self.barrier.wait();
            }
            if !changed {
                break Exit::Converged(iteration);
            }
            if cfg.hybrid_tail && switch_condition(active_next, cfg.batch) {
                break Exit::Switch(iteration);
            }
        };
        self.notifications.fetch_add(notifications, Relaxed);
        exit
    }
}

/// Runs FastK. The result always equals the peeling oracle.
pub fn fastk_run(
    g: &Graph,
    cfg: &FastConfig,
    instr: Instrumentation<'_>,
) -> Result<(CorenessResult, RunReport), ConfigError> {
    schedule::check(cfg.threads, cfg.batch)?;
    let n = g.node_count();
    let state = SharedState::new(g);
    if n == 0 {
        return Ok((state.into_result(), RunReport::default()));
    }

    let tracer = instr.truth.map(|truth| {
        let mut tracer = Tracer {
            probe: ConvergenceProbe::new(truth),
            report: RunReport::default(),
            audit: instr.audit_activation,
        };
        tracer
            .probe
            .observe(&mut tracer.report, state.snapshot(), state.active_count());
        Mutex::new(tracer)
    });
    let shared = Shared {
        g,
        state: &state,
        cfg,
        cursor: BatchCursor::new(n, cfg.batch),
        slots: Default::default(),
        barrier: Barrier::new(cfg.threads),
        notifications: AtomicU64::new(0),
        tracer,
    };

    let exits: Vec<Exit> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..cfg.threads)
            .map(|_| s.spawn(|| shared.worker()))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    debug_assert!(
        exits.windows(2).all(|w| w[0] == w[1]),
        "workers disagree on exit"
    );

    let (mut base, mut probe) = match shared.tracer {
        Some(t) => {
            let Tracer { probe, report, .. } = t.into_inner();
            (report, Some(probe))
        }
        None => (RunReport::default(), None),
    };
    let mut notifications = shared.notifications.into_inner();

    match exits[0] {
        Exit::Converged(iters) => base.iterations = iters as usize,
        Exit::Switch(iters) => {
            base.iterations = iters as usize;
            let mut queue = TailQueue::from_active(&state);
            let mut tail = sequential_tail(g, &state, &mut queue, cfg.extended_notify);
            tail.entered_after = iters as usize;
            notifications += tail.notifications;
            if let Some(p) = probe.as_mut().filter(|_| tail.pops > 0) {
                p.observe(&mut base, state.snapshot(), state.active_count());
                if instr.audit_activation {
                    base.activation_violations += state.lost_activations(g);
                }
            }
            base.tail = Some(tail);
        }
    }
    if instr.count_messages {
        base.messages_sent = Some(notifications);
    }
    Ok((state.into_result(), base))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::peel_coreness;

    fn k4_pendant() -> Graph {
        Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (0, 4)])
    }

    #[test]
    fn notification_rule() {
        assert!(should_notify(2, 5, 3));
        assert!(!should_notify(2, 2, 3));
        assert!(!should_notify(4, 5, 3));
        assert!(!should_notify(3, 5, 3));
        assert!(should_notify(2, 3, 3));
    }

    #[test]
    fn switch_rule() {
        assert!(switch_condition(255, 256));
        assert!(!switch_condition(256, 256));
        assert!(switch_condition(0, 1));
        assert!(switch_condition(0, 256));
    }

    #[test]
    fn tail_on_empty_queue_is_a_no_op() {
        let g = k4_pendant();
        let state = SharedState::from_parts(vec![4, 3, 3, 3, 1], vec![false; 5]);
        let stats = sequential_tail(&g, &state, &mut TailQueue::new(), true);
        assert_eq!(stats.pops, 0);
        assert_eq!(state.snapshot(), vec![4, 3, 3, 3, 1]);
    }

    #[test]
    fn tail_on_converged_state_pops_each_active_node_once() {
        let g = k4_pendant();
        let state =
            SharedState::from_parts(vec![3, 3, 3, 3, 1], vec![true, false, true, false, true]);
        let mut queue = TailQueue::from_active(&state);
        assert_eq!(queue.len(), 3);
        let stats = sequential_tail(&g, &state, &mut queue, true);
        assert_eq!(stats.updates, 0);
        assert!(stats.pops <= 3);
        assert_eq!(state.snapshot(), vec![3, 3, 3, 3, 1]);
        assert_eq!(state.active_count(), 0);
    }

    #[test]
    fn tail_alone_reaches_the_oracle() {
        let g = k4_pendant();
        for extended in [false, true] {
            let state = SharedState::new(&g);
            let mut q = TailQueue::from_active(&state);
            sequential_tail(&g, &state, &mut q, extended);
            assert_eq!(state.into_result(), peel_coreness(&g));
        }
    }

    #[test]
    fn small_graphs_all_modes() {
        let graphs = [
            Graph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]),
            Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]),
            k4_pendant(),
            Graph::from_edges(4, &[(1, 2)]),
        ];
        for g in &graphs {
            let truth = peel_coreness(g);
            for threads in [1, 2, 4] {
                for batch in [1, 2, 256] {
                    for hybrid_tail in [false, true] {
                        for extended_notify in [false, true] {
                            let cfg = FastConfig {
                                threads,
                                batch,
                                hybrid_tail,
                                extended_notify,
                            };
                            let instr = Instrumentation {
                                audit_activation: true,
                                ..Instrumentation::convergence(&truth)
                            };
                            let (r, report) = fastk_run(g, &cfg, instr).unwrap();
                            assert_eq!(r, truth, "{cfg:?}");
                            assert_eq!(report.monotonicity_violations, 0);
                            assert_eq!(report.soundness_violations, 0);
                            assert_eq!(report.activation_violations, 0);
                            assert_eq!(report.final_error(), Some(0.0));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn star_trace_starts_at_point_six() {
        let g = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        let truth = peel_coreness(&g);
        let (_, report) = fastk_run(
            &g,
            &FastConfig::new(2, 1),
            Instrumentation::convergence(&truth),
        )
        .unwrap();
        assert!((report.trace[0].mean_error - 0.6).abs() < 1e-12);
        assert_eq!(report.trace[0].active_fraction, 1.0);
        let last = report.trace.last().unwrap();
        assert_eq!(last.mean_error, 0.0);
        assert_eq!(last.active_fraction, 0.0);
    }

    #[test]
    fn rejects_zero_config() {
        let g = k4_pendant();
        let none = Instrumentation::none();
        assert_eq!(
            fastk_run(&g, &FastConfig::new(0, 4), none).unwrap_err(),
            ConfigError::ZeroThreads
        );
        assert_eq!(
            fastk_run(&g, &FastConfig::new(4, 0), none).unwrap_err(),
            ConfigError::ZeroBatch
        );
    }
}
