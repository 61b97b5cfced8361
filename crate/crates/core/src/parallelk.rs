//! ParallelK: the message-passing protocol run by many threads over
//! per-node mailboxes.
//!
//! Each iteration has a process phase (drain the mailbox, fold the messages
//! into the node's view of its neighbors, recompute) and a send phase (nodes
//! whose estimate dropped send it to their neighbors). In single-round mode
//! the two are fused: a node sends as soon as it has recomputed.
//!
//! Per-node state other than the mailbox is only touched by the worker that
//! claimed the node for the current phase, so it lives in relaxed atomics;
//! phases are separated by barriers (or fork-join scopes), which publish
//! every write to the next phase.

use std::collections::HashMap;
use std::fmt;
use std::ops::Range;
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, AtomicU32, AtomicU64, AtomicUsize, Ordering::Relaxed};
use std::sync::Barrier;

use parking_lot::Mutex;
use rayon::prelude::*;

use crate::graph::{Graph, NodeId};
use crate::kernel::{IndexScratch, Message, MessageMail, UNKNOWN_ESTIMATE};
use crate::oracle::CorenessResult;
use crate::report::{ConvergenceProbe, Instrumentation, RunReport};
use crate::schedule::{self, BatchCursor, ConfigError, DEFAULT_BATCH, DEFAULT_THREADS};

/// How the phases are spread over threads.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Parallel iterators over all nodes, minimum split length `batch`.
    DataParallelLoop,
    /// One pool task per `batch`-sized chunk, joined at the end of a phase.
    TaskPool,
    /// Long-lived workers claiming batches from a shared cursor, plus a
    /// coordinator, all meeting on a barrier.
    #[default]
    DedicatedWorkers,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [
        Strategy::DataParallelLoop,
        Strategy::TaskPool,
        Strategy::DedicatedWorkers,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::DataParallelLoop => "data-parallel",
            Strategy::TaskPool => "task-pool",
            Strategy::DedicatedWorkers => "dedicated",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| {
                format!("unknown strategy {s:?} (expected data-parallel, task-pool or dedicated)")
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParallelConfig {
    pub threads: usize,
    pub batch: usize,
    pub strategy: Strategy,
    /// Send right after recomputing instead of in a separate phase.
    pub single_round: bool,
    /// Skip a neighbor whose last known estimate is not above ours.
    pub selective_send: bool,
    /// Neighbor estimates in arrays aligned with the sorted adjacency;
    /// otherwise one hash map per node.
    pub sorted_neighbors: bool,
}

impl Default for ParallelConfig {
    fn default() -> Self {
        Self {
            threads: DEFAULT_THREADS,
            batch: DEFAULT_BATCH,
            strategy: Strategy::DedicatedWorkers,
            single_round: true,
            selective_send: true,
            sorted_neighbors: true,
        }
    }
}

impl ParallelConfig {
    pub fn new(threads: usize, batch: usize, strategy: Strategy) -> Self {
        Self {
            threads,
            batch,
            strategy,
            ..Self::default()
        }
    }
}

/// A node's view of its neighbors' estimates.
pub trait PeerTable: Send + Sync {
    fn new(g: &Graph) -> Self;

    /// Records `estimate` from `sender` if it is below the known value.
    /// Returns whether anything changed.
    fn fold(&self, g: &Graph, u: NodeId, sender: NodeId, estimate: u32) -> bool;

    /// Recomputes `u`'s estimate from its view, capped at `current`.
    fn compute(&self, g: &Graph, u: NodeId, current: u32, scratch: &mut IndexScratch) -> u32;

    /// Calls `f(v, known_estimate_of_v)` for every neighbor in adjacency order.
    fn visit<F: FnMut(NodeId, u32)>(&self, g: &Graph, u: NodeId, f: F);
}

/// Estimates stored in one flat array parallel to the adjacency array;
/// senders are located by binary search in the sorted neighbor slice.
pub struct SortedPeers {
    heard: Vec<AtomicU32>,
}

impl PeerTable for SortedPeers {
    fn new(g: &Graph) -> Self {
        Self {
            heard: (0..g.adjacency().len())
                .map(|_| AtomicU32::new(UNKNOWN_ESTIMATE))
                .collect(),
        }
    }

    #[inline]
    fn fold(&self, g: &Graph, u: NodeId, sender: NodeId, estimate: u32) -> bool {
        let pos = g.offsets()[u as usize]
            + g.neighbor_position(u, sender)
                .expect("message from a non-neighbor");
        let slot = &self.heard[pos];
        if estimate < slot.load(Relaxed) {
            slot.store(estimate, Relaxed);
            true
        } else {
            false
        }
    }

    #[inline]
    fn compute(&self, g: &Graph, u: NodeId, current: u32, scratch: &mut IndexScratch) -> u32 {
        let o = g.offsets();
        let view = &self.heard[o[u as usize]..o[u as usize + 1]];
        scratch.compute(view.iter().map(|e| e.load(Relaxed)), current)
    }

    #[inline]
    fn visit<F: FnMut(NodeId, u32)>(&self, g: &Graph, u: NodeId, mut f: F) {
        let start = g.offsets()[u as usize];
        for (i, &v) in g.neighbors(u).iter().enumerate() {
            f(v, self.heard[start + i].load(Relaxed));
        }
    }
}

/// One hash map per node. Only the claiming worker touches a node's map, so
/// the mutex is never contended.
pub struct HashedPeers {
    maps: Vec<Mutex<HashMap<NodeId, u32>>>,
}

impl PeerTable for HashedPeers {
    fn new(g: &Graph) -> Self {
        Self {
            maps: g
                .nodes()
                .map(|u| {
                    let map = g
                        .neighbors(u)
                        .iter()
                        .map(|&v| (v, UNKNOWN_ESTIMATE))
                        .collect();
                    Mutex::new(map)
                })
                .collect(),
        }
    }

    fn fold(&self, _g: &Graph, u: NodeId, sender: NodeId, estimate: u32) -> bool {
        let mut map = self.maps[u as usize].lock();
        let known = map.get_mut(&sender).expect("message from a non-neighbor");
        if estimate < *known {
            *known = estimate;
            true
        } else {
            false
        }
    }

    fn compute(&self, _g: &Graph, u: NodeId, current: u32, scratch: &mut IndexScratch) -> u32 {
        let map = self.maps[u as usize].lock();
        scratch.compute(map.values().copied(), current)
    }

    fn visit<F: FnMut(NodeId, u32)>(&self, g: &Graph, u: NodeId, mut f: F) {
        let map = self.maps[u as usize].lock();
        for &v in g.neighbors(u) {
            f(v, map[&v]);
        }
    }
}

/// Per-thread scratch space and counters.
#[derive(Debug, Default)]
pub struct WorkerLocal {
    scratch: IndexScratch,
    inbox: Vec<Message>,
    pub sent: u64,
    pub received: u64,
    /// Nodes whose estimate dropped.
    pub changes: usize,
}

impl WorkerLocal {
    pub fn new() -> Self {
        Self::default()
    }

    fn totals(&self) -> Totals {
        Totals {
            sent: self.sent,
            received: self.received,
            changes: self.changes,
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct Totals {
    sent: u64,
    received: u64,
    changes: usize,
}

impl Totals {
    fn merge(self, o: Totals) -> Totals {
        Totals {
            sent: self.sent + o.sent,
            received: self.received + o.received,
            changes: self.changes + o.changes,
        }
    }
}

/// Shared state of a ParallelK run.
pub struct MailboxState<'g, P: PeerTable = SortedPeers> {
    graph: &'g Graph,
    core: Vec<AtomicU32>,
    changed: Vec<AtomicBool>,
    peers: P,
    mail: Vec<MessageMail>,
    selective: bool,
}

impl<'g, P: PeerTable> MailboxState<'g, P> {
    /// Every node starts at its degree with an empty mailbox.
    pub fn new(graph: &'g Graph, selective: bool) -> Self {
        Self {
            graph,
            core: graph
                .nodes()
                .map(|u| AtomicU32::new(graph.degree(u) as u32))
                .collect(),
            changed: graph.nodes().map(|_| AtomicBool::new(false)).collect(),
            peers: P::new(graph),
            mail: graph.nodes().map(|_| MessageMail::new()).collect(),
            selective,
        }
    }

    #[inline]
    pub fn core(&self, u: NodeId) -> u32 {
        self.core[u as usize].load(Relaxed)
    }

    pub fn is_changed(&self, u: NodeId) -> bool {
        self.changed[u as usize].load(Relaxed)
    }

    pub fn mail(&self, u: NodeId) -> &MessageMail {
        &self.mail[u as usize]
    }

    pub fn snapshot(&self) -> Vec<u32> {
        self.core.iter().map(|c| c.load(Relaxed)).collect()
    }

    /// Messages still sitting in mailboxes.
    pub fn pending_messages(&self) -> usize {
        self.mail.iter().map(MessageMail::len).sum()
    }

    pub fn into_result(self) -> CorenessResult {
        CorenessResult::new(self.core.into_iter().map(AtomicU32::into_inner).collect())
    }

    /// Initialization: every non-isolated node announces its degree.
    pub fn send_initial(&self, range: Range<usize>, local: &mut WorkerLocal) {
        for u in range {
            self.send_node(u as NodeId, local);
        }
    }

    /// Drains `u`'s mailbox and recomputes its estimate if its view changed.
    /// In fused mode a dropped estimate is sent at once; otherwise the node
    /// is flagged for the send phase. Returns whether the estimate dropped.
    #[inline]
    pub fn process_node(&self, u: NodeId, local: &mut WorkerLocal, fused: bool) -> bool {
        let g = self.graph;
        self.mail[u as usize].drain_into(&mut local.inbox);
        if local.inbox.is_empty() {
            return false;
        }
        local.received += local.inbox.len() as u64;
        let mut dirty = false;
        for m in local.inbox.drain(..) {
            dirty |= self.peers.fold(g, u, m.sender, m.estimate);
        }
        if !dirty {
            return false;
        }
        let current = self.core(u);
        let t = self.peers.compute(g, u, current, &mut local.scratch);
        if t >= current {
            return false;
        }
        self.core[u as usize].store(t, Relaxed);
        local.changes += 1;
        if fused {
            self.send_node(u, local);
        } else {
            self.changed[u as usize].store(true, Relaxed);
        }
        true
    }

    /// Sends `⟨u, core(u)⟩` to the neighbors (all of them, or with selective
    /// sending only those last known above `core(u)`).
    #[inline]
    pub fn send_node(&self, u: NodeId, local: &mut WorkerLocal) {
        let core = self.core(u);
        let msg = Message {
            sender: u,
            estimate: core,
        };
        let selective = self.selective;
        let mail = &self.mail;
        let mut sent = 0;
        self.peers.visit(self.graph, u, |v, known| {
            if !selective || core < known {
                mail[v as usize].push(msg);
                sent += 1;
            }
        });
        local.sent += sent;
    }

    /// Process phase over a claimed range; true if any node changed.
    pub fn process_phase(&self, range: Range<usize>, local: &mut WorkerLocal) -> bool {
        let mut any = false;
        for u in range {
            any |= self.process_node(u as NodeId, local, false);
        }
        any
    }

    /// Send phase over a claimed range: flagged nodes send and are unflagged.
    pub fn send_phase(&self, range: Range<usize>, local: &mut WorkerLocal) {
        for u in range {
            if self.changed[u].swap(false, Relaxed) {
                self.send_node(u as NodeId, local);
            }
        }
    }

    /// Single-round phase: process and send immediately.
    pub fn fused_phase(&self, range: Range<usize>, local: &mut WorkerLocal) -> bool {
        let mut any = false;
        for u in range {
            any |= self.process_node(u as NodeId, local, true);
        }
        any
    }
}

/// Runs ParallelK. The result always equals the peeling oracle; iteration
/// and message counts depend on the schedule.
pub fn parallelk_run(
    g: &Graph,
    cfg: &ParallelConfig,
    instr: Instrumentation<'_>,
) -> Result<(CorenessResult, RunReport), ConfigError> {
    schedule::check(cfg.threads, cfg.batch)?;
    Ok(if cfg.sorted_neighbors {
        run_with::<SortedPeers>(g, cfg, instr)
    } else {
        run_with::<HashedPeers>(g, cfg, instr)
    })
}

/// ParallelK with fused process/send rounds and otherwise default options.
pub fn single_round_variant(
    g: &Graph,
    threads: usize,
    batch: usize,
    instr: Instrumentation<'_>,
) -> Result<(CorenessResult, RunReport), ConfigError> {
    let cfg = ParallelConfig {
        single_round: true,
        ..ParallelConfig::new(threads, batch, Strategy::DedicatedWorkers)
    };
    parallelk_run(g, &cfg, instr)
}

fn run_with<P: PeerTable>(
    g: &Graph,
    cfg: &ParallelConfig,
    instr: Instrumentation<'_>,
) -> (CorenessResult, RunReport) {
    let state = MailboxState::<P>::new(g, cfg.selective_send);
    let mut report = RunReport::default();
    let mut probe = instr.truth.map(ConvergenceProbe::new);
    let totals = if g.node_count() == 0 {
        Totals::default()
    } else {
        match cfg.strategy {
            Strategy::DedicatedWorkers => dedicated(&state, cfg, &mut probe, &mut report),
            Strategy::TaskPool => task_pool(&state, cfg, &mut probe, &mut report),
            Strategy::DataParallelLoop => data_parallel(&state, cfg, &mut probe, &mut report),
        }
    };
    debug_assert_eq!(totals.sent, totals.received, "messages lost or duplicated");
    debug_assert_eq!(state.pending_messages(), 0);
    if instr.count_messages {
        report.messages_sent = Some(totals.sent);
        report.messages_received = Some(totals.received);
    }
    (state.into_result(), report)
}

fn initial_senders(g: &Graph) -> usize {
    g.nodes().filter(|&u| g.degree(u) > 0).count()
}

/// Per-iteration shared flags. Three slots rotate so that the coordinator
/// can clear the slot of iteration `e + 1` while iteration `e` runs: that
/// slot was last read right after iteration `e - 2` ended.
struct RoundSlot {
    cursor: BatchCursor,
    go_on: AtomicBool,
    changes: AtomicUsize,
}

impl RoundSlot {
    fn new(n: usize, batch: usize) -> Self {
        Self {
            cursor: BatchCursor::new(n, batch),
            go_on: AtomicBool::new(false),
            changes: AtomicUsize::new(0),
        }
    }

    fn reset(&self) {
        self.cursor.reset();
        self.go_on.store(false, Relaxed);
        self.changes.store(0, Relaxed);
    }
}

fn dedicated<P: PeerTable>(
    state: &MailboxState<'_, P>,
    cfg: &ParallelConfig,
    probe: &mut Option<ConvergenceProbe<'_>>,
    report: &mut RunReport,
) -> Totals {
    let n = state.graph.node_count();
    let fused = cfg.single_round;
    let tracing = probe.is_some();
    let slots: [RoundSlot; 3] = std::array::from_fn(|_| RoundSlot::new(n, cfg.batch));
    let barrier = Barrier::new(cfg.threads + 1);
    let sent = AtomicU64::new(0);
    let received = AtomicU64::new(0);

    std::thread::scope(|s| {
        for _ in 0..cfg.threads {
            s.spawn(|| {
                let mut local = WorkerLocal::new();
                let mut ranges = Vec::new();
                while let Some(r) = slots[0].cursor.claim() {
                    state.send_initial(r, &mut local);
                }
                barrier.wait();

                let mut epoch = 0;
                loop {
                    epoch += 1;
                    let slot = &slots[epoch % 3];
                    if tracing {
                        barrier.wait();
                    }
                    let mut changed = false;
                    let before = local.changes;
                    while let Some(r) = slot.cursor.claim() {
                        if fused {
                            changed |= state.fused_phase(r, &mut local);
                        } else {
                            changed |= state.process_phase(r.clone(), &mut local);
                            ranges.push(r);
                        }
                    }
                    if !fused {
                        barrier.wait();
                        for r in ranges.drain(..) {
                            state.send_phase(r, &mut local);
                        }
                    }
                    if changed {
                        slot.go_on.fetch_or(true, Relaxed);
                    }
                    slot.changes.fetch_add(local.changes - before, Relaxed);
                    barrier.wait();
                    if !slot.go_on.load(Relaxed) {
                        break;
                    }
                }
                sent.fetch_add(local.sent, Relaxed);
                received.fetch_add(local.received, Relaxed);
            });
        }

        // Coordinator.
        barrier.wait();
        if let Some(p) = probe.as_mut() {
            p.observe(report, state.snapshot(), initial_senders(state.graph));
        }
        let mut epoch = 0;
        loop {
            epoch += 1;
            slots[(epoch + 1) % 3].reset();
            if tracing {
                barrier.wait();
            }
            if !fused {
                barrier.wait();
            }
            barrier.wait();
            report.iterations += 1;
            let slot = &slots[epoch % 3];
            if let Some(p) = probe.as_mut() {
                p.observe(report, state.snapshot(), slot.changes.load(Relaxed));
            }
            if !slot.go_on.load(Relaxed) {
                break;
            }
        }
    });

    Totals {
        sent: sent.into_inner(),
        received: received.into_inner(),
        changes: 0,
    }
}

fn build_pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("failed to build thread pool")
}

fn task_pool<P: PeerTable>(
    state: &MailboxState<'_, P>,
    cfg: &ParallelConfig,
    probe: &mut Option<ConvergenceProbe<'_>>,
    report: &mut RunReport,
) -> Totals {
    let n = state.graph.node_count();
    let pool = build_pool(cfg.threads);
    let chunks: Vec<Range<usize>> = (0..n)
        .step_by(cfg.batch)
        .map(|s| s..(s + cfg.batch).min(n))
        .collect();
    let go_on = AtomicBool::new(false);

    // Runs `phase` on every chunk as a pool task and waits for all of them.
    let run_phase = |phase: &(dyn Fn(Range<usize>, &mut WorkerLocal) -> bool + Sync)| -> Totals {
        let round = Mutex::new(Totals::default());
        pool.scope(|s| {
            for chunk in &chunks {
                let round = &round;
                let go_on = &go_on;
                s.spawn(move |_| {
                    let mut local = WorkerLocal::new();
                    if phase(chunk.clone(), &mut local) {
                        go_on.store(true, Relaxed);
                    }
                    let t = local.totals();
                    let mut r = round.lock();
                    *r = r.merge(t);
                });
            }
        });
        round.into_inner()
    };

    let mut total = run_phase(&|r, l| {
        state.send_initial(r, l);
        false
    });
    if let Some(p) = probe.as_mut() {
        p.observe(report, state.snapshot(), initial_senders(state.graph));
    }

    loop {
        go_on.store(false, Relaxed);
        let round = if cfg.single_round {
            run_phase(&|r, l| state.fused_phase(r, l))
        } else {
            let processed = run_phase(&|r, l| state.process_phase(r, l));
            processed.merge(run_phase(&|r, l| {
                state.send_phase(r, l);
                false
            }))
        };
        report.iterations += 1;
        total = total.merge(round);
        if let Some(p) = probe.as_mut() {
            p.observe(report, state.snapshot(), round.changes);
        }
        if !go_on.load(Relaxed) {
            break;
        }
    }
    total
}

fn data_parallel<P: PeerTable>(
    state: &MailboxState<'_, P>,
    cfg: &ParallelConfig,
    probe: &mut Option<ConvergenceProbe<'_>>,
    report: &mut RunReport,
) -> Totals {
    let n = state.graph.node_count();
    let pool = build_pool(cfg.threads);
    let batch = cfg.batch;

    // Maps `step` over every node in parallel; returns the merged counters
    // and the OR of the per-node results.
    let sweep = |step: &(dyn Fn(NodeId, &mut WorkerLocal) -> bool + Sync)| -> (Totals, bool) {
        pool.install(|| {
            (0..n)
                .into_par_iter()
                .with_min_len(batch)
                .fold(
                    || (WorkerLocal::new(), false),
                    |(mut local, any), u| {
                        let hit = step(u as NodeId, &mut local);
                        (local, any | hit)
                    },
                )
                .map(|(local, any)| (local.totals(), any))
                .reduce(
                    || (Totals::default(), false),
                    |a, b| (a.0.merge(b.0), a.1 | b.1),
                )
        })
    };

    let (mut total, _) = sweep(&|u, l| {
        state.send_node(u, l);
        false
    });
    if let Some(p) = probe.as_mut() {
        p.observe(report, state.snapshot(), initial_senders(state.graph));
    }

    loop {
        let (round, go_on) = if cfg.single_round {
            sweep(&|u, l| state.process_node(u, l, true))
        } else {
            let (processed, go_on) = sweep(&|u, l| state.process_node(u, l, false));
            let (sent, _) = sweep(&|u, l| {
                if state.changed[u as usize].swap(false, Relaxed) {
                    state.send_node(u, l);
                }
                false
            });
            (processed.merge(sent), go_on)
        };
        report.iterations += 1;
        total = total.merge(round);
        if let Some(p) = probe.as_mut() {
            p.observe(report, state.snapshot(), round.changes);
        }
        if !go_on {
            break;
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::peel_coreness;

    fn star4() -> Graph {
        Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)])
    }

    #[test]
    fn empty_mailbox_is_no_change() {
        let g = star4();
        let state = MailboxState::<SortedPeers>::new(&g, false);
        let mut local = WorkerLocal::new();
        assert!(!state.process_phase(0..5, &mut local));
    }

    #[test]
    fn repeated_message_is_a_no_op() {
        // Node 0 has degree 3.
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]);
        let state = MailboxState::<SortedPeers>::new(&g, false);
        let mut local = WorkerLocal::new();
        let m = Message {
            sender: 1,
            estimate: 1,
        };
        state.mail(0).push(m);
        state.process_phase(0..1, &mut local);
        state.mail(0).push(m);
        let before = state.core(0);
        assert!(!state.process_phase(0..1, &mut local));
        assert_eq!(state.core(0), before);
    }

    #[test]
    fn star_center_drops_to_one() {
        let g = star4();
        let state = MailboxState::<SortedPeers>::new(&g, false);
        let mut local = WorkerLocal::new();
        for leaf in 1..5 {
            state.mail(0).push(Message {
                sender: leaf,
                estimate: 1,
            });
        }
        assert!(state.process_phase(0..1, &mut local));
        assert_eq!(state.core(0), 1);
        assert!(state.is_changed(0));
    }

    #[test]
    fn selective_send_suppresses_useless_messages() {
        // Center 0 hears estimate 1 from leaf 1 and drops from 3 to 2; leaf 1
        // is already known below 2, so only leaves 2 and 3 need the update.
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]);
        for (selective, expect_to_1) in [(true, 0), (false, 1)] {
            let state = MailboxState::<SortedPeers>::new(&g, selective);
            let mut local = WorkerLocal::new();
            state.mail(0).push(Message {
                sender: 1,
                estimate: 1,
            });
            assert!(state.process_phase(0..1, &mut local));
            assert_eq!(state.core(0), 2);
            state.send_phase(0..1, &mut local);
            assert_eq!(state.mail(1).len(), expect_to_1);
            assert_eq!(state.mail(2).len(), 1);
            assert_eq!(state.mail(3).len(), 1);
            assert!(!state.is_changed(0));
        }
    }

    #[test]
    fn all_strategies_on_small_graphs() {
        let graphs = [
            Graph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]),
            star4(),
            Graph::from_edges(6, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (0, 4)]),
            Graph::from_edges(0, &[]),
        ];
        for g in &graphs {
            let truth = peel_coreness(g);
            for strategy in Strategy::ALL {
                for (single_round, selective, sorted) in [
                    (false, false, true),
                    (true, true, true),
                    (false, true, false),
                ] {
                    let cfg = ParallelConfig {
                        threads: 2,
                        batch: 1,
                        strategy,
                        single_round,
                        selective_send: selective,
                        sorted_neighbors: sorted,
                    };
                    let (r, report) =
                        parallelk_run(g, &cfg, Instrumentation::convergence(&truth)).unwrap();
                    assert_eq!(r, truth, "{cfg:?}");
                    assert_eq!(report.messages_sent, report.messages_received);
                    assert_eq!(report.monotonicity_violations, 0);
                    if g.node_count() > 0 {
                        assert_eq!(report.final_error(), Some(0.0));
                    }
                }
            }
        }
    }

    #[test]
    fn zero_threads_or_batch_rejected() {
        let g = star4();
        let none = Instrumentation::none();
        let cfg = ParallelConfig::new(0, 1, Strategy::DedicatedWorkers);
        assert_eq!(
            parallelk_run(&g, &cfg, none).unwrap_err(),
            ConfigError::ZeroThreads
        );
        let cfg = ParallelConfig::new(1, 0, Strategy::TaskPool);
        assert_eq!(
            parallelk_run(&g, &cfg, none).unwrap_err(),
            ConfigError::ZeroBatch
        );
    }

    #[test]
    fn strategy_names_round_trip() {
        for s in Strategy::ALL {
            assert_eq!(s.name().parse::<Strategy>().unwrap(), s);
        }
        assert!("rayon".parse::<Strategy>().is_err());
    }
}
