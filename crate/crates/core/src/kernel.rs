//! The estimate-refinement primitive and the single-threaded message-passing
//! engine (SequentialK).
//!
//! Every node starts from its degree as an upper bound on its coreness and
//! repeatedly lowers it to the largest `t` such that at least `t` neighbors
//! report an estimate of `t` or more. Estimates only decrease and never drop
//! below the true coreness, so the process reaches the exact decomposition.

use std::collections::VecDeque;

use parking_lot::Mutex;

use crate::graph::{Graph, NodeId};
use crate::oracle::CorenessResult;
use crate::report::{ConvergenceProbe, Instrumentation, RunReport};

/// Placeholder for a neighbor estimate that has not been received yet.
pub const UNKNOWN_ESTIMATE: u32 = u32::MAX;

/// Largest `t <= current_core` such that at least `t` of the estimates are
/// `>= t`. Estimates above `current_core` count as `current_core`.
pub fn compute_index(estimates: &[u32], current_core: u32) -> u32 {
    IndexScratch::default().compute(estimates.iter().copied(), current_core)
}

/// Reusable counting buffer for [`compute_index`]; one per worker.
#[derive(Debug, Default)]
pub struct IndexScratch {
    counts: Vec<u32>,
}

impl IndexScratch {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn compute<I>(&mut self, estimates: I, current_core: u32) -> u32
    where
        I: ExactSizeIterator<Item = u32>,
    {
        // The answer never exceeds the number of estimates.
        let cap = (current_core as usize).min(estimates.len());
        if cap == 0 {
            return 0;
        }
        self.counts.clear();
        self.counts.resize(cap + 1, 0);
        for e in estimates {
            self.counts[(e as usize).min(cap)] += 1;
        }
        let mut at_least = 0u32;
        for t in (1..=cap).rev() {
            at_least += self.counts[t];
            if at_least as usize >= t {
                return t as u32;
            }
        }
        0
    }
}

/// `⟨sender, estimate⟩`: the sender's estimate at the time it was sent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Message {
    pub sender: NodeId,
    pub estimate: u32,
}

/// A node's lock-protected FIFO inbox.
#[derive(Debug, Default)]
pub struct MessageMail {
    queue: Mutex<VecDeque<Message>>,
}

impl MessageMail {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&self, message: Message) {
        let _held = lock_order::acquire();
        self.queue.lock().push_back(message);
    }

    /// Moves every queued message, oldest first, to the end of `out`.
    pub fn drain_into(&self, out: &mut Vec<Message>) {
        let _held = lock_order::acquire();
        let mut queue = self.queue.lock();
        out.extend(queue.drain(..));
    }

    pub fn len(&self) -> usize {
        let _held = lock_order::acquire();
        self.queue.lock().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Debug-build check that a thread never holds two mailbox locks at once.
pub(crate) mod lock_order {
    #[cfg(debug_assertions)]
    thread_local! {
        static HELD: std::cell::Cell<u32> = const { std::cell::Cell::new(0) };
    }

    pub(crate) struct Held;

    #[inline]
    pub(crate) fn acquire() -> Held {
        #[cfg(debug_assertions)]
        HELD.with(|h| {
            assert_eq!(h.get(), 0, "second mailbox lock taken while one is held");
            h.set(1);
        });
        Held
    }

    impl Drop for Held {
        #[inline]
        fn drop(&mut self) {
            #[cfg(debug_assertions)]
            HELD.with(|h| h.set(0));
        }
    }
}

/// Runs the protocol round by round on one thread.
///
/// Initialization messages (every node sends its degree) are delivered
/// before round 1. A round drains every mailbox, recomputes the nodes whose
/// view changed, then lets every node whose estimate dropped send it to all
/// neighbors. The run stops after the first round with no change.
pub fn sequentialk_run(g: &Graph, instr: Instrumentation<'_>) -> (CorenessResult, RunReport) {
    let n = g.node_count();
    let offsets = g.offsets();
    let mut report = RunReport::default();
    let mut probe = instr.truth.map(ConvergenceProbe::new);
    let counting = instr.count_messages;
    let (mut sent, mut received) = (0u64, 0u64);

    let mut core: Vec<u32> = g.nodes().map(|u| g.degree(u) as u32).collect();
    // Last estimate heard from each neighbor, aligned with the adjacency array.
    let mut heard = vec![UNKNOWN_ESTIMATE; g.adjacency().len()];
    let mut inbox: Vec<VecDeque<Message>> = vec![VecDeque::new(); n];
    let mut changed = vec![false; n];
    let mut scratch = IndexScratch::new();

    let broadcast = |u: NodeId, core: u32, inbox: &mut [VecDeque<Message>], sent: &mut u64| {
        for &v in g.neighbors(u) {
            inbox[v as usize].push_back(Message {
                sender: u,
                estimate: core,
            });
        }
        if counting {
            *sent += g.degree(u) as u64;
        }
    };

    let mut senders = 0;
    for u in g.nodes() {
        if g.degree(u) > 0 {
            broadcast(u, core[u as usize], &mut inbox, &mut sent);
            senders += 1;
        }
    }
    if let Some(p) = probe.as_mut() {
        p.observe(&mut report, core.clone(), senders);
    }

    loop {
        let mut changes = 0;
        for u in g.nodes() {
            let ui = u as usize;
            let mut dirty = false;
            while let Some(Message { sender, estimate }) = inbox[ui].pop_front() {
                if counting {
                    received += 1;
                }
                let pos = offsets[ui]
                    + g.neighbor_position(u, sender)
                        .expect("message from a non-neighbor");
                if estimate < heard[pos] {
                    heard[pos] = estimate;
                    dirty = true;
                }
            }
            if dirty {
                let view = &heard[offsets[ui]..offsets[ui + 1]];
                let t = scratch.compute(view.iter().copied(), core[ui]);
                if t < core[ui] {
                    core[ui] = t;
                    changed[ui] = true;
                    changes += 1;
                }
            }
        }
        report.iterations += 1;

        for u in g.nodes() {
            if std::mem::take(&mut changed[u as usize]) {
                broadcast(u, core[u as usize], &mut inbox, &mut sent);
            }
        }
        if let Some(p) = probe.as_mut() {
            p.observe(&mut report, core.clone(), changes);
        }
        if changes == 0 {
            break;
        }
    }

    if counting {
        report.messages_sent = Some(sent);
        report.messages_received = Some(received);
    }
    (CorenessResult::new(core), report)
}
