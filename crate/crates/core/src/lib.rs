//! Exact k-core decomposition of large undirected graphs.
//!
//! Three engines compute the coreness of every node and are checked
//! against a linear-time peeling oracle:
//!
//! * [`sequentialk_run`]: single-threaded message passing,
//! * [`parallelk_run`]: the same protocol over per-node mailboxes on a
//!   worker pool, with three interchangeable scheduling strategies,
//! * [`fastk_run`]: shared estimate and activation arrays updated in
//!   bulk-synchronous phases, finishing with a sequential priority-queue
//!   tail.
//!
//! ```
//! use kcore::{fastk_run, peel_coreness, FastConfig, Graph, Instrumentation};
//!
//! let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 0), (2, 3)]);
//! let (coreness, _) = fastk_run(&g, &FastConfig::new(2, 1), Instrumentation::none()).unwrap();
//! assert_eq!(coreness.coreness(), &[2, 2, 2, 1]);
//! assert_eq!(coreness, peel_coreness(&g));
//! ```

pub mod datasets;
pub mod engine;
pub mod fastk;
pub mod gen;
pub mod graph;
pub mod kernel;
pub mod oracle;
pub mod parallelk;
pub mod report;
pub mod schedule;

pub use engine::{run_engine, Algorithm, EngineConfig};
pub use fastk::{fastk_run, should_notify, switch_condition, FastConfig};
pub use graph::{load_edge_list, load_path, Graph, GraphError, NodeId};
pub use kernel::{compute_index, sequentialk_run};
pub use oracle::{peel_coreness, verify, CorenessResult, Mismatch};
pub use parallelk::{parallelk_run, single_round_variant, ParallelConfig, Strategy};
pub use report::{Instrumentation, IterationStats, RunReport, TailStats};
pub use schedule::{ConfigError, DEFAULT_BATCH, DEFAULT_THREADS};
