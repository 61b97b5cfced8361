use std::ops::Range;
use std::sync::atomic::{AtomicUsize, Ordering};

use thiserror::Error;

/// Batch size used when none is given.
pub const DEFAULT_BATCH: usize = 256;
/// Worker count used when none is given.
pub const DEFAULT_THREADS: usize = 16;

#[derive(Clone, Copy, Debug, Error, PartialEq, Eq)]
pub enum ConfigError {
    #[error("thread count must be at least 1")]
    ZeroThreads,
    #[error("batch size must be at least 1")]
    ZeroBatch,
}

pub(crate) fn check(threads: usize, batch: usize) -> Result<(), ConfigError> {
    if threads == 0 {
        Err(ConfigError::ZeroThreads)
    } else if batch == 0 {
        Err(ConfigError::ZeroBatch)
    } else {
        Ok(())
    }
}

/// Shared cursor handing out contiguous, disjoint node ranges of `batch`
/// nodes. Every node of `0..len` is claimed exactly once between resets.
#[derive(Debug)]
pub struct BatchCursor {
    next: AtomicUsize,
    batch: usize,
    len: usize,
}

impl BatchCursor {
    pub fn new(len: usize, batch: usize) -> Self {
        assert!(batch > 0, "batch size must be positive");
        Self {
            next: AtomicUsize::new(0),
            batch,
            len,
        }
    }

    #[inline]
    pub fn claim(&self) -> Option<Range<usize>> {
        let start = self.next.fetch_add(self.batch, Ordering::Relaxed);
        (start < self.len).then(|| start..(start + self.batch).min(self.len))
    }

    /// Must only be called while no worker is claiming.
    pub fn reset(&self) {
        self.next.store(0, Ordering::Relaxed);
    }

    pub fn batch(&self) -> usize {
        self.batch
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn claims_are_disjoint_and_cover() {
        let cursor = BatchCursor::new(10, 4);
        let mut got = vec![];
        while let Some(r) = cursor.claim() {
            got.push(r);
        }
        assert_eq!(got, vec![0..4, 4..8, 8..10]);
        cursor.reset();
        assert_eq!(cursor.claim(), Some(0..4));
    }

    #[test]
    fn concurrent_claims_cover_every_node_once() {
        let n = 10_007;
        let cursor = BatchCursor::new(n, 7);
        let hits: Vec<AtomicUsize> = (0..n).map(|_| AtomicUsize::new(0)).collect();
        std::thread::scope(|s| {
            for _ in 0..4 {
                s.spawn(|| {
                    while let Some(r) = cursor.claim() {
                        for i in r {
                            hits[i].fetch_add(1, Ordering::Relaxed);
                        }
                    }
                });
            }
        });
        assert!(hits.iter().all(|h| h.load(Ordering::Relaxed) == 1));
    }

    #[test]
    fn config_check() {
        assert_eq!(check(0, 1), Err(ConfigError::ZeroThreads));
        assert_eq!(check(1, 0), Err(ConfigError::ZeroBatch));
        assert!(check(1, 1).is_ok());
    }
}
