//! Elementary-operation counting for scaling measurements.

use std::sync::atomic::{AtomicU64, Ordering};

/// Shared counter of ring multiply-adds and table probes.
///
/// Engines accumulate locally and flush in batches, so the counter adds no
/// measurable overhead.
#[derive(Debug, Default)]
pub struct OpCounter(AtomicU64);

impl OpCounter {
    pub fn new() -> OpCounter {
        OpCounter::default()
    }

    pub fn add(&self, n: u64) {
        self.0.fetch_add(n, Ordering::Relaxed);
    }

    pub fn get(&self) -> u64 {
        self.0.load(Ordering::Relaxed)
    }
}
