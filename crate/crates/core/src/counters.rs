//! Operation counters used to measure build and query costs.
//!
//! Counters are threaded through builds and queries explicitly, so separate
//! query batches can run concurrently each with their own tallies.

use std::ops::AddAssign;

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct Counters {
    /// Key comparisons (binary searches, cascade adjustments, min selection).
    pub comparisons: u64,
    /// Micro-structure probes: word queries and block lookups.
    pub probes: u64,
    /// Levels walked in cascading or decomposition chains.
    pub cascade_steps: u64,
    /// Structural nodes allocated by a build.
    pub nodes: u64,
    /// Approximate heap bytes held by a build.
    pub bytes: u64,
}

impl Counters {
    pub fn new() -> Self {
        Self::default()
    }

    /// Total query-side operations; the quantity benchmarks report.
    pub fn query_ops(&self) -> u64 {
        self.comparisons + self.probes + self.cascade_steps
    }

    pub fn reset(&mut self) {
        *self = Self::default();
    }

    #[inline]
    pub(crate) fn cmp(&mut self, k: u64) {
        self.comparisons += k;
    }

    #[inline]
    pub(crate) fn probe(&mut self) {
        self.probes += 1;
    }

    #[inline]
    pub(crate) fn step(&mut self) {
        self.cascade_steps += 1;
    }
}

impl AddAssign for Counters {
    fn add_assign(&mut self, o: Self) {
        self.comparisons += o.comparisons;
        self.probes += o.probes;
        self.cascade_steps += o.cascade_steps;
        self.nodes += o.nodes;
        self.bytes += o.bytes;
    }
}

/// Index of the first element of `v` for which `pred` is false, counting
/// one comparison per probe.
pub(crate) fn partition_point<T>(v: &[T], c: &mut Counters, mut pred: impl FnMut(&T) -> bool) -> usize {
    let (mut lo, mut hi) = (0usize, v.len());
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        c.cmp(1);
        if pred(&v[mid]) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    lo
}
