//! Per-run counters.

/// `f(t) = (t ln t)^(1/2)`, the second-order scale of the comparison bound.
pub fn f_scale(t: f64) -> f64 {
    (t * t.ln()).sqrt()
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Metrics {
    /// C: three-way comparisons charged to the algorithm.
    pub comparisons: u64,
    /// L: total number of elements classified by Step-4 partitioning passes,
    /// over all recursion levels.
    pub partition_mass: u64,
    /// P: Step-4 executions, over all recursion levels.
    pub select_partitions: u64,
    /// N: calls to the small-file routine.
    pub sselect_calls: u64,
    /// Partitioning passes made inside the small-file routine.
    pub sselect_partitions: u64,
    /// s: elements drawn into proper samples, over all recursive invocations.
    pub sampled: u64,
    /// Initial-sample redraws (nonrecursive variants with restarts enabled).
    pub restarts: u64,
    /// Deepest engine recursion reached (top level is 0).
    pub max_depth: u32,
}

impl Metrics {
    /// `(C - 1.5 n) / f(n)`
    pub fn gamma(&self, n: usize) -> f64 {
        gamma_of(self.comparisons as f64, n)
    }

    /// Average partitions per small-file call, or 0 without calls.
    pub fn partitions_per_sselect(&self) -> f64 {
        if self.sselect_calls == 0 {
            0.0
        } else {
            self.sselect_partitions as f64 / self.sselect_calls as f64
        }
    }
}

/// `(c - 1.5 n) / f(n)` for a (possibly averaged) comparison count `c`.
pub fn gamma_of(c: f64, n: usize) -> f64 {
    let n = n as f64;
    (c - 1.5 * n) / f_scale(n)
}
