//! Keys and the counting three-way comparator.
//!
//! Every decision the selection routines make about keys goes through
//! [`CountingComparator::compare`]. One call yields the full
//! less/equal/greater outcome and is counted as a single comparison.

use std::cmp::Ordering;

/// Counts three-way key comparisons.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct CountingComparator {
    count: u64,
}

impl CountingComparator {
    pub fn new() -> Self {
        Self::default()
    }

    /// Three-way comparison of `a` against `b`; bumps the counter by one.
    #[inline]
    pub fn compare<K: Ord + ?Sized>(&mut self, a: &K, b: &K) -> Ordering {
        self.count += 1;
        a.cmp(b)
    }

    /// Number of comparisons performed since construction or the last reset.
    pub fn count(&self) -> u64 {
        self.count
    }

    /// Clears the counter. Only meant to be used between trials.
    pub fn reset(&mut self) {
        self.count = 0;
    }
}

/// A binary64 key ordered by [`f64::total_cmp`].
///
/// Inputs are expected to avoid NaN; the total order places NaNs at the
/// extremes, so a NaN-bearing input still selects deterministically but
/// the result carries no numeric meaning.
#[derive(Debug, Clone, Copy)]
pub struct TotalF64(pub f64);

impl PartialEq for TotalF64 {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for TotalF64 {}

impl PartialOrd for TotalF64 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TotalF64 {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl From<f64> for TotalF64 {
    fn from(v: f64) -> Self {
        TotalF64(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn each_outcome_costs_one() {
        let mut cmp = CountingComparator::new();
        assert_eq!(cmp.compare(&2, &5), Ordering::Less);
        assert_eq!(cmp.count(), 1);
        assert_eq!(cmp.compare(&7, &7), Ordering::Equal);
        assert_eq!(cmp.count(), 2);
        assert_eq!(cmp.compare(&9, &3), Ordering::Greater);
        assert_eq!(cmp.count(), 3);
        cmp.reset();
        assert_eq!(cmp.count(), 0);
    }

    #[test]
    fn float_keys_are_totally_ordered() {
        let mut cmp = CountingComparator::new();
        assert_eq!(cmp.compare(&TotalF64(-0.5), &TotalF64(1.5)), Ordering::Less);
        assert_eq!(cmp.compare(&TotalF64(2.0), &TotalF64(2.0)), Ordering::Equal);
        assert_eq!(cmp.count(), 2);
    }
}
