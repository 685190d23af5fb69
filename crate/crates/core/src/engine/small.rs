//! Fat-pivot quickselect, shared by the small-file routine and the
//! quickselect baseline.
//!
//! Every pass splits the live range into `< p | = p | > p` with one
//! three-way comparison per non-pivot element. Elements left of the live
//! range are strictly smaller than all of it and elements right of it are
//! strictly larger, so the returned run is the complete run of keys equal
//! to the answer.

use std::cmp::Ordering;
use std::ops::Range;

use crate::compare::CountingComparator;
use crate::rng::RngStream;

/// Outcome of a fat-pivot selection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct FatSelect {
    pub run: Range<usize>,
    pub passes: u64,
}

/// Position of the median of `a[i]`, `a[j]`, `a[k]` (at most 3 comparisons).
pub(crate) fn median_of_3<T: Ord>(
    a: &[T],
    i: usize,
    j: usize,
    k: usize,
    cmp: &mut CountingComparator,
) -> usize {
    if cmp.compare(&a[i], &a[j]) == Ordering::Less {
        if cmp.compare(&a[j], &a[k]) != Ordering::Greater {
            j
        } else if cmp.compare(&a[i], &a[k]) != Ordering::Greater {
            k
        } else {
            i
        }
    } else if cmp.compare(&a[i], &a[k]) != Ordering::Greater {
        i
    } else if cmp.compare(&a[j], &a[k]) != Ordering::Greater {
        k
    } else {
        j
    }
}

/// Partitions `a` around the element at `a[0]`. Returns `(lt, gt)` with
/// `a[..lt] < p`, `a[lt..gt] == p`, `a[gt..] > p`.
pub(crate) fn partition3<T: Ord + Clone>(a: &mut [T], cmp: &mut CountingComparator) -> (usize, usize) {
    let pivot = a[0].clone();
    let (mut lt, mut i, mut gt) = (0, 1, a.len());
    while i < gt {
        match cmp.compare(&a[i], &pivot) {
            Ordering::Less => {
                a.swap(lt, i);
                lt += 1;
                i += 1;
            }
            Ordering::Greater => {
                gt -= 1;
                a.swap(i, gt);
            }
            Ordering::Equal => i += 1,
        }
    }
    (lt, gt)
}

/// Selects the `k`-th smallest (1-based), choosing each pass's pivot
/// position with `choose`.
pub(crate) fn fat_select<T, F>(a: &mut [T], k: usize, cmp: &mut CountingComparator, mut choose: F) -> FatSelect
where
    T: Ord + Clone,
    F: FnMut(&[T], &mut CountingComparator) -> usize,
{
    assert!(k >= 1 && k <= a.len());
    let target = k - 1;
    let (mut lo, mut hi) = (0, a.len());
    let mut passes = 0;
    loop {
        if hi - lo == 1 {
            return FatSelect { run: lo..hi, passes };
        }
        let seg = &mut a[lo..hi];
        let p = choose(seg, cmp);
        seg.swap(0, p);
        let (lt, gt) = partition3(seg, cmp);
        passes += 1;
        if target < lo + lt {
            hi = lo + lt;
        } else if target >= lo + gt {
            lo += gt;
        } else {
            return FatSelect {
                run: lo + lt..lo + gt,
                passes,
            };
        }
    }
}

/// Deterministic median of first, middle and last.
pub(crate) fn middle_pivot<T: Ord>(seg: &[T], cmp: &mut CountingComparator) -> usize {
    let n = seg.len();
    if n < 3 {
        0
    } else {
        median_of_3(seg, 0, n / 2, n - 1, cmp)
    }
}

/// Median of three uniformly drawn positions.
pub(crate) fn random_pivot<T: Ord>(rng: &mut RngStream) -> impl FnMut(&[T], &mut CountingComparator) -> usize + '_ {
    move |seg, cmp| {
        let n = seg.len();
        if n < 3 {
            rng.index_in(0, n)
        } else {
            let i = rng.index_in(0, n);
            let j = rng.index_in(0, n);
            let k = rng.index_in(0, n);
            median_of_3(seg, i, j, k, cmp)
        }
    }
}

/// The small-file routine: deterministic median-of-3 fat quickselect.
pub(crate) fn small_select_run<T: Ord + Clone>(a: &mut [T], k: usize, cmp: &mut CountingComparator) -> FatSelect {
    fat_select(a, k, cmp, middle_pivot)
}
