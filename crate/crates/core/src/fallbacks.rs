//! Selection routines used in place of recursion by the nonrecursive
//! variants, plus the quickselect baseline.
//!
//! The `*_run` forms return the full run of keys equal to the answer, with
//! everything before it strictly smaller and everything after it strictly
//! larger; the engine relies on that to keep its zones exact.

use std::cmp::Ordering;
use std::ops::Range;

use crate::compare::CountingComparator;
use crate::engine::small::{fat_select, random_pivot};
use crate::error::SelectError;
use crate::rng::RngStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FallbackKind {
    Pick,
    Sort,
    Quickselect,
}

/// Measured cost of a fallback on one input size: `gamma` is comparisons
/// per `m` for Pick and Quickselect, and per `m ln m` for Sort.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FallbackProfile {
    pub kind: FallbackKind,
    pub m: usize,
    pub gamma: f64,
}

impl FallbackProfile {
    /// Mean over `trials` random permutations of `1..=m`, selecting the median.
    pub fn measure(kind: FallbackKind, m: usize, trials: u64, seed: u64) -> Self {
        assert!(m >= 2 && trials >= 1);
        let mut total = 0u64;
        for t in 0..trials {
            let mut rng = RngStream::for_trial(seed, t, 0);
            let mut data: Vec<u64> = (1..=m as u64).collect();
            rng.shuffle(&mut data);
            let mut cmp = CountingComparator::new();
            let k = m.div_ceil(2);
            match kind {
                FallbackKind::Pick => {
                    pick_run(&mut data, k, &mut cmp);
                }
                FallbackKind::Sort => {
                    merge_sort(&mut data, &mut cmp);
                }
                FallbackKind::Quickselect => {
                    quickselect_run(&mut data, k, &mut rng, &mut cmp);
                }
            }
            total += cmp.count();
        }
        let mean = total as f64 / trials as f64;
        let scale = match kind {
            FallbackKind::Sort => m as f64 * (m as f64).ln(),
            _ => m as f64,
        };
        Self {
            kind,
            m,
            gamma: mean / scale,
        }
    }
}

fn check_rank(k: usize, len: usize) -> Result<(), SelectError> {
    if k == 0 || k > len {
        Err(SelectError::RankOutOfRange { k, len })
    } else {
        Ok(())
    }
}

/// Key wrapper carrying a group index; ordered by the key alone.
#[derive(Debug, Clone)]
struct Tagged<E>(E, usize);

impl<E: Ord> PartialEq for Tagged<E> {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl<E: Ord> Eq for Tagged<E> {}

impl<E: Ord> PartialOrd for Tagged<E> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<E: Ord> Ord for Tagged<E> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}

/// Arranges five elements as `lo, lo, median, hi, hi` in six comparisons.
fn median_of_5<E: Ord>(g: &mut [E], cmp: &mut CountingComparator) {
    use Ordering::Greater;
    // Positions: a=0, b=1, c=2, d=3, e=4.
    if cmp.compare(&g[0], &g[1]) == Greater {
        g.swap(0, 1);
    }
    if cmp.compare(&g[2], &g[3]) == Greater {
        g.swap(2, 3);
    }
    // a <= b, c <= d; the smaller of a and c is below three others.
    if cmp.compare(&g[0], &g[2]) == Greater {
        g.swap(0, 2);
        g.swap(1, 3);
    }
    // g[0] is out. Pair e with b.
    if cmp.compare(&g[4], &g[1]) == Greater {
        g.swap(4, 1);
    }
    // e <= b, c <= d.
    if cmp.compare(&g[4], &g[2]) == Greater {
        g.swap(4, 2);
        g.swap(1, 3);
    }
    // g[4] is out too; the median is min(b, c).
    if cmp.compare(&g[1], &g[2]) == Greater {
        // Median c: [a, b, c, d, e] -> [a, e, c, d, b].
        g.swap(1, 4);
    } else {
        // Median b: [a, b, c, d, e] -> [a, e, b, c, d].
        g.swap(1, 4);
        g.swap(2, 4);
        g.swap(3, 4);
    }
}

/// Deterministic median-of-medians (groups of five).
///
/// Group medians are ordered by a recursive call whose fat output tells
/// which groups sit wholly on one side of the pivot: three members of a
/// group whose median is below the pivot are below it too, so only the
/// other elements are compared during partitioning.
pub(crate) fn pick_run<E: Ord + Clone>(a: &mut [E], k: usize, cmp: &mut CountingComparator) -> Range<usize> {
    assert!(k >= 1 && k <= a.len());
    let mut tagged: Vec<Tagged<E>> = a.iter().map(|x| Tagged(x.clone(), 0)).collect();
    let run = pick_tagged(&mut tagged, k, cmp);
    for (dst, Tagged(x, _)) in a.iter_mut().zip(tagged) {
        *dst = x;
    }
    run
}

fn pick_tagged<E: Ord + Clone>(a: &mut [Tagged<E>], k: usize, cmp: &mut CountingComparator) -> Range<usize> {
    let target = k - 1;
    let (mut lo, mut hi) = (0, a.len());
    loop {
        let m = hi - lo;
        let seg = &mut a[lo..hi];
        if m < 10 {
            let r = fat_select(seg, target - lo + 1, cmp, |_, _| 0).run;
            return lo + r.start..lo + r.end;
        }
        let groups = m / 5;
        for g in 0..groups {
            median_of_5(&mut seg[5 * g..5 * g + 5], cmp);
        }
        let mut medians: Vec<Tagged<E>> = (0..groups).map(|g| Tagged(seg[5 * g + 2].0.clone(), g)).collect();
        let mm = pick_tagged(&mut medians, groups.div_ceil(2), cmp);
        let pivot = medians[mm.start].0.clone();

        let mut class: Vec<Option<Ordering>> = vec![None; m];
        for (pos, Tagged(_, g)) in medians.iter().enumerate() {
            let base = 5 * g;
            if pos < mm.start {
                class[base..base + 3].fill(Some(Ordering::Less));
            } else if pos < mm.end {
                class[base + 2] = Some(Ordering::Equal);
            } else {
                class[base + 2..base + 5].fill(Some(Ordering::Greater));
            }
        }
        for (x, c) in seg.iter().zip(class.iter_mut()) {
            if c.is_none() {
                *c = Some(cmp.compare(&x.0, &pivot));
            }
        }
        let (lt, gt) = arrange_by_class(seg, &mut class);
        if target < lo + lt {
            hi = lo + lt;
        } else if target >= lo + gt {
            lo += gt;
        } else {
            return lo + lt..lo + gt;
        }
    }
}

/// Dutch-flag rearrangement driven by precomputed classes.
fn arrange_by_class<E>(seg: &mut [E], class: &mut [Option<Ordering>]) -> (usize, usize) {
    let (mut lt, mut i, mut gt) = (0, 0, seg.len());
    while i < gt {
        match class[i].expect("every element classified") {
            Ordering::Less => {
                seg.swap(lt, i);
                class.swap(lt, i);
                lt += 1;
                i += 1;
            }
            Ordering::Greater => {
                gt -= 1;
                seg.swap(i, gt);
                class.swap(i, gt);
            }
            Ordering::Equal => i += 1,
        }
    }
    (lt, gt)
}

/// Top-down mergesort; at most `m ceil(log2 m)` comparisons.
pub(crate) fn merge_sort<E: Ord + Clone>(a: &mut [E], cmp: &mut CountingComparator) {
    if a.len() < 2 {
        return;
    }
    let mut buf = a.to_vec();
    sort_into(a, &mut buf, cmp);
}

fn sort_into<E: Ord + Clone>(a: &mut [E], buf: &mut [E], cmp: &mut CountingComparator) {
    let n = a.len();
    if n < 2 {
        return;
    }
    let mid = n / 2;
    sort_into(&mut a[..mid], &mut buf[..mid], cmp);
    sort_into(&mut a[mid..], &mut buf[mid..], cmp);
    buf.clone_from_slice(a);
    let (left, right) = buf.split_at(mid);
    let (mut i, mut j) = (0, 0);
    for slot in a.iter_mut() {
        let take_left = if i == left.len() {
            false
        } else if j == right.len() {
            true
        } else {
            cmp.compare(&left[i], &right[j]) != Ordering::Greater
        };
        if take_left {
            slot.clone_from(&left[i]);
            i += 1;
        } else {
            slot.clone_from(&right[j]);
            j += 1;
        }
    }
}

/// Run of keys equal to `a[idx]` in a sorted slice.
pub(crate) fn run_in_sorted<E: Ord>(a: &[E], idx: usize, cmp: &mut CountingComparator) -> Range<usize> {
    let mut lo = idx;
    while lo > 0 && cmp.compare(&a[lo - 1], &a[idx]) == Ordering::Equal {
        lo -= 1;
    }
    let mut hi = idx + 1;
    while hi < a.len() && cmp.compare(&a[hi], &a[idx]) == Ordering::Equal {
        hi += 1;
    }
    lo..hi
}

/// Sort then read off the run around position `k - 1`.
pub(crate) fn sort_run<E: Ord + Clone>(a: &mut [E], k: usize, cmp: &mut CountingComparator) -> Range<usize> {
    merge_sort(a, cmp);
    run_in_sorted(a, k - 1, cmp)
}

/// Median-of-3 fat quickselect with random pivot samples. Returns the run
/// and the number of partitioning passes.
pub(crate) fn quickselect_run<E: Ord + Clone>(
    a: &mut [E],
    k: usize,
    rng: &mut RngStream,
    cmp: &mut CountingComparator,
) -> (Range<usize>, u64) {
    let r = fat_select(a, k, cmp, random_pivot(rng));
    (r.run, r.passes)
}

/// `k`-th smallest (1-based) by median of medians. Deterministic.
pub fn pick_select<T: Ord + Clone>(data: &mut [T], k: usize, cmp: &mut CountingComparator) -> Result<T, SelectError> {
    check_rank(k, data.len())?;
    pick_run(data, k, cmp);
    Ok(data[k - 1].clone())
}

/// `k`-th smallest (1-based) by sorting `data` with a counting mergesort.
pub fn sort_select<T: Ord + Clone>(data: &mut [T], k: usize, cmp: &mut CountingComparator) -> Result<T, SelectError> {
    check_rank(k, data.len())?;
    merge_sort(data, cmp);
    Ok(data[k - 1].clone())
}

/// `k`-th smallest (1-based) by randomized median-of-3 quickselect.
pub fn quickselect<T: Ord + Clone>(
    data: &mut [T],
    k: usize,
    rng: &mut RngStream,
    cmp: &mut CountingComparator,
) -> Result<T, SelectError> {
    check_rank(k, data.len())?;
    quickselect_run(data, k, rng, cmp);
    Ok(data[k - 1].clone())
}
