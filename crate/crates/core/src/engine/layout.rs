//! In-place zone layout of the current sample.
//!
//! The sample occupies the front of the working slice as five contiguous
//! zones `L | U | M | V | R` (below u, equal to u, strictly between, equal
//! to v, above v); the unclassified remainder follows. When `u == v` the
//! layout is `L | U | R` with `M` and `V` empty.

use std::cmp::Ordering;
use std::ops::Range;

use crate::compare::CountingComparator;
use crate::rng::RngStream;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZoneLayout {
    /// Ends of L, U, M and V.
    ends: [usize; 4],
    len: usize,
    single: bool,
}

impl ZoneLayout {
    /// Layout implied by the equal runs of the two pivots inside a sample
    /// of `len` elements. Identical runs mean a single pivot.
    pub fn from_runs(u: Range<usize>, v: Range<usize>, len: usize) -> Self {
        assert!(u.start < u.end && v.start < v.end && v.end <= len);
        if u == v {
            Self {
                ends: [u.start, u.end, u.end, u.end],
                len,
                single: true,
            }
        } else {
            assert!(u.end <= v.start, "pivot runs out of order");
            Self {
                ends: [u.start, u.end, v.start, v.end],
                len,
                single: false,
            }
        }
    }

    /// Builds a layout from zone sizes `|L|, |U|, |M|, |V|, |R|`.
    /// `|V| == 0` (and then `|M| == 0`) describes a single pivot.
    pub fn from_counts(counts: [usize; 5]) -> Self {
        let [l, u, m, v, r] = counts;
        assert!(u > 0, "pivot zone U cannot be empty");
        let single = v == 0;
        assert!(!single || m == 0, "single pivot with a nonempty middle zone");
        Self {
            ends: [l, l + u, l + u + m, l + u + m + v],
            len: l + u + m + v + r,
            single,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_single(&self) -> bool {
        self.single
    }

    pub fn lower(&self) -> Range<usize> {
        0..self.ends[0]
    }

    pub fn eq_u(&self) -> Range<usize> {
        self.ends[0]..self.ends[1]
    }

    pub fn middle(&self) -> Range<usize> {
        self.ends[1]..self.ends[2]
    }

    pub fn eq_v(&self) -> Range<usize> {
        self.ends[2]..self.ends[3]
    }

    pub fn upper(&self) -> Range<usize> {
        self.ends[3]..self.len
    }

    /// Run of elements equal to `v`; that is `U` for a single pivot.
    pub fn v_run(&self) -> Range<usize> {
        if self.single {
            self.eq_u()
        } else {
            self.eq_v()
        }
    }

    pub fn counts(&self) -> [usize; 5] {
        let e = self.ends;
        [e[0], e[1] - e[0], e[2] - e[1], e[3] - e[2], self.len - e[3]]
    }

    /// Number of sample elements `<= u`.
    pub fn count_le_u(&self) -> usize {
        self.ends[1]
    }

    /// Number of sample elements `< v`.
    pub fn count_lt_v(&self) -> usize {
        if self.single {
            self.ends[0]
        } else {
            self.ends[2]
        }
    }

    fn zone(&self, z: Zone5) -> Range<usize> {
        match z {
            Zone5::L => self.lower(),
            Zone5::U => self.eq_u(),
            Zone5::M => self.middle(),
            Zone5::V => self.eq_v(),
            Zone5::R => self.upper(),
        }
    }

    /// Moves the element at `self.len` into zone `z` by rotating the first
    /// element of each later zone to that zone's end.
    fn absorb<T>(&mut self, a: &mut [T], z: Zone5) {
        let mut p = self.len;
        for j in (z as usize..4).rev() {
            let b = self.ends[j];
            if p != b {
                a.swap(p, b);
                p = b;
            }
            self.ends[j] += 1;
        }
        self.len += 1;
    }

    /// Checks every zone against the pivots with plain `Ord`, outside the
    /// counted comparator. Test instrumentation.
    pub fn is_sound<T: Ord>(&self, a: &[T], u: &T, v: &T) -> bool {
        let check = |r: Range<usize>, ok: &dyn Fn(&T) -> bool| a[r].iter().all(ok);
        if self.single && u != v {
            return false;
        }
        check(self.lower(), &|x| x < u)
            && check(self.eq_u(), &|x| x == u)
            && check(self.middle(), &|x| u < x && x < v)
            && check(self.eq_v(), &|x| x == v)
            && check(self.upper(), &|x| x > v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Zone5 {
    L = 0,
    U = 1,
    M = 2,
    V = 3,
    R = 4,
}

/// One of the three zones a Step-5 recursion can target.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Zone {
    Lower,
    Middle,
    Upper,
}

/// Where the `i`-th smallest element of the sample sits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RankSite {
    /// It equals the current `u`.
    AtU,
    /// It equals the current `v`.
    AtV,
    /// It is the `rank`-th smallest of the given zone.
    Recurse {
        zone: Zone,
        range: Range<usize>,
        rank: usize,
    },
}

impl RankSite {
    pub fn recursion(&self) -> Option<(Zone, Range<usize>, usize)> {
        match self {
            RankSite::Recurse { zone, range, rank } => Some((*zone, range.clone(), *rank)),
            _ => None,
        }
    }
}

/// Step-5 case analysis for a 1-based sample rank `i`.
pub fn locate_rank(layout: &ZoneLayout, i: usize) -> RankSite {
    assert!(i >= 1 && i <= layout.len(), "rank {i} outside the sample");
    let [l_end, u_end, m_end, v_end] = layout.ends;
    if i <= l_end {
        RankSite::Recurse {
            zone: Zone::Lower,
            range: layout.lower(),
            rank: i,
        }
    } else if i <= u_end {
        RankSite::AtU
    } else if i > v_end {
        RankSite::Recurse {
            zone: Zone::Upper,
            range: layout.upper(),
            rank: i - v_end,
        }
    } else if i > m_end {
        RankSite::AtV
    } else {
        RankSite::Recurse {
            zone: Zone::Middle,
            range: layout.middle(),
            rank: i - u_end,
        }
    }
}

/// Stages the next `to - from` sample elements at `a[from..to]`.
///
/// With randomization they are a uniform draw without replacement from the
/// unclassified tail `a[from..]`; otherwise they are simply the next block.
/// No keys are compared.
pub fn extend_sample<T>(
    a: &mut [T],
    from: usize,
    to: usize,
    rng: &mut RngStream,
    randomized: bool,
) -> Range<usize> {
    assert!(from <= to && to <= a.len());
    if randomized && to < a.len() {
        rng.sample_into_prefix(a, from, to - from);
    }
    from..to
}

/// Step 4: classifies the staged elements `a[layout.len()..staged_end]`
/// against `u` and `v` and folds them into the zones. Previously classified
/// elements are not touched by the comparator.
///
/// With `u_first == false` (target fraction below one half) each element is
/// compared with `v` first and with `u` only if it is below `v`; otherwise
/// the order is reversed. A single pivot costs one comparison per element.
/// Returns the number of comparisons made.
pub fn partition_step<T: Ord>(
    a: &mut [T],
    layout: &mut ZoneLayout,
    staged_end: usize,
    u: &T,
    v: &T,
    u_first: bool,
    cmp: &mut CountingComparator,
) -> u64 {
    let before = cmp.count();
    while layout.len < staged_end {
        let x = &a[layout.len];
        let zone = if layout.single {
            match cmp.compare(x, u) {
                Ordering::Less => Zone5::L,
                Ordering::Equal => Zone5::U,
                Ordering::Greater => Zone5::R,
            }
        } else if u_first {
            match cmp.compare(x, u) {
                Ordering::Less => Zone5::L,
                Ordering::Equal => Zone5::U,
                Ordering::Greater => match cmp.compare(x, v) {
                    Ordering::Less => Zone5::M,
                    Ordering::Equal => Zone5::V,
                    Ordering::Greater => Zone5::R,
                },
            }
        } else {
            match cmp.compare(x, v) {
                Ordering::Greater => Zone5::R,
                Ordering::Equal => Zone5::V,
                Ordering::Less => match cmp.compare(x, u) {
                    Ordering::Less => Zone5::L,
                    Ordering::Equal => Zone5::U,
                    Ordering::Greater => Zone5::M,
                },
            }
        };
        layout.absorb(a, zone);
    }
    debug_assert!(!layout.zone(Zone5::U).is_empty());
    cmp.count() - before
}
