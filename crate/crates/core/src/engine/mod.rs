//! The sampling selection engine.
//!
//! A call works on a mutable slice in place. The sample always occupies a
//! prefix of the slice: after Step 4 of iteration `l` the prefix of length
//! `s_{l+1}` is laid out as the zones of [`ZoneLayout`], and the Step-5
//! case analysis leaves the new pivots as contiguous equal runs inside it.

mod layout;
pub(crate) mod small;
mod trace;

use std::ops::Range;

pub use layout::{extend_sample, locate_rank, partition_step, RankSite, Zone, ZoneLayout};
pub use trace::{IterationTrace, TraceEvents};

use crate::compare::CountingComparator;
use crate::error::SelectError;
use crate::fallbacks::{pick_run, quickselect_run, run_in_sorted, sort_run, merge_sort};
use crate::metrics::Metrics;
use crate::params::{Params, Variant};
use crate::rng::RngStream;
use crate::schedule::{bounding_ranks, partition_cost_bound, pivot_ranks, raw_pivot_ranks, RankPair, Schedule, Theta};

/// Upper limit on initial-sample redraws per invocation.
pub const MAX_RESTARTS: u64 = 64;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SelectOptions {
    /// Record one [`IterationTrace`] per iteration of the top-level call.
    pub trace: bool,
    /// Check every zone layout with uncounted comparisons and panic on a
    /// misplaced element.
    pub verify_zones: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Selection<T> {
    pub value: T,
    /// `k - 1`; after the call `data[position]` holds the answer.
    pub position: usize,
    /// All positions holding keys equal to the answer. Everything before
    /// the run is strictly smaller, everything after strictly larger.
    pub equal_run: Range<usize>,
    pub metrics: Metrics,
    pub trace: Option<Vec<IterationTrace>>,
}

/// Selects the `k`-th smallest element (1-based) of `data`, permuting it.
pub fn select<T: Ord + Clone>(
    data: &mut [T],
    k: usize,
    params: &Params,
    rng: &mut RngStream,
) -> Result<Selection<T>, SelectError> {
    select_with(data, k, params, rng, SelectOptions::default())
}

pub fn select_with<T: Ord + Clone>(
    data: &mut [T],
    k: usize,
    params: &Params,
    rng: &mut RngStream,
    options: SelectOptions,
) -> Result<Selection<T>, SelectError> {
    if k == 0 || k > data.len() {
        return Err(SelectError::RankOutOfRange { k, len: data.len() });
    }
    params.validate().map_err(SelectError::InvalidParams)?;
    let mut engine = Engine {
        params,
        rng,
        cmp: CountingComparator::new(),
        metrics: Metrics::default(),
        trace: options.trace.then(Vec::new),
        verify: options.verify_zones,
    };
    let run = if params.variant == Variant::Quickselect {
        let (run, passes) = quickselect_run(data, k, engine.rng, &mut engine.cmp);
        engine.metrics.select_partitions = passes;
        run
    } else {
        engine.select_run(data, k, 0)
    };
    debug_assert!(run.contains(&(k - 1)));
    engine.metrics.comparisons = engine.cmp.count();
    Ok(Selection {
        value: data[k - 1].clone(),
        position: k - 1,
        equal_run: run,
        metrics: engine.metrics,
        trace: engine.trace,
    })
}

/// The small-file routine on its own: deterministic median-of-3 fat
/// quickselect.
pub fn small_select<T: Ord + Clone>(
    data: &mut [T],
    k: usize,
    cmp: &mut CountingComparator,
) -> Result<T, SelectError> {
    if k == 0 || k > data.len() {
        return Err(SelectError::RankOutOfRange { k, len: data.len() });
    }
    small::small_select_run(data, k, cmp);
    Ok(data[k - 1].clone())
}

struct Engine<'a> {
    params: &'a Params,
    rng: &'a mut RngStream,
    cmp: CountingComparator,
    metrics: Metrics,
    trace: Option<Vec<IterationTrace>>,
    verify: bool,
}

/// Pivot ranks for one sample plus whether each equals its unclamped value.
#[derive(Debug, Clone, Copy)]
struct Ranks {
    pair: RankPair,
    exact: (bool, bool),
}

impl<'a> Engine<'a> {
    fn nonrecursive(&self) -> bool {
        matches!(self.params.variant, Variant::NonrecPick | Variant::NonrecSort)
    }

    fn small<T: Ord + Clone>(&mut self, a: &mut [T], k: usize) -> Range<usize> {
        let r = small::small_select_run(a, k, &mut self.cmp);
        self.metrics.sselect_calls += 1;
        self.metrics.sselect_partitions += r.passes;
        r.run
    }

    fn ranks(&self, theta: Theta, s: usize, g: f64) -> Ranks {
        let mut pair = pivot_ranks(theta, s, g);
        if self.params.single_pivot_reset {
            if theta.of(s) <= g {
                pair.lower = pair.upper;
            } else if theta.value() + g / s as f64 > 1.0 {
                pair.upper = pair.lower;
            }
        }
        let (lo, hi) = raw_pivot_ranks(theta, s, g);
        Ranks {
            pair,
            exact: (lo == pair.lower as f64, hi == pair.upper as f64),
        }
    }

    /// Full SELECT on `a`; returns the equal run of the `k`-th smallest.
    fn select_run<T: Ord + Clone>(&mut self, a: &mut [T], k: usize, depth: u32) -> Range<usize> {
        self.metrics.max_depth = self.metrics.max_depth.max(depth);
        let n = a.len();
        if n <= self.params.n_cut {
            return self.small(a, k);
        }
        let theta = Theta::from_rank(k, n);
        let sched = Schedule::for_params(n, self.params);
        let l_bar = sched.l_bar();
        self.metrics.sampled += sched.size(l_bar) as u64;
        let randomized = self.params.randomized_sampling;
        let may_restart = self.nonrecursive() && randomized && self.params.restart_on_large_shat;
        let u_first = theta.value() >= 0.5;
        let mut restarts = 0;

        'restart: loop {
            let s1 = sched.size(1);
            extend_sample(a, 0, s1, self.rng, randomized);
            let mut ranks = self.ranks(theta, s1, sched.gap(1, self.params, theta));
            let (u_run, v_run) = self.initial_pivots(&mut a[..s1], ranks.pair, depth);
            let mut layout = ZoneLayout::from_runs(u_run, v_run, s1);
            self.check(&a[..s1], &layout);

            for l in 1..=l_bar {
                let s = sched.size(l);
                let s_plus = sched.size(l + 1);
                let g = sched.gap(l, self.params, theta);
                extend_sample(a, s, s_plus, self.rng, randomized);
                let u = a[layout.eq_u().start].clone();
                let v = a[layout.v_run().start].clone();
                let c = partition_step(a, &mut layout, s_plus, &u, &v, u_first, &mut self.cmp);
                self.metrics.partition_mass += (s_plus - s) as u64;
                self.metrics.select_partitions += 1;
                self.check(&a[..s_plus], &layout);

                let last = l == l_bar;
                let next = if last {
                    Ranks {
                        pair: RankPair { lower: k, upper: k },
                        exact: (true, true),
                    }
                } else {
                    self.ranks(theta, s_plus, sched.gap(l + 1, self.params, theta))
                };
                let site_u = locate_rank(&layout, next.pair.lower);
                let site_v = locate_rank(&layout, next.pair.upper);
                let s_hat = recursion_mass(&site_u, &site_v);
                let s_hat_large = s_hat as f64 >= 4.0 * g * s_plus as f64 / s as f64;

                if depth == 0 {
                    if let Some(trace) = self.trace.as_mut() {
                        let j = bounding_ranks(theta, s, s_plus, g);
                        let c_bar = partition_cost_bound(theta, s, s_plus, g);
                        trace.push(IterationTrace {
                            l,
                            s,
                            s_plus,
                            g,
                            g_plus: if last { 0.0 } else { sched.gap(l + 1, self.params, theta) },
                            theta: theta.value(),
                            i_u: ranks.pair.lower,
                            i_v: ranks.pair.upper,
                            i_u_exact: ranks.exact.0,
                            i_v_exact: ranks.exact.1,
                            i_u_plus: next.pair.lower,
                            i_v_plus: next.pair.upper,
                            j_u: j.lower,
                            j_v: j.upper,
                            c,
                            c_bar,
                            s_hat,
                            single_pivot: layout.is_single(),
                            events: TraceEvents {
                                u_plus_below_u: matches!(site_u, RankSite::Recurse { zone: Zone::Lower, .. }),
                                v_below_v_plus: matches!(site_v, RankSite::Recurse { zone: Zone::Upper, .. }),
                                u_below_z_ju: layout.count_le_u() < j.lower,
                                z_jv_below_v: layout.count_lt_v() >= j.upper,
                                s_hat_large,
                                c_large: c as f64 >= c_bar,
                            },
                        });
                    }
                }

                if may_restart && s_hat_large && restarts < MAX_RESTARTS {
                    restarts += 1;
                    self.metrics.restarts += 1;
                    continue 'restart;
                }

                let (u_run, v_run) = self.resolve(&mut a[..s_plus], &layout, site_u, site_v, next.pair, depth);
                if last {
                    return u_run;
                }
                layout = ZoneLayout::from_runs(u_run, v_run, s_plus);
                ranks = next;
                self.check(&a[..s_plus], &layout);
            }
            unreachable!("the last sample is the whole input");
        }
    }

    fn check<T: Ord>(&self, a: &[T], layout: &ZoneLayout) {
        if self.verify {
            let u = &a[layout.eq_u().start];
            let v = &a[layout.v_run().start];
            assert!(layout.is_sound(a, u, v), "zone layout broken: {layout:?}");
        }
    }

    /// Selection inside a subproblem of Step 2 or Step 5.
    fn sub_select<T: Ord + Clone>(&mut self, a: &mut [T], k: usize, depth: u32) -> Range<usize> {
        match self.params.variant {
            Variant::NonrecPick => pick_run(a, k, &mut self.cmp),
            Variant::NonrecSort => sort_run(a, k, &mut self.cmp),
            _ => self.select_run(a, k, depth + 1),
        }
    }

    /// Runs of the `lo`-th and `hi`-th smallest of `a` (`lo <= hi`).
    ///
    /// The second selection only looks at the part of `a` right of the
    /// first run. Sorting handles both ranks with one sort.
    fn sub_select_pair<T: Ord + Clone>(
        &mut self,
        a: &mut [T],
        lo: usize,
        hi: usize,
        depth: u32,
    ) -> (Range<usize>, Range<usize>) {
        debug_assert!(lo <= hi);
        if self.params.variant == Variant::NonrecSort {
            merge_sort(a, &mut self.cmp);
            let first = run_in_sorted(a, lo - 1, &mut self.cmp);
            let second = if hi - 1 < first.end {
                first.clone()
            } else {
                run_in_sorted(a, hi - 1, &mut self.cmp)
            };
            return (first, second);
        }
        let first = self.sub_select(a, lo, depth);
        if hi - 1 < first.end {
            return (first.clone(), first);
        }
        let off = first.end;
        let second = self.sub_select(&mut a[off..], hi - off, depth);
        (first, shift(second, off))
    }

    /// Step 2: runs of the two initial pivots inside the first sample.
    fn initial_pivots<T: Ord + Clone>(
        &mut self,
        sample: &mut [T],
        ranks: RankPair,
        depth: u32,
    ) -> (Range<usize>, Range<usize>) {
        if ranks.is_single() || !self.params.independent_initial_selects {
            return self.sub_select_pair(sample, ranks.lower, ranks.upper, depth);
        }
        let first = self.sub_select(sample, ranks.lower, depth);
        let u = sample[first.start].clone();
        let v_run = self.sub_select(sample, ranks.upper, depth);
        if ranks.lower > v_run.start {
            return (v_run.clone(), v_run);
        }
        let (lt, gt) = partition_against(&mut sample[..v_run.start], &u, &mut self.cmp);
        (lt..gt, v_run)
    }

    /// Step 5: turns the two rank sites into the runs of the next pivots.
    fn resolve<T: Ord + Clone>(
        &mut self,
        a: &mut [T],
        layout: &ZoneLayout,
        site_u: RankSite,
        site_v: RankSite,
        ranks: RankPair,
        depth: u32,
    ) -> (Range<usize>, Range<usize>) {
        if ranks.is_single() {
            let run = self.resolve_one(a, layout, site_u, depth);
            return (run.clone(), run);
        }
        if let (Some((zu, range, ru)), Some((zv, _, rv))) = (site_u.recursion(), site_v.recursion()) {
            if zu == zv {
                let (first, second) = self.sub_select_pair(&mut a[range.clone()], ru, rv, depth);
                return (shift(first, range.start), shift(second, range.start));
            }
        }
        let u_run = self.resolve_one(a, layout, site_u, depth);
        let v_run = self.resolve_one(a, layout, site_v, depth);
        (u_run, v_run)
    }

    fn resolve_one<T: Ord + Clone>(
        &mut self,
        a: &mut [T],
        layout: &ZoneLayout,
        site: RankSite,
        depth: u32,
    ) -> Range<usize> {
        match site {
            RankSite::AtU => layout.eq_u(),
            RankSite::AtV => layout.v_run(),
            RankSite::Recurse { range, rank, .. } => {
                let run = self.sub_select(&mut a[range.clone()], rank, depth);
                shift(run, range.start)
            }
        }
    }
}

fn shift(r: Range<usize>, by: usize) -> Range<usize> {
    r.start + by..r.end + by
}

/// Total size of the zones the two sites recurse into, each zone once.
fn recursion_mass(site_u: &RankSite, site_v: &RankSite) -> usize {
    match (site_u.recursion(), site_v.recursion()) {
        (Some((zu, ru, _)), Some((zv, rv, _))) => {
            if zu == zv {
                ru.len()
            } else {
                ru.len() + rv.len()
            }
        }
        (Some((_, r, _)), None) | (None, Some((_, r, _))) => r.len(),
        (None, None) => 0,
    }
}

/// Three-way partition of `a` around an outside pivot value.
fn partition_against<T: Ord>(a: &mut [T], pivot: &T, cmp: &mut CountingComparator) -> (usize, usize) {
    use std::cmp::Ordering;
    let (mut lt, mut i, mut gt) = (0, 0, a.len());
    while i < gt {
        match cmp.compare(&a[i], pivot) {
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::GapMode;

    fn shuffled(n: usize, seed: u64) -> Vec<u64> {
        let mut v: Vec<u64> = (1..=n as u64).collect();
        RngStream::from_seed(seed).shuffle(&mut v);
        v
    }

    #[test]
    fn rejects_bad_rank() {
        let p = Params::default();
        let mut rng = RngStream::from_seed(0);
        assert_eq!(
            select(&mut [1, 2, 3], 0, &p, &mut rng).unwrap_err(),
            SelectError::RankOutOfRange { k: 0, len: 3 }
        );
        assert!(select::<i32>(&mut [], 1, &p, &mut rng).is_err());
    }

    #[test]
    fn tiny_inputs_go_to_small_select() {
        let p = Params::default();
        let mut rng = RngStream::from_seed(0);
        let sel = select(&mut [5, 3, 9, 1, 7], 3, &p, &mut rng).unwrap();
        assert_eq!(sel.value, 5);
        assert_eq!(sel.metrics.sselect_calls, 1);
        assert_eq!(sel.metrics.select_partitions, 0);
    }

    #[test]
    fn median_of_a_million_is_near_one_and_a_half_n() {
        let n = 1_000_000;
        let mut v = shuffled(n, 11);
        let mut rng = RngStream::from_seed(5);
        let sel = select(&mut v, n / 2, &Params::default(), &mut rng).unwrap();
        assert_eq!(sel.value, (n / 2) as u64);
        let ratio = sel.metrics.comparisons as f64 / n as f64;
        assert!(ratio > 1.5 && ratio < 1.7, "{ratio}");
    }

    #[test]
    fn every_variant_finds_the_answer_with_zone_checks() {
        let opts = SelectOptions {
            trace: true,
            verify_zones: true,
        };
        for variant in [Variant::Recursive, Variant::NonrecPick, Variant::NonrecSort, Variant::Quickselect] {
            for gap_mode in [GapMode::SqrtN, GapMode::SqrtS, GapMode::Knuth] {
                for indep in [false, true] {
                    let p = Params {
                        variant,
                        gap_mode,
                        n_cut: 20,
                        beta: 0.5,
                        independent_initial_selects: indep,
                        restart_on_large_shat: true,
                        ..Params::default()
                    };
                    for (i, k) in [1usize, 7, 2500, 4999, 5000].into_iter().enumerate() {
                        let mut rng = RngStream::from_seed(i as u64);
                        let mut v: Vec<u64> = (0..5000).map(|_| rng.below(300)).collect();
                        let mut want = v.clone();
                        want.sort_unstable();
                        let sel = select_with(&mut v, k, &p, &mut rng, opts).unwrap();
                        assert_eq!(sel.value, want[k - 1], "{variant:?} {gap_mode:?} k={k}");
                        assert_eq!(&v[sel.equal_run.clone()].len(), &want.iter().filter(|&&x| x == sel.value).count());
                    }
                }
            }
        }
    }

    #[test]
    fn trace_covers_top_level_iterations() {
        let n = 100_000;
        let mut v = shuffled(n, 3);
        let mut rng = RngStream::from_seed(1);
        let opts = SelectOptions {
            trace: true,
            verify_zones: false,
        };
        let sel = select_with(&mut v, 1000, &Params::default(), &mut rng, opts).unwrap();
        let t = sel.trace.unwrap();
        let sched = Schedule::for_params(n, &Params::default());
        assert_eq!(t.len(), sched.l_bar());
        assert_eq!(t.last().unwrap().s_plus, n);
        assert_eq!(t.last().unwrap().i_u_plus, 1000);
    }

    #[test]
    fn same_seed_same_everything() {
        let run = || {
            let mut v = shuffled(50_000, 9);
            let mut rng = RngStream::from_seed(77);
            let sel = select(&mut v, 12_345, &Params::default(), &mut rng).unwrap();
            (sel.metrics, v)
        };
        assert_eq!(run(), run());
    }
}
