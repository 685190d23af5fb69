//! Monte-Carlo validation of the per-iteration probability bounds.
//!
//! Each traced top-level iteration contributes one Bernoulli observation
//! per event. An event passes when its empirical frequency is at most the
//! bound plus three binomial standard errors. Events whose preconditions
//! fail on a trial (a clamped or reset pivot rank) are not counted for
//! that trial.

use frselect::schedule::{p_fail, p_fail_from_gaps, tail_bound, ordering_margin};
use frselect::{IterationTrace, Params, RngStream};
use statrs::distribution::{DiscreteCDF, Hypergeometric};

use crate::experiment::{run_experiment_with, ExperimentError, RunOptions};
use crate::generate::InputSpec;

/// Number of standard errors of slack.
pub const SIGMAS: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Event {
    /// `u+ < u`
    UPlusBelowU,
    /// `u < z*_{j_u}`
    UBelowZju,
    /// `v < v+`
    VBelowVPlus,
    /// `z*_{j_v} < v`
    ZjvBelowV,
    /// `c >= c_bar`
    CostLarge,
    /// `s_hat >= 4 g s+ / s`
    SubproblemLarge,
    /// `c >= c_bar` or `s_hat >= 4 g s+ / s`
    Joint,
}

impl Event {
    pub const ALL: [Event; 7] = [
        Event::UPlusBelowU,
        Event::UBelowZju,
        Event::VBelowVPlus,
        Event::ZjvBelowV,
        Event::CostLarge,
        Event::SubproblemLarge,
        Event::Joint,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Event::UPlusBelowU => "u+ < u",
            Event::UBelowZju => "u < z_ju",
            Event::VBelowVPlus => "v < v+",
            Event::ZjvBelowV => "z_jv < v",
            Event::CostLarge => "c >= c_bar",
            Event::SubproblemLarge => "s_hat >= 4gs+/s",
            Event::Joint => "c >= c_bar or s_hat >= 4gs+/s",
        }
    }

    /// Whether the event happened, or `None` when its bound does not apply.
    fn observe(self, t: &IterationTrace) -> Option<bool> {
        let e = &t.events;
        match self {
            Event::UPlusBelowU => t.i_u_exact.then_some(e.u_plus_below_u),
            Event::VBelowVPlus => t.i_v_exact.then_some(e.v_below_v_plus),
            Event::UBelowZju => Some(e.u_below_z_ju),
            Event::ZjvBelowV => Some(e.z_jv_below_v),
            Event::CostLarge => Some(e.c_large),
            Event::SubproblemLarge => Some(e.s_hat_large),
            Event::Joint => Some(e.c_large || e.s_hat_large),
        }
    }

    fn bound(self, t: &IterationTrace) -> f64 {
        match self {
            Event::UPlusBelowU | Event::VBelowVPlus => {
                tail_bound(ordering_margin(t.g, t.g_plus, t.s, t.s_plus), t.s)
            }
            Event::UBelowZju | Event::ZjvBelowV | Event::CostLarge => tail_bound(t.g, t.s),
            Event::SubproblemLarge | Event::Joint => p_fail_from_gaps(t.g, t.g_plus, t.s, t.s_plus),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EventCheck {
    pub event: Event,
    pub level: usize,
    /// Trials on which the bound applied.
    pub applicable: u64,
    pub hits: u64,
    /// Mean of the per-trial bounds over applicable trials.
    pub bound: f64,
}

impl EventCheck {
    pub fn frequency(&self) -> f64 {
        if self.applicable == 0 {
            0.0
        } else {
            self.hits as f64 / self.applicable as f64
        }
    }

    /// Binomial standard error at the bound.
    pub fn sigma(&self) -> f64 {
        if self.applicable == 0 {
            return 0.0;
        }
        let b = self.bound.clamp(0.0, 1.0);
        (b * (1.0 - b) / self.applicable as f64).sqrt()
    }

    pub fn limit(&self) -> f64 {
        self.bound + SIGMAS * self.sigma()
    }

    pub fn passed(&self) -> bool {
        self.frequency() <= self.limit()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelSummary {
    pub level: usize,
    pub s: usize,
    pub s_plus: usize,
    pub trials: u64,
    /// Trials whose lower rank was clamped or reset.
    pub inexact_u: u64,
    pub inexact_v: u64,
    pub single_pivot: u64,
    /// The closed-form failure bound for this sample size and gap mode.
    pub p_fail_closed: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub spec: InputSpec,
    pub trials: u64,
    pub levels: Vec<LevelSummary>,
    pub checks: Vec<EventCheck>,
}

impl BoundReport {
    pub fn violations(&self) -> Vec<&EventCheck> {
        self.checks.iter().filter(|c| !c.passed()).collect()
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(EventCheck::passed)
    }

    pub fn render(&self) -> String {
        let mut out = format!(
            "bounds: {} n={} k={} trials={}\n",
            self.spec.family,
            self.spec.n,
            self.spec.k(),
            self.trials
        );
        for lv in &self.levels {
            out.push_str(&format!(
                "level {} s={} s+={} trials={} inexact_u={} inexact_v={} single={} p_fail={:.6}\n",
                lv.level, lv.s, lv.s_plus, lv.trials, lv.inexact_u, lv.inexact_v, lv.single_pivot, lv.p_fail_closed
            ));
            for c in self.checks.iter().filter(|c| c.level == lv.level) {
                out.push_str(&format!(
                    "  {:<32} freq={:.6} bound={:.6} limit={:.6} n={} {}\n",
                    c.event.name(),
                    c.frequency(),
                    c.bound,
                    c.limit(),
                    c.applicable,
                    if c.passed() { "ok" } else { "VIOLATED" }
                ));
            }
        }
        out
    }
}

/// Runs traced trials and checks every event at every top-level iteration.
pub fn validate_bounds(
    spec: InputSpec,
    params: &Params,
    trials: u64,
    master_seed: u64,
) -> Result<BoundReport, ExperimentError> {
    let options = RunOptions {
        trace: true,
        ..RunOptions::new(trials, master_seed)
    };
    validate_bounds_with(spec, params, options)
}

pub fn validate_bounds_with(
    spec: InputSpec,
    params: &Params,
    options: RunOptions,
) -> Result<BoundReport, ExperimentError> {
    let options = RunOptions { trace: true, ..options };
    let report = run_experiment_with(spec, params, options)?;
    let traces: Vec<&[IterationTrace]> = report
        .records
        .iter()
        .map(|r| r.trace.as_deref().unwrap_or(&[]))
        .collect();
    Ok(summarize(spec, params, &traces))
}

/// Aggregates traces (one slice per trial) into a report.
pub fn summarize(spec: InputSpec, params: &Params, traces: &[&[IterationTrace]]) -> BoundReport {
    let depth = traces.iter().map(|t| t.len()).max().unwrap_or(0);
    let mut levels = Vec::new();
    let mut checks = Vec::new();
    for level in 1..=depth {
        let rows: Vec<&IterationTrace> = traces
            .iter()
            .flat_map(|t| t.iter().filter(|it| it.l == level))
            .collect();
        let Some(first) = rows.first() else { continue };
        levels.push(LevelSummary {
            level,
            s: first.s,
            s_plus: first.s_plus,
            trials: rows.len() as u64,
            inexact_u: rows.iter().filter(|t| !t.i_u_exact).count() as u64,
            inexact_v: rows.iter().filter(|t| !t.i_v_exact).count() as u64,
            single_pivot: rows.iter().filter(|t| t.single_pivot).count() as u64,
            p_fail_closed: p_fail(params.beta, params.kappa(), first.s, params.gap_mode),
        });
        for event in Event::ALL {
            let (mut applicable, mut hits, mut bound_sum) = (0u64, 0u64, 0.0);
            for t in &rows {
                if let Some(hit) = event.observe(t) {
                    applicable += 1;
                    hits += u64::from(hit);
                    bound_sum += event.bound(t);
                }
            }
            checks.push(EventCheck {
                event,
                level,
                applicable,
                hits,
                bound: if applicable == 0 { 1.0 } else { bound_sum / applicable as f64 },
            });
        }
    }
    BoundReport {
        spec,
        trials: traces.len() as u64,
        levels,
        checks,
    }
}

/// Direct simulation of the hypergeometric tail: draw `draws` of
/// `population` balls, `red` of them red, and count how often at least
/// `p draws + gap` red balls come out.
#[derive(Debug, Clone, PartialEq)]
pub struct HypergeometricCheck {
    pub population: u64,
    pub red: u64,
    pub draws: u64,
    pub gap: f64,
    pub resamples: u64,
    pub hits: u64,
    /// `e^(-2 gap^2 / draws)`
    pub bound: f64,
    /// Exact tail probability.
    pub exact: f64,
}

impl HypergeometricCheck {
    pub fn frequency(&self) -> f64 {
        self.hits as f64 / self.resamples as f64
    }

    pub fn limit(&self) -> f64 {
        let b = self.bound.min(1.0);
        b + SIGMAS * (b * (1.0 - b) / self.resamples as f64).sqrt()
    }

    pub fn passed(&self) -> bool {
        self.frequency() <= self.limit()
    }
}

pub fn hypergeometric_check(
    population: u64,
    red: u64,
    draws: u64,
    gap: f64,
    resamples: u64,
    seed: u64,
) -> HypergeometricCheck {
    assert!(red <= population && draws <= population && resamples > 0);
    let threshold = red as f64 / population as f64 * draws as f64 + gap;
    let mut rng = RngStream::from_seed(seed);
    let mut balls: Vec<bool> = (0..population).map(|i| i < red).collect();
    let mut hits = 0;
    for _ in 0..resamples {
        rng.sample_into_prefix(&mut balls, 0, draws as usize);
        let drawn = balls[..draws as usize].iter().filter(|&&b| b).count();
        if drawn as f64 >= threshold {
            hits += 1;
        }
    }
    let first = threshold.ceil().max(0.0) as u64;
    let exact = if first == 0 {
        1.0
    } else {
        Hypergeometric::new(population, red, draws)
            .map(|d| d.sf(first - 1))
            .unwrap_or(f64::NAN)
    };
    HypergeometricCheck {
        population,
        red,
        draws,
        gap,
        resamples,
        hits,
        bound: tail_bound(gap, draws as usize),
        exact,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_tail_is_below_the_bound() {
        let h = hypergeometric_check(100, 50, 30, 5.0, 2000, 1);
        assert!((h.bound - 0.18887560283756184).abs() < 1e-12);
        assert!(h.exact > 0.0 && h.exact < h.bound);
        assert!(h.passed());
    }

    #[test]
    fn check_arithmetic() {
        let c = EventCheck {
            event: Event::Joint,
            level: 1,
            applicable: 100,
            hits: 10,
            bound: 0.04,
        };
        assert!((c.sigma() - (0.04f64 * 0.96 / 100.0).sqrt()).abs() < 1e-15);
        assert!(c.frequency() > c.limit());
        assert!(!c.passed());
    }
}
