//! Tunables of the selection engine and their validity rules.

use std::fmt;

/// How the rank gap `g_l` grows with the sample size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GapMode {
    /// `(beta * s_l * ln n)^(1/2)`
    SqrtN,
    /// `(beta * s_l * ln s_l)^(1/2)`
    SqrtS,
    /// `(min(theta, 1 - theta) * s_l * ln s_l)^(1/2)`; beta is ignored.
    Knuth,
}

/// Sample-size schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScheduleMode {
    /// `s_1 = min(ceil(n^alpha), n - 1)` then multiply by `r2`.
    Plain,
    /// Keeps the last proper sample below `eta_bar * n` once `n` is large enough.
    Capped,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Steps 2 and 5 recurse into the engine itself.
    Recursive,
    /// Steps 2 and 5 use deterministic median-of-medians.
    NonrecPick,
    /// Steps 2 and 5 sort the subproblem.
    NonrecSort,
    /// Plain median-of-3 quickselect over the whole input (baseline).
    Quickselect,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    pub alpha: f64,
    pub beta: f64,
    /// The square of the sample growth ratio `r`.
    pub r2: u64,
    pub eta_bar: f64,
    pub n_cut: usize,
    pub gap_mode: GapMode,
    pub schedule_mode: ScheduleMode,
    pub variant: Variant,
    /// Collapse to a single pivot when the lower or upper rank clamp bites.
    pub single_pivot_reset: bool,
    /// Nonrecursive variants only: redraw the initial sample when a
    /// Step-5 subproblem turns out too large.
    pub restart_on_large_shat: bool,
    /// When false, samples are array prefixes instead of random subsets.
    pub randomized_sampling: bool,
    /// Select the second initial pivot over the whole first sample instead
    /// of the suffix left behind by the first selection.
    pub independent_initial_selects: bool,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            alpha: 0.5,
            beta: 0.3,
            r2: 144,
            eta_bar: 2.0 / 144.0,
            n_cut: 600,
            gap_mode: GapMode::SqrtS,
            schedule_mode: ScheduleMode::Capped,
            variant: Variant::Recursive,
            single_pivot_reset: true,
            restart_on_large_shat: false,
            randomized_sampling: true,
            independent_initial_selects: false,
        }
    }
}

impl Params {
    /// Knuth-style emulation: doubling samples, theta-scaled gaps and no
    /// randomization.
    pub fn knuth_emulation() -> Self {
        Self {
            r2: 2,
            eta_bar: 1.0,
            gap_mode: GapMode::Knuth,
            randomized_sampling: false,
            ..Self::default()
        }
    }

    pub fn r(&self) -> f64 {
        (self.r2 as f64).sqrt()
    }

    pub fn kappa(&self) -> f64 {
        1.0 / self.r()
    }

    /// `1/4 (1 - kappa)^-2`, the smallest admissible beta.
    pub fn beta_floor(&self) -> f64 {
        let one_minus = 1.0 - self.kappa();
        0.25 / (one_minus * one_minus)
    }

    /// All violated constraints; empty when the parameters are usable.
    pub fn violations(&self) -> Vec<ParamViolation> {
        let mut out = Vec::new();
        if !(self.alpha > 0.0 && self.alpha <= 0.5) {
            out.push(ParamViolation::Alpha(self.alpha));
        }
        if self.r2 < 2 {
            out.push(ParamViolation::R2(self.r2));
        }
        if self.n_cut == 0 {
            out.push(ParamViolation::NCut);
        }
        if self.r2 >= 2 {
            let lo = 1.0 / self.r2 as f64;
            if !(self.eta_bar > lo && self.eta_bar <= 1.0) {
                out.push(ParamViolation::EtaBar {
                    value: self.eta_bar,
                    floor: lo,
                });
            }
            let floor = self.beta_floor();
            let ok = match self.gap_mode {
                GapMode::SqrtN => self.beta >= floor,
                GapMode::SqrtS => self.beta > floor,
                GapMode::Knuth => true,
            };
            if !ok {
                out.push(ParamViolation::Beta {
                    value: self.beta,
                    floor,
                    strict: self.gap_mode == GapMode::SqrtS,
                });
            }
        }
        out
    }

    pub fn validate(&self) -> Result<(), Vec<ParamViolation>> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(v)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParamViolation {
    Alpha(f64),
    Beta { value: f64, floor: f64, strict: bool },
    R2(u64),
    EtaBar { value: f64, floor: f64 },
    NCut,
}

impl fmt::Display for ParamViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamViolation::Alpha(a) => write!(f, "alpha = {a} not in (0, 1/2]"),
            ParamViolation::Beta {
                value,
                floor,
                strict,
            } => {
                let rel = if *strict { ">" } else { ">=" };
                write!(f, "beta = {value} must be {rel} {floor:.5}")
            }
            ParamViolation::R2(r2) => write!(f, "r2 = {r2} must be at least 2"),
            ParamViolation::EtaBar { value, floor } => {
                write!(f, "eta_bar = {value} not in ({floor}, 1]")
            }
            ParamViolation::NCut => write!(f, "n_cut must be positive"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_preset_is_valid() {
        let p = Params::default();
        assert!(p.validate().is_ok());
        // 1/4 * (12/11)^2
        assert!((p.beta_floor() - 0.25 * 144.0 / 121.0).abs() < 1e-15);
        assert!((p.beta_floor() - 0.29752).abs() < 1e-5);
    }

    #[test]
    fn beta_below_floor_rejected() {
        let p = Params {
            beta: 0.25,
            gap_mode: GapMode::SqrtN,
            ..Params::default()
        };
        assert!(matches!(
            p.violations().as_slice(),
            [ParamViolation::Beta { strict: false, .. }]
        ));
    }

    #[test]
    fn sqrt_s_needs_strict_beta() {
        let floor = Params::default().beta_floor();
        let at_floor = Params {
            beta: floor,
            ..Params::default()
        };
        assert!(at_floor.validate().is_err());
        let sqrt_n = Params {
            gap_mode: GapMode::SqrtN,
            ..at_floor
        };
        assert!(sqrt_n.validate().is_ok());
    }

    #[test]
    fn eta_bar_must_exceed_inverse_r2() {
        let p = Params {
            eta_bar: 1.0 / 144.0,
            ..Params::default()
        };
        assert!(matches!(
            p.violations().as_slice(),
            [ParamViolation::EtaBar { .. }]
        ));
    }

    #[test]
    fn reports_every_violation() {
        let p = Params {
            alpha: 0.7,
            beta: 0.1,
            eta_bar: 2.0,
            n_cut: 0,
            ..Params::default()
        };
        assert_eq!(p.violations().len(), 4);
    }

    #[test]
    fn knuth_preset_skips_beta_rule() {
        assert!(Params::knuth_emulation().validate().is_ok());
    }
}
