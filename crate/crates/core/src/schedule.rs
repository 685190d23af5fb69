//! Sampling schedule arithmetic: sample sizes, rank gaps, pivot and
//! bounding ranks, and the closed-form failure bounds.
//!
//! Everything here is a pure function of its arguments. Gaps are binary64
//! and ceilings are taken directly on the floating value.

use crate::error::ScheduleError;
use crate::params::{GapMode, Params, ScheduleMode};

/// Target fraction `theta = k / n`.
///
/// Kept as a ratio so that `theta * s` is computed as `k * s / n`, which is
/// exact whenever the true value is an integer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theta {
    num: f64,
    den: f64,
}

impl Theta {
    pub fn from_rank(k: usize, n: usize) -> Self {
        debug_assert!(k >= 1 && k <= n);
        Self {
            num: k as f64,
            den: n as f64,
        }
    }

    pub fn from_fraction(theta: f64) -> Self {
        Self {
            num: theta,
            den: 1.0,
        }
    }

    pub fn value(&self) -> f64 {
        self.num / self.den
    }

    /// `theta * s`
    pub fn of(&self, s: usize) -> f64 {
        self.num * s as f64 / self.den
    }

    /// `min(theta, 1 - theta)`
    pub fn distance_to_edge(&self) -> f64 {
        let t = self.value();
        t.min(1.0 - t)
    }
}

/// Rank gap for a proper sampling iteration (`l <= l_bar`).
///
/// `n` is the size of the current problem; it only matters for
/// [`GapMode::SqrtN`]. The final iteration always has gap 0, see
/// [`Schedule::gap`].
pub fn gap(mode: GapMode, beta: f64, s: usize, n: usize, theta: Theta) -> Result<f64, ScheduleError> {
    let t = theta.value();
    if !(t > 0.0 && t <= 1.0) {
        return Err(ScheduleError::FractionOutOfRange(t));
    }
    let s_f = s as f64;
    match mode {
        GapMode::SqrtN => Ok((beta * s_f * (n as f64).ln()).max(0.0).sqrt()),
        GapMode::SqrtS | GapMode::Knuth if s < 2 => Err(ScheduleError::SampleTooSmall(s)),
        GapMode::SqrtS => Ok((beta * s_f * s_f.ln()).sqrt()),
        GapMode::Knuth => Ok((theta.distance_to_edge() * s_f * s_f.ln()).sqrt()),
    }
}

/// Pivot ranks within a sample of size `s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankPair {
    pub lower: usize,
    pub upper: usize,
}

impl RankPair {
    pub fn is_single(&self) -> bool {
        self.lower == self.upper
    }
}

/// `(max(ceil(theta s - g), 1), min(ceil(theta s + g), s))`
pub fn pivot_ranks(theta: Theta, s: usize, g: f64) -> RankPair {
    let center = theta.of(s);
    RankPair {
        lower: clamp_rank((center - g).ceil(), s),
        upper: clamp_rank((center + g).ceil(), s),
    }
}

/// The unclamped lower and upper ranks `ceil(theta s -/+ g)`.
pub fn raw_pivot_ranks(theta: Theta, s: usize, g: f64) -> (f64, f64) {
    let center = theta.of(s);
    ((center - g).ceil(), (center + g).ceil())
}

/// Ranks in the next sample that bracket the pivots with high probability:
/// `max(ceil(theta s+ - 2 g s+/s), 1)` and `min(ceil(theta s+ + 2 g s+/s), s+)`.
pub fn bounding_ranks(theta: Theta, s: usize, s_plus: usize, g: f64) -> RankPair {
    let center = theta.of(s_plus);
    let width = 2.0 * g * s_plus as f64 / s as f64;
    RankPair {
        lower: clamp_rank((center - width).ceil(), s_plus),
        upper: clamp_rank((center + width).ceil(), s_plus),
    }
}

fn clamp_rank(x: f64, s: usize) -> usize {
    if x <= 1.0 {
        1
    } else if x >= s as f64 {
        s
    } else {
        x as usize
    }
}

/// `(1 + min(theta, 1 - theta)) (s+ - s) + 3 g s+ / s`
pub fn partition_cost_bound(theta: Theta, s: usize, s_plus: usize, g: f64) -> f64 {
    (1.0 + theta.distance_to_edge()) * (s_plus - s) as f64 + 3.0 * g * s_plus as f64 / s as f64
}

/// `psi(s) = [1 - kappa (1 + ln r^2 / ln s)^(1/2)]^2`, with the bracket
/// floored at zero.
pub fn psi(s: f64, kappa: f64) -> f64 {
    let ln_r2 = -2.0 * kappa.ln();
    let inner = 1.0 - kappa * (1.0 + ln_r2 / s.ln()).sqrt();
    inner.max(0.0).powi(2)
}

/// Closed-form failure bound, clamped to 1.
///
/// * `SqrtN`: `2 n^(-2 beta) + 2 n^(-2 (1 - kappa)^2 beta)`, pass the problem size.
/// * `SqrtS` / `Knuth`: `2 s^(-2 beta) + 2 s^(-2 beta psi(s))`, pass the sample
///   size; for `Knuth` the effective beta is `min(theta, 1 - theta)`.
pub fn p_fail(beta: f64, kappa: f64, n_or_s: usize, mode: GapMode) -> f64 {
    let x = n_or_s as f64;
    let shrink = match mode {
        GapMode::SqrtN => (1.0 - kappa).powi(2),
        GapMode::SqrtS | GapMode::Knuth => psi(x, kappa),
    };
    (2.0 * x.powf(-2.0 * beta) + 2.0 * x.powf(-2.0 * beta * shrink)).min(1.0)
}

/// `e^(-2 d^2 / s)` for `d > 0`, else 1: the sampling tail bound.
pub fn tail_bound(d: f64, s: usize) -> f64 {
    if d > 0.0 {
        (-2.0 * d * d / s as f64).exp().min(1.0)
    } else {
        1.0
    }
}

/// `g - g+ s / s+`, the effective margin for the pivot-ordering events.
pub fn ordering_margin(g: f64, g_plus: f64, s: usize, s_plus: usize) -> f64 {
    g - g_plus * s as f64 / s_plus as f64
}

/// The failure bound evaluated from the actual gaps of one iteration:
/// `2 e^(-2 g^2/s) + 2 e^(-2 d^2/s)` with `d = g - g+ s/s+`, clamped to 1.
/// Coincides with [`p_fail`] whenever `s+ = r^2 s`.
pub fn p_fail_from_gaps(g: f64, g_plus: f64, s: usize, s_plus: usize) -> f64 {
    let d = ordering_margin(g, g_plus, s, s_plus);
    (2.0 * tail_bound(g, s) + 2.0 * tail_bound(d, s)).min(1.0)
}

/// Nested sample sizes `s_1 < ... < s_{l_bar} < s_{l_bar+1} = n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    n: usize,
    sizes: Vec<usize>,
    capped: bool,
}

impl Schedule {
    /// Schedule selected by `params.schedule_mode`.
    pub fn for_params(n: usize, params: &Params) -> Self {
        match params.schedule_mode {
            ScheduleMode::Plain => schedule_plain(n, params.alpha, params.r2),
            ScheduleMode::Capped => schedule_capped(n, params.alpha, params.r2, params.eta_bar),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Number of proper sampling iterations.
    pub fn l_bar(&self) -> usize {
        self.sizes.len() - 1
    }

    /// `s_l`, 1-based.
    pub fn size(&self, l: usize) -> usize {
        self.sizes[l - 1]
    }

    /// Whether the capped rule produced this schedule.
    pub fn is_capped(&self) -> bool {
        self.capped
    }

    /// `g_l`: the mode's gap for `l <= l_bar`, exactly 0 for `l = l_bar + 1`.
    /// A sample of one element gets gap 0 since both ranks clamp to 1.
    pub fn gap(&self, l: usize, params: &Params, theta: Theta) -> f64 {
        if l > self.l_bar() {
            return 0.0;
        }
        let s = self.size(l);
        if s < 2 {
            return 0.0;
        }
        gap(params.gap_mode, params.beta, s, self.n, theta)
            .expect("theta checked by caller")
    }
}

fn chain(n: usize, s1: usize, r2: u64, capped: bool) -> Schedule {
    let mut sizes = vec![s1];
    let mut s = s1;
    while s < n {
        s = s.saturating_mul(r2 as usize).min(n);
        sizes.push(s);
    }
    Schedule { n, sizes, capped }
}

/// `ceil(n^alpha)`; exact integer square root for `alpha = 1/2`.
fn ceil_pow(n: usize, alpha: f64) -> usize {
    if alpha == 0.5 {
        let mut r = (n as f64).sqrt() as usize;
        while r * r < n {
            r += 1;
        }
        while r > 0 && (r - 1) * (r - 1) >= n {
            r -= 1;
        }
        r
    } else {
        (n as f64).powf(alpha).ceil() as usize
    }
}

/// `s_1 = min(ceil(n^alpha), n - 1)`, `s_{l+1} = min(r^2 s_l, n)`.
pub fn schedule_plain(n: usize, alpha: f64, r2: u64) -> Schedule {
    assert!(n >= 2, "schedule needs n >= 2");
    let s1 = ceil_pow(n, alpha).min(n - 1).max(1);
    chain(n, s1, r2, false)
}

/// Whether `n` is large enough for the capped rule:
/// `n >= max([r^2 / (eta_bar r^2 - 1)]^(1/alpha), 3)`.
pub fn capped_applies(n: usize, alpha: f64, r2: u64, eta_bar: f64) -> bool {
    let r2f = r2 as f64;
    let excess = eta_bar * r2f - 1.0;
    if n < 3 || excess <= 0.0 {
        return false;
    }
    // n^alpha >= r^2 / (eta_bar r^2 - 1), written without a division.
    n_pow_alpha(n, alpha) * excess >= r2f
}

fn n_pow_alpha(n: usize, alpha: f64) -> f64 {
    if alpha == 0.5 {
        (n as f64).sqrt()
    } else {
        (n as f64).powf(alpha)
    }
}

/// Capped schedule: `l_bar = min{l : r^(2l) n^alpha >= n}`,
/// `s_1 = ceil(n / r^(2 l_bar))`; falls back to [`schedule_plain`] below the
/// size threshold.
pub fn schedule_capped(n: usize, alpha: f64, r2: u64, eta_bar: f64) -> Schedule {
    assert!(n >= 2, "schedule needs n >= 2");
    if !capped_applies(n, alpha, r2, eta_bar) {
        return schedule_plain(n, alpha, r2);
    }
    let na = n_pow_alpha(n, alpha);
    let mut l_bar = 1u32;
    let mut power = r2 as u128;
    while (power as f64) * na < n as f64 {
        l_bar += 1;
        power *= r2 as u128;
    }
    let s1 = (n as u128).div_ceil(power) as usize;
    let sched = chain(n, s1, r2, true);
    debug_assert_eq!(sched.l_bar(), l_bar as usize);
    sched
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values computed with 30-digit arithmetic.
    const G_SQRT_S_49: f64 = 7.563_713_266_790_738;
    const G_KNUTH_100: f64 = 15.174_271_293_851_464;

    fn half() -> Theta {
        Theta::from_fraction(0.5)
    }

    #[test]
    fn gap_sqrt_s() {
        let g = gap(GapMode::SqrtS, 0.3, 49, 1_000_000, half()).unwrap();
        assert!((g - G_SQRT_S_49).abs() < 1e-12);
    }

    #[test]
    fn gap_knuth() {
        let g = gap(GapMode::Knuth, 0.3, 100, 1_000_000, half()).unwrap();
        assert!((g - G_KNUTH_100).abs() < 1e-12);
    }

    #[test]
    fn gap_rejects_tiny_samples() {
        assert_eq!(
            gap(GapMode::SqrtS, 0.3, 1, 10, half()),
            Err(ScheduleError::SampleTooSmall(1))
        );
        assert!(gap(GapMode::Knuth, 0.3, 0, 10, half()).is_err());
        assert!(gap(GapMode::SqrtN, 0.3, 1, 10, half()).is_ok());
    }

    #[test]
    fn gap_is_zero_after_last_sample() {
        let p = Params::default();
        let sched = Schedule::for_params(1_000_000, &p);
        assert_eq!(sched.gap(sched.l_bar() + 1, &p, half()), 0.0);
        assert!(sched.gap(sched.l_bar(), &p, half()) > 0.0);
    }

    #[test]
    fn pivot_rank_examples() {
        assert_eq!(
            pivot_ranks(half(), 49, G_SQRT_S_49),
            RankPair { lower: 17, upper: 33 }
        );
        assert_eq!(
            pivot_ranks(Theta::from_fraction(0.01), 100, 10.0),
            RankPair { lower: 1, upper: 11 }
        );
        assert_eq!(
            pivot_ranks(Theta::from_fraction(1.0), 10, 2.0),
            RankPair { lower: 8, upper: 10 }
        );
    }

    #[test]
    fn zero_gap_collapses_to_target_rank() {
        let p = pivot_ranks(Theta::from_rank(3, 10), 10, 0.0);
        // 3/10 * 10 must not round up to 4.
        assert_eq!(p, RankPair { lower: 3, upper: 3 });
    }

    #[test]
    fn bounding_rank_examples() {
        let b = bounding_ranks(half(), 49, 7056, G_SQRT_S_49);
        assert_eq!(b, RankPair { lower: 1350, upper: 5707 });
        let z = bounding_ranks(half(), 49, 7056, 0.0);
        assert_eq!(z, RankPair { lower: 3528, upper: 3528 });
        let c = bounding_ranks(Theta::from_fraction(0.001), 10, 100, 5.0);
        assert_eq!(c.lower, 1);
    }

    #[test]
    fn plain_schedule_examples() {
        assert_eq!(schedule_plain(10_000, 0.5, 144).sizes(), &[100, 10_000]);
        let s2 = schedule_plain(2, 0.5, 144);
        assert_eq!(s2.sizes(), &[1, 2]);
        let big = schedule_plain(1_000_000, 0.5, 144);
        assert_eq!(big.sizes(), &[1000, 144_000, 1_000_000]);
        assert_eq!(big.l_bar(), 2);
    }

    #[test]
    fn capped_schedule_examples() {
        let eta = 2.0 / 144.0;
        let s = schedule_capped(1_000_000, 0.5, 144, eta);
        assert!(s.is_capped());
        assert_eq!(s.sizes(), &[49, 7056, 1_000_000]);
        let below = schedule_capped(20_735, 0.5, 144, eta);
        assert!(!below.is_capped());
        assert_eq!(below, schedule_plain(20_735, 0.5, 144));
        let at = schedule_capped(20_736, 0.5, 144, eta);
        assert!(at.is_capped());
        assert_eq!(at.sizes(), &[144, 20_736]);
    }

    #[test]
    fn nearly_inverse_r2_eta_never_caps_at_desk_scale() {
        let eta = 1.000_001 / 144.0;
        let s = schedule_capped(1_000_000, 0.5, 144, eta);
        assert!(!s.is_capped());
        assert_eq!(s.size(s.l_bar()), 144_000);
    }

    #[test]
    fn partition_cost_examples() {
        let c = partition_cost_bound(half(), 49, 7056, G_SQRT_S_49);
        assert!((c - 13_778.024_131_253_6).abs() < 1e-6);
        assert!((partition_cost_bound(half(), 10, 10, 2.0) - 6.0).abs() < 1e-12);
        let edge = partition_cost_bound(Theta::from_fraction(0.0), 10, 50, 0.0);
        assert!((edge - 40.0).abs() < 1e-12);
    }

    #[test]
    fn p_fail_examples() {
        let kappa = 1.0 / 12.0;
        let pn = p_fail(0.3, kappa, 1_000_000, GapMode::SqrtN);
        assert!((pn - 0.002_390_499_038_873_763).abs() < 1e-12);
        assert_eq!(p_fail(1e-6, kappa, 1_000_000, GapMode::SqrtN), 1.0);
        let ps = p_fail(0.3, kappa, 7056, GapMode::SqrtS);
        assert!((ps - 0.037_848_627_040_381_09).abs() < 1e-12);
        assert!((psi(7056.0, kappa) - 0.802_617_509_144_311_9).abs() < 1e-12);
    }

    #[test]
    fn gap_form_matches_closed_form_on_full_growth() {
        let p = Params::default();
        let theta = half();
        let (s, s_plus) = (7056, 7056 * 144);
        let g = gap(GapMode::SqrtS, p.beta, s, 0, theta).unwrap();
        let g_plus = gap(GapMode::SqrtS, p.beta, s_plus, 0, theta).unwrap();
        let a = p_fail_from_gaps(g, g_plus, s, s_plus);
        let b = p_fail(p.beta, p.kappa(), s, GapMode::SqrtS);
        assert!((a - b).abs() < 1e-12 * b.max(1e-300), "{a} vs {b}");
    }
}
