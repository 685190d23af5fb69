/// One sampling iteration of the top-level invocation.
///
/// Events are read off the zone layout after Step 4 and the Step-5 case
/// analysis; recording them costs no key comparisons.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace {
    pub l: usize,
    pub s: usize,
    pub s_plus: usize,
    pub g: f64,
    pub g_plus: f64,
    pub theta: f64,
    /// Ranks of `u` and `v` in the current sample.
    pub i_u: usize,
    pub i_v: usize,
    /// Whether `i_u == ceil(theta s - g)` and `i_v == ceil(theta s + g)`,
    /// i.e. neither clamp nor single-pivot reset changed them.
    pub i_u_exact: bool,
    pub i_v_exact: bool,
    pub i_u_plus: usize,
    pub i_v_plus: usize,
    pub j_u: usize,
    pub j_v: usize,
    /// Comparisons made by this iteration's partitioning pass.
    pub c: u64,
    pub c_bar: f64,
    /// Size of the union of the zones Step 5 recursed into.
    pub s_hat: usize,
    pub single_pivot: bool,
    pub events: TraceEvents,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TraceEvents {
    /// `u+ < u`
    pub u_plus_below_u: bool,
    /// `v < v+`
    pub v_below_v_plus: bool,
    /// `u < z*_{j_u}`
    pub u_below_z_ju: bool,
    /// `z*_{j_v} < v`
    pub z_jv_below_v: bool,
    /// `s_hat >= 4 g s+ / s`
    pub s_hat_large: bool,
    /// `c >= c_bar`
    pub c_large: bool,
}

impl IterationTrace {
    /// `4 g s+ / s`
    pub fn s_hat_limit(&self) -> f64 {
        4.0 * self.g * self.s_plus as f64 / self.s as f64
    }
}
