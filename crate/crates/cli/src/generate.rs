//! Benchmark input families.

use std::fmt;
use std::str::FromStr;

use frselect::RngStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, clap::ValueEnum)]
pub enum Family {
    /// A random permutation of `1..=n`.
    Random,
    /// `ceil(n/2)` ones and `floor(n/2)` zeros in random order.
    Onezero,
    /// `1..=n` ascending.
    Sorted,
    /// `1, 2, .., n/2, n/2, .., 2, 1`. For odd `n` the single center is `ceil(n/2)`.
    Organpipe,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Random, Family::Onezero, Family::Sorted, Family::Organpipe];

    pub fn name(self) -> &'static str {
        match self {
            Family::Random => "random",
            Family::Onezero => "onezero",
            Family::Sorted => "sorted",
            Family::Organpipe => "organpipe",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KRule {
    /// The lower median, `k = ceil(n/2)`.
    Median,
    Explicit(usize),
}

impl KRule {
    pub fn resolve(self, n: usize) -> usize {
        match self {
            KRule::Median => n.div_ceil(2),
            KRule::Explicit(k) => k,
        }
    }
}

impl FromStr for KRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("median") {
            Ok(KRule::Median)
        } else {
            s.parse()
                .map(KRule::Explicit)
                .map_err(|_| format!("expected an integer or `median`, got `{s}`"))
        }
    }
}

impl fmt::Display for KRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KRule::Median => f.write_str("median"),
            KRule::Explicit(k) => write!(f, "{k}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InputSpec {
    pub family: Family,
    pub n: usize,
    pub k_rule: KRule,
}

impl InputSpec {
    pub fn new(family: Family, n: usize) -> Self {
        Self {
            family,
            n,
            k_rule: KRule::Median,
        }
    }

    pub fn with_k(self, k_rule: KRule) -> Self {
        Self { k_rule, ..self }
    }

    pub fn k(&self) -> usize {
        self.k_rule.resolve(self.n)
    }
}

/// Builds one input of the given family. Only `Random` and `Onezero` draw
/// from `rng`.
pub fn generate(family: Family, n: usize, rng: &mut RngStream) -> Vec<u64> {
    assert!(n >= 1, "inputs must be nonempty");
    match family {
        Family::Random => {
            let mut v: Vec<u64> = (1..=n as u64).collect();
            rng.shuffle(&mut v);
            v
        }
        Family::Onezero => {
            let ones = n.div_ceil(2);
            let mut v: Vec<u64> = (0..n).map(|i| u64::from(i < ones)).collect();
            rng.shuffle(&mut v);
            v
        }
        Family::Sorted => (1..=n as u64).collect(),
        Family::Organpipe => (0..n).map(|i| (i + 1).min(n - i) as u64).collect(),
    }
}
