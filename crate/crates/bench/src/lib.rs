//! Fixtures shared by the criterion benchmarks.

use frselect::{Params, RngStream, Variant};

/// A seeded random permutation of `1..=n`.
pub fn permutation(n: usize, seed: u64) -> Vec<u64> {
    let mut v: Vec<u64> = (1..=n as u64).collect();
    RngStream::from_seed(seed).shuffle(&mut v);
    v
}

pub fn variant_params(variant: Variant) -> Params {
    Params {
        variant,
        ..Params::default()
    }
}

pub const VARIANTS: [(&str, Variant); 4] = [
    ("recursive", Variant::Recursive),
    ("nonrec-pick", Variant::NonrecPick),
    ("nonrec-sort", Variant::NonrecSort),
    ("quickselect", Variant::Quickselect),
];
