//! Floyd–Rivest style selection with nested random samples and exact
//! comparison accounting.
//!
//! [`select`] finds the `k`-th smallest element of a slice in place and
//! reports how many three-way comparisons it spent, together with the
//! other counters in [`Metrics`].

pub mod compare;
pub mod engine;
pub mod error;
pub mod fallbacks;
pub mod metrics;
pub mod params;
pub mod rng;
pub mod schedule;

pub use compare::{CountingComparator, TotalF64};
pub use engine::{select, select_with, small_select, IterationTrace, SelectOptions, Selection, TraceEvents};
pub use error::{ScheduleError, SelectError};
pub use fallbacks::{pick_select, quickselect, sort_select, FallbackKind, FallbackProfile};
pub use metrics::{f_scale, gamma_of, Metrics};
pub use params::{GapMode, ParamViolation, Params, ScheduleMode, Variant};
pub use rng::RngStream;
pub use schedule::{RankPair, Schedule, Theta};
