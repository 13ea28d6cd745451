//! Shared string and set data structures: rank/select bitvectors, a
//! generalized suffix array with backward search, and a disjoint-interval
//! set with span queries.

mod bits;
mod intervals;
mod suffix;

pub use bits::RankSelectBits;
pub use intervals::{IntervalSetError, IntervalUnionSet};
pub use suffix::GeneralizedSuffixStructure;
