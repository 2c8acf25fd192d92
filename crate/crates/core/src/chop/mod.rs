//! Chopping strings into pieces with certified latest members.

pub mod diagonal;
pub mod multi;
pub mod tails;
pub mod two;

pub use diagonal::{on_large_diagonal, regions_intersect, strings_disjoint};
pub use multi::{chop_n, verify_chopping, ChopOptions, ChopOutcome, Chopping, ChoppingReport, LatestTable};
pub use tails::{direction_separator, tail_cut, DirectionCone};
pub use two::{chop_two, TwoChopResult};
