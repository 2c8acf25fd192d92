//! Exact posteriority of strings in Minkowski space, chopping of string
//! configurations, and the symbolic expansion of time-ordered products of
//! string-localized fields.

pub mod chop;
pub mod error;
pub mod feasibility;
pub mod minkowski;
pub mod order;
pub mod rational;
pub mod wick;

pub use error::{Error, Result};
pub use minkowski::{causal_class, mdot, span_class, CausalClass, ExactVector, Hyperplane, SpanClass};
pub use order::{compare, later_region, latest_member, CompareResult, Piece, Region, StringGeom, Witness};
pub use rational::Rational;
