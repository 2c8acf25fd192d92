//! Wick expansion and time-ordered products of linear string fields.

pub mod expression;
pub mod graphs;
pub mod stratum;
pub mod tproduct;

pub use expression::{FieldSymbol, Monomial, PropKind, Propagator, WickExpression};
pub use graphs::{enumerate_graphs, involution_number, normal_order_product, ContractionGraph};
pub use stratum::{stratum, string_stratum, Stratum};
pub use tproduct::{chopping_independence_check, t_product_closed, t_product_recursive, t_product_with_chopping};
