//! Exact rings for refined multiplicities.

pub mod brackets;
pub mod group;
pub mod laurent;
pub mod refined;

pub use brackets::{bracket_minus, bracket_plus, mu_plus};
pub use group::{group_vertex_weight, lambda_push, GroupRingValue};
pub use laurent::{Coeff, LaurentZ};
pub use refined::{RefinedValue, SurdValue};

#[cfg(test)]
mod props;
