pub mod error;
pub mod harness;
pub mod identities;
pub mod lattice;
pub mod curve;
pub mod linalg;
pub mod plane;
pub mod ring;
pub mod spatial;
pub mod svg;
pub mod trees;
