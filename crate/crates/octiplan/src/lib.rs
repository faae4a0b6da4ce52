//! Planar octilinear graph drawing.
//!
//! Computes planar drawings of connected planar graphs with maximum degree
//! four or five in which every edge is a chain of horizontal, vertical and
//! 45-degree segments with at most one bend, on an integer grid.  Ships an
//! exact geometric verifier, decompositions (canonical order, BC-tree,
//! SPQR-tree), generators for several structured graph families, and JSON
//! import/export for graphs and drawings.
//!
//! Coordinates are arbitrary-precision integers throughout; drawings of some
//! degree-5 inputs legitimately exceed 64-bit range.

pub mod decompose;
pub mod embed;
pub mod families;
pub mod geom;
pub mod graph;
pub mod layout;
pub mod octi4;
pub mod octi5;
pub mod scalar;
pub mod verify;

/// Exact coordinate type used by all drawings.
pub type Coord = num_bigint::BigInt;

/// Point alias at drawing precision.
pub type Point = geom::Pt<Coord>;
