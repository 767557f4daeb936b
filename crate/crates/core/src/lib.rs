//! Trivalent dual graphs of maximally degenerate stable curves: automorphism
//! orders under the curve convention, graph surgeries, candidate families,
//! exhaustive enumeration and verification of automorphism bounds.

pub mod enumerate;
pub mod families;
pub mod multigraph;
pub mod numeric;
pub mod transforms;
pub mod verify;

pub use multigraph::{GraphClass, GraphError, Multigraph};
