//! Dyadic voxel geometry for Sobolev extension experiments: Whitney
//! decompositions, set extension across the boundary, weighted perimeter
//! functionals, singular-weight geodesics and the Cantor-tube domain.

// axis loops index several arrays at once; negated float comparisons reject NaN
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod curves;
pub mod error;
pub mod extension;
pub mod geometry;
pub mod grid;
pub mod par;
pub mod perimeter;
pub mod whitney;

pub use error::{Error, Result};
