//! Weighted geodesics for the curve conditions, and interior John and
//! twisted-cigar checks.

pub mod cig;
pub mod geodesic;
pub mod scan;

pub use cig::{cig_check, cig_constants, cig_l_from_cig_d, john_check, john_constant, CigReport, JohnReport};
pub use geodesic::{
    dijkstra, geodesic_on, weighted_geodesic, Attachment, CurveContext, GeodesicPath, LatticeGraph, PathSide, Weight,
};
pub use scan::{
    curve_condition_scan, dyadic_scales, row_pairs, sample_pairs, scan_drift, scan_pairs, BoundaryPair,
    CurveConditionReport, PairResult,
};
