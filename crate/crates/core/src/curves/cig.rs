//! Interior curve checks: the twisted cigar constants and the John constant,
//! measured along quasi-hyperbolic lattice geodesics. Both are upper bounds
//! for the best constants of the chosen endpoints.

use crate::curves::geodesic::{geodesic_on, CurveContext, GeodesicPath, LatticeGraph, PathSide, Weight};
use crate::error::Result;

/// `C_cig-l = 2^14 · C_cig-d²`, kept as metadata.
pub fn cig_l_from_cig_d(cig_d: f64) -> f64 {
    16384.0 * cig_d * cig_d
}

#[derive(Clone, Debug, PartialEq)]
pub struct CigReport {
    pub path: GeodesicPath,
    /// `sup_z min{diam γ_{x,z}, diam γ_{y,z}} / dist(z, ∂Ω)`.
    pub cig_d: f64,
    /// `sup_z min{ℓ(γ_{x,z}), ℓ(γ_{y,z})} / dist(z, ∂Ω)`.
    pub cig_l: f64,
}

/// Diameters of the prefixes `γ[0..=i]`.
fn prefix_diameters(pts: &[[f64; 3]]) -> Vec<f64> {
    let mut out = Vec::with_capacity(pts.len());
    let mut d: f64 = 0.0;
    for i in 0..pts.len() {
        for j in 0..i {
            let s: f64 = (0..3).map(|a| (pts[i][a] - pts[j][a]).powi(2)).sum();
            d = d.max(s.sqrt());
        }
        out.push(d);
    }
    out
}

/// Cigar constants of a given path. Points on `∂Ω` are skipped.
pub fn cig_constants(path: &GeodesicPath) -> (f64, f64) {
    let n = path.points.len();
    let fwd = prefix_diameters(&path.points);
    let mut rev_pts = path.points.clone();
    rev_pts.reverse();
    let mut bwd = prefix_diameters(&rev_pts);
    bwd.reverse();
    let arc = path.arc_lengths();
    let total = path.length;
    let (mut cd, mut cl) = (0.0f64, 0.0f64);
    for i in 0..n {
        let d = path.dists[i];
        if d <= 0.0 {
            continue;
        }
        cd = cd.max(fwd[i].min(bwd[i]) / d);
        cl = cl.max(arc[i].min(total - arc[i]) / d);
    }
    (cd, cl)
}

/// Interior `1/dist` geodesic from `x` to `y` and its cigar constants.
pub fn cig_check(ctx: &CurveContext, x: [f64; 3], y: [f64; 3]) -> Result<CigReport> {
    let graph = LatticeGraph::new(ctx, PathSide::Interior, Weight::InverseDistance);
    let path = geodesic_on(&graph, x, y)?;
    let (cig_d, cig_l) = cig_constants(&path);
    Ok(CigReport { path, cig_d, cig_l })
}

#[derive(Clone, Debug, PartialEq)]
pub struct JohnReport {
    /// Largest `t / dist(γ(t), ∂Ω)` over all samples.
    pub j: f64,
    pub per_sample: Vec<f64>,
}

/// `sup_t t / dist(γ(t))` along a path parametrized from its first point.
pub fn john_constant(path: &GeodesicPath) -> f64 {
    let arc = path.arc_lengths();
    arc.iter()
        .zip(&path.dists)
        .filter(|(_, &d)| d > 0.0)
        .map(|(t, d)| t / d)
        .fold(0.0, f64::max)
}

/// John constant estimate for curves from each boundary sample to `x0`.
pub fn john_check(ctx: &CurveContext, x0: [f64; 3], samples: &[[f64; 3]]) -> Result<JohnReport> {
    let graph = LatticeGraph::new(ctx, PathSide::Interior, Weight::InverseDistance);
    let per: Vec<Result<f64>> = crate::par::map(samples, |&z| geodesic_on(&graph, z, x0).map(|p| john_constant(&p)));
    let per_sample = per.into_iter().collect::<Result<Vec<f64>>>()?;
    let j = per_sample.iter().copied().fold(0.0, f64::max);
    Ok(JohnReport { j, per_sample })
}
