//! Complement-curve scans: `cost(z₁, z₂) / |z₁ - z₂|^{2-p}` over boundary pairs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::curves::geodesic::{geodesic_on, CurveContext, LatticeGraph, PathSide, Weight};
use crate::error::{Error, Result};
use crate::geometry::domain::{build_domain, Generator, VoxelDomain};

/// A boundary pair tagged with the separation scale it was drawn for.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryPair {
    pub z1: [f64; 3],
    pub z2: [f64; 3],
    pub scale: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairResult {
    pub id: usize,
    pub z1: [f64; 3],
    pub z2: [f64; 3],
    pub separation: f64,
    pub cost: f64,
    pub ratio: f64,
    pub scale: usize,
    pub path_edges: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurveConditionReport {
    pub k: u32,
    pub p: f64,
    /// Nominal separation of each scale.
    pub scales: Vec<f64>,
    pub pairs: Vec<PairResult>,
    /// Largest ratio per scale (NaN where no pair was found).
    pub scale_sup: Vec<f64>,
    /// Largest ratio overall. A finite sample only bounds the true constant from below.
    pub sup: f64,
}

impl CurveConditionReport {
    /// Largest over smallest per-scale supremum.
    pub fn scale_spread(&self) -> f64 {
        let v: Vec<f64> = self.scale_sup.iter().copied().filter(|x| x.is_finite()).collect();
        let mx = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mn = v.iter().copied().fold(f64::INFINITY, f64::min);
        mx / mn
    }

    pub const CSV_HEADER: &'static str = "pair,z1x,z1y,z2x,z2y,separation,cost,ratio,K";

    pub fn csv_rows(&self) -> Vec<String> {
        self.pairs
            .iter()
            .map(|r| {
                format!(
                    "{},{:?},{:?},{:?},{:?},{:?},{:?},{:?},{}",
                    r.id, r.z1[0], r.z1[1], r.z2[0], r.z2[1], r.separation, r.cost, r.ratio, self.k
                )
            })
            .collect()
    }
}

/// Runs the complement geodesic for every pair.
pub fn scan_pairs(ctx: &CurveContext, pairs: &[BoundaryPair], scales: &[f64], p: f64) -> Result<CurveConditionReport> {
    let weight = Weight::from_exponent(p)?;
    if weight == Weight::Unit {
        return Err(Error::UnsupportedExponent(p));
    }
    let graph = LatticeGraph::new(ctx, PathSide::Complement, weight);
    let g = ctx.grid();
    let results = crate::par::map(pairs, |bp| -> Result<(f64, usize, [f64; 3], [f64; 3])> {
        let path = geodesic_on(&graph, bp.z1, bp.z2)?;
        let (a, b) = (path.points[0], *path.points.last().expect("nonempty"));
        Ok((path.cost, path.edge_count(), a, b))
    });
    let mut out = Vec::with_capacity(pairs.len());
    for (id, (bp, r)) in pairs.iter().zip(results).enumerate() {
        let (cost, edges, a, b) = r?;
        let sep = g.distance(a, b);
        out.push(PairResult {
            id,
            z1: a,
            z2: b,
            separation: sep,
            cost,
            ratio: if sep > 0.0 { cost / sep.powf(2.0 - p) } else { 0.0 },
            scale: bp.scale,
            path_edges: edges,
        });
    }
    let mut scale_sup = vec![f64::NAN; scales.len()];
    for r in &out {
        let s = &mut scale_sup[r.scale];
        if s.is_nan() || r.ratio > *s {
            *s = r.ratio;
        }
    }
    let sup = out.iter().map(|r| r.ratio).fold(0.0, f64::max);
    Ok(CurveConditionReport { k: g.level(), p, scales: scales.to_vec(), pairs: out, scale_sup, sup })
}

/// Dyadic separation scales `diam · 2^{-j}`, `j ≥ 1`, down to `16h`.
pub fn dyadic_scales(dom: &VoxelDomain) -> Vec<f64> {
    let diam = dom.diameter();
    let h = dom.grid().h();
    (1..).map(|j| diam * (-(j as f64)).exp2()).take_while(|&s| s >= 16.0 * h).collect()
}

/// Random pairs of boundary-face centroids with separation within 10% of each scale.
pub fn sample_pairs(dom: &VoxelDomain, scales: &[f64], per_scale: usize, seed: u64) -> Vec<BoundaryPair> {
    let g = dom.grid();
    let pts: Vec<[f64; 3]> = dom.boundary_faces().iter().map(|f| f.centroid(g)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    if pts.is_empty() {
        return out;
    }
    for (si, &s) in scales.iter().enumerate() {
        let mut found = 0;
        let mut tries = 0;
        while found < per_scale && tries < 50 * per_scale {
            tries += 1;
            let z1 = pts[rng.gen_range(0..pts.len())];
            let near: Vec<usize> = (0..pts.len())
                .filter(|&j| {
                    let d = g.distance(z1, pts[j]);
                    d >= 0.9 * s && d <= 1.1 * s
                })
                .collect();
            if near.is_empty() {
                continue;
            }
            let z2 = pts[near[rng.gen_range(0..near.len())]];
            out.push(BoundaryPair { z1, z2, scale: si });
            found += 1;
        }
    }
    out
}

/// The two extreme boundary faces on the cell row through each height `y`:
/// the left face of the leftmost cell and the right face of the rightmost.
pub fn row_pairs(dom: &VoxelDomain, heights: &[f64]) -> Result<Vec<BoundaryPair>> {
    let g = dom.grid();
    if g.dim() != 2 {
        return Err(Error::InvalidArgument("row pairs need a planar domain".into()));
    }
    let h = g.h();
    let mut out = Vec::new();
    for (si, &y) in heights.iter().enumerate() {
        let row = ((y / h).floor() as i64) - g.origin()[1];
        if row < 0 || row >= g.dims()[1] as i64 {
            return Err(Error::InvalidArgument(format!("height {y} outside the grid")));
        }
        let cells: Vec<usize> = (0..g.dims()[0]).filter(|&x| dom.contains_cell(g.index([x, row as usize, 0]))).collect();
        let (Some(&lo), Some(&hi)) = (cells.first(), cells.last()) else {
            return Err(Error::InvalidArgument(format!("row at height {y} misses the domain")));
        };
        let yc = g.center([lo, row as usize, 0])[1];
        let x0 = (g.origin()[0] + lo as i64) as f64 * h;
        let x1 = (g.origin()[0] + hi as i64 + 1) as f64 * h;
        out.push(BoundaryPair { z1: [x0, yc, 0.0], z2: [x1, yc, 0.0], scale: si });
    }
    Ok(out)
}

/// Scan at resolution `k`: dyadic scales, `per_scale` random pairs each.
pub fn curve_condition_scan(dom: &VoxelDomain, p: f64, per_scale: usize, seed: u64) -> Result<CurveConditionReport> {
    if dom.dim() != 2 {
        return Err(Error::InvalidArgument("the curve condition is planar".into()));
    }
    let ctx = CurveContext::complement(dom)?;
    let scales = dyadic_scales(dom);
    let pairs = sample_pairs(dom, &scales, per_scale, seed);
    scan_pairs(&ctx, &pairs, &scales, p)
}

/// Same pairs at `K` and `K+1`, the second snapped to the nearest boundary
/// face of the finer domain. Returns both reports and the relative drift of
/// the overall supremum.
pub fn scan_drift(gen: &Generator, k: u32, p: f64, per_scale: usize, seed: u64) -> Result<(CurveConditionReport, CurveConditionReport, f64)> {
    let coarse = build_domain(gen, k)?;
    let fine = build_domain(gen, k + 1)?;
    let a = curve_condition_scan(&coarse, p, per_scale, seed)?;
    let fg = fine.grid();
    let pts: Vec<[f64; 3]> = fine.boundary_faces().iter().map(|f| f.centroid(fg)).collect();
    let snap = |z: [f64; 3]| {
        *pts.iter()
            .min_by(|u, v| fg.distance(**u, z).total_cmp(&fg.distance(**v, z)))
            .expect("boundary")
    };
    let pairs: Vec<BoundaryPair> =
        a.pairs.iter().map(|r| BoundaryPair { z1: snap(r.z1), z2: snap(r.z2), scale: r.scale }).collect();
    let ctx = CurveContext::complement(&fine)?;
    let b = scan_pairs(&ctx, &pairs, &a.scales, p)?;
    let drift = (b.sup - a.sup).abs() / a.sup;
    Ok((a, b, drift))
}
