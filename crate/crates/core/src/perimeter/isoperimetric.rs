//! Relative isoperimetric ratios on cube pairs and on balls intersected
//! with a domain.

use crate::error::{Error, Result};
use crate::geometry::domain::VoxelDomain;
use crate::geometry::dyadic::DyadicCube;
use crate::grid::interface_faces;
use crate::perimeter::voxelset::{domain_has, VoxelSet};

/// Where the relative inequality is tested.
#[derive(Clone, Copy, Debug)]
pub enum IsoContext<'r> {
    /// `int(Q ∪ Q')` for comparable cubes sharing part of a face.
    CubePair(DyadicCube, DyadicCube),
    /// `B(x, r) ∩ Ω` with cells counted by their centers.
    Ball { center: [f64; 3], radius: f64, domain: &'r VoxelDomain },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IsoRatio {
    pub perimeter: f64,
    pub inside: f64,
    pub outside: f64,
    /// `P / min(|A ∩ U|, |U ∖ A|)^{1-1/n}`; infinite when the minimum vanishes.
    pub ratio: f64,
}

fn finish(n: usize, per: f64, inside: f64, outside: f64) -> IsoRatio {
    let e = 1.0 - 1.0 / n as f64;
    let m = inside.powf(e).min(outside.powf(e));
    let ratio = if m > 0.0 { per / m } else { f64::INFINITY };
    IsoRatio { perimeter: per, inside, outside, ratio }
}

pub fn isoperimetric_check(a: &VoxelSet, ctx: IsoContext) -> Result<IsoRatio> {
    let g = a.grid();
    let n = g.dim();
    let k = g.level() as i32;
    let vol = g.cell_volume();
    let area = g.face_area();
    match ctx {
        IsoContext::CubePair(q, qp) => {
            if q.level > k || qp.level > k {
                return Err(Error::InvalidArgument("cube finer than the grid".into()));
            }
            if (q.level - qp.level).abs() > 2 {
                return Err(Error::PreconditionNotMet("cube sides differ by more than a factor 4".into()));
            }
            if !q.shares_face(&qp) {
                return Err(Error::PreconditionNotMet("int(Q ∪ Q') is not connected".into()));
            }
            let boxes = [g.cube_local(q.level, q.index), g.cube_local(qp.level, qp.index)];
            let in_union = |c: [i64; 3]| {
                boxes.iter().any(|(lo, s)| (0..n).all(|ax| c[ax] >= lo[ax] && c[ax] < lo[ax] + s))
            };
            for (lo, s) in boxes {
                for ax in 0..n {
                    if lo[ax] < 0 || lo[ax] + s > g.dims()[ax] as i64 {
                        return Err(Error::InvalidArgument("cube leaves the grid".into()));
                    }
                }
            }
            let per = interface_faces(g, a.mask())
                .iter()
                .filter(|f| in_union(f.low_cell()) && in_union(f.high_cell()))
                .count() as f64
                * area;
            let (mut inside, mut total) = (0u64, 0u64);
            for (i, &b) in a.mask().iter().enumerate() {
                let c = g.coords(i);
                if in_union([c[0] as i64, c[1] as i64, c[2] as i64]) {
                    total += 1;
                    inside += b as u64;
                }
            }
            Ok(finish(n, per, inside as f64 * vol, (total - inside) as f64 * vol))
        }
        IsoContext::Ball { center, radius, domain } => {
            let in_ball = |p: [f64; 3]| (0..3).map(|ax| (p[ax] - center[ax]).powi(2)).sum::<f64>() < radius * radius;
            let per = crate::perimeter::faces::perimeter(
                a,
                crate::perimeter::faces::Region::BallInDomain { center, radius, domain },
            );
            let (mut inside, mut total) = (0u64, 0u64);
            for (i, &b) in a.mask().iter().enumerate() {
                let c = g.coords(i);
                let sc = [c[0] as i64, c[1] as i64, c[2] as i64];
                if in_ball(g.center(c)) && domain_has(domain, g, sc) {
                    total += 1;
                    inside += b as u64;
                }
            }
            Ok(finish(n, per, inside as f64 * vol, (total - inside) as f64 * vol))
        }
    }
}
