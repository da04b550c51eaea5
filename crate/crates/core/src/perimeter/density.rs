//! Volume density profiles `|A ∩ B(x,r)| / |B(x,r) ∩ Ω|` by exact cell counts.

use crate::error::{Error, Result};
use crate::geometry::cantor::CantorTubeSpec;
use crate::geometry::cantor_voxel::CantorMembership;
use crate::geometry::domain::VoxelDomain;
use crate::perimeter::voxelset::VoxelSet;

/// Normalization of the density.
#[derive(Clone, Copy, Debug)]
pub enum DensityBase<'r> {
    /// Relative to `Ω`.
    Domain(&'r VoxelDomain),
    /// Relative to the full ball.
    Whole,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityProfile {
    pub center: [f64; 3],
    /// Radii in decreasing order.
    pub radii: Vec<f64>,
    pub ratios: Vec<f64>,
    /// The ball leaves the bounding box of the set's grid.
    pub truncated: Vec<bool>,
}

impl DensityProfile {
    pub fn min_ratio(&self) -> f64 {
        self.ratios.iter().copied().fold(f64::INFINITY, f64::min)
    }
    pub fn max_ratio(&self) -> f64 {
        self.ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Absolute lattice cells at level `k` with centers in the open ball.
fn ball_cells(dim: usize, h: f64, x: [f64; 3], r: f64, mut visit: impl FnMut([i64; 3])) {
    let mut lo = [0i64; 3];
    let mut hi = [0i64; 3];
    for a in 0..dim {
        lo[a] = ((x[a] - r) / h - 0.5).floor() as i64;
        hi[a] = ((x[a] + r) / h - 0.5).ceil() as i64;
    }
    let r2 = r * r;
    for z in lo[2]..=hi[2] {
        let dz = if dim == 3 { (z as f64 + 0.5) * h - x[2] } else { 0.0 };
        for y in lo[1]..=hi[1] {
            let dy = (y as f64 + 0.5) * h - x[1];
            let rem = r2 - dz * dz - dy * dy;
            if rem <= 0.0 {
                continue;
            }
            for xx in lo[0]..=hi[0] {
                let dx = (xx as f64 + 0.5) * h - x[0];
                if dx * dx < rem {
                    visit([xx, y, z]);
                }
            }
        }
    }
}

pub fn density_profile(a: &VoxelSet, x: [f64; 3], radii: &[f64], base: DensityBase) -> Result<DensityProfile> {
    let g = a.grid();
    let h = g.h();
    let n = g.dim();
    if radii.iter().any(|&r| !(r >= 2.0 * h)) {
        return Err(Error::InvalidArgument(format!("radii must be at least 2h = {}", 2.0 * h)));
    }
    let mut rs = radii.to_vec();
    rs.sort_by(|p, q| q.total_cmp(p));
    let (blo, bhi) = g.bbox();
    let go = g.origin();
    let dom_o = match base {
        DensityBase::Domain(d) => Some((d, d.grid().origin())),
        DensityBase::Whole => None,
    };
    let counts = crate::par::map(&rs, |&r| {
        let (mut num, mut den) = (0u64, 0u64);
        ball_cells(n, h, x, r, |c| {
            let in_a = a.contains_signed([c[0] - go[0], c[1] - go[1], c[2] - go[2]]);
            let in_base = match dom_o {
                Some((d, o)) => d.contains_signed([c[0] - o[0], c[1] - o[1], c[2] - o[2]]),
                None => true,
            };
            if in_base {
                den += 1;
                num += (in_a && in_base) as u64;
            }
        });
        let trunc = (0..n).any(|ax| x[ax] - r < blo[ax] || x[ax] + r > bhi[ax]);
        (if den > 0 { num as f64 / den as f64 } else { 0.0 }, trunc)
    });
    Ok(DensityProfile {
        center: x,
        radii: rs,
        ratios: counts.iter().map(|c| c.0).collect(),
        truncated: counts.iter().map(|c| c.1).collect(),
    })
}

/// Density of the Cantor-tube domain at one radius, sampled on a window.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CantorDensity {
    pub radius: f64,
    /// Resolution level used for this radius.
    pub level: u32,
    /// Deepest tube level voxelized (tubes with `c_n >= 4h`).
    pub resolved_depth: usize,
    /// Cell-count ratio with the resolved tubes removed.
    pub upper: f64,
    /// `upper` minus a bound on the unresolved tube volume inside the ball.
    pub lower: f64,
}

/// `|Ω ∩ B(x,r)| / |B(x,r)|` for the Cantor-tube domain at each radius,
/// with the cell size chosen so that `r = cells_per_radius · h`.
pub fn cantor_density_profile(
    spec: &CantorTubeSpec,
    x: [f64; 3],
    radii: &[f64],
    cells_per_radius: f64,
) -> Result<Vec<CantorDensity>> {
    if !(cells_per_radius >= 2.0) {
        return Err(Error::InvalidArgument("need at least two cells per radius".into()));
    }
    let mut rs = radii.to_vec();
    rs.sort_by(|p, q| q.total_cmp(p));
    let out = crate::par::map(&rs, |&r| {
        let level = (cells_per_radius / r).log2().ceil().max(0.0) as u32;
        let h = (-(level as f64)).exp2();
        let resolved = (1..=spec.depth()).take_while(|&m| spec.c_f64(m) >= 4.0 * h).last().unwrap_or(0);
        let member = CantorMembership::new(spec, resolved);
        let (mut num, mut den) = (0u64, 0u64);
        ball_cells(3, h, x, r, |c| {
            den += 1;
            let p = [(c[0] as f64 + 0.5) * h, (c[1] as f64 + 0.5) * h, (c[2] as f64 + 0.5) * h];
            num += member.contains(p) as u64;
        });
        let cell_ball = den as f64 * h.powi(3);
        let full = CantorMembership::new(spec, spec.depth());
        let blo = [x[0] - r, x[1] - r, x[2] - r];
        let bhi = [x[0] + r, x[1] + r, x[2] + r];
        let unresolved: f64 = ((resolved + 1)..=spec.depth())
            .map(|m| {
                full.tubes_near(m, blo, bhi)
                    .into_iter()
                    .map(|i| full.tube_volume_in_ball_bound(m, i, x, r).min(full.tube_volume_bound_of(m, i)))
                    .sum::<f64>()
            })
            .sum();
        let upper = num as f64 / den as f64;
        CantorDensity {
            radius: r,
            level,
            resolved_depth: resolved,
            upper,
            lower: (upper - unresolved / cell_ball).max(0.0),
        }
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::domain::{build_domain, Generator};

    #[test]
    fn square_center_and_corner() {
        let d = build_domain(&Generator::Cube { dim: 2 }, 7).unwrap();
        let a = VoxelSet::domain(&d);
        let radii = [0.4, 0.2, 0.1, 0.05];
        let p = density_profile(&a, [0.5, 0.5, 0.0], &radii, DensityBase::Domain(&d)).unwrap();
        assert!(p.ratios.iter().all(|&v| v == 1.0));
        assert!(p.truncated.iter().all(|&t| !t));
        let p = density_profile(&a, [0.0, 0.0, 0.0], &radii, DensityBase::Whole).unwrap();
        for &v in &p.ratios {
            assert!((v - 0.25).abs() < 0.02, "{v}");
        }
        assert!(p.truncated.iter().all(|&t| t));
        assert!(density_profile(&a, [0.5; 3], &[0.001], DensityBase::Whole).is_err());
    }

    #[test]
    fn flat_boundary_point_has_half_density() {
        let d = build_domain(&Generator::Cube { dim: 2 }, 8).unwrap();
        let a = VoxelSet::domain(&d);
        let h = d.grid().h();
        let radii = [0.25, 0.125, 0.0625, 0.03125];
        let p = density_profile(&a, [0.5, 0.0, 0.0], &radii, DensityBase::Whole).unwrap();
        for (r, v) in p.radii.iter().zip(&p.ratios) {
            assert!((v - 0.5).abs() <= 2.0 * h / r, "{r}: {v}");
        }
    }
}
