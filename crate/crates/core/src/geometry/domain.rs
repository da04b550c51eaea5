//! Voxel domains and their generators.

use std::collections::VecDeque;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::cantor::{build_cantor_tube, CantorTubeSpec};
use crate::geometry::cantor_voxel::CantorMembership;
use crate::grid::{interface_faces, Grid, GridFace};

/// An open set sampled on a dyadic grid. A cell is in the domain when its
/// center lies in the analytic set. Cells outside the bounding box are
/// outside the domain, so the box faces of in-cells belong to the boundary.
#[derive(Clone, Debug)]
pub struct VoxelDomain {
    grid: Grid,
    occupancy: Vec<bool>,
    name: String,
    connected: bool,
}

/// Named test geometries.
#[derive(Clone, Debug, PartialEq)]
pub enum Generator {
    /// Unit cube `(0,1)^n`.
    Cube { dim: usize },
    /// Ball of the given radius centered in the unit cube.
    Ball { dim: usize, radius: f64 },
    /// Unit square minus the horizontal slit `[0, len] x {1/2}`, one cell thick.
    SlitSquare { slit_len: f64 },
    /// `{(x1,x2) in (-1/2,1/2) x (0,1) : |x1| < x2^alpha}`: a thin outward
    /// cusp with its tip at the origin.
    OutwardCusp { alpha: f64 },
    /// Koch snowflake polygon after the given number of iterations.
    Snowflake { iterations: u32 },
    /// Unit cube minus the Cantor tubes of the given depth.
    CantorTube { depth: usize, lambda: Option<Vec<f64>> },
}

impl Generator {
    pub fn dim(&self) -> usize {
        match self {
            Generator::Cube { dim } | Generator::Ball { dim, .. } => *dim,
            Generator::CantorTube { .. } => 3,
            _ => 2,
        }
    }

    pub fn tag(&self) -> String {
        match self {
            Generator::Cube { dim } => format!("cube dim={dim}"),
            Generator::Ball { dim, radius } => format!("ball dim={dim} r={radius}"),
            Generator::SlitSquare { slit_len } => format!("slit_square len={slit_len}"),
            Generator::OutwardCusp { alpha } => format!("outward_cusp alpha={alpha}"),
            Generator::Snowflake { iterations } => format!("snowflake_approx iter={iterations}"),
            Generator::CantorTube { depth, lambda } => match lambda {
                None => format!("cantor_tube depth={depth}"),
                Some(l) => format!(
                    "cantor_tube depth={depth} lambda={}",
                    l.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
                ),
            },
        }
    }

    /// Bounding box at level `k`, in cell units.
    fn bbox_cells(&self, k: u32) -> ([i64; 3], [i64; 3]) {
        let n = 1i64 << k;
        match self {
            Generator::OutwardCusp { .. } => ([-n / 2, 0, 0], [n / 2, n, 0]),
            _ => ([0; 3], [n, n, n]),
        }
    }
}

impl VoxelDomain {
    /// Wraps an occupancy mask. Fails on an empty mask.
    pub fn from_occupancy(grid: Grid, occupancy: Vec<bool>, name: impl Into<String>) -> Result<Self> {
        if occupancy.len() != grid.len() {
            return Err(Error::InvalidArgument("occupancy length does not match grid".into()));
        }
        if !occupancy.iter().any(|&b| b) {
            return Err(Error::InvalidDomain("empty occupancy".into()));
        }
        let connected = count_components(&grid, &occupancy) == 1;
        Ok(VoxelDomain { grid, occupancy, name: name.into(), connected })
    }

    /// Samples `inside` at every cell center.
    pub fn from_predicate<F>(grid: Grid, name: impl Into<String>, inside: F) -> Result<Self>
    where
        F: Fn([f64; 3]) -> bool + Sync + Send,
    {
        let occ = sample_centers(&grid, &inside);
        VoxelDomain::from_occupancy(grid, occ, name)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }
    pub fn occupancy(&self) -> &[bool] {
        &self.occupancy
    }
    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn is_connected(&self) -> bool {
        self.connected
    }
    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    #[inline]
    pub fn contains_cell(&self, idx: usize) -> bool {
        self.occupancy[idx]
    }

    /// Membership for signed local coordinates; outside the box is outside.
    #[inline]
    pub fn contains_signed(&self, c: [i64; 3]) -> bool {
        self.grid.index_signed(c).map(|i| self.occupancy[i]).unwrap_or(false)
    }

    pub fn cell_count(&self) -> usize {
        self.occupancy.iter().filter(|&&b| b).count()
    }

    pub fn measure(&self) -> f64 {
        self.cell_count() as f64 * self.grid.cell_volume()
    }

    /// The discrete boundary: faces between in-cells and out-cells.
    pub fn boundary_faces(&self) -> Vec<GridFace> {
        interface_faces(&self.grid, &self.occupancy)
    }

    pub fn perimeter(&self) -> f64 {
        self.boundary_faces().len() as f64 * self.grid.face_area()
    }

    /// Diagonal of the bounding box of the in-cells (an upper bound on the diameter).
    pub fn diameter(&self) -> f64 {
        let mut lo = [i64::MAX; 3];
        let mut hi = [i64::MIN; 3];
        for (i, &b) in self.occupancy.iter().enumerate() {
            if b {
                let c = self.grid.coords(i);
                for a in 0..3 {
                    lo[a] = lo[a].min(c[a] as i64);
                    hi[a] = hi[a].max(c[a] as i64 + 1);
                }
            }
        }
        let h = self.grid.h();
        (0..self.dim()).map(|a| ((hi[a] - lo[a]) as f64 * h).powi(2)).sum::<f64>().sqrt()
    }

    /// The same domain on a grid enlarged by at least `margin` (absolute
    /// length) on every side, rounded up to whole cells.
    pub fn with_margin(&self, margin: f64) -> Result<VoxelDomain> {
        let cells = (margin / self.grid.h()).ceil().max(0.0) as usize;
        let grid = self.grid.expanded(cells)?;
        let mut occ = vec![false; grid.len()];
        for (i, &b) in self.occupancy.iter().enumerate() {
            if b {
                let c = self.grid.coords(i);
                let mut d = [0usize; 3];
                for a in 0..3 {
                    d[a] = c[a] + if a < self.dim() { cells } else { 0 };
                }
                occ[grid.index(d)] = true;
            }
        }
        Ok(VoxelDomain { grid, occupancy: occ, name: self.name.clone(), connected: self.connected })
    }
}

/// Samples `inside` at the centers of every cell of `grid`.
pub fn sample_centers<F>(grid: &Grid, inside: &F) -> Vec<bool>
where
    F: Fn([f64; 3]) -> bool + Sync + Send,
{
    let d = grid.dims();
    let rows = crate::par::map_range(d[1] * d[2], |r| {
        let y = r % d[1];
        let z = r / d[1];
        (0..d[0]).map(|x| inside(grid.center([x, y, z]))).collect::<Vec<bool>>()
    });
    rows.into_iter().flatten().collect()
}

/// Number of face-connected components of the set cells.
pub fn count_components(grid: &Grid, mask: &[bool]) -> usize {
    component_labels(grid, mask).1
}

/// Face-connected component labels (`u32::MAX` for unset cells) and count.
pub fn component_labels(grid: &Grid, mask: &[bool]) -> (Vec<u32>, usize) {
    let mut label = vec![u32::MAX; grid.len()];
    let mut count = 0usize;
    let mut queue = VecDeque::new();
    for start in 0..grid.len() {
        if !mask[start] || label[start] != u32::MAX {
            continue;
        }
        label[start] = count as u32;
        queue.push_back(start);
        while let Some(i) = queue.pop_front() {
            let c = grid.coords(i);
            for a in 0..grid.dim() {
                for s in [-1i64, 1] {
                    let mut n = [c[0] as i64, c[1] as i64, c[2] as i64];
                    n[a] += s;
                    if let Some(j) = grid.index_signed(n) {
                        if mask[j] && label[j] == u32::MAX {
                            label[j] = count as u32;
                            queue.push_back(j);
                        }
                    }
                }
            }
        }
        count += 1;
    }
    (label, count)
}

fn keep_largest_component(grid: &Grid, mask: Vec<bool>) -> Vec<bool> {
    let (labels, n) = component_labels(grid, &mask);
    if n <= 1 {
        return mask;
    }
    let mut sizes = vec![0usize; n];
    for &l in &labels {
        if l != u32::MAX {
            sizes[l as usize] += 1;
        }
    }
    let best = (0..n).max_by_key(|&i| (sizes[i], std::cmp::Reverse(i))).unwrap() as u32;
    labels.iter().map(|&l| l == best).collect()
}

/// Builds a generator domain at resolution level `k`.
pub fn build_domain(gen: &Generator, k: u32) -> Result<VoxelDomain> {
    let dim = gen.dim();
    let (lo, hi) = gen.bbox_cells(k);
    let grid = Grid::from_box(dim, k, lo, hi)?;
    let occ = match gen {
        Generator::Cube { .. } => vec![true; grid.len()],
        Generator::Ball { radius, .. } => {
            if !(*radius > 0.0 && *radius <= 0.5) {
                return Err(Error::InvalidArgument(format!("ball radius {radius} outside (0, 1/2]")));
            }
            let r2 = radius * radius;
            sample_centers(&grid, &|p: [f64; 3]| {
                (0..dim).map(|a| (p[a] - 0.5).powi(2)).sum::<f64>() < r2
            })
        }
        Generator::SlitSquare { slit_len } => {
            if !(0.0..=1.0).contains(slit_len) {
                return Err(Error::InvalidArgument(format!("slit length {slit_len} outside [0,1]")));
            }
            let row = 1usize << (k - 1);
            let mut occ = vec![true; grid.len()];
            for x in 0..grid.dims()[0] {
                if grid.center([x, row, 0])[0] < *slit_len {
                    occ[grid.index([x, row, 0])] = false;
                }
            }
            occ
        }
        Generator::OutwardCusp { alpha } => {
            if *alpha <= 1.0 {
                return Err(Error::InvalidArgument(format!("cusp exponent {alpha} must exceed 1")));
            }
            keep_largest_component(
                &grid,
                sample_centers(&grid, &|p: [f64; 3]| p[1] > 0.0 && p[0].abs() < p[1].powf(*alpha)),
            )
        }
        Generator::Snowflake { iterations } => {
            if *iterations > 7 {
                return Err(Error::InvalidArgument("snowflake iterations above 7".into()));
            }
            let poly = koch_snowflake(*iterations);
            keep_largest_component(&grid, scanline_fill(&grid, &poly))
        }
        Generator::CantorTube { depth, lambda } => {
            let spec = build_cantor_tube(*depth, lambda.clone())?;
            return build_cantor_domain(&spec, &grid);
        }
    };
    VoxelDomain::from_occupancy(grid, occ, gen.tag())
}

/// Voxelizes the Cantor-tube domain on `grid` (which may be a window of the
/// unit cube). Fails when the thinnest tubes would vanish at this resolution.
pub fn build_cantor_domain(spec: &CantorTubeSpec, grid: &Grid) -> Result<VoxelDomain> {
    let h = grid.h();
    let c_m = spec.c_f64(spec.depth());
    if c_m < 4.0 * h {
        return Err(Error::ResolutionTooCoarse(format!(
            "c_{} = {c_m:.3e} < 4h = {:.3e}; need K >= {}",
            spec.depth(),
            4.0 * h,
            (4.0 / c_m).log2().ceil()
        )));
    }
    let member = CantorMembership::new(spec, spec.depth());
    let occ = sample_centers(grid, &|p: [f64; 3]| member.contains(p));
    VoxelDomain::from_occupancy(grid.clone(), occ, format!("cantor_tube depth={}", spec.depth()))
}

/// Voxelizes a cubic window of `2 * half_cells` cells per side at level `k`,
/// centered (to the nearest cell corner) at `center`, including tubes of
/// levels `1..=levels`. Cells outside the unit cube are outside the domain.
pub fn build_cantor_window(
    spec: &CantorTubeSpec,
    levels: usize,
    center: [f64; 3],
    half_cells: usize,
    k: u32,
) -> Result<VoxelDomain> {
    let levels = levels.min(spec.depth());
    let h = (-(k as f64)).exp2();
    let c = spec.c_f64(levels);
    if levels > 0 && c < 4.0 * h {
        return Err(Error::ResolutionTooCoarse(format!(
            "c_{levels} = {c:.3e} < 4h = {:.3e}",
            4.0 * h
        )));
    }
    let mut lo = [0i64; 3];
    let mut hi = [0i64; 3];
    for a in 0..3 {
        let mid = (center[a] / h).round() as i64;
        lo[a] = mid - half_cells as i64;
        hi[a] = mid + half_cells as i64;
    }
    let grid = Grid::from_box(3, k, lo, hi)?;
    let member = CantorMembership::new(spec, levels);
    let occ = sample_centers(&grid, &|p: [f64; 3]| member.contains(p));
    VoxelDomain::from_occupancy(grid, occ, format!("cantor_tube depth={} window", spec.depth()))
}

/// Counter-clockwise Koch snowflake scaled into `[0.05, 0.95]^2`.
pub fn koch_snowflake(iterations: u32) -> Vec<[f64; 2]> {
    let s3 = 3f64.sqrt();
    // counter-clockwise triangle so that the bumps point outward
    let mut pts = vec![[0.0, 0.0], [1.0, 0.0], [0.5, s3 / 2.0]];
    for _ in 0..iterations {
        let mut next = Vec::with_capacity(pts.len() * 4);
        for i in 0..pts.len() {
            let a = pts[i];
            let b = pts[(i + 1) % pts.len()];
            let d = [(b[0] - a[0]) / 3.0, (b[1] - a[1]) / 3.0];
            let p1 = [a[0] + d[0], a[1] + d[1]];
            let p3 = [a[0] + 2.0 * d[0], a[1] + 2.0 * d[1]];
            // rotate d by -60 degrees: outward for a CCW polygon
            let (c, s) = ((-PI / 3.0).cos(), (-PI / 3.0).sin());
            let p2 = [p1[0] + c * d[0] - s * d[1], p1[1] + s * d[0] + c * d[1]];
            next.extend_from_slice(&[a, p1, p2, p3]);
        }
        pts = next;
    }
    let (mut lo, mut hi) = ([f64::MAX; 2], [f64::MIN; 2]);
    for p in &pts {
        for a in 0..2 {
            lo[a] = lo[a].min(p[a]);
            hi[a] = hi[a].max(p[a]);
        }
    }
    let scale = 0.9 / (hi[0] - lo[0]).max(hi[1] - lo[1]);
    let off = [
        0.5 - 0.5 * (hi[0] + lo[0]) * scale,
        0.5 - 0.5 * (hi[1] + lo[1]) * scale,
    ];
    pts.iter().map(|p| [p[0] * scale + off[0], p[1] * scale + off[1]]).collect()
}

/// Even-odd fill of a closed polygon at cell centers.
pub fn scanline_fill(grid: &Grid, poly: &[[f64; 2]]) -> Vec<bool> {
    let d = grid.dims();
    let rows = crate::par::map_range(d[1], |y| {
        let py = grid.center([0, y, 0])[1];
        let mut xs = Vec::new();
        for i in 0..poly.len() {
            let a = poly[i];
            let b = poly[(i + 1) % poly.len()];
            if (a[1] > py) != (b[1] > py) {
                xs.push(a[0] + (py - a[1]) / (b[1] - a[1]) * (b[0] - a[0]));
            }
        }
        xs.sort_by(|p, q| p.partial_cmp(q).unwrap());
        (0..d[0])
            .map(|x| {
                let px = grid.center([x, y, 0])[0];
                xs.iter().filter(|&&v| v < px).count() % 2 == 1
            })
            .collect::<Vec<bool>>()
    });
    rows.into_iter().flatten().collect()
}
