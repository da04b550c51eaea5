//! Top-down dyadic Whitney decomposition of a voxel region.
//!
//! Cubes are subdivided until they lie inside the region at distance at least
//! their side length from the boundary face set. A cube is accepted as soon
//! as both hold; its parent failed, so `dist < 2ℓ + 2√n ℓ <= 4√n ℓ`.
//! Cubes still failing at the truncation level are kept, flagged as
//! truncated, and make up the collar.

use crate::error::{Error, Result};
use crate::geometry::domain::VoxelDomain;
use crate::geometry::dyadic::DyadicCube;
use crate::grid::{interface_faces, Grid, GridFace, PrefixCount};

/// Which side of `∂Ω` a decomposition tiles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Interior,
    Exterior,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WhitneyCube {
    pub cube: DyadicCube,
    /// Squared distance from the cube to `∂Ω`, in squared cells.
    pub dist_sq: i64,
    /// Stopped at the truncation level without meeting the acceptance test.
    pub truncated: bool,
    /// Exterior cube closer to the artificial outer box than to `∂Ω`.
    pub synthetic: bool,
}

#[derive(Clone, Debug)]
pub struct WhitneyDecomposition {
    grid: Grid,
    side: Side,
    region: Vec<bool>,
    omega: Vec<bool>,
    boundary: Vec<GridFace>,
    cubes: Vec<WhitneyCube>,
    owner: Vec<u32>,
    neighbors: Vec<Vec<u32>>,
    touching: Vec<Vec<u32>>,
    truncation_level: i32,
    root_level: i32,
}

/// No cube owns this cell.
pub const NO_OWNER: u32 = u32::MAX;

/// Bucketed face index for exact box-to-face distance queries.
pub(crate) struct FaceIndex {
    dim: usize,
    b: i64,
    nb: [i64; 3],
    buckets: Vec<Vec<(u8, [i64; 3])>>,
}

/// Squared distance (cells²) between the box `[lo, hi]` and a face.
#[inline]
pub(crate) fn box_face_dist_sq(dim: usize, lo: [i64; 3], hi: [i64; 3], axis: u8, cell: [i64; 3]) -> i64 {
    let mut d = 0i64;
    for a in 0..dim {
        let (flo, fhi) = if a == axis as usize { (cell[a], cell[a]) } else { (cell[a], cell[a] + 1) };
        let g = (flo - hi[a]).max(lo[a] - fhi).max(0);
        d += g * g;
    }
    d
}

impl FaceIndex {
    pub(crate) fn new(grid: &Grid, faces: &[GridFace]) -> Self {
        let dim = grid.dim();
        let d = grid.dims();
        let maxd = d.iter().take(dim).copied().max().unwrap_or(1) as i64;
        let b = ((maxd / 64).max(4) as u64).next_power_of_two() as i64;
        let mut nb = [1i64; 3];
        for a in 0..dim {
            nb[a] = (d[a] as i64 + 1) / b + 1;
        }
        let mut buckets = vec![Vec::new(); (nb[0] * nb[1] * nb[2]) as usize];
        for f in faces {
            let key = Self::key_of(dim, b, f.cell);
            let idx = key[0] + nb[0] * (key[1] + nb[1] * key[2]);
            buckets[idx as usize].push((f.axis, f.cell));
        }
        FaceIndex { dim, b, nb, buckets }
    }

    fn key_of(dim: usize, b: i64, c: [i64; 3]) -> [i64; 3] {
        let mut k = [0i64; 3];
        for a in 0..dim {
            k[a] = c[a].div_euclid(b);
        }
        k
    }

    /// Exact minimum squared distance from the box to any face (`i64::MAX` if none).
    pub(crate) fn min_dist_sq(&self, lo: [i64; 3], hi: [i64; 3]) -> i64 {
        let dim = self.dim;
        let mut klo = [0i64; 3];
        let mut khi = [0i64; 3];
        for a in 0..dim {
            klo[a] = lo[a].div_euclid(self.b).clamp(0, self.nb[a] - 1);
            khi[a] = hi[a].div_euclid(self.b).clamp(0, self.nb[a] - 1);
        }
        let mut best = i64::MAX;
        let max_r = self.nb.iter().take(dim).copied().max().unwrap_or(1);
        for r in 0..=max_r {
            if r >= 2 {
                let gap = (r - 1) * self.b;
                if gap * gap >= best {
                    break;
                }
            }
            let mut lo_r = [0i64; 3];
            let mut hi_r = [0i64; 3];
            for a in 0..dim {
                lo_r[a] = klo[a] - r;
                hi_r[a] = khi[a] + r;
            }
            let (z0, z1) = if dim == 3 { (lo_r[2], hi_r[2]) } else { (0, 0) };
            let mut any = false;
            for z in z0..=z1 {
                for y in lo_r[1]..=hi_r[1] {
                    for x in lo_r[0]..=hi_r[0] {
                        let on_shell = r == 0
                            || x == lo_r[0]
                            || x == hi_r[0]
                            || y == lo_r[1]
                            || y == hi_r[1]
                            || (dim == 3 && (z == lo_r[2] || z == hi_r[2]));
                        if !on_shell {
                            continue;
                        }
                        if x < 0 || y < 0 || z < 0 || x >= self.nb[0] || y >= self.nb[1] || z >= self.nb[2] {
                            continue;
                        }
                        any = true;
                        let idx = (x + self.nb[0] * (y + self.nb[1] * z)) as usize;
                        for &(axis, cell) in &self.buckets[idx] {
                            let d = box_face_dist_sq(dim, lo, hi, axis, cell);
                            if d < best {
                                best = d;
                            }
                        }
                    }
                }
            }
            if !any && r > 0 {
                break;
            }
        }
        best
    }
}

enum Step {
    Accept(WhitneyCube),
    Split,
    Drop,
    Truncate(WhitneyCube),
}

/// Whitney decomposition of `Ω`.
pub fn whitney_decompose(dom: &VoxelDomain, l_max: i32) -> Result<WhitneyDecomposition> {
    let grid = dom.grid().clone();
    let region = dom.occupancy().to_vec();
    build(grid, region.clone(), region, Side::Interior, l_max)
}

/// Whitney decomposition of `B ∖ Ω̄`, where `B` is the domain's box grown by
/// at least `margin` on every side.
pub fn exterior_whitney(dom: &VoxelDomain, margin: f64, l_max: i32) -> Result<WhitneyDecomposition> {
    if margin < dom.diameter() {
        return Err(Error::InvalidArgument(format!(
            "margin {margin} smaller than the domain diameter {}",
            dom.diameter()
        )));
    }
    let emb = dom.with_margin(margin)?;
    exterior_whitney_embedded(&emb, l_max)
}

/// Exterior decomposition over the domain's own grid, which must already
/// contain enough margin.
pub fn exterior_whitney_embedded(dom: &VoxelDomain, l_max: i32) -> Result<WhitneyDecomposition> {
    let grid = dom.grid().clone();
    let region: Vec<bool> = dom.occupancy().iter().map(|&b| !b).collect();
    if !region.iter().any(|&b| b) {
        return Err(Error::InvalidDomain("domain fills its box; no exterior".into()));
    }
    build(grid, region, dom.occupancy().to_vec(), Side::Exterior, l_max)
}

fn build(grid: Grid, region: Vec<bool>, omega: Vec<bool>, side: Side, l_max: i32) -> Result<WhitneyDecomposition> {
    let k = grid.level() as i32;
    if l_max > k {
        return Err(Error::InvalidArgument(format!("truncation level {l_max} finer than the grid level {k}")));
    }
    if !region.iter().any(|&b| b) {
        return Err(Error::InvalidDomain("empty region".into()));
    }
    let n = grid.dim();
    let (blo, bhi) = grid.bbox_cells();
    let extent = (0..n).map(|a| bhi[a] - blo[a]).max().unwrap();
    // root level: side (in cells) at least the box extent
    let mut root_level = k;
    while (1i64 << (k - root_level)) < extent {
        root_level -= 1;
    }
    if l_max < root_level {
        return Err(Error::InvalidArgument(format!("truncation level {l_max} coarser than the root level {root_level}")));
    }
    let all_faces = interface_faces(&grid, &region);
    // faces on ∂Ω: for the exterior, those with an Ω cell on one side
    let boundary: Vec<GridFace> = match side {
        Side::Interior => all_faces.clone(),
        Side::Exterior => all_faces
            .iter()
            .copied()
            .filter(|f| {
                let get = |c: [i64; 3]| grid.index_signed(c).map(|i| omega[i]).unwrap_or(false);
                get(f.low_cell()) || get(f.high_cell())
            })
            .collect(),
    };
    let combined = FaceIndex::new(&grid, &all_faces);
    let omega_index = match side {
        Side::Interior => None,
        Side::Exterior => Some(FaceIndex::new(&grid, &boundary)),
    };
    let prefix = PrefixCount::new(&grid, &region);
    let dims = grid.dims();

    let root_side = 1i64 << (k - root_level);
    let mut frontier = Vec::new();
    let mut ilo = [0i64; 3];
    let mut ihi = [0i64; 3];
    for a in 0..n {
        ilo[a] = blo[a].div_euclid(root_side);
        ihi[a] = (bhi[a] - 1).div_euclid(root_side);
    }
    for z in ilo[2]..=ihi[2] {
        for y in ilo[1]..=ihi[1] {
            for x in ilo[0]..=ihi[0] {
                frontier.push(DyadicCube::new(n, root_level, [x, y, z]));
            }
        }
    }

    let mut cubes = Vec::new();
    let mut level = root_level;
    while !frontier.is_empty() {
        let steps = crate::par::map(&frontier, |q| {
            let (lo, s) = grid.cube_local(q.level, q.index);
            let mut hi = lo;
            for a in 0..n {
                hi[a] += s;
            }
            let mut hi_count = hi;
            if n == 2 {
                hi_count[2] = 1;
            }
            let count = prefix.count(lo, hi_count);
            if count == 0 {
                return Step::Drop;
            }
            let full = (s as u64).pow(n as u32);
            let inside = count == full && (0..n).all(|a| lo[a] >= 0 && hi[a] <= dims[a] as i64);
            let make = |truncated: bool| {
                let d_all = combined.min_dist_sq(lo, hi);
                let (dist_sq, synthetic) = match &omega_index {
                    None => (d_all, false),
                    Some(oi) => {
                        let d_om = oi.min_dist_sq(lo, hi);
                        (d_om, d_all < d_om)
                    }
                };
                WhitneyCube { cube: *q, dist_sq, truncated, synthetic }
            };
            if inside {
                let d = combined.min_dist_sq(lo, hi);
                if d >= s * s {
                    return Step::Accept(make(false));
                }
            }
            if q.level >= l_max {
                Step::Truncate(make(true))
            } else {
                Step::Split
            }
        });
        let mut next = Vec::new();
        for (q, st) in frontier.iter().zip(steps) {
            match st {
                Step::Accept(c) | Step::Truncate(c) => cubes.push(c),
                Step::Split => next.extend(q.children()),
                Step::Drop => {}
            }
        }
        frontier = next;
        level += 1;
    }
    let _ = level;

    let mut dec = WhitneyDecomposition {
        grid,
        side,
        region,
        omega,
        boundary,
        cubes,
        owner: Vec::new(),
        neighbors: Vec::new(),
        touching: Vec::new(),
        truncation_level: l_max,
        root_level,
    };
    dec.build_adjacency();
    Ok(dec)
}

impl WhitneyDecomposition {
    fn build_adjacency(&mut self) {
        let g = &self.grid;
        let n = g.dim();
        let mut owner = vec![NO_OWNER; g.len()];
        for (id, wc) in self.cubes.iter().enumerate() {
            let (lo, s) = g.cube_local(wc.cube.level, wc.cube.index);
            let zr = if n == 3 { s } else { 1 };
            for z in 0..zr {
                for y in 0..s {
                    for x in 0..s {
                        let c = [lo[0] + x, lo[1] + y, lo[2] + z];
                        if let Some(i) = g.index_signed(c) {
                            if self.region[i] {
                                owner[i] = id as u32;
                            }
                        }
                    }
                }
            }
        }
        let offs = g.neighbor_offsets();
        let d = g.dims();
        let rows = crate::par::map_range(d[1] * d[2], |r| {
            let y = (r % d[1]) as i64;
            let z = (r / d[1]) as i64;
            let mut face = Vec::new();
            let mut touch = Vec::new();
            for x in 0..d[0] as i64 {
                let i = g.index([x as usize, y as usize, z as usize]);
                let a = owner[i];
                if a == NO_OWNER {
                    continue;
                }
                for o in &offs {
                    let c = [x + o[0], y + o[1], z + o[2]];
                    if let Some(j) = g.index_signed(c) {
                        let b = owner[j];
                        if b != NO_OWNER && b != a {
                            let nz = o.iter().filter(|&&v| v != 0).count();
                            touch.push((a, b));
                            if nz == 1 {
                                face.push((a, b));
                            }
                        }
                    }
                }
            }
            (face, touch)
        });
        let m = self.cubes.len();
        let mut neighbors = vec![Vec::new(); m];
        let mut touching = vec![Vec::new(); m];
        for (face, touch) in rows {
            for (a, b) in face {
                neighbors[a as usize].push(b);
            }
            for (a, b) in touch {
                touching[a as usize].push(b);
            }
        }
        for v in neighbors.iter_mut().chain(touching.iter_mut()) {
            v.sort_unstable();
            v.dedup();
        }
        self.owner = owner;
        self.neighbors = neighbors;
        self.touching = touching;
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }
    pub fn side(&self) -> Side {
        self.side
    }
    /// Cells tiled by this decomposition (`Ω`, or the box minus `Ω`).
    pub fn region(&self) -> &[bool] {
        &self.region
    }
    /// Occupancy of `Ω` on the same grid.
    pub fn omega(&self) -> &[bool] {
        &self.omega
    }
    /// Faces of `∂Ω`.
    pub fn boundary(&self) -> &[GridFace] {
        &self.boundary
    }
    pub fn cubes(&self) -> &[WhitneyCube] {
        &self.cubes
    }
    pub fn len(&self) -> usize {
        self.cubes.len()
    }
    pub fn is_empty(&self) -> bool {
        self.cubes.is_empty()
    }
    /// Cube owning each cell, `NO_OWNER` outside the region.
    pub fn owner(&self) -> &[u32] {
        &self.owner
    }
    /// Face-adjacent cubes `N(Q_i)`.
    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.neighbors[i]
    }
    /// Cubes whose closures meet `Q_i`.
    pub fn touching(&self, i: usize) -> &[u32] {
        &self.touching[i]
    }
    pub fn truncation_level(&self) -> i32 {
        self.truncation_level
    }
    pub fn root_level(&self) -> i32 {
        self.root_level
    }

    /// Local box `[lo, lo+s)` of cube `i` in cells.
    pub fn cube_cells(&self, i: usize) -> ([i64; 3], i64) {
        let c = &self.cubes[i].cube;
        self.grid.cube_local(c.level, c.index)
    }

    /// Side length of cube `i` in cells.
    pub fn side_cells(&self, i: usize) -> i64 {
        self.cube_cells(i).1
    }

    pub fn side_len(&self, i: usize) -> f64 {
        self.cubes[i].cube.side()
    }

    /// Region cells inside cube `i`.
    pub fn cell_count(&self, i: usize) -> u64 {
        let (lo, s) = self.cube_cells(i);
        let n = self.grid.dim();
        let mut c = 0;
        let zr = if n == 3 { s } else { 1 };
        for z in 0..zr {
            for y in 0..s {
                for x in 0..s {
                    if let Some(j) = self.grid.index_signed([lo[0] + x, lo[1] + y, lo[2] + z]) {
                        c += self.region[j] as u64;
                    }
                }
            }
        }
        c
    }

    /// Region cells inside truncated cubes.
    pub fn collar_cells(&self) -> u64 {
        (0..self.cubes.len()).filter(|&i| self.cubes[i].truncated).map(|i| self.cell_count(i)).sum()
    }

    pub fn collar_measure(&self) -> f64 {
        self.collar_cells() as f64 * self.grid.cell_volume()
    }

    /// Number of cubes at each level, from the root level down.
    pub fn level_histogram(&self) -> Vec<(i32, usize)> {
        let mut map = std::collections::BTreeMap::new();
        for c in &self.cubes {
            *map.entry(c.cube.level).or_insert(0usize) += 1;
        }
        map.into_iter().collect()
    }
}
