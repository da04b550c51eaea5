//! Uniform dyadic cell grids.
//!
//! A [`Grid`] at resolution level `K` tiles an axis-aligned box with cells of
//! side `h = 2^-K`. The box corners are integer multiples of `h`, so every
//! cell, face and dyadic cube with level `<= K` has exact integer coordinates
//! in cell units. The *half grid* doubles the resolution and contains cell
//! centers (all coordinates odd), face centroids (exactly one even
//! coordinate) and cell corners (all even).

use crate::error::{Error, Result};

/// Upper bound on the number of cells a single grid may allocate.
pub const DEFAULT_CELL_BUDGET: u64 = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    dim: usize,
    level: u32,
    origin: [i64; 3],
    dims: [usize; 3],
}

impl Grid {
    pub fn new(dim: usize, level: u32, origin: [i64; 3], dims: [usize; 3]) -> Result<Self> {
        if !(dim == 2 || dim == 3) {
            return Err(Error::InvalidArgument(format!("dimension {dim} not in {{2,3}}")));
        }
        if level > 40 {
            return Err(Error::InvalidArgument(format!("level {level} too large")));
        }
        let mut dims = dims;
        let mut origin = origin;
        if dim == 2 {
            dims[2] = 1;
            origin[2] = 0;
        }
        if dims.iter().take(dim).any(|&d| d == 0) {
            return Err(Error::InvalidArgument("grid with zero extent".into()));
        }
        let cells = dims.iter().map(|&d| d as u64).product::<u64>();
        if cells > DEFAULT_CELL_BUDGET {
            return Err(Error::MemoryBudget { cells, budget: DEFAULT_CELL_BUDGET });
        }
        Ok(Grid { dim, level, origin, dims })
    }

    /// Grid covering `[lo, hi]` given in units of `2^-level`.
    pub fn from_box(dim: usize, level: u32, lo: [i64; 3], hi: [i64; 3]) -> Result<Self> {
        let mut dims = [1usize; 3];
        for a in 0..dim {
            if hi[a] <= lo[a] {
                return Err(Error::InvalidArgument("empty bounding box".into()));
            }
            dims[a] = (hi[a] - lo[a]) as usize;
        }
        Grid::new(dim, level, lo, dims)
    }

    /// Unit box `[0,1]^n` at level `k`.
    pub fn unit(dim: usize, k: u32) -> Result<Self> {
        let n = 1i64 << k;
        Grid::from_box(dim, k, [0; 3], [n, n, n])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn level(&self) -> u32 {
        self.level
    }
    pub fn origin(&self) -> [i64; 3] {
        self.origin
    }
    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }
    pub fn len(&self) -> usize {
        self.dims[0] * self.dims[1] * self.dims[2]
    }
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
    pub fn h(&self) -> f64 {
        (-(self.level as f64)).exp2()
    }
    pub fn cell_volume(&self) -> f64 {
        self.h().powi(self.dim as i32)
    }
    pub fn face_area(&self) -> f64 {
        self.h().powi(self.dim as i32 - 1)
    }

    #[inline]
    pub fn index(&self, c: [usize; 3]) -> usize {
        c[0] + self.dims[0] * (c[1] + self.dims[1] * c[2])
    }

    #[inline]
    pub fn coords(&self, idx: usize) -> [usize; 3] {
        let x = idx % self.dims[0];
        let r = idx / self.dims[0];
        [x, r % self.dims[1], r / self.dims[1]]
    }

    /// Index of the cell at signed local coordinates, if inside the grid.
    #[inline]
    pub fn index_signed(&self, c: [i64; 3]) -> Option<usize> {
        for a in 0..3 {
            if c[a] < 0 || c[a] >= self.dims[a] as i64 {
                return None;
            }
        }
        Some(self.index([c[0] as usize, c[1] as usize, c[2] as usize]))
    }

    /// Absolute coordinates of a cell center. The third coordinate is zero in 2D.
    pub fn center(&self, c: [usize; 3]) -> [f64; 3] {
        let h = self.h();
        let mut p = [0.0; 3];
        for a in 0..self.dim {
            p[a] = (self.origin[a] as f64 + c[a] as f64 + 0.5) * h;
        }
        p
    }

    /// Local cell containing `p` (half-open cells), if inside the grid.
    pub fn cell_at(&self, p: [f64; 3]) -> Option<[usize; 3]> {
        let h = self.h();
        let mut c = [0usize; 3];
        for a in 0..self.dim {
            let t = (p[a] / h).floor() as i64 - self.origin[a];
            if t < 0 || t >= self.dims[a] as i64 {
                return None;
            }
            c[a] = t as usize;
        }
        Some(c)
    }

    pub fn bbox(&self) -> ([f64; 3], [f64; 3]) {
        let h = self.h();
        let mut lo = [0.0; 3];
        let mut hi = [0.0; 3];
        for a in 0..self.dim {
            lo[a] = self.origin[a] as f64 * h;
            hi[a] = (self.origin[a] + self.dims[a] as i64) as f64 * h;
        }
        (lo, hi)
    }

    /// Bounding box corners in level-K cell units.
    pub fn bbox_cells(&self) -> ([i64; 3], [i64; 3]) {
        let mut hi = self.origin;
        for a in 0..3 {
            hi[a] += self.dims[a] as i64;
        }
        (self.origin, hi)
    }

    /// Grid enlarged by `margin` cells on every side of every active axis.
    pub fn expanded(&self, margin: usize) -> Result<Grid> {
        let mut origin = self.origin;
        let mut dims = self.dims;
        for a in 0..self.dim {
            origin[a] -= margin as i64;
            dims[a] += 2 * margin;
        }
        Grid::new(self.dim, self.level, origin, dims)
    }

    /// Same box at level `K + 1`.
    pub fn refined(&self) -> Result<Grid> {
        let mut origin = self.origin;
        let mut dims = self.dims;
        for a in 0..self.dim {
            origin[a] *= 2;
            dims[a] *= 2;
        }
        Grid::new(self.dim, self.level + 1, origin, dims)
    }

    pub fn half_dims(&self) -> [usize; 3] {
        let mut d = [1usize; 3];
        for a in 0..self.dim {
            d[a] = 2 * self.dims[a] + 1;
        }
        d
    }

    pub fn half_len(&self) -> usize {
        let d = self.half_dims();
        d[0] * d[1] * d[2]
    }

    #[inline]
    pub fn half_index(&self, hc: [usize; 3]) -> usize {
        let d = self.half_dims();
        hc[0] + d[0] * (hc[1] + d[1] * hc[2])
    }

    /// Half-grid coordinates of a cell center.
    #[inline]
    pub fn center_half(&self, c: [usize; 3]) -> [usize; 3] {
        let mut hc = [0usize; 3];
        for a in 0..self.dim {
            hc[a] = 2 * c[a] + 1;
        }
        hc
    }

    pub fn half_point(&self, hc: [usize; 3]) -> [f64; 3] {
        let h2 = self.h() * 0.5;
        let mut p = [0.0; 3];
        for a in 0..self.dim {
            p[a] = (2 * self.origin[a] + hc[a] as i64) as f64 * h2;
        }
        p
    }

    /// Euclidean distance between two points, ignoring the unused axis in 2D.
    pub fn distance(&self, p: [f64; 3], q: [f64; 3]) -> f64 {
        (0..self.dim).map(|a| (p[a] - q[a]).powi(2)).sum::<f64>().sqrt()
    }

    /// Neighbor offsets of the full (8- or 26-) neighborhood.
    pub fn neighbor_offsets(&self) -> Vec<[i64; 3]> {
        let zr: &[i64] = if self.dim == 3 { &[-1, 0, 1] } else { &[0] };
        let mut out = Vec::new();
        for &dz in zr {
            for dy in -1..=1 {
                for dx in -1..=1 {
                    if dx != 0 || dy != 0 || dz != 0 {
                        out.push([dx, dy, dz]);
                    }
                }
            }
        }
        out
    }

    /// Lower corner and side length, in this grid's local cell coordinates,
    /// of the dyadic cube `(level, index)`. Requires `level <= K`.
    pub fn cube_local(&self, level: i32, index: [i64; 3]) -> ([i64; 3], i64) {
        let s = 1i64 << (self.level as i32 - level);
        let mut lo = [0i64; 3];
        for a in 0..self.dim {
            lo[a] = index[a] * s - self.origin[a];
        }
        (lo, s)
    }
}

/// Summed-volume table over a boolean mask for O(1) box counts.
#[derive(Clone, Debug)]
pub struct PrefixCount {
    dims: [usize; 3],
    table: Vec<u32>,
}

impl PrefixCount {
    pub fn new(grid: &Grid, mask: &[bool]) -> Self {
        let d = grid.dims();
        let pd = [d[0] + 1, d[1] + 1, d[2] + 1];
        let mut table = vec![0u32; pd[0] * pd[1] * pd[2]];
        let at = |x: usize, y: usize, z: usize| x + pd[0] * (y + pd[1] * z);
        for z in 0..d[2] {
            for y in 0..d[1] {
                let mut row = 0u32;
                for x in 0..d[0] {
                    row += mask[grid.index([x, y, z])] as u32;
                    let v = row + table[at(x + 1, y, z + 1)] + table[at(x + 1, y + 1, z)]
                        - table[at(x + 1, y, z)];
                    table[at(x + 1, y + 1, z + 1)] = v;
                }
            }
        }
        PrefixCount { dims: d, table }
    }

    /// Number of set cells in the half-open local box `[lo, hi)`, clipped to the grid.
    pub fn count(&self, lo: [i64; 3], hi: [i64; 3]) -> u64 {
        let mut l = [0usize; 3];
        let mut u = [0usize; 3];
        for a in 0..3 {
            let lc = lo[a].clamp(0, self.dims[a] as i64);
            let hc = hi[a].clamp(0, self.dims[a] as i64);
            if hc <= lc {
                return 0;
            }
            l[a] = lc as usize;
            u[a] = hc as usize;
        }
        let pd0 = self.dims[0] + 1;
        let pd1 = self.dims[1] + 1;
        let t = |x: usize, y: usize, z: usize| self.table[x + pd0 * (y + pd1 * z)] as i64;
        let v = t(u[0], u[1], u[2]) - t(l[0], u[1], u[2]) - t(u[0], l[1], u[2]) - t(u[0], u[1], l[2])
            + t(l[0], l[1], u[2])
            + t(l[0], u[1], l[2])
            + t(u[0], l[1], l[2])
            - t(l[0], l[1], l[2]);
        v as u64
    }

    pub fn total(&self) -> u64 {
        self.count([0; 3], [self.dims[0] as i64, self.dims[1] as i64, self.dims[2] as i64])
    }
}

/// A codimension-one grid face lying between local cells `cell - e_axis`
/// and `cell` (either may lie outside the grid).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridFace {
    pub axis: u8,
    pub cell: [i64; 3],
}

impl GridFace {
    pub fn low_cell(&self) -> [i64; 3] {
        let mut c = self.cell;
        c[self.axis as usize] -= 1;
        c
    }

    pub fn high_cell(&self) -> [i64; 3] {
        self.cell
    }

    /// Half-grid coordinates of the centroid.
    pub fn half(&self, grid: &Grid) -> [usize; 3] {
        let mut hc = [0usize; 3];
        for a in 0..grid.dim() {
            hc[a] = if a == self.axis as usize {
                (2 * self.cell[a]) as usize
            } else {
                (2 * self.cell[a] + 1) as usize
            };
        }
        hc
    }

    pub fn centroid(&self, grid: &Grid) -> [f64; 3] {
        grid.half_point(self.half(grid))
    }
}

/// All faces separating set cells from unset cells, where cells outside the
/// grid count as unset. Ordered by axis, then by the high cell in memory order.
pub fn interface_faces(grid: &Grid, mask: &[bool]) -> Vec<GridFace> {
    let d = grid.dims();
    let get = |c: [i64; 3]| grid.index_signed(c).map(|i| mask[i]).unwrap_or(false);
    let mut out = Vec::new();
    for axis in 0..grid.dim() {
        let mut ext = d;
        ext[axis] += 1;
        let rows: Vec<Vec<GridFace>> = crate::par::map_range(ext[1] * ext[2], |r| {
            let y = (r % ext[1]) as i64;
            let z = (r / ext[1]) as i64;
            let mut row = Vec::new();
            for x in 0..ext[0] as i64 {
                let hi = [x, y, z];
                let mut lo = hi;
                lo[axis] -= 1;
                if get(hi) != get(lo) {
                    row.push(GridFace { axis: axis as u8, cell: hi });
                }
            }
            row
        });
        out.extend(rows.into_iter().flatten());
    }
    out
}
