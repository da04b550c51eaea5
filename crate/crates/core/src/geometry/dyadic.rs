//! Closed dyadic cubes `2^-k (j + [0,1]^n)` with exact integer predicates.

use std::cmp::Ordering;

/// A closed dyadic cube. Levels may be negative for cubes larger than one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DyadicCube {
    pub dim: u8,
    pub level: i32,
    pub index: [i64; 3],
}

/// Axis-aligned box in integer units of `2^-level`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntBox {
    pub level: i32,
    pub lo: [i64; 3],
    pub hi: [i64; 3],
}

impl DyadicCube {
    pub fn new(dim: usize, level: i32, index: [i64; 3]) -> Self {
        let mut index = index;
        if dim == 2 {
            index[2] = 0;
        }
        DyadicCube { dim: dim as u8, level, index }
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn side(&self) -> f64 {
        (-(self.level as f64)).exp2()
    }

    pub fn volume(&self) -> f64 {
        self.side().powi(self.dim as i32)
    }

    /// The cube as an integer box at a finer (or equal) level.
    pub fn to_box(&self, level: i32) -> IntBox {
        assert!(level >= self.level, "box level must not be coarser than the cube");
        let s = 1i64 << (level - self.level);
        let mut lo = [0i64; 3];
        let mut hi = [0i64; 3];
        for a in 0..self.dim() {
            lo[a] = self.index[a] * s;
            hi[a] = lo[a] + s;
        }
        IntBox { level, lo, hi }
    }

    fn common_boxes(&self, other: &DyadicCube) -> (IntBox, IntBox) {
        let l = self.level.max(other.level);
        (self.to_box(l), other.to_box(l))
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &DyadicCube) -> bool {
        let (a, b) = self.common_boxes(other);
        (0..self.dim()).all(|i| a.lo[i] <= b.lo[i] && b.hi[i] <= a.hi[i])
    }

    /// Closed cubes intersect.
    pub fn touches(&self, other: &DyadicCube) -> bool {
        let (a, b) = self.common_boxes(other);
        (0..self.dim()).all(|i| a.lo[i] <= b.hi[i] && b.lo[i] <= a.hi[i])
    }

    /// Interiors intersect.
    pub fn overlaps(&self, other: &DyadicCube) -> bool {
        let (a, b) = self.common_boxes(other);
        (0..self.dim()).all(|i| a.lo[i] < b.hi[i] && b.lo[i] < a.hi[i])
    }

    /// Distinct cubes sharing an (n-1)-dimensional piece of face, i.e.
    /// `int(Q ∪ Q')` is connected.
    pub fn shares_face(&self, other: &DyadicCube) -> bool {
        let (a, b) = self.common_boxes(other);
        let mut touching_axes = 0;
        for i in 0..self.dim() {
            if a.hi[i] == b.lo[i] || b.hi[i] == a.lo[i] {
                touching_axes += 1;
            } else if !(a.lo[i] < b.hi[i] && b.lo[i] < a.hi[i]) {
                return false;
            }
        }
        touching_axes == 1
    }

    pub fn parent(&self) -> DyadicCube {
        let mut idx = [0i64; 3];
        for a in 0..self.dim() {
            idx[a] = self.index[a].div_euclid(2);
        }
        DyadicCube::new(self.dim(), self.level - 1, idx)
    }

    pub fn children(&self) -> Vec<DyadicCube> {
        let n = self.dim();
        let mut out = Vec::with_capacity(1 << n);
        for bits in 0..(1usize << n) {
            let mut idx = [0i64; 3];
            for a in 0..n {
                idx[a] = 2 * self.index[a] + ((bits >> a) & 1) as i64;
            }
            out.push(DyadicCube::new(n, self.level + 1, idx));
        }
        out
    }

    pub fn center(&self) -> [f64; 3] {
        let s = self.side();
        let mut c = [0.0; 3];
        for a in 0..self.dim() {
            c[a] = (self.index[a] as f64 + 0.5) * s;
        }
        c
    }

    pub fn lower(&self) -> [f64; 3] {
        let s = self.side();
        let mut c = [0.0; 3];
        for a in 0..self.dim() {
            c[a] = self.index[a] as f64 * s;
        }
        c
    }

    /// The dilate `cQ` about the center as a floating box `(lo, hi)`.
    pub fn dilate(&self, c: f64) -> ([f64; 3], [f64; 3]) {
        let ctr = self.center();
        let r = 0.5 * c * self.side();
        let mut lo = [0.0; 3];
        let mut hi = [0.0; 3];
        for a in 0..self.dim() {
            lo[a] = ctr[a] - r;
            hi[a] = ctr[a] + r;
        }
        (lo, hi)
    }

    /// `½Q` at an exact level (one finer than the cube's level plus one).
    pub fn half(&self) -> IntBox {
        let b = self.to_box(self.level + 2);
        let mut lo = b.lo;
        let mut hi = b.hi;
        for a in 0..self.dim() {
            lo[a] += 1;
            hi[a] -= 1;
        }
        IntBox { level: b.level, lo, hi }
    }

    /// Compares side lengths: `Less` when `self` is smaller.
    pub fn cmp_size(&self, other: &DyadicCube) -> Ordering {
        other.level.cmp(&self.level)
    }
}

impl IntBox {
    /// Squared Euclidean distance between two closed boxes at the same level,
    /// in units of `2^(-2 level)`.
    pub fn dist_sq(&self, other: &IntBox, dim: usize) -> i128 {
        assert_eq!(self.level, other.level);
        let mut d = 0i128;
        for a in 0..dim {
            let g = (other.lo[a] - self.hi[a]).max(self.lo[a] - other.hi[a]).max(0) as i128;
            d += g * g;
        }
        d
    }

    pub fn contains_point(&self, p: [f64; 3], dim: usize) -> bool {
        let s = (-(self.level as f64)).exp2();
        (0..dim).all(|a| p[a] >= self.lo[a] as f64 * s && p[a] <= self.hi[a] as f64 * s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn containment_and_adjacency() {
        let big = DyadicCube::new(2, 1, [0, 0, 0]);
        let small = DyadicCube::new(2, 3, [2, 3, 0]);
        assert!(big.contains(&small));
        assert!(!small.contains(&big));
        assert_eq!(small.parent().parent(), big);

        let a = DyadicCube::new(2, 2, [0, 0, 0]);
        let b = DyadicCube::new(2, 2, [1, 0, 0]);
        let c = DyadicCube::new(2, 2, [1, 1, 0]);
        assert!(a.shares_face(&b));
        assert!(!a.shares_face(&c));
        assert!(a.touches(&c));
        assert!(!a.overlaps(&b));

        // different sizes, partial face
        let d = DyadicCube::new(2, 3, [2, 1, 0]);
        assert!(a.shares_face(&d));
    }

    #[test]
    fn same_level_distinct_cubes_have_disjoint_interiors() {
        for i in 0..4 {
            for j in 0..4 {
                let p = DyadicCube::new(3, 2, [i, j, 1]);
                let q = DyadicCube::new(3, 2, [j, i, 1]);
                assert_eq!(p.overlaps(&q), p == q);
            }
        }
    }

    #[test]
    fn half_cube_and_dilate() {
        let q = DyadicCube::new(2, 0, [0, 0, 0]);
        let hb = q.half();
        assert!(hb.contains_point([0.25, 0.75, 0.0], 2));
        assert!(!hb.contains_point([0.2, 0.5, 0.0], 2));
        let (lo, hi) = q.dilate(3.0);
        assert_eq!(lo[0], -1.0);
        assert_eq!(hi[1], 2.0);
    }

    #[test]
    fn box_distance() {
        let a = DyadicCube::new(2, 0, [0, 0, 0]).to_box(2);
        let b = DyadicCube::new(2, 2, [6, 7, 0]).to_box(2);
        // gaps 2 and 3 quarter units
        assert_eq!(a.dist_sq(&b, 2), 13);
    }
}
