//! Floating-point membership queries and sparse voxelizations for the
//! Cantor-tube domain. The exact construction lives in [`super::cantor`].

use std::collections::{HashMap, HashSet, VecDeque};

use crate::geometry::cantor::CantorTubeSpec;

#[derive(Clone, Debug)]
struct FCube {
    lo: [f64; 3],
    side: f64,
    children: Vec<usize>,
}

#[derive(Clone, Debug)]
struct FCurve {
    verts: Vec<[f64; 3]>,
}

/// Point membership in `Ω = (0,1)^3 ∖ ∪ T_{n,i}` for levels `n <= depth`.
#[derive(Clone, Debug)]
pub struct CantorMembership {
    depth: usize,
    cubes: Vec<Vec<FCube>>,
    curves: Vec<Vec<FCurve>>,
    c: Vec<f64>,
}

fn seg_dist_sq(p: [f64; 3], a: [f64; 3], b: [f64; 3]) -> f64 {
    // axis-parallel segment: clamp per axis
    let mut d = 0.0;
    for k in 0..3 {
        let (lo, hi) = if a[k] <= b[k] { (a[k], b[k]) } else { (b[k], a[k]) };
        let g = if p[k] < lo { lo - p[k] } else if p[k] > hi { p[k] - hi } else { 0.0 };
        d += g * g;
    }
    d
}

pub(crate) fn polyline_dist_sq(p: [f64; 3], verts: &[[f64; 3]]) -> f64 {
    verts.windows(2).map(|w| seg_dist_sq(p, w[0], w[1])).fold(f64::INFINITY, f64::min)
}

fn in_closed(p: [f64; 3], lo: [f64; 3], side: f64) -> bool {
    (0..3).all(|k| p[k] >= lo[k] && p[k] <= lo[k] + side)
}

fn in_open(p: [f64; 3], lo: [f64; 3], side: f64) -> bool {
    (0..3).all(|k| p[k] > lo[k] && p[k] < lo[k] + side)
}

impl CantorMembership {
    /// Membership including tubes of levels `1..=depth` (clamped to the spec depth).
    pub fn new(spec: &CantorTubeSpec, depth: usize) -> Self {
        let depth = depth.min(spec.depth());
        let mut cubes: Vec<Vec<FCube>> = Vec::with_capacity(depth + 1);
        let mut curves: Vec<Vec<FCurve>> = vec![Vec::new()];
        for n in 0..=depth {
            cubes.push(
                spec.cubes(n)
                    .iter()
                    .map(|c| FCube { lo: c.lo_f64(), side: c.side_f64(), children: Vec::new() })
                    .collect(),
            );
            if n > 0 {
                for c in spec.cubes(n) {
                    let idx = c.index;
                    cubes[n - 1][c.parent].children.push(idx);
                }
                curves.push(spec.curves(n).iter().map(|cv| FCurve { verts: cv.vertices_f64() }).collect());
            }
        }
        let c = (0..=depth).map(|n| spec.c_f64(n)).collect();
        CantorMembership { depth, cubes, curves, c }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Whether `p` lies in the closed tube `T_{n,i}`.
    pub fn in_tube(&self, n: usize, i: usize, p: [f64; 3]) -> bool {
        let cube = &self.cubes[n][i];
        // children are stored in blocks of eight per parent
        let parent = &self.cubes[n - 1][i / 8];
        if !in_closed(p, parent.lo, parent.side) || in_open(p, cube.lo, cube.side) {
            return false;
        }
        let r = 0.5 * self.c[n];
        polyline_dist_sq(p, &self.curves[n][i].verts) <= r * r
    }

    pub fn contains(&self, p: [f64; 3]) -> bool {
        if !in_open(p, [0.0; 3], 1.0) {
            return false;
        }
        let mut j = 0usize;
        for n in 1..=self.depth {
            let kids = &self.cubes[n - 1][j].children;
            for &i in kids {
                if self.in_tube(n, i, p) {
                    return false;
                }
            }
            match kids.iter().find(|&&i| in_open(p, self.cubes[n][i].lo, self.cubes[n][i].side)) {
                Some(&i) => j = i,
                None => return true,
            }
        }
        true
    }

    /// Indices of level-`n` tubes whose bounding boxes meet the box `[lo, hi]`.
    pub fn tubes_near(&self, n: usize, lo: [f64; 3], hi: [f64; 3]) -> Vec<usize> {
        let r = 0.5 * self.c[n];
        (0..self.curves[n].len())
            .filter(|&i| {
                let (blo, bhi) = bounds(&self.curves[n][i].verts, r);
                (0..3).all(|k| blo[k] <= hi[k] && lo[k] <= bhi[k])
            })
            .collect()
    }

    /// Upper bound on the volume of the tube `T_{n,i}`: a cylinder over the
    /// curve length plus one ball.
    pub fn tube_volume_bound_of(&self, n: usize, i: usize) -> f64 {
        let r = 0.5 * self.c[n];
        let len: f64 = self.curves[n][i]
            .verts
            .windows(2)
            .map(|w| (0..3).map(|k| (w[1][k] - w[0][k]).abs()).sum::<f64>())
            .sum();
        std::f64::consts::PI * r * r * len + 4.0 / 3.0 * std::f64::consts::PI * r.powi(3)
    }

    /// Upper bound on `|T_{n,i} ∩ B(x, r)|`. Every tube point in the ball has
    /// its nearest curve point in `B(x, r + ρ)`, so the tube part is covered
    /// by the `ρ`-neighborhoods of the curve segments clipped to that ball.
    pub fn tube_volume_in_ball_bound(&self, n: usize, i: usize, x: [f64; 3], r: f64) -> f64 {
        let rho = 0.5 * self.c[n];
        let big = r + rho;
        let mut total = 0.0;
        for w in self.curves[n][i].verts.windows(2) {
            let Some(ax) = (0..3).find(|&k| w[0][k] != w[1][k]) else { continue };
            let perp2: f64 = (0..3).filter(|&k| k != ax).map(|k| (w[0][k] - x[k]).powi(2)).sum();
            if perp2 >= big * big {
                continue;
            }
            let half = (big * big - perp2).sqrt();
            let (a, b) = if w[0][ax] < w[1][ax] { (w[0][ax], w[1][ax]) } else { (w[1][ax], w[0][ax]) };
            let len = (b.min(x[ax] + half) - a.max(x[ax] - half)).max(0.0);
            if len > 0.0 || (a..=b).contains(&x[ax]) {
                total += std::f64::consts::PI * rho * rho * len + 4.0 / 3.0 * std::f64::consts::PI * rho.powi(3);
            }
        }
        total
    }

    /// Upper bound on the total volume of all level-`n` tubes.
    pub fn tube_volume_bound(&self, n: usize) -> f64 {
        (0..self.curves[n].len()).map(|i| self.tube_volume_bound_of(n, i)).sum()
    }

    /// Tube radius `c_n / 2`.
    pub fn tube_radius(&self, n: usize) -> f64 {
        0.5 * self.c[n]
    }
}

fn bounds(verts: &[[f64; 3]], r: f64) -> ([f64; 3], [f64; 3]) {
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for v in verts {
        for k in 0..3 {
            lo[k] = lo[k].min(v[k] - r);
            hi[k] = hi[k].max(v[k] + r);
        }
    }
    (lo, hi)
}

/// Absolute level-`k` cell indices whose centers lie in `T_{n,i}`, sorted.
pub fn tube_voxels(member: &CantorMembership, n: usize, i: usize, k: u32) -> Vec<[i64; 3]> {
    let h = (-(k as f64)).exp2();
    let r = 0.5 * member.c[n];
    let verts = &member.curves[n][i].verts;
    let mut out = HashSet::new();
    for w in verts.windows(2) {
        let (lo, hi) = bounds(w, r);
        let a: Vec<i64> = (0..3).map(|d| (lo[d] / h - 0.5).floor() as i64).collect();
        let b: Vec<i64> = (0..3).map(|d| (hi[d] / h - 0.5).ceil() as i64).collect();
        for z in a[2]..=b[2] {
            for y in a[1]..=b[1] {
                for x in a[0]..=b[0] {
                    let p = [(x as f64 + 0.5) * h, (y as f64 + 0.5) * h, (z as f64 + 0.5) * h];
                    if member.in_tube(n, i, p) {
                        out.insert([x, y, z]);
                    }
                }
            }
        }
    }
    let mut v: Vec<[i64; 3]> = out.into_iter().collect();
    v.sort();
    v
}

/// Face-connectedness of a sparse voxel set.
pub fn voxels_connected(cells: &[[i64; 3]]) -> bool {
    if cells.is_empty() {
        return false;
    }
    let set: HashSet<[i64; 3]> = cells.iter().copied().collect();
    let mut seen = HashSet::with_capacity(set.len());
    let mut q = VecDeque::new();
    seen.insert(cells[0]);
    q.push_back(cells[0]);
    while let Some(c) = q.pop_front() {
        for a in 0..3 {
            for s in [-1i64, 1] {
                let mut nb = c;
                nb[a] += s;
                if set.contains(&nb) && seen.insert(nb) {
                    q.push_back(nb);
                }
            }
        }
    }
    seen.len() == set.len()
}

/// Squared distance in cell units between the closed cells `a` and `b`.
#[inline]
pub fn cell_gap_sq(a: [i64; 3], b: [i64; 3]) -> i64 {
    (0..3).map(|k| ((a[k] - b[k]).abs() - 1).max(0).pow(2)).sum()
}

/// Minimum squared cell-face distance (in cell units) between voxels of
/// different sets, considering only pairs closer than `cutoff` cells.
/// Returns `None` when no pair is within the cutoff.
pub fn min_set_gap_sq(sets: &[Vec<[i64; 3]>], cutoff: i64) -> Option<i64> {
    let b = cutoff.max(1);
    let mut buckets: HashMap<[i64; 3], Vec<(usize, [i64; 3])>> = HashMap::new();
    for (s, cells) in sets.iter().enumerate() {
        for &c in cells {
            let key = [c[0].div_euclid(b), c[1].div_euclid(b), c[2].div_euclid(b)];
            buckets.entry(key).or_default().push((s, c));
        }
    }
    for v in buckets.values_mut() {
        v.sort_unstable();
    }
    let keys: Vec<[i64; 3]> = buckets.keys().copied().collect();
    let results = crate::par::map(&keys, |key| {
        let mut best: Option<i64> = None;
        let here = &buckets[key];
        for dz in -1..=1 {
            for dy in -1..=1 {
                for dx in -1..=1 {
                    let nk = [key[0] + dx, key[1] + dy, key[2] + dz];
                    let Some(other) = buckets.get(&nk) else { continue };
                    // entries are sorted by set id
                    if here[0].0 >= other[other.len() - 1].0 {
                        continue;
                    }
                    for &(sa, ca) in here {
                        let start = other.partition_point(|e| e.0 <= sa);
                        for &(_, cb) in &other[start..] {
                            let g = cell_gap_sq(ca, cb);
                            if g < cutoff * cutoff {
                                best = Some(best.map_or(g, |x: i64| x.min(g)));
                            }
                        }
                    }
                }
            }
        }
        best
    });
    results.into_iter().flatten().min()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::cantor::build_cantor_tube;

    #[test]
    fn membership_excludes_tubes_and_outside() {
        let s = build_cantor_tube(1, None).unwrap();
        let m = CantorMembership::new(&s, 1);
        assert!(!m.contains([1.5, 0.5, 0.5]));
        let top = s.curves(1)[7].vertices_f64();
        let y = top[top.len() - 1];
        // just below the end point y on the top face
        assert!(!m.contains([y[0], y[1], y[2] - 1e-4]));
        assert!(m.contains([0.02, 0.02, 0.02]));
        // inside a child cube, away from all tubes
        let c = s.cubes(1)[0].lo_f64();
        assert!(m.contains([c[0] + 0.01, c[1] + 0.01, c[2] + 0.01]));
    }

    #[test]
    fn gap_matches_brute_force() {
        let a = vec![[0, 0, 0], [1, 0, 0]];
        let b = vec![[5, 0, 0], [4, 3, 0]];
        let brute = a.iter().flat_map(|&p| b.iter().map(move |&q| cell_gap_sq(p, q))).min();
        assert_eq!(min_set_gap_sq(&[a, b], 10), brute);
        assert!(voxels_connected(&[[0, 0, 0], [0, 1, 0], [0, 1, 1]]));
        assert!(!voxels_connected(&[[0, 0, 0], [1, 1, 0]]));
    }
}
