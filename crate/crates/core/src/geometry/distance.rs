//! Exact Euclidean distance to the discrete boundary.
//!
//! Distances are measured to the set of boundary-face centroids and stored as
//! squared integers in half-cell units on the half grid, so cell centers,
//! face centroids and edge midpoints between neighbouring centers can all be
//! queried without interpolation. The transform is the separable lower
//! envelope of parabolas, one pass per axis, with exact rational
//! breakpoints.

use crate::geometry::domain::VoxelDomain;
use crate::grid::Grid;

/// Sentinel for "no feature on this line yet".
pub const INF: u32 = u32::MAX;

#[derive(Clone, Debug)]
pub struct DistanceField {
    grid: Grid,
    sq: Vec<u32>,
}

#[derive(Clone, Copy, Debug)]
enum Break {
    NegInf,
    At(i128, i128),
    PosInf,
}

fn le(a: Break, b: Break) -> bool {
    match (a, b) {
        (Break::NegInf, _) | (_, Break::PosInf) => true,
        (_, Break::NegInf) | (Break::PosInf, _) => false,
        (Break::At(n1, d1), Break::At(n2, d2)) => n1 * d2 <= n2 * d1,
    }
}

fn lt_int(a: Break, q: i128) -> bool {
    match a {
        Break::NegInf => true,
        Break::PosInf => false,
        Break::At(n, d) => n < q * d,
    }
}

/// One-dimensional squared distance transform of `f` (values `INF` are absent).
fn transform_line(f: &[u32], out: &mut [u32], v: &mut Vec<usize>, z: &mut Vec<Break>) {
    v.clear();
    z.clear();
    for q in 0..f.len() {
        if f[q] == INF {
            continue;
        }
        let fq = f[q] as i128 + (q * q) as i128;
        loop {
            match v.last() {
                None => {
                    v.push(q);
                    z.push(Break::NegInf);
                    break;
                }
                Some(&p) => {
                    let fp = f[p] as i128 + (p * p) as i128;
                    let s = Break::At(fq - fp, 2 * (q - p) as i128);
                    if le(s, *z.last().unwrap()) {
                        v.pop();
                        z.pop();
                        continue;
                    }
                    v.push(q);
                    z.push(s);
                    break;
                }
            }
        }
    }
    if v.is_empty() {
        out.iter_mut().for_each(|x| *x = INF);
        return;
    }
    z.push(Break::PosInf);
    let mut k = 0usize;
    for (q, o) in out.iter_mut().enumerate() {
        while lt_int(z[k + 1], q as i128) {
            k += 1;
        }
        let d = q as i64 - v[k] as i64;
        *o = (d * d) as u32 + f[v[k]];
    }
}

impl DistanceField {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Squared distance at a half-grid point, in units of `(h/2)^2`.
    #[inline]
    pub fn sq_half(&self, hc: [usize; 3]) -> u32 {
        self.sq[self.grid.half_index(hc)]
    }

    /// Distance at a half-grid point, absolute units.
    #[inline]
    pub fn dist_half(&self, hc: [usize; 3]) -> f64 {
        (self.sq_half(hc) as f64).sqrt() * 0.5 * self.grid.h()
    }

    /// Distance at the center of cell `idx`.
    #[inline]
    pub fn cell(&self, idx: usize) -> f64 {
        self.dist_half(self.grid.center_half(self.grid.coords(idx)))
    }

    /// Squared distance at the center of cell `idx`, in `(h/2)^2` units.
    #[inline]
    pub fn cell_sq(&self, idx: usize) -> u32 {
        self.sq_half(self.grid.center_half(self.grid.coords(idx)))
    }

    pub fn cell_values(&self) -> Vec<f64> {
        crate::par::map_range(self.grid.len(), |i| self.cell(i))
    }

    /// Raw half-grid squared distances.
    pub fn half_values(&self) -> &[u32] {
        &self.sq
    }
}

/// Distance transform to the boundary-face centroids of `dom`.
pub fn distance_transform(dom: &VoxelDomain) -> DistanceField {
    let grid = dom.grid().clone();
    let mut sq = vec![INF; grid.half_len()];
    for f in dom.boundary_faces() {
        sq[grid.half_index(f.half(&grid))] = 0;
    }
    let hd = grid.half_dims();
    for axis in 0..grid.dim() {
        let len = hd[axis];
        let stride = match axis {
            0 => 1,
            1 => hd[0],
            _ => hd[0] * hd[1],
        };
        let lines = grid.half_len() / len;
        let base = |l: usize| -> usize {
            match axis {
                0 => l * hd[0],
                1 => (l % hd[0]) + (l / hd[0]) * hd[0] * hd[1],
                _ => l,
            }
        };
        let results: Vec<Vec<u32>> = {
            let src = &sq;
            crate::par::map_range(lines, |l| {
                let b = base(l);
                let f: Vec<u32> = (0..len).map(|t| src[b + t * stride]).collect();
                let mut out = vec![0u32; len];
                let (mut v, mut z) = (Vec::with_capacity(len), Vec::with_capacity(len + 1));
                transform_line(&f, &mut out, &mut v, &mut z);
                out
            })
        };
        for (l, out) in results.into_iter().enumerate() {
            let b = base(l);
            for (t, val) in out.into_iter().enumerate() {
                sq[b + t * stride] = val;
            }
        }
    }
    DistanceField { grid, sq }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::domain::{build_domain, Generator};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute(dom: &VoxelDomain) -> Vec<u32> {
        let g = dom.grid();
        let feats: Vec<[usize; 3]> = dom.boundary_faces().iter().map(|f| f.half(g)).collect();
        (0..g.len())
            .map(|i| {
                let c = g.center_half(g.coords(i));
                feats
                    .iter()
                    .map(|f| (0..3).map(|a| (c[a] as i64 - f[a] as i64).pow(2)).sum::<i64>() as u32)
                    .min()
                    .unwrap()
            })
            .collect()
    }

    #[test]
    fn line_transform_matches_scan() {
        let f = [INF, 3, INF, INF, 0, INF, 7, INF];
        let mut out = [0u32; 8];
        transform_line(&f, &mut out, &mut Vec::new(), &mut Vec::new());
        for q in 0..8 {
            let b = (0..8)
                .filter(|&p| f[p] != INF)
                .map(|p| ((q as i64 - p as i64).pow(2) as u32) + f[p])
                .min()
                .unwrap();
            assert_eq!(out[q], b);
        }
    }

    #[test]
    fn random_domains_match_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for dim in [2, 3] {
            let k = if dim == 2 { 5 } else { 3 };
            let g = Grid::unit(dim, k).unwrap();
            for _ in 0..3 {
                let occ: Vec<bool> = (0..g.len()).map(|_| rng.gen_bool(0.6)).collect();
                let d = VoxelDomain::from_occupancy(g.clone(), occ, "random").unwrap();
                let df = distance_transform(&d);
                let b = brute(&d);
                for i in 0..g.len() {
                    assert_eq!(df.cell_sq(i), b[i]);
                }
            }
        }
    }

    #[test]
    fn symmetric_centers() {
        // for an even grid the geometric center is the common corner of the
        // four middle cells, which is a half-grid point
        let k = 6;
        let n = 1usize << k;
        let sq = build_domain(&Generator::Cube { dim: 2 }, k).unwrap();
        let df = distance_transform(&sq);
        let h = sq.grid().h();
        assert!((df.dist_half([n, n, 0]) - 0.5).abs() <= h);
        let g = sq.grid();
        let c = g.cell_at([0.5 - 1e-9, 0.5 - 1e-9, 0.0]).unwrap();
        assert!((df.cell(g.index(c)) - 0.5).abs() <= h);
        let ball = build_domain(&Generator::Ball { dim: 2, radius: 0.5 }, k).unwrap();
        let df = distance_transform(&ball);
        let v = df.dist_half([n, n, 0]);
        assert!((v - 0.5).abs() <= h, "{v}");
    }
}
