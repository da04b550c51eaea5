//! The smoothing operator `S_W v = Σ ψ_i · (mean of v over Q_i)`.
//!
//! The gradient of `u = S_W v` vanishes inside `Q_i` except in the shells
//! `B(Q_j, ℓ_j/16) ∩ Q_i` of touching cubes whose mean differs from that of
//! `Q_i`, because `∇u = Σ_j (a_j - a_i) ∇ψ_j` there. The energy
//! `∫ |∇u|^p` is integrated by a midpoint rule on a lattice refined
//! relative to the smallest cube involved, restricted to those shells.

use crate::whitney::decompose::WhitneyDecomposition;
use crate::whitney::partition::{PartitionOfUnity, SHELL};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GradientMode {
    /// Central differences with half the lattice spacing.
    FiniteDifference,
    /// Exact derivatives of the bumps.
    Analytic,
}

/// Cube averages and the resulting smoothed function.
#[derive(Clone, Debug)]
pub struct SmoothedIndicator<'a> {
    pu: PartitionOfUnity<'a>,
    averages: Vec<f64>,
}

/// Result of an energy integration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Energy {
    pub value: f64,
    /// Cubes with a nonzero gradient inside them.
    pub interface_cubes: usize,
    /// Quadrature points used.
    pub samples: usize,
    /// Truncated cubes adjacent to a differing average (not integrated).
    pub collar_cubes: usize,
}

impl<'a> SmoothedIndicator<'a> {
    /// `S_W χ_F` for a cell mask `F` on the decomposition grid.
    pub fn from_mask(dec: &'a WhitneyDecomposition, f: &[bool]) -> Self {
        let vals: Vec<f64> = f.iter().map(|&b| b as u8 as f64).collect();
        Self::from_values(dec, &vals)
    }

    /// `S_W v` for a cell function `v`; the cube average runs over region cells.
    pub fn from_values(dec: &'a WhitneyDecomposition, v: &[f64]) -> Self {
        let g = dec.grid();
        let n = g.dim();
        let region = dec.region();
        let averages = crate::par::map_range(dec.len(), |i| {
            let (lo, s) = dec.cube_cells(i);
            let zr = if n == 3 { s } else { 1 };
            let mut sum = 0.0;
            let mut cnt = 0u64;
            for z in 0..zr {
                for y in 0..s {
                    for x in 0..s {
                        if let Some(j) = g.index_signed([lo[0] + x, lo[1] + y, lo[2] + z]) {
                            if region[j] {
                                sum += v[j];
                                cnt += 1;
                            }
                        }
                    }
                }
            }
            if cnt == 0 {
                0.0
            } else {
                sum / cnt as f64
            }
        });
        SmoothedIndicator { pu: PartitionOfUnity::new(dec), averages }
    }

    /// Explicit cube averages.
    pub fn from_averages(dec: &'a WhitneyDecomposition, averages: Vec<f64>) -> Self {
        assert_eq!(averages.len(), dec.len());
        SmoothedIndicator { pu: PartitionOfUnity::new(dec), averages }
    }

    pub fn averages(&self) -> &[f64] {
        &self.averages
    }

    pub fn partition(&self) -> &PartitionOfUnity<'a> {
        &self.pu
    }

    /// `u(x)` for `x ∈ Q_i`.
    pub fn value_in(&self, i: usize, x: [f64; 3]) -> f64 {
        self.pu.evaluate_in(i, x).iter().map(|&(j, p)| p * self.averages[j]).sum()
    }

    pub fn value(&self, x: [f64; 3]) -> crate::Result<f64> {
        let i = self.pu.owner_of(x)?;
        Ok(self.value_in(i, x))
    }

    /// Analytic gradient of `u` at `x ∈ Q_i`.
    pub fn gradient_in(&self, i: usize, x: [f64; 3]) -> [f64; 3] {
        let mut g = [0.0; 3];
        for (j, gj) in self.pu.gradient_in(i, x) {
            let w = self.averages[j] - self.averages[i];
            for a in 0..3 {
                g[a] += w * gj[a];
            }
        }
        g
    }

    fn gradient_fd_in(&self, i: usize, x: [f64; 3], delta: f64) -> [f64; 3] {
        let n = self.pu.decomposition().grid().dim();
        let mut g = [0.0; 3];
        for a in 0..n {
            let mut xp = x;
            let mut xm = x;
            xp[a] += delta;
            xm[a] -= delta;
            g[a] = (self.value_in(i, xp) - self.value_in(i, xm)) / (2.0 * delta);
        }
        g
    }

    /// `∫_{Ω ∖ collar} |∇u|^p`, with `refine` lattice points per side of the
    /// smallest cube involved at each interface.
    pub fn energy(&self, p: f64, refine: u32, mode: GradientMode) -> Energy {
        let dec = self.pu.decomposition();
        let n = dec.grid().dim();
        let a = &self.averages;
        let per_cube = crate::par::map_range(dec.len(), |i| {
            let rel: Vec<usize> = dec
                .touching(i)
                .iter()
                .map(|&j| j as usize)
                .filter(|&j| a[j] != a[i])
                .collect();
            if rel.is_empty() {
                return (0.0, 0usize, 0usize, false);
            }
            if dec.cubes()[i].truncated {
                return (0.0, 0, 0, true);
            }
            let (qlo, li) = self.pu.cube_box(i);
            let lmin = rel.iter().map(|&j| dec.side_len(j)).fold(li, f64::min);
            let m = ((li / lmin) as u64 * refine as u64).max(1) as i64;
            let s = li / m as f64;
            // lattice index boxes of the shells, clipped to Q_i
            let boxes: Vec<([i64; 3], [i64; 3])> = rel
                .iter()
                .map(|&j| {
                    let (jlo, lj) = self.pu.cube_box(j);
                    let w = SHELL * lj;
                    let mut lo = [0i64; 3];
                    let mut hi = [1i64; 3];
                    for ax in 0..n {
                        let b0 = ((jlo[ax] - w - qlo[ax]) / s).floor() as i64;
                        let b1 = ((jlo[ax] + lj + w - qlo[ax]) / s).ceil() as i64;
                        lo[ax] = b0.clamp(0, m);
                        hi[ax] = b1.clamp(0, m);
                    }
                    (lo, hi)
                })
                .collect();
            let mut sum = 0.0;
            let mut count = 0usize;
            for (bi, (lo, hi)) in boxes.iter().enumerate() {
                for z in lo[2]..hi[2] {
                    for y in lo[1]..hi[1] {
                        for x in lo[0]..hi[0] {
                            let idx = [x, y, z];
                            let dup = boxes[..bi]
                                .iter()
                                .any(|(l, h)| (0..3).all(|ax| idx[ax] >= l[ax] && idx[ax] < h[ax]));
                            if dup {
                                continue;
                            }
                            let mut pt = [0.0; 3];
                            for ax in 0..n {
                                pt[ax] = qlo[ax] + (idx[ax] as f64 + 0.5) * s;
                            }
                            let g = match mode {
                                GradientMode::Analytic => self.gradient_in(i, pt),
                                GradientMode::FiniteDifference => self.gradient_fd_in(i, pt, 0.5 * s),
                            };
                            let norm = g.iter().map(|c| c * c).sum::<f64>().sqrt();
                            if norm > 0.0 {
                                sum += norm.powf(p);
                            }
                            count += 1;
                        }
                    }
                }
            }
            (sum * s.powi(n as i32), count, 1usize, false)
        });
        let values: Vec<f64> = per_cube.iter().map(|r| r.0).collect();
        Energy {
            value: crate::par::pairwise_sum(&values),
            interface_cubes: per_cube.iter().map(|r| r.2).sum(),
            samples: per_cube.iter().map(|r| r.1).sum(),
            collar_cubes: per_cube.iter().filter(|r| r.3).count(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::domain::{build_domain, Generator};
    use crate::whitney::decompose::whitney_decompose;

    #[test]
    fn full_and_empty_sets() {
        let d = build_domain(&Generator::Ball { dim: 2, radius: 0.45 }, 6).unwrap();
        let w = whitney_decompose(&d, 6).unwrap();
        let full = SmoothedIndicator::from_mask(&w, d.occupancy());
        let empty = SmoothedIndicator::from_mask(&w, &vec![false; d.grid().len()]);
        for (i, c) in w.cubes().iter().enumerate() {
            let x = c.cube.center();
            assert_eq!(full.value_in(i, x), 1.0);
            assert_eq!(empty.value_in(i, x), 0.0);
        }
        assert_eq!(full.energy(1.5, 16, GradientMode::Analytic).value, 0.0);
    }

    #[test]
    fn finite_differences_track_analytic_energy() {
        let d = build_domain(&Generator::Cube { dim: 2 }, 6).unwrap();
        let w = whitney_decompose(&d, 6).unwrap();
        let g = d.grid();
        let f: Vec<bool> = (0..g.len()).map(|i| g.center(g.coords(i))[0] < 0.5).collect();
        let u = SmoothedIndicator::from_mask(&w, &f);
        let ea = u.energy(1.5, 64, GradientMode::Analytic).value;
        let ef = u.energy(1.5, 64, GradientMode::FiniteDifference).value;
        assert!(ea > 0.0);
        assert!((ea - ef).abs() / ea < 0.02, "{ea} {ef}");
    }

    #[test]
    fn linear_in_the_data() {
        let d = build_domain(&Generator::Ball { dim: 2, radius: 0.45 }, 6).unwrap();
        let w = whitney_decompose(&d, 6).unwrap();
        let g = d.grid();
        let v1: Vec<f64> = (0..g.len()).map(|i| (i % 7) as f64 * 0.1).collect();
        let v2: Vec<f64> = (0..g.len()).map(|i| (i % 5) as f64 * 0.3).collect();
        let comb: Vec<f64> = v1.iter().zip(&v2).map(|(a, b)| 2.5 * a + b).collect();
        let (s1, s2, sc) = (
            SmoothedIndicator::from_values(&w, &v1),
            SmoothedIndicator::from_values(&w, &v2),
            SmoothedIndicator::from_values(&w, &comb),
        );
        for (i, c) in w.cubes().iter().enumerate().step_by(3) {
            let (lo, s) = s1.partition().cube_box(i);
            let _ = c;
            let x = [lo[0] + 0.01 * s, lo[1] + 0.02 * s, 0.0];
            let lhs = sc.value_in(i, x);
            let rhs = 2.5 * s1.value_in(i, x) + s2.value_in(i, x);
            assert!((lhs - rhs).abs() < 1e-12);
        }
    }
}
