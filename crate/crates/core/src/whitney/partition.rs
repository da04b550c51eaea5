//! Partition of unity subordinate to a Whitney decomposition.
//!
//! Each cube carries the plateau bump `φ_i(x) = g(dist(x, Q_i) / (ℓ_i/16))`
//! with the C¹ cubic `g(t) = 1 - 3t² + 2t³` on `[0,1]` and `g = 0` beyond,
//! and `ψ_i = φ_i / Σ_j φ_j`. On `½Q_i` only `φ_i` is nonzero, so `ψ_i = 1`
//! there exactly.

use crate::error::{Error, Result};
use crate::whitney::decompose::{WhitneyDecomposition, NO_OWNER};

/// Relative width of the bump shell beyond each cube.
pub const SHELL: f64 = 1.0 / 16.0;

#[derive(Clone, Copy, Debug)]
pub struct PartitionOfUnity<'a> {
    dec: &'a WhitneyDecomposition,
}

#[inline]
fn profile(t: f64) -> (f64, f64) {
    if t <= 0.0 {
        (1.0, 0.0)
    } else if t >= 1.0 {
        (0.0, 0.0)
    } else {
        (1.0 - 3.0 * t * t + 2.0 * t * t * t, -6.0 * t + 6.0 * t * t)
    }
}

impl<'a> PartitionOfUnity<'a> {
    pub fn new(dec: &'a WhitneyDecomposition) -> Self {
        PartitionOfUnity { dec }
    }

    pub fn decomposition(&self) -> &'a WhitneyDecomposition {
        self.dec
    }

    /// Absolute lower corner and side of cube `i`.
    #[inline]
    pub fn cube_box(&self, i: usize) -> ([f64; 3], f64) {
        let c = &self.dec.cubes()[i].cube;
        (c.lower(), c.side())
    }

    /// `φ_i(x)` and its gradient.
    pub fn bump(&self, i: usize, x: [f64; 3]) -> (f64, [f64; 3]) {
        let n = self.dec.grid().dim();
        let (lo, s) = self.cube_box(i);
        let mut diff = [0.0; 3];
        let mut d2 = 0.0;
        for a in 0..n {
            let hi = lo[a] + s;
            diff[a] = if x[a] < lo[a] {
                x[a] - lo[a]
            } else if x[a] > hi {
                x[a] - hi
            } else {
                0.0
            };
            d2 += diff[a] * diff[a];
        }
        if d2 == 0.0 {
            return (1.0, [0.0; 3]);
        }
        let w = SHELL * s;
        let d = d2.sqrt();
        let (v, dv) = profile(d / w);
        let mut grad = [0.0; 3];
        if dv != 0.0 {
            for a in 0..n {
                grad[a] = dv / w * diff[a] / d;
            }
        }
        (v, grad)
    }

    /// Cube owning the cell that contains `x`.
    pub fn owner_of(&self, x: [f64; 3]) -> Result<usize> {
        let g = self.dec.grid();
        let c = g
            .cell_at(x)
            .ok_or_else(|| Error::InvalidArgument("point outside the grid".into()))?;
        let o = self.dec.owner()[g.index(c)];
        if o == NO_OWNER {
            return Err(Error::InvalidArgument("point outside the decomposed region".into()));
        }
        if self.dec.cubes()[o as usize].truncated {
            return Err(Error::CollarPoint);
        }
        Ok(o as usize)
    }

    /// Candidate cubes whose supports may contain points of `Q_i`.
    #[inline]
    pub fn candidates(&self, i: usize) -> impl Iterator<Item = usize> + 'a {
        std::iter::once(i).chain(self.dec.touching(i).iter().map(|&j| j as usize))
    }

    /// `(j, ψ_j(x))` for all nonzero `ψ_j`, with `x ∈ Q_i`.
    pub fn evaluate_in(&self, i: usize, x: [f64; 3]) -> Vec<(usize, f64)> {
        let mut vals: Vec<(usize, f64)> = self
            .candidates(i)
            .map(|j| (j, self.bump(j, x).0))
            .filter(|&(_, v)| v > 0.0)
            .collect();
        let total: f64 = vals.iter().map(|&(_, v)| v).sum();
        for v in vals.iter_mut() {
            v.1 /= total;
        }
        vals.sort_by_key(|&(j, _)| j);
        vals
    }

    /// Nonzero values `(cube id, ψ_i(x))`.
    pub fn evaluate(&self, x: [f64; 3]) -> Result<Vec<(usize, f64)>> {
        let i = self.owner_of(x)?;
        Ok(self.evaluate_in(i, x))
    }

    /// `ψ_j(x)` for a single cube.
    pub fn psi(&self, j: usize, x: [f64; 3]) -> Result<f64> {
        Ok(self.evaluate(x)?.into_iter().find(|&(k, _)| k == j).map(|(_, v)| v).unwrap_or(0.0))
    }

    /// Analytic gradients `(j, ∇ψ_j(x))`, with `x ∈ Q_i`.
    pub fn gradient_in(&self, i: usize, x: [f64; 3]) -> Vec<(usize, [f64; 3])> {
        let bumps: Vec<(usize, f64, [f64; 3])> = self
            .candidates(i)
            .map(|j| {
                let (v, g) = self.bump(j, x);
                (j, v, g)
            })
            .filter(|&(_, v, g)| v > 0.0 || g.iter().any(|&c| c != 0.0))
            .collect();
        let s: f64 = bumps.iter().map(|b| b.1).sum();
        let mut gs = [0.0; 3];
        for b in &bumps {
            for a in 0..3 {
                gs[a] += b.2[a];
            }
        }
        let mut out: Vec<(usize, [f64; 3])> = bumps
            .iter()
            .map(|&(j, v, g)| {
                let mut r = [0.0; 3];
                for a in 0..3 {
                    r[a] = (g[a] * s - v * gs[a]) / (s * s);
                }
                (j, r)
            })
            .collect();
        out.sort_by_key(|&(j, _)| j);
        out
    }

    /// Central-difference gradient of `ψ_j` at `x` with step `delta`.
    pub fn gradient_fd(&self, j: usize, x: [f64; 3], delta: f64) -> Result<[f64; 3]> {
        let n = self.dec.grid().dim();
        let mut g = [0.0; 3];
        for a in 0..n {
            let mut xp = x;
            let mut xm = x;
            xp[a] += delta;
            xm[a] -= delta;
            g[a] = (self.psi(j, xp)? - self.psi(j, xm)?) / (2.0 * delta);
        }
        Ok(g)
    }

    /// `max_j |∇ψ_j(x)| ℓ_j` by central differences over the given points;
    /// points whose stencil leaves the covered region are skipped.
    pub fn measure_gradient_constant(&self, points: &[[f64; 3]]) -> f64 {
        let vals = crate::par::map(points, |&x| {
            let Ok(i) = self.owner_of(x) else { return 0.0 };
            let mut best: f64 = 0.0;
            for (j, _) in self.evaluate_in(i, x) {
                let l = self.dec.side_len(j);
                let delta = 1e-4 * l.min(self.dec.side_len(i));
                if let Ok(g) = self.gradient_fd(j, x, delta) {
                    let norm = g.iter().map(|c| c * c).sum::<f64>().sqrt();
                    best = best.max(norm * l);
                }
            }
            best
        });
        vals.into_iter().fold(0.0, f64::max)
    }
}
