//! Capacity-type lower bound on a single cube: a function that is `<= 0` on
//! a `δ` fraction of `Q` and `>= 1` on another `δ` fraction has
//! `∫_Q |∇f|^p >= C δ^{(n-p)/n} ℓ(Q)^{n-p}`.

use crate::error::{Error, Result};

/// Samples of a function at the centers of an `m^n` lattice over a cube.
#[derive(Clone, Debug)]
pub struct CubeFunction {
    pub dim: usize,
    pub side: f64,
    pub m: usize,
    pub values: Vec<f64>,
}

impl CubeFunction {
    /// Samples `f` (in coordinates relative to the lower corner) at lattice centers.
    pub fn sample<F: Fn([f64; 3]) -> f64>(dim: usize, side: f64, m: usize, f: F) -> Self {
        let hz = if dim == 3 { m } else { 1 };
        let step = side / m as f64;
        let mut values = Vec::with_capacity(m * m * hz);
        for z in 0..hz {
            for y in 0..m {
                for x in 0..m {
                    let zc = if dim == 3 { (z as f64 + 0.5) * step } else { 0.0 };
                    values.push(f([(x as f64 + 0.5) * step, (y as f64 + 0.5) * step, zc]));
                }
            }
        }
        CubeFunction { dim, side, m, values }
    }

    fn at(&self, x: usize, y: usize, z: usize) -> f64 {
        self.values[x + self.m * (y + self.m * z)]
    }

    /// `∫_Q |∇f|^p` from forward differences on the staggered lattice.
    pub fn gradient_energy(&self, p: f64) -> f64 {
        let m = self.m;
        let step = self.side / m as f64;
        let hz = if self.dim == 3 { m } else { 1 };
        let mut vals = Vec::with_capacity(self.values.len());
        for z in 0..hz {
            for y in 0..m {
                for x in 0..m {
                    let v = self.at(x, y, z);
                    let dx = if x + 1 < m { self.at(x + 1, y, z) - v } else { 0.0 };
                    let dy = if y + 1 < m { self.at(x, y + 1, z) - v } else { 0.0 };
                    let dz = if self.dim == 3 && z + 1 < m { self.at(x, y, z + 1) - v } else { 0.0 };
                    let g = (dx * dx + dy * dy + dz * dz).sqrt() / step;
                    vals.push(g.powf(p));
                }
            }
        }
        crate::par::pairwise_sum(&vals) * step.powi(self.dim as i32)
    }

    /// Fractions of the cube where `f <= 0` and where `f >= 1`.
    pub fn level_fractions(&self) -> (f64, f64) {
        let total = self.values.len() as f64;
        let lo = self.values.iter().filter(|&&v| v <= 0.0).count() as f64 / total;
        let hi = self.values.iter().filter(|&&v| v >= 1.0).count() as f64 / total;
        (lo, hi)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CapacityResult {
    pub energy: f64,
    pub ratio: f64,
    pub pass: bool,
}

/// Returns `∫|∇f|^p / (δ^{(n-p)/n} ℓ^{n-p})` and whether it reaches `floor`.
pub fn capacity_check(f: &CubeFunction, delta: f64, p: f64, floor: f64) -> Result<CapacityResult> {
    if !(p >= 1.0) || !(delta > 0.0 && delta < 0.5) {
        return Err(Error::InvalidArgument(format!("need p >= 1 and 0 < δ < 1/2, got p={p}, δ={delta}")));
    }
    let (lo, hi) = f.level_fractions();
    if lo.min(hi) <= delta {
        return Err(Error::PreconditionNotMet(format!(
            "level-set fractions {lo:.4} and {hi:.4} do not both exceed δ = {delta}"
        )));
    }
    let n = f.dim as f64;
    let energy = f.gradient_energy(p);
    let ratio = energy / (delta.powf((n - p) / n) * f.side.powf(n - p));
    Ok(CapacityResult { energy, ratio, pass: ratio >= floor })
}
