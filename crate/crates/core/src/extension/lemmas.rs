//! Numeric checks of the four estimates behind the extension inequality.

use crate::error::{Error, Result};
use crate::extension::extend::{ExtensionGeometry, ExtensionResult, Ratio};
use crate::geometry::distance::DistanceField;
use crate::geometry::domain::VoxelDomain;
use crate::perimeter::density::{density_profile, DensityBase};
use crate::perimeter::voxelset::VoxelSet;
use crate::perimeter::weighted::{weighted_boundary_integral, weighted_face_integral, FaceSide};
use crate::whitney::decompose::WhitneyDecomposition;
use crate::whitney::smoothing::{GradientMode, SmoothedIndicator};

/// `J_p(Ω ∩ ∂A') / J_p(Ω ∩ ∂A)`. Both sets need the domain as parent.
pub fn verify_lemma_31(a: &VoxelSet, a_prime: &VoxelSet, p: f64, dist: &DistanceField) -> Result<Ratio> {
    if a.parent().is_none() || a_prime.parent().is_none() {
        return Err(Error::InvalidArgument("both sets need a parent domain".into()));
    }
    let num = weighted_boundary_integral(a_prime, p, dist, FaceSide::Interior)?.finite;
    let den = weighted_boundary_integral(a, p, dist, FaceSide::Interior)?.finite;
    Ok(Ratio::new(num, den))
}

/// `‖∇S_W χ_F‖_p^p / J_p(Ω ∩ ∂F)` for a union `F` of cubes of `dec`,
/// given by cube ids. The energy uses finite differences.
pub fn verify_lemma_32(
    dec: &WhitneyDecomposition,
    dom: &VoxelDomain,
    cubes: &[usize],
    p: f64,
    dist: &DistanceField,
    refine: u32,
) -> Result<Ratio> {
    if dec.grid() != dom.grid() {
        return Err(Error::InvalidArgument("decomposition and domain grids differ".into()));
    }
    let mut chosen = vec![false; dec.len()];
    for &i in cubes {
        *chosen.get_mut(i).ok_or_else(|| Error::InvalidArgument(format!("no cube {i}")))? = true;
    }
    let mask: Vec<bool> = dec
        .owner()
        .iter()
        .map(|&o| o != crate::whitney::decompose::NO_OWNER && chosen[o as usize])
        .collect();
    let f = VoxelSet::in_domain(dom, mask)?;
    let den = weighted_boundary_integral(&f, p, dist, FaceSide::Interior)?.finite;
    let num = SmoothedIndicator::from_mask(dec, f.mask()).energy(p, refine, GradientMode::FiniteDifference).value;
    Ok(Ratio::new(num, den))
}

/// `J_p(∂A₀ ∖ Ω̄) / ‖∇u‖_p^p` with `u = S_W χ_{A'}`. `a0` is classified
/// against `working`, which is `Ω` on the grid of `a0`. A constant `u`
/// is reported as degenerate.
pub fn verify_lemma_33(
    a0: &VoxelSet,
    working: &VoxelDomain,
    u: &SmoothedIndicator,
    p: f64,
    dist: &DistanceField,
    refine: u32,
) -> Result<Ratio> {
    let faces = a0.classify(working);
    let num = weighted_face_integral(&faces, p, dist, FaceSide::Exterior)?.finite;
    let den = u.energy(p, refine, GradientMode::FiniteDifference).value;
    let av = u.averages();
    let constant = av.iter().all(|&v| v == 1.0);
    Ok(Ratio { num, den, degenerate: constant && !av.is_empty() })
}

/// Density dichotomy check at sampled boundary points.
#[derive(Clone, Debug, PartialEq)]
pub struct Lemma34Table {
    pub delta: f64,
    /// Decreasing radii.
    pub radii: Vec<f64>,
    pub samples: usize,
    /// Fraction of samples with density in `(δ, 1-δ)`, per radius.
    pub bad_a_prime: Vec<f64>,
    pub bad_a: Vec<f64>,
    pub bad_tilde: Vec<f64>,
}

impl Lemma34Table {
    /// Bad fractions at the smallest radius: `(A', A, Ã)`.
    pub fn finest(&self) -> (f64, f64, f64) {
        let last = |v: &[f64]| v.last().copied().unwrap_or(0.0);
        (last(&self.bad_a_prime), last(&self.bad_a), last(&self.bad_tilde))
    }
}

/// Up to `max_samples` evenly spaced centroids of boundary faces of `Ω`.
pub fn boundary_samples(dom: &VoxelDomain, max_samples: usize) -> Vec<[f64; 3]> {
    let faces = dom.boundary_faces();
    if faces.is_empty() || max_samples == 0 {
        return Vec::new();
    }
    let step = faces.len().div_ceil(max_samples).max(1);
    faces.iter().step_by(step).map(|f| f.centroid(dom.grid())).collect()
}

/// Dyadic radii `2^{-j}` from `1/2` down to `2h`.
pub fn dyadic_radii(level: u32) -> Vec<f64> {
    (1..level).map(|j| (-(j as f64)).exp2()).collect()
}

/// Densities of `A'` and `A` relative to `Ω` and of `Ã` in the full ball.
pub fn verify_lemma_34(
    geom: &ExtensionGeometry,
    res: &ExtensionResult,
    samples: &[[f64; 3]],
    radii: &[f64],
    delta: f64,
) -> Result<Lemma34Table> {
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::InvalidArgument(format!("delta {delta} outside (0, 1/2)")));
    }
    let mut rs = radii.to_vec();
    rs.sort_by(|p, q| q.total_cmp(p));
    let dom = geom.domain();
    let nr = rs.len();
    let profiles = crate::par::map(samples, |&x| -> Result<[Vec<f64>; 3]> {
        let ap = density_profile(&res.a_prime, x, &rs, DensityBase::Domain(dom))?.ratios;
        let a = density_profile(&res.a, x, &rs, DensityBase::Domain(dom))?.ratios;
        let t = density_profile(&res.a_tilde, x, &rs, DensityBase::Whole)?.ratios;
        Ok([ap, a, t])
    });
    let mut bad = [vec![0usize; nr], vec![0usize; nr], vec![0usize; nr]];
    for pr in profiles {
        let pr = pr?;
        for s in 0..3 {
            for (j, &v) in pr[s].iter().enumerate() {
                if v > delta && v < 1.0 - delta {
                    bad[s][j] += 1;
                }
            }
        }
    }
    let n = samples.len().max(1) as f64;
    let frac = |v: &[usize]| v.iter().map(|&c| c as f64 / n).collect::<Vec<_>>();
    Ok(Lemma34Table {
        delta,
        radii: rs,
        samples: samples.len(),
        bad_a_prime: frac(&bad[0]),
        bad_a: frac(&bad[1]),
        bad_tilde: frac(&bad[2]),
    })
}
