//! Extension of a set across `∂Ω`: `Ã = A ∪ A₀`, with the boundary
//! functional on both sides of the inequality evaluated on the grid.

use crate::error::{Error, Result};
use crate::extension::lemmas::{verify_lemma_31, verify_lemma_33};
use crate::extension::select::{select_a0, select_a_prime, Selection};
use crate::geometry::distance::{distance_transform, DistanceField};
use crate::geometry::domain::VoxelDomain;
use crate::perimeter::faces::{BoundaryFaceSet, FaceClass};
use crate::perimeter::voxelset::VoxelSet;
use crate::perimeter::weighted::{check_exponent, weighted_face_integral, FaceSide};
use crate::whitney::decompose::{exterior_whitney_embedded, whitney_decompose, WhitneyDecomposition};
use crate::whitney::smoothing::{GradientMode, SmoothedIndicator};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtensionParams {
    pub p: f64,
    /// Dilation factor of the exterior majority test.
    pub c: f64,
    /// Quadrature points per side of the smallest cube at each interface.
    pub refine: u32,
}

impl ExtensionParams {
    /// `c = 20√n`, eight quadrature points per smallest side.
    pub fn new(dim: usize, p: f64) -> Self {
        ExtensionParams { p, c: 20.0 * (dim as f64).sqrt(), refine: 8 }
    }

    pub fn validate(&self) -> Result<()> {
        check_exponent(self.p)?;
        if !(self.c >= 1.0) {
            return Err(Error::InvalidArgument(format!("dilation constant {} below 1", self.c)));
        }
        if self.refine == 0 {
            return Err(Error::InvalidArgument("refine must be positive".into()));
        }
        Ok(())
    }
}

/// Everything about `Ω` that does not depend on the set: both Whitney
/// decompositions and the distance field on the working grid.
#[derive(Clone, Debug)]
pub struct ExtensionGeometry {
    domain: VoxelDomain,
    working: VoxelDomain,
    interior: WhitneyDecomposition,
    exterior: WhitneyDecomposition,
    dist: DistanceField,
}

impl ExtensionGeometry {
    /// Uses a margin equal to the domain diameter.
    pub fn new(dom: &VoxelDomain, l_max: i32) -> Result<Self> {
        Self::with_margin(dom, l_max, dom.diameter())
    }

    pub fn with_margin(dom: &VoxelDomain, l_max: i32, margin: f64) -> Result<Self> {
        if margin < dom.diameter() {
            return Err(Error::InvalidArgument(format!(
                "margin {margin} smaller than the domain diameter {}",
                dom.diameter()
            )));
        }
        let working = dom.with_margin(margin)?;
        let interior = whitney_decompose(dom, l_max)?;
        let exterior = exterior_whitney_embedded(&working, l_max)?;
        let dist = distance_transform(&working);
        Ok(ExtensionGeometry { domain: dom.clone(), working, interior, exterior, dist })
    }

    pub fn domain(&self) -> &VoxelDomain {
        &self.domain
    }
    /// `Ω` on the enlarged grid.
    pub fn working(&self) -> &VoxelDomain {
        &self.working
    }
    pub fn interior(&self) -> &WhitneyDecomposition {
        &self.interior
    }
    pub fn exterior(&self) -> &WhitneyDecomposition {
        &self.exterior
    }
    /// Distance to `∂Ω` on the working grid.
    pub fn dist(&self) -> &DistanceField {
        &self.dist
    }

    /// Copies a mask on the domain grid into the working grid.
    pub fn embed(&self, mask: &[bool]) -> Vec<bool> {
        let (g, w) = (self.domain.grid(), self.working.grid());
        let (go, wo) = (g.origin(), w.origin());
        let mut out = vec![false; w.len()];
        for (i, &b) in mask.iter().enumerate() {
            if b {
                let c = g.coords(i);
                let mut d = [0usize; 3];
                for a in 0..3 {
                    d[a] = (c[a] as i64 + go[a] - wo[a]) as usize;
                }
                out[w.index(d)] = true;
            }
        }
        out
    }
}

/// A quotient that keeps its degenerate cases visible.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ratio {
    pub num: f64,
    pub den: f64,
    /// Outside the regime of the estimate (e.g. a constant smoothed function).
    pub degenerate: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RatioFlag {
    Finite,
    /// `0 / 0`.
    Undefined,
    /// Positive over zero.
    Violation,
    Degenerate,
}

impl Ratio {
    pub fn new(num: f64, den: f64) -> Self {
        Ratio { num, den, degenerate: false }
    }

    pub fn flag(&self) -> RatioFlag {
        if self.degenerate {
            RatioFlag::Degenerate
        } else if self.den > 0.0 {
            RatioFlag::Finite
        } else if self.num == 0.0 {
            RatioFlag::Undefined
        } else {
            RatioFlag::Violation
        }
    }

    /// NaN for `0/0`, infinite for a violation.
    pub fn value(&self) -> f64 {
        if self.den > 0.0 {
            self.num / self.den
        } else if self.num == 0.0 {
            f64::NAN
        } else {
            f64::INFINITY
        }
    }

    pub fn is_finite(&self) -> bool {
        self.flag() == RatioFlag::Finite
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InequalityReport {
    pub k: u32,
    pub p: f64,
    /// Finite part of the functional over `Ω ∩ ∂A`.
    pub rhs: f64,
    /// Interior faces of `∂A` within `h/2` of `∂Ω`.
    pub rhs_touching: f64,
    /// Finite part over faces of `∂Ã` outside `Ω̄`.
    pub lhs_exterior: f64,
    /// Finite part over faces of `∂Ã` inside `Ω`.
    pub lhs_interior: f64,
    /// Area of the faces of `∂Ã` on `∂Ω`.
    pub lhs_touching: f64,
    pub ratio: Ratio,
    pub lemma31: Ratio,
    pub lemma32: Ratio,
    pub lemma33: Ratio,
    /// `∫|∇S_W χ_{A'}|^p` over the non-collar cubes.
    pub energy: f64,
    /// The set touched `∂Ω` from inside, so `Ã = A` was used.
    pub fallback: bool,
    /// Exterior cubes dropped from the `A₀` test.
    pub flagged_cubes: usize,
}

impl InequalityReport {
    pub fn lhs_finite(&self) -> f64 {
        self.lhs_exterior + self.lhs_interior
    }

    /// Sum of the three parts of the split.
    pub fn lhs(&self) -> f64 {
        self.lhs_exterior + self.lhs_interior + self.lhs_touching
    }

    pub const CSV_HEADER: &'static str = "K,p,rhs,lhs_ext,lhs_int,lhs_touch,ratio,l31,l32,l33";

    /// One CSV row with shortest round-trip decimals.
    pub fn csv_row(&self) -> String {
        format!(
            "{},{:?},{:?},{:?},{:?},{:?},{:?},{:?},{:?},{:?}",
            self.k,
            self.p,
            self.rhs,
            self.lhs_exterior,
            self.lhs_interior,
            self.lhs_touching,
            self.ratio.value(),
            self.lemma31.value(),
            self.lemma32.value(),
            self.lemma33.value()
        )
    }
}

#[derive(Clone, Debug)]
pub struct ExtensionResult<'g> {
    /// `A`, on the domain grid.
    pub a: VoxelSet<'g>,
    /// `A'`, on the domain grid.
    pub a_prime: VoxelSet<'g>,
    /// `A₀`, on the working grid.
    pub a0: VoxelSet<'static>,
    /// `Ã`, on the working grid.
    pub a_tilde: VoxelSet<'static>,
    pub a_prime_cubes: Vec<usize>,
    pub a0_cubes: Vec<usize>,
    pub report: InequalityReport,
}

impl ExtensionResult<'_> {
    /// `Ã ∩ Ω = A`, cell by cell.
    pub fn restriction_matches(&self, geom: &ExtensionGeometry) -> bool {
        let emb = geom.embed(self.a.mask());
        let omega = geom.working().occupancy();
        self.a_tilde
            .mask()
            .iter()
            .zip(omega)
            .zip(&emb)
            .all(|((&t, &o), &a)| !o || t == a)
    }
}

/// `Ã = A ∪ A₀` with the full inequality report.
pub fn extend_set<'g>(geom: &'g ExtensionGeometry, a: &VoxelSet, params: &ExtensionParams) -> Result<ExtensionResult<'g>> {
    params.validate()?;
    let dom = geom.domain();
    if a.grid() != dom.grid() {
        return Err(Error::InvalidArgument("set must live on the domain grid".into()));
    }
    let a = VoxelSet::in_domain(dom, a.mask().to_vec())?;
    let p = params.p;
    let dist = geom.dist();

    let a_faces = a.boundary_faces();
    let rhs_w = weighted_face_integral(&a_faces, p, dist, FaceSide::Interior)?;
    let rhs_touching = {
        let idx: Vec<usize> = (0..a_faces.len()).filter(|&i| a_faces.classes()[i] == FaceClass::Interior).collect();
        let only = BoundaryFaceSet::new(
            a_faces.grid().clone(),
            idx.iter().map(|&i| a_faces.faces()[i]).collect(),
            vec![FaceClass::Interior; idx.len()],
        );
        let w = weighted_face_integral(&only, p, dist, FaceSide::Interior)?;
        if w.touching_faces > 0 {
            w.touching
        } else {
            0.0
        }
    };
    let fallback = rhs_touching > 0.0;

    let sel_prime: Selection = select_a_prime(a.mask(), geom.interior());
    let a_prime = VoxelSet::in_domain(dom, sel_prime.mask.clone())?;
    let sel0 = if fallback {
        Selection { mask: vec![false; geom.working().grid().len()], cubes: Vec::new(), flagged: Vec::new() }
    } else {
        select_a0(&sel_prime.mask, dom.occupancy(), dom.grid(), geom.exterior(), params.c)
    };
    let wg = geom.working().grid().clone();
    let a0 = VoxelSet::new(wg.clone(), sel0.mask.clone())?;
    let mut tilde = geom.embed(a.mask());
    for (t, &b) in tilde.iter_mut().zip(&sel0.mask) {
        *t |= b;
    }
    let a_tilde = VoxelSet::new(wg, tilde)?;

    let t_faces = a_tilde.classify(geom.working());
    let mut ext = 0.0;
    let mut int = 0.0;
    for (side, slot) in [(FaceSide::Exterior, &mut ext), (FaceSide::Interior, &mut int)] {
        *slot = weighted_face_integral(&t_faces, p, dist, side)?.finite;
    }
    let lhs_touching = t_faces.area(FaceClass::OnBoundary);

    let lemma31 = verify_lemma_31(&a, &a_prime, p, dist)?;
    let u = SmoothedIndicator::from_mask(geom.interior(), &sel_prime.mask);
    let energy = u.energy(p, params.refine, GradientMode::FiniteDifference).value;
    let lemma32 = Ratio::new(energy, lemma31.num);
    let lemma33 = verify_lemma_33(&a0, geom.working(), &u, p, dist, params.refine)?;

    let report = InequalityReport {
        k: dom.grid().level(),
        p,
        rhs: rhs_w.finite,
        rhs_touching,
        lhs_exterior: ext,
        lhs_interior: int,
        lhs_touching,
        ratio: Ratio::new(ext + int, rhs_w.finite),
        lemma31,
        lemma32,
        lemma33,
        energy,
        fallback,
        flagged_cubes: sel0.flagged.len(),
    };
    Ok(ExtensionResult {
        a,
        a_prime,
        a0,
        a_tilde,
        a_prime_cubes: sel_prime.cubes,
        a0_cubes: sel0.cubes,
        report,
    })
}
