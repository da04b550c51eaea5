//! The singular boundary functional `∫_{∂A} dist(z, ∂Ω)^{1-p} dH^{n-1}`.
//!
//! Faces with positive centroid distance contribute `dist^{1-p} h^{n-1}` to
//! the finite part. Faces within `h/2` of `∂Ω` carry infinite weight in the
//! continuum and are tallied separately as the touching mass.

use crate::error::{Error, Result};
use crate::geometry::distance::DistanceField;
use crate::perimeter::faces::{BoundaryFaceSet, FaceClass};
use crate::perimeter::voxelset::VoxelSet;

/// Which faces of a classified boundary enter the integral.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FaceSide {
    /// Faces in `Ω` and on `∂Ω`.
    Interior,
    /// Faces outside `Ω̄` and on `∂Ω`.
    Exterior,
    All,
}

impl FaceSide {
    fn admits(self, c: FaceClass) -> bool {
        match self {
            FaceSide::Interior => c != FaceClass::Exterior,
            FaceSide::Exterior => c != FaceClass::Interior,
            FaceSide::All => true,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct WeightedIntegral {
    pub finite: f64,
    pub touching: f64,
    pub finite_faces: usize,
    pub touching_faces: usize,
}

impl WeightedIntegral {
    /// Whether any face sits on `∂Ω`.
    pub fn touches(&self) -> bool {
        self.touching_faces > 0
    }
}

pub fn check_exponent(p: f64) -> Result<()> {
    if p > 1.0 && p < 2.0 {
        Ok(())
    } else {
        Err(Error::UnsupportedExponent(p))
    }
}

/// Half-grid coordinates of a face centroid in the frame of `dist`.
fn half_in(dist: &DistanceField, faces: &BoundaryFaceSet, i: usize) -> Option<[usize; 3]> {
    let (fg, dg) = (faces.grid(), dist.grid());
    let local = faces.faces()[i].half(fg);
    let (fo, d_o) = (fg.origin(), dg.origin());
    let hd = dg.half_dims();
    let mut out = [0usize; 3];
    for a in 0..fg.dim() {
        let v = local[a] as i64 + 2 * (fo[a] - d_o[a]);
        if v < 0 || v >= hd[a] as i64 {
            return None;
        }
        out[a] = v as usize;
    }
    Some(out)
}

/// The functional over a classified face set. `dist` may live on any grid
/// of the same level that covers every admitted face.
pub fn weighted_face_integral(
    faces: &BoundaryFaceSet,
    p: f64,
    dist: &DistanceField,
    side: FaceSide,
) -> Result<WeightedIntegral> {
    check_exponent(p)?;
    if faces.grid().level() != dist.grid().level() {
        return Err(Error::InvalidArgument("distance field has a different level".into()));
    }
    let h = faces.grid().h();
    let area = faces.face_area();
    let idx: Vec<usize> = (0..faces.len()).filter(|&i| side.admits(faces.classes()[i])).collect();
    let vals = crate::par::map(&idx, |&i| half_in(dist, faces, i).map(|hc| dist.dist_half(hc)));
    let mut finite = Vec::with_capacity(vals.len());
    let mut touching_faces = 0;
    for v in vals {
        let d = v.ok_or_else(|| Error::InvalidArgument("face outside the distance field".into()))?;
        if d > 0.0 {
            finite.push(d.powf(1.0 - p) * area);
        }
        if d <= 0.5 * h {
            touching_faces += 1;
        }
    }
    Ok(WeightedIntegral {
        finite: crate::par::pairwise_sum(&finite),
        finite_faces: finite.len(),
        touching: touching_faces as f64 * area,
        touching_faces,
    })
}

/// The functional over `∂A`, classified against the parent of `a`.
pub fn weighted_boundary_integral(
    a: &VoxelSet,
    p: f64,
    dist: &DistanceField,
    side: FaceSide,
) -> Result<WeightedIntegral> {
    check_exponent(p)?;
    weighted_face_integral(&a.boundary_faces(), p, dist, side)
}
