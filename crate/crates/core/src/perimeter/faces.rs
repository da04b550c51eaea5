//! Classified boundary faces and the discrete perimeter.

use crate::geometry::domain::VoxelDomain;
use crate::grid::{Grid, GridFace};
use crate::perimeter::voxelset::{domain_has, VoxelSet};

/// Position of a face of `∂A` relative to a domain `Ω`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FaceClass {
    /// Both adjacent cells lie in `Ω`.
    Interior,
    /// Neither adjacent cell lies in `Ω`.
    Exterior,
    /// The face is also a face of `∂Ω`.
    OnBoundary,
}

#[derive(Clone, Debug)]
pub struct BoundaryFaceSet {
    grid: Grid,
    faces: Vec<GridFace>,
    class: Vec<FaceClass>,
}

impl BoundaryFaceSet {
    pub fn new(grid: Grid, faces: Vec<GridFace>, class: Vec<FaceClass>) -> Self {
        assert_eq!(faces.len(), class.len());
        BoundaryFaceSet { grid, faces, class }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }
    pub fn faces(&self) -> &[GridFace] {
        &self.faces
    }
    pub fn classes(&self) -> &[FaceClass] {
        &self.class
    }
    pub fn len(&self) -> usize {
        self.faces.len()
    }
    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }
    pub fn face_area(&self) -> f64 {
        self.grid.face_area()
    }

    pub fn centroid(&self, i: usize) -> [f64; 3] {
        self.faces[i].centroid(&self.grid)
    }

    pub fn total_area(&self) -> f64 {
        self.len() as f64 * self.face_area()
    }

    pub fn count(&self, class: FaceClass) -> usize {
        self.class.iter().filter(|&&c| c == class).count()
    }

    pub fn area(&self, class: FaceClass) -> f64 {
        self.count(class) as f64 * self.face_area()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GridFace, FaceClass)> {
        self.faces.iter().zip(self.class.iter().copied())
    }
}

/// Where the perimeter is measured.
#[derive(Clone, Copy, Debug)]
pub enum Region<'r> {
    /// All of `ℝⁿ`.
    Whole,
    /// Open domain: faces with both adjacent cells in `Ω`.
    Domain(&'r VoxelDomain),
    /// Faces with centroid in the open ball.
    Ball { center: [f64; 3], radius: f64 },
    /// `B(x, r) ∩ Ω`.
    BallInDomain { center: [f64; 3], radius: f64, domain: &'r VoxelDomain },
}

fn in_ball(p: [f64; 3], c: [f64; 3], r: f64) -> bool {
    (0..3).map(|a| (p[a] - c[a]).powi(2)).sum::<f64>() < r * r
}

/// Number of faces of `∂A` inside `region`.
pub fn perimeter_faces(a: &VoxelSet, region: Region) -> usize {
    let g = a.grid();
    let faces = crate::grid::interface_faces(g, a.mask());
    let inside = |f: &GridFace| -> bool {
        match region {
            Region::Whole => true,
            Region::Domain(d) => domain_has(d, g, f.low_cell()) && domain_has(d, g, f.high_cell()),
            Region::Ball { center, radius } => in_ball(f.centroid(g), center, radius),
            Region::BallInDomain { center, radius, domain } => {
                in_ball(f.centroid(g), center, radius)
                    && domain_has(domain, g, f.low_cell())
                    && domain_has(domain, g, f.high_cell())
            }
        }
    };
    crate::par::map(&faces, inside).into_iter().filter(|&b| b).count()
}

/// `P(A, region)`: total area of the interface faces inside `region`.
pub fn perimeter(a: &VoxelSet, region: Region) -> f64 {
    perimeter_faces(a, region) as f64 * a.grid().face_area()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::domain::{build_domain, Generator};
    use crate::grid::Grid;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn full_box_and_half_square() {
        for dim in [2, 3] {
            let g = Grid::unit(dim, 4).unwrap();
            let a = VoxelSet::new(g.clone(), vec![true; g.len()]).unwrap();
            assert_eq!(perimeter(&a, Region::Whole), 2.0 * dim as f64);
        }
        let dom = build_domain(&Generator::Cube { dim: 2 }, 6).unwrap();
        let g = dom.grid().clone();
        let mask: Vec<bool> = (0..g.len()).map(|i| g.center(g.coords(i))[1] < 0.5).collect();
        let a = VoxelSet::in_domain(&dom, mask).unwrap();
        assert_eq!(perimeter(&a, Region::Domain(&dom)), 1.0);
        assert_eq!(perimeter(&a, Region::Whole), 3.0);
        let fs = a.boundary_faces();
        assert_eq!(fs.area(FaceClass::Interior), 1.0);
        assert_eq!(fs.area(FaceClass::OnBoundary), 2.0);
        assert_eq!(fs.count(FaceClass::Exterior), 0);
        assert!(fs
            .iter()
            .filter(|(_, c)| *c == FaceClass::Interior)
            .all(|(f, _)| f.centroid(&g)[1] == 0.5));
    }

    #[test]
    fn faces_match_neighbor_scan() {
        let g = Grid::unit(2, 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mask: Vec<bool> = (0..g.len()).map(|_| rng.gen_bool(0.5)).collect();
        let a = VoxelSet::new(g.clone(), mask.clone()).unwrap();
        let mut brute = 0;
        for y in -1..=32i64 {
            for x in -1..=32i64 {
                let here = a.contains_signed([x, y, 0]);
                brute += (here != a.contains_signed([x + 1, y, 0])) as usize;
                brute += (here != a.contains_signed([x, y + 1, 0])) as usize;
            }
        }
        assert_eq!(a.boundary_faces().len(), brute);
        let inner = |s: &VoxelSet| -> Vec<GridFace> {
            let fs = s.boundary_faces();
            let mut v: Vec<GridFace> = fs
                .faces()
                .iter()
                .copied()
                .filter(|f| g.index_signed(f.low_cell()).is_some() && g.index_signed(f.high_cell()).is_some())
                .collect();
            v.sort();
            v
        };
        assert_eq!(inner(&a), inner(&a.complement()));
    }
}
