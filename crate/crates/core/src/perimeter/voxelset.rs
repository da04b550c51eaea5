//! Finite unions of grid cells.

use crate::error::{Error, Result};
use crate::geometry::domain::VoxelDomain;
use crate::grid::{interface_faces, Grid};
use crate::perimeter::faces::{BoundaryFaceSet, FaceClass};

/// A union of cells on a grid, optionally tied to a domain that contains it.
#[derive(Clone, Debug)]
pub struct VoxelSet<'a> {
    grid: Grid,
    mask: Vec<bool>,
    parent: Option<&'a VoxelDomain>,
}

/// Whether the domain contains the cell at local coordinates `c` of `grid`.
/// The two grids must share a level; cells off the domain grid are outside.
#[inline]
pub fn domain_has(dom: &VoxelDomain, grid: &Grid, c: [i64; 3]) -> bool {
    let (so, d_o) = (grid.origin(), dom.grid().origin());
    dom.contains_signed([c[0] + so[0] - d_o[0], c[1] + so[1] - d_o[1], c[2] + so[2] - d_o[2]])
}

impl<'a> VoxelSet<'a> {
    pub fn new(grid: Grid, mask: Vec<bool>) -> Result<Self> {
        if mask.len() != grid.len() {
            return Err(Error::InvalidArgument("mask length does not match grid".into()));
        }
        Ok(VoxelSet { grid, mask, parent: None })
    }

    pub fn from_predicate<F: Fn([f64; 3]) -> bool + Sync + Send>(grid: Grid, inside: F) -> Self {
        let mask = crate::geometry::domain::sample_centers(&grid, &inside);
        VoxelSet { grid, mask, parent: None }
    }

    /// A subset of `dom` on its own grid.
    pub fn in_domain(dom: &'a VoxelDomain, mask: Vec<bool>) -> Result<Self> {
        Self::new(dom.grid().clone(), mask)?.with_parent(dom)
    }

    /// Ties the set to `dom`; fails unless the set lies inside it.
    pub fn with_parent(mut self, dom: &'a VoxelDomain) -> Result<Self> {
        if dom.grid().level() != self.grid.level() || dom.dim() != self.grid.dim() {
            return Err(Error::InvalidArgument("parent grid has a different level or dimension".into()));
        }
        for (i, &b) in self.mask.iter().enumerate() {
            if b && !domain_has(dom, &self.grid, self.signed(i)) {
                return Err(Error::InvalidArgument("set is not contained in the parent domain".into()));
            }
        }
        self.parent = Some(dom);
        Ok(self)
    }

    /// The whole domain as a set.
    pub fn domain(dom: &'a VoxelDomain) -> Self {
        VoxelSet { grid: dom.grid().clone(), mask: dom.occupancy().to_vec(), parent: Some(dom) }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }
    pub fn mask(&self) -> &[bool] {
        &self.mask
    }
    pub fn parent(&self) -> Option<&'a VoxelDomain> {
        self.parent
    }
    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    fn signed(&self, i: usize) -> [i64; 3] {
        let c = self.grid.coords(i);
        [c[0] as i64, c[1] as i64, c[2] as i64]
    }

    #[inline]
    pub fn contains_signed(&self, c: [i64; 3]) -> bool {
        self.grid.index_signed(c).map(|i| self.mask[i]).unwrap_or(false)
    }

    pub fn cell_count(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn measure(&self) -> f64 {
        self.cell_count() as f64 * self.grid.cell_volume()
    }

    /// Complement within the bounding box, detached from any parent.
    pub fn complement(&self) -> VoxelSet<'static> {
        VoxelSet { grid: self.grid.clone(), mask: self.mask.iter().map(|b| !b).collect(), parent: None }
    }

    /// `Ω ∖ A` for a set with a parent on the parent's grid.
    pub fn relative_complement(&self) -> Option<VoxelSet<'a>> {
        let dom = self.parent?;
        if dom.grid() != &self.grid {
            return None;
        }
        let mask = dom.occupancy().iter().zip(&self.mask).map(|(&o, &a)| o && !a).collect();
        Some(VoxelSet { grid: self.grid.clone(), mask, parent: Some(dom) })
    }

    /// Interface faces, classified against the parent; without a parent every
    /// face counts as interior (the ambient space plays the role of `Ω`).
    pub fn boundary_faces(&self) -> BoundaryFaceSet {
        match self.parent {
            Some(dom) => self.classify(dom),
            None => {
                let faces = interface_faces(&self.grid, &self.mask);
                let class = vec![FaceClass::Interior; faces.len()];
                BoundaryFaceSet::new(self.grid.clone(), faces, class)
            }
        }
    }

    /// Interface faces classified against an arbitrary domain at the same level.
    pub fn classify(&self, dom: &VoxelDomain) -> BoundaryFaceSet {
        let faces = interface_faces(&self.grid, &self.mask);
        let class = crate::par::map(&faces, |f| {
            let a = domain_has(dom, &self.grid, f.low_cell());
            let b = domain_has(dom, &self.grid, f.high_cell());
            match (a, b) {
                (true, true) => FaceClass::Interior,
                (false, false) => FaceClass::Exterior,
                _ => FaceClass::OnBoundary,
            }
        });
        BoundaryFaceSet::new(self.grid.clone(), faces, class)
    }
}
