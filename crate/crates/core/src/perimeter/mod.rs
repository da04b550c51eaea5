//! Voxel sets of finite perimeter: boundaries, perimeters, the singular
//! boundary functional, isoperimetric ratios, densities and planar loops.

pub mod density;
pub mod faces;
pub mod isoperimetric;
pub mod loops;
pub mod voxelset;
pub mod weighted;

pub use density::{cantor_density_profile, density_profile, CantorDensity, DensityBase, DensityProfile};
pub use faces::{perimeter, BoundaryFaceSet, FaceClass, Region};
pub use isoperimetric::{isoperimetric_check, IsoContext, IsoRatio};
pub use loops::{jordan_loops, JordanLoop};
pub use voxelset::VoxelSet;
pub use weighted::{weighted_boundary_integral, weighted_face_integral, FaceSide, WeightedIntegral};
