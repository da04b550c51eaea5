//! Dyadic cubes, voxel domains, distance transforms and test geometries.

pub mod cantor;
pub mod cantor_voxel;
pub mod distance;
pub mod domain;
pub mod dyadic;
pub mod voxd;

pub use cantor::{build_cantor_tube, CantorCube, CantorTubeSpec, TubeCurve};
pub use distance::{distance_transform, DistanceField};
pub use domain::{build_cantor_window, build_domain, Generator, VoxelDomain};
pub use dyadic::{DyadicCube, IntBox};
pub use voxd::{read_voxd, write_voxd};
