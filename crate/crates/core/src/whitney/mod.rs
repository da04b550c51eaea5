//! Whitney decompositions, the partition of unity and the smoothing operator.

pub mod audit;
pub mod capacity;
pub mod decompose;
pub mod export;
pub mod partition;
pub mod smoothing;

pub use audit::{audit, AuditReport};
pub use decompose::{exterior_whitney, exterior_whitney_embedded, whitney_decompose, Side, WhitneyCube, WhitneyDecomposition};
pub use partition::PartitionOfUnity;
pub use smoothing::SmoothedIndicator;
