//! Extension of subsets of `Ω` to subsets of the whole space, with the
//! weighted perimeter inequality and its lemmas measured on the grid.

pub mod extend;
pub mod lemmas;
pub mod select;

pub use extend::{
    extend_set, ExtensionGeometry, ExtensionParams, ExtensionResult, InequalityReport, Ratio, RatioFlag,
};
pub use lemmas::{
    boundary_samples, dyadic_radii, verify_lemma_31, verify_lemma_32, verify_lemma_33, verify_lemma_34,
    Lemma34Table,
};
pub use select::{select_a0, select_a_prime, Selection};
