//! Finite-dimensional operator-algebra structures and the defect measures
//! the corrections are gated on.

mod composition;
mod distance;
mod masa;
mod pattern;
mod units;

pub use composition::BlockComposition;
pub(crate) use composition::{offsets, subdiagonal_norm, zero_subdiagonal};
pub use distance::{
    arveson_distance, containment_defect, expectation, masa_distance, normalizer_defect, pattern_distance,
    DefectReport, DistanceEstimate, GeneratorDefect, MasaDistance,
};
pub use masa::MasaPartition;
pub use pattern::IncidencePattern;
pub use units::{
    matrix_unit_residual, random_near_identity_embedding, random_near_identity_unitary, MatrixUnitSystem,
    StarEmbedding,
};

/// The block upper-triangular pattern of a composition.
pub fn nest_pattern(comp: &BlockComposition) -> IncidencePattern {
    IncidencePattern::nest(comp)
}
