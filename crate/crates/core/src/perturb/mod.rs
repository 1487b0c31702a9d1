//! Corrections of single matrices onto exact structure: projections,
//! partial isometries, conjugating unitaries, block-diagonal ranges and
//! block upper-triangular partial isometries.
//!
//! Every correction returns the corrected matrix with a
//! [`CorrectionCertificate`]. Failed hypotheses abort with
//! [`Error::DefectTooLarge`](crate::Error::DefectTooLarge) naming the stage.

mod certificate;
mod isometry;
mod projection;
mod triangular;

pub use certificate::{CorrectionCertificate, StageMeasurement};
pub use isometry::fix_partial_isometry;
pub use projection::{check_rank_stability, conjugating_unitary, round_to_projection};
pub(crate) use projection::spectral_round;
pub use triangular::{align_block_diagonal_range, block_triangularize, frame_triangularize, triangularize_unchecked};
pub(crate) use triangular::round_blocks;
