//! Constructive perturbation of structured matrices.
//!
//! Each correction takes a matrix that nearly satisfies a structural
//! identity (projection, partial isometry, block upper-triangularity,
//! masa normalization, containment in a digraph algebra) and returns a
//! nearby matrix satisfying it exactly, together with a
//! [`CorrectionCertificate`](perturb::CorrectionCertificate) recording the
//! input defect, the distance moved and the residual left over.
//!
//! Layers, bottom to top:
//!
//! - [`numkernel`]: dense complex matrices, operator norm, Jacobi eigen and
//!   singular value decompositions, polar decomposition.
//! - [`algebra`]: block compositions, incidence patterns, masa partitions,
//!   matrix unit systems and the defect measures.
//! - [`perturb`]: single-matrix corrections.
//! - [`stability`]: exact embeddings recovered from approximate nest algebra
//!   inclusions.
//! - [`regular`]: normalizer repair and regular embeddings of digraph
//!   algebras.
//! - [`tower`]: finite towers of regular inclusions and chain recovery.
//! - [`harness`]: seeded experiments, CSV results and the command surface
//!   behind the `perturba` binary.

pub mod algebra;
pub mod error;
pub mod harness;
pub mod numkernel;
pub mod perturb;
pub mod regular;
pub mod stability;
pub mod tolerances;
pub mod tower;

pub use error::{Error, Result};
pub use numkernel::{CMatrix, C64};
pub use tolerances::{Tolerances, TOL};

#[cfg(test)]
pub(crate) mod testutil;
