//! Regular embeddings: correction of approximate masa normalizers, masa
//! refinement, and synthesis of regular star-extendible embeddings of
//! digraph algebras from spanning-tree data.
//!
//! The ambient masa is the full diagonal; the masas of the source and
//! target algebras are partitions refining it.

mod normalizer;
mod words;

use std::collections::BTreeMap;

use serde::Serialize;

pub use normalizer::{
    approx_projection_transport, fix_normalizer, masa_containment, transfer_normalizer, Refinement,
    TransportedProjections, NORMALIZER_GATE,
};
pub use words::{tree_words, TreeWords};

use crate::algebra::{
    containment_defect, matrix_unit_residual, normalizer_defect, IncidencePattern, MasaPartition, MatrixUnitSystem,
    StarEmbedding,
};
use crate::error::{Error, Result};
use crate::numkernel::CMatrix;
use crate::perturb::CorrectionCertificate;
use crate::tolerances::TOL;

/// Gate on the distance between a diagonal unit and its matched masa cell.
pub const VERTEX_GATE: f64 = 0.25;

fn is_masa_projection(p: &CMatrix, masa: &MasaPartition, tol: f64) -> bool {
    p.projection_residual() <= tol && masa.contains(p, tol)
}

/// Regular star-extendible embedding of the reference system's pattern
/// into the target, generated by exact normalizer edge images.
///
/// `edges[k]` is the image of the k-th edge of [`tree_words`] on the
/// reference pattern and `diagonal[i]` the C₂ projection standing for e_ii.
/// The certificate's input defect is δ, the largest distance of an edge or
/// diagonal image from the reference, and its claimed bound is n₁·δ.
pub fn synthesize_regular_embedding(
    reference: &MatrixUnitSystem,
    edges: &[CMatrix],
    diagonal: &[CMatrix],
    target: &IncidencePattern,
    target_masa: &MasaPartition,
) -> Result<(StarEmbedding, CorrectionCertificate)> {
    let n = reference.ambient_dim();
    if target.dim() != n || target_masa.dim() != n {
        return Err(Error::dims((n, n), (target.dim(), target_masa.dim())));
    }
    let tol = TOL.struct_tol(n);
    let words = tree_words(reference.pattern());
    let n1 = reference.pattern().dim();
    if edges.len() != words.tree_edges.len() || diagonal.len() != n1 {
        return Err(Error::Invalid(format!(
            "expected {} edge images and {n1} diagonal projections",
            words.tree_edges.len()
        )));
    }
    for (i, p) in diagonal.iter().enumerate() {
        p.ensure_shape((n, n))?;
        if !is_masa_projection(p, target_masa, tol) {
            return Err(Error::Invalid(format!("diagonal image {} is not a masa projection", i + 1)));
        }
    }
    let mut delta: f64 = 0.0;
    for (i, p) in diagonal.iter().enumerate() {
        delta = delta.max(p.dist(reference.unit(i, i)));
    }
    for (&(a, b), v) in words.tree_edges.iter().zip(edges) {
        v.ensure_shape((n, n))?;
        if let Some(pair) = target.first_violation(v) {
            return Err(Error::SupportMismatch { pair });
        }
        let regular = normalizer_defect(v, target_masa)?.max(v.pisometry_defect());
        if regular > tol {
            return Err(Error::FrameMismatch {
                edge: (a, b),
                detail: format!("edge image is not a normalizer of the target masa (defect {regular:.3e})"),
            });
        }
        let initial = v.adjoint_mul(v).dist(&diagonal[b]);
        let terminal = v.mul_adjoint(v).dist(&diagonal[a]);
        if initial > tol || terminal > tol {
            return Err(Error::FrameMismatch {
                edge: (a, b),
                detail: format!("initial projection off by {initial:.3e}, final projection off by {terminal:.3e}"),
            });
        }
        delta = delta.max(v.dist(reference.unit(a, b)));
    }

    let mut units = BTreeMap::new();
    let mut distance: f64 = 0.0;
    for (i, j) in reference.pattern().pairs() {
        let f = words.evaluate(i, j, edges, diagonal)?;
        if let Some(pair) = target.first_violation(&f) {
            return Err(Error::SupportMismatch { pair });
        }
        let regular = normalizer_defect(&f, target_masa)?;
        if regular > tol {
            return Err(Error::too_large("regularity", regular, tol));
        }
        distance = distance.max(f.dist(reference.unit(i, j)));
        units.insert((i, j), f);
    }
    let psi = MatrixUnitSystem::new(reference.pattern().clone(), n, units)?;
    let residual = matrix_unit_residual(&psi);
    if residual > tol {
        return Err(Error::too_large("matrix-units", residual, tol));
    }
    let slack = tol + n1 as f64 * matrix_unit_residual(reference);
    let cert = CorrectionCertificate::new(delta, distance, residual).with_bound(n1 as f64 * delta + slack);
    Ok((StarEmbedding::new(psi), cert))
}

/// Measurements of one run of [`regular_stabilize`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegularReport {
    /// Containment defect of φ₁'s units in A₂ (an upper bound unless A₂
    /// is a nest).
    pub input_defect: f64,
    /// Source masa cell matched to each vertex.
    pub vertex_cells: Vec<usize>,
    /// max ‖φ₁(e_ii) − f_ii‖.
    pub vertex_distance: f64,
    /// ‖φ₁(e) − f_e‖ for each tree edge.
    pub edge_distances: Vec<f64>,
    pub tree_edges: Vec<(usize, usize)>,
    /// Certificate of the synthesis stage.
    pub certificate: CorrectionCertificate,
}

/// Regular star-extendible embedding of φ₁'s source algebra into (A₂, C₂)
/// near φ₁, whose units map the source masa onto cells of C₁.
///
/// Stages: C₁ ⊆ C₂ is verified; each vertex is matched to the C₁ cell of
/// largest overlap; every tree edge image is moved into N_{C₂}(A₂); the
/// remaining units are generated by words.
pub fn regular_stabilize(
    phi1: &StarEmbedding,
    source_masa: &MasaPartition,
    target: &IncidencePattern,
    target_masa: &MasaPartition,
) -> Result<(StarEmbedding, RegularReport)> {
    let sys = phi1.images();
    let n = sys.ambient_dim();
    for d in [source_masa.dim(), target.dim(), target_masa.dim()] {
        if d != n {
            return Err(Error::dims((n, n), (d, d)));
        }
    }
    let input_defect = containment_defect(sys, target)?.value;
    let refinement = masa_containment(source_masa, target_masa)?;

    let n1 = sys.pattern().dim();
    let mut vertex_cells = Vec::with_capacity(n1);
    let mut diagonal = Vec::with_capacity(n1);
    let mut vertex_distance: f64 = 0.0;
    for i in 0..n1 {
        let g = sys.unit(i, i);
        let overlap = |c: usize| source_masa.cells()[c].iter().map(|&k| g[(k, k)].re).sum::<f64>();
        let cell = (0..source_masa.cells().len())
            .max_by(|&a, &b| overlap(a).total_cmp(&overlap(b)).then(b.cmp(&a)))
            .expect("masa has cells");
        if vertex_cells.contains(&cell) {
            return Err(Error::too_large("vertex-match", 1.0, VERTEX_GATE));
        }
        let f = target_masa.union_projection(refinement.parts[cell].iter().copied());
        let d = f.dist(g);
        if d >= VERTEX_GATE {
            return Err(Error::too_large("vertex-match", d, VERTEX_GATE));
        }
        vertex_distance = vertex_distance.max(d);
        vertex_cells.push(cell);
        diagonal.push(f);
    }

    let words = tree_words(sys.pattern());
    let mut edges = Vec::with_capacity(words.tree_edges.len());
    let mut edge_distances = Vec::with_capacity(words.tree_edges.len());
    for (k, &(a, b)) in words.tree_edges.iter().enumerate() {
        let (v, _) = transfer_normalizer(sys.unit(a, b), target, target_masa).map_err(|e| match e {
            Error::DefectTooLarge { stage, defect, limit } => {
                Error::too_large(format!("edge{k}:{stage}"), defect, limit)
            }
            other => other,
        })?;
        edge_distances.push(v.dist(sys.unit(a, b)));
        edges.push(v);
    }
    let (psi, certificate) = synthesize_regular_embedding(sys, &edges, &diagonal, target, target_masa)?;
    let report = RegularReport {
        input_defect,
        vertex_cells,
        vertex_distance,
        edge_distances,
        tree_edges: words.tree_edges,
        certificate,
    };
    Ok((psi, report))
}
