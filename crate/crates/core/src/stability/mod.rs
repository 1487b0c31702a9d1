//! Perturbation of an approximate inclusion of one nest algebra in another
//! to an exact star-extendible embedding.
//!
//! The pipeline has three stages. The self-adjoint part of the source is
//! moved into the block-diagonal part of the target by spectral rounding,
//! conjugation and polar decomposition. One edge unit between consecutive
//! source blocks is then lifted into the target by truncation, compression
//! and block triangularization. Finally every remaining unit is generated
//! as the unique word through the edges.

use serde::Serialize;

use crate::algebra::{
    arveson_distance, containment_defect, matrix_unit_residual, offsets, BlockComposition, IncidencePattern,
    MatrixUnitSystem, StarEmbedding,
};
use crate::error::{Error, Result};
use crate::numkernel::{polar_svd, CMatrix};
use crate::perturb::{conjugating_unitary, frame_triangularize, round_blocks, spectral_round, CorrectionCertificate};
use crate::tolerances::TOL;

/// Gate on the self-adjoint containment defect.
pub const SELFADJOINT_GATE: f64 = 0.125;

/// Error of the units between one pair of source blocks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockError {
    /// Positions (k, l), k ≤ l, of the source blocks in the chain.
    pub blocks: (usize, usize),
    /// max ‖φ₁(e_ij) − ψ(e_ij)‖ over i in block k, j in block l.
    pub distance: f64,
    /// 2·(self-adjoint stage max) + (edge word error) + slack.
    pub bound: f64,
}

/// Measurements of one run of [`stabilize_nest_inclusion`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    /// Containment defect of φ₁'s units in the target nest.
    pub input_defect: f64,
    /// Matrix-unit residual of φ₁.
    pub input_residual: f64,
    pub selfadjoint_defect: f64,
    /// max ‖φ₁(e_ij) − ψ(e_ij)‖ over the self-adjoint units.
    pub selfadjoint_distance: f64,
    /// ‖φ₁(e) − ψ(e)‖ for each tree edge, in chain order.
    pub edge_distances: Vec<f64>,
    pub block_errors: Vec<BlockError>,
    /// max ‖φ₁(e_ij) − ψ(e_ij)‖ over all units.
    pub distance: f64,
    /// Matrix-unit residual of ψ.
    pub unit_residual: f64,
}

impl StabilityReport {
    pub fn block_bound_holds(&self) -> bool {
        self.block_errors.iter().all(|b| b.distance <= b.bound)
    }

    pub fn certificate(&self) -> CorrectionCertificate {
        let mut cert = CorrectionCertificate::new(self.input_defect, self.distance, self.unit_residual)
            .with_stage("selfadjoint-defect", self.selfadjoint_defect)
            .with_stage("selfadjoint-distance", self.selfadjoint_distance);
        for (k, d) in self.edge_distances.iter().enumerate() {
            cert = cert.with_stage(format!("edge@{k}"), *d);
        }
        cert
    }
}

/// Zeroes every entry outside the diagonal blocks.
fn block_diagonal_part(x: &CMatrix, sizes: &[usize]) -> CMatrix {
    let offs = offsets(sizes);
    let mut out = CMatrix::zeros(x.rows(), x.cols());
    for b in 0..sizes.len() {
        let (s, e) = (offs[b], offs[b + 1]);
        out.set_submatrix(s, s, &x.submatrix(s, e, s, e));
    }
    out
}

/// Polar isometric part of every diagonal block; off-diagonal blocks are
/// zero.
fn blockwise_polar(x: &CMatrix, sizes: &[usize]) -> CMatrix {
    let offs = offsets(sizes);
    let mut out = CMatrix::zeros(x.rows(), x.cols());
    for b in 0..sizes.len() {
        let (s, e) = (offs[b], offs[b + 1]);
        out.set_submatrix(s, s, &polar_svd(&x.submatrix(s, e, s, e)).isometric_part);
    }
    out
}

/// The source pattern's classes in chain order.
fn source_chain(pattern: &IncidencePattern) -> Result<Vec<Vec<usize>>> {
    pattern
        .as_nest()
        .ok_or_else(|| Error::Invalid("source pattern is not a nest".into()))
}

fn check_ambient(sys: &MatrixUnitSystem, target: &BlockComposition) -> Result<()> {
    let n = target.total();
    if sys.ambient_dim() != n {
        return Err(Error::dims((n, n), (sys.ambient_dim(), sys.ambient_dim())));
    }
    Ok(())
}

/// Self-adjoint units (i, j) of a system: both (i, j) and (j, i) present.
fn selfadjoint_pairs(pattern: &IncidencePattern) -> impl Iterator<Item = (usize, usize)> + '_ {
    pattern.pairs().filter(|&(i, j)| pattern.contains(j, i))
}

/// Defect of the self-adjoint units of `sys` in the block-diagonal part of
/// the target nest, measured as max(dist(g, A₂), dist(g*, A₂)) by Arveson's
/// formula.
///
/// This is a lower bound for the distance to A₂ ∩ A₂*, exact for two-block
/// targets.
pub fn selfadjoint_containment_check(sys: &MatrixUnitSystem, target: &BlockComposition) -> Result<f64> {
    check_ambient(sys, target)?;
    let mut worst: f64 = 0.0;
    for (i, j) in selfadjoint_pairs(sys.pattern()) {
        let g = sys.unit(i, j);
        worst = worst
            .max(arveson_distance(g, target)?)
            .max(arveson_distance(&g.adjoint(), target)?);
    }
    Ok(worst)
}

struct SelfAdjointStage {
    units: MatrixUnitSystem,
    defect: f64,
    distance: f64,
}

fn selfadjoint_stage(sys: &MatrixUnitSystem, target: &BlockComposition) -> Result<SelfAdjointStage> {
    let defect = selfadjoint_containment_check(sys, target)?;
    if defect >= SELFADJOINT_GATE {
        return Err(Error::too_large("selfadjoint-containment", defect, SELFADJOINT_GATE));
    }
    let n = target.total();
    let sizes = target.sizes();
    let dim = sys.pattern().dim();
    let id = CMatrix::identity(n);

    // Orthogonal block-diagonal projections, rounded in ascending order.
    let mut used = CMatrix::zeros(n, n);
    let mut q = Vec::with_capacity(dim);
    let mut u = Vec::with_capacity(dim);
    for i in 0..dim {
        let g = sys.unit(i, i).hermitian_part();
        let r = &id - &used;
        let b = r.matmul(&block_diagonal_part(&g, sizes)).matmul(&r).hermitian_part();
        let delta = (&b.matmul(&b) - &b).norm();
        if delta >= 0.25 {
            return Err(Error::too_large("selfadjoint-projection", delta, 0.25));
        }
        let qi = round_blocks(&b, sizes)?;
        let (ui, _) = conjugating_unitary(&spectral_round(&g)?, &qi)?;
        used = &used + &qi;
        q.push(qi);
        u.push(ui);
    }

    let pattern = IncidencePattern::new(dim, selfadjoint_pairs(sys.pattern()).collect::<Vec<_>>())?;
    let mut units = std::collections::BTreeMap::new();
    for class in sys.pattern().classes() {
        let a = class[0];
        let mut to_first = vec![None; dim];
        to_first[a] = Some(q[a].clone());
        for &i in &class[1..] {
            let moved = u[i].matmul(sys.unit(i, a)).mul_adjoint(&u[a]);
            let c = q[i].matmul(&block_diagonal_part(&moved, sizes)).matmul(&q[a]);
            let gap = c
                .adjoint_mul(&c)
                .dist(&q[a])
                .max(c.mul_adjoint(&c).dist(&q[i]));
            if gap >= 1.0 {
                return Err(Error::too_large("selfadjoint-units", gap, 1.0));
            }
            to_first[i] = Some(blockwise_polar(&c, sizes));
        }
        for &i in &class {
            for &j in &class {
                let f = if i == j {
                    q[i].clone()
                } else {
                    let fi = to_first[i].as_ref().expect("class member");
                    let fj = to_first[j].as_ref().expect("class member");
                    fi.mul_adjoint(fj)
                };
                units.insert((i, j), f);
            }
        }
    }
    let units = MatrixUnitSystem::new(pattern, n, units)?;
    let distance = units
        .units()
        .map(|(&(i, j), f)| f.dist(sys.unit(i, j)))
        .fold(0.0, f64::max);
    Ok(SelfAdjointStage {
        units,
        defect,
        distance,
    })
}

/// Exact matrix units for the self-adjoint part of `sys`, block diagonal in
/// the target nest.
///
/// Diagonal units are pinched to the target's diagonal blocks, orthogonalized
/// in ascending order and rounded to projections q_i. Each unit f_ia from the
/// first index a of its class is the blockwise polar part of
/// q_i·E(u_i g_ia u_a*)·q_a, where u_i conjugates the rounding of g_ii onto
/// q_i; the rest of the class is f_ij = f_ia f_ja*.
pub fn selfadjoint_matrix_units(sys: &MatrixUnitSystem, target: &BlockComposition) -> Result<MatrixUnitSystem> {
    Ok(selfadjoint_stage(sys, target)?.units)
}

fn rank_of_projection(p: &CMatrix) -> usize {
    p.trace().re.round().max(0.0) as usize
}

/// Partial isometry v in the target nest with v*v = fpp and vv* = fqq, near
/// an edge image mapping ran fpp to ran fqq.
///
/// The image is truncated to the nest, compressed to fqq·b₁·fpp, replaced by
/// its polar part and triangularized inside the frame (fqq, fpp).
pub fn lift_tree_edge(
    e_img: &CMatrix,
    fpp: &CMatrix,
    fqq: &CMatrix,
    target: &BlockComposition,
) -> Result<(CMatrix, CorrectionCertificate)> {
    let n = target.total();
    for x in [e_img, fpp, fqq] {
        x.ensure_shape((n, n))?;
        x.ensure_finite()?;
    }
    let (rp, rq) = (rank_of_projection(fpp), rank_of_projection(fqq));
    if rp != rq {
        return Err(Error::RankMismatch { left: rp, right: rq });
    }
    let nest = IncidencePattern::nest(target);
    let b1 = nest.truncate(e_img);
    let b = fqq.matmul(&b1).matmul(fpp);
    let compression = b.adjoint_mul(&b).dist(fpp);
    if compression >= 1.0 {
        return Err(Error::CompressionSingular { defect: compression });
    }
    let bhat = polar_svd(&b).isometric_part;
    let (v, inner) = frame_triangularize(&bhat, target, fqq, fpp)?;
    let residual = v.adjoint_mul(&v).dist(fpp).max(v.mul_adjoint(&v).dist(fqq));
    let mut cert = CorrectionCertificate::new(nest.truncation_distance(e_img), e_img.dist(&v), residual)
        .with_stage("compression", compression)
        .with_stage("polar", b.dist(&bhat));
    cert.stages.extend(inner.stages);
    Ok((v, cert))
}

/// Exact star-extendible embedding ψ of the source nest into the target
/// nest, near φ₁.
///
/// Fails with [`Error::DefectTooLarge`] naming the stage whose rounding
/// hypothesis does not hold.
pub fn stabilize_nest_inclusion(
    phi1: &StarEmbedding,
    target: &BlockComposition,
) -> Result<(StarEmbedding, StabilityReport)> {
    let sys = phi1.images();
    check_ambient(sys, target)?;
    let n = target.total();
    let tol = TOL.struct_tol(n);
    let chain = source_chain(sys.pattern())?;
    let nest = IncidencePattern::nest(target);
    let input_defect = containment_defect(sys, &nest)?.value;
    let input_residual = matrix_unit_residual(sys);

    let sa = selfadjoint_stage(sys, target)?;
    let f = |i: usize, j: usize| sa.units.unit(i, j);

    let first: Vec<usize> = chain.iter().map(|c| c[0]).collect();
    let mut edges = Vec::with_capacity(chain.len().saturating_sub(1));
    let mut edge_distances = Vec::with_capacity(edges.capacity());
    for k in 0..chain.len().saturating_sub(1) {
        let (a, b) = (first[k], first[k + 1]);
        let (v, _) = lift_tree_edge(sys.unit(a, b), f(b, b), f(a, a), target).map_err(|e| match e {
            Error::DefectTooLarge { stage, defect, limit } => {
                Error::too_large(format!("edge{k}:{stage}"), defect, limit)
            }
            other => other,
        })?;
        edge_distances.push(sys.unit(a, b).dist(&v));
        edges.push(v);
    }

    // words[k][l] = v_k ⋯ v_{l−1}, the unit from first[l] to first[k].
    let r = chain.len();
    let mut words: Vec<Vec<Option<CMatrix>>> = vec![vec![None; r]; r];
    for k in 0..r {
        let mut w = f(first[k], first[k]).clone();
        words[k][k] = Some(w.clone());
        for l in k + 1..r {
            w = w.matmul(&edges[l - 1]);
            words[k][l] = Some(w.clone());
        }
    }

    let mut units = std::collections::BTreeMap::new();
    let mut block_errors = Vec::new();
    for k in 0..r {
        for l in k..r {
            let word = words[k][l].as_ref().expect("filled above");
            let edge_error = sys.unit(first[k], first[l]).dist(word);
            let mut distance: f64 = 0.0;
            for &i in &chain[k] {
                for &j in &chain[l] {
                    let fij = if k == l {
                        f(i, j).clone()
                    } else {
                        f(i, first[k]).matmul(word).matmul(f(first[l], j))
                    };
                    distance = distance.max(fij.dist(sys.unit(i, j)));
                    units.insert((i, j), fij);
                }
            }
            let slack = tol + 3.0 * input_residual;
            block_errors.push(BlockError {
                blocks: (k, l),
                distance,
                bound: 2.0 * sa.distance + if k == l { 0.0 } else { edge_error } + slack,
            });
        }
    }
    let psi = MatrixUnitSystem::new(sys.pattern().clone(), n, units)?;
    let unit_residual = matrix_unit_residual(&psi);
    if unit_residual > tol {
        return Err(Error::too_large("matrix-units", unit_residual, tol));
    }
    for (_, g) in psi.units() {
        if let Some((i, j)) = nest.first_violation(g) {
            let value = g[(i, j)].norm();
            return Err(Error::too_large("target-pattern", value, 0.0));
        }
    }
    let distance = psi.distance(sys)?;
    let report = StabilityReport {
        input_defect,
        input_residual,
        selfadjoint_defect: sa.defect,
        selfadjoint_distance: sa.distance,
        edge_distances,
        block_errors,
        distance,
        unit_residual,
    };
    Ok((StarEmbedding::new(psi), report))
}
