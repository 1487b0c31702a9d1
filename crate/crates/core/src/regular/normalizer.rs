use serde::Serialize;

use crate::algebra::{expectation, normalizer_defect, pattern_distance, IncidencePattern, MasaPartition};
use crate::error::{Error, Result};
use crate::numkernel::{CMatrix, C64, ZERO};
use crate::perturb::CorrectionCertificate;
use crate::tolerances::TOL;

/// Rounding ceiling shared by the normalizer corrections.
pub const NORMALIZER_GATE: f64 = 0.25;

/// Exact masa projections near w*pw and wpw*.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportedProjections {
    /// Near w*·p·w.
    pub initial: CMatrix,
    /// Near w·p·w*.
    pub terminal: CMatrix,
    pub initial_residual: f64,
    pub terminal_residual: f64,
}

/// Union of the cells whose mean diagonal entry in `b` exceeds 1/2.
fn round_to_cells(b: &CMatrix, masa: &MasaPartition) -> CMatrix {
    let keep = (0..masa.cells().len()).filter(|&c| {
        let cell = &masa.cells()[c];
        let mean = cell.iter().map(|&i| b[(i, i)].re).sum::<f64>() / cell.len() as f64;
        mean > 0.5
    });
    masa.union_projection(keep.collect::<Vec<_>>())
}

fn normalizer_defects(v: &CMatrix, masa: &MasaPartition) -> Result<f64> {
    Ok(v.pisometry_defect().max(normalizer_defect(v, masa)?))
}

/// Moves a masa projection p through an approximate normalizer w: the
/// expectations of w*pw and wpw* are rounded to unions of masa cells.
pub fn approx_projection_transport(w: &CMatrix, p: &CMatrix, masa: &MasaPartition) -> Result<TransportedProjections> {
    let n = masa.dim();
    w.ensure_shape((n, n))?;
    p.ensure_shape((n, n))?;
    let tol = TOL.struct_tol(n);
    let residual = p.projection_residual();
    if residual > tol {
        return Err(Error::NotProjection { residual });
    }
    if !masa.contains(p, tol) {
        return Err(Error::Invalid("projection does not lie in the masa".into()));
    }
    let eps = normalizer_defects(w, masa)?;
    if eps >= NORMALIZER_GATE {
        return Err(Error::too_large("transport", eps, NORMALIZER_GATE));
    }
    let mut out = Vec::with_capacity(2);
    for x in [w.adjoint_mul(p).matmul(w), w.matmul(p).mul_adjoint(w)] {
        let b = expectation(&x, masa)?.hermitian_part();
        let delta = (&b.matmul(&b) - &b).norm();
        if delta >= NORMALIZER_GATE {
            return Err(Error::too_large("transport-rounding", delta, NORMALIZER_GATE));
        }
        let q = round_to_cells(&b, masa);
        let r = x.dist(&q);
        out.push((q, r));
    }
    let (terminal, terminal_residual) = out.pop().expect("two projections");
    let (initial, initial_residual) = out.pop().expect("two projections");
    Ok(TransportedProjections {
        initial,
        terminal,
        initial_residual,
        terminal_residual,
    })
}

/// Exact normalizer of the masa inside the pattern's span, near an
/// approximate normalizer v.
///
/// The support S = {(i, j) : |v_ij| > 1/2} gives v₁ = Σ_S e_ij; with
/// d = E(v₁*v) the output is v₁·d′, where d′_kk = d_kk/|d_kk| when
/// |d_kk| > 1/2 and 0 otherwise.
pub fn fix_normalizer(
    v: &CMatrix,
    pattern: &IncidencePattern,
    masa: &MasaPartition,
) -> Result<(CMatrix, CorrectionCertificate)> {
    let n = masa.dim();
    v.ensure_shape((n, n))?;
    v.ensure_finite()?;
    if pattern.dim() != n {
        return Err(Error::dims((n, n), (pattern.dim(), pattern.dim())));
    }
    let eps = normalizer_defects(v, masa)?;
    if eps >= NORMALIZER_GATE {
        return Err(Error::too_large("normalizer", eps, NORMALIZER_GATE));
    }

    let mut row_owner: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut col_owner: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut v1 = CMatrix::zeros(n, n);
    let mut support = 0;
    for i in 0..n {
        for j in 0..n {
            if v[(i, j)].norm() <= 0.5 {
                continue;
            }
            if let Some(first) = row_owner[i].or(col_owner[j]) {
                return Err(Error::AmbiguousSupport { first, second: (i, j) });
            }
            if !pattern.contains(i, j) {
                return Err(Error::too_large("normalizer-pattern", v[(i, j)].norm(), 0.5));
            }
            row_owner[i] = Some((i, j));
            col_owner[j] = Some((i, j));
            v1[(i, j)] = C64::new(1.0, 0.0);
            support += 1;
        }
    }
    let d = expectation(&v1.adjoint_mul(v), masa)?;
    let phases: Vec<C64> = (0..n)
        .map(|k| {
            let x = d[(k, k)];
            if x.norm() > 0.5 {
                x / x.norm()
            } else {
                ZERO
            }
        })
        .collect();
    let vhat = v1.matmul(&CMatrix::from_diag(&phases));

    let residual = normalizer_defects(&vhat, masa)?;
    if residual > TOL.struct_tol(n) {
        return Err(Error::too_large("normalizer-cells", residual, TOL.struct_tol(n)));
    }
    let cert = CorrectionCertificate::new(eps, v.dist(&vhat), residual).with_stage("support", support as f64);
    Ok((vhat, cert))
}

/// Refinement of one masa by another.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Refinement {
    /// For each cell of the coarse masa, the cells of the fine masa
    /// partitioning it.
    pub parts: Vec<Vec<usize>>,
}

/// Checks C₁ ⊆ C₂, i.e. that every cell of C₂ lies inside a cell of C₁.
pub fn masa_containment(c1: &MasaPartition, c2: &MasaPartition) -> Result<Refinement> {
    if c1.dim() != c2.dim() {
        return Err(Error::dims((c1.dim(), c1.dim()), (c2.dim(), c2.dim())));
    }
    let mut parts = vec![Vec::new(); c1.cells().len()];
    for (k, cell) in c2.cells().iter().enumerate() {
        let owner = c1.cell_of(cell[0]);
        if cell.iter().any(|&i| c1.cell_of(i) != owner) {
            return Err(Error::NotRefined {
                cell: cell.iter().map(|i| i + 1).collect(),
            });
        }
        parts[owner].push(k);
    }
    Ok(Refinement { parts })
}

/// Exact normalizer of C₂ in A₂ near v: v is truncated to A₂'s pattern and
/// the truncation is corrected by [`fix_normalizer`].
///
/// v itself need only approximately normalize the masa.
pub fn transfer_normalizer(
    v: &CMatrix,
    pattern: &IncidencePattern,
    masa: &MasaPartition,
) -> Result<(CMatrix, CorrectionCertificate)> {
    let n = masa.dim();
    v.ensure_shape((n, n))?;
    if pattern.dim() != n {
        return Err(Error::dims((n, n), (pattern.dim(), pattern.dim())));
    }
    let containment = pattern_distance(v, pattern)?.value;
    if containment >= NORMALIZER_GATE {
        return Err(Error::too_large("transfer", containment, NORMALIZER_GATE));
    }
    let w = pattern.truncate(v);
    let (what, inner) = fix_normalizer(&w, pattern, masa)?;
    let mut cert = CorrectionCertificate::new(containment, v.dist(&what), inner.structural_residual)
        .with_stage("truncation", v.dist(&w))
        .with_stage("normalizer-defect", inner.input_defect);
    cert.stages.extend(inner.stages);
    Ok((what, cert))
}
