use super::isometry::fix_partial_isometry_at;
use super::projection::{conjugating_unitary, spectral_round};
use super::CorrectionCertificate;
use crate::algebra::{offsets, subdiagonal_norm, zero_subdiagonal, BlockComposition};
use crate::error::{Error, Result};
use crate::numkernel::{herm_eig, CMatrix, ZERO};
use crate::tolerances::TOL;

/// Norm of the off-block-diagonal part of a square matrix.
pub(crate) fn off_block_diagonal(x: &CMatrix, sizes: &[usize]) -> f64 {
    let offs = offsets(sizes);
    let n = x.rows();
    let mut y = x.clone();
    for b in 0..sizes.len() {
        for i in offs[b]..offs[b + 1] {
            for j in offs[b]..offs[b + 1] {
                y[(i, j)] = ZERO;
            }
        }
    }
    debug_assert_eq!(n, offs[sizes.len()]);
    y.norm()
}

/// Spectral rounding of every diagonal block; off-diagonal blocks are zero.
pub(crate) fn round_blocks(x: &CMatrix, sizes: &[usize]) -> Result<CMatrix> {
    let offs = offsets(sizes);
    let mut out = CMatrix::zeros(x.rows(), x.cols());
    for b in 0..sizes.len() {
        let (s, e) = (offs[b], offs[b + 1]);
        if s < e {
            out.set_submatrix(s, s, &spectral_round(&x.submatrix(s, e, s, e))?);
        }
    }
    Ok(out)
}

/// Moves the final projection of a partial isometry v near w onto the
/// nearest block-diagonal projection: w̄ = u·v with u conjugating vv* to
/// its blockwise spectral rounding.
pub fn align_block_diagonal_range(
    w: &CMatrix,
    comp: &BlockComposition,
    v: &CMatrix,
) -> Result<(CMatrix, CorrectionCertificate)> {
    let n = comp.total();
    if w.rows() != n {
        return Err(Error::dims((n, w.cols()), w.shape()));
    }
    v.ensure_shape(w.shape())?;
    align_rows(w, comp.sizes(), v)
}

pub(crate) fn align_rows(w: &CMatrix, row_sizes: &[usize], v: &CMatrix) -> Result<(CMatrix, CorrectionCertificate)> {
    let eps1 = w.dist(v);
    if v.rows() == 0 || v.cols() == 0 {
        return Ok((v.clone(), CorrectionCertificate::new(eps1, eps1, 0.0).with_bound(eps1)));
    }
    let p_prime = v.mul_adjoint(v).hermitian_part();
    let p = round_blocks(&p_prime, row_sizes)?;
    let tilt = p.dist(&p_prime);
    let (u, _) = conjugating_unitary(&p_prime, &p)?;
    let wbar = u.matmul(v);
    let range = wbar.mul_adjoint(&wbar);
    let residual = range
        .projection_residual()
        .max(off_block_diagonal(&range, row_sizes));
    let cert = CorrectionCertificate::new(eps1, w.dist(&wbar), residual)
        .with_bound(eps1 + std::f64::consts::SQRT_2 * tilt)
        .with_stage("range-tilt", tilt);
    Ok((wbar, cert))
}

/// Per-level measurements of the recursion.
struct Trace {
    r: usize,
    eps: f64,
    levels: Vec<(usize, f64, f64, f64)>,
}

/// Block upper-triangular partial isometry near a partial isometry v whose
/// final projection is block diagonal.
///
/// The first block row is split off, the lower-right corner is rounded to a
/// partial isometry with block-diagonal range and triangularized
/// recursively, and the first row is then compressed orthogonally to the
/// corner's initial space and rounded again. Sub-diagonal blocks of the
/// output are exactly zero.
pub fn block_triangularize(v: &CMatrix, comp: &BlockComposition) -> Result<(CMatrix, CorrectionCertificate)> {
    let n = comp.total();
    v.ensure_shape((n, n))?;
    v.ensure_finite()?;
    let tol = TOL.struct_tol(n);
    let defect = v.pisometry_defect();
    if defect > tol {
        return Err(Error::NotPartialIsometry { residual: defect });
    }
    let range = v.mul_adjoint(v);
    let off = off_block_diagonal(&range, comp.sizes());
    if off > tol {
        return Err(Error::too_large("block-diagonal-range", off, tol));
    }
    triangularize_rect(v, comp.sizes(), comp.sizes())
}

/// The same recursion without checking that v is a partial isometry with
/// block-diagonal final projection. Intermediate hypotheses are still
/// gated; the result is only a measurement.
pub fn triangularize_unchecked(v: &CMatrix, comp: &BlockComposition) -> Result<(CMatrix, CorrectionCertificate)> {
    let n = comp.total();
    v.ensure_shape((n, n))?;
    triangularize_rect(v, comp.sizes(), comp.sizes())
}

/// Recursion on a rectangular matrix with separate row and column
/// partitions of equal length; block sizes may be zero.
pub(crate) fn triangularize_rect(
    v: &CMatrix,
    row_sizes: &[usize],
    col_sizes: &[usize],
) -> Result<(CMatrix, CorrectionCertificate)> {
    assert_eq!(row_sizes.len(), col_sizes.len(), "partitions must have equal length");
    let mut trace = Trace {
        r: row_sizes.len(),
        eps: subdiagonal_norm(v, row_sizes, col_sizes),
        levels: Vec::new(),
    };
    let mut vhat = recurse(v, row_sizes, col_sizes, 0, &mut trace)?;
    zero_subdiagonal(&mut vhat, row_sizes, col_sizes);
    let n = v.rows().max(v.cols()).max(1);
    let residual = if vhat.is_empty() {
        0.0
    } else {
        vhat.adjoint_mul(&vhat)
            .projection_residual()
            .max(vhat.mul_adjoint(&vhat).projection_residual())
    };
    let mut cert = CorrectionCertificate::new(trace.eps, v.dist(&vhat), residual);
    if let Some(&(_, d1, d2, d3)) = trace.levels.first() {
        let bound = 2.0 * (trace.r as f64 - 1.0) * trace.eps + 2.0 * d1 + 2.0 * d2 + d3;
        cert = cert.with_bound(bound);
    } else {
        cert = cert.with_bound(0.0);
    }
    for &(depth, d1, d2, d3) in &trace.levels {
        cert = cert
            .with_stage(format!("delta1@{depth}"), d1)
            .with_stage(format!("delta2@{depth}"), d2)
            .with_stage(format!("delta3@{depth}"), d3);
    }
    let _ = n;
    Ok((vhat, cert))
}

fn recurse(v: &CMatrix, rows: &[usize], cols: &[usize], depth: usize, trace: &mut Trace) -> Result<CMatrix> {
    if rows.len() <= 1 {
        return Ok(v.clone());
    }
    let (m, n) = v.shape();
    let (h1, k1) = (rows[0], cols[0]);
    let w1 = v.submatrix(0, h1, 0, n);
    let w2 = v.submatrix(h1, m, 0, n);
    let corner = w2.submatrix(0, m - h1, k1, n);

    let (rounded, _) = fix_partial_isometry_at(&corner, &format!("triangularize-corner@depth{depth}"))?;
    let (aligned, _) = align_rows(&corner, &rows[1..], &rounded)?;
    let d1 = corner.dist(&aligned);
    let tri = recurse(&aligned, &rows[1..], &cols[1..], depth + 1, trace)?;
    let d2 = aligned.dist(&tri);

    let mut w2p = CMatrix::zeros(m - h1, n);
    w2p.set_submatrix(0, k1, &tri);
    let q = w2p.adjoint_mul(&w2p);
    let compressed = &w1 - &w1.matmul(&q);
    let (w1p, _) = fix_partial_isometry_at(&compressed, &format!("triangularize-first-row@depth{depth}"))?;
    let d3 = compressed.dist(&w1p);
    trace.levels.push((depth, d1, d2, d3));
    trace.levels.sort_by_key(|l| l.0);
    Ok(CMatrix::vstack(&w1p, &w2p))
}

/// Orthonormal basis (columns) of the range of a block-diagonal projection,
/// taken block by block so each column lives inside its own block.
fn block_frame(p: &CMatrix, sizes: &[usize]) -> Result<(CMatrix, Vec<usize>)> {
    let n = p.rows();
    let offs = offsets(sizes);
    let mut columns: Vec<Vec<crate::numkernel::C64>> = Vec::new();
    let mut counts = Vec::with_capacity(sizes.len());
    for b in 0..sizes.len() {
        let (s, e) = (offs[b], offs[b + 1]);
        let block = p.submatrix(s, e, s, e);
        let spec = herm_eig(&block.hermitian_part())?;
        let mut count = 0;
        for (k, &lambda) in spec.eigenvalues.iter().enumerate() {
            if lambda > 0.5 {
                let mut col = vec![ZERO; n];
                for i in 0..e - s {
                    col[s + i] = spec.eigenvectors[(i, k)];
                }
                columns.push(col);
                count += 1;
            }
        }
        counts.push(count);
    }
    Ok((CMatrix::from_columns(n, &columns), counts))
}

/// Block upper-triangular partial isometry with prescribed block-diagonal
/// initial projection Q = b̂*b̂ and final projection P = b̂b̂*, near a
/// partial isometry b with the same projections.
///
/// b is reduced to a unitary between ran Q and ran P in block-adapted
/// bases, that unitary is triangularized, and the result is mapped back.
pub fn frame_triangularize(
    b: &CMatrix,
    comp: &BlockComposition,
    p: &CMatrix,
    q: &CMatrix,
) -> Result<(CMatrix, CorrectionCertificate)> {
    let n = comp.total();
    for x in [b, p, q] {
        x.ensure_shape((n, n))?;
        x.ensure_finite()?;
    }
    let tol = TOL.struct_tol(n);
    for x in [p, q] {
        let r = x.projection_residual();
        if r > tol {
            return Err(Error::NotProjection { residual: r });
        }
        let off = off_block_diagonal(x, comp.sizes());
        if off > tol {
            return Err(Error::too_large("frame-block-diagonal", off, tol));
        }
    }
    let (x, h) = block_frame(p, comp.sizes())?;
    let (y, k) = block_frame(q, comp.sizes())?;
    if x.cols() != y.cols() {
        return Err(Error::RankMismatch {
            left: x.cols(),
            right: y.cols(),
        });
    }
    let frame = b.adjoint_mul(b).dist(q).max(b.mul_adjoint(b).dist(p));
    if frame > tol {
        return Err(Error::too_large("frame-projections", frame, tol));
    }
    let eps = subdiagonal_norm(b, comp.sizes(), comp.sizes());
    let reduced = x.adjoint_mul(b).matmul(&y);
    let (rhat, inner) = triangularize_rect(&reduced, &h, &k)?;
    let mut bhat = x.matmul(&rhat).mul_adjoint(&y);
    zero_subdiagonal(&mut bhat, comp.sizes(), comp.sizes());
    let residual = bhat.adjoint_mul(&bhat).dist(q).max(bhat.mul_adjoint(&bhat).dist(p));
    if residual > tol {
        return Err(Error::too_large("frame-result", residual, tol));
    }
    let mut cert = CorrectionCertificate::new(eps, b.dist(&bhat), residual);
    cert.stages = inner.stages;
    Ok((bhat, cert))
}
