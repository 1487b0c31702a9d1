use super::CorrectionCertificate;
use crate::error::{Error, Result};
use crate::numkernel::{herm_eig, polar_svd, rank, CMatrix};
use crate::tolerances::TOL;

/// Spectral projection of the Hermitian part of h onto eigenvalues above 1/2.
pub(crate) fn spectral_round(h: &CMatrix) -> Result<CMatrix> {
    if h.is_empty() {
        return Ok(h.clone());
    }
    let spec = herm_eig(&h.hermitian_part())?;
    Ok(spec
        .apply(|x| if x > 0.5 { 1.0.into() } else { 0.0.into() })
        .hermitian_part())
}

/// Nearby projection in C*(b) for a Hermitian b with ‖b² − b‖ < 1/4.
///
/// Eigenvalues are rounded at 1/2; the distance moved is at most 2‖b² − b‖.
pub fn round_to_projection(b: &CMatrix) -> Result<(CMatrix, CorrectionCertificate)> {
    b.ensure_square()?;
    b.ensure_finite()?;
    let delta = (&b.matmul(b) - b).norm();
    // Hermiticity is checked by the eigensolver before the defect gate so
    // that non-Hermitian input is reported as such.
    let spec = herm_eig(b)?;
    if delta >= 0.25 {
        return Err(Error::too_large("projection", delta, 0.25));
    }
    let p = spec
        .apply(|x| if x > 0.5 { 1.0.into() } else { 0.0.into() })
        .hermitian_part();
    let residual = p.projection_residual();
    let commutator = (&p.matmul(b) - &b.matmul(&p)).norm();
    let cert = CorrectionCertificate::new(delta, p.dist(b), residual)
        .with_bound(2.0 * delta)
        .with_stage("commutator", commutator);
    Ok((p, cert))
}

/// Unitary u with q = u·p·u* for projections at distance below 1.
///
/// u is the polar part of v = I − p − q + 2qp, which satisfies v·p = q·v;
/// ‖I − u‖ ≤ √2‖q − p‖.
pub fn conjugating_unitary(p: &CMatrix, q: &CMatrix) -> Result<(CMatrix, CorrectionCertificate)> {
    p.ensure_square()?;
    q.ensure_shape(p.shape())?;
    let n = p.rows();
    let tol = TOL.struct_tol(n);
    for x in [p, q] {
        let r = x.projection_residual();
        if r > tol {
            return Err(Error::NotProjection { residual: r });
        }
    }
    let distance = q.dist(p);
    if distance >= 1.0 {
        return Err(Error::ProjectionsTooFar { distance });
    }
    let id = CMatrix::identity(n);
    let v = &(&(&id - p) - q) + &q.matmul(p).scale_real(2.0);
    let polar = polar_svd(&v);
    if polar.rank < n {
        return Err(Error::ProjectionsTooFar { distance });
    }
    let u = polar.isometric_part;
    let unitarity = u.adjoint_mul(&u).dist(&id).max(u.mul_adjoint(&u).dist(&id));
    let conj = u.matmul(p).mul_adjoint(&u).dist(q);
    let cert = CorrectionCertificate::new(distance, u.dist(&id), unitarity.max(conj))
        .with_bound(std::f64::consts::SQRT_2 * distance);
    Ok((u, cert))
}

/// rank(v) = rank(w) for partial isometries; always true when ‖v − w‖ < 1.
pub fn check_rank_stability(v: &CMatrix, w: &CMatrix) -> Result<bool> {
    for x in [v, w] {
        let n = x.rows().max(x.cols());
        let r = x.pisometry_defect();
        if r > TOL.struct_tol(n) {
            return Err(Error::NotPartialIsometry { residual: r });
        }
    }
    Ok(rank(v) == rank(w))
}
