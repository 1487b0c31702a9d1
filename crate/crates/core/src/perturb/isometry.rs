use super::CorrectionCertificate;
use crate::error::{Error, Result};
use crate::numkernel::{thin_svd, CMatrix};

/// Partial isometry v̄·p near an approximate partial isometry v, where v̄ is
/// the polar isometric part and p the spectral rounding of v*v at 1/2.
///
/// Requires ‖v*v − (v*v)²‖ < 1/4. The output is dominated by v̄, so
/// orthogonal inputs give orthogonal outputs. The distance moved equals
/// ‖|v| − p‖.
pub fn fix_partial_isometry(v: &CMatrix) -> Result<(CMatrix, CorrectionCertificate)> {
    fix_partial_isometry_at(v, "partial-isometry")
}

pub(crate) fn fix_partial_isometry_at(v: &CMatrix, stage: &str) -> Result<(CMatrix, CorrectionCertificate)> {
    v.ensure_finite()?;
    let (m, n) = v.shape();
    if m == 0 || n == 0 {
        return Ok((v.clone(), CorrectionCertificate::new(0.0, 0.0, 0.0).with_bound(0.0)));
    }
    let eps = v.pisometry_defect();
    if eps >= 0.25 {
        return Err(Error::too_large(stage, eps, 0.25));
    }
    let svd = thin_svd(v);
    let mut vhat = CMatrix::zeros(m, n);
    let mut bound: f64 = 0.0;
    for (k, &s) in svd.values.iter().enumerate() {
        if s * s > 0.5 {
            bound = bound.max((s - 1.0).abs());
            for i in 0..m {
                let l = svd.left[(i, k)];
                for j in 0..n {
                    vhat[(i, j)] += l * svd.right[(j, k)].conj();
                }
            }
        } else {
            bound = bound.max(s);
        }
    }
    let residual = vhat.adjoint_mul(&vhat).projection_residual();
    let cert = CorrectionCertificate::new(eps, vhat.dist(v), residual).with_bound(bound);
    Ok((vhat, cert))
}
