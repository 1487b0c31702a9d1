//! Cyclic Jacobi methods: two-sided for Hermitian eigenproblems, one-sided
//! (Hestenes) for the singular value decomposition. Sweep order is fixed
//! row-cyclic so runs are bit-reproducible.

use super::matrix::{CMatrix, C64, ONE, ZERO};

const MAX_SWEEPS: usize = 80;

/// Complex Jacobi rotation annihilating the (p, q) coupling `gamma` of the
/// Hermitian 2×2 block [[alpha, gamma], [conj(gamma), beta]].
///
/// Returns (jpp, jpq, jqp, jqq) and the shift t·|gamma| applied to the
/// diagonal.
#[inline]
fn rotation(alpha: f64, beta: f64, gamma: C64) -> ([C64; 4], f64) {
    let r = gamma.norm();
    let phase_conj = (gamma / r).conj();
    let theta = (beta - alpha) / (2.0 * r);
    let t = if theta == 0.0 {
        1.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    (
        [
            C64::new(c, 0.0),
            C64::new(s, 0.0),
            phase_conj * (-s),
            phase_conj * c,
        ],
        t * r,
    )
}

/// Eigen-decomposition of a Hermitian matrix (input is hermitized first).
/// Eigenvalues are returned unsorted alongside the eigenvector columns.
pub(crate) fn hermitian_jacobi(h: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = h.rows();
    let mut a = h.hermitian_part();
    let mut v = CMatrix::identity(n);
    let frob = a.frobenius_norm();
    if n <= 1 || frob == 0.0 {
        return ((0..n).map(|i| a[(i, i)].re).collect(), v);
    }
    let tiny = f64::EPSILON * f64::EPSILON * frob * frob;
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off <= tiny {
            break;
        }
        let mut rotated = false;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let gamma = a[(p, q)];
                let r = gamma.norm();
                if r == 0.0 || r * r <= tiny / (n * n) as f64 {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                // Negligible relative to both diagonal entries.
                if r <= 1e-18 * app.abs().min(aqq.abs()) {
                    continue;
                }
                rotated = true;
                let ([jpp, jpq, jqp, jqq], shift) = rotation(app, aqq, gamma);
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * jpp + akq * jqp;
                    a[(k, q)] = akp * jpq + akq * jqq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
                    a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = C64::new(app - shift, 0.0);
                a[(q, q)] = C64::new(aqq + shift, 0.0);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * jpp + vkq * jqp;
                    v[(k, q)] = vkp * jpq + vkq * jqq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    ((0..n).map(|i| a[(i, i)].re).collect(), v)
}

/// Thin SVD: singular values (descending), left vectors (m×k) and right
/// vectors (n×k), k = min(m, n). Left vectors of zero singular values are
/// zero columns.
pub(crate) struct ThinSvd {
    pub values: Vec<f64>,
    pub left: CMatrix,
    pub right: CMatrix,
}

/// One-sided Jacobi on the columns of a tall (m ≥ n) matrix.
fn hestenes(a: &CMatrix, want_vectors: bool) -> (Vec<Vec<C64>>, Vec<Vec<C64>>) {
    let (m, n) = a.shape();
    let mut w: Vec<Vec<C64>> = (0..n).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<C64>> = if want_vectors {
        (0..n)
            .map(|j| {
                let mut e = vec![ZERO; n];
                e[j] = ONE;
                e
            })
            .collect()
    } else {
        Vec::new()
    };
    let tol = 4.0 * f64::EPSILON * (m.max(1) as f64).sqrt();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let (left, right) = w.split_at_mut(q);
                let wp = &mut left[p];
                let wq = &mut right[0];
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = ZERO;
                for (x, y) in wp.iter().zip(wq.iter()) {
                    alpha += x.norm_sqr();
                    beta += y.norm_sqr();
                    gamma += x.conj() * y;
                }
                let r = gamma.norm();
                if r == 0.0 || r <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let ([jpp, jpq, jqp, jqq], _) = rotation(alpha, beta, gamma);
                for (x, y) in wp.iter_mut().zip(wq.iter_mut()) {
                    let (xp, yq) = (*x, *y);
                    *x = xp * jpp + yq * jqp;
                    *y = xp * jpq + yq * jqq;
                }
                if want_vectors {
                    let (left, right) = v.split_at_mut(q);
                    for (x, y) in left[p].iter_mut().zip(right[0].iter_mut()) {
                        let (xp, yq) = (*x, *y);
                        *x = xp * jpp + yq * jqp;
                        *y = xp * jpq + yq * jqq;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    (w, v)
}

pub(crate) fn thin_svd(a: &CMatrix) -> ThinSvd {
    let (m, n) = a.shape();
    if m < n {
        let t = thin_svd(&a.adjoint());
        return ThinSvd {
            values: t.values,
            left: t.right,
            right: t.left,
        };
    }
    let (w, v) = hestenes(a, true);
    let mut sigma: Vec<(f64, usize)> = w
        .iter()
        .enumerate()
        .map(|(j, col)| (col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt(), j))
        .collect();
    sigma.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)));
    let mut left = CMatrix::zeros(m, n);
    let mut right = CMatrix::zeros(n, n);
    for (k, &(s, j)) in sigma.iter().enumerate() {
        if s > 0.0 {
            for i in 0..m {
                left[(i, k)] = w[j][i] / s;
            }
        }
        for i in 0..n {
            right[(i, k)] = v[j][i];
        }
    }
    ThinSvd {
        values: sigma.iter().map(|x| x.0).collect(),
        left,
        right,
    }
}

/// Singular values only (descending).
pub(crate) fn singular_values(a: &CMatrix) -> Vec<f64> {
    let (m, n) = a.shape();
    let tall = if m < n { a.adjoint() } else { a.clone() };
    let (w, _) = hestenes(&tall, false);
    let mut s: Vec<f64> = w
        .iter()
        .map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}
