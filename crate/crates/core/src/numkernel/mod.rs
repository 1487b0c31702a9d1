//! Dense complex linear algebra: operator norm, Hermitian eigensystems,
//! polar decomposition and exponentials of skew-Hermitian matrices.

mod io;
mod jacobi;
mod matrix;
mod norm;

pub use io::{read_matrix, write_matrix, MatrixJson};
pub use matrix::{CMatrix, C64, ONE, ZERO};
pub use norm::operator_norm;
pub(crate) use jacobi::thin_svd;

use crate::error::{Error, Result};
use crate::tolerances::TOL;

/// Eigenvalues (descending) and unitary eigenvector columns of a Hermitian
/// matrix.
#[derive(Debug, Clone)]
pub struct SpectralData {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl SpectralData {
    /// U·f(Λ)·U*.
    pub fn apply(&self, f: impl Fn(f64) -> C64) -> CMatrix {
        let n = self.eigenvalues.len();
        let mut scaled = self.eigenvectors.clone();
        for j in 0..n {
            let fj = f(self.eigenvalues[j]);
            for i in 0..n {
                scaled[(i, j)] *= fj;
            }
        }
        scaled.mul_adjoint(&self.eigenvectors)
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.apply(|x| C64::new(x, 0.0))
    }
}

/// Polar decomposition v = v̄·|v|.
#[derive(Debug, Clone)]
pub struct PolarData {
    /// Partial isometry, zero on the kernel of |v|.
    pub isometric_part: CMatrix,
    /// (v*v)^{1/2}.
    pub positive_part: CMatrix,
    /// Descending, min(rows, cols) of them.
    pub singular_values: Vec<f64>,
    /// Number of singular values above the rank cutoff.
    pub rank: usize,
}

/// Eigen-decomposition of a Hermitian matrix by two-sided cyclic Jacobi.
pub fn herm_eig(b: &CMatrix) -> Result<SpectralData> {
    b.ensure_square()?;
    b.ensure_finite()?;
    let norm = b.norm();
    let defect = (b - &b.adjoint()).norm();
    if defect > TOL.herm * norm {
        return Err(Error::NotHermitian { defect });
    }
    let (values, vectors) = jacobi::hermitian_jacobi(b);
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| values[y].total_cmp(&values[x]).then(x.cmp(&y)));
    let eigenvalues = order.iter().map(|&k| values[k]).collect();
    let eigenvectors = CMatrix::from_fn(n, n, |i, j| vectors[(i, order[j])]);
    Ok(SpectralData {
        eigenvalues,
        eigenvectors,
    })
}

/// Singular values, descending.
pub fn singular_values(a: &CMatrix) -> Vec<f64> {
    jacobi::singular_values(a)
}

/// Numerical rank at the relative cutoff `TOL.rank · σ_max`.
pub fn rank(a: &CMatrix) -> usize {
    let s = singular_values(a);
    let cutoff = TOL.rank * s.first().copied().unwrap_or(0.0);
    s.iter().filter(|&&x| x > cutoff && x > 0.0).count()
}

/// Polar decomposition through a one-sided Jacobi SVD.
pub fn polar_svd(v: &CMatrix) -> PolarData {
    let (m, n) = v.shape();
    let svd = jacobi::thin_svd(v);
    let smax = svd.values.first().copied().unwrap_or(0.0);
    let cutoff = TOL.rank * smax;
    let rank = svd.values.iter().filter(|&&s| s > cutoff && s > 0.0).count();

    let mut left = CMatrix::zeros(m, rank);
    let mut right = CMatrix::zeros(n, rank);
    for k in 0..rank {
        for i in 0..m {
            left[(i, k)] = svd.left[(i, k)];
        }
        for i in 0..n {
            right[(i, k)] = svd.right[(i, k)];
        }
    }
    let isometric_part = left.mul_adjoint(&right);

    let k = svd.values.len();
    let mut scaled = svd.right.clone();
    for j in 0..k {
        for i in 0..n {
            scaled[(i, j)] *= svd.values[j];
        }
    }
    let positive_part = scaled.mul_adjoint(&svd.right);
    PolarData {
        isometric_part,
        positive_part,
        singular_values: svd.values,
        rank,
    }
}

/// exp(k) for skew-Hermitian k, via the eigensystem of the Hermitian −ik.
pub fn exp_skew(k: &CMatrix) -> Result<CMatrix> {
    k.ensure_square()?;
    k.ensure_finite()?;
    let defect = (k + &k.adjoint()).norm();
    if defect > TOL.skew {
        return Err(Error::NotSkewHermitian { defect });
    }
    let h = k.scale(C64::new(0.0, -1.0)).hermitian_part();
    let spec = herm_eig(&h)?;
    Ok(spec.apply(|x| C64::new(0.0, x).exp()))
}
