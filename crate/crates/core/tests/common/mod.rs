#![allow(dead_code)]

pub mod oracle;

use perturba::algebra::random_near_identity_unitary;
use perturba::numkernel::polar_svd;
use perturba::{CMatrix, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(r: &mut ChaCha8Rng, m: usize, n: usize) -> CMatrix {
    CMatrix::from_fn(m, n, |_, _| C64::new(StandardNormal.sample(r), StandardNormal.sample(r)))
}

pub fn uniform(r: &mut ChaCha8Rng, m: usize, n: usize) -> CMatrix {
    CMatrix::from_fn(m, n, |_, _| C64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)))
}

/// Haar-like unitary: polar part of a Gaussian matrix.
pub fn unitary(r: &mut ChaCha8Rng, n: usize) -> CMatrix {
    polar_svd(&gaussian(r, n, n)).isometric_part
}

/// Random partial isometry of the given rank.
pub fn partial_isometry(r: &mut ChaCha8Rng, n: usize, rank: usize) -> CMatrix {
    let u = unitary(r, n);
    let v = unitary(r, n);
    let mut d = CMatrix::zeros(n, n);
    for i in 0..rank {
        d[(i, i)] = C64::new(1.0, 0.0);
    }
    u.matmul(&d).matmul(&v)
}

/// Block-diagonal unitary for the given block sizes.
pub fn block_unitary(r: &mut ChaCha8Rng, sizes: &[usize]) -> CMatrix {
    let n: usize = sizes.iter().sum();
    let mut out = CMatrix::zeros(n, n);
    let mut at = 0;
    for &s in sizes {
        out.set_submatrix(at, at, &unitary(r, s));
        at += s;
    }
    out
}

/// Diagonal projection with a random subset of ones.
pub fn diagonal_projection(r: &mut ChaCha8Rng, n: usize, keep: f64) -> CMatrix {
    CMatrix::from_real_diag(&(0..n).map(|_| if r.random_bool(keep) { 1.0 } else { 0.0 }).collect::<Vec<_>>())
}

pub fn near_identity(r: &mut ChaCha8Rng, n: usize, eps: f64) -> CMatrix {
    random_near_identity_unitary(n, eps, r)
}

/// Partial isometry with block-diagonal final projection and sub-diagonal
/// blocks of size O(eps): B·D·exp(k).
pub fn triangularize_input(r: &mut ChaCha8Rng, sizes: &[usize], eps: f64, keep: f64) -> CMatrix {
    let n: usize = sizes.iter().sum();
    let b = block_unitary(r, sizes);
    let d = diagonal_projection(r, n, keep);
    b.matmul(&d).matmul(&near_identity(r, n, eps))
}

/// Random composition of n into blocks.
pub fn composition(r: &mut ChaCha8Rng, n: usize, max_blocks: usize) -> Vec<usize> {
    let blocks = r.random_range(1..=max_blocks.min(n));
    let mut cuts: Vec<usize> = (1..n).collect();
    for i in (1..cuts.len()).rev() {
        let j = r.random_range(0..=i);
        cuts.swap(i, j);
    }
    let mut chosen: Vec<usize> = cuts.into_iter().take(blocks - 1).collect();
    chosen.sort();
    let mut sizes = Vec::new();
    let mut prev = 0;
    for c in chosen {
        sizes.push(c - prev);
        prev = c;
    }
    sizes.push(n - prev);
    sizes
}

pub fn rotation(theta: f64) -> CMatrix {
    CMatrix::from_real(2, 2, &[theta.cos(), -theta.sin(), theta.sin(), theta.cos()])
}
