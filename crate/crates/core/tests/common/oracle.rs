//! Independent reference computations: brute-force enumeration and direct
//! numerical minimization, sharing no code with the library's corrections.

use perturba::algebra::{BlockComposition, IncidencePattern};
use perturba::numkernel::herm_eig;
use perturba::{CMatrix, C64};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::rng;

/// Distance to the upper block-triangular algebra by direct minimization of
/// ‖x − t‖ over the free entries of t. The objective is smoothed as
/// μ·log tr exp((x−t)*(x−t)/μ) and μ is driven to zero; the returned value
/// is the exact norm at the best point found, hence an upper bound.
pub fn triangular_distance_oracle(x: &CMatrix, c: &BlockComposition, restarts: usize, seed: u64) -> f64 {
    let n = x.rows();
    let free: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| c.block_of(i) <= c.block_of(j))
        .collect();
    let build = |t: &[C64]| {
        let mut m = x.clone();
        for (k, &(i, j)) in free.iter().enumerate() {
            m[(i, j)] -= t[k];
        }
        m
    };
    let smoothed = |t: &[C64], mu: f64| -> (f64, Vec<C64>) {
        let m = build(t);
        let g = m.adjoint_mul(&m).hermitian_part();
        let s = herm_eig(&g).unwrap();
        let top = s.eigenvalues[0];
        let weights: Vec<f64> = s.eigenvalues.iter().map(|l| ((l - top) / mu).exp()).collect();
        let z: f64 = weights.iter().sum();
        let value = top + mu * z.ln();
        let w = s.apply(|l| C64::new(((l - top) / mu).exp() / z, 0.0));
        let mw = m.matmul(&w);
        let grad = free.iter().map(|&(i, j)| -mw[(i, j)] * 2.0).collect();
        (value, grad)
    };
    let mut r = rng(seed);
    let mut best = f64::INFINITY;
    for attempt in 0..restarts {
        let mut t: Vec<C64> = free
            .iter()
            .map(|&(i, j)| {
                if attempt == 0 {
                    x[(i, j)]
                } else {
                    x[(i, j)] + C64::new(r.random_range(-0.5..0.5), r.random_range(-0.5..0.5))
                }
            })
            .collect();
        let mut mu = 0.1;
        let mut step = 0.1;
        while mu > 1e-10 {
            for _ in 0..400 {
                let (f, g) = smoothed(&t, mu);
                let gn: f64 = g.iter().map(|z| z.norm_sqr()).sum();
                if gn < 1e-28 {
                    break;
                }
                step *= 2.0;
                loop {
                    let trial: Vec<C64> = t.iter().zip(&g).map(|(a, b)| a - b * step).collect();
                    let (ft, _) = smoothed(&trial, mu);
                    if ft <= f - 0.5 * step * gn || step < 1e-18 {
                        t = trial;
                        break;
                    }
                    step *= 0.5;
                }
            }
            mu *= 0.25;
        }
        best = best.min(build(&t).norm());
    }
    best
}

/// max over all 2ⁿ diagonal projections p of ‖wp − pw‖.
pub fn exhaustive_commutator(w: &CMatrix) -> f64 {
    let n = w.rows();
    let mut best: f64 = 0.0;
    for mask in 0u32..(1 << n) {
        let p = CMatrix::from_real_diag(&(0..n).map(|i| (mask >> i & 1) as f64).collect::<Vec<_>>());
        best = best.max((&w.matmul(&p) - &p.matmul(w)).norm());
    }
    best
}

pub fn phase(theta: f64) -> C64 {
    C64::from_polar(1.0, theta)
}

/// Random partial permutation with random phases, supported in `pattern`.
pub fn random_normalizer(r: &mut ChaCha8Rng, pattern: &IncidencePattern, density: f64) -> CMatrix {
    let n = pattern.dim();
    let mut v = CMatrix::zeros(n, n);
    let mut used = vec![false; n];
    let mut rows: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        rows.swap(i, r.random_range(0..=i));
    }
    for &i in &rows {
        if !r.random_bool(density) {
            continue;
        }
        let free: Vec<usize> = (0..n).filter(|&j| !used[j] && pattern.contains(i, j)).collect();
        if let Some(&j) = free.get(r.random_range(0..free.len().max(1)).min(free.len().saturating_sub(1))) {
            used[j] = true;
            v[(i, j)] = phase(r.random_range(0.0..std::f64::consts::TAU));
        }
    }
    v
}

/// Smallest ‖v − x‖ over partial permutations x supported in the pattern,
/// with x_ij = phase(v_ij) on the support.
pub fn nearest_normalizer_oracle(v: &CMatrix, pattern: &IncidencePattern) -> f64 {
    fn walk(row: usize, v: &CMatrix, pattern: &IncidencePattern, x: &mut CMatrix, used: &mut Vec<bool>, best: &mut f64) {
        let n = v.rows();
        if row == n {
            *best = best.min(v.dist(x));
            return;
        }
        walk(row + 1, v, pattern, x, used, best);
        for j in 0..n {
            if !used[j] && pattern.contains(row, j) {
                let z = v[(row, j)];
                x[(row, j)] = if z.norm() > 0.0 { z / z.norm() } else { C64::new(1.0, 0.0) };
                used[j] = true;
                walk(row + 1, v, pattern, x, used, best);
                used[j] = false;
                x[(row, j)] = C64::new(0.0, 0.0);
            }
        }
    }
    let n = v.rows();
    let mut best = f64::INFINITY;
    walk(0, v, pattern, &mut CMatrix::zeros(n, n), &mut vec![false; n], &mut best);
    best
}
