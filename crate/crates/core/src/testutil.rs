use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::numkernel::{CMatrix, C64};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_general(r: &mut ChaCha8Rng, m: usize, n: usize) -> CMatrix {
    CMatrix::from_fn(m, n, |_, _| C64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)))
}

pub fn random_hermitian(r: &mut ChaCha8Rng, n: usize) -> CMatrix {
    random_general(r, n, n).hermitian_part()
}
