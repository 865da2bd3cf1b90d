#![allow(dead_code)]

use mpdagger::matrix::{ComplexMatrix, Mat, C64};
use mpdagger::rel::FiniteRelation;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Entries with real and imaginary parts uniform in [-1, 1].
pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize, m: usize) -> ComplexMatrix {
    let data = (0..n * m).map(|_| C64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))).collect();
    ComplexMatrix::new(n, m, data).unwrap()
}

/// `B·C` with inner dimension `k`.
pub fn low_rank(rng: &mut ChaCha8Rng, n: usize, m: usize, k: usize) -> ComplexMatrix {
    random_matrix(rng, n, k).matmul(&random_matrix(rng, k, m)).unwrap()
}

/// Alternates full random matrices with rank-deficient products, sizes up to 8×8.
pub fn corpus(seed: u64, count: usize) -> Vec<ComplexMatrix> {
    let mut rng = rng(seed);
    (0..count)
        .map(|i| {
            let n = rng.gen_range(1..=8);
            let m = rng.gen_range(1..=8);
            if i % 2 == 0 {
                random_matrix(&mut rng, n, m)
            } else {
                let k = rng.gen_range(0..n.min(m));
                low_rank(&mut rng, n, m, k)
            }
        })
        .collect()
}

pub fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    Mat::default().svd(&random_matrix(rng, n, n)).unwrap().u
}

pub fn random_relation(rng: &mut ChaCha8Rng, n: usize, m: usize) -> FiniteRelation {
    let pairs: Vec<_> = (0..n).flat_map(|i| (0..m).map(move |j| (i, j))).filter(|_| rng.gen_bool(0.5)).collect();
    FiniteRelation::from_pairs(n, m, pairs).unwrap()
}

pub fn scale(a: &ComplexMatrix) -> f64 {
    a.frobenius_norm().max(1.0)
}
