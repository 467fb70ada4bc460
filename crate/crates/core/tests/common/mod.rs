#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thermal_cluster_core::{ComplexMatrix, DensityMatrix, PureState, C64};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_matrix(dim: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let entries: Vec<C64> = (0..dim * dim).map(|_| gaussian(rng)).collect();
    ComplexMatrix::from_row_major(dim, &entries).unwrap()
}

pub fn random_hermitian(dim: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    random_matrix(dim, rng).hermitian_part()
}

/// Ginibre ensemble: `G G† / Tr`.
pub fn random_density(n_qubits: usize, rng: &mut ChaCha8Rng) -> DensityMatrix {
    let g = random_matrix(1 << n_qubits, rng);
    DensityMatrix::from_unnormalized(&g * &g.adjoint()).unwrap()
}

pub fn random_pure(n_qubits: usize, rng: &mut ChaCha8Rng) -> PureState {
    PureState::normalized((0..1usize << n_qubits).map(|_| gaussian(rng)).collect()).unwrap()
}

pub fn ket(amps: &[(f64, f64)]) -> Vec<C64> {
    amps.iter().map(|&(re, im)| C64::new(re, im)).collect()
}

/// `|<a|b>|`
pub fn overlap(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<C64>().norm()
}
