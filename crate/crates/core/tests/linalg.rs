mod common;

use common::*;
use thermal_cluster_core::linalg::{
    fidelity, fidelity_pure, hermitian_expm, partial_trace, partial_transpose,
    partial_transpose_operator, pauli, tensor, trace_norm,
};
use thermal_cluster_core::{graph::build_graph_state, linear_graph, ComplexMatrix, DensityMatrix, C64};

fn kron_oracle(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (da, db) = (a.dim(), b.dim());
    let mut entries = vec![C64::default(); da * db * da * db];
    for i in 0..da {
        for j in 0..da {
            for k in 0..db {
                for l in 0..db {
                    entries[(i * db + k) * da * db + j * db + l] = a.get(i, j) * b.get(k, l);
                }
            }
        }
    }
    ComplexMatrix::from_row_major(da * db, &entries).unwrap()
}

fn taylor_expm(h: &ComplexMatrix, scale: f64) -> ComplexMatrix {
    let a = h.scale_real(scale);
    let mut term = ComplexMatrix::identity(h.dim());
    let mut sum = term.clone();
    for k in 1..=30 {
        term = (&term * &a).scale_real(1.0 / k as f64);
        sum = &sum + &term;
    }
    sum
}

#[test]
fn tensor_identities() {
    let i4 = tensor(&pauli::identity(), &pauli::identity());
    assert_eq!(i4.max_abs_diff(&ComplexMatrix::identity(4)), 0.0);
    let zz = tensor(&pauli::z(), &pauli::z());
    let out = zz.apply(&ket(&[(0., 0.), (0., 0.), (0., 0.), (1., 0.)])).unwrap();
    assert!((out[3] - C64::new(1.0, 0.0)).norm() < 1e-15);
}

#[test]
fn tensor_matches_double_loop() {
    let mut r = rng(1);
    let (a, b) = (random_matrix(2, &mut r), random_matrix(2, &mut r));
    assert!(tensor(&a, &b).max_abs_diff(&kron_oracle(&a, &b)) < 1e-14);
    let xz = tensor(&pauli::x(), &pauli::z());
    assert!(xz.max_abs_diff(&kron_oracle(&pauli::x(), &pauli::z())) < 1e-15);
    let (c, d) = (random_matrix(4, &mut r), random_matrix(2, &mut r));
    assert!(tensor(&c, &d).max_abs_diff(&kron_oracle(&c, &d)) < 1e-13);
}

fn bell() -> DensityMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    thermal_cluster_core::PureState::new(ket(&[(h, 0.), (0., 0.), (0., 0.), (h, 0.)]))
        .unwrap()
        .to_density()
}

#[test]
fn partial_trace_cases() {
    let reduced = partial_trace(&bell(), &[0]).unwrap();
    assert!(reduced.matrix().max_abs_diff(&ComplexMatrix::identity(2).scale_real(0.5)) < 1e-15);

    let mut r = rng(2);
    let (a, b) = (random_density(1, &mut r), random_density(2, &mut r));
    let product = DensityMatrix::new(tensor(a.matrix(), b.matrix())).unwrap();
    assert!(partial_trace(&product, &[0]).unwrap().matrix().max_abs_diff(a.matrix()) < 1e-14);
    assert!(partial_trace(&product, &[1, 2]).unwrap().matrix().max_abs_diff(b.matrix()) < 1e-14);
}

#[test]
fn cluster_end_qubit_reduction_by_direct_sum() {
    let psi = build_graph_state(&linear_graph(3).unwrap());
    let amps = psi.amplitudes();
    // rho_A[a][b] = sum_{j} psi[a, j] conj(psi[b, j]) over the 4 traced indices.
    let mut oracle = [[C64::default(); 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            for j in 0..4 {
                oracle[a][b] += amps[4 * a + j] * amps[4 * b + j].conj();
            }
        }
    }
    let reduced = partial_trace(&psi.to_density(), &[0]).unwrap();
    for a in 0..2 {
        for b in 0..2 {
            assert!((reduced.matrix().get(a, b) - oracle[a][b]).norm() < 1e-15);
            let half = if a == b { 0.5 } else { 0.0 };
            assert!((oracle[a][b] - C64::new(half, 0.0)).norm() < 1e-15);
        }
    }
}

#[test]
fn partial_transpose_cases() {
    let pt = partial_transpose(&bell(), &[0]).unwrap();
    let min = pt.eigh().unwrap().values[0];
    assert!((min + 0.5).abs() < 1e-12);

    let mut r = rng(3);
    let states: Vec<DensityMatrix> = (0..3).map(|_| random_density(1, &mut r)).collect();
    let product = DensityMatrix::new(tensor(&tensor(states[0].matrix(), states[1].matrix()), states[2].matrix())).unwrap();
    for subset in [&[0][..], &[1], &[2], &[0, 2], &[0, 1]] {
        let pt = partial_transpose(&product, subset).unwrap();
        assert!(pt.eigh().unwrap().values[0] > -1e-12);
    }

    let rho = random_density(3, &mut r);
    let once = partial_transpose(&rho, &[0, 2]).unwrap();
    let twice = partial_transpose_operator(&once, 3, &[0, 2]).unwrap();
    assert!(twice.max_abs_diff(rho.matrix()) < 1e-15);
}

#[test]
fn expm_cases() {
    let zero = hermitian_expm(&ComplexMatrix::zeros(4), 3.7).unwrap();
    assert!(zero.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-14);

    let s = 0.9;
    let ez = hermitian_expm(&pauli::z(), s).unwrap();
    assert!(ez.max_abs_diff(&ComplexMatrix::from_real_diagonal(&[s.exp(), (-s).exp()])) < 1e-14);

    let mut r = rng(4);
    let h = random_hermitian(4, &mut r);
    assert!(hermitian_expm(&h, 0.7).unwrap().max_abs_diff(&taylor_expm(&h, 0.7)) < 1e-8);
}

#[test]
fn fidelity_cases() {
    let mut r = rng(5);
    let rho = random_density(2, &mut r);
    assert!((fidelity(&rho, &rho).unwrap() - 1.0).abs() < 1e-9);

    let zero = thermal_cluster_core::PureState::basis(1, 0).unwrap().to_density();
    let one = thermal_cluster_core::PureState::basis(1, 1).unwrap().to_density();
    assert!(fidelity(&zero, &one).unwrap().abs() < 1e-12);

    for _ in 0..10 {
        let psi = random_pure(2, &mut r);
        let sigma = random_density(2, &mut r);
        let shortcut = sigma.matrix().sandwich(psi.amplitudes(), psi.amplitudes()).unwrap().re;
        assert!((fidelity(&psi.to_density(), &sigma).unwrap() - shortcut).abs() < 1e-9);
        assert!((fidelity_pure(&psi, &sigma).unwrap() - shortcut).abs() < 1e-12);
    }
}

#[test]
fn trace_norm_of_density_is_one() {
    let mut r = rng(6);
    let rho = random_density(3, &mut r);
    assert!((trace_norm(rho.matrix()).unwrap() - 1.0).abs() < 1e-12);
    assert!((trace_norm(&pauli::z()).unwrap() - 2.0).abs() < 1e-14);
}
