mod common;

use common::*;
use std::f64::consts::FRAC_1_SQRT_2;
use thermal_cluster_core::graph::{
    build_graph_state, excited_state, parent_hamiltonian, stabilizer, verify_spectrum, ExcitationVector,
};
use thermal_cluster_core::linalg::{embed, pauli, tensor_all};
use thermal_cluster_core::{linear_graph, ComplexMatrix, Graph, C64};

#[test]
fn linear_graphs() {
    assert_eq!(linear_graph(2).unwrap().edges(), &[(0, 1)]);
    assert_eq!(linear_graph(3).unwrap().edges(), &[(0, 1), (1, 2)]);
    let g5 = linear_graph(5).unwrap();
    assert_eq!(g5.edges(), &[(0, 1), (1, 2), (2, 3), (3, 4)]);
    assert_eq!("5; 0-1,1-2,2-3,3-4".parse::<Graph>().unwrap(), g5);
}

#[test]
fn two_qubit_cluster_by_hand() {
    // CZ |++> = (|00> + |01> + |10> - |11>)/2 = (|0+> + |1->)/sqrt(2)
    let psi = build_graph_state(&linear_graph(2).unwrap());
    let h = FRAC_1_SQRT_2;
    let expected = ket(&[(h * h, 0.), (h * h, 0.), (h * h, 0.), (-h * h, 0.)]);
    assert!((overlap(psi.amplitudes(), &expected) - 1.0).abs() < 1e-15);
}

#[test]
fn three_qubit_cluster_form() {
    // (|+0+> + |-1->)/sqrt(2)
    let s = FRAC_1_SQRT_2;
    let plus = [s, s];
    let minus = [s, -s];
    let mut expected = vec![C64::default(); 8];
    for a in 0..2 {
        for c in 0..2 {
            expected[4 * a + c] += C64::new(s * plus[a] * plus[c], 0.0);
            expected[4 * a + 2 + c] += C64::new(s * minus[a] * minus[c], 0.0);
        }
    }
    let psi = build_graph_state(&linear_graph(3).unwrap());
    assert!((overlap(psi.amplitudes(), &expected) - 1.0).abs() < 1e-14);
}

#[test]
fn edgeless_graph_gives_plus_states() {
    let psi = build_graph_state(&Graph::edgeless(3).unwrap());
    let a = 1.0 / 8f64.sqrt();
    assert!((overlap(psi.amplitudes(), &ket(&[(a, 0.); 8])) - 1.0).abs() < 1e-15);
}

#[test]
fn edge_order_does_not_matter() {
    let a = Graph::new(4, [(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
    let b = Graph::new(4, [(3, 0), (2, 3), (1, 0), (2, 1)]).unwrap();
    assert_eq!(build_graph_state(&a), build_graph_state(&b));
}

#[test]
fn excited_states_form_an_orthonormal_basis() {
    let g = linear_graph(3).unwrap();
    let ground = build_graph_state(&g);
    assert_eq!(excited_state(&g, &ExcitationVector::zeros(3)).unwrap(), ground);
    let flipped = excited_state(&g, &ExcitationVector::new(vec![1, 0, 0]).unwrap()).unwrap();
    assert!(ground.inner(&flipped).unwrap().norm() < 1e-15);

    let basis: Vec<_> = ExcitationVector::all(3).map(|mu| excited_state(&g, &mu).unwrap()).collect();
    assert_eq!(basis.len(), 8);
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            let expected = if i == j { 1.0 } else { 0.0 };
            assert!((a.inner(b).unwrap() - C64::new(expected, 0.0)).norm() < 1e-14);
        }
    }
}

#[test]
fn hamiltonian_terms_of_the_chain() {
    let g = linear_graph(3).unwrap();
    let (i, x, z) = (pauli::identity(), pauli::x(), pauli::z());
    let terms = [
        tensor_all([&x, &z, &i]),
        tensor_all([&z, &x, &z]),
        tensor_all([&i, &z, &x]),
    ];
    for (v, term) in terms.iter().enumerate() {
        assert!(stabilizer(&g, v).unwrap().max_abs_diff(term) < 1e-15);
    }
    let gap = 1.3;
    let mut expected = ComplexMatrix::zeros(8);
    for t in &terms {
        expected = &expected + t;
    }
    let h = parent_hamiltonian(&g, gap).unwrap();
    assert!(h.max_abs_diff(&expected.scale_real(-gap / 2.0)) < 1e-15);

    let ground = build_graph_state(&g);
    assert!((ground.expectation(&h).unwrap().re + 1.5 * gap).abs() < 1e-14);
}

#[test]
fn single_vertex_hamiltonian() {
    let h = parent_hamiltonian(&Graph::edgeless(1).unwrap(), 2.0).unwrap();
    assert!(h.max_abs_diff(&pauli::x().scale_real(-1.0)) < 1e-15);
}

#[test]
fn terms_commute_and_ground_state_is_frustration_free() {
    for g in [linear_graph(4).unwrap(), Graph::new(4, [(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)]).unwrap()] {
        let n = g.n_vertices();
        let terms: Vec<_> = (0..n).map(|v| stabilizer(&g, v).unwrap()).collect();
        for a in &terms {
            for b in &terms {
                assert!(a.commutator(b).max_abs() < 1e-12);
            }
        }
        let ground = build_graph_state(&g);
        for t in &terms {
            let image = t.apply(ground.amplitudes()).unwrap();
            let dev = image.iter().zip(ground.amplitudes()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            assert!(dev < 1e-14);
        }
    }
}

#[test]
fn chain_spectrum() {
    let report = verify_spectrum(&linear_graph(3).unwrap(), 1.0).unwrap();
    let energies: Vec<f64> = report.levels.iter().map(|l| l.energy).collect();
    let mults: Vec<usize> = report.levels.iter().map(|l| l.multiplicity).collect();
    for (e, want) in energies.iter().zip([-1.5, -0.5, 0.5, 1.5]) {
        assert!((e - want).abs() < 1e-10);
    }
    assert_eq!(mults, [1, 3, 3, 1]);
    assert!(report.ground_unique);
    assert!((report.measured_gap - 1.0).abs() < 1e-10);
    assert!(report.max_residual < 1e-10);
    assert!(report.is_consistent());
}

#[test]
fn excitations_are_eigenvectors() {
    let g = linear_graph(4).unwrap();
    let gap = 0.7;
    let h = parent_hamiltonian(&g, gap).unwrap();
    for mu in ExcitationVector::all(4) {
        let psi = excited_state(&g, &mu).unwrap();
        let hv = h.apply(psi.amplitudes()).unwrap();
        let e = mu.energy(gap);
        let res: f64 = hv
            .iter()
            .zip(psi.amplitudes())
            .map(|(a, b)| (a - b * e).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(res < 1e-10);
    }
}

#[test]
fn embed_places_operator_on_its_qubit() {
    let m = embed(&pauli::x(), 1, 3).unwrap();
    let direct = tensor_all([&pauli::identity(), &pauli::x(), &pauli::identity()]);
    assert_eq!(m.max_abs_diff(&direct), 0.0);
}

#[test]
fn random_graphs_have_binomial_spectra() {
    let mut r = rng(11);
    use rand::Rng;
    for _ in 0..5 {
        let n = r.random_range(2..=5);
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .filter(|_| r.random_bool(0.5))
            .collect();
        let g = Graph::new(n, edges).unwrap();
        assert!(verify_spectrum(&g, 1.0).unwrap().is_consistent());
    }
}
