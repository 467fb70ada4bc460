mod common;

use std::f64::consts::PI;
use thermal_cluster_core::entanglement::{
    all_bipartitions, classify, negativity, transition_points, Bipartition, ChainNegativities,
    EntanglementClass, DEFAULT_TOLERANCE,
};
use thermal_cluster_core::graph::build_graph_state;
use thermal_cluster_core::linalg::tensor;
use thermal_cluster_core::thermal::{p_from_temperature, temperature_from_p, thermal_state_model};
use thermal_cluster_core::{linear_graph, DensityMatrix, PureState};

/// Vanishing temperatures of the ideal chain, located by bisection.
const T_END_VANISHES: f64 = 1.134_592_657;
const T_MIDDLE_VANISHES: f64 = 1.641_017_930;

#[test]
fn bell_state_has_half_negativity() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let bell = PureState::new(common::ket(&[(h, 0.), (0., 0.), (0., 0.), (h, 0.)])).unwrap().to_density();
    let n = negativity(&bell, &Bipartition::new(2, &[0]).unwrap()).unwrap();
    assert!((n - 0.5).abs() < 1e-10);
}

#[test]
fn product_and_mixed_states_have_zero_negativity() {
    let mut r = common::rng(31);
    let (a, b, c) = (
        common::random_density(1, &mut r),
        common::random_density(1, &mut r),
        common::random_density(1, &mut r),
    );
    let product = DensityMatrix::new(tensor(&tensor(a.matrix(), b.matrix()), c.matrix())).unwrap();
    for part in all_bipartitions(3).unwrap() {
        assert!(negativity(&product, &part).unwrap() < 1e-12);
        assert!(negativity(&DensityMatrix::maximally_mixed(3), &part).unwrap() < 1e-15);
    }
}

#[test]
fn pure_cluster_is_free_with_half_negativities() {
    let rho = build_graph_state(&linear_graph(3).unwrap()).to_density();
    let report = classify(&rho, DEFAULT_TOLERANCE).unwrap();
    assert_eq!(report.negativities.len(), 3);
    for &(_, n) in &report.negativities {
        assert!((n - 0.5).abs() < 1e-10);
    }
    assert_eq!(report.class, Some(EntanglementClass::Free));
    assert_eq!(
        classify(&DensityMatrix::maximally_mixed(3), 1e-9).unwrap().class,
        Some(EntanglementClass::PptAll)
    );
}

#[test]
fn bipartition_enumeration() {
    assert_eq!(all_bipartitions(2).unwrap().len(), 1);
    assert_eq!(all_bipartitions(3).unwrap().len(), 3);
    assert_eq!(all_bipartitions(4).unwrap().len(), 7);
}

#[test]
fn ideal_transitions_are_ordered_and_pinned() {
    let tp = transition_points(PI, 1e-12).unwrap();
    assert!(tp.p_free_to_bound < tp.p_bound_to_ppt);
    assert!((tp.t_free_to_bound - T_END_VANISHES).abs() < 1e-6);
    assert!((tp.t_bound_to_ppt - T_MIDDLE_VANISHES).abs() < 1e-6);
    // Closed form for the end cuts: p = 2 - sqrt(2).
    assert!((tp.p_free_to_bound - (2.0 - 2f64.sqrt())).abs() < 1e-9);
}

#[test]
fn bound_window_of_the_ideal_model() {
    let g = linear_graph(3).unwrap();
    let tp = transition_points(PI, 1e-12).unwrap();
    let p_mid = 0.5 * (tp.p_free_to_bound + tp.p_bound_to_ppt);
    let inside = classify(&thermal_state_model(&g, p_mid, PI).unwrap(), DEFAULT_TOLERANCE).unwrap();
    assert_eq!(inside.class, Some(EntanglementClass::Bound));
    let below = classify(&thermal_state_model(&g, 0.9 * tp.p_free_to_bound, PI).unwrap(), DEFAULT_TOLERANCE).unwrap();
    assert_eq!(below.class, Some(EntanglementClass::Free));
    let above = classify(&thermal_state_model(&g, 0.5 * (1.0 + tp.p_bound_to_ppt), PI).unwrap(), DEFAULT_TOLERANCE).unwrap();
    assert_eq!(above.class, Some(EntanglementClass::PptAll));
}

#[test]
fn identity_channel_cannot_be_bracketed() {
    assert!(transition_points(0.0, DEFAULT_TOLERANCE).is_err());
}

#[test]
fn negativities_decrease_along_the_sweep() {
    let g = linear_graph(3).unwrap();
    for alpha in [PI, 0.84 * PI] {
        let mut last = [f64::INFINITY; 3];
        for k in 0..=100 {
            let negs = ChainNegativities::of(&thermal_state_model(&g, k as f64 / 100.0, alpha).unwrap())
                .unwrap()
                .as_array();
            for (n, l) in negs.iter().zip(&last) {
                assert!(*n <= l + 1e-9);
            }
            last = negs;
        }
    }
}

#[test]
fn end_cuts_are_symmetric() {
    let g = linear_graph(3).unwrap();
    for alpha in [PI, 0.84 * PI] {
        for k in 0..=100 {
            let negs = ChainNegativities::of(&thermal_state_model(&g, k as f64 / 100.0, alpha).unwrap()).unwrap();
            assert!((negs.end_first - negs.end_last).abs() < 1e-10);
        }
    }
}

#[test]
fn middle_cut_survives_longest() {
    let g = linear_graph(3).unwrap();
    let t = 0.5 * (T_END_VANISHES + T_MIDDLE_VANISHES);
    let negs = ChainNegativities::of(&thermal_state_model(&g, p_from_temperature(t).unwrap(), PI).unwrap()).unwrap();
    assert!(negs.end_first < 1e-12 && negs.end_last < 1e-12);
    assert!(negs.middle > 1e-4);
}

#[test]
fn imperfect_phase_gate_keeps_the_middle_cut_entangled_at_high_temperature() {
    let g = linear_graph(3).unwrap();
    let negs = ChainNegativities::of(&thermal_state_model(&g, p_from_temperature(1.8).unwrap(), 0.84 * PI).unwrap()).unwrap();
    assert!(negs.end_first < 1e-12);
    assert!(negs.middle > 0.01 && negs.middle < 0.07);
    let tp = transition_points(0.84 * PI, 1e-12).unwrap();
    assert!(tp.t_free_to_bound > T_END_VANISHES);
    assert!(temperature_from_p(tp.p_bound_to_ppt).unwrap() > T_MIDDLE_VANISHES);
}

#[test]
fn classification_depends_only_on_the_crossing_pattern() {
    let g = linear_graph(3).unwrap();
    for p in [0.2, 0.62, 0.68, 0.9] {
        let rho = thermal_state_model(&g, p, PI).unwrap();
        let negs: Vec<f64> = classify(&rho, 1e-9).unwrap().negativities.iter().map(|&(_, v)| v).collect();
        let smallest = negs.iter().copied().filter(|&v| v > 1e-9).fold(1.0, f64::min);
        let reference = classify(&rho, 1e-9).unwrap().class;
        for tol in [2e-9, 1e-6, 0.5 * smallest, 0.99 * smallest] {
            assert_eq!(classify(&rho, tol).unwrap().class, reference);
        }
    }
}
