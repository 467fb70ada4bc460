//! Measurement-based single-qubit state preparation on the three-qubit chain.
//!
//! Qubit order is `(A_p, B_s, B_p) = (0, 1, 2)`: the chain's two end qubits
//! are `A_p` and `B_p`, and `B_s` sits in the middle. Measuring `B_p` and
//! `B_s` leaves a conditional state on `A_p`, which is scored against the
//! state the noiseless protocol would have produced for the same bases and
//! outcomes.

use alloc::string::ToString;
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;
use core::fmt;

use crate::error::{Error, Result};
use crate::graph::{build_graph_state, linear_graph, Graph};
use crate::linalg::{c, fidelity_pure, ComplexMatrix, DensityMatrix, PureState, C64};

/// Conditional states with a smaller outcome probability are reported as
/// maximally mixed.
pub const MIN_PROBABILITY: f64 = 1e-12;

const EIGENSTATE_TOL: f64 = 1e-9;

/// Single-qubit Pauli measurement basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MeasurementBasis {
    X,
    Y,
    Z,
}

impl MeasurementBasis {
    pub const ALL: [MeasurementBasis; 3] = [Self::X, Self::Y, Self::Z];

    /// Eigenstate for outcome 0 (`+1`) or 1 (`-1`):
    /// `|+>,|->`, `|r>,|l>`, `|0>,|1>`.
    pub fn eigenstate(self, outcome: u8) -> [C64; 2] {
        let h = FRAC_1_SQRT_2;
        let sign = if outcome == 0 { 1.0 } else { -1.0 };
        match self {
            Self::X => [c(h, 0.0), c(sign * h, 0.0)],
            Self::Y => [c(h, 0.0), c(0.0, sign * h)],
            Self::Z => {
                if outcome == 0 {
                    [c(1.0, 0.0), c(0.0, 0.0)]
                } else {
                    [c(0.0, 0.0), c(1.0, 0.0)]
                }
            }
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::X => "X",
            Self::Y => "Y",
            Self::Z => "Z",
        }
    }

    /// Bloch vector component index.
    fn axis(self) -> usize {
        match self {
            Self::X => 0,
            Self::Y => 1,
            Self::Z => 2,
        }
    }
}

impl fmt::Display for MeasurementBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Outcome probability and the renormalized state left on `A_p`.
#[derive(Clone, Debug, PartialEq)]
pub struct Conditional {
    pub probability: f64,
    pub state: DensityMatrix,
    /// Set when the outcome is (numerically) impossible; `state` is then `I/2`.
    pub zero_probability: bool,
}

fn check_three_qubits(rho: &DensityMatrix) -> Result<()> {
    if rho.n_qubits() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: rho.n_qubits(),
        });
    }
    Ok(())
}

/// Projects `B_s` onto `bs_ket` and `B_p` onto `bp_ket` and returns the
/// resulting state of `A_p`.
pub fn conditional_state_for_kets(rho: &DensityMatrix, bp_ket: [C64; 2], bs_ket: [C64; 2]) -> Result<Conditional> {
    check_three_qubits(rho)?;
    // P = I (x) |bs><bs| (x) |bp><bp| is rank-one on the measured pair, so
    // P rho P restricted to A_p is V† rho V with V = I (x) |bs> (x) |bp>.
    let m = rho.matrix();
    let pair = [
        bs_ket[0] * bp_ket[0],
        bs_ket[0] * bp_ket[1],
        bs_ket[1] * bp_ket[0],
        bs_ket[1] * bp_ket[1],
    ];
    let reduced = ComplexMatrix::from_fn(2, |a, b| {
        let mut acc = C64::default();
        for (i, &u) in pair.iter().enumerate() {
            for (j, &v) in pair.iter().enumerate() {
                acc += u.conj() * m.get(4 * a + i, 4 * b + j) * v;
            }
        }
        acc
    });
    let probability = reduced.trace().re.max(0.0);
    if probability < MIN_PROBABILITY {
        return Ok(Conditional {
            probability,
            state: DensityMatrix::maximally_mixed(1),
            zero_probability: true,
        });
    }
    Ok(Conditional {
        probability,
        state: DensityMatrix::from_unnormalized(reduced)?,
        zero_probability: false,
    })
}

/// Measures `B_p` in `basis_bp` and `B_s` in `basis_bs` with the given outcomes.
pub fn conditional_state(
    rho: &DensityMatrix,
    basis_bp: MeasurementBasis,
    basis_bs: MeasurementBasis,
    outcome_bp: u8,
    outcome_bs: u8,
) -> Result<Conditional> {
    if outcome_bp > 1 || outcome_bs > 1 {
        return Err(Error::InvalidParameter {
            name: "measurement outcome",
            value: outcome_bp.max(outcome_bs) as f64,
        });
    }
    conditional_state_for_kets(rho, basis_bp.eigenstate(outcome_bp), basis_bs.eigenstate(outcome_bs))
}

/// Bloch vector of a single-qubit state.
pub fn bloch_vector(rho: &DensityMatrix) -> [f64; 3] {
    let m = rho.matrix();
    let off = m.get(0, 1);
    [2.0 * off.re, -2.0 * off.im, (m.get(0, 0) - m.get(1, 1)).re]
}

/// The Pauli axis whose eigenstate `rho` is, if any.
pub fn eigen_axis(rho: &DensityMatrix) -> Option<(MeasurementBasis, u8)> {
    let b = bloch_vector(rho);
    MeasurementBasis::ALL.into_iter().find_map(|axis| {
        let v = b[axis.axis()];
        let others: f64 = (0..3).filter(|&k| k != axis.axis()).map(|k| b[k].abs()).sum();
        if (v.abs() - 1.0).abs() < EIGENSTATE_TOL && others < EIGENSTATE_TOL {
            Some((axis, if v > 0.0 { 0 } else { 1 }))
        } else {
            None
        }
    })
}

/// Which basis pairs take part in the average.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PairSelection {
    /// `B_p` measured in `Z`, which removes it from the chain, then `B_s` in
    /// `X`, `Y` or `Z`. One pair per target axis.
    #[default]
    Teleportation,
    /// Every pair whose noiseless outputs are all Pauli eigenstates.
    AllEigenstatePairs,
}

/// How outcomes within one basis pair are weighted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OutcomeWeighting {
    /// By outcome probability.
    #[default]
    Probability,
    /// Equally over the four outcomes.
    Uniform,
}

/// The noiseless protocol output for one basis pair and outcome.
#[derive(Clone, Debug, PartialEq)]
pub struct TargetEntry {
    pub basis_bp: MeasurementBasis,
    pub basis_bs: MeasurementBasis,
    pub outcome_bp: u8,
    pub outcome_bs: u8,
    pub target: PureState,
    pub axis: MeasurementBasis,
    pub eigen_outcome: u8,
}

/// Targets for every enabled basis pair, four outcomes each.
#[derive(Clone, Debug, PartialEq)]
pub struct TargetMap {
    pairs: Vec<(MeasurementBasis, MeasurementBasis)>,
    entries: Vec<TargetEntry>,
}

fn pure_from_conditional(cond: &Conditional) -> Result<PureState> {
    let eig = cond.state.matrix().eigh()?;
    PureState::normalized(eig.eigenvector(1))
}

/// Derives targets as the conditional states of the ideal chain (which are
/// pure) and keeps the basis pairs allowed by `selection` whose four outputs
/// are all eigenstates of `X`, `Y` or `Z`.
pub fn target_map(g: &Graph, selection: PairSelection) -> Result<TargetMap> {
    if *g != linear_graph(3)? {
        return Err(Error::TargetMap(
            "preparation targets are defined for the three-qubit chain only".to_string(),
        ));
    }
    let ground = build_graph_state(g).to_density();
    let candidates: Vec<(MeasurementBasis, MeasurementBasis)> = match selection {
        PairSelection::Teleportation => MeasurementBasis::ALL
            .into_iter()
            .map(|bs| (MeasurementBasis::Z, bs))
            .collect(),
        PairSelection::AllEigenstatePairs => MeasurementBasis::ALL
            .into_iter()
            .flat_map(|bp| MeasurementBasis::ALL.into_iter().map(move |bs| (bp, bs)))
            .collect(),
    };

    let mut pairs = Vec::new();
    let mut entries = Vec::new();
    for (bp, bs) in candidates {
        let mut pair_entries = Vec::new();
        for ob in 0..2u8 {
            for os in 0..2u8 {
                let cond = conditional_state(&ground, bp, bs, ob, os)?;
                if cond.zero_probability {
                    break;
                }
                let Some((axis, eigen_outcome)) = eigen_axis(&cond.state) else {
                    break;
                };
                pair_entries.push(TargetEntry {
                    basis_bp: bp,
                    basis_bs: bs,
                    outcome_bp: ob,
                    outcome_bs: os,
                    target: pure_from_conditional(&cond)?,
                    axis,
                    eigen_outcome,
                });
            }
        }
        if pair_entries.len() == 4 {
            pairs.push((bp, bs));
            entries.extend(pair_entries);
        }
    }

    let covered = |a: MeasurementBasis| entries.iter().any(|e| e.axis == a);
    if !MeasurementBasis::ALL.into_iter().all(covered) {
        return Err(Error::TargetMap(
            "enabled basis pairs do not cover all three Pauli axes".to_string(),
        ));
    }
    Ok(TargetMap { pairs, entries })
}

/// One row of the per-outcome breakdown.
#[derive(Clone, Debug, PartialEq)]
pub struct PreparationRecord {
    pub basis_bp: MeasurementBasis,
    pub basis_bs: MeasurementBasis,
    pub outcome_bp: u8,
    pub outcome_bs: u8,
    pub probability: f64,
    pub conditional_state: DensityMatrix,
    pub target_state: PureState,
    pub fidelity: f64,
}

impl TargetMap {
    pub fn pairs(&self) -> &[(MeasurementBasis, MeasurementBasis)] {
        &self.pairs
    }

    pub fn entries(&self) -> &[TargetEntry] {
        &self.entries
    }

    pub fn target(
        &self,
        basis_bp: MeasurementBasis,
        basis_bs: MeasurementBasis,
        outcome_bp: u8,
        outcome_bs: u8,
    ) -> Option<&PureState> {
        self.entries
            .iter()
            .find(|e| {
                e.basis_bp == basis_bp
                    && e.basis_bs == basis_bs
                    && e.outcome_bp == outcome_bp
                    && e.outcome_bs == outcome_bs
            })
            .map(|e| &e.target)
    }

    /// Conditional states and fidelities for every enabled pair and outcome.
    pub fn breakdown(&self, rho: &DensityMatrix) -> Result<Vec<PreparationRecord>> {
        check_three_qubits(rho)?;
        self.entries
            .iter()
            .map(|e| {
                let cond = conditional_state(rho, e.basis_bp, e.basis_bs, e.outcome_bp, e.outcome_bs)?;
                Ok(PreparationRecord {
                    basis_bp: e.basis_bp,
                    basis_bs: e.basis_bs,
                    outcome_bp: e.outcome_bp,
                    outcome_bs: e.outcome_bs,
                    probability: cond.probability,
                    fidelity: fidelity_pure(&e.target, &cond.state)?,
                    conditional_state: cond.state,
                    target_state: e.target.clone(),
                })
            })
            .collect()
    }

    /// Uniform over basis pairs; within a pair, weighted per `weighting`.
    pub fn average_fidelity(&self, rho: &DensityMatrix, weighting: OutcomeWeighting) -> Result<f64> {
        let records = self.breakdown(rho)?;
        let per_pair: Vec<f64> = records
            .chunks(4)
            .map(|rows| match weighting {
                OutcomeWeighting::Probability => {
                    let total: f64 = rows.iter().map(|r| r.probability).sum();
                    rows.iter().map(|r| r.probability * r.fidelity).sum::<f64>() / total
                }
                OutcomeWeighting::Uniform => rows.iter().map(|r| r.fidelity).sum::<f64>() / 4.0,
            })
            .collect();
        Ok(per_pair.iter().sum::<f64>() / per_pair.len() as f64)
    }
}

/// Average preparation fidelity with the default targets and weighting.
pub fn average_preparation_fidelity(rho: &DensityMatrix) -> Result<f64> {
    target_map(&linear_graph(3)?, PairSelection::default())?
        .average_fidelity(rho, OutcomeWeighting::default())
}

/// Best average fidelity of single-qubit preparation by measure-and-prepare.
pub fn classical_threshold() -> f64 {
    2.0 / 3.0
}
