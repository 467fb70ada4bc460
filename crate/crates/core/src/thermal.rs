//! Thermal cluster states by two routes: Gibbs exponentiation of the parent
//! Hamiltonian, and independent local dephasing of the ground state.
//!
//! Temperatures are always the dimensionless ratio `T/gap` (with `k_B = 1`).
//! The dephasing strength `p` and the temperature are related by
//! `p = 2 / (1 + exp(1 / t))`, with `t = 0 <-> p = 0` and `t = inf <-> p = 1`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;


// Float methods for no_std builds; inherent ones shadow it once std is linked.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::graph::{build_graph_state, parent_hamiltonian, Graph, MAX_DENSE_QUBITS};
use crate::linalg::{
    c, conjugate_single_qubit, hermitian_expm, pauli, ComplexMatrix, DensityMatrix,
};

/// Weights of a mixed-unitary channel must sum to one within this.
pub const WEIGHT_TOL: f64 = 1e-12;

fn check_p(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "dephasing strength p",
            value: p,
        })
    }
}

/// Dephasing strength for a temperature `t = T/gap`.
pub fn p_from_temperature(t_over_delta: f64) -> Result<f64> {
    if t_over_delta.is_nan() || t_over_delta < 0.0 {
        return Err(Error::InvalidParameter {
            name: "T/gap",
            value: t_over_delta,
        });
    }
    if t_over_delta == 0.0 {
        return Ok(0.0);
    }
    if t_over_delta.is_infinite() {
        return Ok(1.0);
    }
    Ok(2.0 / (1.0 + (1.0 / t_over_delta).exp()))
}

/// Inverse of [`p_from_temperature`]: `T/gap = 1 / (ln(2 - p) - ln p)`.
pub fn temperature_from_p(p: f64) -> Result<f64> {
    check_p(p)?;
    if p == 0.0 {
        return Ok(0.0);
    }
    if p == 1.0 {
        return Ok(f64::INFINITY);
    }
    // ln((2 - p)/p) = ln(1 + 2(1 - p)/p), accurate as p -> 1.
    Ok(1.0 / (2.0 * (1.0 - p) / p).ln_1p())
}

/// A dephasing strength together with its temperature.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TemperaturePoint {
    pub p: f64,
    pub t_over_delta: f64,
}

impl TemperaturePoint {
    pub fn from_p(p: f64) -> Result<Self> {
        Ok(Self {
            p,
            t_over_delta: temperature_from_p(p)?,
        })
    }

    pub fn from_temperature(t_over_delta: f64) -> Result<Self> {
        Ok(Self {
            p: p_from_temperature(t_over_delta)?,
            t_over_delta,
        })
    }
}

/// `e^{-H/T} / Tr e^{-H/T}` for `H` the parent Hamiltonian of `g`.
///
/// `t = 0` returns the ground-state projector and `t = inf` the maximally
/// mixed state; neither is taken as a numerical limit.
pub fn gibbs_state(g: &Graph, gap: f64, t_over_delta: f64) -> Result<DensityMatrix> {
    let n = g.n_vertices();
    if n > MAX_DENSE_QUBITS {
        return Err(Error::InvalidParameter {
            name: "vertex count (dense limit 10)",
            value: n as f64,
        });
    }
    p_from_temperature(t_over_delta)?;
    let h = parent_hamiltonian(g, gap)?;
    if t_over_delta == 0.0 {
        return Ok(build_graph_state(g).to_density());
    }
    if t_over_delta.is_infinite() {
        return Ok(DensityMatrix::maximally_mixed(n));
    }
    // Shift the spectrum from [-N gap/2, N gap/2] to [0, N gap] so the
    // exponential cannot overflow at low temperature.
    let shift = ComplexMatrix::identity(h.dim()).scale_real(n as f64 * gap / 2.0);
    let shifted = &h + &shift;
    let boltzmann = hermitian_expm(&shifted, -1.0 / (t_over_delta * gap))?;
    DensityMatrix::from_unnormalized(boltzmann)
}

/// Mixed-unitary single-qubit channel `rho -> sum_k w_k U_k rho U_k†`.
#[derive(Clone, Debug, PartialEq)]
pub struct Channel {
    kraus: Vec<(f64, ComplexMatrix)>,
    target_qubit: usize,
}

impl Channel {
    pub fn mixed_unitary(kraus: Vec<(f64, ComplexMatrix)>, target_qubit: usize) -> Result<Self> {
        let mut total = 0.0;
        for (w, u) in &kraus {
            if !(0.0..=1.0).contains(w) {
                return Err(Error::InvalidParameter {
                    name: "channel weight",
                    value: *w,
                });
            }
            if u.dim() != 2 {
                return Err(Error::DimensionMismatch {
                    expected: 2,
                    found: u.dim(),
                });
            }
            let unitarity = (&u.adjoint() * u).max_abs_diff(&ComplexMatrix::identity(2));
            if unitarity > 1e-12 {
                return Err(Error::InvalidParameter {
                    name: "unitarity defect",
                    value: unitarity,
                });
            }
            total += w;
        }
        if (total - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::InvalidParameter {
                name: "channel weight sum",
                value: total,
            });
        }
        Ok(Self {
            kraus,
            target_qubit,
        })
    }

    pub fn kraus(&self) -> &[(f64, ComplexMatrix)] {
        &self.kraus
    }

    pub fn target_qubit(&self) -> usize {
        self.target_qubit
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let n = rho.n_qubits();
        if self.target_qubit >= n {
            return Err(Error::InvalidQubit {
                index: self.target_qubit,
                n_qubits: n,
            });
        }
        let mut acc = ComplexMatrix::zeros(rho.dim());
        for (w, u) in &self.kraus {
            if *w == 0.0 {
                continue;
            }
            let term = conjugate_single_qubit(rho.matrix(), u, self.target_qubit, n);
            acc = &acc + &term.scale_real(*w);
        }
        Ok(DensityMatrix::from_matrix_unchecked(acc))
    }
}

/// `F(alpha) = |0><0| + e^{i alpha} |1><1|`
pub fn phase_gate(alpha: f64) -> ComplexMatrix {
    let (s, co) = alpha.sin_cos();
    ComplexMatrix::from_row_major(2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(co, s)]).unwrap()
}

/// Identity with weight `1 - p/2`, `Z` with weight `p/2`.
pub fn dephasing_channel(p: f64, qubit: usize) -> Result<Channel> {
    check_p(p)?;
    Channel::mixed_unitary(
        vec![(1.0 - p / 2.0, pauli::identity()), (p / 2.0, pauli::z())],
        qubit,
    )
}

/// Imperfect dephasing: `Z` replaced by the phase gate `F(alpha)`.
pub fn phase_gate_channel(p: f64, alpha: f64, qubit: usize) -> Result<Channel> {
    check_p(p)?;
    if !alpha.is_finite() {
        return Err(Error::InvalidParameter {
            name: "alpha",
            value: alpha,
        });
    }
    Channel::mixed_unitary(
        vec![(1.0 - p / 2.0, pauli::identity()), (p / 2.0, phase_gate(alpha))],
        qubit,
    )
}

/// Applies `channels` in order.
pub fn apply_channels(state: &DensityMatrix, channels: &[Channel]) -> Result<DensityMatrix> {
    channels
        .iter()
        .try_fold(state.clone(), |rho, ch| ch.apply(&rho))
}

/// The ground-state projector of `g` dephased by `p` on every qubit.
pub fn dephased_ground_state(g: &Graph, p: f64) -> Result<DensityMatrix> {
    thermal_state_model(g, p, PI)
}

/// Graph state with `phase_gate_channel(p, alpha)` on every qubit.
/// `alpha = pi` is the ideal thermal state.
pub fn thermal_state_model(g: &Graph, p: f64, alpha: f64) -> Result<DensityMatrix> {
    thermal_state_model_per_qubit(g, p, &vec![alpha; g.n_vertices()])
}

/// As [`thermal_state_model`] with an individual phase per qubit.
pub fn thermal_state_model_per_qubit(g: &Graph, p: f64, alphas: &[f64]) -> Result<DensityMatrix> {
    if alphas.len() != g.n_vertices() {
        return Err(Error::LengthMismatch {
            expected: g.n_vertices(),
            found: alphas.len(),
        });
    }
    let channels = alphas
        .iter()
        .enumerate()
        .map(|(q, &a)| {
            if a == PI {
                dephasing_channel(p, q)
            } else {
                phase_gate_channel(p, a, q)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    apply_channels(&build_graph_state(g).to_density(), &channels)
}
