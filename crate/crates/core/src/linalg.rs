//! Dense complex linear algebra over qubit registers.
//!
//! Qubit 0 is the leftmost tensor factor, i.e. the most significant bit of
//! a computational-basis index: for `n` qubits, qubit `q` corresponds to the
//! bit `1 << (n - 1 - q)`.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex;

// Float methods for no_std builds; inherent ones shadow it once std is linked.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

/// Entrywise tolerance for Hermiticity checks.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Tolerance on the unit trace of a density matrix.
pub const TRACE_TOL: f64 = 1e-10;
/// Eigenvalues in `[-POSITIVITY_TOL, 0)` are treated as zero; anything below is an error.
pub const POSITIVITY_TOL: f64 = 1e-9;
/// Tolerance on the Euclidean norm of a pure state.
pub const NORM_TOL: f64 = 1e-12;

#[inline]
pub(crate) fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn qubit_bit(n_qubits: usize, qubit: usize) -> usize {
    1 << (n_qubits - 1 - qubit)
}

pub(crate) fn qubits_for_dim(dim: usize) -> Result<usize> {
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::InvalidState(alloc::format!(
            "dimension {dim} is not 2^n for n >= 1"
        )));
    }
    Ok(dim.trailing_zeros() as usize)
}

fn check_qubits(indices: &[usize], n_qubits: usize) -> Result<()> {
    match indices.iter().find(|&&q| q >= n_qubits) {
        Some(&index) => Err(Error::InvalidQubit { index, n_qubits }),
        None => Ok(()),
    }
}

/// Square dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    /// Builds a matrix from row-major entries.
    pub fn from_row_major(dim: usize, entries: &[C64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::LengthMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        Ok(Self(DMatrix::from_row_slice(dim, dim, entries)))
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self(DMatrix::from_fn(dim, dim, f))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let dim = diag.len();
        Self::from_fn(dim, |r, col| if r == col { c(diag[r], 0.0) } else { C64::default() })
    }

    /// `|u><v|`
    pub fn outer(u: &[C64], v: &[C64]) -> Result<Self> {
        if u.len() != v.len() {
            return Err(Error::DimensionMismatch {
                expected: u.len(),
                found: v.len(),
            });
        }
        Ok(Self::from_fn(u.len(), |r, col| u[r] * v[col].conj()))
    }

    pub fn from_nalgebra(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        Ok(Self(m))
    }

    pub fn as_nalgebra(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_nalgebra(self) -> DMatrix<C64> {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.0[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn conj(&self) -> Self {
        Self(self.0.map(|z| z.conj()))
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self(&self.0 * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self(self.0.map(|z| z * s))
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        let dim = self.dim();
        if v.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: v.len(),
            });
        }
        Ok((0..dim)
            .map(|r| (0..dim).map(|col| self.0[(r, col)] * v[col]).sum())
            .collect())
    }

    /// `<u|M|v>`
    pub fn sandwich(&self, u: &[C64], v: &[C64]) -> Result<C64> {
        let mv = self.apply(v)?;
        Ok(u.iter().zip(&mv).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        self.0
            .iter()
            .zip(other.0.iter())
            .fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn hermitian_deviation(&self) -> f64 {
        let dim = self.dim();
        let mut dev = 0.0f64;
        for r in 0..dim {
            for col in r..dim {
                dev = dev.max((self.0[(r, col)] - self.0[(col, r)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// `(M + M†)/2`
    pub fn hermitian_part(&self) -> Self {
        Self((&self.0 + self.0.adjoint()) * c(0.5, 0.0))
    }

    pub fn commutator(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0 - &other.0 * &self.0)
    }

    /// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
    pub fn eigh(&self) -> Result<HermitianEigen> {
        let deviation = self.hermitian_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let eig = nalgebra::SymmetricEigen::try_new(self.hermitian_part().0, f64::EPSILON, 0)
            .ok_or(Error::EigenFailure)?;
        let dim = self.dim();
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = DMatrix::from_fn(dim, dim, |r, col| eig.eigenvectors[(r, order[col])]);
        Ok(HermitianEigen {
            values,
            vectors: Self(vectors),
        })
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

/// Spectral decomposition `M = V diag(values) V†`.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Eigenvectors stored as columns, in the order of `values`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn eigenvector(&self, k: usize) -> Vec<C64> {
        (0..self.vectors.dim()).map(|r| self.vectors.get(r, k)).collect()
    }

    /// `V diag(f(values)) V†`
    pub fn map_values(&self, mut f: impl FnMut(f64) -> f64) -> ComplexMatrix {
        let weights: Vec<f64> = self.values.iter().map(|&v| f(v)).collect();
        self.recompose(&weights)
    }

    pub fn recompose(&self, weights: &[f64]) -> ComplexMatrix {
        let v = self.vectors.as_nalgebra();
        let dim = v.nrows();
        let mut scaled = v.clone();
        for (col, &w) in weights.iter().enumerate() {
            for r in 0..dim {
                scaled[(r, col)] *= w;
            }
        }
        ComplexMatrix(scaled * v.adjoint()).hermitian_part()
    }

    /// Eigenvalues with values in `[-POSITIVITY_TOL, 0)` clamped to zero.
    pub fn clamped_values(&self) -> Result<Vec<f64>> {
        self.values
            .iter()
            .map(|&v| {
                if v >= 0.0 {
                    Ok(v)
                } else if v >= -POSITIVITY_TOL {
                    Ok(0.0)
                } else {
                    Err(Error::NotPositive { min_eigenvalue: v })
                }
            })
            .collect()
    }
}

/// The single-qubit Pauli matrices.
pub mod pauli {
    use super::{c, ComplexMatrix};

    pub fn identity() -> ComplexMatrix {
        ComplexMatrix::identity(2)
    }

    pub fn x() -> ComplexMatrix {
        let (o, l) = (c(0.0, 0.0), c(1.0, 0.0));
        ComplexMatrix::from_row_major(2, &[o, l, l, o]).unwrap()
    }

    pub fn y() -> ComplexMatrix {
        let o = c(0.0, 0.0);
        ComplexMatrix::from_row_major(2, &[o, c(0.0, -1.0), c(0.0, 1.0), o]).unwrap()
    }

    pub fn z() -> ComplexMatrix {
        ComplexMatrix::from_real_diagonal(&[1.0, -1.0])
    }
}

/// Kronecker product; `a` occupies the more significant index bits.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix(a.0.kronecker(&b.0))
}

pub fn tensor_all<'a>(factors: impl IntoIterator<Item = &'a ComplexMatrix>) -> ComplexMatrix {
    factors
        .into_iter()
        .fold(ComplexMatrix::identity(1), |acc, f| tensor(&acc, f))
}

/// Pads a single-qubit operator with identities on the other `n_qubits - 1` qubits.
pub fn embed(op: &ComplexMatrix, qubit: usize, n_qubits: usize) -> Result<ComplexMatrix> {
    if op.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: op.dim(),
        });
    }
    check_qubits(&[qubit], n_qubits)?;
    let left = ComplexMatrix::identity(1 << qubit);
    let right = ComplexMatrix::identity(1 << (n_qubits - 1 - qubit));
    Ok(tensor(&tensor(&left, op), &right))
}

/// `U_q M U_q†` for a 2x2 `u` acting on `qubit`, without forming the padded operator.
pub fn conjugate_single_qubit(
    m: &ComplexMatrix,
    u: &ComplexMatrix,
    qubit: usize,
    n_qubits: usize,
) -> ComplexMatrix {
    let dim = m.dim();
    let bit = qubit_bit(n_qubits, qubit);
    let (u00, u01, u10, u11) = (u.get(0, 0), u.get(0, 1), u.get(1, 0), u.get(1, 1));
    let mut left = m.0.clone();
    for r0 in (0..dim).filter(|r| r & bit == 0) {
        let r1 = r0 | bit;
        for col in 0..dim {
            let (a, b) = (m.0[(r0, col)], m.0[(r1, col)]);
            left[(r0, col)] = u00 * a + u01 * b;
            left[(r1, col)] = u10 * a + u11 * b;
        }
    }
    let (v00, v01, v10, v11) = (u00.conj(), u10.conj(), u01.conj(), u11.conj());
    let mut out = left.clone();
    for c0 in (0..dim).filter(|col| col & bit == 0) {
        let c1 = c0 | bit;
        for r in 0..dim {
            let (a, b) = (left[(r, c0)], left[(r, c1)]);
            out[(r, c0)] = a * v00 + b * v10;
            out[(r, c1)] = a * v01 + b * v11;
        }
    }
    ComplexMatrix(out)
}

/// Partial trace of an arbitrary `2^n`-dimensional operator, keeping `keep`
/// (sorted and deduplicated; kept qubits retain their relative order).
pub fn partial_trace_operator(
    m: &ComplexMatrix,
    n_qubits: usize,
    keep: &[usize],
) -> Result<ComplexMatrix> {
    if m.dim() != 1 << n_qubits {
        return Err(Error::DimensionMismatch {
            expected: 1 << n_qubits,
            found: m.dim(),
        });
    }
    if keep.is_empty() {
        return Err(Error::EmptySubset);
    }
    check_qubits(keep, n_qubits)?;
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    let traced: Vec<usize> = (0..n_qubits).filter(|q| !kept.contains(q)).collect();

    let spread = |qubits: &[usize], value: usize| -> usize {
        let k = qubits.len();
        qubits.iter().enumerate().fold(0, |acc, (pos, &q)| {
            if value & (1 << (k - 1 - pos)) != 0 {
                acc | qubit_bit(n_qubits, q)
            } else {
                acc
            }
        })
    };
    let kept_offsets: Vec<usize> = (0..1 << kept.len()).map(|v| spread(&kept, v)).collect();
    let traced_offsets: Vec<usize> = (0..1 << traced.len()).map(|v| spread(&traced, v)).collect();

    let out_dim = kept_offsets.len();
    Ok(ComplexMatrix::from_fn(out_dim, |r, col| {
        traced_offsets
            .iter()
            .map(|&t| m.0[(kept_offsets[r] | t, kept_offsets[col] | t)])
            .sum()
    }))
}

/// Transposes the tensor factors listed in `subset` of a `2^n`-dimensional operator.
pub fn partial_transpose_operator(
    m: &ComplexMatrix,
    n_qubits: usize,
    subset: &[usize],
) -> Result<ComplexMatrix> {
    if m.dim() != 1 << n_qubits {
        return Err(Error::DimensionMismatch {
            expected: 1 << n_qubits,
            found: m.dim(),
        });
    }
    check_qubits(subset, n_qubits)?;
    let mask = subset.iter().fold(0, |acc, &q| acc | qubit_bit(n_qubits, q));
    let dim = m.dim();
    let mut out = DMatrix::zeros(dim, dim);
    for r in 0..dim {
        for col in 0..dim {
            let r2 = (r & !mask) | (col & mask);
            let c2 = (col & !mask) | (r & mask);
            out[(r2, c2)] = m.0[(r, col)];
        }
    }
    Ok(ComplexMatrix(out))
}

pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let reduced = partial_trace_operator(&rho.matrix, rho.n_qubits, keep)?;
    Ok(DensityMatrix::from_matrix_unchecked(reduced))
}

pub fn partial_transpose(rho: &DensityMatrix, subset: &[usize]) -> Result<ComplexMatrix> {
    partial_transpose_operator(&rho.matrix, rho.n_qubits, subset)
}

/// `exp(scale * h)` for Hermitian `h`.
pub fn hermitian_expm(h: &ComplexMatrix, scale: f64) -> Result<ComplexMatrix> {
    let eig = h.eigh()?;
    Ok(eig.map_values(|v| (scale * v).exp()))
}

/// Principal square root of a positive semidefinite matrix.
pub fn sqrt_psd(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = m.eigh()?;
    let vals = eig.clamped_values()?;
    Ok(eig.recompose(&vals.iter().map(|v| v.sqrt()).collect::<Vec<_>>()))
}

/// Sum of absolute eigenvalues of a Hermitian matrix.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(m.eigh()?.values.iter().map(|v| v.abs()).sum())
}

/// Uhlmann fidelity `(Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2`, clamped to `[0, 1]`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    let root = sqrt_psd(&rho.matrix)?;
    let inner = (&(&root * &sigma.matrix) * &root).hermitian_part();
    let eig = inner.eigh()?;
    let vals = eig.clamped_values()?;
    // Roundoff-level eigenvalues would otherwise leak sqrt(eps) into the trace.
    let floor = 64.0 * f64::EPSILON * vals.iter().fold(0.0f64, |m, &v| m.max(v));
    let root_trace: f64 = vals.iter().filter(|&&v| v > floor).map(|v| v.sqrt()).sum();
    Ok((root_trace * root_trace).clamp(0.0, 1.0))
}

/// `<psi|sigma|psi>`, the fidelity when the first argument is pure.
pub fn fidelity_pure(psi: &PureState, sigma: &DensityMatrix) -> Result<f64> {
    Ok(sigma
        .matrix
        .sandwich(&psi.amplitudes, &psi.amplitudes)?
        .re
        .clamp(0.0, 1.0))
}

/// Normalized state vector on `n_qubits` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    n_qubits: usize,
    amplitudes: Vec<C64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        let n_qubits = qubits_for_dim(amplitudes.len())?;
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(alloc::format!(
                "state norm {norm} differs from 1"
            )));
        }
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalized(mut amplitudes: Vec<C64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::InvalidState("zero or non-finite vector".into()));
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Self::new(amplitudes)
    }

    /// Computational basis state `|index>`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if n_qubits == 0 || index >= dim {
            return Err(Error::InvalidState(alloc::format!(
                "basis index {index} out of range for {n_qubits} qubits"
            )));
        }
        let mut amps = vec![C64::default(); dim];
        amps[index] = c(1.0, 0.0);
        Self::new(amps)
    }

    /// Tensor product of single-qubit kets, qubit 0 first.
    pub fn product(kets: &[[C64; 2]]) -> Result<Self> {
        let amps = kets.iter().fold(vec![c(1.0, 0.0)], |acc, k| {
            acc.iter().flat_map(|&a| [a * k[0], a * k[1]]).collect()
        });
        Self::normalized(amps)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// `<self|other>`
    pub fn inner(&self, other: &PureState) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amplitudes, &self.amplitudes).unwrap()
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::from_matrix_unchecked(self.projector())
    }

    pub fn expectation(&self, op: &ComplexMatrix) -> Result<C64> {
        op.sandwich(&self.amplitudes, &self.amplitudes)
    }
}

/// Hermitian, unit-trace, positive semidefinite matrix on `n_qubits` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and numerical positivity.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let n_qubits = qubits_for_dim(matrix.dim())?;
        check_density_invariants(&matrix)?;
        Ok(Self {
            n_qubits,
            matrix: matrix.hermitian_part(),
        })
    }

    /// For matrices that are density matrices by construction (channel
    /// outputs, reductions); only symmetrizes away roundoff.
    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        let n_qubits = matrix.dim().trailing_zeros() as usize;
        Self {
            n_qubits,
            matrix: matrix.hermitian_part(),
        }
    }

    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        Self::from_matrix_unchecked(ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64))
    }

    /// Normalizes a positive semidefinite matrix to unit trace.
    pub fn from_unnormalized(matrix: ComplexMatrix) -> Result<Self> {
        let tr = matrix.trace().re;
        if !(tr > 0.0 && tr.is_finite()) {
            return Err(Error::InvalidState(alloc::format!("trace {tr} is not positive")));
        }
        Self::new(matrix.scale_real(1.0 / tr))
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// `Tr(rho^2)`
    pub fn purity(&self) -> f64 {
        self.matrix.as_nalgebra().iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(self.matrix.eigh()?.values)
    }

    /// `Tr(rho O)`
    pub fn expectation(&self, op: &ComplexMatrix) -> Result<C64> {
        if op.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: op.dim(),
            });
        }
        Ok((&self.matrix * op).trace())
    }

    /// Re-checks the density-matrix invariants.
    pub fn validate(&self) -> Result<()> {
        check_density_invariants(&self.matrix)
    }
}

fn check_density_invariants(m: &ComplexMatrix) -> Result<()> {
    let deviation = m.hermitian_deviation();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let tr = m.trace();
    if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
        return Err(Error::InvalidState(alloc::format!(
            "trace {} + {}i differs from 1",
            tr.re,
            tr.im
        )));
    }
    let min = m.eigh()?.values[0];
    if min < -POSITIVITY_TOL {
        return Err(Error::NotPositive {
            min_eigenvalue: min,
        });
    }
    Ok(())
}
