//! Negativities across bipartitions and the free / bound / PPT classification.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::graph::linear_graph;
use crate::linalg::{partial_transpose, DensityMatrix};
use crate::thermal::{temperature_from_p, thermal_state_model};

/// Default threshold for noiseless model states.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// A cut of the register into `side_a` and its complement.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bipartition {
    n_qubits: usize,
    side_a: Vec<usize>,
}

impl Bipartition {
    pub fn new(n_qubits: usize, side_a: &[usize]) -> Result<Self> {
        let mut side: Vec<usize> = side_a.to_vec();
        side.sort_unstable();
        side.dedup();
        if side.is_empty() {
            return Err(Error::EmptySubset);
        }
        if let Some(&index) = side.iter().find(|&&q| q >= n_qubits) {
            return Err(Error::InvalidQubit { index, n_qubits });
        }
        if side.len() == n_qubits {
            return Err(Error::InvalidParameter {
                name: "bipartition side size (must be a proper subset)",
                value: side.len() as f64,
            });
        }
        Ok(Self {
            n_qubits,
            side_a: side,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn side_a(&self) -> &[usize] {
        &self.side_a
    }

    pub fn side_b(&self) -> Vec<usize> {
        (0..self.n_qubits)
            .filter(|q| !self.side_a.contains(q))
            .collect()
    }
}

/// `"0|12"` style label.
impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in &self.side_a {
            write!(f, "{q}")?;
        }
        f.write_str("|")?;
        for q in self.side_b() {
            write!(f, "{q}")?;
        }
        Ok(())
    }
}

/// Absolute sum of the negative eigenvalues of the partial transpose,
/// i.e. `(||rho^{T_A}||_1 - 1) / 2`.
pub fn negativity(rho: &DensityMatrix, part: &Bipartition) -> Result<f64> {
    if part.n_qubits != rho.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: rho.n_qubits(),
            found: part.n_qubits,
        });
    }
    let pt = partial_transpose(rho, &part.side_a)?;
    Ok(pt
        .eigh()?
        .values
        .iter()
        .filter(|&&v| v < 0.0)
        .fold(0.0, |acc, v| acc - v))
}

/// Every distinct split of `n` qubits, `2^(n-1) - 1` of them. Each split is
/// represented by its smaller side (the side holding qubit 0 on ties),
/// ordered by size and then lexicographically.
pub fn all_bipartitions(n: usize) -> Result<Vec<Bipartition>> {
    if n < 2 {
        return Err(Error::InvalidParameter {
            name: "qubit count for bipartitions",
            value: n as f64,
        });
    }
    let mut sides: Vec<Vec<usize>> = (1usize..(1 << n) - 1)
        .map(|mask| (0..n).filter(|q| mask & (1 << q) != 0).collect::<Vec<_>>())
        .filter(|s| 2 * s.len() < n || (2 * s.len() == n && s[0] == 0))
        .collect();
    sides.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    sides.iter().map(|s| Bipartition::new(n, s)).collect()
}

/// Entanglement regime of a three-qubit state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EntanglementClass {
    /// Every bipartition PPT. A separability candidate only; PPT does not
    /// certify separability.
    PptAll,
    /// Some but not all bipartitions NPT.
    Bound,
    /// Every bipartition NPT.
    Free,
}

impl EntanglementClass {
    pub fn label(self) -> &'static str {
        match self {
            EntanglementClass::PptAll => "PPT_ALL",
            EntanglementClass::Bound => "BOUND",
            EntanglementClass::Free => "FREE",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        match s {
            "PPT_ALL" => Some(EntanglementClass::PptAll),
            "BOUND" => Some(EntanglementClass::Bound),
            "FREE" => Some(EntanglementClass::Free),
            _ => None,
        }
    }

    /// Classifies from per-bipartition "negativity exceeds its threshold" flags.
    pub fn from_pattern(npt: &[bool]) -> Self {
        if npt.iter().all(|&b| !b) {
            EntanglementClass::PptAll
        } else if npt.iter().all(|&b| b) {
            EntanglementClass::Free
        } else {
            EntanglementClass::Bound
        }
    }

    /// Pattern from negativities and per-bipartition thresholds; a
    /// bipartition counts as NPT when its negativity is strictly above its
    /// threshold.
    pub fn from_negativities(negativities: &[f64], thresholds: &[f64]) -> Self {
        let flags: Vec<bool> = negativities
            .iter()
            .zip(thresholds)
            .map(|(n, t)| n > t)
            .collect();
        Self::from_pattern(&flags)
    }
}

impl fmt::Display for EntanglementClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntanglementReport {
    pub negativities: Vec<(Bipartition, f64)>,
    /// Only assigned for three-qubit states.
    pub class: Option<EntanglementClass>,
    pub tolerance: f64,
}

impl EntanglementReport {
    pub fn negativity_of(&self, side_a: &[usize]) -> Option<f64> {
        self.negativities
            .iter()
            .find(|(b, _)| b.side_a() == side_a)
            .map(|&(_, v)| v)
    }
}

pub fn classify(rho: &DensityMatrix, tol: f64) -> Result<EntanglementReport> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter {
            name: "classification tolerance",
            value: tol,
        });
    }
    let negativities = all_bipartitions(rho.n_qubits())?
        .into_iter()
        .map(|b| negativity(rho, &b).map(|v| (b, v)))
        .collect::<Result<Vec<_>>>()?;
    let class = (rho.n_qubits() == 3).then(|| {
        let flags: Vec<bool> = negativities.iter().map(|&(_, v)| v > tol).collect();
        EntanglementClass::from_pattern(&flags)
    });
    Ok(EntanglementReport {
        negativities,
        class,
        tolerance: tol,
    })
}

/// Negativities of the three-qubit chain, named by the qubit cut off from
/// the other two: end qubits `0` and `2`, middle qubit `1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChainNegativities {
    pub end_first: f64,
    pub end_last: f64,
    pub middle: f64,
}

impl ChainNegativities {
    pub fn of(rho: &DensityMatrix) -> Result<Self> {
        if rho.n_qubits() != 3 {
            return Err(Error::DimensionMismatch {
                expected: 3,
                found: rho.n_qubits(),
            });
        }
        let cut = |q: usize| negativity(rho, &Bipartition::new(3, &[q])?);
        Ok(Self {
            end_first: cut(0)?,
            end_last: cut(2)?,
            middle: cut(1)?,
        })
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.end_first, self.end_last, self.middle]
    }
}

/// Where the chain model leaves the free and the bound regimes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransitionPoints {
    /// Smallest `p` at which an end-qubit negativity is within tolerance.
    pub p_free_to_bound: f64,
    /// Smallest `p` at which the middle-qubit negativity is within tolerance.
    pub p_bound_to_ppt: f64,
    pub t_free_to_bound: f64,
    pub t_bound_to_ppt: f64,
}

/// Smallest `p` in `[0, 1]` with `f(p) <= tol`, for `f` non-increasing.
fn first_vanishing(mut f: impl FnMut(f64) -> Result<f64>, tol: f64, what: &str) -> Result<f64> {
    if f(1.0)? > tol {
        return Err(Error::Bracketing(String::from(what) + " stays above tolerance up to p = 1"));
    }
    if f(0.0)? <= tol {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > 1e-14 {
        let mid = 0.5 * (lo + hi);
        if f(mid)? > tol {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

/// Locates, by bisection along the dephasing sweep of the three-qubit chain
/// model with phase `alpha`, where the end-qubit negativities vanish and
/// where the middle-qubit negativity vanishes.
pub fn transition_points(alpha: f64, tol: f64) -> Result<TransitionPoints> {
    let g = linear_graph(3)?;
    let negs = |p: f64| ChainNegativities::of(&thermal_state_model(&g, p, alpha)?);
    let p_free_to_bound = first_vanishing(
        |p| negs(p).map(|n| n.end_first.min(n.end_last)),
        tol,
        "end-qubit negativity",
    )?;
    let p_bound_to_ppt = first_vanishing(|p| negs(p).map(|n| n.middle), tol, "middle-qubit negativity")?;
    Ok(TransitionPoints {
        p_free_to_bound,
        p_bound_to_ppt,
        t_free_to_bound: temperature_from_p(p_free_to_bound)?,
        t_bound_to_ppt: temperature_from_p(p_bound_to_ppt)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn bipartition_counts() {
        assert_eq!(all_bipartitions(2).unwrap().len(), 1);
        let three = all_bipartitions(3).unwrap();
        let sides: Vec<&[usize]> = three.iter().map(|b| b.side_a()).collect();
        assert_eq!(sides, [&[0][..], &[1], &[2]]);
        assert_eq!(all_bipartitions(4).unwrap().len(), 7);
        assert_eq!(all_bipartitions(5).unwrap().len(), 15);
        assert!(all_bipartitions(1).is_err());
    }

    #[test]
    fn bipartition_validation_and_label() {
        assert!(Bipartition::new(3, &[]).is_err());
        assert!(Bipartition::new(3, &[0, 1, 2]).is_err());
        assert!(Bipartition::new(3, &[3]).is_err());
        assert_eq!(Bipartition::new(3, &[1]).unwrap().to_string(), "1|02");
    }

    #[test]
    fn class_pattern() {
        assert_eq!(EntanglementClass::from_pattern(&[false, false, false]), EntanglementClass::PptAll);
        assert_eq!(EntanglementClass::from_pattern(&[true, true, true]), EntanglementClass::Free);
        assert_eq!(EntanglementClass::from_pattern(&[false, true, false]), EntanglementClass::Bound);
        for c in [EntanglementClass::PptAll, EntanglementClass::Bound, EntanglementClass::Free] {
            assert_eq!(EntanglementClass::from_label(c.label()), Some(c));
        }
    }

    #[test]
    fn maximally_mixed_is_ppt() {
        let rho = DensityMatrix::maximally_mixed(3);
        let report = classify(&rho, DEFAULT_TOLERANCE).unwrap();
        assert!(report.negativities.iter().all(|&(_, v)| v.abs() < 1e-12));
        assert_eq!(report.class, Some(EntanglementClass::PptAll));
        assert!(classify(&rho, 0.0).is_err());
    }

    #[test]
    fn class_only_for_three_qubits() {
        let report = classify(&DensityMatrix::maximally_mixed(2), 1e-9).unwrap();
        assert_eq!(report.class, None);
        assert_eq!(report.negativities.len(), 1);
    }

    #[test]
    fn identity_channel_never_crosses() {
        assert!(matches!(transition_points(0.0, 1e-9), Err(Error::Bracketing(_))));
    }
}
