//! Graph states, their excitation basis, and the parent cluster Hamiltonian.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;


// Float methods for no_std builds; inherent ones shadow it once std is linked.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{c, qubit_bit, ComplexMatrix, PureState, C64};

/// Largest register for which dense spectra are computed.
pub const MAX_DENSE_QUBITS: usize = 10;

/// Simple undirected graph on vertices `0..n_vertices`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    n_vertices: usize,
    /// Sorted, each pair stored as `(low, high)`.
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(n_vertices: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n_vertices == 0 {
            return Err(Error::InvalidGraph("graph needs at least one vertex".into()));
        }
        let mut list = Vec::new();
        for (i, j) in edges {
            if i == j {
                return Err(Error::InvalidGraph(alloc::format!("self-loop on vertex {i}")));
            }
            if i >= n_vertices || j >= n_vertices {
                return Err(Error::InvalidGraph(alloc::format!(
                    "edge {i}-{j} out of range for {n_vertices} vertices"
                )));
            }
            let e = (i.min(j), i.max(j));
            if list.contains(&e) {
                return Err(Error::InvalidGraph(alloc::format!("duplicate edge {}-{}", e.0, e.1)));
            }
            list.push(e);
        }
        list.sort_unstable();
        Ok(Self {
            n_vertices,
            edges: list,
        })
    }

    pub fn edgeless(n_vertices: usize) -> Result<Self> {
        Self::new(n_vertices, [])
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter_map(move |&(a, b)| {
            if a == v {
                Some(b)
            } else if b == v {
                Some(a)
            } else {
                None
            }
        })
    }

    fn neighbor_mask(&self, v: usize) -> usize {
        self.neighbors(v)
            .fold(0, |m, u| m | qubit_bit(self.n_vertices, u))
    }
}

/// Path graph `0-1-...-(n-1)`.
pub fn linear_graph(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidGraph(alloc::format!(
            "linear graph needs at least 2 vertices, got {n}"
        )));
    }
    Graph::new(n, (0..n - 1).map(|i| (i, i + 1)))
}

/// Text form `"n_vertices; i-j,i-j,..."`.
impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};", self.n_vertices)?;
        for (k, (i, j)) in self.edges.iter().enumerate() {
            let sep = if k == 0 { " " } else { "," };
            write!(f, "{sep}{i}-{j}")?;
        }
        Ok(())
    }
}

impl FromStr for Graph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: String| Error::Parse(alloc::format!("graph '{s}': {msg}"));
        let (n, rest) = s
            .split_once(';')
            .ok_or_else(|| bad("expected 'n_vertices; i-j,...'".into()))?;
        let n: usize = n
            .trim()
            .parse()
            .map_err(|_| bad(alloc::format!("bad vertex count '{}'", n.trim())))?;
        let mut edges = Vec::new();
        for item in rest.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (a, b) = item
                .split_once('-')
                .ok_or_else(|| bad(alloc::format!("bad edge '{item}'")))?;
            let parse = |t: &str| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| bad(alloc::format!("bad edge '{item}'")))
            };
            edges.push((parse(a)?, parse(b)?));
        }
        Graph::new(n, edges)
    }
}

/// Binary vector marking which vertices carry an excitation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExcitationVector(Vec<u8>);

impl ExcitationVector {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::InvalidParameter {
                name: "excitation bit",
                value: bits.iter().copied().find(|&b| b > 1).unwrap_or(0) as f64,
            });
        }
        Ok(Self(bits))
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0; n])
    }

    /// The vector whose bits spell `index` with vertex 0 most significant.
    pub fn from_index(n: usize, index: usize) -> Self {
        Self((0..n).map(|v| ((index >> (n - 1 - v)) & 1) as u8).collect())
    }

    /// All `2^n` excitation vectors in index order.
    pub fn all(n: usize) -> impl Iterator<Item = ExcitationVector> {
        (0..1usize << n).map(move |i| Self::from_index(n, i))
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of excitations.
    pub fn weight(&self) -> usize {
        self.0.iter().filter(|&&b| b == 1).count()
    }

    /// `-(gap/2) * sum_i (-1)^mu_i`
    pub fn energy(&self, gap: f64) -> f64 {
        let n = self.len() as f64;
        -(gap / 2.0) * (n - 2.0 * self.weight() as f64)
    }

    fn mask(&self) -> usize {
        let n = self.len();
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &b)| b == 1)
            .fold(0, |m, (v, _)| m | qubit_bit(n, v))
    }
}

fn parity_sign(x: usize) -> f64 {
    if x.count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `prod_{edges} CZ_ij |+>^N`
pub fn build_graph_state(g: &Graph) -> PureState {
    let n = g.n_vertices();
    let dim = 1usize << n;
    let amp = 1.0 / (dim as f64).sqrt();
    let masks: Vec<usize> = g
        .edges()
        .iter()
        .map(|&(i, j)| qubit_bit(n, i) | qubit_bit(n, j))
        .collect();
    let amps = (0..dim)
        .map(|b| {
            let flips = masks.iter().filter(|&&m| b & m == m).count();
            c(if flips % 2 == 0 { amp } else { -amp }, 0.0)
        })
        .collect();
    PureState::normalized(amps).expect("graph state amplitudes are normalized")
}

/// `prod_i Z_i^{mu_i} |G>`
pub fn excited_state(g: &Graph, mu: &ExcitationVector) -> Result<PureState> {
    if mu.len() != g.n_vertices() {
        return Err(Error::LengthMismatch {
            expected: g.n_vertices(),
            found: mu.len(),
        });
    }
    let mask = mu.mask();
    let ground = build_graph_state(g);
    let amps = ground
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(b, &a)| a * parity_sign(b & mask))
        .collect();
    PureState::new(amps)
}

/// The stabilizer `X_v prod_{u in N(v)} Z_u` as a dense matrix.
pub fn stabilizer(g: &Graph, v: usize) -> Result<ComplexMatrix> {
    let n = g.n_vertices();
    if v >= n {
        return Err(Error::InvalidQubit {
            index: v,
            n_qubits: n,
        });
    }
    let flip = qubit_bit(n, v);
    let zmask = g.neighbor_mask(v);
    let dim = 1usize << n;
    // Column b maps to row b ^ flip with the Z sign evaluated on b.
    Ok(ComplexMatrix::from_fn(dim, |r, col| {
        if r == col ^ flip {
            c(parity_sign(col & zmask), 0.0)
        } else {
            C64::default()
        }
    }))
}

/// `-(gap/2) sum_v X_v prod_{u in N(v)} Z_u`
pub fn parent_hamiltonian(g: &Graph, gap: f64) -> Result<ComplexMatrix> {
    if !(gap > 0.0 && gap.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "gap",
            value: gap,
        });
    }
    let n = g.n_vertices();
    let dim = 1usize << n;
    let terms: Vec<(usize, usize)> = (0..n)
        .map(|v| (qubit_bit(n, v), g.neighbor_mask(v)))
        .collect();
    let half = -gap / 2.0;
    Ok(ComplexMatrix::from_fn(dim, |r, col| {
        let sum: f64 = terms
            .iter()
            .filter(|&&(flip, _)| r == col ^ flip)
            .map(|&(_, zmask)| parity_sign(col & zmask))
            .sum();
        c(half * sum, 0.0)
    }))
}

/// One distinct energy level of the parent Hamiltonian.
#[derive(Clone, Debug, PartialEq)]
pub struct Level {
    pub energy: f64,
    pub multiplicity: usize,
    /// Number of excitations predicted for this energy, if it matches one.
    pub excitations: Option<usize>,
    /// `binomial(N, excitations)`
    pub expected_multiplicity: usize,
}

/// Result of diagonalizing the parent Hamiltonian.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumReport {
    pub n_vertices: usize,
    pub gap: f64,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub levels: Vec<Level>,
    pub ground_unique: bool,
    /// Difference between the two lowest distinct levels.
    pub measured_gap: f64,
    pub gap_matches: bool,
    pub multiplicities_match: bool,
    /// Largest `||H|G^mu> - E_mu|G^mu>||` over all excitation vectors.
    pub max_residual: f64,
}

impl SpectrumReport {
    pub fn is_consistent(&self) -> bool {
        self.ground_unique && self.gap_matches && self.multiplicities_match && self.max_residual < 1e-10
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

const LEVEL_TOL: f64 = 1e-10;

pub fn verify_spectrum(g: &Graph, gap: f64) -> Result<SpectrumReport> {
    let n = g.n_vertices();
    if n > MAX_DENSE_QUBITS {
        return Err(Error::InvalidParameter {
            name: "vertex count (dense limit 10)",
            value: n as f64,
        });
    }
    let h = parent_hamiltonian(g, gap)?;
    let eigenvalues = h.eigh()?.values;

    let mut levels: Vec<Level> = Vec::new();
    for &e in &eigenvalues {
        match levels.last_mut() {
            Some(last) if (e - last.energy).abs() <= 1e-8 => last.multiplicity += 1,
            _ => levels.push(Level {
                energy: e,
                multiplicity: 1,
                excitations: None,
                expected_multiplicity: 0,
            }),
        }
    }
    for level in &mut levels {
        // E = -(gap/2)(N - 2k)  =>  k = (N + 2E/gap) / 2
        let k = (n as f64 + 2.0 * level.energy / gap) / 2.0;
        let k_round = k.round();
        if (k - k_round).abs() * gap <= LEVEL_TOL && k_round >= 0.0 && k_round <= n as f64 {
            let k = k_round as usize;
            level.excitations = Some(k);
            level.expected_multiplicity = binomial(n, k);
        }
    }

    let measured_gap = if levels.len() > 1 {
        levels[1].energy - levels[0].energy
    } else {
        0.0
    };
    let multiplicities_match = levels.len() == n + 1
        && levels
            .iter()
            .all(|l| l.excitations.is_some() && l.multiplicity == l.expected_multiplicity);

    let mut max_residual = 0.0f64;
    for mu in ExcitationVector::all(n) {
        let state = excited_state(g, &mu)?;
        let e = mu.energy(gap);
        let hv = h.apply(state.amplitudes())?;
        let res = hv
            .iter()
            .zip(state.amplitudes())
            .map(|(a, b)| (a - b * e).norm_sqr())
            .sum::<f64>()
            .sqrt();
        max_residual = max_residual.max(res);
    }

    Ok(SpectrumReport {
        n_vertices: n,
        gap,
        ground_unique: levels.first().map(|l| l.multiplicity == 1).unwrap_or(false),
        gap_matches: (measured_gap - gap).abs() <= LEVEL_TOL,
        measured_gap,
        multiplicities_match,
        max_residual,
        eigenvalues,
        levels,
    })
}
