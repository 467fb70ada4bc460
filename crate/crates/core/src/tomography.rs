//! Simulated product-projector tomography with Poissonian counts.
//!
//! Settings are tensor products of single-qubit projectors. A record holds
//! one coincidence count per setting, drawn with mean `flux * Tr(rho Pi_s)`,
//! where `flux` is the expected count for a unit-probability projector.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

// Float methods for no_std builds; inherent ones shadow it once std is linked.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{c, qubits_for_dim, tensor_all, pauli, ComplexMatrix, DensityMatrix, C64};

/// Single-qubit projector labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SettingState {
    /// `|0>`
    Z0,
    /// `|1>`
    Z1,
    /// `|+>`
    XPlus,
    /// `|r> = (|0> + i|1>)/sqrt(2)`
    YPlus,
    /// `|->`
    XMinus,
    /// `|l> = (|0> - i|1>)/sqrt(2)`
    YMinus,
}

impl SettingState {
    /// The informationally complete four-state alphabet.
    pub const MINIMAL: [SettingState; 4] = [Self::Z0, Self::Z1, Self::XPlus, Self::YPlus];
    /// All six Pauli eigenstates.
    pub const MUB: [SettingState; 6] = [
        Self::Z0,
        Self::Z1,
        Self::XPlus,
        Self::XMinus,
        Self::YPlus,
        Self::YMinus,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Self::Z0 => "z0",
            Self::Z1 => "z1",
            Self::XPlus => "x+",
            Self::YPlus => "y+",
            Self::XMinus => "x-",
            Self::YMinus => "y-",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        Self::MUB.into_iter().find(|st| st.label() == s)
    }

    pub fn ket(self) -> [C64; 2] {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        match self {
            Self::Z0 => [c(1.0, 0.0), c(0.0, 0.0)],
            Self::Z1 => [c(0.0, 0.0), c(1.0, 0.0)],
            Self::XPlus => [c(h, 0.0), c(h, 0.0)],
            Self::XMinus => [c(h, 0.0), c(-h, 0.0)],
            Self::YPlus => [c(h, 0.0), c(0.0, h)],
            Self::YMinus => [c(h, 0.0), c(0.0, -h)],
        }
    }

    /// `(1, <X>, <Y>, <Z>)` of the projector.
    fn pauli_components(self) -> [f64; 4] {
        match self {
            Self::Z0 => [1.0, 0.0, 0.0, 1.0],
            Self::Z1 => [1.0, 0.0, 0.0, -1.0],
            Self::XPlus => [1.0, 1.0, 0.0, 0.0],
            Self::XMinus => [1.0, -1.0, 0.0, 0.0],
            Self::YPlus => [1.0, 0.0, 1.0, 0.0],
            Self::YMinus => [1.0, 0.0, -1.0, 0.0],
        }
    }
}

/// A product projector, one label per qubit (qubit 0 first).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjectorSetting(Vec<SettingState>);

impl ProjectorSetting {
    pub fn new(states: Vec<SettingState>) -> Self {
        Self(states)
    }

    pub fn states(&self) -> &[SettingState] {
        &self.0
    }

    pub fn n_qubits(&self) -> usize {
        self.0.len()
    }

    /// The product ket whose projector this setting measures.
    pub fn ket(&self) -> Vec<C64> {
        self.0.iter().fold(vec![c(1.0, 0.0)], |acc, st| {
            let k = st.ket();
            acc.iter().flat_map(|&a| [a * k[0], a * k[1]]).collect()
        })
    }

    pub fn projector(&self) -> ComplexMatrix {
        let k = self.ket();
        ComplexMatrix::outer(&k, &k).unwrap()
    }

    /// `Tr(Pi P_k)` for the Pauli string with base-4 digits `k` (qubit 0 most significant).
    fn pauli_overlap(&self, k: usize) -> f64 {
        let n = self.0.len();
        self.0
            .iter()
            .enumerate()
            .map(|(q, st)| st.pauli_components()[(k >> (2 * (n - 1 - q))) & 3])
            .product()
    }
}

/// Concatenated labels, e.g. `"z0x+y+"`.
impl fmt::Display for ProjectorSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|s| f.write_str(s.label()))
    }
}

impl FromStr for ProjectorSetting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s.len() % 2 != 0 || !s.is_ascii() {
            return Err(Error::Parse(alloc::format!("bad setting label '{s}'")));
        }
        let states = (0..s.len() / 2)
            .map(|i| {
                SettingState::from_label(&s[2 * i..2 * i + 2])
                    .ok_or_else(|| Error::Parse(alloc::format!("bad setting label '{s}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self(states))
    }
}

/// Which single-qubit alphabet the product settings are drawn from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SettingFamily {
    /// `{z0, z1, x+, y+}`, `4^n` settings.
    #[default]
    Minimal,
    /// All six Pauli eigenstates, `6^n` settings.
    Mub,
}

/// The `4^n` product settings over `{z0, z1, x+, y+}`.
pub fn standard_settings(n: usize) -> Vec<ProjectorSetting> {
    settings(n, SettingFamily::Minimal)
}

/// All product settings over the family's alphabet, lexicographic with
/// qubit 0 varying slowest.
pub fn settings(n: usize, family: SettingFamily) -> Vec<ProjectorSetting> {
    let alphabet: &[SettingState] = match family {
        SettingFamily::Minimal => &SettingState::MINIMAL,
        SettingFamily::Mub => &SettingState::MUB,
    };
    let base = alphabet.len();
    let total = base.pow(n as u32);
    (0..total)
        .map(|mut idx| {
            let mut states = vec![SettingState::Z0; n];
            for q in (0..n).rev() {
                states[q] = alphabet[idx % base];
                idx /= base;
            }
            ProjectorSetting(states)
        })
        .collect()
}

/// `Tr(rho Pi_s)`, clipped at zero.
pub fn probability(rho: &DensityMatrix, setting: &ProjectorSetting) -> Result<f64> {
    let k = setting.ket();
    Ok(rho.matrix().sandwich(&k, &k)?.re.max(0.0))
}

/// Mean counts `flux * Tr(rho Pi_s)` for every setting.
pub fn expected_counts(rho: &DensityMatrix, settings: &[ProjectorSetting], flux: f64) -> Result<Vec<f64>> {
    settings
        .iter()
        .map(|s| probability(rho, s).map(|p| flux * p))
        .collect()
}

fn check_flux(flux: f64) -> Result<()> {
    if flux > 0.0 && flux.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "flux",
            value: flux,
        })
    }
}

fn check_settings(settings: &[ProjectorSetting]) -> Result<usize> {
    let n = settings
        .first()
        .map(|s| s.n_qubits())
        .ok_or_else(|| Error::InvalidState("empty setting list".into()))?;
    if n == 0 {
        return Err(Error::InvalidState("setting on zero qubits".into()));
    }
    if let Some(bad) = settings.iter().find(|s| s.n_qubits() != n) {
        return Err(Error::LengthMismatch {
            expected: n,
            found: bad.n_qubits(),
        });
    }
    Ok(n)
}

/// Coincidence counts, one per setting.
#[derive(Clone, Debug, PartialEq)]
pub struct CountRecord {
    settings: Vec<ProjectorSetting>,
    counts: Vec<u64>,
    flux: f64,
    seed: u64,
}

impl CountRecord {
    pub fn new(settings: Vec<ProjectorSetting>, counts: Vec<u64>, flux: f64, seed: u64) -> Result<Self> {
        check_flux(flux)?;
        check_settings(&settings)?;
        if counts.len() != settings.len() {
            return Err(Error::LengthMismatch {
                expected: settings.len(),
                found: counts.len(),
            });
        }
        Ok(Self {
            settings,
            counts,
            flux,
            seed,
        })
    }

    pub fn settings(&self) -> &[ProjectorSetting] {
        &self.settings
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn flux(&self) -> f64 {
        self.flux
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn n_qubits(&self) -> usize {
        self.settings[0].n_qubits()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

fn poisson_draw(mean: f64, rng: &mut ChaCha8Rng) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    match Poisson::new(mean) {
        Ok(d) => d.sample(rng) as u64,
        Err(_) => mean.round() as u64,
    }
}

/// Draws one Poisson count per setting with mean `flux * Tr(rho Pi_s)`.
pub fn simulate_counts(
    rho: &DensityMatrix,
    settings: &[ProjectorSetting],
    flux: f64,
    seed: u64,
) -> Result<CountRecord> {
    check_flux(flux)?;
    let n = check_settings(settings)?;
    if n != rho.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: rho.n_qubits(),
            found: n,
        });
    }
    let means = expected_counts(rho, settings, flux)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let counts = means.iter().map(|&m| poisson_draw(m, &mut rng)).collect();
    CountRecord::new(settings.to_vec(), counts, flux, seed)
}

/// Real-valued counts; either a record's integer counts or exact means.
#[derive(Clone, Debug, PartialEq)]
pub struct Observations {
    pub settings: Vec<ProjectorSetting>,
    pub counts: Vec<f64>,
    pub flux: f64,
}

impl Observations {
    /// Infinite-statistics data: the expected counts themselves.
    pub fn noiseless(rho: &DensityMatrix, settings: &[ProjectorSetting], flux: f64) -> Result<Self> {
        check_flux(flux)?;
        check_settings(settings)?;
        Ok(Self {
            settings: settings.to_vec(),
            counts: expected_counts(rho, settings, flux)?,
            flux,
        })
    }

    fn validate(&self) -> Result<usize> {
        check_flux(self.flux)?;
        let n = check_settings(&self.settings)?;
        if self.counts.len() != self.settings.len() {
            return Err(Error::LengthMismatch {
                expected: self.settings.len(),
                found: self.counts.len(),
            });
        }
        if let Some(&bad) = self.counts.iter().find(|&&x| !(x >= 0.0 && x.is_finite())) {
            return Err(Error::InvalidParameter {
                name: "count",
                value: bad,
            });
        }
        Ok(n)
    }

    fn total(&self) -> f64 {
        self.counts.iter().sum()
    }
}

impl From<&CountRecord> for Observations {
    fn from(rec: &CountRecord) -> Self {
        Self {
            settings: rec.settings.clone(),
            counts: rec.counts.iter().map(|&n| n as f64).collect(),
            flux: rec.flux,
        }
    }
}

/// Poisson log-likelihood `sum_s [n_s ln(flux p_s) - flux p_s]`, dropping
/// the state-independent `ln(n_s!)`. `-inf` when a setting with counts has
/// zero probability.
pub fn log_likelihood(rho: &DensityMatrix, obs: &Observations) -> Result<f64> {
    let means = expected_counts(rho, &obs.settings, obs.flux)?;
    Ok(means
        .iter()
        .zip(&obs.counts)
        .map(|(&m, &n)| {
            if n == 0.0 {
                -m
            } else if m <= 0.0 {
                f64::NEG_INFINITY
            } else {
                n * m.ln() - m
            }
        })
        .sum())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Linear,
    Mle,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReconstructionResult {
    pub rho: DensityMatrix,
    pub method: Method,
    /// Poisson log-likelihood of `rho` on the input data.
    pub log_likelihood: f64,
    /// Accepted iterations (0 for linear inversion).
    pub iterations: usize,
    /// `false` when the MLE hit its iteration cap; `rho` is then the best iterate.
    pub converged: bool,
}

/// Pauli-string operator `P_k`, base-4 digits of `k` with qubit 0 most significant.
fn pauli_string(n: usize, k: usize) -> ComplexMatrix {
    let singles = [pauli::identity(), pauli::x(), pauli::y(), pauli::z()];
    let factors: Vec<&ComplexMatrix> = (0..n)
        .map(|q| &singles[(k >> (2 * (n - 1 - q))) & 3])
        .collect();
    tensor_all(factors)
}

/// Unit-trace Hermitian least-squares solution of `flux Tr(rho Pi_s) = n_s`,
/// before any positivity correction.
pub fn least_squares_estimate(obs: &Observations) -> Result<ComplexMatrix> {
    let n = obs.validate()?;
    let dim = 1usize << n;
    let n_params = dim * dim;
    let scale = 1.0 / dim as f64;
    // rho = (1/d) sum_k r_k P_k with r_0 = 1 fixed by the trace.
    let design = DMatrix::from_fn(obs.settings.len(), n_params - 1, |s, k| {
        scale * obs.settings[s].pauli_overlap(k + 1)
    });
    let rhs = DVector::from_fn(obs.settings.len(), |s, _| obs.counts[s] / obs.flux - scale);

    let svd = design.svd(true, true);
    let smax = svd.singular_values.max();
    let rank = svd
        .singular_values
        .iter()
        .filter(|&&v| v > smax * 1e-10)
        .count();
    if rank < n_params - 1 {
        return Err(Error::RankDeficient {
            rank: rank + 1,
            required: n_params,
        });
    }
    let coeffs = svd
        .solve(&rhs, smax * 1e-12)
        .map_err(|e| Error::InvalidState(String::from(e)))?;

    let mut rho = ComplexMatrix::identity(dim).scale_real(scale);
    for k in 1..n_params {
        rho = &rho + &pauli_string(n, k).scale_real(scale * coeffs[k - 1]);
    }
    Ok(rho.hermitian_part())
}

/// Euclidean projection of eigenvalues onto the probability simplex: the
/// Frobenius-nearest unit-trace positive semidefinite matrix.
pub fn project_to_density(m: &ComplexMatrix) -> Result<DensityMatrix> {
    qubits_for_dim(m.dim())?;
    let eig = m.hermitian_part().eigh()?;
    let mut sorted = eig.values.clone();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (j, &u) in sorted.iter().enumerate() {
        cumulative += u;
        let t = (cumulative - 1.0) / (j + 1) as f64;
        if u - t > 0.0 {
            theta = t;
        }
    }
    let projected: Vec<f64> = eig.values.iter().map(|&v| (v - theta).max(0.0)).collect();
    let total: f64 = projected.iter().sum();
    DensityMatrix::new(eig.recompose(&projected).scale_real(1.0 / total))
}

/// Least squares followed by projection onto the density matrices.
/// All-zero counts give the maximally mixed state.
pub fn linear_inversion(rec: &CountRecord) -> Result<ReconstructionResult> {
    linear_inversion_observed(&Observations::from(rec))
}

pub fn linear_inversion_observed(obs: &Observations) -> Result<ReconstructionResult> {
    let n = obs.validate()?;
    let rho = if obs.total() == 0.0 {
        DensityMatrix::maximally_mixed(n)
    } else {
        project_to_density(&least_squares_estimate(obs)?)?
    };
    Ok(ReconstructionResult {
        log_likelihood: log_likelihood(&rho, obs)?,
        rho,
        method: Method::Linear,
        iterations: 0,
        converged: true,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MleOptions {
    pub max_iter: usize,
    /// Stop once a window of iterations raises the flux-normalized
    /// log-likelihood `sum_s (n_s/flux) ln p_s - sum_s p_s` by less than this.
    pub tol: f64,
}

impl Default for MleOptions {
    fn default() -> Self {
        Self {
            max_iter: 20_000,
            tol: 1e-12,
        }
    }
}

struct MleProblem {
    kets: Vec<Vec<C64>>,
    freqs: Vec<f64>,
    /// `sum_s Pi_s`
    total_projector: ComplexMatrix,
    dim: usize,
}

impl MleProblem {
    fn probabilities(&self, rho: &ComplexMatrix) -> Vec<f64> {
        self.kets
            .iter()
            .map(|k| rho.sandwich(k, k).map(|z| z.re).unwrap_or(0.0))
            .collect()
    }

    fn objective(&self, probs: &[f64]) -> f64 {
        let mut total = 0.0;
        for (&f, &p) in self.freqs.iter().zip(probs) {
            if f > 0.0 {
                if p <= 0.0 {
                    return f64::NEG_INFINITY;
                }
                total += f * p.ln();
            }
            total -= p;
        }
        total
    }

    /// `sum_s (f_s / p_s) Pi_s - sum_s Pi_s`
    fn gradient(&self, probs: &[f64]) -> ComplexMatrix {
        let mut weighted = DMatrix::<C64>::zeros(self.dim, self.dim);
        for ((k, &f), &p) in self.kets.iter().zip(&self.freqs).zip(probs) {
            if f == 0.0 {
                continue;
            }
            let w = f / p;
            for r in 0..self.dim {
                let kr = k[r] * w;
                for col in 0..self.dim {
                    weighted[(r, col)] += kr * k[col].conj();
                }
            }
        }
        let weighted = ComplexMatrix::from_nalgebra(weighted).unwrap();
        (&weighted - &self.total_projector).hermitian_part()
    }
}

fn real_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.as_nalgebra()
        .iter()
        .zip(b.as_nalgebra().iter())
        .map(|(x, y)| (x.conj() * y).re)
        .sum()
}

/// Iterations over which the likelihood gain is compared against the tolerance.
const STALL_WINDOW: usize = 50;

/// Monotone FISTA with backtracking and restarts. Returns the final
/// iterate, the number of iterations, and whether the likelihood gain over
/// the last `STALL_WINDOW` iterations fell below `opts.tol`.
fn accelerated_ascent(
    problem: &MleProblem,
    start: ComplexMatrix,
    opts: &MleOptions,
) -> Result<(ComplexMatrix, usize, bool)> {
    let mut x = start;
    let mut x_value = problem.objective(&problem.probabilities(&x));
    let mut y = x.clone();
    let mut theta = 1.0f64;
    let mut step = 1.0f64;
    let mut window_value = x_value;

    for iteration in 1..=opts.max_iter {
        let mut y_probs = problem.probabilities(&y);
        let mut y_value = problem.objective(&y_probs);
        if !y_value.is_finite() {
            // Extrapolated outside the support of the data; restart.
            y = x.clone();
            theta = 1.0;
            y_probs = problem.probabilities(&y);
            y_value = x_value;
        }
        let grad = problem.gradient(&y_probs);

        let (z, z_value) = loop {
            let z = project_to_density(&(&y + &grad.scale_real(step)))?.into_matrix();
            let z_value = problem.objective(&problem.probabilities(&z));
            let d = &z - &y;
            let d_sq = d.frobenius_norm().powi(2);
            let model = y_value + real_inner(&grad, &d) - d_sq / (2.0 * step);
            if z_value.is_finite() && z_value >= model - 1e-14 * y_value.abs() {
                break (z, z_value);
            }
            step *= 0.5;
            if step < 1e-30 {
                return Ok((x, iteration - 1, true));
            }
        };

        let theta_next = 0.5 * (1.0 + (1.0 + 4.0 * theta * theta).sqrt());
        if z_value >= x_value {
            let shift = &z - &x;
            y = &z + &shift.scale_real((theta - 1.0) / theta_next);
            x = z;
            x_value = z_value;
            theta = theta_next;
        } else {
            // Momentum overshot: keep x and restart from it.
            y = x.clone();
            theta = 1.0;
        }
        step *= 1.25;
        if iteration % STALL_WINDOW == 0 {
            if x_value - window_value < opts.tol {
                return Ok((x, iteration, true));
            }
            window_value = x_value;
        }
    }
    Ok((x, opts.max_iter, false))
}

/// Maximum-likelihood reconstruction over the density matrices.
pub fn mle_reconstruct(rec: &CountRecord, max_iter: usize, tol: f64) -> Result<ReconstructionResult> {
    mle_reconstruct_observed(&Observations::from(rec), &MleOptions { max_iter, tol })
}

/// Accelerated projected-gradient ascent on the likelihood, projecting onto
/// the density matrices after every step. Starts from the maximally mixed
/// state; all-zero counts return it unchanged. The iterate's likelihood never
/// decreases.
pub fn mle_reconstruct_observed(obs: &Observations, opts: &MleOptions) -> Result<ReconstructionResult> {
    let n = obs.validate()?;
    let dim = 1usize << n;
    let rho = DensityMatrix::maximally_mixed(n).into_matrix();
    if obs.total() == 0.0 {
        let rho = DensityMatrix::new(rho)?;
        return Ok(ReconstructionResult {
            log_likelihood: log_likelihood(&rho, obs)?,
            rho,
            method: Method::Mle,
            iterations: 0,
            converged: true,
        });
    }

    let kets: Vec<Vec<C64>> = obs.settings.iter().map(|s| s.ket()).collect();
    let mut total_projector = ComplexMatrix::zeros(dim);
    for k in &kets {
        total_projector = &total_projector + &ComplexMatrix::outer(k, k)?;
    }
    let problem = MleProblem {
        kets,
        freqs: obs.counts.iter().map(|&x| x / obs.flux).collect(),
        total_projector,
        dim,
    };

    let (rho, iterations, converged) = accelerated_ascent(&problem, rho, opts)?;

    let rho = DensityMatrix::new(rho)?;
    Ok(ReconstructionResult {
        log_likelihood: log_likelihood(&rho, obs)?,
        rho,
        method: Method::Mle,
        iterations,
        converged,
    })
}

/// Sample mean and standard deviation (`n - 1` denominator).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Summary {
    pub mean: f64,
    pub std: f64,
}

pub fn summarize(values: &[f64]) -> Summary {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = if values.len() > 1 {
        values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    Summary {
        mean,
        std: var.sqrt(),
    }
}

/// Redraws every count as Poisson with mean equal to the observed count,
/// seeded with `seed + sample_index`.
pub fn resample(rec: &CountRecord, sample_index: usize, seed: u64) -> CountRecord {
    let sample_seed = seed.wrapping_add(sample_index as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(sample_seed);
    let counts = rec
        .counts
        .iter()
        .map(|&n| poisson_draw(n as f64, &mut rng))
        .collect();
    CountRecord {
        settings: rec.settings.clone(),
        counts,
        flux: rec.flux,
        seed: sample_seed,
    }
}

/// Monte Carlo error propagation for several statistics at once: each
/// sample resamples the counts, reconstructs by MLE, and evaluates
/// `statistics`. Returns one summary per statistic.
pub fn monte_carlo_statistics(
    rec: &CountRecord,
    n_samples: usize,
    seed: u64,
    opts: &MleOptions,
    mut statistics: impl FnMut(&DensityMatrix) -> Result<Vec<f64>>,
) -> Result<Vec<Summary>> {
    if n_samples < 2 {
        return Err(Error::InvalidParameter {
            name: "Monte Carlo sample count",
            value: n_samples as f64,
        });
    }
    let mut columns: Vec<Vec<f64>> = Vec::new();
    for i in 0..n_samples {
        let wrap = |e: Error| Error::Reconstruction {
            sample: i,
            source: Box::new(e),
        };
        let sample = resample(rec, i, seed);
        let recon = mle_reconstruct_observed(&Observations::from(&sample), opts).map_err(wrap)?;
        let values = statistics(&recon.rho).map_err(wrap)?;
        if columns.is_empty() {
            columns = vec![Vec::with_capacity(n_samples); values.len()];
        }
        for (col, v) in columns.iter_mut().zip(values) {
            col.push(v);
        }
    }
    Ok(columns.iter().map(|col| summarize(col)).collect())
}

/// Monte Carlo mean and standard deviation of one statistic.
pub fn monte_carlo_statistic(
    rec: &CountRecord,
    statistic: impl Fn(&DensityMatrix) -> f64,
    n_samples: usize,
    seed: u64,
) -> Result<Summary> {
    let out = monte_carlo_statistics(rec, n_samples, seed, &MleOptions::default(), |rho| {
        Ok(vec![statistic(rho)])
    })?;
    Ok(out[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use crate::linalg::PureState;

    #[test]
    fn setting_counts_and_labels() {
        assert_eq!(standard_settings(1).len(), 4);
        assert_eq!(standard_settings(3).len(), 64);
        assert_eq!(settings(2, SettingFamily::Mub).len(), 36);
        let s = &standard_settings(3)[0];
        assert_eq!(s.to_string(), "z0z0z0");
        assert_eq!(standard_settings(3)[63].to_string(), "y+y+y+");
        assert_eq!("z1x+y-".parse::<ProjectorSetting>().unwrap().to_string(), "z1x+y-");
        assert!("z1x".parse::<ProjectorSetting>().is_err());
        assert!("q0".parse::<ProjectorSetting>().is_err());
    }

    #[test]
    fn orthogonal_projector_never_clicks() {
        let rho = PureState::basis(3, 0).unwrap().to_density();
        let settings = vec!["z0z0z0".parse().unwrap(), "z1z0z0".parse().unwrap()];
        for seed in 0..20 {
            let rec = simulate_counts(&rho, &settings, 500.0, seed).unwrap();
            assert_eq!(rec.counts()[1], 0);
            assert!(rec.counts()[0] > 300);
        }
    }

    #[test]
    fn count_record_validation() {
        let s = standard_settings(1);
        assert!(CountRecord::new(s.clone(), vec![1, 2, 3], 1.0, 0).is_err());
        assert!(CountRecord::new(s.clone(), vec![1; 4], 0.0, 0).is_err());
        assert!(CountRecord::new(s, vec![1; 4], 1.0, 0).is_ok());
        assert!(CountRecord::new(vec![], vec![], 1.0, 0).is_err());
    }

    #[test]
    fn rank_deficient_settings_rejected() {
        let obs = Observations {
            settings: vec!["z0".parse().unwrap(), "z1".parse().unwrap(), "x+".parse().unwrap()],
            counts: vec![1.0, 1.0, 1.0],
            flux: 2.0,
        };
        assert!(matches!(least_squares_estimate(&obs), Err(Error::RankDeficient { .. })));
    }

    #[test]
    fn simplex_projection() {
        let m = ComplexMatrix::from_real_diagonal(&[0.7, 0.5, -0.1, -0.1]);
        let rho = project_to_density(&m).unwrap();
        // Shift theta = 0.1 on the two retained eigenvalues.
        assert!((rho.matrix().get(0, 0).re - 0.6).abs() < 1e-12);
        assert!((rho.matrix().get(1, 1).re - 0.4).abs() < 1e-12);
        assert!(rho.matrix().get(2, 2).re.abs() < 1e-12);
    }

    #[test]
    fn all_zero_counts_give_maximally_mixed() {
        let rec = CountRecord::new(standard_settings(2), vec![0; 16], 100.0, 0).unwrap();
        let mixed = DensityMatrix::maximally_mixed(2);
        let lin = linear_inversion(&rec).unwrap();
        let mle = mle_reconstruct(&rec, 100, 1e-10).unwrap();
        assert!(lin.rho.matrix().max_abs_diff(mixed.matrix()) < 1e-15);
        assert!(mle.rho.matrix().max_abs_diff(mixed.matrix()) < 1e-15);
        mle.rho.validate().unwrap();
    }

    #[test]
    fn monte_carlo_needs_two_samples() {
        let rec = CountRecord::new(standard_settings(1), vec![5; 4], 10.0, 0).unwrap();
        assert!(monte_carlo_statistic(&rec, |r| r.trace(), 1, 0).is_err());
    }

    #[test]
    fn summary_statistics() {
        let s = summarize(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(s.mean, 2.5);
        assert!((s.std - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }
}
