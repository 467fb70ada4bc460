use std::f64::consts::PI;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thermal_cluster::{config::ConfigError, emit, records, run_sweep, Error, Format, Provenance, RawConfig, Result};
use thermal_cluster_core::entanglement::classify;
use thermal_cluster_core::entanglement::DEFAULT_TOLERANCE;
use thermal_cluster_core::graph::verify_spectrum;
use thermal_cluster_core::linalg::fidelity;
use thermal_cluster_core::mbqc::{classical_threshold, target_map, OutcomeWeighting, PairSelection};
use thermal_cluster_core::thermal::{thermal_state_model, TemperaturePoint};
use thermal_cluster_core::tomography::{
    linear_inversion, mle_reconstruct_observed, monte_carlo_statistics, settings, simulate_counts, MleOptions,
    Observations, SettingFamily,
};
use thermal_cluster_core::{linear_graph, Graph};

#[derive(Parser)]
#[command(name = "thermal-cluster", version, about = "Thermal three-qubit cluster states: entanglement, tomography and MBQC sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep temperature and emit a CSV or JSON table.
    Sweep(SweepArgs),
    /// Check the parent-Hamiltonian spectrum of a graph.
    Spectrum(SpectrumArgs),
    /// Simulate counts for one state and reconstruct it.
    Tomo(TomoArgs),
    /// Per-outcome state-preparation fidelities at one temperature.
    Mbqc(MbqcArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// TOML file whose keys match the flag names (with underscores).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    graph: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    /// Comma-separated dephasing strengths.
    #[arg(long, value_delimiter = ',', conflicts_with = "t_grid")]
    p_grid: Option<Vec<f64>>,
    /// Comma-separated temperatures T/Δ; `inf` allowed.
    #[arg(long, value_delimiter = ',')]
    t_grid: Option<Vec<f64>>,
    #[arg(long)]
    flux: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    mc_samples: Option<i64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    tomography_enabled: Option<bool>,
    /// Output format; defaults to the output file extension, else CSV.
    #[arg(long)]
    format: Option<String>,
    /// Output path; standard output when absent.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(long, default_value = "3; 0-1,1-2")]
    graph: String,
    #[arg(long, default_value_t = 1.0)]
    gap: f64,
}

#[derive(Args)]
#[group(id = "temperature", required = true, multiple = false)]
struct TemperatureArgs {
    #[arg(long, group = "temperature")]
    p: Option<f64>,
    /// T/Δ; `inf` allowed.
    #[arg(long, group = "temperature")]
    t_over_delta: Option<f64>,
}

impl TemperatureArgs {
    fn point(&self) -> Result<TemperaturePoint> {
        let (field, result) = match (self.p, self.t_over_delta) {
            (Some(p), _) => ("p", TemperaturePoint::from_p(p)),
            (_, Some(t)) => ("t_over_delta", TemperaturePoint::from_temperature(t)),
            (None, None) => unreachable!("clap requires one of the group"),
        };
        result.map_err(|e| ConfigError::new(field, e.to_string()).into())
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Minimal,
    Mub,
}

#[derive(Clone, Copy, ValueEnum)]
enum TomoMethod {
    Mle,
    Linear,
}

#[derive(Args)]
struct TomoArgs {
    #[command(flatten)]
    temperature: TemperatureArgs,
    #[arg(long, default_value = "3; 0-1,1-2")]
    graph: String,
    #[arg(long, default_value_t = PI, allow_hyphen_values = true)]
    alpha: f64,
    #[arg(long, default_value_t = 1e4)]
    flux: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "minimal")]
    family: Family,
    #[arg(long, value_enum, default_value = "mle")]
    method: TomoMethod,
    /// Monte Carlo resamples for error bars; 0 skips them.
    #[arg(long, default_value_t = 0)]
    mc_samples: usize,
    /// Reconstruct from this count table instead of simulating.
    #[arg(long)]
    counts_in: Option<PathBuf>,
    /// Save the counts used.
    #[arg(long)]
    counts_out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Pairs {
    Teleportation,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum Weighting {
    Probability,
    Uniform,
}

#[derive(Args)]
struct MbqcArgs {
    #[command(flatten)]
    temperature: TemperatureArgs,
    #[arg(long, default_value_t = PI, allow_hyphen_values = true)]
    alpha: f64,
    #[arg(long, value_enum, default_value = "teleportation")]
    pairs: Pairs,
    #[arg(long, value_enum, default_value = "probability")]
    weighting: Weighting,
}

fn parse_graph(text: &str) -> Result<Graph> {
    text.parse::<Graph>()
        .map_err(|e| ConfigError::new("graph", e.to_string()).into())
}

fn sweep(args: SweepArgs) -> Result<()> {
    let file = match &args.config {
        Some(path) => RawConfig::load(path)?,
        None => RawConfig::default(),
    };
    let flags = RawConfig {
        graph: args.graph,
        alpha: args.alpha,
        p_grid: args.p_grid,
        t_grid: args.t_grid,
        flux: args.flux,
        mc_samples: args.mc_samples,
        seed: args.seed,
        tomography_enabled: args.tomography_enabled,
    };
    let cfg = file.merge(flags).validate()?;
    let format = match (&args.format, &args.output) {
        (Some(f), _) => f.parse::<Format>()?,
        (None, Some(path)) => Format::from_path(path),
        (None, None) => Format::Csv,
    };
    let points = run_sweep(&cfg)?;
    let prov = Provenance::of(&cfg);
    match &args.output {
        Some(path) => emit::emit(&points, format, path, &prov),
        None => {
            print!("{}", emit::render(&points, format, &prov));
            Ok(())
        }
    }
}

fn spectrum(args: SpectrumArgs) -> Result<()> {
    let g = parse_graph(&args.graph)?;
    if !(args.gap.is_finite() && args.gap > 0.0) {
        return Err(ConfigError::new("gap", format!("must be positive, got {}", args.gap)).into());
    }
    let report = verify_spectrum(&g, args.gap).map_err(Error::numerical("spectrum"))?;
    println!("graph: {g}");
    println!("energy,multiplicity");
    for level in &report.levels {
        println!("{},{}", level.energy, level.multiplicity);
    }
    println!("# ground state unique: {}", report.ground_unique);
    println!("# gap: {}", report.measured_gap);
    println!("# max eigenvector residual: {:e}", report.max_residual);
    if !report.is_consistent() {
        return Err(Error::Numerical {
            what: "spectrum".into(),
            source: thermal_cluster_core::Error::InvalidState("spectrum disagrees with the stabilizer count".into()),
        });
    }
    Ok(())
}

fn tomo(args: TomoArgs) -> Result<()> {
    let g = parse_graph(&args.graph)?;
    let tp = args.temperature.point()?;
    let model = thermal_state_model(&g, tp.p, args.alpha).map_err(|e| ConfigError::new("alpha", e.to_string()))?;
    let rec = match &args.counts_in {
        Some(path) => records::read(path)?,
        None => {
            let family = match args.family {
                Family::Minimal => SettingFamily::Minimal,
                Family::Mub => SettingFamily::Mub,
            };
            simulate_counts(&model, &settings(g.n_vertices(), family), args.flux, args.seed)
                .map_err(|e| ConfigError::new("flux", e.to_string()))?
        }
    };
    if rec.n_qubits() != g.n_vertices() {
        return Err(ConfigError::new(
            "counts_in",
            format!("table has {} qubits, graph has {}", rec.n_qubits(), g.n_vertices()),
        )
        .into());
    }
    if let Some(path) = &args.counts_out {
        records::write(&rec, path)?;
    }
    let opts = MleOptions::default();
    let result = match args.method {
        TomoMethod::Mle => mle_reconstruct_observed(&Observations::from(&rec), &opts),
        TomoMethod::Linear => linear_inversion(&rec),
    }
    .map_err(Error::numerical("reconstruction"))?;
    let f = fidelity(&model, &result.rho).map_err(Error::numerical("fidelity"))?;

    println!("p: {}", tp.p);
    println!("t_over_delta: {}", tp.t_over_delta);
    println!("settings: {}", rec.settings().len());
    println!("total_counts: {}", rec.total());
    println!("method: {:?}", result.method);
    println!("iterations: {}", result.iterations);
    println!("converged: {}", result.converged);
    println!("log_likelihood: {}", result.log_likelihood);
    println!("fidelity_vs_model: {f}");
    println!("purity: {}", result.rho.purity());
    let report = classify(&result.rho, DEFAULT_TOLERANCE).map_err(Error::numerical("negativity"))?;
    for (part, n) in &report.negativities {
        println!("negativity[{part}]: {n}");
    }
    if args.mc_samples > 0 {
        let parts: Vec<_> = report.negativities.iter().map(|(b, _)| b.clone()).collect();
        let stats = monte_carlo_statistics(&rec, args.mc_samples, args.seed.wrapping_add(1 << 31), &opts, |rho| {
            parts
                .iter()
                .map(|b| thermal_cluster_core::entanglement::negativity(rho, b))
                .collect()
        })
        .map_err(Error::numerical("Monte Carlo"))?;
        for (part, s) in parts.iter().zip(stats) {
            println!("negativity_std[{part}]: {}", s.std);
        }
    }
    if let Some(class) = report.class {
        println!("class: {class}");
    }
    Ok(())
}

fn mbqc(args: MbqcArgs) -> Result<()> {
    let tp = args.temperature.point()?;
    let g = linear_graph(3).map_err(Error::numerical("graph"))?;
    let rho = thermal_state_model(&g, tp.p, args.alpha).map_err(|e| ConfigError::new("alpha", e.to_string()))?;
    let selection = match args.pairs {
        Pairs::Teleportation => PairSelection::Teleportation,
        Pairs::All => PairSelection::AllEigenstatePairs,
    };
    let weighting = match args.weighting {
        Weighting::Probability => OutcomeWeighting::Probability,
        Weighting::Uniform => OutcomeWeighting::Uniform,
    };
    let map = target_map(&g, selection).map_err(Error::numerical("target map"))?;
    let rows = map.breakdown(&rho).map_err(Error::numerical("breakdown"))?;
    let average = map.average_fidelity(&rho, weighting).map_err(Error::numerical("average"))?;

    let mut out = std::io::stdout().lock();
    let mut body = || -> std::io::Result<()> {
        writeln!(out, "# p: {}", tp.p)?;
        writeln!(out, "# t_over_delta: {}", tp.t_over_delta)?;
        writeln!(out, "basis_Bp,basis_Bs,outcome_Bp,outcome_Bs,probability,fidelity")?;
        for r in &rows {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                r.basis_bp, r.basis_bs, r.outcome_bp, r.outcome_bs, r.probability, r.fidelity
            )?;
        }
        writeln!(out, "# average_fidelity: {average}")?;
        writeln!(out, "# classical_threshold: {}", classical_threshold())
    };
    body().map_err(|source| Error::Io {
        path: PathBuf::from("<stdout>"),
        source,
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let outcome = match cli.command {
        Command::Sweep(a) => sweep(a),
        Command::Spectrum(a) => spectrum(a),
        Command::Tomo(a) => tomo(a),
        Command::Mbqc(a) => mbqc(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
