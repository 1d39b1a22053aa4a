use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use tracesim::epidemic::{infections_path, read_secondary_counts};
use tracesim::harness::{load_preset, run_experiment, ExperimentSpec};
use tracesim::metrics::{estimate_dispersion, KHat};
use tracesim::netgen::{
    derive_degree_distribution, generate_er_network, generate_gamma_infectiousness_network,
    generate_superspreading_network, network_stats, write_network, NetworkKind, DEFAULT_TAIL_MASS,
};

#[derive(Parser)]
#[command(name = "tracesim", version, about = "Testing and contact tracing on superspreading networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a parameter sweep and write aggregate.csv.
    Simulate(SimulateArgs),
    /// Generate one contact network as an edge list.
    GenNetwork(GenNetworkArgs),
    /// Estimate the dispersion k from a run's infection log.
    EstimateK(EstimateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Profile {
    Desk,
    Full,
}

#[derive(Args)]
struct SimulateArgs {
    /// Flat key=value config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Defaults the config is applied on top of.
    #[arg(long, value_enum, default_value = "full")]
    profile: Profile,
    #[arg(long)]
    preset: Option<String>,
    /// Comma-separated strategies (none|rt|fct|bct|cto|got).
    #[arg(long)]
    strategy: Option<String>,
    #[arg(long)]
    daily_tests: Option<String>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    parallel: Option<usize>,
    #[arg(long)]
    emit_trajectories: bool,
    #[arg(long)]
    mixed: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Any config key, e.g. `--set R0=1,2.5`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Print the effective config and exit.
    #[arg(long)]
    dump_config: bool,
}

#[derive(Args)]
struct GenNetworkArgs {
    #[arg(long)]
    k: f64,
    #[arg(long)]
    r0: f64,
    #[arg(long)]
    beta: f64,
    #[arg(long)]
    gamma: f64,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value = "superspreading")]
    kind: NetworkKind,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EstimateArgs {
    /// Trajectory CSV (its `.infections.csv` sibling is read) or an infection log.
    #[arg(long)]
    trajectory: PathBuf,
    #[arg(long, default_value_t = 100)]
    first_m: usize,
    /// Count the seeds' own offspring too.
    #[arg(long)]
    include_seeds: bool,
}

fn effective_spec(args: &SimulateArgs) -> Result<ExperimentSpec> {
    let base = match args.profile {
        Profile::Desk => ExperimentSpec::desk(),
        Profile::Full => ExperimentSpec::default(),
    };
    let mut spec = match &args.config {
        Some(path) => ExperimentSpec::load(path, base).with_context(|| format!("reading {}", path.display()))?,
        None => base,
    };
    if let Some(name) = &args.preset {
        spec.apply_preset(&load_preset(name)?);
    }
    let mut set = |key: &str, value: &str| spec.set(0, key, value);
    if let Some(v) = &args.strategy {
        set("strategy", v)?;
    }
    if let Some(v) = &args.daily_tests {
        set("daily_tests", v)?;
    }
    if let Some(v) = &args.n {
        set("N", v)?;
    }
    if args.mixed {
        set("mixed", "true")?;
    }
    for item in &args.overrides {
        let Some((key, value)) = item.split_once('=') else {
            bail!("--set expects KEY=VALUE, got `{item}`");
        };
        set(key.trim(), value.trim())?;
    }
    if let Some(seed) = args.seed {
        spec.base_seed = seed;
    }
    if let Some(p) = args.parallel {
        spec.parallel = p;
    }
    if args.emit_trajectories {
        spec.emit_trajectories = true;
    }
    if let Some(out) = &args.out {
        spec.output_dir = out.clone();
    }
    spec.validate()?;
    Ok(spec)
}

fn simulate(args: SimulateArgs) -> Result<ExitCode> {
    let spec = effective_spec(&args)?;
    if args.dump_config {
        print!("{}", spec.dump());
        return Ok(ExitCode::SUCCESS);
    }
    let output = run_experiment(&spec)?;
    eprintln!(
        "{} cells written to {}",
        output.rows.len(),
        output.aggregate_path.display()
    );
    for failure in &output.failures {
        eprintln!("cell failed: {:?}: {}", failure.key, failure.error);
    }
    Ok(if output.failures.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn gen_network(args: GenNetworkArgs) -> Result<ExitCode> {
    let net = match args.kind {
        NetworkKind::Superspreading => {
            let dist = derive_degree_distribution(args.k, args.r0, args.beta, args.gamma, DEFAULT_TAIL_MASS)?;
            generate_superspreading_network(&dist, args.n, args.seed)?
        }
        NetworkKind::ErdosRenyi => generate_er_network(args.r0, args.beta, args.gamma, args.n, args.seed)?,
        NetworkKind::GammaInfectiousness => {
            generate_gamma_infectiousness_network(args.k, args.r0, args.beta, args.gamma, args.n, args.seed)?
        }
    };
    write_network(&net, &args.out)?;
    let stats = network_stats(&net);
    eprintln!(
        "{} nodes, {} edges, mean degree {:.4}, {} components, {} clamped degrees",
        net.node_count(),
        net.edge_count(),
        stats.empirical_mean_degree,
        stats.component_sizes.len(),
        net.clamped_degrees()
    );
    Ok(ExitCode::SUCCESS)
}

fn infection_log(path: &Path) -> PathBuf {
    if path.to_string_lossy().ends_with(".infections.csv") {
        path.to_path_buf()
    } else {
        infections_path(path)
    }
}

fn estimate_k(args: EstimateArgs) -> Result<ExitCode> {
    let log = infection_log(&args.trajectory);
    let counts = read_secondary_counts(&log, args.include_seeds).with_context(|| format!("reading {}", log.display()))?;
    let m = args.first_m.min(counts.len());
    let est = estimate_dispersion(&counts[..m])?;
    let k = match est.k_hat {
        KHat::Finite(k) => k.to_string(),
        KHat::PoissonLike => format!(">= {} (Poisson-like)", est.k_hat.capped()),
    };
    println!("k_hat={k} mean={} n={}", est.mean_hat, est.sample_size);
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(args) => simulate(args),
        Command::GenNetwork(args) => gen_network(args),
        Command::EstimateK(args) => estimate_k(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
