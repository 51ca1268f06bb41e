//! `mcc`: command-line front end for the minimum cost consensus solvers.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use mcc_core::harness::{
    load_instance, points_to_csv, run_simulation, sample_region, CostMode, ReferenceMode,
    RegionKind, SimulationConfig,
};
use mcc_core::measures::{kappa_weighted_dev, membership, AggregatorSpec};
use mcc_core::{
    ap_owamcc, cost_bounds, delta_bounds, kappa_mutual, kappa_owa, kappa_pairwise, owa,
    solve_exact_enum, solve_mcmc, solve_symmetric_linear, ApproxOptions, Instance, Membership,
};
use output::{emit, render, Format};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "mcc", version, about = "Minimum cost consensus solvers")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the result to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct InstanceArgs {
    /// Instance file (JSON).
    #[arg(long)]
    instance: PathBuf,
    /// Override the instance's OWA deviation threshold.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Override or set the mutual consensus threshold.
    #[arg(long)]
    delta: Option<f64>,
}

impl InstanceArgs {
    fn load(&self) -> Result<Instance> {
        let mut inst = load_instance(&self.instance)?;
        if let Some(eps) = self.epsilon {
            inst = inst.with_epsilon(eps)?;
        }
        if let Some(delta) = self.delta {
            inst = inst.with_delta(delta)?;
        }
        Ok(inst)
    }
}

#[derive(Debug, Args)]
struct ApproxArgs {
    /// Interpolation steps.
    #[arg(long, default_value_t = 10)]
    max_iters: usize,
    /// Tolerance on the OWA deviation.
    #[arg(long, default_value_t = 0.01)]
    tau: f64,
    /// Solve every inner MCMC problem without the nesting window.
    #[arg(long)]
    no_nesting: bool,
}

impl ApproxArgs {
    fn options(&self) -> ApproxOptions {
        ApproxOptions {
            max_iters: self.max_iters,
            tau: self.tau,
            nested: !self.no_nesting,
            ..ApproxOptions::default()
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    SymmetricLinear,
    ExactEnum,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CostArg {
    Uniform,
    Random,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RegionArg {
    Mutual,
    Owa,
    WeightedDev,
    Pairwise,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Consensus measures and region membership of the opinions (or of `--point`).
    Measures {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Comma-separated point to evaluate instead of the opinions.
        #[arg(long, value_delimiter = ',')]
        point: Option<Vec<f64>>,
    },
    /// Minimum cost under a mutual consensus threshold.
    SolveMcmc {
        #[command(flatten)]
        instance: InstanceArgs,
    },
    /// Radius and cost bounds for the OWA deviation problem.
    Bounds {
        #[command(flatten)]
        instance: InstanceArgs,
    },
    /// Approximate OWA deviation solution by radius interpolation.
    Approx {
        #[command(flatten)]
        instance: InstanceArgs,
        #[command(flatten)]
        approx: ApproxArgs,
    },
    /// Exact solution by enumerating rankings (n ≤ 9).
    Exact {
        #[command(flatten)]
        instance: InstanceArgs,
    },
    /// Exact solution for uniform costs from a single linear program.
    Symmetric {
        #[command(flatten)]
        instance: InstanceArgs,
    },
    /// Seeded batch comparing the approximation with an exact reference.
    Simulate {
        /// Group size.
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0.15)]
        epsilon: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = ModeArg::SymmetricLinear)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = CostArg::Uniform)]
        cost_mode: CostArg,
        #[command(flatten)]
        approx: ApproxArgs,
        /// Worker threads (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
        /// Report zero for the timing columns so reruns are byte-identical.
        #[arg(long)]
        no_timings: bool,
    },
    /// Uniform samples of the cube labelled by membership in one region.
    SampleRegion {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, value_enum)]
        region: RegionArg,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Serialize)]
struct MeasuresReport {
    point: Vec<f64>,
    group_value: f64,
    kappa_mutual: f64,
    kappa_owa: f64,
    kappa_weighted_dev: f64,
    kappa_pairwise: Option<f64>,
    membership: Membership,
}

#[derive(Serialize)]
struct BoundsReport {
    delta_minus: f64,
    delta_plus: f64,
    cost_lower: f64,
    cost_upper: f64,
}

fn measures(inst: &Instance, point: Option<Vec<f64>>) -> Result<MeasuresReport> {
    let x = point.unwrap_or_else(|| inst.opinions().to_vec());
    let omega = inst.owa_weights();
    let w = inst.importance_or_uniform();
    Ok(MeasuresReport {
        group_value: owa(omega, &x)?,
        kappa_mutual: kappa_mutual(&x),
        kappa_owa: kappa_owa(omega, &x)?,
        kappa_weighted_dev: kappa_weighted_dev(&x, &w, &AggregatorSpec::Owa(omega.clone()))?,
        kappa_pairwise: if x.len() > 1 {
            Some(kappa_pairwise(&x, &w)?)
        } else {
            None
        },
        membership: membership(&x, inst)?,
        point: x,
    })
}

fn run(cli: Cli) -> Result<()> {
    let out = cli.out.as_deref();
    let format = cli.format;
    let show = |text: String| emit(&text, out);
    match cli.command {
        Command::Measures { instance, point } => {
            show(render(&measures(&instance.load()?, point)?, format)?)
        }
        Command::SolveMcmc { instance } => {
            let inst = instance.load()?;
            let Some(delta) = inst.delta() else {
                bail!(mcc_core::Error::InvalidArgument(
                    "solve-mcmc needs --delta or a `delta` in the instance".into()
                ));
            };
            let r = solve_mcmc(inst.opinions(), inst.costs(), delta, None)?;
            show(render(&r, format)?)
        }
        Command::Bounds { instance } => {
            let inst = instance.load()?;
            let b = delta_bounds(inst.epsilon(), inst.owa_weights())?;
            let [cost_lower, cost_upper] = cost_bounds(&inst)?;
            show(render(
                &BoundsReport {
                    delta_minus: b.delta_minus,
                    delta_plus: b.delta_plus,
                    cost_lower,
                    cost_upper,
                },
                format,
            )?)
        }
        Command::Approx { instance, approx } => {
            let r = ap_owamcc(&instance.load()?, &approx.options())?;
            show(render(&r, format)?)
        }
        Command::Exact { instance } => show(render(&solve_exact_enum(&instance.load()?)?, format)?),
        Command::Symmetric { instance } => {
            show(render(&solve_symmetric_linear(&instance.load()?)?, format)?)
        }
        Command::Simulate {
            n,
            trials,
            epsilon,
            seed,
            mode,
            cost_mode,
            approx,
            threads,
            no_timings,
        } => {
            let mode = match mode {
                ModeArg::SymmetricLinear => ReferenceMode::SymmetricLinear,
                ModeArg::ExactEnum => ReferenceMode::ExactEnum,
            };
            let cost_mode = match cost_mode {
                CostArg::Uniform => CostMode::Uniform,
                CostArg::Random => CostMode::Random,
            };
            let mut cfg = SimulationConfig::new(n, trials, mode, cost_mode);
            cfg.epsilon = epsilon;
            cfg.seed = seed;
            cfg.ap = approx.options();
            cfg.threads = threads;
            cfg.record_timings = !no_timings;
            let report = run_simulation(&cfg)?;
            eprintln!(
                "n={n} trials={trials}: cost gap {}, approximation {} ms, reference {} ms",
                report.cost_gap, report.ap_time_ms, report.reference_time_ms
            );
            show(match format {
                Format::Json => report.to_json(),
                Format::Csv => report.to_csv(),
            })
        }
        Command::SampleRegion {
            instance,
            region,
            count,
            seed,
        } => {
            let kind = match region {
                RegionArg::Mutual => RegionKind::Mutual,
                RegionArg::Owa => RegionKind::Owa,
                RegionArg::WeightedDev => RegionKind::WeightedDev,
                RegionArg::Pairwise => RegionKind::Pairwise,
            };
            let points = sample_region(&instance.load()?, kind, count, seed)?;
            show(match format {
                Format::Csv => points_to_csv(&points),
                Format::Json => serde_json::to_string_pretty(&points)?,
            })
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    err.chain()
        .find_map(|e| e.downcast_ref::<mcc_core::Error>())
        .map_or(2, |e| e.exit_code() as u8)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
