//! `msf`: batch verification, error analysis, and resource estimation for
//! the magic-state factory toolkit.
//!
//! Exit codes: 0 on success, 1 when a verification check fails, 2 for usage
//! errors (unknown names, malformed files, bad flags).

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use msf_circuits::{
    build_c2t_simple, build_c2t_surgery, build_ccz_factory, build_fifteen_to_one,
    build_phase_catalysis, phase_catalysis_t_cost,
};
use msf_error_analysis::{
    derive_suppression, enumerate_errors_with, monte_carlo_validate, ClassifierPath,
    EnumerateOptions,
};
use msf_pipeline_sim::{level1_effective_period, simulate, PipelineConfig};
use msf_resource_model::{
    estimate, DistanceAssignment, FactoryModel, PhysicalAssumptions, Regime, Workload,
};
use msf_sim_core::{run_circuit, Circuit, FIDELITY_TOL};

#[derive(Parser)]
#[command(name = "msf", version, about = "magic-state factory toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a circuit error-free and check its outputs against the ideal
    /// reference states.
    Verify(VerifyArgs),
    /// Exhaustively inject Z errors and report the per-weight classification
    /// and leading suppression term.
    Inject(InjectArgs),
    /// Chain error rates and estimate footprint, runtime, and success
    /// probability for a workload file.
    Estimate(EstimateArgs),
    /// Run the factory-complex throughput simulation from a config file.
    Pipeline(PipelineArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum CircuitName {
    Ccz8,
    T15,
    C2tSimple,
    C2tSurgery,
    Phase,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    circuit: CircuitName,
    /// Phase angle in degrees (phase circuit only).
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Print the circuit's op-per-line rendering before running it.
    #[arg(long)]
    show_circuit: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum PathArg {
    Sv,
    Frame,
    Both,
}

#[derive(Args)]
struct InjectArgs {
    #[arg(value_enum)]
    circuit: CircuitName,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long, default_value_t = 2)]
    max_weight: usize,
    #[arg(long, default_value_t = 1e-6)]
    harm_tolerance: f64,
    /// Classifier path: state-vector, Pauli-frame, or both with an
    /// agreement check.
    #[arg(long, value_enum, default_value = "sv")]
    path: PathArg,
    /// Also sample this many Monte Carlo trials at --eps.
    #[arg(long)]
    trials: Option<u64>,
    /// Per-site error rate for the Monte Carlo cross-check.
    #[arg(long, default_value_t = 1e-3)]
    eps: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum RegimeArg {
    Distillation,
    Minimal,
}

#[derive(Clone, Copy, ValueEnum)]
enum FactoryArg {
    Ccz,
    C2t,
    LegacyT,
}

#[derive(Args)]
struct EstimateArgs {
    /// Workload JSON file ({"version":1,"toffoli_count":..,"t_count":..,
    /// "logical_qubits":..,"error_budget":..}).
    #[arg(long)]
    workload: PathBuf,
    #[arg(long, value_enum, default_value = "minimal")]
    regime: RegimeArg,
    #[arg(long, value_enum, default_value = "ccz")]
    factory: FactoryArg,
    #[arg(long, default_value_t = 7)]
    d0: u32,
    #[arg(long, default_value_t = 15)]
    d1: u32,
    #[arg(long, default_value_t = 31)]
    d2: u32,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct PipelineArgs {
    /// Pipeline config JSON file.
    #[arg(long)]
    config: PathBuf,
    /// Override the config's horizon (in d cycles).
    #[arg(long)]
    horizon: Option<f64>,
    /// Override the config's seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Verify(args) => cmd_verify(args),
        Command::Inject(args) => cmd_inject(args),
        Command::Estimate(args) => cmd_estimate(args),
        Command::Pipeline(args) => cmd_pipeline(args),
    }
}

fn build_circuit(name: CircuitName, theta: Option<f64>) -> Result<Circuit, String> {
    match name {
        CircuitName::Ccz8 => Ok(build_ccz_factory()),
        CircuitName::T15 => Ok(build_fifteen_to_one()),
        CircuitName::C2tSimple => Ok(build_c2t_simple()),
        CircuitName::C2tSurgery => Ok(build_c2t_surgery()),
        CircuitName::Phase => {
            let theta = theta.ok_or("the phase circuit needs --theta")?;
            build_phase_catalysis(theta).map_err(|e| e.to_string())
        }
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, String> {
    let circuit = build_circuit(args.circuit, args.theta)?;
    if args.show_circuit {
        print!("{circuit}");
        println!();
    }
    let outcome = run_circuit(&circuit, args.seed, &BTreeSet::new()).map_err(|e| e.to_string())?;
    let fidelities = outcome
        .output_fidelities(&circuit)
        .map_err(|e| e.to_string())?;
    let pass = outcome.accepted && fidelities.iter().all(|f| *f >= 1.0 - FIDELITY_TOL);
    let t_cost = match args.circuit {
        CircuitName::Phase => args.theta.and_then(phase_catalysis_t_cost),
        _ => None,
    };
    if args.json {
        let payload = serde_json::json!({
            "circuit": circuit.name,
            "seed": args.seed,
            "accepted": outcome.accepted,
            "output_fidelities": fidelities,
            "t_cost": t_cost,
            "pass": pass,
        });
        println!("{}", serde_json::to_string_pretty(&payload).unwrap());
    } else {
        println!("circuit:  {}", circuit.name);
        println!("accepted: {}", outcome.accepted);
        for (spec, f) in circuit.outputs.iter().zip(&fidelities) {
            println!("output {:?} ({:?}): fidelity {:.12}", spec.qubits, spec.role, f);
        }
        if let Some(cost) = t_cost {
            println!("t-cost:   {cost} per run ({} per output state)", cost / 2.0);
        }
        println!("{}", if pass { "PASS" } else { "FAIL" });
    }
    Ok(if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_inject(args: InjectArgs) -> Result<ExitCode, String> {
    let circuit = build_circuit(args.circuit, args.theta)?;
    let path = match args.path {
        PathArg::Sv => ClassifierPath::StateVector,
        PathArg::Frame => ClassifierPath::PauliFrame,
        PathArg::Both => ClassifierPath::Both,
    };
    let report = enumerate_errors_with(
        &circuit,
        EnumerateOptions {
            max_weight: args.max_weight,
            harm_tolerance: args.harm_tolerance,
            path,
        },
    )
    .map_err(|e| e.to_string())?;
    let suppression = derive_suppression(&report).ok();
    let mc = match args.trials {
        Some(trials) => Some(
            monte_carlo_validate(&circuit, args.eps, trials, args.seed)
                .map_err(|e| e.to_string())?,
        ),
        None => None,
    };
    if args.json {
        let payload = serde_json::json!({
            "report": report,
            "suppression": suppression,
            "monte_carlo": mc,
        });
        println!("{}", serde_json::to_string_pretty(&payload).unwrap());
    } else {
        print!("{report}");
        if let Some(s) = suppression {
            println!("suppression model: ({}, {})", s.coefficient, s.degree);
        }
        if let Some(mc) = mc {
            println!(
                "monte carlo @ eps={:.1e}: rejection {:.4} ± {:.4}, harmful {:.2e}",
                args.eps, mc.rejection_rate, mc.rejection_std_err, mc.harmful_accept_rate
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_estimate(args: EstimateArgs) -> Result<ExitCode, String> {
    let text = std::fs::read_to_string(&args.workload)
        .map_err(|e| format!("reading {}: {e}", args.workload.display()))?;
    let workload: Workload = serde_json::from_str(&text)
        .map_err(|e| format!("parsing {}: {e}", args.workload.display()))?;
    if workload.version != 1 {
        return Err(format!("unsupported workload version {}", workload.version));
    }
    let regime = match args.regime {
        RegimeArg::Distillation => Regime::DistillationLimited,
        RegimeArg::Minimal => Regime::MinimalDistance,
    };
    let factory = match args.factory {
        FactoryArg::Ccz => FactoryModel::ccz_factory(),
        FactoryArg::C2t => FactoryModel::catalyzed_2t_factory(),
        FactoryArg::LegacyT => FactoryModel::legacy_t_factory(),
    };
    let distances =
        DistanceAssignment::new(args.d0, args.d1, args.d2).map_err(|e| e.to_string())?;
    let assumptions = PhysicalAssumptions::default();
    let est = estimate(&workload, &factory, regime, &distances, &assumptions)
        .map_err(|e| e.to_string())?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&est).unwrap());
    } else {
        print!("{est}");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_pipeline(args: PipelineArgs) -> Result<ExitCode, String> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| format!("reading {}: {e}", args.config.display()))?;
    let mut config: PipelineConfig = serde_json::from_str(&text)
        .map_err(|e| format!("parsing {}: {e}", args.config.display()))?;
    if config.version != 1 {
        return Err(format!("unsupported config version {}", config.version));
    }
    if let Some(h) = args.horizon {
        config.horizon_d = h;
    }
    if let Some(s) = args.seed {
        config.seed = s;
    }
    let stats = simulate(&config).map_err(|e| e.to_string())?;
    if args.json {
        println!("{}", serde_json::to_string_pretty(&stats).unwrap());
    } else {
        println!("consumer:              {:?}", config.consumer);
        println!("outputs produced:      {}", stats.outputs_produced);
        match stats.mean_output_period_d {
            Some(p) => println!("mean output period:    {p:.4} d"),
            None => println!("mean output period:    n/a"),
        }
        println!(
            "consumer stall:        {:.4}%",
            100.0 * stats.consumer_stall_fraction
        );
        println!(
            "level-1 effective period: {:.4} d",
            level1_effective_period(config.level1_period_d, config.level1_discard_prob)
                .map_err(|e| e.to_string())?
        );
        println!("catalyst discards:     {}", stats.catalyst_discard_events);
        println!("discarded runs:        {}", stats.discarded_runs);
        println!("bad outputs:           {}", stats.bad_outputs);
        if let Some(idx) = stats.first_bad_output_index {
            println!("first bad output:      #{idx}");
        }
    }
    Ok(ExitCode::SUCCESS)
}
