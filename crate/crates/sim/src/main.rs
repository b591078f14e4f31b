use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sm_core::Scenario;
use sm_sim::config::{apply_config_text, parse_sigma_e, parse_snr_grid, preset};
use sm_sim::csv::{write_nom_csv, write_predict_csv, write_sweep_csv};
use sm_sim::trace::{trace_scenario, trace_table, worked_example, TraceReport};
use sm_sim::{nom_study, run_predict, run_sweep, Result, SimError, SweepConfig};

#[derive(Parser)]
#[command(name = "sm-sim", version, about = "Spatial modulation link-level simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo sweep: error rates, visited nodes, reduction ratios.
    Sweep(RunArgs),
    /// Analytic expected-complexity predictions, no simulation.
    Predict(RunArgs),
    /// Count early-termination misses against exhaustive search per SNR.
    Nom(RunArgs),
    /// Print the per-iteration search log for one instance.
    Trace(TraceArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Preset scenario (fig3 .. fig10).
    #[arg(long)]
    preset: Option<String>,
    /// Flat key = value config file, applied over the preset.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Constellation order (power of two).
    #[arg(long)]
    m: Option<usize>,
    /// Transmit antennas (power of two).
    #[arg(long)]
    nt: Option<usize>,
    /// Receive antennas.
    #[arg(long)]
    nr: Option<usize>,
    /// SNR grid in dB: "start:step:stop" or a comma list.
    #[arg(long)]
    snr: Option<String>,
    /// Channel realizations per SNR point.
    #[arg(long)]
    trials: Option<u64>,
    /// Estimation error variance: a number, "perfect", or "variable".
    #[arg(long)]
    sigma_e: Option<String>,
    /// Base seed; fixes every random draw.
    #[arg(long)]
    seed: Option<u64>,
    /// Channel draws averaged for the analytic overlay (0 disables).
    #[arg(long)]
    analytic: Option<u64>,
    /// Output file (stdout when omitted).
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TraceArgs {
    /// "fig2" replays the worked-example table; any sweep preset supplies
    /// scenario dimensions instead.
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    nt: Option<usize>,
    #[arg(long)]
    nr: Option<usize>,
    /// SNR of the drawn instance in dB.
    #[arg(long)]
    snr: Option<f64>,
    /// Estimation error variance: a number, "perfect", or "variable".
    #[arg(long)]
    sigma_e: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Trace the early-terminating variant instead of the optimal rule.
    #[arg(long)]
    weak: bool,
    /// Output file (stdout when omitted).
    #[arg(long, short)]
    out: Option<PathBuf>,
}

fn resolve(args: &RunArgs) -> Result<SweepConfig> {
    let mut cfg = match &args.preset {
        Some(name) => preset(name)?,
        None => SweepConfig::default_scenario(),
    };
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path).map_err(|e| {
            SimError::config(format!("cannot read {}: {e}", path.display()))
        })?;
        cfg = apply_config_text(&text, cfg)?;
    }
    if let Some(m) = args.m {
        cfg.m = m;
    }
    if let Some(nt) = args.nt {
        cfg.n_t = nt;
    }
    if let Some(nr) = args.nr {
        cfg.n_r = nr;
    }
    if let Some(snr) = &args.snr {
        cfg.snr_db_points = parse_snr_grid(snr).map_err(SimError::Config)?;
    }
    if let Some(trials) = args.trials {
        cfg.trials = trials;
    }
    if let Some(sigma_e) = &args.sigma_e {
        cfg.csir = parse_sigma_e(sigma_e).map_err(SimError::Config)?;
    }
    if let Some(seed) = args.seed {
        cfg.base_seed = seed;
    }
    if let Some(analytic) = args.analytic {
        cfg.analytic_realizations = analytic;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| SimError::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_trace(args: &TraceArgs) -> Result<()> {
    let mut head = Vec::new();
    let report: TraceReport;
    if args.preset.as_deref() == Some("fig2") {
        head.push("scenario: worked example, 8 branches, 3 levels".to_string());
        report = trace_table(&worked_example(), args.weak);
    } else {
        let mut cfg = match &args.preset {
            Some(name) => preset(name)?,
            None => SweepConfig::default_scenario(),
        };
        if let Some(m) = args.m {
            cfg.m = m;
        }
        if let Some(nt) = args.nt {
            cfg.n_t = nt;
        }
        if let Some(nr) = args.nr {
            cfg.n_r = nr;
        }
        if let Some(sigma_e) = &args.sigma_e {
            cfg.csir = parse_sigma_e(sigma_e).map_err(SimError::Config)?;
        }
        if let Some(seed) = args.seed {
            cfg.base_seed = seed;
        }
        let snr_db = args.snr.unwrap_or(10.0);
        let scenario = Scenario::from_snr_db(cfg.m, cfg.n_t, cfg.n_r, snr_db, cfg.csir)?;
        head.push(format!(
            "scenario: m = {}, nt = {}, nr = {}, snr = {} dB, seed = {}",
            cfg.m, cfg.n_t, cfg.n_r, snr_db, cfg.base_seed
        ));
        report = trace_scenario(&scenario, cfg.base_seed, args.weak)?;
    }
    head.push(
        if args.weak {
            "stopping rule: first fully expanded branch"
        } else {
            "stopping rule: optimal"
        }
        .to_string(),
    );

    let mut text = String::new();
    for line in head.iter().chain(&report.lines) {
        text.push_str(line);
        text.push('\n');
    }
    text.push_str(&format!(
        "visited nodes: {}, winning index: {}\n",
        report.outcome.visited_nodes, report.outcome.index
    ));
    write_output(args.out.as_deref(), &text)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Sweep(args) => {
            let cfg = resolve(&args)?;
            let result = run_sweep(&cfg)?;
            for p in &result.points {
                if let Some(msg) = &p.analytic_error {
                    eprintln!("warning: analytic overlay failed at {} dB: {msg}", p.snr_db);
                }
            }
            write_output(args.out.as_deref(), &write_sweep_csv(&result))
        }
        Command::Predict(args) => {
            let cfg = resolve(&args)?;
            let points = run_predict(&cfg)?;
            write_output(args.out.as_deref(), &write_predict_csv(&points))
        }
        Command::Nom(args) => {
            let cfg = resolve(&args)?;
            let points = nom_study(&cfg)?;
            write_output(args.out.as_deref(), &write_nom_csv(&points))
        }
        Command::Trace(args) => cmd_trace(&args),
    }
}

/// SM_THREADS caps the worker pool; results never depend on it.
fn configure_threads() -> Result<()> {
    match std::env::var("SM_THREADS") {
        Ok(v) => {
            let n: usize = v
                .parse()
                .ok()
                .filter(|&n| n >= 1)
                .ok_or_else(|| {
                    SimError::config(format!("SM_THREADS must be a positive integer, got \"{v}\""))
                })?;
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| SimError::config(format!("thread pool: {e}")))
        }
        Err(_) => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match configure_threads().and_then(|()| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
