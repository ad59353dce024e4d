use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dcd_rtls::complexity::{complexity_table, write_complexity_csv, GateModel};
use dcd_rtls::error::Error;
use dcd_rtls::harness::{
    parse_list, run_learning_curves, run_stability_curve, run_steady_state_sweep, write_curves_csv,
    write_stability_csv, write_sweep_csv, AlgoKind, ExperimentConfig,
};

#[derive(Parser)]
#[command(version, about = "Errors-in-variables adaptive filtering experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ensemble learning curves, one block per input noise level.
    Curves(Overrides),
    /// Empirical vs predicted steady-state deviation over an η grid.
    Sweep(Overrides),
    /// Forgetting-factor stability thresholds over an η grid.
    Stability(Overrides),
    /// Predicted per-iteration operation counts and gate costs.
    Complexity {
        #[command(flatten)]
        common: Overrides,
        /// Comma-separated filter orders.
        #[arg(long, default_value = "4,8,16,32,64")]
        orders: String,
    },
}

#[derive(Args)]
struct Overrides {
    /// JSON experiment configuration; flags override its keys.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Input noise variance(s), comma-separated.
    #[arg(long)]
    eta: Option<String>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    p_exponent: Option<u32>,
    #[arg(long)]
    dcd_n: Option<usize>,
    #[arg(long)]
    dcd_m: Option<u32>,
    #[arg(long)]
    dcd_h: Option<f64>,
    #[arg(long)]
    runs: Option<usize>,
    #[arg(long)]
    steps: Option<usize>,
    /// Comma-separated subset of dcd_rtls, exact_rtls, rls, bcrls.
    #[arg(long)]
    algos: Option<String>,
    /// Base seed; replica r uses seed + r.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    structured: Option<bool>,
    /// Output CSV path (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Overrides {
    fn resolve(&self) -> Result<(ExperimentConfig, Option<Vec<f64>>), Error> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        let etas = self.eta.as_deref().map(parse_list::<f64>).transpose()?;
        if let Some(v) = self.gamma {
            cfg.gamma = v;
        }
        if let Some(v) = self.p_exponent {
            cfg.p_exponent = v;
        }
        if let Some(v) = self.dcd_n {
            cfg.dcd.n_max = v;
        }
        if let Some(v) = self.dcd_m {
            cfg.dcd.m_bits = v;
        }
        if let Some(v) = self.dcd_h {
            cfg.dcd.h_range = v;
        }
        if let Some(v) = self.runs {
            cfg.runs = v;
        }
        if let Some(v) = self.steps {
            cfg.steps = v;
        }
        if let Some(list) = &self.algos {
            cfg.algos = parse_list::<AlgoKind>(list)?;
        }
        if let Some(v) = self.seed {
            cfg.base_seed = v;
        }
        if let Some(v) = self.delta {
            cfg.delta = v;
        }
        if let Some(v) = self.structured {
            cfg.structured = v;
        }
        Ok((cfg, etas))
    }

    fn sink(&self) -> Result<Box<dyn Write>, Error> {
        Ok(match &self.out {
            Some(path) => Box::new(BufWriter::new(
                File::create(path).map_err(|e| Error::Config(format!("cannot create {}: {e}", path.display())))?,
            )),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }
}

fn warn(warnings: &[String]) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    let io_err = |e: io::Error| Error::Numerical(format!("write failed: {e}"));
    match cli.command {
        Command::Curves(o) => {
            let (cfg, etas) = o.resolve()?;
            let mut reports = Vec::new();
            for eta in etas.unwrap_or_else(|| vec![cfg.eta]) {
                let rep = run_learning_curves(&ExperimentConfig { eta, ..cfg.clone() })?;
                warn(&rep.warnings);
                reports.push(rep);
            }
            let mut out = o.sink()?;
            write_curves_csv(&mut out, &reports).and_then(|_| out.flush()).map_err(io_err)
        }
        Command::Sweep(o) => {
            let (cfg, etas) = o.resolve()?;
            let rep = run_steady_state_sweep(&cfg, &etas.unwrap_or_else(|| cfg.eta_grid.clone()))?;
            warn(&rep.warnings);
            let mut out = o.sink()?;
            write_sweep_csv(&mut out, &rep).and_then(|_| out.flush()).map_err(io_err)
        }
        Command::Stability(o) => {
            let (cfg, etas) = o.resolve()?;
            cfg.validate()?;
            let model = cfg.model(0.0)?;
            let rows = run_stability_curve(model.r(), &etas.unwrap_or_else(|| cfg.eta_grid.clone()))?;
            let mut out = o.sink()?;
            write_stability_csv(&mut out, &rows).and_then(|_| out.flush()).map_err(io_err)
        }
        Command::Complexity { common, orders } => {
            let (cfg, _) = common.resolve()?;
            cfg.dcd.validate()?;
            let orders = parse_list::<u64>(&orders)?;
            let rows = complexity_table(&orders, cfg.dcd.n_max as u64, cfg.dcd.m_bits as u64, &GateModel::default());
            let mut out = common.sink()?;
            write_complexity_csv(&mut out, &rows).and_then(|_| out.flush()).map_err(io_err)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) | Error::InvalidInput(_) | Error::InvalidModel(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
