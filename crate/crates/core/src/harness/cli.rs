use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use super::config::{parse_config, WORKERS_ENV};
use super::run::{render_record, run_experiment};
use crate::error::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "anderson-lab", version, about = "Experiments on 1D Anderson models with heavy-tailed disorder")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lyapunov exponent per energy.
    Lyapunov(RunArgs),
    /// Large-deviation tail of transfer-matrix growth.
    LdeTail(RunArgs),
    /// Probability that the box spectrum comes within exp(-L^beta) of E.
    Wegner(RunArgs),
    /// Probability that a box is (m, E)-regular.
    Regularity(RunArgs),
    /// Decay rates of eigenvectors nearest E.
    Eigenmodes(RunArgs),
    /// Integrated density of states.
    Ids(RunArgs),
    /// Multiscale-analysis parameter recipe and its constraints.
    MsaParams(RunArgs),
}

#[derive(Debug, Args, Default)]
pub struct RunArgs {
    /// Config file of `key = value` lines; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Single-site law, e.g. `cauchy{center=0,gamma=1}`.
    #[arg(long)]
    pub dist: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub energy: Option<String>,
    /// Comma-separated energies.
    #[arg(long, allow_hyphen_values = true)]
    pub energy_grid: Option<String>,
    /// Box length L (even) or window length for lde-tail.
    #[arg(long)]
    pub length: Option<String>,
    #[arg(long)]
    pub length_grid: Option<String>,
    #[arg(long)]
    pub trials: Option<String>,
    /// Product length for lyapunov and for pilot exponent estimates.
    #[arg(long)]
    pub steps: Option<String>,
    #[arg(long)]
    pub eps: Option<String>,
    #[arg(long)]
    pub m: Option<String>,
    #[arg(long)]
    pub beta: Option<String>,
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long)]
    pub lambda_ref: Option<String>,
    /// lde-tail observable: norm, vector or entry.
    #[arg(long)]
    pub mode: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    /// Worker threads; defaults to $ANDERSON_LAB_WORKERS or the core count.
    #[arg(long, env = WORKERS_ENV)]
    pub workers: Option<String>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// csv or json-lines.
    #[arg(long)]
    pub format: Option<String>,
}

impl RunArgs {
    fn flags(&self) -> Vec<(&'static str, String)> {
        let mut f = Vec::new();
        let mut put = |k: &'static str, v: &Option<String>| {
            if let Some(v) = v {
                f.push((k, v.clone()));
            }
        };
        put("dist", &self.dist);
        put("energy", &self.energy);
        put("energy_grid", &self.energy_grid);
        put("length", &self.length);
        put("length_grid", &self.length_grid);
        put("trials", &self.trials);
        put("steps", &self.steps);
        put("eps", &self.eps);
        put("m", &self.m);
        put("beta", &self.beta);
        put("p", &self.p);
        put("lambda_ref", &self.lambda_ref);
        put("mode", &self.mode);
        put("seed", &self.seed);
        put("workers", &self.workers);
        put("format", &self.format);
        if let Some(out) = &self.out {
            f.push(("out", out.display().to_string()));
        }
        f
    }
}

/// Parses arguments into a validated config, reading `--config` if given.
pub fn config_from_cli(cli: &Cli) -> Result<super::ExperimentConfig> {
    let (name, args) = match &cli.command {
        Command::Lyapunov(a) => ("lyapunov", a),
        Command::LdeTail(a) => ("lde-tail", a),
        Command::Wegner(a) => ("wegner", a),
        Command::Regularity(a) => ("regularity", a),
        Command::Eigenmodes(a) => ("eigenmodes", a),
        Command::Ids(a) => ("ids", a),
        Command::MsaParams(a) => ("msa-params", a),
    };
    let text = match &args.config {
        Some(p) => Some(std::fs::read_to_string(p).map_err(|source| Error::Io {
            path: p.clone(),
            source,
        })?),
        None => None,
    };
    let mut flags = vec![("experiment", name.to_string())];
    flags.extend(args.flags());
    parse_config(text.as_deref(), &flags)
}

pub fn main_with_args<I, T>(args: I) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            e.print().ok();
            return Ok(());
        }
        Err(e) => {
            return Err(Error::Config {
                location: "command line".into(),
                message: e.to_string(),
            })
        }
    };
    let config = config_from_cli(&cli)?;
    let record = run_experiment(&config)?;
    if config.output.is_none() {
        let bytes = render_record(&record)?;
        std::io::stdout()
            .write_all(&bytes)
            .map_err(|source| Error::Io { path: "<stdout>".into(), source })?;
    }
    log::info!(
        "{} finished: {} rows in {:.2}s",
        record.experiment,
        record.rows.len(),
        record.wall_clock_seconds
    );
    Ok(())
}
