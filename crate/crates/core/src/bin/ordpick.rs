use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ordpick::mlcore::Objective;
use ordpick::oracle::OracleKind;
use ordpick::pipeline::{parse_models, parse_oracle_kind, parse_stages, run, PipelineConfig, PipelineError};

#[derive(Parser)]
#[command(name = "ordpick", version, about = "Learn to pick variable orderings for polynomial systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run pipeline stages. Flags override the matching config keys.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated subset of 1a,1b,1c,1d,2a,2b,2c,2d,2e
        #[arg(long)]
        stages: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        /// surrogate | external
        #[arg(long)]
        oracle: Option<String>,
        /// accuracy | time
        #[arg(long)]
        cv: Option<String>,
        /// Comma-separated subset of DT,KNN,MLP,SVM
        #[arg(long)]
        models: Option<String>,
        #[arg(long)]
        timeout: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Replaces the D<MM>_<DD>_T<HH>_<MM> part of stamped file names
        #[arg(long)]
        stamp: Option<String>,
        /// Generate this many random problems instead of reading inputs
        #[arg(long)]
        generate: Option<usize>,
    },
}

fn configure(cli: Command) -> Result<PipelineConfig, PipelineError> {
    let Command::Run { config, stages, seed, oracle, cv, models, timeout, out, stamp, generate } = cli;
    let mut cfg = PipelineConfig::load(&config)?;
    let cfg_err = PipelineError::Config;
    if let Some(s) = stages {
        cfg.stages = parse_stages(&s).map_err(cfg_err)?;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(o) = oracle {
        let command = match &cfg.oracle.kind {
            OracleKind::External { command_template } => Some(command_template.clone()),
            OracleKind::Surrogate => None,
        };
        cfg.oracle.kind = parse_oracle_kind(&o, command.as_deref()).map_err(cfg_err)?;
    }
    if let Some(c) = cv {
        cfg.cv.objective = c.parse::<Objective>().map_err(cfg_err)?;
    }
    if let Some(m) = models {
        cfg.models = parse_models(&m).map_err(cfg_err)?;
    }
    if let Some(t) = timeout {
        cfg.oracle.timeout_seconds = t;
    }
    if let Some(o) = out {
        cfg.out_dir = o;
    }
    if stamp.is_some() {
        cfg.stamp = stamp;
    }
    if generate.is_some() {
        cfg.generate = generate;
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let result = configure(cli.command).and_then(|cfg| run(&cfg));
    match result {
        Ok(summary) => {
            println!("{} files written (stamp {})", summary.written.len(), summary.stamp);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("ordpick: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
