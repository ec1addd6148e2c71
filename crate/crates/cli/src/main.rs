use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lcsvm::config::{Overrides, RunConfig};
use lcsvm::{commands, CliError};

#[derive(Parser)]
#[command(
    name = "lcsvm",
    version,
    about = "Multiclass SVM land-cover classification: one-against-one vs one-against-all"
)]
struct Cli {
    /// Config file of `key = value` lines
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for all outputs (default: out)
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Strict one-against-all labelling (unclassified/mixed); false picks the largest decision value
    #[arg(long = "strict-1aa", global = true, value_name = "BOOL")]
    strict_1aa: Option<bool>,
    /// Input raster (default: <out-dir>/scene.lcr)
    #[arg(long, global = true)]
    raster: Option<PathBuf>,
    /// Training pixels as x,y,class rows
    #[arg(long, global = true)]
    samples: Option<PathBuf>,
    /// Reference pixels as x,y,class rows
    #[arg(long, global = true)]
    reference: Option<PathBuf>,
    /// Comma-separated subset of linear,quadratic,polynomial,rbf
    #[arg(long, global = true)]
    kernels: Option<String>,
    /// Comma-separated subset of 1a1,1aa
    #[arg(long, global = true)]
    strategies: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic scene with training and reference pixels
    Synth,
    /// Tune each kernel by cross-validation and train both strategies
    Train,
    /// Classify the raster with every trained model
    Classify,
    /// Build confusion matrices against the reference pixels
    Assess,
    /// Compare the strategies per kernel and write the report
    Compare,
    /// Train, classify, assess and compare
    Run,
}

fn load_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    cfg.apply(&Overrides {
        out_dir: cli.out_dir.clone(),
        seed: cli.seed,
        strict_1aa: cli.strict_1aa,
        raster: cli.raster.clone(),
        samples: cli.samples.clone(),
        reference: cli.reference.clone(),
        kernels: cli.kernels.clone(),
        strategies: cli.strategies.clone(),
    })?;
    cfg.validate()?;
    Ok(cfg)
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let cfg = load_config(cli)?;
    match cli.command {
        Command::Synth => {
            let scene = commands::cmd_synth(&cfg)?;
            println!(
                "wrote {}x{}x{} scene, {} training and {} reference pixels to {}",
                scene.raster.width(),
                scene.raster.height(),
                scene.raster.bands(),
                scene.training.len(),
                scene.reference.len(),
                cfg.out_dir.display()
            );
        }
        Command::Train => {
            for m in commands::cmd_train(&cfg)? {
                let k = &m.selected.kernel;
                println!(
                    "{}  C={} gamma={} cv_accuracy={:.4}",
                    m.path.display(),
                    m.selected.config.c,
                    k.gamma,
                    m.cv_accuracy
                );
            }
        }
        Command::Classify => {
            for c in commands::cmd_classify(&cfg)? {
                println!(
                    "{} {}: unclassified={} mixed={}",
                    c.strategy, c.kernel, c.tally.unclassified, c.tally.mixed
                );
            }
        }
        Command::Assess => {
            for r in commands::cmd_assess(&cfg)? {
                let acc = r.confusion.overall_accuracy().unwrap_or(f64::NAN);
                println!("{} {}: overall accuracy {acc:.4}", r.strategy, r.kernel);
            }
        }
        Command::Compare => print!("{}", commands::cmd_compare(&cfg)?.to_text()),
        Command::Run => print!("{}", commands::cmd_run(&cfg)?.to_text()),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("lcsvm: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
