use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use strip_cgm::experiments::{run, Experiment, ExperimentConfig, Overrides, EXIT_CONFIG};

/// Runs one experiment from a config file.
#[derive(Parser, Debug)]
#[command(name = "strip-cgm", version)]
struct Cli {
    /// One of mixing-exact, mixing-coupling, burke, reversal, coalescence,
    /// crossing, shape, current, lower-bound, tag-check, scaling.
    experiment: String,
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    replicas: Option<usize>,
    #[arg(long)]
    workers: Option<usize>,
    /// Output directory; defaults to $STRIP_CGM_OUT, then ./out.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(EXIT_CONFIG as u8);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    let result = cli.experiment.parse::<Experiment>().and_then(|experiment| {
        let over = Overrides {
            experiment: Some(experiment),
            seed: cli.seed,
            replicas: cli.replicas,
            workers: cli.workers,
            out: cli.out.clone(),
        };
        let cfg = ExperimentConfig::from_file(&cli.config, &over)?;
        let manifest = run(&cfg)?;
        Ok((cfg, manifest))
    });
    match result {
        Ok((cfg, m)) => {
            for d in &m.outputs {
                println!("{}  {}", d.sha256, cfg.out.join(&d.file).display());
            }
            println!("{:.3}s", m.wall_clock_seconds);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("strip-cgm: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
