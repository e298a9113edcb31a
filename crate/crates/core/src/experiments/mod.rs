//! Experiment driver: configs, seeded parallel runs, CSV and SVG output,
//! run manifests.

mod config;
mod plot;
mod runners;
mod table;

use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub use config::{Experiment, ExperimentConfig, Overrides, ParamSet, RunSection, OUT_ENV};
pub use plot::{plot_csv, plot_table, site_map_svg, PlotKind};
pub use runners::{
    execute, reversal_pair, Output, SeedGroup, BATCH_STREAM, COALESCENCE_STREAM, CROSSING_STREAM, HITTING_STREAM,
    REVERSAL_STREAM, TAG_STREAM,
};
pub use table::{num, Table, CSV_SCHEMA_VERSION};

use crate::competition::CompetitionError;
use crate::lpp::LppError;
use crate::mixing::MixingError;
use crate::stationary::StationaryError;
use crate::stats::StatsError;
use crate::tasep::TasepError;

/// Exit status for configuration errors.
pub const EXIT_CONFIG: i32 = 2;
/// Exit status when a module cap is exceeded.
pub const EXIT_CAP: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error("config: {0}")]
    Config(String),
    #[error("schema: {0}")]
    Schema(String),
    #[error("cap exceeded: {0}")]
    Cap(String),
    #[error("{0}")]
    Module(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl ExperimentError {
    pub fn exit_code(&self) -> i32 {
        match self {
            ExperimentError::Config(_) | ExperimentError::Schema(_) => EXIT_CONFIG,
            ExperimentError::Cap(_) => EXIT_CAP,
            _ => 1,
        }
    }
}

impl From<LppError> for ExperimentError {
    fn from(e: LppError) -> Self {
        match e {
            LppError::DepthCap(_) | LppError::GridTooLarge(_) => ExperimentError::Cap(e.to_string()),
            e => ExperimentError::Module(e.to_string()),
        }
    }
}

impl From<MixingError> for ExperimentError {
    fn from(e: MixingError) -> Self {
        match e {
            MixingError::CapExceeded(_) | MixingError::HorizonCap(_) => ExperimentError::Cap(e.to_string()),
            MixingError::BadParameter(_) | MixingError::NoTheta | MixingError::Unsupported => {
                ExperimentError::Config(e.to_string())
            }
            e => ExperimentError::Module(e.to_string()),
        }
    }
}

impl From<StationaryError> for ExperimentError {
    fn from(e: StationaryError) -> Self {
        match e {
            StationaryError::HorizonCap(_) => ExperimentError::Cap(e.to_string()),
            StationaryError::Lpp(l) => l.into(),
            StationaryError::BadParameters | StationaryError::RegionTooSmall(_) => ExperimentError::Config(e.to_string()),
            e => ExperimentError::Module(e.to_string()),
        }
    }
}

impl From<CompetitionError> for ExperimentError {
    fn from(e: CompetitionError) -> Self {
        match e {
            CompetitionError::Lpp(l) => l.into(),
            e => ExperimentError::Module(e.to_string()),
        }
    }
}

impl From<TasepError> for ExperimentError {
    fn from(e: TasepError) -> Self {
        ExperimentError::Config(e.to_string())
    }
}

impl From<StatsError> for ExperimentError {
    fn from(e: StatsError) -> Self {
        ExperimentError::Module(e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDigest {
    pub file: String,
    pub sha256: String,
    pub bytes: usize,
}

/// Everything needed to reproduce and check a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub experiment: String,
    pub version: String,
    pub csv_schema: u32,
    pub config_hash: String,
    pub config: String,
    pub seed: u64,
    pub replicas: usize,
    pub workers: usize,
    pub seed_scheme: String,
    pub seed_groups: Vec<SeedGroup>,
    pub wall_clock_seconds: f64,
    pub outputs: Vec<FileDigest>,
}

pub const MANIFEST_FILE: &str = "manifest.json";

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

impl RunManifest {
    /// Recomputes every output digest under `dir`; returns the files that
    /// differ or are missing.
    pub fn verify(&self, dir: &Path) -> Vec<String> {
        self.outputs
            .iter()
            .filter(|d| std::fs::read(dir.join(&d.file)).map(|b| sha256_hex(&b) != d.sha256).unwrap_or(true))
            .map(|d| d.file.clone())
            .collect()
    }

    pub fn load(dir: &Path) -> Result<Self, ExperimentError> {
        let text = std::fs::read_to_string(dir.join(MANIFEST_FILE))?;
        serde_json::from_str(&text).map_err(|e| ExperimentError::Schema(e.to_string()))
    }
}

/// Runs the experiment on a pool of `config.workers` threads, writes the
/// CSVs, optional SVGs and `manifest.json` into `config.out`.
pub fn run(config: &ExperimentConfig) -> Result<RunManifest, ExperimentError> {
    config.validate()?;
    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| ExperimentError::Module(e.to_string()))?;
    let output = pool.install(|| execute(config))?;
    std::fs::create_dir_all(&config.out)?;
    let mut outputs = Vec::new();
    let mut write = |file: &str, bytes: &[u8]| -> Result<(), ExperimentError> {
        std::fs::write(config.out.join(file), bytes)?;
        outputs.push(FileDigest { file: file.to_string(), sha256: sha256_hex(bytes), bytes: bytes.len() });
        Ok(())
    };
    for t in &output.tables {
        write(&t.file, &t.to_csv())?;
    }
    if config.plot {
        for (file, i, kind) in &output.plots {
            let svg = plot_table(&output.tables[*i], kind, &format!("{} {}", config.experiment, output.tables[*i].file))?;
            write(file, svg.as_bytes())?;
        }
    }
    let canonical = config.canonical();
    let manifest = RunManifest {
        experiment: config.experiment.name().to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        csv_schema: CSV_SCHEMA_VERSION,
        config_hash: sha256_hex(canonical.as_bytes()),
        config: canonical,
        seed: config.seed,
        replicas: config.replicas,
        workers: config.workers,
        seed_scheme: "seed of replica i in a group = derive_seed(master, i, stream)".to_string(),
        seed_groups: output.seeds,
        wall_clock_seconds: start.elapsed().as_secs_f64(),
        outputs,
    };
    let json = serde_json::to_string_pretty(&manifest).map_err(|e| ExperimentError::Module(e.to_string()))?;
    std::fs::write(config.out.join(MANIFEST_FILE), json)?;
    Ok(manifest)
}

/// Reads one output CSV of a finished run.
pub fn read_table(dir: &Path, file: &str) -> Result<Table, ExperimentError> {
    let text = std::fs::read_to_string(dir.join(file))?;
    Table::parse(file, &text)
}
