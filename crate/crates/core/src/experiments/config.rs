use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::ExperimentError;

/// Experiments known to the driver.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    MixingExact,
    MixingCoupling,
    Burke,
    Reversal,
    Coalescence,
    Crossing,
    Shape,
    Current,
    LowerBound,
    TagCheck,
    Scaling,
}

impl Experiment {
    pub const ALL: [Experiment; 11] = [
        Experiment::MixingExact,
        Experiment::MixingCoupling,
        Experiment::Burke,
        Experiment::Reversal,
        Experiment::Coalescence,
        Experiment::Crossing,
        Experiment::Shape,
        Experiment::Current,
        Experiment::LowerBound,
        Experiment::TagCheck,
        Experiment::Scaling,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Experiment::MixingExact => "mixing-exact",
            Experiment::MixingCoupling => "mixing-coupling",
            Experiment::Burke => "burke",
            Experiment::Reversal => "reversal",
            Experiment::Coalescence => "coalescence",
            Experiment::Crossing => "crossing",
            Experiment::Shape => "shape",
            Experiment::Current => "current",
            Experiment::LowerBound => "lower-bound",
            Experiment::TagCheck => "tag-check",
            Experiment::Scaling => "scaling",
        }
    }

    /// Output file stem, `mixing-exact` becomes `mixing_exact`.
    pub fn stem(&self) -> String {
        self.name().replace('-', "_")
    }
}

impl std::str::FromStr for Experiment {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| ExperimentError::Config(format!("unknown experiment `{s}`")))
    }
}

impl std::fmt::Display for Experiment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// `[run]` section.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub experiment: Option<Experiment>,
    pub seed: Option<u64>,
    #[serde(default = "one")]
    pub replicas: usize,
    #[serde(default = "one")]
    pub workers: usize,
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub plot: bool,
}

fn one() -> usize {
    1
}

impl Default for RunSection {
    fn default() -> Self {
        RunSection { experiment: None, seed: None, replicas: 1, workers: 1, out: None, plot: false }
    }
}

/// `[params]` section. Unused keys are rejected by [`ExperimentConfig::validate`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamSet {
    #[serde(default)]
    pub sizes: Vec<usize>,
    #[serde(default = "half")]
    pub alpha: f64,
    #[serde(default = "half")]
    pub beta: f64,
    #[serde(default = "quarter")]
    pub eps: f64,
    #[serde(default = "default_tol")]
    pub tol: f64,
    pub width: Option<usize>,
    #[serde(default)]
    pub multipliers: Vec<f64>,
    #[serde(default)]
    pub heights: Vec<i64>,
    #[serde(default)]
    pub hit_sizes: Vec<i64>,
    pub c: Option<f64>,
    pub theta: Option<f64>,
    pub band: Option<[f64; 2]>,
    pub rows: Option<i64>,
    #[serde(default = "one")]
    pub batches: usize,
}

fn half() -> f64 {
    0.5
}

fn quarter() -> f64 {
    0.25
}

fn default_tol() -> f64 {
    1e-6
}

impl Default for ParamSet {
    fn default() -> Self {
        ParamSet {
            sizes: Vec::new(),
            alpha: 0.5,
            beta: 0.5,
            eps: 0.25,
            tol: 1e-6,
            width: None,
            multipliers: Vec::new(),
            heights: Vec::new(),
            hit_sizes: Vec::new(),
            c: None,
            theta: None,
            band: None,
            rows: None,
            batches: 1,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileLayout {
    #[serde(default)]
    run: RunSection,
    #[serde(default)]
    params: ParamSet,
}

/// A validated experiment description.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub seed: u64,
    pub replicas: usize,
    pub workers: usize,
    pub out: PathBuf,
    pub plot: bool,
    pub params: ParamSet,
}

/// Command-line values that take precedence over the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub experiment: Option<Experiment>,
    pub seed: Option<u64>,
    pub replicas: Option<usize>,
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
}

/// Environment variable naming the default output directory.
pub const OUT_ENV: &str = "STRIP_CGM_OUT";

impl ExperimentConfig {
    pub fn new(experiment: Experiment, seed: u64, replicas: usize, params: ParamSet) -> Self {
        ExperimentConfig { experiment, seed, replicas, workers: 1, out: default_out(), plot: false, params }
    }

    pub fn from_toml(text: &str, over: &Overrides) -> Result<Self, ExperimentError> {
        let file: FileLayout = toml::from_str(text).map_err(|e| ExperimentError::Config(e.to_string()))?;
        let experiment = over
            .experiment
            .or(file.run.experiment)
            .ok_or_else(|| ExperimentError::Config("no experiment named".into()))?;
        if let (Some(a), Some(b)) = (over.experiment, file.run.experiment) {
            if a != b {
                return Err(ExperimentError::Config(format!("config is for `{b}`, not `{a}`")));
            }
        }
        let seed = over.seed.or(file.run.seed).ok_or_else(|| ExperimentError::Config("seed missing".into()))?;
        let cfg = ExperimentConfig {
            experiment,
            seed,
            replicas: over.replicas.unwrap_or(file.run.replicas),
            workers: over.workers.unwrap_or(file.run.workers),
            out: over.out.clone().or(file.run.out).unwrap_or_else(default_out),
            plot: file.run.plot,
            params: file.params,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path, over: &Overrides) -> Result<Self, ExperimentError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ExperimentError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text, over)
    }

    /// Canonical text of everything that determines the output bytes.
    pub fn canonical(&self) -> String {
        let file = FileLayout {
            run: RunSection {
                experiment: Some(self.experiment),
                seed: Some(self.seed),
                replicas: self.replicas,
                workers: 1,
                out: None,
                plot: self.plot,
            },
            params: self.params.clone(),
        };
        toml::to_string(&file).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |m: &str| Err(ExperimentError::Config(format!("{}: {m}", self.experiment)));
        let p = &self.params;
        if self.replicas == 0 {
            return bad("replicas must be at least 1");
        }
        if self.workers == 0 {
            return bad("workers must be at least 1");
        }
        if !(p.alpha.is_finite() && p.beta.is_finite() && p.alpha > 0.0 && p.beta > 0.0) {
            return bad("alpha and beta must be positive");
        }
        if !(p.eps > 0.0 && p.eps < 1.0) {
            return bad("eps must lie in (0, 1)");
        }
        if p.batches == 0 {
            return bad("batches must be at least 1");
        }
        let uses_sizes = !matches!(self.experiment, Experiment::Coalescence | Experiment::Crossing);
        if uses_sizes && (p.sizes.is_empty() || p.sizes.contains(&0)) {
            return bad("sizes must be a nonempty list of positive lengths");
        }
        match self.experiment {
            Experiment::Scaling if p.sizes.len() < 3 => bad("scaling needs at least three sizes"),
            Experiment::Shape if p.sizes.len() < 3 => bad("shape needs at least three sizes"),
            Experiment::Reversal if p.heights.is_empty() || p.heights.iter().any(|&m| m < 1) => {
                bad("heights must be a nonempty list of positive integers")
            }
            Experiment::Coalescence | Experiment::Crossing if p.width.unwrap_or(0) == 0 => bad("width missing"),
            Experiment::Coalescence | Experiment::Crossing if p.multipliers.iter().any(|&m| !(m > 0.0)) => {
                bad("multipliers must be positive")
            }
            Experiment::Coalescence if p.multipliers.is_empty() => bad("multipliers missing"),
            Experiment::Crossing if p.multipliers.is_empty() && p.hit_sizes.is_empty() => {
                bad("need multipliers or hit_sizes")
            }
            Experiment::Crossing if p.hit_sizes.iter().any(|&n| n < 1) => bad("hit_sizes must be positive"),
            Experiment::Current | Experiment::LowerBound | Experiment::TagCheck if !p.c.is_some_and(|c| c > 0.0) => {
                bad("time multiplier c missing")
            }
            Experiment::LowerBound if p.band.is_some_and(|[lo, hi]| !(0.0 < lo && lo < hi && hi < 1.0)) => {
                bad("band must satisfy 0 < lo < hi < 1")
            }
            _ => Ok(()),
        }
    }
}

fn default_out() -> PathBuf {
    std::env::var_os(OUT_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("out"))
}
