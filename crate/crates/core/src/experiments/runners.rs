use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{Experiment, ExperimentConfig};
use super::plot::PlotKind;
use super::table::{num, Table};
use super::ExperimentError;
use crate::competition::triple_point_tag_check;
use crate::lpp::{coalescence_check, corner_time_samples, rectangle, EnvironmentSpec, WeightField, SHAPE_STREAM};
use crate::mixing::{
    coupling_mixing_upper, current_fluctuations, exact_mixing_time, lower_bound_witness, scaling_fit, theta_for_band,
    COUPLING_STREAM, CURRENT_STREAM, WITNESS_STREAM,
};
use crate::rng::derive_seed;
use crate::stationary::{
    boundary_hitting, burke_test, crossing_events, increments, reversal_identity_error, reversed_environment,
    standard_paths, stationary_passage, BURKE_STREAM,
};
use crate::stats::{quantile, two_proportion_test, wilson_interval};
use crate::tasep::{Configuration, Params};

/// Stream tag for Burke batch seeds.
pub const BATCH_STREAM: u64 = 0x4241_5443;
/// Stream tag for reversal replicas.
pub const REVERSAL_STREAM: u64 = 0x5245_5653;
/// Stream tag for coalescence rectangles.
pub const COALESCENCE_STREAM: u64 = 0x434f_414c;
/// Stream tag for crossing rectangles.
pub const CROSSING_STREAM: u64 = 0x4352_4f53;
/// Stream tag for boundary-hitting geodesics.
pub const HITTING_STREAM: u64 = 0x4849_5454;
/// Stream tag for tagging checks.
pub const TAG_STREAM: u64 = 0x5441_4753;

/// Replica `i` of the group uses `derive_seed(master, i, stream)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedGroup {
    pub label: String,
    pub master: u64,
    pub stream: u64,
    pub count: usize,
}

impl SeedGroup {
    pub fn seed(&self, i: u64) -> u64 {
        derive_seed(self.master, i, self.stream)
    }
}

#[derive(Clone, Debug, Default)]
pub struct Output {
    pub tables: Vec<Table>,
    /// SVG file name, index into `tables`, plot kind.
    pub plots: Vec<(String, usize, PlotKind)>,
    pub seeds: Vec<SeedGroup>,
}

impl Output {
    fn group(&mut self, label: String, master: u64, stream: u64, count: usize) {
        self.seeds.push(SeedGroup { label, master, stream, count });
    }

    fn plot(&mut self, table: usize, kind: PlotKind) {
        let file = self.tables[table].file.replace(".csv", ".svg");
        self.plots.push((file, table, kind));
    }
}

fn loglog(x: &str, y: &str) -> PlotKind {
    PlotKind::LogLog { x: x.into(), y: y.into() }
}

fn line(x: &str, y: &str) -> PlotKind {
    PlotKind::Line { x: x.into(), y: y.into() }
}

fn bits(c: &Configuration) -> String {
    c.bits().iter().map(|b| char::from(b'0' + b)).collect()
}

fn power(n: usize, e: f64) -> f64 {
    (n as f64).powf(e)
}

/// Runs the named experiment in the current rayon pool.
pub fn execute(cfg: &ExperimentConfig) -> Result<Output, ExperimentError> {
    cfg.validate()?;
    match cfg.experiment {
        Experiment::MixingExact => mixing_exact(cfg),
        Experiment::MixingCoupling => mixing_coupling(cfg, false),
        Experiment::Scaling => mixing_coupling(cfg, true),
        Experiment::Burke => burke(cfg),
        Experiment::Reversal => reversal(cfg),
        Experiment::Coalescence => coalescence(cfg),
        Experiment::Crossing => crossing(cfg),
        Experiment::Shape => shape(cfg),
        Experiment::Current => current(cfg),
        Experiment::LowerBound => lower_bound(cfg),
        Experiment::TagCheck => tag_check(cfg),
    }
}

fn mixing_exact(cfg: &ExperimentConfig) -> Result<Output, ExperimentError> {
    let p = &cfg.params;
    let mut t = Table::new("mixing_exact.csv", &["n", "alpha", "beta", "eps", "t_lo", "t_hi", "worst_start", "all_states"]);
    for &n in &p.sizes {
        let r = exact_mixing_time(&Params::new(n, p.alpha, p.beta)?, p.eps, p.tol)?;
        let worst = r.maximizer.map(|k| bits(&Configuration::from_index(n, k))).unwrap_or_default();
        t.push(vec![n.to_string(), num(p.alpha), num(p.beta), num(p.eps), num(r.lo), num(r.hi), worst, r.all_states.to_string()]);
    }
    let mut out = Output { tables: vec![t], ..Default::default() };
    out.plot(0, loglog("n", "t_hi"));
    Ok(out)
}

fn mixing_coupling(cfg: &ExperimentConfig, fit: bool) -> Result<Output, ExperimentError> {
    let p = &cfg.params;
    let stem = cfg.experiment.stem();
    let mut out = Output::default();
    let mut t = Table::new(format!("{stem}.csv"), &["n", "alpha", "beta", "eps", "replicas", "t", "band_lo", "band_hi"]);
    let mut pts = Vec::new();
    for &n in &p.sizes {
        let r = coupling_mixing_upper(&Params::new(n, p.alpha, p.beta)?, p.eps, cfg.replicas, cfg.seed)?;
        out.group(format!("n={n}"), cfg.seed, COUPLING_STREAM, cfg.replicas);
        t.push(vec![
            n.to_string(),
            num(p.alpha),
            num(p.beta),
            num(p.eps),
            cfg.replicas.to_string(),
            num(r.t),
            num(r.lo),
            num(r.hi),
        ]);
        pts.push((n as f64, r.t));
    }
    out.tables.push(t);
    out.plot(0, loglog("n", "t"));
    if fit {
        let f = scaling_fit(&pts)?;
        let mut ft = Table::new(format!("{stem}_fit.csv"), &["slope", "intercept", "stderr", "points"]);
        ft.push(vec![num(f.slope), num(f.intercept), num(f.stderr), pts.len().to_string()]);
        out.tables.push(ft);
    }
    Ok(out)
}

fn burke(cfg: &ExperimentConfig) -> Result<Output, ExperimentError> {
    let p = &cfg.params;
    let mut out = Output::default();
    let mut t = Table::new(
        "burke.csv",
        &["n", "rows", "batch", "path", "replicas", "inc_stat", "inc_p", "min_stat", "min_p", "control_p", "max_abs_corr"],
    );
    for &n in &p.sizes {
        let paths = standard_paths(n);
        let rows = p.rows.unwrap_or_else(|| paths.iter().map(|q| q.top_row()).max().unwrap_or(1) + 1);
        let batches: Vec<u64> = (0..p.batches as u64).map(|b| derive_seed(cfg.seed, b, BATCH_STREAM)).collect();
        for (b, &s) in batches.iter().enumerate() {
            out.group(format!("n={n} batch={b}"), s, BURKE_STREAM, cfg.replicas);
        }
        let reports = batches
            .par_iter()
            .map(|&s| paths.iter().map(|q| burke_test(n, rows, *q, s, cfg.replicas)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        for (b, batch) in reports.iter().enumerate() {
            for r in batch {
                t.push(vec![
                    n.to_string(),
                    rows.to_string(),
                    b.to_string(),
                    r.path.name(),
                    r.replicas.to_string(),
                    num(r.increments.statistic),
                    num(r.increments.p_value),
                    num(r.minimum.statistic),
                    num(r.minimum.p_value),
                    num(r.wrong_rate.p_value),
                    num(r.max_abs_correlation()),
                ]);
            }
        }
    }
    out.tables.push(t);
    out.plot(0, PlotKind::Histogram { column: "inc_p".into(), bins: 20 });
    Ok(out)
}

/// Reversal identity error and the shifted-weights control for one strip.
pub fn reversal_pair(n: usize, m: i64, seed: u64) -> Result<(f64, f64), ExperimentError> {
    let (field, pf) = stationary_passage(n, m, seed)?;
    let inc = increments(&field, &pf)?;
    let rev = reversed_environment(&inc, m)?;
    Ok((reversal_identity_error(&inc, &rev)?, reversal_identity_error(&inc, &rev.shifted())?))
}

fn reversal(cfg: &ExperimentConfig) -> Result<Output, ExperimentError> {
    let p = &cfg.params;
    let mut out = Output::default();
    let mut t = Table::new("reversal.csv", &["n", "m", "replica", "error", "control_error"]);
    for &n in &p.sizes {
        for &m in &p.heights {
            out.group(format!("n={n} m={m}"), cfg.seed, REVERSAL_STREAM, cfg.replicas);
            let errs = (0..cfg.replicas as u64)
                .into_par_iter()
                .map(|i| reversal_pair(n, m, derive_seed(cfg.seed, i, REVERSAL_STREAM)))
                .collect::<Result<Vec<_>, _>>()?;
            for (i, (e, c)) in errs.into_iter().enumerate() {
                t.push(vec![n.to_string(), m.to_string(), i.to_string(), num(e), num(c)]);
            }
        }
    }
    out.tables.push(t);
    out.plot(0, PlotKind::Histogram { column: "error".into(), bins: 20 });
    Ok(out)
}

fn coalescence(cfg: &ExperimentConfig) -> Result<Output, ExperimentError> {
    let p = &cfg.params;
    let w = p.width.expect("validated");
    let n = p.sizes.first().copied().unwrap_or(w) as i64;
    let spec = EnvironmentSpec::strip(p.alpha, p.beta, w)?;
    let mut out = Output::default();
    out.group("rectangles".into(), cfg.seed, COALESCENCE_STREAM, cfg.replicas);
    let mut t = Table::new("coalescence.csv", &["width", "n", "m", "k", "replicas", "coalesced", "p", "lo", "hi"]);
    for &m in &p.multipliers {
        let k = (m * power(w, 1.5)).round().max(1.0) as i64;
        let rect = rectangle(w, n, k)?;
        let region = rect.region();
        let hits = (0..cfg.replicas as u64)
            .into_par_iter()
            .map(|i| {
                let f = WeightField::sample(spec, region.clone(), derive_seed(cfg.seed, i, COALESCENCE_STREAM));
                coalescence_check(&f, &rect).map(usize::from)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let c: usize = hits.iter().sum();
        let (lo, hi) = wilson_interval(c, cfg.replicas, 0.95)?;
        t.push(vec![
            w.to_string(),
            n.to_string(),
            num(m),
            k.to_string(),
            cfg.replicas.to_string(),
            c.to_string(),
            num(c as f64 / cfg.replicas as f64),
            num(lo),
            num(hi),
        ]);
    }
    out.tables.push(t);
    out.plot(0, line("m", "p"));
    Ok(out)
}

fn crossing(cfg: &ExperimentConfig) -> Result<Output, ExperimentError> {
    let p = &cfg.params;
    let w = p.width.expect("validated");
    let n = p.sizes.first().copied().unwrap_or(w) as i64;
    let r = cfg.replicas;
    let mut out = Output::default();
    let mut t = Table::new(
        "crossing.csv",
        &["width", "n", "c", "m", "replicas", "b_plus", "b_minus", "p_plus", "p_minus", "z", "p_value"],
    );
    if !p.multipliers.is_empty() {
        out.group("rectangles".into(), cfg.seed, CROSSING_STREAM, r);
    }
    for &c in &p.multipliers {
        let m = (c * power(w, 1.5)).round().max(1.0) as i64;
        let ev = (0..r as u64)
            .into_par_iter()
            .map(|i| crossing_events(w, n, m, derive_seed(cfg.seed, i, CROSSING_STREAM)))
            .collect::<Result<Vec<_>, _>>()?;
        let plus = ev.iter().filter(|e| e.0).count();
        let minus = ev.iter().filter(|e| e.1).count();
        let test = two_proportion_test(plus, r, minus, r)?;
        t.push(vec![
            w.to_string(),
            n.to_string(),
            num(c),
            m.to_string(),
            r.to_string(),
            plus.to_string(),
            minus.to_string(),
            num(plus as f64 / r as f64),
            num(minus as f64 / r as f64),
            num(test.statistic),
            num(test.p_value),
        ]);
    }
    let mut h = Table::new("hitting.csv", &["width", "n", "replicas", "median_scaled", "q90_scaled"]);
    if !p.hit_sizes.is_empty() {
        out.group("hitting".into(), cfg.seed, HITTING_STREAM, r);
    }
    for &hn in &p.hit_sizes {
        let v = (0..r as u64)
            .into_par_iter()
            .map(|i| boundary_hitting(w, hn, derive_seed(cfg.seed, i, HITTING_STREAM)).map(|d| d as f64 / power(w, 1.5)))
            .collect::<Result<Vec<_>, _>>()?;
        h.push(vec![w.to_string(), hn.to_string(), r.to_string(), num(quantile(&v, 0.5)?), num(quantile(&v, 0.9)?)]);
    }
    out.tables.push(t);
    out.tables.push(h);
    out.plot(0, line("c", "p_plus"));
    out.plot(1, line("n", "q90_scaled"));
    Ok(out)
}

fn shape(cfg: &ExperimentConfig) -> Result<Output, ExperimentError> {
    let p = &cfg.params;
    let mut out = Output::default();
    let mut t = Table::new("shape.csv", &["n", "replicas", "mean", "sd"]);
    let mut pts = Vec::new();
    for &n in &p.sizes {
        out.group(format!("n={n}"), cfg.seed, SHAPE_STREAM, cfg.replicas);
        let s = corner_time_samples(n, cfg.replicas, cfg.seed);
        let mean = s.iter().sum::<f64>() / s.len() as f64;
        let sd = (s.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (s.len().max(2) - 1) as f64).sqrt();
        t.push(vec![n.to_string(), cfg.replicas.to_string(), num(mean), num(sd)]);
        pts.push((n as f64, sd));
    }
    let f = scaling_fit(&pts)?;
    let mut ft = Table::new("shape_fit.csv", &["slope", "intercept", "stderr", "points"]);
    ft.push(vec![num(f.slope), num(f.intercept), num(f.stderr), pts.len().to_string()]);
    out.tables.push(t);
    out.tables.push(ft);
    out.plot(0, loglog("n", "sd"));
    Ok(out)
}

fn current(cfg: &ExperimentConfig) -> Result<Output, ExperimentError> {
    let p = &cfg.params;
    let c = p.c.expect("validated");
    let mut out = Output::default();
    let mut t = Table::new("current.csv", &["n", "t", "replicas", "median", "q1", "q3", "iqr"]);
    let mut s = Table::new("current_samples.csv", &["n", "replica", "scaled"]);
    for sum in current_fluctuations(p.alpha, p.beta, c, &p.sizes, cfg.replicas, cfg.seed)? {
        out.group(format!("n={}", sum.n), cfg.seed ^ sum.n as u64, CURRENT_STREAM, cfg.replicas);
        t.push(vec![
            sum.n.to_string(),
            num(sum.t),
            cfg.replicas.to_string(),
            num(sum.median),
            num(quantile(&sum.scaled, 0.25)?),
            num(quantile(&sum.scaled, 0.75)?),
            num(sum.iqr),
        ]);
        for (i, v) in sum.scaled.iter().enumerate() {
            s.push(vec![sum.n.to_string(), i.to_string(), num(*v)]);
        }
    }
    out.tables.push(t);
    out.tables.push(s);
    out.plot(1, PlotKind::Histogram { column: "scaled".into(), bins: 30 });
    Ok(out)
}

fn lower_bound(cfg: &ExperimentConfig) -> Result<Output, ExperimentError> {
    let p = &cfg.params;
    let c = p.c.expect("validated");
    let [lo, hi] = p.band.unwrap_or([0.85, 0.95]);
    let mut out = Output::default();
    let mut t = Table::new(
        "lower_bound.csv",
        &["n", "alpha", "beta", "t", "theta", "mu", "hit", "witness", "stderr", "replicas", "flagged"],
    );
    for &n in &p.sizes {
        let theta = match p.theta {
            Some(th) => th,
            None => theta_for_band(n, lo, hi)?.0,
        };
        let time = c * power(n, 1.5);
        out.group(format!("n={n}"), cfg.seed, WITNESS_STREAM, cfg.replicas);
        let w = lower_bound_witness(&Params::new(n, p.alpha, p.beta)?, time, theta, cfg.replicas, cfg.seed)?;
        t.push(vec![
            n.to_string(),
            num(p.alpha),
            num(p.beta),
            num(w.t),
            num(w.theta),
            num(w.mu),
            num(w.hit),
            num(w.witness),
            num(w.stderr),
            w.replicas.to_string(),
            w.flagged.to_string(),
        ]);
    }
    out.tables.push(t);
    out.plot(0, line("n", "witness"));
    Ok(out)
}

fn tag_check(cfg: &ExperimentConfig) -> Result<Output, ExperimentError> {
    let p = &cfg.params;
    let c = p.c.expect("validated");
    let mut out = Output::default();
    out.group("replicas".into(), cfg.seed, TAG_STREAM, cfg.replicas);
    let mut t = Table::new("tag_check.csv", &["n", "t", "replicas", "fired", "tags_checked", "tag_violations"]);
    for &n in &p.sizes {
        let time = c * power(n, 1.5);
        let reps = (0..cfg.replicas as u64)
            .into_par_iter()
            .map(|i| triple_point_tag_check(n, time, derive_seed(cfg.seed, i, TAG_STREAM)))
            .collect::<Result<Vec<_>, _>>()?;
        t.push(vec![
            n.to_string(),
            num(time),
            cfg.replicas.to_string(),
            reps.iter().filter(|r| r.fired).count().to_string(),
            reps.iter().map(|r| r.tags_checked).sum::<usize>().to_string(),
            reps.iter().map(|r| r.tag_violations).sum::<usize>().to_string(),
        ]);
    }
    out.tables.push(t);
    Ok(out)
}
