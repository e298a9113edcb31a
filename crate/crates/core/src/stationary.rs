//! Stationary corner growth model on the strip: increments, Burke checks,
//! the reversed environment and boundary experiments.

use std::collections::BTreeMap;

use crate::lpp::{
    busemann, passage_times, rectangle, semi_infinite_geodesic, EnvironmentSpec, LppError, PassageField, Region,
    Site, Source, WeightField,
};
use crate::rng::derive_seed;
use crate::stats::{correlation, ks_exponential, StatsError, TestReport, MIN_SAMPLES};

/// Stream tag for Burke replicas.
pub const BURKE_STREAM: u64 = 0x4255_524b;

/// Relative tolerance of the increment recursion.
pub const RECURSION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StationaryError {
    #[error("passage field must start at the point (1, 0) of a stationary strip")]
    NotStationarySource,
    #[error("region too small: site {0:?} is missing")]
    RegionTooSmall(Site),
    #[error("increment recursion fails at {0:?}")]
    RecursionFailed(Site),
    #[error("down-right path leaves the support at {0:?}")]
    PathOutsideSupport(Site),
    #[error("need at least {need} samples, got {got}")]
    TooFewSamples { need: usize, got: usize },
    #[error("invalid parameters")]
    BadParameters,
    #[error("no boundary hit before anti-diagonal {0}")]
    HorizonCap(i64),
    #[error(transparent)]
    Lpp(#[from] LppError),
    #[error(transparent)]
    Stats(#[from] StatsError),
}

/// Weights and passage times of the stationary strip on rows `0..=rows`.
pub fn stationary_passage(n: usize, rows: i64, seed: u64) -> Result<(WeightField, PassageField), StationaryError> {
    let spec = EnvironmentSpec::StationaryStrip { n };
    spec.validate()?;
    if rows < 0 {
        return Err(StationaryError::BadParameters);
    }
    let field = WeightField::sample(spec, Region::support_rows(&spec, 0, rows)?, seed);
    let pf = passage_times(&field, Source::point((1, 0)))?;
    Ok((field, pf))
}

/// Horizontal, vertical and minimum increments of the stationary passage
/// times `G = G((1,0), .)`.
///
/// `I(x) = G(x) - G(x - e1)`, `J(x) = G(x) - G(x - e2)` and
/// `Y(x) = min(I(x + e1), J(x + e2))`.
#[derive(Clone, Debug)]
pub struct IncrementField {
    n: usize,
    pf: PassageField,
    i: BTreeMap<Site, f64>,
    j: BTreeMap<Site, f64>,
    y: BTreeMap<Site, f64>,
}

/// Increments of `pf`, checking `I = (I(x - e2) - J(x - e1))+ + w(x)` and its
/// mirror for `J` at every site with all three predecessors present.
pub fn increments(field: &WeightField, pf: &PassageField) -> Result<IncrementField, StationaryError> {
    let n = match (field.spec(), pf.region().span(0)) {
        (Some(EnvironmentSpec::StationaryStrip { n }), _) => n,
        (None, Some((1, hi))) if hi >= 1 => hi as usize,
        _ => return Err(StationaryError::NotStationarySource),
    };
    if !matches!(pf.source(), Source::Points(p) if p.as_slice() == [(1, 0)]) {
        return Err(StationaryError::NotStationarySource);
    }
    let top = pf.region().row_hi();
    if top < 1 {
        return Err(StationaryError::RegionTooSmall((1, 1)));
    }
    let (mut i, mut j, mut y) = (BTreeMap::new(), BTreeMap::new(), BTreeMap::new());
    for x in pf.region().iter() {
        let Some(g) = pf.get(x) else { continue };
        if let Some(l) = pf.get((x.0 - 1, x.1)) {
            i.insert(x, g - l);
        }
        if let Some(d) = pf.get((x.0, x.1 - 1)) {
            j.insert(x, g - d);
        }
    }
    for x in pf.region().iter() {
        if let (Some(a), Some(b)) = (i.get(&(x.0 + 1, x.1)), j.get(&(x.0, x.1 + 1))) {
            y.insert(x, a.min(*b));
        }
    }
    for x in pf.region().iter() {
        let (Some(&ix), Some(&jx)) = (i.get(&x), j.get(&x)) else { continue };
        let (Some(&i_below), Some(&j_left)) = (i.get(&(x.0, x.1 - 1)), j.get(&(x.0 - 1, x.1))) else {
            continue;
        };
        let w = field.get(x).ok_or(StationaryError::RegionTooSmall(x))?;
        let tol = RECURSION_TOL * pf.get(x).unwrap().abs().max(1.0);
        let ri = (i_below - j_left).max(0.0) + w;
        let rj = (j_left - i_below).max(0.0) + w;
        if (ri - ix).abs() > tol || (rj - jx).abs() > tol {
            return Err(StationaryError::RecursionFailed(x));
        }
    }
    Ok(IncrementField { n, pf: pf.clone(), i, j, y })
}

impl IncrementField {
    pub fn width(&self) -> usize {
        self.n
    }

    pub fn passage(&self) -> &PassageField {
        &self.pf
    }

    pub fn g(&self, x: Site) -> Option<f64> {
        self.pf.get(x)
    }

    pub fn i(&self, x: Site) -> Option<f64> {
        self.i.get(&x).copied()
    }

    pub fn j(&self, x: Site) -> Option<f64> {
        self.j.get(&x).copied()
    }

    pub fn y(&self, x: Site) -> Option<f64> {
        self.y.get(&x).copied()
    }

    pub fn horizontal(&self) -> &BTreeMap<Site, f64> {
        &self.i
    }

    pub fn vertical(&self) -> &BTreeMap<Site, f64> {
        &self.j
    }

    pub fn minimum(&self) -> &BTreeMap<Site, f64> {
        &self.y
    }

    /// `|G(gamma^k) - G(gamma^{k-1})|` along a down-right path.
    pub fn along(&self, path: &[Site]) -> Result<Vec<f64>, StationaryError> {
        path.windows(2)
            .map(|w| {
                let a = self.g(w[0]).ok_or(StationaryError::PathOutsideSupport(w[0]))?;
                let b = self.g(w[1]).ok_or(StationaryError::PathOutsideSupport(w[1]))?;
                Ok((b - a).abs())
            })
            .collect()
    }
}

/// Down-right paths of `n` steps across the strip.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DownRightPath {
    /// Row `j >= 1` from `(j, j)` to `(j + n, j)`.
    Row(i64),
    /// Column `c` from `(c, c)` down to `(c, c - n)`.
    Column(i64),
    /// Alternating `e1`, `-e2` steps from `(j, j)`.
    Staircase(i64),
}

impl DownRightPath {
    pub fn sites(&self, n: usize) -> Result<Vec<Site>, StationaryError> {
        let spec = EnvironmentSpec::StationaryStrip { n };
        let n = n as i64;
        let pts: Vec<Site> = match *self {
            DownRightPath::Row(j) => (0..=n).map(|k| (j + k, j)).collect(),
            DownRightPath::Column(c) => (0..=n).map(|k| (c, c - k)).collect(),
            DownRightPath::Staircase(j) => (0..=n).map(|k| (j + (k + 1) / 2, j - k / 2)).collect(),
        };
        if let Some(&x) = pts.iter().find(|&&x| !spec.in_support(x)) {
            return Err(StationaryError::PathOutsideSupport(x));
        }
        Ok(pts)
    }

    /// Highest row the path uses.
    pub fn top_row(&self) -> i64 {
        match *self {
            DownRightPath::Row(j) | DownRightPath::Staircase(j) => j,
            DownRightPath::Column(c) => c,
        }
    }

    pub fn name(&self) -> String {
        match *self {
            DownRightPath::Row(j) => format!("row{j}"),
            DownRightPath::Column(c) => format!("column{c}"),
            DownRightPath::Staircase(j) => format!("staircase{j}"),
        }
    }
}

/// Three standard paths across the width-`n` strip, all inside rows `1..=n + 2`.
pub fn standard_paths(n: usize) -> [DownRightPath; 3] {
    let n = n as i64;
    [DownRightPath::Row(n / 2 + 1), DownRightPath::Column(n + 1), DownRightPath::Staircase(n / 2 + 1)]
}

#[derive(Clone, Debug, PartialEq)]
pub struct BurkeReport {
    pub path: DownRightPath,
    pub replicas: usize,
    /// Pooled path increments against `Exp(1/2)`.
    pub increments: TestReport,
    /// Pooled minimum increments below the path against `Exp(1)`.
    pub minimum: TestReport,
    /// Negative control: path increments against `Exp(1)`.
    pub wrong_rate: TestReport,
    /// Named pairwise correlation estimates across replicas.
    pub correlations: Vec<(String, f64)>,
}

impl BurkeReport {
    pub fn max_abs_correlation(&self) -> f64 {
        self.correlations.iter().map(|c| c.1.abs()).fold(0.0, f64::max)
    }
}

/// Burke's property along `path` over `replicas` independent stationary
/// strips of width `n` on rows `0..=rows`.
///
/// Increments along the path and the minimum increments `Y(y - (1,1))` for
/// path points `y` are pooled over replicas. Correlations are taken across
/// replicas between consecutive path increments, between each increment and
/// the `Y` below its end point, and between `I(x)`, `J(x)`, `Y(x - (1,1))` at
/// a bulk site `x`.
pub fn burke_test(
    n: usize,
    rows: i64,
    path: DownRightPath,
    seed: u64,
    replicas: usize,
) -> Result<BurkeReport, StationaryError> {
    if replicas < MIN_SAMPLES {
        return Err(StationaryError::TooFewSamples { need: MIN_SAMPLES, got: replicas });
    }
    let pts = path.sites(n)?;
    if path.top_row() > rows {
        return Err(StationaryError::RegionTooSmall(pts[0]));
    }
    let below: Vec<Site> = pts.iter().map(|&(a, b)| (a - 1, b - 1)).collect();
    let bulk = (pts[0].0.max(2) + n as i64 / 2, pts[0].1.max(2));
    let mut incs: Vec<Vec<f64>> = vec![Vec::with_capacity(replicas); n];
    let mut ys: Vec<Vec<Option<f64>>> = vec![Vec::with_capacity(replicas); n + 1];
    let mut triple: [Vec<f64>; 3] = Default::default();
    for r in 0..replicas as u64 {
        let (field, pf) = stationary_passage(n, rows, derive_seed(seed, r, BURKE_STREAM))?;
        let inc = increments(&field, &pf)?;
        for (k, v) in inc.along(&pts)?.into_iter().enumerate() {
            incs[k].push(v);
        }
        for (k, &x) in below.iter().enumerate() {
            ys[k].push(inc.y(x));
        }
        if let (Some(a), Some(b), Some(c)) = (inc.i(bulk), inc.j(bulk), inc.y((bulk.0 - 1, bulk.1 - 1))) {
            triple[0].push(a);
            triple[1].push(b);
            triple[2].push(c);
        }
    }
    let pooled: Vec<f64> = incs.iter().flatten().copied().collect();
    let pooled_y: Vec<f64> = ys.iter().flatten().flatten().copied().collect();
    let mut correlations = Vec::new();
    for k in 0..n.saturating_sub(1) {
        correlations.push((format!("inc{k}~inc{}", k + 1), correlation(&incs[k], &incs[k + 1])?));
    }
    for k in 0..n {
        // the Y below the end point of step k, when it exists in every replica
        if ys[k + 1].iter().all(Option::is_some) {
            let yk: Vec<f64> = ys[k + 1].iter().map(|v| v.unwrap()).collect();
            correlations.push((format!("inc{k}~Y{:?}", below[k + 1]), correlation(&incs[k], &yk)?));
        }
    }
    if triple[0].len() >= MIN_SAMPLES {
        correlations.push((format!("I~J{bulk:?}"), correlation(&triple[0], &triple[1])?));
        correlations.push((format!("I~Y{bulk:?}"), correlation(&triple[0], &triple[2])?));
        correlations.push((format!("J~Y{bulk:?}"), correlation(&triple[1], &triple[2])?));
    }
    Ok(BurkeReport {
        path,
        replicas,
        increments: ks_exponential(&pooled, 0.5)?,
        minimum: ks_exponential(&pooled_y, 1.0)?,
        wrong_rate: ks_exponential(&pooled, 1.0)?,
        correlations,
    })
}

/// `P_M`: supported sites between `(1, 0)` and `(n + m - 1, m)`.
pub fn parallelogram(n: usize, m: i64) -> Result<Region, StationaryError> {
    if n == 0 || m < 1 {
        return Err(StationaryError::BadParameters);
    }
    let w = n as i64;
    let spans = (0..=m)
        .map(|r| match r {
            0 => (1, w),
            r if r == m => (m, m + w - 1),
            r => (r, r + w),
        })
        .collect();
    Ok(Region::from_spans(0, spans))
}

/// Reversed environment on `P_M`, assembled from the increments of the
/// stationary passage times by the point reflection through `(n + m, m)`.
#[derive(Clone, Debug)]
pub struct ReversedField {
    pub n: usize,
    pub m: i64,
    pub field: WeightField,
}

/// Builds the reversed environment: with `T = (n + m, m)`,
///
/// * `I(T - x + e1)` on the boundary side `x1 - x2 = n, x2 >= 1` and on row 0,
/// * `J(T - x + e2)` on the diagonal `x1 = x2 >= 1`,
/// * `Y(T - x)` elsewhere.
pub fn reversed_environment(inc: &IncrementField, m: i64) -> Result<ReversedField, StationaryError> {
    let n = inc.width();
    let w = n as i64;
    let region = parallelogram(n, m)?;
    let t = (w + m, m);
    if inc.g(t).is_none() {
        return Err(StationaryError::RegionTooSmall(t));
    }
    let mut weights = Vec::with_capacity(region.len());
    for x in region.iter() {
        let v = if (x.1 >= 1 && x.0 - x.1 == w) || x.1 == 0 {
            let s = (t.0 + 1 - x.0, t.1 - x.1);
            inc.i(s).ok_or(StationaryError::RegionTooSmall(s))?
        } else if x.0 == x.1 {
            let s = (t.0 - x.0, t.1 - x.1 + 1);
            inc.j(s).ok_or(StationaryError::RegionTooSmall(s))?
        } else {
            let s = (t.0 - x.0, t.1 - x.1);
            inc.y(s).ok_or(StationaryError::RegionTooSmall(s))?
        };
        weights.push(v);
    }
    Ok(ReversedField { n, m, field: WeightField::from_vec(region, weights) })
}

impl ReversedField {
    /// Target `T = (n + m, m)` of the reflection.
    pub fn target(&self) -> Site {
        (self.n as i64 + self.m, self.m)
    }

    pub fn passage(&self) -> Result<PassageField, StationaryError> {
        Ok(passage_times(&self.field, Source::point((1, 0)))?)
    }

    /// Same weights cyclically shifted by one site, a negative control.
    pub fn shifted(&self) -> ReversedField {
        let mut v = self.field.values().to_vec();
        v.rotate_left(1);
        ReversedField { n: self.n, m: self.m, field: WeightField::from_vec(self.field.region().clone(), v) }
    }
}

/// `max |G_rev(x) - (G(T) - G(T - x))| / G(T)` over `x` in `P_M`.
pub fn reversal_identity_error(inc: &IncrementField, rev: &ReversedField) -> Result<f64, StationaryError> {
    let t = rev.target();
    let gt = inc.g(t).ok_or(StationaryError::RegionTooSmall(t))?;
    let grev = rev.passage()?;
    let mut worst: f64 = 0.0;
    for x in rev.field.region().iter() {
        let y = (t.0 - x.0, t.1 - x.1);
        let rhs = gt - inc.g(y).ok_or(StationaryError::RegionTooSmall(y))?;
        let lhs = grev.get(x).ok_or(LppError::Unreachable(x))?;
        worst = worst.max((lhs - rhs).abs() / gt);
    }
    Ok(worst)
}

/// Reversal identity error for one sampled stationary strip.
pub fn verify_reversal_identity(n: usize, m: i64, seed: u64) -> Result<f64, StationaryError> {
    let (field, pf) = stationary_passage(n, m, seed)?;
    let inc = increments(&field, &pf)?;
    reversal_identity_error(&inc, &reversed_environment(&inc, m)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InterfaceCheck {
    /// Steps where both forward moves stay in `P_M`.
    pub checked: usize,
    pub violations: usize,
}

/// Rotates the semi-infinite geodesic from `(1, 0)` between `L_n` and
/// `L_{n+m}` through `T` and checks that every step from an interior point
/// moves to the smaller reversed passage time.
pub fn reversed_interface_check(
    width: usize,
    n: i64,
    m: i64,
    big_m: i64,
    seed: u64,
) -> Result<InterfaceCheck, StationaryError> {
    if n < 1 || m < 1 || n + m >= big_m {
        return Err(StationaryError::BadParameters);
    }
    let spec = EnvironmentSpec::StationaryStrip { n: width };
    let semi = semi_infinite_geodesic(&spec, (1, 0), seed, n + m)?;
    let v = semi.path.points();
    let (field, pf) = stationary_passage(width, big_m, seed)?;
    let inc = increments(&field, &pf)?;
    let rev = reversed_environment(&inc, big_m)?;
    let grev = rev.passage()?;
    let t = rev.target();
    let region = rev.field.region();
    // v[k - 1] lies on L_k
    let z = |i: i64| {
        let p = v[(n + m - i) as usize];
        (t.0 - p.0, t.1 - p.1)
    };
    let mut out = InterfaceCheck { checked: 0, violations: 0 };
    for i in 1..=m {
        let zi = z(i);
        let (up, right) = ((zi.0, zi.1 + 1), (zi.0 + 1, zi.1));
        if !(region.contains(up) && region.contains(right)) {
            continue;
        }
        let (Some(gu), Some(gr)) = (grev.get(up), grev.get(right)) else { continue };
        let expect = if gu < gr { up } else { right };
        out.checked += 1;
        out.violations += (z(i + 1) != expect) as usize;
    }
    Ok(out)
}

/// `nu - n`: generations after `L_n` until the semi-infinite geodesic from
/// `(1, 0)` first touches `{(k, k)} u {(k + width, k)}`, `k >= 1`.
pub fn boundary_hitting(width: usize, n: i64, seed: u64) -> Result<i64, StationaryError> {
    if width == 0 || n < 1 {
        return Err(StationaryError::BadParameters);
    }
    let w = width as i64;
    let spec = EnvironmentSpec::StationaryStrip { n: width };
    let mut extra = 4 * w;
    loop {
        let target = n + extra;
        if target > crate::lpp::DEPTH_CAP / 4 {
            return Err(StationaryError::HorizonCap(target));
        }
        let semi = semi_infinite_geodesic(&spec, (1, 0), seed, target)?;
        let hit = semi.path.points().iter().find(|&&(a, b)| a + b >= n && b >= 1 && (a == b || a - b == w));
        if let Some(&(a, b)) = hit {
            return Ok(a + b - n);
        }
        extra *= 2;
    }
}

/// `(B+, B-)` for the rectangle `R_n^m` of the width-`width` strip at
/// `alpha = beta = 1/2`: whether `pi(a2, a3)` touches the diagonal and
/// whether `pi(a1, a4)` touches the side `x1 - x2 = width`.
pub fn crossing_events(width: usize, n: i64, m: i64, seed: u64) -> Result<(bool, bool), StationaryError> {
    let spec = EnvironmentSpec::strip(0.5, 0.5, width)?;
    let rect = rectangle(width, n, m)?;
    let field = WeightField::sample(spec, rect.region(), seed);
    let w = width as i64;
    let lower = passage_times(&field, Source::point(rect.a2))?.geodesic(rect.a3)?;
    let upper = passage_times(&field, Source::point(rect.a1))?.geodesic(rect.a4)?;
    let plus = lower.points().iter().any(|&(a, b)| a == b && b >= 1);
    let minus = upper.points().iter().any(|&(a, b)| a - b == w && b >= 1);
    Ok((plus, minus))
}

/// Busemann values `B(x, x + e1)` next to the horizontal increments
/// `I(x + e1)` along row `row`, for exploratory comparison.
pub fn busemann_row(width: usize, row: i64, seed: u64) -> Result<Vec<(Site, f64, f64)>, StationaryError> {
    let spec = EnvironmentSpec::StationaryStrip { n: width };
    let (field, pf) = stationary_passage(width, row + 1, seed)?;
    let inc = increments(&field, &pf)?;
    let (lo, hi) = spec.row_span(row).ok_or(StationaryError::BadParameters)?;
    (lo..hi)
        .map(|a| {
            let x = (a, row);
            let b = busemann(&spec, x, (a + 1, row), seed)?;
            Ok((x, b, inc.i((a + 1, row)).unwrap_or(f64::NAN)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_cases_are_boundary_weights() {
        for seed in 0..10 {
            let (field, pf) = stationary_passage(4, 6, seed).unwrap();
            let inc = increments(&field, &pf).unwrap();
            let close = |a: Option<f64>, x: Site| (a.unwrap() - field.get(x).unwrap()).abs() < 1e-12 * pf.get(x).unwrap();
            assert!(close(inc.i((2, 0)), (2, 0)));
            assert!(close(inc.j((1, 1)), (1, 1)));
            for j in 1..=6 {
                assert!(close(inc.j((j, j)), (j, j)));
                assert!(close(inc.i((j + 4, j)), (j + 4, j)));
            }
            assert!(inc.horizontal().values().chain(inc.vertical().values()).all(|&v| v >= 0.0));
        }
    }

    #[test]
    fn horizontal_increment_mean() {
        let mut all = Vec::new();
        let mut seed = 0;
        while all.len() < 10_000 {
            let (field, pf) = stationary_passage(4, 8, seed).unwrap();
            all.extend(increments(&field, &pf).unwrap().along(&DownRightPath::Row(8).sites(4).unwrap()).unwrap());
            seed += 1;
        }
        let m = all.iter().sum::<f64>() / all.len() as f64;
        assert!((m - 2.0).abs() < 0.07, "{m}");
    }

    #[test]
    fn recursion_mutation_detected() {
        let (field, pf) = stationary_passage(3, 4, 1).unwrap();
        let mut other = field.clone();
        let k = other.region().index((3, 2)).unwrap();
        other.values_mut()[k] += 1.0;
        assert!(matches!(increments(&other, &pf), Err(StationaryError::RecursionFailed(_))));
    }

    #[test]
    fn paths_cross_the_strip() {
        for n in [1usize, 2, 5, 8] {
            for p in standard_paths(n) {
                let s = p.sites(n).unwrap();
                assert_eq!(s.len(), n + 1);
                assert_eq!(s[0].0 - s[0].1, 0);
                assert_eq!(s[n].0 - s[n].1, n as i64);
                for w in s.windows(2) {
                    let d = (w[1].0 - w[0].0, w[1].1 - w[0].1);
                    assert!(d == (1, 0) || d == (0, -1));
                }
            }
        }
        assert!(DownRightPath::Column(3).sites(4).is_err());
    }

    #[test]
    fn parallelogram_support() {
        let spec = EnvironmentSpec::StationaryStrip { n: 3 };
        let r = parallelogram(3, 5).unwrap();
        let brute: Vec<Site> = (0..=5)
            .flat_map(|b| (0..=7).map(move |a| (a, b)))
            .filter(|&x| spec.in_support(x) && x.0 >= 1 && x.0 <= 7)
            .collect();
        let mut got: Vec<Site> = r.iter().collect();
        got.sort_by_key(|x| (x.1, x.0));
        assert_eq!(got, brute);
    }

    #[test]
    fn reversal_identity_holds() {
        for seed in 0..20 {
            for (n, m) in [(1, 1), (2, 3), (4, 16)] {
                assert!(verify_reversal_identity(n, m, seed).unwrap() <= 1e-9);
            }
        }
    }

    #[test]
    fn reversal_corner_and_start() {
        let (field, pf) = stationary_passage(3, 5, 7).unwrap();
        let inc = increments(&field, &pf).unwrap();
        let rev = reversed_environment(&inc, 5).unwrap();
        let g = rev.passage().unwrap();
        let gt = inc.g((8, 5)).unwrap();
        assert!((g.get((1, 0)).unwrap() - (gt - inc.g((7, 5)).unwrap())).abs() <= 1e-12 * gt);
        assert!(rev.field.values().iter().all(|&v| v >= 0.0));
        assert_eq!(rev.field.region().len(), parallelogram(3, 5).unwrap().len());
    }

    #[test]
    fn shifted_reversal_fails() {
        let (field, pf) = stationary_passage(4, 16, 3).unwrap();
        let inc = increments(&field, &pf).unwrap();
        let rev = reversed_environment(&inc, 16).unwrap();
        assert!(reversal_identity_error(&inc, &rev.shifted()).unwrap() > 1e-3);
    }

    #[test]
    fn reversed_interface_recursion() {
        let mut checked = 0;
        for seed in 0..30 {
            let c = reversed_interface_check(4, 4, 12, 24, seed).unwrap();
            assert_eq!(c.violations, 0, "seed {seed}");
            checked += c.checked;
        }
        assert!(checked > 0);
        let c = reversed_interface_check(4, 4, 1, 8, 1).unwrap();
        assert!(c.checked <= 1 && c.violations == 0);
    }

    #[test]
    fn width_one_hits_at_once() {
        for seed in 0..5 {
            assert_eq!(boundary_hitting(1, 5, seed).unwrap(), 0);
        }
    }

    #[test]
    fn degenerate_crossing() {
        for seed in 0..5 {
            assert_eq!(crossing_events(4, 8, 1, seed).unwrap(), (false, false));
        }
    }

    #[test]
    fn burke_rejects_small_batches() {
        assert!(matches!(
            burke_test(4, 8, DownRightPath::Row(3), 0, 10),
            Err(StationaryError::TooFewSamples { .. })
        ));
    }
}
