//! Mixing times of the open-boundary TASEP: exact small-segment computation,
//! coupling upper bounds, lower-bound witnesses and current fluctuations.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use statrs::function::gamma::ln_gamma;

use crate::rng::derive_seed;
use crate::stats::{linear_fit, quantile_rank_band, LinearFit, StatsError, MIN_SAMPLES};
use crate::tasep::{enumerate_transitions, Configuration, CoupledRun, Engine, EventKind, Params, TasepError};

/// Largest segment handled by the generator.
pub const MAX_EXACT_N: usize = 14;
/// Largest segment for which `d(t)` maximises over every initial state.
pub const FULL_MAX_N: usize = 10;
/// Largest segment solved by a dense LU factorisation.
pub const DENSE_N: usize = 10;
/// Poisson tail mass dropped by uniformization.
pub const POISSON_TAIL: f64 = 1e-12;
/// Largest `Lambda t` handled in one uniformization pass.
const SPLIT_MEAN: f64 = 4096.0;
/// Stream tag for coupling replicas.
pub const COUPLING_STREAM: u64 = 0x434f_5550;
/// Stream tag for witness replicas.
pub const WITNESS_STREAM: u64 = 0x5749_544e;
/// Stream tag for current replicas.
pub const CURRENT_STREAM: u64 = 0x4355_5252;
/// Cap on coupling horizons.
pub const HORIZON_CAP: f64 = 1e7;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MixingError {
    #[error("segment length {0} exceeds the cap {MAX_EXACT_N}")]
    CapExceeded(usize),
    #[error("generator is singular; the chain is reducible")]
    Singular,
    #[error("stationary solve residual {0:e} above tolerance")]
    Residual(f64),
    #[error("dimension mismatch")]
    DimensionMismatch,
    #[error("invalid parameter {0}")]
    BadParameter(f64),
    #[error("worst-case distance increases between t={0} and t={1}")]
    NotMonotone(f64, f64),
    #[error("no bracket for the mixing time below t={0}")]
    NoBracket(f64),
    #[error("quantile unresolved at horizon cap {0}")]
    HorizonCap(f64),
    #[error("need at least {need} replicas, got {got}")]
    TooFewReplicas { need: usize, got: usize },
    #[error("no threshold gives a stationary mass in the target band")]
    NoTheta,
    #[error("stationary mass of the event unavailable for these parameters")]
    Unsupported,
    #[error(transparent)]
    Tasep(#[from] TasepError),
    #[error(transparent)]
    Stats(#[from] StatsError),
}

/// Generator in compressed rows; state `k` is `Configuration::from_index(n, k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RateMatrix {
    pub params: Params,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    rates: Vec<f64>,
    exit: Vec<f64>,
}

impl RateMatrix {
    pub fn dim(&self) -> usize {
        self.exit.len()
    }

    /// Off-diagonal `(target, rate)` pairs of row `k`.
    pub fn row(&self, k: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_ptr[k]..self.row_ptr[k + 1];
        self.cols[r.clone()].iter().copied().zip(self.rates[r].iter().copied())
    }

    /// Total exit rate of state `k`; the diagonal entry is its negative.
    pub fn exit_rate(&self, k: usize) -> f64 {
        self.exit[k]
    }

    pub fn max_exit_rate(&self) -> f64 {
        self.exit.iter().copied().fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let d = self.dim();
        let mut q = DMatrix::zeros(d, d);
        for k in 0..d {
            q[(k, k)] = -self.exit[k];
            for (j, r) in self.row(k) {
                q[(k, j)] += r;
            }
        }
        q
    }

    /// `p P` for the uniformized kernel `P = I + Q / lambda`.
    fn step(&self, p: &[f64], lambda: f64, out: &mut [f64]) {
        for (k, o) in out.iter_mut().enumerate() {
            *o = p[k] * (1.0 - self.exit[k] / lambda);
        }
        for (k, &pk) in p.iter().enumerate() {
            if pk != 0.0 {
                for (j, r) in self.row(k) {
                    out[j] += pk * r / lambda;
                }
            }
        }
    }
}

/// Sparse generator of the TASEP with the given parameters.
pub fn build_generator(params: &Params) -> Result<RateMatrix, MixingError> {
    if params.n > MAX_EXACT_N {
        return Err(MixingError::CapExceeded(params.n));
    }
    let d = 1usize << params.n;
    let mut row_ptr = Vec::with_capacity(d + 1);
    let (mut cols, mut rates, mut exit) = (Vec::new(), Vec::new(), Vec::with_capacity(d));
    row_ptr.push(0);
    for k in 0..d {
        let c = Configuration::from_index(params.n, k);
        let mut total = 0.0;
        for (to, r) in enumerate_transitions(&c, params)? {
            cols.push(to.index());
            rates.push(r);
            total += r;
        }
        exit.push(total);
        row_ptr.push(cols.len());
    }
    Ok(RateMatrix { params: *params, row_ptr, cols, rates, exit })
}

/// Largest `|pi Q|` entry.
pub fn stationary_residual(q: &RateMatrix, pi: &[f64]) -> f64 {
    let mut r: Vec<f64> = (0..q.dim()).map(|k| -pi[k] * q.exit[k]).collect();
    for (k, &p) in pi.iter().enumerate() {
        for (j, rate) in q.row(k) {
            r[j] += p * rate;
        }
    }
    r.into_iter().map(f64::abs).fold(0.0, f64::max)
}

/// Solution of `pi Q = 0`, `sum pi = 1`: dense LU up to `DENSE_N` sites,
/// Gauss-Seidel sweeps beyond.
pub fn stationary_distribution(q: &RateMatrix) -> Result<Vec<f64>, MixingError> {
    if q.params.alpha == 0.0 || q.params.beta == 0.0 {
        return Err(MixingError::Singular);
    }
    let pi = if q.params.n <= DENSE_N { dense_stationary(q)? } else { iterative_stationary(q) };
    if pi.iter().any(|&p| p < -1e-14 || !p.is_finite()) {
        return Err(MixingError::Singular);
    }
    let res = stationary_residual(q, &pi);
    if res > 1e-10 {
        return Err(MixingError::Residual(res));
    }
    Ok(pi)
}

fn dense_stationary(q: &RateMatrix) -> Result<Vec<f64>, MixingError> {
    let d = q.dim();
    let mut a = q.to_dense().transpose();
    for j in 0..d {
        a[(d - 1, j)] = 1.0;
    }
    let mut b = DVector::zeros(d);
    b[d - 1] = 1.0;
    let x = a.lu().solve(&b).ok_or(MixingError::Singular)?;
    let mut pi: Vec<f64> = x.iter().map(|v| v.max(0.0)).collect();
    let s: f64 = pi.iter().sum();
    pi.iter_mut().for_each(|v| *v /= s);
    Ok(pi)
}

fn iterative_stationary(q: &RateMatrix) -> Vec<f64> {
    let d = q.dim();
    // incoming rates per state
    let mut inc: Vec<Vec<(usize, f64)>> = vec![Vec::new(); d];
    for k in 0..d {
        for (j, r) in q.row(k) {
            inc[j].push((k, r));
        }
    }
    let mut pi = vec![1.0 / d as f64; d];
    for _ in 0..200_000 {
        for j in 0..d {
            let s: f64 = inc[j].iter().map(|&(k, r)| pi[k] * r).sum();
            pi[j] = s / q.exit[j];
        }
        let tot: f64 = pi.iter().sum();
        pi.iter_mut().for_each(|v| *v /= tot);
        if stationary_residual(q, &pi) < 1e-13 {
            break;
        }
    }
    pi
}

/// Poisson weights of mean `mu` up to the order where the tail drops below
/// `POISSON_TAIL`.
fn poisson_weights(mu: f64) -> Vec<f64> {
    let mut w = Vec::new();
    let mut acc = 0.0;
    let mut k = 0usize;
    loop {
        let lw = if mu == 0.0 {
            if k == 0 { 0.0 } else { f64::NEG_INFINITY }
        } else {
            -mu + k as f64 * mu.ln() - ln_gamma(k as f64 + 1.0)
        };
        let wk = lw.exp();
        w.push(wk);
        acc += wk;
        if (k as f64 >= mu && 1.0 - acc < POISSON_TAIL) || mu == 0.0 {
            return w;
        }
        k += 1;
    }
}

/// `p e^{tQ}` by uniformization at rate `max exit rate`.
pub fn evolve(q: &RateMatrix, p: &[f64], t: f64) -> Result<Vec<f64>, MixingError> {
    if p.len() != q.dim() {
        return Err(MixingError::DimensionMismatch);
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(MixingError::BadParameter(t));
    }
    let lambda = q.max_exit_rate();
    if t == 0.0 || lambda == 0.0 {
        return Ok(p.to_vec());
    }
    if lambda * t > SPLIT_MEAN {
        let half = evolve(q, p, t / 2.0)?;
        return evolve(q, &half, t / 2.0);
    }
    let w = poisson_weights(lambda * t);
    let mut cur = p.to_vec();
    let mut next = vec![0.0; p.len()];
    let mut out: Vec<f64> = cur.iter().map(|v| v * w[0]).collect();
    for &wk in &w[1..] {
        q.step(&cur, lambda, &mut next);
        std::mem::swap(&mut cur, &mut next);
        out.iter_mut().zip(&cur).for_each(|(o, c)| *o += wk * c);
    }
    let s: f64 = out.iter().sum();
    out.iter_mut().for_each(|v| *v /= s);
    Ok(out)
}

/// Law at time `t` started from `eta0`.
pub fn distribution_at(q: &RateMatrix, eta0: &Configuration, t: f64) -> Result<Vec<f64>, MixingError> {
    eta0.check(&q.params)?;
    let mut p = vec![0.0; q.dim()];
    p[eta0.index()] = 1.0;
    evolve(q, &p, t)
}

/// Half the L1 distance.
pub fn tv_distance(p: &[f64], q: &[f64]) -> Result<f64, MixingError> {
    if p.len() != q.len() {
        return Err(MixingError::DimensionMismatch);
    }
    Ok(0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Exact,
    Coupling,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Coupling => "coupling",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MixingReport {
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    pub eps: f64,
    pub method: Method,
    pub t: f64,
    pub lo: f64,
    pub hi: f64,
    /// Initial state attaining the worst case at `hi`, for exact reports.
    pub maximizer: Option<usize>,
    /// Whether `d(t)` was maximised over every initial state.
    pub all_states: bool,
}

/// Initial states used for `d(t)`.
pub fn candidate_states(n: usize) -> Vec<usize> {
    if n <= FULL_MAX_N {
        (0..1usize << n).collect()
    } else {
        vec![Configuration::ones(n).index(), Configuration::zeros(n).index(), Configuration::alternating(n).index()]
    }
}

/// Worst-case distance `max_x TV(P^t(x, .), pi)` and its maximiser.
pub fn worst_distance(q: &RateMatrix, pi: &[f64], states: &[usize], t: f64) -> Result<(f64, usize), MixingError> {
    let d = q.dim();
    let vals: Vec<(f64, usize)> = states
        .par_iter()
        .map(|&x| {
            let mut p = vec![0.0; d];
            p[x] = 1.0;
            let pt = evolve(q, &p, t)?;
            Ok((tv_distance(&pt, pi)?, x))
        })
        .collect::<Result<_, MixingError>>()?;
    Ok(vals.into_iter().fold((f64::NEG_INFINITY, 0), |a, b| if b.0 > a.0 { b } else { a }))
}

/// Bracket of `inf { t : d(t) < eps }` of width at most `tol`.
pub fn exact_mixing_time(params: &Params, eps: f64, tol: f64) -> Result<MixingReport, MixingError> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(MixingError::BadParameter(eps));
    }
    if !(tol > 0.0) {
        return Err(MixingError::BadParameter(tol));
    }
    let q = build_generator(params)?;
    let pi = stationary_distribution(&q)?;
    let states = candidate_states(params.n);
    let mut grid: Vec<(f64, f64)> = Vec::new();
    let eval = |t: f64, grid: &mut Vec<(f64, f64)>| -> Result<(f64, usize), MixingError> {
        let r = worst_distance(&q, &pi, &states, t)?;
        grid.push((t, r.0));
        Ok(r)
    };
    let (d0, _) = eval(0.0, &mut grid)?;
    if d0 < eps {
        return Ok(report(params, eps, 0.0, 0.0, None, &states));
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    let mut best = loop {
        let (d, x) = eval(hi, &mut grid)?;
        if d < eps {
            break x;
        }
        lo = hi;
        hi *= 2.0;
        if hi > HORIZON_CAP {
            return Err(MixingError::NoBracket(hi));
        }
    };
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let (d, x) = eval(mid, &mut grid)?;
        if d < eps {
            hi = mid;
            best = x;
        } else {
            lo = mid;
        }
    }
    grid.sort_by(|a, b| a.0.total_cmp(&b.0));
    for w in grid.windows(2) {
        if w[1].1 > w[0].1 + 1e-9 {
            return Err(MixingError::NotMonotone(w[0].0, w[1].0));
        }
    }
    Ok(report(params, eps, lo, hi, Some(best), &states))
}

fn report(params: &Params, eps: f64, lo: f64, hi: f64, maximizer: Option<usize>, states: &[usize]) -> MixingReport {
    MixingReport {
        n: params.n,
        alpha: params.alpha,
        beta: params.beta,
        eps,
        method: Method::Exact,
        t: hi,
        lo,
        hi,
        maximizer,
        all_states: states.len() == 1 << params.n,
    }
}

/// Coalescence times of the all-one and all-zero copies under the
/// canonical coupling; `None` for runs still apart at `horizon`.
pub fn coupling_times(params: &Params, replicas: usize, seed: u64, horizon: f64) -> Result<Vec<Option<f64>>, MixingError> {
    let (one, zero) = (Configuration::ones(params.n), Configuration::zeros(params.n));
    (0..replicas as u64)
        .into_par_iter()
        .map(|r| {
            let mut run = CoupledRun::new(&one, &zero, params, params, derive_seed(seed, r, COUPLING_STREAM))?;
            Ok(run.run_until(horizon))
        })
        .collect()
}

/// Empirical `(1 - eps)`-quantile of the coupling time with a 95% binomial
/// order-statistic band. The horizon doubles until the band is resolved.
pub fn coupling_mixing_upper(params: &Params, eps: f64, replicas: usize, seed: u64) -> Result<MixingReport, MixingError> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(MixingError::BadParameter(eps));
    }
    if replicas < MIN_SAMPLES {
        return Err(MixingError::TooFewReplicas { need: MIN_SAMPLES, got: replicas });
    }
    let k = replicas - (eps * replicas as f64).floor() as usize;
    let (lo_rank, hi_rank) = quantile_rank_band(replicas, 1.0 - eps, 0.95)?;
    let hi_rank = hi_rank.max(k);
    let (one, zero) = (Configuration::ones(params.n), Configuration::zeros(params.n));
    let mut runs: Vec<CoupledRun> = (0..replicas as u64)
        .map(|r| CoupledRun::new(&one, &zero, params, params, derive_seed(seed, r, COUPLING_STREAM)))
        .collect::<Result<_, _>>()?;
    let mut horizon = 4.0 * (params.n as f64).powf(1.5).max(1.0);
    loop {
        let times: Vec<Option<f64>> = runs.par_iter_mut().map(|r| r.run_until(horizon)).collect();
        let mut done: Vec<f64> = times.into_iter().flatten().collect();
        if done.len() >= hi_rank {
            done.sort_by(f64::total_cmp);
            return Ok(MixingReport {
                n: params.n,
                alpha: params.alpha,
                beta: params.beta,
                eps,
                method: Method::Coupling,
                t: done[k - 1],
                lo: done[lo_rank - 1],
                hi: done[hi_rank - 1],
                maximizer: None,
                all_states: false,
            });
        }
        horizon *= 2.0;
        if horizon > HORIZON_CAP {
            return Err(MixingError::HorizonCap(HORIZON_CAP));
        }
    }
}

/// Binomial(n, 1/2) upper tail `P(S >= k)`.
pub fn binomial_half_tail(n: usize, k: i64) -> f64 {
    if k <= 0 {
        return 1.0;
    }
    let k = k as usize;
    if k > n {
        return 0.0;
    }
    let ln_choose = |j: usize| ln_gamma(n as f64 + 1.0) - ln_gamma(j as f64 + 1.0) - ln_gamma((n - j) as f64 + 1.0);
    (k..=n).map(|j| (ln_choose(j) - n as f64 * std::f64::consts::LN_2).exp()).sum::<f64>().min(1.0)
}

/// Least particle count in `E_theta = { sum (eta - 1/2) >= -theta sqrt(n) }`.
pub fn witness_threshold(n: usize, theta: f64) -> i64 {
    (n as f64 / 2.0 - theta * (n as f64).sqrt()).ceil() as i64
}

/// `theta` whose uniform mass `mu(E_theta)` lies in `[lo, hi]`, closest to
/// the midpoint.
pub fn theta_for_band(n: usize, lo: f64, hi: f64) -> Result<(f64, f64), MixingError> {
    let target = 0.5 * (lo + hi);
    let best = (0..=n as i64)
        .map(|k| (k, binomial_half_tail(n, k)))
        .filter(|&(_, m)| m >= lo && m <= hi)
        .min_by(|a, b| (a.1 - target).abs().total_cmp(&(b.1 - target).abs()))
        .ok_or(MixingError::NoTheta)?;
    // theta with threshold exactly k
    let theta = (n as f64 / 2.0 - best.0 as f64) / (n as f64).sqrt();
    Ok((theta, best.1))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub n: usize,
    pub t: f64,
    pub theta: f64,
    /// Stationary mass of `E_theta`.
    pub mu: f64,
    /// Fraction of runs from the empty segment in `E_theta` at time `t`.
    pub hit: f64,
    pub witness: f64,
    pub stderr: f64,
    pub replicas: usize,
    /// Parameters outside `alpha, beta >= 1/2`.
    pub flagged: bool,
}

/// `mu(E_theta) - P(eta_t in E_theta | eta_0 = 0)`, a lower bound on the
/// distance to stationarity at time `t`.
pub fn lower_bound_witness(params: &Params, t: f64, theta: f64, replicas: usize, seed: u64) -> Result<Witness, MixingError> {
    if replicas < MIN_SAMPLES {
        return Err(MixingError::TooFewReplicas { need: MIN_SAMPLES, got: replicas });
    }
    let n = params.n;
    let k = witness_threshold(n, theta);
    let mu = if params.alpha == 0.5 && params.beta == 0.5 {
        binomial_half_tail(n, k)
    } else if n <= MAX_EXACT_N {
        let pi = stationary_distribution(&build_generator(params)?)?;
        pi.iter()
            .enumerate()
            .filter(|(s, _)| s.count_ones() as i64 >= k)
            .map(|(_, p)| p)
            .sum()
    } else {
        return Err(MixingError::Unsupported);
    };
    let zero = Configuration::zeros(n);
    let hits: Vec<bool> = (0..replicas as u64)
        .into_par_iter()
        .map(|r| {
            let c = crate::tasep::simulate_final(&zero, params, t, derive_seed(seed, r, WITNESS_STREAM))?;
            Ok(c.particles() as i64 >= k)
        })
        .collect::<Result<_, TasepError>>()?;
    let hit = hits.iter().filter(|&&h| h).count() as f64 / replicas as f64;
    Ok(Witness {
        n,
        t,
        theta,
        mu,
        hit,
        witness: mu - hit,
        stderr: (hit * (1.0 - hit) / replicas as f64).sqrt(),
        replicas,
        flagged: params.alpha < 0.5 || params.beta < 0.5,
    })
}

/// Number of entries during `[0, t]` started from `eta0`.
pub fn entries_until(eta0: &Configuration, params: &Params, t: f64, seed: u64) -> Result<u64, MixingError> {
    eta0.check(params)?;
    let mut engine = Engine::single(params, seed);
    let mut bits = eta0.bits().to_vec();
    let mut count = 0;
    while let Some(ring) = engine.next_ring(t) {
        if let Some(kind) = crate::tasep::eta_move(ring.kind) {
            if kind.apply(&mut bits) && kind == EventKind::Entry {
                count += 1;
            }
        }
    }
    Ok(count)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurrentSummary {
    pub n: usize,
    pub t: f64,
    /// `(J_t - t / 4) / sqrt(n)` per replica, in replica order.
    pub scaled: Vec<f64>,
    pub median: f64,
    pub iqr: f64,
}

/// Scaled current at `t_N = c N^{3/2}` from the empty segment.
pub fn current_fluctuations(
    alpha: f64,
    beta: f64,
    c: f64,
    sizes: &[usize],
    replicas: usize,
    seed: u64,
) -> Result<Vec<CurrentSummary>, MixingError> {
    sizes
        .iter()
        .map(|&n| {
            let params = Params::new(n, alpha, beta)?;
            let t = c * (n as f64).powf(1.5);
            let zero = Configuration::zeros(n);
            let scaled: Vec<f64> = (0..replicas as u64)
                .into_par_iter()
                .map(|r| {
                    let j = entries_until(&zero, &params, t, derive_seed(seed ^ n as u64, r, CURRENT_STREAM))?;
                    Ok((j as f64 - t / 4.0) / (n as f64).sqrt())
                })
                .collect::<Result<_, MixingError>>()?;
            Ok(CurrentSummary {
                n,
                t,
                median: crate::stats::quantile(&scaled, 0.5)?,
                iqr: crate::stats::iqr(&scaled)?,
                scaled,
            })
        })
        .collect()
}

/// Least squares of `log t` on `log N`.
pub fn scaling_fit(points: &[(f64, f64)]) -> Result<LinearFit, MixingError> {
    if points.len() < 3 {
        return Err(StatsError::TooFew { need: 3, got: points.len() }.into());
    }
    let mut ns: Vec<f64> = points.iter().map(|p| p.0).collect();
    ns.sort_by(f64::total_cmp);
    ns.dedup();
    if ns.len() != points.len() || points.iter().any(|p| !(p.0 > 0.0 && p.1 > 0.0)) {
        return Err(StatsError::Degenerate.into());
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    Ok(linear_fit(&xs, &ys)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_site_generator() {
        let q = build_generator(&Params::triple_point(1)).unwrap();
        let d = q.to_dense();
        assert_eq!(d, DMatrix::from_row_slice(2, 2, &[-0.5, 0.5, 0.5, -0.5]));
    }

    #[test]
    fn rows_sum_to_zero() {
        for n in 1..=8 {
            let q = build_generator(&Params::new(n, 0.3, 0.8).unwrap()).unwrap();
            let d = q.to_dense();
            for k in 0..q.dim() {
                assert!(d.row(k).sum().abs() < 1e-12);
            }
        }
        assert_eq!(build_generator(&Params::triple_point(15)), Err(MixingError::CapExceeded(15)));
    }

    #[test]
    fn two_state_balance() {
        for (a, b) in [(0.5, 0.5), (0.2, 0.9), (1.5, 0.3)] {
            let q = build_generator(&Params::new(1, a, b).unwrap()).unwrap();
            let pi = stationary_distribution(&q).unwrap();
            assert!((pi[1] - a / (a + b)).abs() < 1e-14);
        }
    }

    #[test]
    fn null_space_oracle() {
        for (n, a, b) in [(2, 1.0, 1.0), (3, 0.3, 0.7), (4, 0.8, 0.25)] {
            let q = build_generator(&Params::new(n, a, b).unwrap()).unwrap();
            let pi = stationary_distribution(&q).unwrap();
            let svd = q.to_dense().transpose().svd(false, true);
            let vt = svd.v_t.unwrap();
            let i = (0..svd.singular_values.len())
                .min_by(|&x, &y| svd.singular_values[x].total_cmp(&svd.singular_values[y]))
                .unwrap();
            let v = vt.row(i);
            let s: f64 = v.iter().sum();
            for k in 0..q.dim() {
                assert!((v[k] / s - pi[k]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn reducible_chain_rejected() {
        let q = build_generator(&Params::new(3, 0.0, 0.5).unwrap()).unwrap();
        assert_eq!(stationary_distribution(&q), Err(MixingError::Singular));
    }

    #[test]
    fn iterative_matches_dense() {
        let q = build_generator(&Params::new(6, 0.7, 0.4).unwrap()).unwrap();
        let a = dense_stationary(&q).unwrap();
        let b = iterative_stationary(&q);
        assert!(tv_distance(&a, &b).unwrap() < 1e-10);
    }

    #[test]
    fn triple_point_uniform() {
        for n in 2..=6 {
            let q = build_generator(&Params::triple_point(n)).unwrap();
            let pi = stationary_distribution(&q).unwrap();
            let u = vec![1.0 / q.dim() as f64; q.dim()];
            assert!(tv_distance(&pi, &u).unwrap() <= 1e-10);
        }
    }

    #[test]
    fn uniformization_properties() {
        let p = Params::new(4, 0.6, 0.4).unwrap();
        let q = build_generator(&p).unwrap();
        let x = Configuration::alternating(4);
        let d0 = distribution_at(&q, &x, 0.0).unwrap();
        assert_eq!(d0[x.index()], 1.0);
        let a = distribution_at(&q, &x, 2.5).unwrap();
        let b = evolve(&q, &distribution_at(&q, &x, 1.0).unwrap(), 1.5).unwrap();
        assert!(tv_distance(&a, &b).unwrap() < 1e-9);
        assert!((a.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        let pi = stationary_distribution(&q).unwrap();
        assert!(tv_distance(&distribution_at(&q, &x, 1000.0).unwrap(), &pi).unwrap() < 1e-8);
        for t in [1.0, 10.0] {
            assert!(tv_distance(&evolve(&q, &pi, t).unwrap(), &pi).unwrap() < 1e-9);
        }
    }

    #[test]
    fn tv_examples() {
        let u = [0.25; 4];
        let d = [1.0, 0.0, 0.0, 0.0];
        let e = [0.0, 1.0, 0.0, 0.0];
        assert_eq!(tv_distance(&u, &u).unwrap(), 0.0);
        assert_eq!(tv_distance(&d, &e).unwrap(), 1.0);
        assert_eq!(tv_distance(&u, &d).unwrap(), 0.75);
        assert!(tv_distance(&u, &d[..3]).is_err());
    }

    #[test]
    fn mixing_monotone_in_eps() {
        for (n, a, b) in [(2, 0.5, 0.5), (3, 0.7, 0.9), (4, 0.5, 0.5)] {
            let p = Params::new(n, a, b).unwrap();
            let t4 = exact_mixing_time(&p, 0.25, 1e-6).unwrap();
            let t8 = exact_mixing_time(&p, 0.125, 1e-6).unwrap();
            assert!(t8.hi >= t4.lo);
            assert!(t4.lo <= t4.hi && t4.hi - t4.lo <= 1e-6);
        }
    }

    #[test]
    fn coupling_deterministic() {
        let p = Params::triple_point(6);
        let a = coupling_mixing_upper(&p, 0.25, 200, 9).unwrap();
        let b = coupling_mixing_upper(&p, 0.25, 200, 9).unwrap();
        assert_eq!(a, b);
        assert!(a.lo <= a.t && a.t <= a.hi);
        assert!(coupling_mixing_upper(&p, 0.25, 50, 9).is_err());
    }

    #[test]
    fn witness_at_time_zero() {
        let p = Params::triple_point(64);
        let (theta, mu) = theta_for_band(64, 0.85, 0.95).unwrap();
        let w = lower_bound_witness(&p, 0.0, theta, 100, 1).unwrap();
        assert_eq!(w.hit, 0.0);
        assert_eq!(w.witness, mu);
        assert!((0.85..=0.95).contains(&mu));
    }

    #[test]
    fn binomial_tail_sums() {
        assert!((binomial_half_tail(10, 0) - 1.0).abs() < 1e-15);
        assert!((binomial_half_tail(10, 10) - 1.0 / 1024.0).abs() < 1e-15);
        assert!((binomial_half_tail(3, 2) - 0.5).abs() < 1e-14);
    }

    #[test]
    fn current_without_entries() {
        let s = current_fluctuations(0.0, 0.5, 1.0, &[16], 100, 3).unwrap();
        let expect = -(16f64.powf(1.5)) / 4.0 / 4.0;
        assert!(s[0].scaled.iter().all(|&v| (v - expect).abs() < 1e-12));
    }

    #[test]
    fn fit_exact_powers() {
        let pts: Vec<(f64, f64)> = [8.0, 16.0, 32.0].iter().map(|&n: &f64| (n, n.powf(1.5))).collect();
        assert!((scaling_fit(&pts).unwrap().slope - 1.5).abs() < 1e-12);
        let pts: Vec<(f64, f64)> = [8.0, 16.0, 32.0].iter().map(|&n| (n, n)).collect();
        assert!((scaling_fit(&pts).unwrap().slope - 1.0).abs() < 1e-12);
        assert!(scaling_fit(&[(8.0, 1.0), (8.0, 2.0), (16.0, 3.0)]).is_err());
    }
}
