use std::collections::HashMap;

use super::{EnvironmentSpec, GrowthInterface, LppError, PassageField, SampledEnv, Site, WeightField, WeightSource};
use crate::rng::{exp_from_unit, keyed_unit, RESIDUAL_STREAM};
use crate::tasep::{label_particles, Configuration, Event, EventKind, LabelHistory, Params, Trajectory};

/// Labelled particle system. Position 0 is the reservoir on the left.
#[derive(Clone, Debug)]
struct LabelSystem {
    n: usize,
    occ: Vec<Option<i64>>,
    next_entry: i64,
    /// enabled moves `(label, from)` and the time they became enabled
    enabled: Vec<((i64, usize), f64)>,
}

impl LabelSystem {
    fn new(eta0: &Configuration) -> Self {
        let n = eta0.len();
        let mut occ = vec![None; n];
        let mut next = 0i64;
        for x in 1..=n {
            if eta0.get(x) == 1 {
                occ[x - 1] = Some(next);
                next -= 1;
            }
        }
        let mut s = LabelSystem { n, occ, next_entry: 1, enabled: Vec::new() };
        s.refresh(0.0);
        s
    }

    fn moves(&self) -> Vec<(i64, usize)> {
        let mut out = Vec::new();
        if self.occ[0].is_none() {
            out.push((self.next_entry, 0));
        }
        for x in 1..self.n {
            if let (Some(u), None) = (self.occ[x - 1], self.occ[x]) {
                out.push((u, x));
            }
        }
        if let Some(u) = self.occ[self.n - 1] {
            out.push((u, self.n));
        }
        out
    }

    fn refresh(&mut self, now: f64) {
        let old = std::mem::take(&mut self.enabled);
        self.enabled = self
            .moves()
            .into_iter()
            .map(|m| (m, old.iter().find(|(k, _)| *k == m).map_or(now, |&(_, t)| t)))
            .collect();
    }

    fn enabled_since(&self, m: (i64, usize)) -> Option<f64> {
        self.enabled.iter().find(|(k, _)| *k == m).map(|&(_, t)| t)
    }

    fn apply(&mut self, (u, from): (i64, usize), now: f64) -> EventKind {
        let kind = if from == 0 {
            self.occ[0] = Some(u);
            self.next_entry += 1;
            EventKind::Entry
        } else if from == self.n {
            self.occ[self.n - 1] = None;
            EventKind::Exit
        } else {
            self.occ[from - 1] = None;
            self.occ[from] = Some(u);
            EventKind::Swap(from)
        };
        self.refresh(now);
        kind
    }

    fn move_of(&self, kind: EventKind) -> Option<(i64, usize)> {
        match kind {
            EventKind::Entry => self.occ[0].is_none().then_some((self.next_entry, 0)),
            EventKind::Swap(x) => self.occ[x - 1].filter(|_| self.occ[x].is_none()).map(|u| (u, x)),
            EventKind::Exit => self.occ[self.n - 1].map(|u| (u, self.n)),
        }
    }
}

/// Cell carrying the jump of label `u` from position `from` to `from + 1`.
#[inline]
pub fn jump_cell(u: i64, from: usize) -> Site {
    (u + from as i64, u)
}

/// TASEP driven by LPP weights: the jump of label `u` from position `k`
/// happens `omega(u + k, u)` after it became possible. Event times equal
/// the passage times `G(gamma_0, (u + k, u))` exactly.
pub fn tasep_from_weights(
    field: &WeightField,
    eta0: &Configuration,
    params: &Params,
    horizon: f64,
) -> Result<(Trajectory, LabelHistory), LppError> {
    run_from(|x| field.get(x), eta0, params, horizon, field.seed().unwrap_or(0))
}

/// As [`tasep_from_weights`] with unbounded weights.
pub fn tasep_from_source<S: WeightSource + ?Sized>(
    source: &S,
    eta0: &Configuration,
    params: &Params,
    horizon: f64,
    seed: u64,
) -> Result<(Trajectory, LabelHistory), LppError> {
    run_from(|x| Some(source.weight(x)), eta0, params, horizon, seed)
}

fn run_from(
    weight: impl Fn(Site) -> Option<f64>,
    eta0: &Configuration,
    params: &Params,
    horizon: f64,
    seed: u64,
) -> Result<(Trajectory, LabelHistory), LppError> {
    if eta0.len() != params.n {
        return Err(LppError::BadSpec);
    }
    let mut sys = LabelSystem::new(eta0);
    let mut events = Vec::new();
    loop {
        let mut best: Option<(f64, (i64, usize))> = None;
        for &(m, since) in &sys.enabled {
            let w = weight(jump_cell(m.0, m.1)).ok_or(LppError::RegionTooSmall)?;
            let t = since + w;
            if best.is_none_or(|(bt, _)| t < bt) {
                best = Some((t, m));
            }
        }
        let Some((t, m)) = best else { break };
        if t > horizon {
            break;
        }
        let kind = sys.apply(m, t);
        events.push(Event { time: t, kind });
    }
    let traj = Trajectory { params: *params, seed, initial: eta0.clone(), events, horizon };
    let labels = label_particles(&traj);
    Ok((traj, labels))
}

/// Weights read back from a trajectory: `omega = fire - enable` for every
/// jump that happened. A jump enabled but not fired by the horizon gets the
/// residual `horizon - enable` plus a fresh exponential; all other sites get
/// fresh samples.
#[derive(Clone, Debug)]
pub struct TrajectoryWeights {
    pub spec: EnvironmentSpec,
    pub seed: u64,
    observed: HashMap<Site, f64>,
}

impl TrajectoryWeights {
    /// Sites whose weight comes from the trajectory.
    pub fn observed(&self) -> &HashMap<Site, f64> {
        &self.observed
    }
}

impl WeightSource for TrajectoryWeights {
    fn weight(&self, x: Site) -> f64 {
        match self.observed.get(&x) {
            Some(&w) => w,
            None => SampledEnv::new(self.spec, self.seed).weight(x),
        }
    }
}

pub fn weights_from_trajectory(traj: &Trajectory, seed: u64) -> Result<TrajectoryWeights, LppError> {
    let p = traj.params;
    let spec = EnvironmentSpec::strip(p.alpha, p.beta, p.n)?;
    let mut sys = LabelSystem::new(&traj.initial);
    let mut observed = HashMap::new();
    for e in &traj.events {
        let m = sys.move_of(e.kind).ok_or(LppError::Mismatch)?;
        let since = sys.enabled_since(m).ok_or(LppError::Mismatch)?;
        observed.insert(jump_cell(m.0, m.1), e.time - since);
        sys.apply(m, e.time);
    }
    for &((u, from), since) in &sys.enabled {
        let x = jump_cell(u, from);
        let u01 = keyed_unit(seed, x.0 as u64, x.1 as u64, RESIDUAL_STREAM);
        observed.insert(x, (traj.horizon - since) + exp_from_unit(spec.rate(x), u01));
    }
    Ok(TrajectoryWeights { spec, seed, observed })
}

/// Checks `{l_t(u) > k} = {G(gamma_0, (u + k, u)) <= t}` on every cell of the
/// passage field: each jump time equals its passage time and every cell with
/// `G <= horizon` has a jump. Returns the number of cells compared.
pub fn check_label_identity(labels: &LabelHistory, pf: &PassageField, horizon: f64) -> Result<usize, LppError> {
    let gamma: &GrowthInterface = pf.source().gamma().ok_or(LppError::NotInterfaceSource)?;
    let mut checked = 0usize;
    for (&u, tr) in &labels.tracks {
        for (k, &t) in tr.jumps.iter().enumerate() {
            if pf.get(jump_cell(u, tr.start + k)) != Some(t) {
                return Err(LppError::Mismatch);
            }
            checked += 1;
        }
    }
    for x in pf.region().iter() {
        if gamma.position(x).is_some() {
            continue;
        }
        if let Some(g) = pf.get(x) {
            let (u, k) = (x.1, (x.0 - x.1) as usize);
            if g <= horizon && labels.passage(u, k) != Some(g) {
                return Err(LppError::Mismatch);
            }
        }
    }
    Ok(checked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lpp::{passage_times, Region, Source};

    fn setup(eta: &str, seed: u64, horizon: f64) -> (WeightField, Configuration, Params, f64) {
        let eta0: Configuration = eta.parse().unwrap();
        let n = eta0.len();
        let params = Params::new(n, 0.7, 0.6).unwrap();
        let spec = EnvironmentSpec::strip(0.7, 0.6, n).unwrap();
        let lo = -(eta0.particles() as i64);
        let region = Region::support_rows(&spec, lo, 80).unwrap();
        (WeightField::sample(spec, region, seed), eta0, params, horizon)
    }

    #[test]
    fn jump_times_are_passage_times() {
        for (eta, seed) in [("000000", 1), ("101101", 2), ("111111", 3), ("010", 4)] {
            let (f, eta0, params, h) = setup(eta, seed, 30.0);
            let (traj, labels) = tasep_from_weights(&f, &eta0, &params, h).unwrap();
            assert!(traj.validate().is_ok());
            let pf = passage_times(&f, Source::interface(GrowthInterface::from_config(&eta0))).unwrap();
            assert!(check_label_identity(&labels, &pf, h).unwrap() > 10);
        }
    }

    #[test]
    fn weights_round_trip() {
        let (f, eta0, params, h) = setup("100110", 9, 25.0);
        let (traj, _) = tasep_from_weights(&f, &eta0, &params, h).unwrap();
        let w = weights_from_trajectory(&traj, 5).unwrap();
        let exact = w.observed().iter().filter(|(x, &v)| (v - f.get(**x).unwrap()).abs() < 1e-9).count();
        assert!(exact >= traj.events.len());
        let (again, _) = tasep_from_source(&w, &eta0, &params, h, 0).unwrap();
        assert_eq!(again.events.len(), traj.events.len());
        for (a, b) in again.events.iter().zip(&traj.events) {
            assert_eq!(a.kind, b.kind);
            assert!((a.time - b.time).abs() < 1e-9);
        }
    }

    #[test]
    fn region_too_small_is_reported() {
        let spec = EnvironmentSpec::strip(0.5, 0.5, 3).unwrap();
        let f = WeightField::sample(spec, Region::support_rows(&spec, 0, 2).unwrap(), 1);
        let r = tasep_from_weights(&f, &Configuration::zeros(3), &Params::triple_point(3), 1e6);
        assert_eq!(r.unwrap_err(), LppError::RegionTooSmall);
    }
}
