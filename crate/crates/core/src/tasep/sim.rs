use super::clock::{ClockBank, ClockKind, Ring};
use super::{Configuration, Event, EventKind, Params, TasepError, Trajectory};

/// Clock scheduler for a single process or a canonically coupled pair.
#[derive(Clone, Debug)]
pub struct Engine {
    bank: ClockBank,
}

impl Engine {
    pub fn single(params: &Params, seed: u64) -> Self {
        Self::build(params.n, params.alpha, 0.0, params.beta, 0.0, seed)
    }

    /// Clocks for `(eta, zeta)` with `p_eta.alpha >= p_zeta.alpha` and
    /// `p_eta.beta <= p_zeta.beta`.
    pub fn coupled(p_eta: &Params, p_zeta: &Params, seed: u64) -> Result<Self, TasepError> {
        if p_eta.n != p_zeta.n {
            return Err(TasepError::DimensionMismatch { expected: p_eta.n, got: p_zeta.n });
        }
        if p_eta.alpha < p_zeta.alpha || p_eta.beta > p_zeta.beta {
            return Err(TasepError::CouplingOrder);
        }
        Ok(Self::build(
            p_eta.n,
            p_zeta.alpha,
            p_eta.alpha - p_zeta.alpha,
            p_eta.beta,
            p_zeta.beta - p_eta.beta,
            seed,
        ))
    }

    fn build(n: usize, entry: f64, entry_extra: f64, exit: f64, exit_extra: f64, seed: u64) -> Self {
        let mut clocks = vec![(ClockKind::EntryShared, entry), (ClockKind::EntryExtra, entry_extra)];
        clocks.extend((1..n).map(|x| (ClockKind::Bulk(x), 1.0)));
        clocks.push((ClockKind::ExitShared, exit));
        clocks.push((ClockKind::ExitExtra, exit_extra));
        Engine { bank: ClockBank::new(seed, n, &clocks) }
    }

    pub fn next_ring(&mut self, t_end: f64) -> Option<Ring> {
        self.bank.pop_until(t_end)
    }
}

/// Move attempted by a ring in the first copy of a coupled pair.
pub(crate) fn eta_move(kind: ClockKind) -> Option<EventKind> {
    match kind {
        ClockKind::Bulk(x) => Some(EventKind::Swap(x)),
        ClockKind::EntryShared | ClockKind::EntryExtra => Some(EventKind::Entry),
        ClockKind::ExitShared => Some(EventKind::Exit),
        ClockKind::ExitExtra => None,
    }
}

/// Move attempted by a ring in the second copy of a coupled pair.
pub(crate) fn zeta_move(kind: ClockKind) -> Option<EventKind> {
    match kind {
        ClockKind::Bulk(x) => Some(EventKind::Swap(x)),
        ClockKind::EntryShared => Some(EventKind::Entry),
        ClockKind::ExitShared | ClockKind::ExitExtra => Some(EventKind::Exit),
        ClockKind::EntryExtra => None,
    }
}

fn check_time(t: f64) -> Result<(), TasepError> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(TasepError::BadTime(t))
    }
}

pub fn simulate(
    config0: &Configuration,
    params: &Params,
    t_end: f64,
    seed: u64,
) -> Result<Trajectory, TasepError> {
    config0.check(params)?;
    check_time(t_end)?;
    let mut engine = Engine::single(params, seed);
    let mut state = config0.clone();
    let mut events = Vec::new();
    while let Some(ring) = engine.next_ring(t_end) {
        if let Some(kind) = eta_move(ring.kind) {
            if kind.apply(state.bits_mut()) {
                events.push(Event { time: ring.time, kind });
            }
        }
    }
    Ok(Trajectory { params: *params, seed, initial: config0.clone(), events, horizon: t_end })
}

/// State at `t_end` without recording events.
pub fn simulate_final(
    config0: &Configuration,
    params: &Params,
    t_end: f64,
    seed: u64,
) -> Result<Configuration, TasepError> {
    config0.check(params)?;
    check_time(t_end)?;
    let mut engine = Engine::single(params, seed);
    let mut state = config0.clone();
    while let Some(ring) = engine.next_ring(t_end) {
        if let Some(kind) = eta_move(ring.kind) {
            kind.apply(state.bits_mut());
        }
    }
    Ok(state)
}

pub fn canonical_couple(
    eta0: &Configuration,
    zeta0: &Configuration,
    p_eta: &Params,
    p_zeta: &Params,
    t_end: f64,
    seed: u64,
) -> Result<(Trajectory, Trajectory), TasepError> {
    eta0.check(p_eta)?;
    zeta0.check(p_zeta)?;
    check_time(t_end)?;
    let mut engine = Engine::coupled(p_eta, p_zeta, seed)?;
    let (mut eta, mut zeta) = (eta0.clone(), zeta0.clone());
    let (mut ev_eta, mut ev_zeta) = (Vec::new(), Vec::new());
    while let Some(ring) = engine.next_ring(t_end) {
        if let Some(kind) = eta_move(ring.kind) {
            if kind.apply(eta.bits_mut()) {
                ev_eta.push(Event { time: ring.time, kind });
            }
        }
        if let Some(kind) = zeta_move(ring.kind) {
            if kind.apply(zeta.bits_mut()) {
                ev_zeta.push(Event { time: ring.time, kind });
            }
        }
    }
    Ok((
        Trajectory { params: *p_eta, seed, initial: eta0.clone(), events: ev_eta, horizon: t_end },
        Trajectory { params: *p_zeta, seed, initial: zeta0.clone(), events: ev_zeta, horizon: t_end },
    ))
}

/// Resumable coupled run that tracks the number of disagreeing sites.
#[derive(Clone, Debug)]
pub struct CoupledRun {
    engine: Engine,
    eta: Vec<u8>,
    zeta: Vec<u8>,
    diff: usize,
    time: f64,
    coalesced: Option<f64>,
}

impl CoupledRun {
    pub fn new(
        eta0: &Configuration,
        zeta0: &Configuration,
        p_eta: &Params,
        p_zeta: &Params,
        seed: u64,
    ) -> Result<Self, TasepError> {
        eta0.check(p_eta)?;
        zeta0.check(p_zeta)?;
        let engine = Engine::coupled(p_eta, p_zeta, seed)?;
        let diff = eta0.bits().iter().zip(zeta0.bits()).filter(|(a, b)| a != b).count();
        Ok(CoupledRun {
            engine,
            eta: eta0.bits().to_vec(),
            zeta: zeta0.bits().to_vec(),
            diff,
            time: 0.0,
            coalesced: (diff == 0).then_some(0.0),
        })
    }

    /// Time at which the copies first agree, if that happens by `t_end`.
    pub fn run_until(&mut self, t_end: f64) -> Option<f64> {
        if self.coalesced.is_some() {
            return self.coalesced;
        }
        let n = self.eta.len();
        while let Some(ring) = self.engine.next_ring(t_end) {
            let (lo, hi) = match ring.kind {
                ClockKind::Bulk(x) => (x - 1, x),
                ClockKind::EntryShared | ClockKind::EntryExtra => (0, 0),
                ClockKind::ExitShared | ClockKind::ExitExtra => (n - 1, n - 1),
            };
            let before = (self.eta[lo] != self.zeta[lo]) as usize + (self.eta[hi] != self.zeta[hi]) as usize;
            if let Some(kind) = eta_move(ring.kind) {
                kind.apply(&mut self.eta);
            }
            if let Some(kind) = zeta_move(ring.kind) {
                kind.apply(&mut self.zeta);
            }
            let after = (self.eta[lo] != self.zeta[lo]) as usize + (self.eta[hi] != self.zeta[hi]) as usize;
            if lo == hi {
                self.diff = self.diff + after / 2 - before / 2;
            } else {
                self.diff = self.diff + after - before;
            }
            if self.diff == 0 {
                self.coalesced = Some(ring.time);
                self.time = ring.time;
                return self.coalesced;
            }
        }
        self.time = t_end;
        None
    }

    pub fn disagreements(&self) -> usize {
        self.diff
    }

    pub fn time(&self) -> f64 {
        self.time
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_absorbing_without_entries() {
        let p = Params::new(4, 0.0, 0.7).unwrap();
        let t = simulate(&Configuration::zeros(4), &p, 100.0, 3).unwrap();
        assert!(t.events.is_empty());
    }

    #[test]
    fn single_entry_only() {
        let p = Params::new(1, 1.0, 0.0).unwrap();
        let t = simulate(&Configuration::zeros(1), &p, 1e6, 5).unwrap();
        assert_eq!(t.events.len(), 1);
        assert_eq!(t.events[0].kind, EventKind::Entry);
    }

    #[test]
    fn deterministic() {
        let p = Params::triple_point(4);
        let a = simulate(&Configuration::zeros(4), &p, 10.0, 11).unwrap();
        let b = simulate(&Configuration::zeros(4), &p, 10.0, 11).unwrap();
        assert_eq!(a, b);
        assert!(a.validate().is_ok());
    }

    #[test]
    fn coupling_order_enforced() {
        let a = Params::new(3, 0.5, 1.0).unwrap();
        let b = Params::new(3, 1.0, 0.5).unwrap();
        assert_eq!(
            canonical_couple(&Configuration::zeros(3), &Configuration::zeros(3), &a, &b, 1.0, 0)
                .unwrap_err(),
            TasepError::CouplingOrder
        );
    }

    #[test]
    fn identical_coupling_coincides() {
        let p = Params::new(5, 0.7, 0.4).unwrap();
        let c = Configuration::random(5, 9);
        let (a, b) = canonical_couple(&c, &c, &p, &p, 20.0, 4).unwrap();
        assert_eq!(a.events, b.events);
        assert_eq!(a.events, simulate(&c, &p, 20.0, 4).unwrap().events);
    }

    #[test]
    fn disagreement_count_matches_replay() {
        let p = Params::triple_point(6);
        let (one, zero) = (Configuration::ones(6), Configuration::zeros(6));
        for seed in 0..20 {
            let mut run = CoupledRun::new(&one, &zero, &p, &p, seed).unwrap();
            let tau = run.run_until(1e4).expect("coalesces");
            let (a, b) = canonical_couple(&one, &zero, &p, &p, tau, seed).unwrap();
            assert_eq!(a.state_at(tau), b.state_at(tau));
            let (a, b) = canonical_couple(&one, &zero, &p, &p, tau * (1.0 - 1e-12), seed).unwrap();
            assert_ne!(a.state_at(tau), b.state_at(tau));
        }
    }
}
