//! Open-boundary TASEP on `{1, ..., n}`.
//!
//! Sites are 1-based in every public API: `Swap(x)` moves a particle from `x`
//! to `x + 1`, entries happen at site 1 and exits at site `n`.

mod clock;
mod disagree;
mod io;
mod labels;
mod sim;

pub use clock::{ClockKind, Ring};
pub use disagree::{disagreement, second_class_exit_time, DisagreementConfig, XiPath};
pub use io::TrajectoryParseError;
pub use labels::{label_particles, LabelHistory, LabelMap, LabelPos, LabelTrack};
pub use sim::{canonical_couple, simulate, simulate_final, CoupledRun, Engine};
pub(crate) use sim::eta_move;

use std::fmt;

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum TasepError {
    #[error("segment length must be at least 1")]
    EmptySegment,
    #[error("boundary rates must be finite and nonnegative (alpha={alpha}, beta={beta})")]
    BadRate { alpha: f64, beta: f64 },
    #[error("configuration has length {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("configuration entries must be 0 or 1")]
    BadEntry,
    #[error("canonical coupling needs alpha >= alpha' and beta <= beta'")]
    CouplingOrder,
    #[error("time {0} is negative or not finite")]
    BadTime(f64),
    #[error("trajectories do not share a horizon")]
    HorizonMismatch,
    #[error("trajectories violate dominance at time {0}")]
    NotDominated(f64),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Params {
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
}

impl Params {
    pub fn new(n: usize, alpha: f64, beta: f64) -> Result<Self, TasepError> {
        if n == 0 {
            return Err(TasepError::EmptySegment);
        }
        if !(alpha.is_finite() && beta.is_finite() && alpha >= 0.0 && beta >= 0.0) {
            return Err(TasepError::BadRate { alpha, beta });
        }
        Ok(Params { n, alpha, beta })
    }

    /// `alpha = beta = 1/2`.
    pub fn triple_point(n: usize) -> Self {
        Params { n, alpha: 0.5, beta: 0.5 }
    }
}

/// Occupation vector; `bits()[x - 1]` is the occupation of site `x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Configuration {
    bits: Vec<u8>,
}

impl Configuration {
    pub fn new(bits: Vec<u8>) -> Result<Self, TasepError> {
        if bits.is_empty() {
            return Err(TasepError::EmptySegment);
        }
        if bits.iter().any(|&b| b > 1) {
            return Err(TasepError::BadEntry);
        }
        Ok(Configuration { bits })
    }

    pub fn zeros(n: usize) -> Self {
        Configuration { bits: vec![0; n] }
    }

    pub fn ones(n: usize) -> Self {
        Configuration { bits: vec![1; n] }
    }

    /// `1010...` starting with an occupied site 1.
    pub fn alternating(n: usize) -> Self {
        Configuration { bits: (0..n).map(|i| ((i + 1) % 2) as u8).collect() }
    }

    /// Bit `x - 1` of `index` is the occupation of site `x`.
    pub fn from_index(n: usize, index: usize) -> Self {
        Configuration { bits: (0..n).map(|i| ((index >> i) & 1) as u8).collect() }
    }

    pub fn index(&self) -> usize {
        self.bits.iter().enumerate().map(|(i, &b)| (b as usize) << i).sum()
    }

    pub fn random(n: usize, seed: u64) -> Self {
        let mut s = crate::rng::Stream::new(seed, crate::rng::CONFIG_STREAM);
        Configuration { bits: (0..n).map(|_| s.next_bit()).collect() }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn get(&self, site: usize) -> u8 {
        self.bits[site - 1]
    }

    pub fn particles(&self) -> usize {
        self.bits.iter().map(|&b| b as usize).sum()
    }

    pub fn dominates(&self, other: &Configuration) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a >= b)
    }

    pub(crate) fn bits_mut(&mut self) -> &mut [u8] {
        &mut self.bits
    }

    pub fn check(&self, params: &Params) -> Result<(), TasepError> {
        if self.bits.len() != params.n {
            return Err(TasepError::DimensionMismatch { expected: params.n, got: self.bits.len() });
        }
        Ok(())
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Configuration {
    type Err = TasepError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bits = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(TasepError::BadEntry),
            })
            .collect::<Result<Vec<u8>, _>>()?;
        Configuration::new(bits)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EventKind {
    Swap(usize),
    Entry,
    Exit,
}

impl EventKind {
    /// Site printed in the trajectory format.
    pub fn site(&self, n: usize) -> usize {
        match *self {
            EventKind::Swap(x) => x,
            EventKind::Entry => 1,
            EventKind::Exit => n,
        }
    }

    /// Applies the move if it is allowed; returns whether anything changed.
    pub fn apply(&self, bits: &mut [u8]) -> bool {
        let n = bits.len();
        match *self {
            EventKind::Swap(x) => {
                if x >= 1 && x < n && bits[x - 1] == 1 && bits[x] == 0 {
                    bits[x - 1] = 0;
                    bits[x] = 1;
                    true
                } else {
                    false
                }
            }
            EventKind::Entry => {
                if bits[0] == 0 {
                    bits[0] = 1;
                    true
                } else {
                    false
                }
            }
            EventKind::Exit => {
                if bits[n - 1] == 1 {
                    bits[n - 1] = 0;
                    true
                } else {
                    false
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Event {
    pub time: f64,
    pub kind: EventKind,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub params: Params,
    pub seed: u64,
    pub initial: Configuration,
    pub events: Vec<Event>,
    pub horizon: f64,
}

impl Trajectory {
    /// Configuration after all events with time `<= t`.
    pub fn state_at(&self, t: f64) -> Configuration {
        let mut c = self.initial.clone();
        for e in self.events.iter().take_while(|e| e.time <= t) {
            e.kind.apply(c.bits_mut());
        }
        c
    }

    /// Replays every event; `Err(i)` names the first event that is not a legal move.
    pub fn validate(&self) -> Result<(), usize> {
        let mut c = self.initial.clone();
        let mut last = f64::NEG_INFINITY;
        for (i, e) in self.events.iter().enumerate() {
            if !(e.time > last) || e.time > self.horizon || !e.kind.apply(c.bits_mut()) {
                return Err(i);
            }
            last = e.time;
        }
        Ok(())
    }
}

/// Transitions of the generator out of `config`, in site order.
pub fn enumerate_transitions(
    config: &Configuration,
    params: &Params,
) -> Result<Vec<(Configuration, f64)>, TasepError> {
    config.check(params)?;
    let n = params.n;
    let mut out = Vec::new();
    let mut push = |kind: EventKind, rate: f64| {
        if rate > 0.0 {
            let mut c = config.clone();
            if kind.apply(c.bits_mut()) {
                out.push((c, rate));
            }
        }
    };
    push(EventKind::Entry, params.alpha);
    for x in 1..n {
        push(EventKind::Swap(x), 1.0);
    }
    push(EventKind::Exit, params.beta);
    Ok(out)
}

/// Number of entries in `[0, t]`.
pub fn current(traj: &Trajectory, t: f64) -> u64 {
    traj.events
        .iter()
        .take_while(|e| e.time <= t)
        .filter(|e| e.kind == EventKind::Entry)
        .count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_site_only_entry() {
        let p = Params::new(1, 0.5, 0.5).unwrap();
        let t = enumerate_transitions(&"0".parse().unwrap(), &p).unwrap();
        assert_eq!(t, vec![("1".parse().unwrap(), 0.5)]);
    }

    #[test]
    fn hand_enumeration_101() {
        let p = Params::triple_point(3);
        let t = enumerate_transitions(&"101".parse().unwrap(), &p).unwrap();
        assert_eq!(t, vec![("011".parse().unwrap(), 1.0), ("100".parse().unwrap(), 0.5)]);
    }

    #[test]
    fn closed_boundaries() {
        let p = Params::new(2, 0.0, 0.0).unwrap();
        let t = enumerate_transitions(&"10".parse().unwrap(), &p).unwrap();
        assert_eq!(t, vec![("01".parse().unwrap(), 1.0)]);
    }

    #[test]
    fn dimension_mismatch() {
        let p = Params::triple_point(3);
        assert!(matches!(
            enumerate_transitions(&Configuration::zeros(2), &p),
            Err(TasepError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn index_roundtrip() {
        for i in 0..32 {
            assert_eq!(Configuration::from_index(5, i).index(), i);
        }
        assert_eq!("100".parse::<Configuration>().unwrap().index(), 1);
    }

    #[test]
    fn current_counts_entries() {
        let p = Params::triple_point(3);
        let ev = |time, kind| Event { time, kind };
        let traj = Trajectory {
            params: p,
            seed: 0,
            initial: Configuration::zeros(3),
            events: vec![
                ev(1.0, EventKind::Entry),
                ev(1.5, EventKind::Swap(1)),
                ev(2.0, EventKind::Entry),
                ev(3.0, EventKind::Swap(2)),
                ev(4.0, EventKind::Swap(1)),
                ev(5.0, EventKind::Entry),
            ],
            horizon: 6.0,
        };
        assert_eq!(current(&traj, 3.0), 2);
        assert!(traj.validate().is_ok());
    }
}
