//! Line-oriented trajectory format.
//!
//! ```text
//! # strip-cgm trajectory v1
//! n 4
//! alpha 0.5
//! beta 0.5
//! seed 42
//! horizon 10
//! initial 0101
//! <time> <entry|swap|exit> <site>
//! ```
//!
//! Times use the shortest representation that round-trips to the same `f64`.

use std::fmt::Write as _;

use super::{Configuration, Event, EventKind, Params, Trajectory};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum TrajectoryParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing header field {0}")]
    MissingField(&'static str),
    #[error("event {0} is not a legal move")]
    IllegalEvent(usize),
}

impl Trajectory {
    pub fn to_text(&self) -> String {
        let mut s = String::from("# strip-cgm trajectory v1\n");
        let p = &self.params;
        let _ = writeln!(s, "n {}\nalpha {}\nbeta {}\nseed {}", p.n, p.alpha, p.beta, self.seed);
        let _ = writeln!(s, "horizon {}\ninitial {}", self.horizon, self.initial);
        for e in &self.events {
            let kind = match e.kind {
                EventKind::Entry => "entry",
                EventKind::Swap(_) => "swap",
                EventKind::Exit => "exit",
            };
            let _ = writeln!(s, "{} {} {}", e.time, kind, e.kind.site(p.n));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self, TrajectoryParseError> {
        let mut n = None;
        let (mut alpha, mut beta, mut seed, mut horizon, mut initial) = (None, None, None, None, None);
        let mut events = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let err = |msg: &str| TrajectoryParseError::Syntax { line: i + 1, msg: msg.to_string() };
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            match parts.as_slice() {
                ["n", v] => n = Some(v.parse::<usize>().map_err(|_| err("bad n"))?),
                ["alpha", v] => alpha = Some(v.parse::<f64>().map_err(|_| err("bad alpha"))?),
                ["beta", v] => beta = Some(v.parse::<f64>().map_err(|_| err("bad beta"))?),
                ["seed", v] => seed = Some(v.parse::<u64>().map_err(|_| err("bad seed"))?),
                ["horizon", v] => horizon = Some(v.parse::<f64>().map_err(|_| err("bad horizon"))?),
                ["initial", v] => {
                    initial = Some(v.parse::<Configuration>().map_err(|_| err("bad initial"))?)
                }
                [t, kind, site] => {
                    let time = t.parse::<f64>().map_err(|_| err("bad time"))?;
                    let site = site.parse::<usize>().map_err(|_| err("bad site"))?;
                    let kind = match *kind {
                        "entry" => EventKind::Entry,
                        "exit" => EventKind::Exit,
                        "swap" => EventKind::Swap(site),
                        _ => return Err(err("unknown event kind")),
                    };
                    events.push(Event { time, kind });
                }
                _ => return Err(err("unrecognised line")),
            }
        }
        let n = n.ok_or(TrajectoryParseError::MissingField("n"))?;
        let params = Params::new(
            n,
            alpha.ok_or(TrajectoryParseError::MissingField("alpha"))?,
            beta.ok_or(TrajectoryParseError::MissingField("beta"))?,
        )
        .map_err(|e| TrajectoryParseError::Syntax { line: 0, msg: e.to_string() })?;
        let initial = initial.ok_or(TrajectoryParseError::MissingField("initial"))?;
        if initial.len() != n {
            return Err(TrajectoryParseError::Syntax { line: 0, msg: "initial length differs from n".into() });
        }
        let traj = Trajectory {
            params,
            seed: seed.ok_or(TrajectoryParseError::MissingField("seed"))?,
            initial,
            events,
            horizon: horizon.ok_or(TrajectoryParseError::MissingField("horizon"))?,
        };
        traj.validate().map_err(TrajectoryParseError::IllegalEvent)?;
        Ok(traj)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tasep::simulate;

    #[test]
    fn roundtrip() {
        let p = Params::new(5, 0.3, 1.7).unwrap();
        let t = simulate(&Configuration::random(5, 2), &p, 25.0, 77).unwrap();
        assert_eq!(Trajectory::from_text(&t.to_text()).unwrap(), t);
    }

    #[test]
    fn golden_text() {
        let p = Params::triple_point(2);
        let t = Trajectory {
            params: p,
            seed: 9,
            initial: "10".parse().unwrap(),
            events: vec![
                Event { time: 0.25, kind: EventKind::Swap(1) },
                Event { time: 1.5, kind: EventKind::Exit },
            ],
            horizon: 2.0,
        };
        let text = "# strip-cgm trajectory v1\nn 2\nalpha 0.5\nbeta 0.5\nseed 9\nhorizon 2\ninitial 10\n0.25 swap 1\n1.5 exit 2\n";
        assert_eq!(t.to_text(), text);
    }

    #[test]
    fn rejects_illegal_move() {
        let text = "n 2\nalpha 0.5\nbeta 0.5\nseed 1\nhorizon 3\ninitial 01\n1 swap 1\n";
        assert_eq!(Trajectory::from_text(text), Err(TrajectoryParseError::IllegalEvent(0)));
    }
}
