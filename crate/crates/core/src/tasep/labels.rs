use std::collections::BTreeMap;

use super::{EventKind, Trajectory};

/// Position of a labelled particle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LabelPos {
    /// Not yet in the segment (position minus infinity).
    NotEntered,
    At(usize),
    /// Left through site `n` (position plus infinity).
    Exited,
}

pub type LabelMap = BTreeMap<i64, LabelPos>;

/// Jump record of one label: `jumps[k]` is the time it moved from
/// `start + k` to `start + k + 1`, where position 0 is outside on the left
/// and position `n + 1` is outside on the right.
#[derive(Clone, Debug, PartialEq)]
pub struct LabelTrack {
    pub start: usize,
    pub jumps: Vec<f64>,
}

/// Labels of a trajectory.
///
/// Particles present at time 0 get labels `0, -1, -2, ...` from left to
/// right; entering particles get `1, 2, 3, ...` in order of entry, so
/// positions decrease strictly in the label at all times.
#[derive(Clone, Debug, PartialEq)]
pub struct LabelHistory {
    pub n: usize,
    pub tracks: BTreeMap<i64, LabelTrack>,
}

impl LabelHistory {
    /// Time at which label `u` moved past position `pos` (from `pos` to
    /// `pos + 1`). `Some(0.0)` for jumps that predate time 0, `None` if the
    /// jump did not happen by the horizon or the label never entered.
    pub fn passage(&self, u: i64, pos: usize) -> Option<f64> {
        let tr = self.tracks.get(&u)?;
        if pos < tr.start {
            return Some(0.0);
        }
        tr.jumps.get(pos - tr.start).copied()
    }

    pub fn position_at(&self, u: i64, t: f64) -> LabelPos {
        let Some(tr) = self.tracks.get(&u) else { return LabelPos::NotEntered };
        let p = tr.start + tr.jumps.iter().take_while(|&&s| s <= t).count();
        match p {
            0 => LabelPos::NotEntered,
            p if p > self.n => LabelPos::Exited,
            p => LabelPos::At(p),
        }
    }

    pub fn positions_at(&self, t: f64) -> LabelMap {
        self.tracks.keys().map(|&u| (u, self.position_at(u, t))).collect()
    }
}

pub fn label_particles(traj: &Trajectory) -> LabelHistory {
    let n = traj.initial.len();
    let mut occ: Vec<Option<i64>> = vec![None; n];
    let mut tracks = BTreeMap::new();
    let mut next_initial = 0i64;
    for x in 1..=n {
        if traj.initial.get(x) == 1 {
            occ[x - 1] = Some(next_initial);
            tracks.insert(next_initial, LabelTrack { start: x, jumps: Vec::new() });
            next_initial -= 1;
        }
    }
    let mut next_entry = 1i64;
    for e in &traj.events {
        match e.kind {
            EventKind::Entry => {
                occ[0] = Some(next_entry);
                tracks.insert(next_entry, LabelTrack { start: 0, jumps: vec![e.time] });
                next_entry += 1;
            }
            EventKind::Swap(x) => {
                let u = occ[x - 1].take().expect("swap from an empty site");
                occ[x] = Some(u);
                tracks.get_mut(&u).unwrap().jumps.push(e.time);
            }
            EventKind::Exit => {
                let u = occ[n - 1].take().expect("exit from an empty site");
                tracks.get_mut(&u).unwrap().jumps.push(e.time);
            }
        }
    }
    LabelHistory { n, tracks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tasep::{simulate, Configuration, Params};

    #[test]
    fn first_entry_is_label_one() {
        let p = Params::triple_point(4);
        let t = simulate(&Configuration::zeros(4), &p, 50.0, 3).unwrap();
        let h = label_particles(&t);
        let first = t.events.iter().find(|e| e.kind == EventKind::Entry).unwrap().time;
        assert_eq!(h.passage(1, 0), Some(first));
    }

    #[test]
    fn initial_labels_left_to_right() {
        let p = Params::triple_point(5);
        let t = simulate(&"01101".parse().unwrap(), &p, 0.0, 3).unwrap();
        let m = label_particles(&t).positions_at(0.0);
        assert_eq!(m[&0], LabelPos::At(2));
        assert_eq!(m[&-1], LabelPos::At(3));
        assert_eq!(m[&-2], LabelPos::At(5));
    }

    #[test]
    fn positions_decrease_in_label() {
        let p = Params::new(6, 0.9, 0.7).unwrap();
        for seed in 0..20 {
            let t = simulate(&Configuration::random(6, seed), &p, 40.0, seed).unwrap();
            let h = label_particles(&t);
            for e in &t.events {
                let inside: Vec<usize> = h
                    .positions_at(e.time)
                    .values()
                    .filter_map(|p| if let LabelPos::At(x) = p { Some(*x) } else { None })
                    .collect();
                // BTreeMap iterates labels in increasing order
                assert!(inside.windows(2).all(|w| w[0] > w[1]));
            }
        }
    }
}
