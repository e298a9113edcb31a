use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::rng::{exp_from_unit, keyed_unit, CLOCK_STREAM};

/// Poisson clocks of the graphical construction.
///
/// The shared boundary clocks drive both copies of a coupled pair; the extra
/// entry clock acts on the first copy only and the extra exit clock on the
/// second copy only.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClockKind {
    Bulk(usize),
    EntryShared,
    EntryExtra,
    ExitShared,
    ExitExtra,
}

impl ClockKind {
    fn tag(&self) -> u64 {
        match *self {
            ClockKind::Bulk(x) => x as u64,
            ClockKind::EntryShared => 1 << 32,
            ClockKind::EntryExtra => 2 << 32,
            ClockKind::ExitShared => 3 << 32,
            ClockKind::ExitExtra => 4 << 32,
        }
    }

    /// Tie-break order: by the site the clock acts on, entry before bulk before exit.
    fn order(&self, n: usize) -> u64 {
        let (site, sub) = match *self {
            ClockKind::EntryShared => (1, 0),
            ClockKind::EntryExtra => (1, 1),
            ClockKind::Bulk(x) => (x, 2),
            ClockKind::ExitShared => (n, 3),
            ClockKind::ExitExtra => (n, 4),
        };
        ((site as u64) << 3) | sub
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ring {
    pub time: f64,
    pub kind: ClockKind,
}

#[derive(Clone, Copy, Debug)]
struct Pending {
    time: f64,
    order: u64,
    clock: usize,
}

impl PartialEq for Pending {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Pending {}

impl PartialOrd for Pending {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Pending {
    // reversed: BinaryHeap is a max-heap
    fn cmp(&self, other: &Self) -> Ordering {
        other.time.total_cmp(&self.time).then(other.order.cmp(&self.order))
    }
}

#[derive(Clone, Debug)]
struct Clock {
    kind: ClockKind,
    mean: f64,
    rings: u64,
    tag: u64,
}

/// Next-reaction scheduler over keyed clock streams.
///
/// Ring `r` of a clock is `keyed_unit(seed, tag, r, CLOCK_STREAM)` turned
/// into an exponential gap, so a clock's ring times depend only on the seed,
/// the clock, and its rate.
#[derive(Clone, Debug)]
pub struct ClockBank {
    seed: u64,
    clocks: Vec<Clock>,
    heap: BinaryHeap<Pending>,
}

impl ClockBank {
    pub fn new(seed: u64, n: usize, clocks: &[(ClockKind, f64)]) -> Self {
        let mut bank = ClockBank {
            seed,
            clocks: Vec::with_capacity(clocks.len()),
            heap: BinaryHeap::with_capacity(clocks.len()),
        };
        for &(kind, rate) in clocks {
            if rate > 0.0 {
                let idx = bank.clocks.len();
                bank.clocks.push(Clock { kind, mean: 1.0 / rate, rings: 0, tag: kind.tag() });
                let time = bank.gap(idx);
                bank.heap.push(Pending { time, order: kind.order(n), clock: idx });
            }
        }
        bank
    }

    fn gap(&mut self, idx: usize) -> f64 {
        let c = &mut self.clocks[idx];
        let u = keyed_unit(self.seed, c.tag, c.rings, CLOCK_STREAM);
        c.rings += 1;
        exp_from_unit(c.mean, u)
    }

    /// Pops the next ring if it happens at or before `t_end`.
    pub fn pop_until(&mut self, t_end: f64) -> Option<Ring> {
        let top = *self.heap.peek()?;
        if top.time > t_end {
            return None;
        }
        self.heap.pop();
        let kind = self.clocks[top.clock].kind;
        let next = top.time + self.gap(top.clock);
        self.heap.push(Pending { time: next, ..top });
        Some(Ring { time: top.time, kind })
    }
}
