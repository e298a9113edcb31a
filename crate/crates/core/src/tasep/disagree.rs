use super::{Configuration, TasepError, Trajectory};

/// Values in `{0, 1, 2}`: empty, first class, second class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisagreementConfig {
    pub vals: Vec<u8>,
}

impl DisagreementConfig {
    pub fn from_pair(eta: &Configuration, zeta: &Configuration) -> Self {
        let vals = eta
            .bits()
            .iter()
            .zip(zeta.bits())
            .map(|(&a, &b)| if a != b { 2 } else { a })
            .collect();
        DisagreementConfig { vals }
    }

    pub fn second_class(&self) -> usize {
        self.vals.iter().filter(|&&v| v == 2).count()
    }

    /// Sites (1-based) holding second class particles.
    pub fn second_class_sites(&self) -> Vec<usize> {
        self.vals.iter().enumerate().filter(|(_, &v)| v == 2).map(|(i, _)| i + 1).collect()
    }

    /// `(eta, zeta)` with `eta = 1{xi >= 1}` and `zeta = 1{xi = 1}`.
    pub fn split(&self) -> (Configuration, Configuration) {
        let eta = self.vals.iter().map(|&v| (v >= 1) as u8).collect();
        let zeta = self.vals.iter().map(|&v| (v == 1) as u8).collect();
        (Configuration::new(eta).unwrap(), Configuration::new(zeta).unwrap())
    }
}

/// Piecewise-constant disagreement process: `initial` on `[0, t_1)`, then
/// `changes[k].1` on `[t_{k+1}, t_{k+2})`.
#[derive(Clone, Debug, PartialEq)]
pub struct XiPath {
    pub initial: DisagreementConfig,
    pub changes: Vec<(f64, DisagreementConfig)>,
    pub horizon: f64,
}

impl XiPath {
    pub fn at(&self, t: f64) -> &DisagreementConfig {
        let k = self.changes.partition_point(|(s, _)| *s <= t);
        if k == 0 {
            &self.initial
        } else {
            &self.changes[k - 1].1
        }
    }
}

/// Merges a canonically coupled pair into the disagreement process.
pub fn disagreement(eta: &Trajectory, zeta: &Trajectory) -> Result<XiPath, TasepError> {
    if eta.horizon != zeta.horizon {
        return Err(TasepError::HorizonMismatch);
    }
    if eta.initial.len() != zeta.initial.len() {
        return Err(TasepError::DimensionMismatch { expected: eta.initial.len(), got: zeta.initial.len() });
    }
    if !eta.initial.dominates(&zeta.initial) {
        return Err(TasepError::NotDominated(0.0));
    }
    let (mut a, mut b) = (eta.initial.clone(), zeta.initial.clone());
    let initial = DisagreementConfig::from_pair(&a, &b);
    let mut changes = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < eta.events.len() || j < zeta.events.len() {
        let ta = eta.events.get(i).map_or(f64::INFINITY, |e| e.time);
        let tb = zeta.events.get(j).map_or(f64::INFINITY, |e| e.time);
        let t = ta.min(tb);
        while i < eta.events.len() && eta.events[i].time == t {
            eta.events[i].kind.apply(a.bits_mut());
            i += 1;
        }
        while j < zeta.events.len() && zeta.events[j].time == t {
            zeta.events[j].kind.apply(b.bits_mut());
            j += 1;
        }
        if !a.dominates(&b) {
            return Err(TasepError::NotDominated(t));
        }
        changes.push((t, DisagreementConfig::from_pair(&a, &b)));
    }
    Ok(XiPath { initial, changes, horizon: eta.horizon })
}

/// First time without second class particles, if it happens by the horizon.
pub fn second_class_exit_time(xi: &XiPath) -> Option<f64> {
    if xi.initial.second_class() == 0 {
        return Some(0.0);
    }
    xi.changes.iter().find(|(_, c)| c.second_class() == 0).map(|(t, _)| *t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tasep::{canonical_couple, Params};

    #[test]
    fn equal_starts_have_no_second_class() {
        let p = Params::triple_point(5);
        let c = Configuration::random(5, 1);
        let (a, b) = canonical_couple(&c, &c, &p, &p, 30.0, 2).unwrap();
        let xi = disagreement(&a, &b).unwrap();
        assert!(xi.changes.iter().all(|(_, c)| c.second_class() == 0));
        assert_eq!(second_class_exit_time(&xi), Some(0.0));
    }

    #[test]
    fn extremal_start_is_all_two() {
        let p = Params::triple_point(4);
        let (a, b) =
            canonical_couple(&Configuration::ones(4), &Configuration::zeros(4), &p, &p, 1.0, 2).unwrap();
        assert_eq!(disagreement(&a, &b).unwrap().initial.vals, vec![2; 4]);
    }

    #[test]
    fn closed_segment_keeps_second_class() {
        let p = Params::new(3, 0.0, 0.0).unwrap();
        let eta: Configuration = "110".parse().unwrap();
        let zeta: Configuration = "100".parse().unwrap();
        let (a, b) = canonical_couple(&eta, &zeta, &p, &p, 500.0, 8).unwrap();
        assert_eq!(second_class_exit_time(&disagreement(&a, &b).unwrap()), None);
    }

    #[test]
    fn single_discrepancy_never_splits() {
        let p = Params::new(6, 0.8, 0.6).unwrap();
        for seed in 0..50 {
            let zeta = Configuration::random(6, seed);
            let mut bits = zeta.bits().to_vec();
            let Some(x) = bits.iter().position(|&b| b == 0) else { continue };
            bits[x] = 1;
            let eta = Configuration::new(bits).unwrap();
            let (a, b) = canonical_couple(&eta, &zeta, &p, &p, 200.0, seed).unwrap();
            let xi = disagreement(&a, &b).unwrap();
            let mut last = 1;
            for (_, c) in &xi.changes {
                assert!(c.second_class() <= last);
                last = c.second_class();
            }
        }
    }
}
