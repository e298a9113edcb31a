use super::{LppError, Site};
use crate::rng::{exp_from_unit, keyed_unit, WEIGHT_STREAM};

/// Mean functions of the exponential weights.
///
/// * `Strip`: `1/alpha` on `x1 = x2 > 0`, `1/beta` on `x1 - x2 = n`,
///   `1` on `1 <= x1 - x2 <= n - 1`. Rows below 0 are part of the strip so
///   that growth interfaces of occupied initial configurations fit.
/// * `StationaryStrip`: `2` on `x1 = x2 >= 1`, on `x1 - x2 = n, x2 >= 1`
///   and on row 0 for `1 <= x1 <= n`; `1` on the bulk of rows `>= 1`.
/// * `HalfQuadrant`: `2` on `x1 = x2 >= 0`, `1` on `x1 > x2 >= 0`.
/// * `Swap`: `2` on row 0 with `x1 >= 0`, `1` on `x1 >= x2 > 0`.
/// * `Z2Stationary`: `2` on the nonnegative axes, `1` on the open quadrant.
/// * `Homogeneous`: `1` everywhere.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EnvironmentSpec {
    Strip { alpha: f64, beta: f64, n: usize },
    StationaryStrip { n: usize },
    HalfQuadrant,
    Swap,
    Z2Stationary,
    Homogeneous,
}

impl EnvironmentSpec {
    pub fn strip(alpha: f64, beta: f64, n: usize) -> Result<Self, LppError> {
        let s = EnvironmentSpec::Strip { alpha, beta, n };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), LppError> {
        match *self {
            EnvironmentSpec::Strip { alpha, beta, n } => {
                if n == 0 || !(alpha > 0.0 && beta > 0.0 && alpha.is_finite() && beta.is_finite()) {
                    return Err(LppError::BadSpec);
                }
            }
            EnvironmentSpec::StationaryStrip { n }
                if n == 0 => {
                    return Err(LppError::BadSpec);
                }
            _ => {}
        }
        Ok(())
    }

    /// Strip width, for the strip kinds.
    pub fn width(&self) -> Option<usize> {
        match *self {
            EnvironmentSpec::Strip { n, .. } | EnvironmentSpec::StationaryStrip { n } => Some(n),
            _ => None,
        }
    }

    /// Mean `p(x)` of the weight at `x`.
    pub fn rate(&self, x: Site) -> f64 {
        let (x1, x2) = x;
        match *self {
            EnvironmentSpec::Strip { alpha, beta, n } => {
                let d = x1 - x2;
                let n = n as i64;
                if d == 0 && x2 > 0 {
                    1.0 / alpha
                } else if d == n {
                    1.0 / beta
                } else if d >= 1 && d < n {
                    1.0
                } else {
                    0.0
                }
            }
            EnvironmentSpec::StationaryStrip { n } => {
                let d = x1 - x2;
                let n = n as i64;
                if x2 >= 1 && (d == 0 || d == n) {
                    2.0
                } else if x2 == 0 && (1..=n).contains(&x1) {
                    2.0
                } else if x2 >= 1 && d >= 1 && d < n {
                    1.0
                } else {
                    0.0
                }
            }
            EnvironmentSpec::HalfQuadrant => {
                if x1 == x2 && x2 >= 0 {
                    2.0
                } else if x1 > x2 && x2 >= 0 {
                    1.0
                } else {
                    0.0
                }
            }
            EnvironmentSpec::Swap => {
                if x2 == 0 && x1 >= 0 {
                    2.0
                } else if x1 >= x2 && x2 > 0 {
                    1.0
                } else {
                    0.0
                }
            }
            EnvironmentSpec::Z2Stationary => {
                if (x1 == 0 && x2 >= 0) || (x2 == 0 && x1 >= 0) {
                    2.0
                } else if x1 > 0 && x2 > 0 {
                    1.0
                } else {
                    0.0
                }
            }
            EnvironmentSpec::Homogeneous => 1.0,
        }
    }

    /// Column range of the support in row `x2`, for the strip kinds.
    pub fn row_span(&self, x2: i64) -> Option<(i64, i64)> {
        match *self {
            EnvironmentSpec::Strip { n, .. } => {
                let lo = if x2 >= 1 { x2 } else { x2 + 1 };
                Some((lo, x2 + n as i64))
            }
            EnvironmentSpec::StationaryStrip { n } => match x2 {
                0 => Some((1, n as i64)),
                r if r >= 1 => Some((r, r + n as i64)),
                _ => None,
            },
            _ => None,
        }
    }

    pub fn in_support(&self, x: Site) -> bool {
        self.rate(x) > 0.0
    }
}

/// Anything that assigns a weight to every site.
pub trait WeightSource {
    fn weight(&self, x: Site) -> f64;
}

/// Site-keyed sample of a spec: `-p(x) ln U(seed, x)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampledEnv {
    pub spec: EnvironmentSpec,
    pub seed: u64,
}

impl SampledEnv {
    pub fn new(spec: EnvironmentSpec, seed: u64) -> Self {
        SampledEnv { spec, seed }
    }
}

/// Uniform behind the weight at `x`.
#[inline]
pub fn site_unit(seed: u64, x: Site) -> f64 {
    keyed_unit(seed, x.0 as u64, x.1 as u64, WEIGHT_STREAM)
}

impl WeightSource for SampledEnv {
    #[inline]
    fn weight(&self, x: Site) -> f64 {
        let mean = self.spec.rate(x);
        if mean == 0.0 {
            0.0
        } else {
            exp_from_unit(mean, site_unit(self.seed, x))
        }
    }
}

impl<F: Fn(Site) -> f64> WeightSource for F {
    fn weight(&self, x: Site) -> f64 {
        self(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strip_values() {
        let s = EnvironmentSpec::strip(0.5, 0.25, 4).unwrap();
        assert_eq!(s.rate((3, 3)), 2.0);
        assert_eq!(s.rate((0, 0)), 0.0);
        assert_eq!(s.rate((7, 3)), 4.0);
        assert_eq!(s.rate((1, -3)), 4.0);
        assert_eq!(s.rate((5, 3)), 1.0);
        assert_eq!(s.rate((8, 3)), 0.0);
        assert_eq!(s.rate((2, 3)), 0.0);
    }

    #[test]
    fn stationary_values() {
        let s = EnvironmentSpec::StationaryStrip { n: 3 };
        for j in 1..=3 {
            assert_eq!(s.rate((j, 0)), 2.0);
        }
        assert_eq!(s.rate((0, 0)), 0.0);
        assert_eq!(s.rate((4, 0)), 0.0);
        assert_eq!(s.rate((2, 2)), 2.0);
        assert_eq!(s.rate((5, 2)), 2.0);
        assert_eq!(s.rate((4, 2)), 1.0);
        assert_eq!(s.rate((2, -1)), 0.0);
    }

    #[test]
    fn spans_match_support() {
        for spec in [EnvironmentSpec::strip(1.0, 2.0, 5).unwrap(), EnvironmentSpec::StationaryStrip { n: 5 }] {
            for r in -4..6 {
                let cols: Vec<i64> = (-10..20).filter(|&c| spec.in_support((c, r))).collect();
                match spec.row_span(r) {
                    Some((lo, hi)) => assert_eq!(cols, (lo..=hi).collect::<Vec<_>>()),
                    None => assert!(cols.is_empty()),
                }
            }
        }
    }

    #[test]
    fn zero_mean_gives_zero_weight() {
        let e = SampledEnv::new(EnvironmentSpec::StationaryStrip { n: 2 }, 3);
        assert_eq!(e.weight((0, 0)), 0.0);
        assert!(e.weight((1, 0)) > 0.0);
    }
}
