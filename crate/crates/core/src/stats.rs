//! Goodness-of-fit tests, correlation, confidence intervals and regression.

use statrs::distribution::{ContinuousCDF, Normal};

/// Smallest sample accepted by pass/fail checks.
pub const MIN_SAMPLES: usize = 100;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StatsError {
    #[error("need at least {need} samples, got {got}")]
    TooFew { need: usize, got: usize },
    #[error("sample {0} is not positive and finite")]
    NonPositive(f64),
    #[error("rate or level {0} out of range")]
    BadParameter(f64),
    #[error("inputs have different lengths")]
    LengthMismatch,
    #[error("sample is constant")]
    Constant,
    #[error("abscissae are degenerate")]
    Degenerate,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TestReport {
    pub statistic: f64,
    pub p_value: f64,
    pub sample_size: usize,
    pub null: String,
}

impl TestReport {
    pub fn rejected(&self, level: f64) -> bool {
        self.p_value < level
    }
}

/// Asymptotic Kolmogorov tail `P(K > lambda)`.
pub fn kolmogorov_tail(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// p-value of a KS distance `d` with effective sample size `ne`, with
/// Stephens' finite-sample correction.
fn ks_p(d: f64, ne: f64) -> f64 {
    let s = ne.sqrt();
    kolmogorov_tail((s + 0.12 + 0.11 / s) * d)
}

/// One-sample KS test against the exponential law of the given rate.
pub fn ks_exponential(samples: &[f64], rate: f64) -> Result<TestReport, StatsError> {
    if !(rate > 0.0 && rate.is_finite()) {
        return Err(StatsError::BadParameter(rate));
    }
    if samples.is_empty() {
        return Err(StatsError::TooFew { need: 1, got: 0 });
    }
    if let Some(&x) = samples.iter().find(|x| !(**x > 0.0 && x.is_finite())) {
        return Err(StatsError::NonPositive(x));
    }
    let mut v = samples.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in v.iter().enumerate() {
        let f = 1.0 - (-rate * x).exp();
        d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    Ok(TestReport { statistic: d, p_value: ks_p(d, n), sample_size: v.len(), null: format!("Exp(rate {rate})") })
}

/// Two-sample KS test.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<TestReport, StatsError> {
    if a.is_empty() || b.is_empty() {
        return Err(StatsError::TooFew { need: 1, got: 0 });
    }
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    x.sort_by(f64::total_cmp);
    y.sort_by(f64::total_cmp);
    let (n, m) = (x.len() as f64, y.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < x.len() && j < y.len() {
        let t = x[i].min(y[j]);
        while i < x.len() && x[i] <= t {
            i += 1;
        }
        while j < y.len() && y[j] <= t {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    Ok(TestReport {
        statistic: d,
        p_value: ks_p(d, n * m / (n + m)),
        sample_size: x.len() + y.len(),
        null: "same law".into(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope.
    pub stderr: f64,
}

/// Ordinary least squares `y = slope x + intercept`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<LinearFit, StatsError> {
    if xs.len() != ys.len() {
        return Err(StatsError::LengthMismatch);
    }
    if xs.len() < 2 {
        return Err(StatsError::TooFew { need: 2, got: xs.len() });
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx <= f64::EPSILON * xs.iter().map(|x| x * x).sum::<f64>().max(f64::MIN_POSITIVE) {
        return Err(StatsError::Degenerate);
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let stderr = if xs.len() > 2 {
        let rss: f64 = xs.iter().zip(ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
        (rss / (n - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    Ok(LinearFit { slope, intercept, stderr })
}

fn z_two_sided(level: f64) -> Result<f64, StatsError> {
    if !(level > 0.0 && level < 1.0) {
        return Err(StatsError::BadParameter(level));
    }
    Ok(Normal::new(0.0, 1.0).unwrap().inverse_cdf(0.5 + level / 2.0))
}

/// Mean with the normal-approximation half width at confidence `level`.
pub fn mean_ci(samples: &[f64], level: f64) -> Result<(f64, f64), StatsError> {
    if samples.len() < 2 {
        return Err(StatsError::TooFew { need: 2, got: samples.len() });
    }
    let z = z_two_sided(level)?;
    let n = samples.len() as f64;
    let m = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
    Ok((m, z * (var / n).sqrt()))
}

/// Pearson correlation.
pub fn correlation(a: &[f64], b: &[f64]) -> Result<f64, StatsError> {
    if a.len() != b.len() {
        return Err(StatsError::LengthMismatch);
    }
    if a.len() < 2 {
        return Err(StatsError::TooFew { need: 2, got: a.len() });
    }
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    if saa == 0.0 || sbb == 0.0 {
        return Err(StatsError::Constant);
    }
    Ok((sab / (saa * sbb).sqrt()).clamp(-1.0, 1.0))
}

/// Pooled two-proportion z-test of `k1/n1 = k2/n2`.
pub fn two_proportion_test(k1: usize, n1: usize, k2: usize, n2: usize) -> Result<TestReport, StatsError> {
    if n1 == 0 || n2 == 0 {
        return Err(StatsError::TooFew { need: 1, got: 0 });
    }
    let (p1, p2) = (k1 as f64 / n1 as f64, k2 as f64 / n2 as f64);
    let p = (k1 + k2) as f64 / (n1 + n2) as f64;
    let se = (p * (1.0 - p) * (1.0 / n1 as f64 + 1.0 / n2 as f64)).sqrt();
    let (z, pv) = if se == 0.0 {
        (0.0, 1.0)
    } else {
        let z = (p1 - p2) / se;
        (z, 2.0 * (1.0 - Normal::new(0.0, 1.0).unwrap().cdf(z.abs())))
    };
    Ok(TestReport { statistic: z, p_value: pv.clamp(0.0, 1.0), sample_size: n1 + n2, null: "equal proportions".into() })
}

/// Wilson score interval for a proportion.
pub fn wilson_interval(k: usize, n: usize, level: f64) -> Result<(f64, f64), StatsError> {
    if n == 0 {
        return Err(StatsError::TooFew { need: 1, got: 0 });
    }
    let z = z_two_sided(level)?;
    let nf = n as f64;
    let p = k as f64 / nf;
    let den = 1.0 + z * z / nf;
    let centre = (p + z * z / (2.0 * nf)) / den;
    let half = z * (p * (1.0 - p) / nf + z * z / (4.0 * nf * nf)).sqrt() / den;
    Ok(((centre - half).max(0.0), (centre + half).min(1.0)))
}

/// Linear-interpolation quantile of a sample.
pub fn quantile(samples: &[f64], q: f64) -> Result<f64, StatsError> {
    if samples.is_empty() {
        return Err(StatsError::TooFew { need: 1, got: 0 });
    }
    if !(0.0..=1.0).contains(&q) {
        return Err(StatsError::BadParameter(q));
    }
    let mut v = samples.to_vec();
    v.sort_by(f64::total_cmp);
    let h = (v.len() - 1) as f64 * q;
    let (lo, hi) = (h.floor() as usize, h.ceil() as usize);
    Ok(v[lo] + (h - lo as f64) * (v[hi] - v[lo]))
}

pub fn iqr(samples: &[f64]) -> Result<f64, StatsError> {
    Ok(quantile(samples, 0.75)? - quantile(samples, 0.25)?)
}

/// Order-statistic ranks (1-based) bracketing the `q`-quantile of `n`
/// samples at confidence `level`, by the normal approximation to the
/// binomial count below the quantile.
pub fn quantile_rank_band(n: usize, q: f64, level: f64) -> Result<(usize, usize), StatsError> {
    if n == 0 {
        return Err(StatsError::TooFew { need: 1, got: 0 });
    }
    let z = z_two_sided(level)?;
    let nf = n as f64;
    let sd = (nf * q * (1.0 - q)).sqrt();
    let lo = (nf * q - z * sd).floor().max(1.0) as usize;
    let hi = ((nf * q + z * sd).ceil() as usize).clamp(lo, n);
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{exp_from_unit, keyed_unit};

    fn exp_batch(seed: u64, mean: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| exp_from_unit(mean, keyed_unit(seed, i as u64, 0, 7))).collect()
    }

    #[test]
    fn ks_single_sample_at_median() {
        let r = ks_exponential(&[std::f64::consts::LN_2], 1.0).unwrap();
        assert!((r.statistic - 0.5).abs() < 1e-15);
    }

    #[test]
    fn ks_rejects_bad_input() {
        assert!(matches!(ks_exponential(&[1.0, -1.0], 1.0), Err(StatsError::NonPositive(_))));
        assert!(ks_exponential(&[1.0], 0.0).is_err());
        assert!(ks_exponential(&[], 1.0).is_err());
    }

    #[test]
    fn ks_calibration_and_power() {
        let mut type1 = 0;
        let mut power = 0;
        for b in 0..100 {
            let x = exp_batch(b, 1.0, 10_000);
            type1 += ks_exponential(&x, 1.0).unwrap().rejected(0.01) as usize;
            power += ks_exponential(&x, 2.0).unwrap().rejected(0.01) as usize;
        }
        assert!(type1 <= 3, "{type1}");
        assert!(power >= 99, "{power}");
    }

    #[test]
    fn kolmogorov_tail_values() {
        assert!((kolmogorov_tail(1.358) - 0.05).abs() < 1e-3);
        assert!((kolmogorov_tail(1.628) - 0.01).abs() < 1e-3);
        assert_eq!(kolmogorov_tail(0.0), 1.0);
    }

    #[test]
    fn two_sample_same_and_different() {
        let a = exp_batch(1, 1.0, 2000);
        let b = exp_batch(2, 1.0, 2000);
        let c = exp_batch(3, 2.0, 2000);
        assert!(!ks_two_sample(&a, &b).unwrap().rejected(0.001));
        assert!(ks_two_sample(&a, &c).unwrap().rejected(0.001));
    }

    #[test]
    fn fit_collinear() {
        let xs = [1.0, 2.0, 4.0, 8.0];
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x - 1.0).collect();
        let f = linear_fit(&xs, &ys).unwrap();
        assert!((f.slope - 3.0).abs() < 1e-12 && (f.intercept + 1.0).abs() < 1e-12);
        assert!(f.stderr < 1e-12);
        let rev_x: Vec<f64> = xs.iter().rev().copied().collect();
        let rev_y: Vec<f64> = ys.iter().rev().copied().collect();
        assert_eq!(linear_fit(&rev_x, &rev_y).unwrap().slope.to_bits(), f.slope.to_bits());
        assert!(matches!(linear_fit(&[2.0, 2.0], &[1.0, 3.0]), Err(StatsError::Degenerate)));
    }

    #[test]
    fn fit_unbiased_under_noise() {
        let xs: Vec<f64> = (0..20).map(|i| i as f64).collect();
        let mut bad = 0;
        for b in 0..100 {
            let ys: Vec<f64> = xs.iter().enumerate().map(|(i, x)| 0.5 * x + keyed_unit(b, i as u64, 1, 2) - 0.5).collect();
            let f = linear_fit(&xs, &ys).unwrap();
            bad += ((f.slope - 0.5).abs() > 3.0 * f.stderr) as usize;
        }
        assert!(bad <= 5, "{bad}");
    }

    #[test]
    fn ci_and_correlation() {
        let (m, h) = mean_ci(&[2.0; 10], 0.95).unwrap();
        assert_eq!((m, h), (2.0, 0.0));
        assert_eq!(correlation(&[2.0; 5], &[1.0, 2.0, 3.0, 4.0, 5.0]), Err(StatsError::Constant));
        let a = [1.0, 5.0, 2.0, 7.0];
        assert!((correlation(&a, &a).unwrap() - 1.0).abs() < 1e-15);
        let mut ok = 0;
        for b in 0..100 {
            let x = exp_batch(2 * b, 1.0, 10_000);
            let y = exp_batch(2 * b + 1, 1.0, 10_000);
            ok += (correlation(&x, &y).unwrap().abs() < 0.05) as usize;
        }
        assert!(ok >= 95);
    }

    #[test]
    fn proportions() {
        let r = two_proportion_test(50, 100, 50, 100).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert!(two_proportion_test(10, 1000, 100, 1000).unwrap().rejected(0.01));
        let (lo, hi) = wilson_interval(90, 100, 0.95).unwrap();
        assert!(lo < 0.9 && hi > 0.9 && hi <= 1.0);
    }

    #[test]
    fn quantiles() {
        let v = [4.0, 1.0, 3.0, 2.0, 5.0];
        assert_eq!(quantile(&v, 0.5).unwrap(), 3.0);
        assert_eq!(quantile(&v, 0.0).unwrap(), 1.0);
        assert_eq!(iqr(&v).unwrap(), 2.0);
        let (lo, hi) = quantile_rank_band(1000, 0.75, 0.95).unwrap();
        assert!(lo < 750 && hi > 750);
    }
}
