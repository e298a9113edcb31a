use rayon::prelude::*;

use super::{site_unit, Site};
use crate::rng::{derive_seed, exp_from_unit};

/// Stream tag for shape replicas.
pub const SHAPE_STREAM: u64 = 0x5348_4150;

/// `G((0,0), (n,n))` for i.i.d. mean-1 weights, by a single-row DP.
///
/// Weights match `SampledEnv { Homogeneous, seed }` site by site.
pub fn homogeneous_corner_time(n: usize, seed: u64) -> f64 {
    let mut row = vec![0.0f64; n + 1];
    for x2 in 0..=n as i64 {
        let mut left = f64::NEG_INFINITY;
        for (x1, cell) in row.iter_mut().enumerate() {
            let x: Site = (x1 as i64, x2);
            let below = if x2 == 0 { f64::NEG_INFINITY } else { *cell };
            let best = left.max(below);
            let w = exp_from_unit(1.0, site_unit(seed, x));
            *cell = if best.is_finite() { best + w } else { w };
            left = *cell;
        }
    }
    row[n]
}

/// `G((0,0), (n,n))` over `replicas` seeds derived from `seed`.
pub fn corner_time_samples(n: usize, replicas: usize, seed: u64) -> Vec<f64> {
    (0..replicas as u64)
        .into_par_iter()
        .map(|r| homogeneous_corner_time(n, derive_seed(seed, r, SHAPE_STREAM)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lpp::{passage_times, EnvironmentSpec, Region, Source, WeightField};

    #[test]
    fn matches_general_dp() {
        for seed in 0..10 {
            let n = 12;
            let f = WeightField::sample(EnvironmentSpec::Homogeneous, Region::rectangle((0, 0), (n, n)), seed);
            let g = passage_times(&f, Source::point((0, 0))).unwrap().get((n, n)).unwrap();
            assert_eq!(homogeneous_corner_time(n as usize, seed), g);
        }
    }

    #[test]
    fn single_site_is_its_weight() {
        let w = exp_from_unit(1.0, site_unit(5, (0, 0)));
        assert_eq!(homogeneous_corner_time(0, 5), w);
    }
}
