use std::fmt::Write as _;

use super::{EnvironmentSpec, Region, SampledEnv, Site, WeightSource};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FieldOrigin {
    Sampled { spec: EnvironmentSpec, seed: u64 },
    Explicit,
}

/// Weights materialised on a finite region.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightField {
    region: Region,
    weights: Vec<f64>,
    origin: FieldOrigin,
}

impl WeightField {
    /// Independent exponentials with means `spec.rate(x)`, keyed by `(seed, x)`.
    pub fn sample(spec: EnvironmentSpec, region: Region, seed: u64) -> Self {
        let env = SampledEnv::new(spec, seed);
        let weights = region.iter().map(|x| env.weight(x)).collect();
        WeightField { region, weights, origin: FieldOrigin::Sampled { spec, seed } }
    }

    pub fn from_source<S: WeightSource + ?Sized>(source: &S, region: Region) -> Self {
        let weights = region.iter().map(|x| source.weight(x)).collect();
        WeightField { region, weights, origin: FieldOrigin::Explicit }
    }

    pub fn from_vec(region: Region, weights: Vec<f64>) -> Self {
        assert_eq!(region.len(), weights.len(), "one weight per site");
        WeightField { region, weights, origin: FieldOrigin::Explicit }
    }

    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn origin(&self) -> FieldOrigin {
        self.origin
    }

    pub fn seed(&self) -> Option<u64> {
        match self.origin {
            FieldOrigin::Sampled { seed, .. } => Some(seed),
            FieldOrigin::Explicit => None,
        }
    }

    pub fn spec(&self) -> Option<EnvironmentSpec> {
        match self.origin {
            FieldOrigin::Sampled { spec, .. } => Some(spec),
            FieldOrigin::Explicit => None,
        }
    }

    #[inline]
    pub fn get(&self, x: Site) -> Option<f64> {
        self.region.index(x).map(|i| self.weights[i])
    }

    pub fn values(&self) -> &[f64] {
        &self.weights
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        self.origin = FieldOrigin::Explicit;
        &mut self.weights
    }

    /// `# weights` header, then `x1 x2 value` rows in storage order.
    pub fn dump(&self) -> String {
        let mut s = String::from("# weights x1 x2 value\n");
        for (x, w) in self.region.iter().zip(&self.weights) {
            let _ = writeln!(s, "{} {} {}", x.0, x.1, w);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subregions_agree() {
        let spec = EnvironmentSpec::strip(0.5, 0.5, 6).unwrap();
        let small = WeightField::sample(spec, Region::support_rows(&spec, 0, 5).unwrap(), 3);
        let big = WeightField::sample(spec, Region::support_rows(&spec, -3, 40).unwrap(), 3);
        for x in small.region().iter() {
            assert_eq!(small.get(x), big.get(x));
        }
    }

    #[test]
    fn bulk_mean_near_one() {
        let spec = EnvironmentSpec::Homogeneous;
        let f = WeightField::sample(spec, Region::rectangle((0, 0), (315, 315)), 1);
        let m = f.values().iter().sum::<f64>() / f.values().len() as f64;
        assert!((m - 1.0).abs() < 0.02, "{m}");
    }
}
