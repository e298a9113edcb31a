use super::{passage_times, EnvironmentSpec, LatticePath, LppError, Region, SampledEnv, Site, Source, WeightField, WeightSource};

/// Default cap on the certification depth.
pub const DEPTH_CAP: i64 = 1 << 22;

/// Prefix of a semi-infinite geodesic, certified at depth `depth`: every
/// geodesic from the start to `L_depth` runs through this prefix.
#[derive(Clone, Debug, PartialEq)]
pub struct SemiInfinite {
    pub path: LatticePath,
    pub depth: i64,
}

/// Semi-infinite geodesic from `x` through `L_target` in the sampled strip.
pub fn semi_infinite_geodesic(spec: &EnvironmentSpec, x: Site, seed: u64, target: i64) -> Result<SemiInfinite, LppError> {
    semi_infinite_geodesic_in(&SampledEnv::new(*spec, seed), spec, x, target, DEPTH_CAP)
}

/// As [`semi_infinite_geodesic`] for arbitrary weights on the support of `spec`.
pub fn semi_infinite_geodesic_in<S: WeightSource + ?Sized>(
    weights: &S,
    spec: &EnvironmentSpec,
    x: Site,
    target: i64,
    cap: i64,
) -> Result<SemiInfinite, LppError> {
    let width = spec.width().ok_or(LppError::NotStrip)? as i64;
    if !spec.in_support(x) {
        return Err(LppError::OutsideRegion(x));
    }
    let start = x.0 + x.1;
    let target = target.max(start);
    let mut depth = (2 * target - start).max(start + 2 * width).max(target + 1);
    loop {
        if depth > cap {
            return Err(LppError::DepthCap(cap));
        }
        // rows reaching the diagonal end of L_depth
        let region = Region::support_rows(spec, x.1, depth.div_euclid(2) + 1)?;
        let field = WeightField::from_source(weights, region);
        let pf = passage_times(&field, Source::point(x))?;
        let ends: Vec<Site> = (0..=width)
            .filter(|d| (depth - d) % 2 == 0)
            .map(|d| ((depth + d) / 2, (depth - d) / 2))
            .filter(|&y| pf.is_reachable(y))
            .collect();
        let mut prefix: Option<LatticePath> = None;
        let mut agree = !ends.is_empty();
        for &y in &ends {
            let p = pf.geodesic(y)?.prefix_through(target).ok_or(LppError::Unreachable(y))?;
            match &prefix {
                None => prefix = Some(p),
                Some(q) if q.end() == p.end() => {}
                Some(_) => {
                    agree = false;
                    break;
                }
            }
        }
        if agree {
            return Ok(SemiInfinite { path: prefix.unwrap(), depth });
        }
        depth *= 2;
    }
}

/// Busemann function `B(x, y)` of the sampled strip.
pub fn busemann(spec: &EnvironmentSpec, x: Site, y: Site, seed: u64) -> Result<f64, LppError> {
    busemann_in(&SampledEnv::new(*spec, seed), spec, x, y, DEPTH_CAP)
}

/// `G(x, c) - G(y, c)` at the first site `c` shared by the semi-infinite
/// geodesics from `x` and `y`.
pub fn busemann_in<S: WeightSource + ?Sized>(
    weights: &S,
    spec: &EnvironmentSpec,
    x: Site,
    y: Site,
    cap: i64,
) -> Result<f64, LppError> {
    if x == y {
        return Ok(0.0);
    }
    let width = spec.width().ok_or(LppError::NotStrip)? as i64;
    let mut target = (x.0 + x.1).max(y.0 + y.1) + 2 * width;
    loop {
        let px = semi_infinite_geodesic_in(weights, spec, x, target, cap)?;
        let py = semi_infinite_geodesic_in(weights, spec, y, target, cap)?;
        if let Some(i) = px.path.points().iter().position(|s| py.path.contains(*s)) {
            let c = px.path.points()[i];
            let j = py.path.points().iter().position(|&s| s == c).unwrap();
            let gx: f64 = px.path.points()[..=i].iter().map(|&s| weights.weight(s)).sum();
            let gy: f64 = py.path.points()[..=j].iter().map(|&s| weights.weight(s)).sum();
            return Ok(gx - gy);
        }
        target *= 2;
        if target > cap {
            return Err(LppError::DepthCap(cap));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefix_stable_in_target() {
        let spec = EnvironmentSpec::strip(0.5, 0.5, 4).unwrap();
        for seed in 0..10 {
            let a = semi_infinite_geodesic(&spec, (1, 1), seed, 20).unwrap();
            let b = semi_infinite_geodesic(&spec, (1, 1), seed, 40).unwrap();
            assert_eq!(a.path.points(), &b.path.points()[..a.path.len()]);
            assert_eq!(a.path.end().0 + a.path.end().1, 20);
        }
    }

    #[test]
    fn busemann_basic() {
        let spec = EnvironmentSpec::strip(0.5, 0.5, 4).unwrap();
        let (x, y, z) = ((1, 1), (3, 0), (4, 2));
        let bxy = busemann(&spec, x, y, 7).unwrap();
        let byx = busemann(&spec, y, x, 7).unwrap();
        let byz = busemann(&spec, y, z, 7).unwrap();
        let bxz = busemann(&spec, x, z, 7).unwrap();
        assert_eq!(busemann(&spec, x, x, 7).unwrap(), 0.0);
        assert!((bxy + byx).abs() < 1e-9);
        assert!((bxy + byz - bxz).abs() < 1e-9);
    }
}
