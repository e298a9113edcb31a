use super::{EnvironmentSpec, LppError, Region, Site, WeightField};

/// Largest grid handled by exhaustive path enumeration.
pub const MAX_GRID_SITES: usize = 25;

/// Every up-right path from `x` to `y` as a site bitmask with its weight.
fn paths(field: &WeightField, x: Site, y: Site) -> Result<Vec<(u32, f64)>, LppError> {
    let region = field.region();
    let ix = region.index(x).ok_or(LppError::OutsideRegion(x))?;
    region.index(y).ok_or(LppError::OutsideRegion(y))?;
    let mut out = Vec::new();
    let mut stack = vec![(x, 1u32 << ix, field.values()[ix])];
    while let Some((cur, mask, w)) = stack.pop() {
        if cur == y {
            out.push((mask, w));
            continue;
        }
        for next in [(cur.0 + 1, cur.1), (cur.0, cur.1 + 1)] {
            if next.0 > y.0 || next.1 > y.1 {
                continue;
            }
            if let Some(i) = region.index(next) {
                stack.push((next, mask | (1 << i), w + field.values()[i]));
            }
        }
    }
    Ok(out)
}

fn check_grid(field: &WeightField) -> Result<(), LppError> {
    if field.region().len() > MAX_GRID_SITES {
        return Err(LppError::GridTooLarge(field.region().len()));
    }
    Ok(())
}

/// `A o B`: disjoint paths `x -> y` of weight `>= t` and `x2 -> y2` of
/// weight `>= t2` exist.
pub fn disjoint_occurrence(
    field: &WeightField,
    (x, y, t): (Site, Site, f64),
    (x2, y2, t2): (Site, Site, f64),
) -> Result<bool, LppError> {
    check_grid(field)?;
    let a: Vec<u32> = paths(field, x, y)?.into_iter().filter(|p| p.1 >= t).map(|p| p.0).collect();
    let b: Vec<u32> = paths(field, x2, y2)?.into_iter().filter(|p| p.1 >= t2).map(|p| p.0).collect();
    Ok(a.iter().any(|&m| b.iter().any(|&m2| m & m2 == 0)))
}

/// Best path weight from `x` to `y` by enumeration.
pub fn max_path_weight(field: &WeightField, x: Site, y: Site) -> Result<Option<f64>, LppError> {
    check_grid(field)?;
    Ok(paths(field, x, y)?.into_iter().map(|p| p.1).reduce(f64::max))
}

/// Monte Carlo frequencies of `A o B`, `A` and `B` over seeds `0..samples`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BkrEstimate {
    pub both: f64,
    pub a: f64,
    pub b: f64,
    pub samples: usize,
}

impl BkrEstimate {
    /// Standard error of `P(A o B) - P(A) P(B)` under independence.
    pub fn std_err(&self) -> f64 {
        let n = self.samples as f64;
        let v1 = self.both * (1.0 - self.both) / n;
        let v2 = (self.b * self.b * self.a * (1.0 - self.a) + self.a * self.a * self.b * (1.0 - self.b)) / n;
        (v1 + v2).sqrt()
    }
}

pub fn bkr_probe(
    spec: &EnvironmentSpec,
    grid: Region,
    a: (Site, Site, f64),
    b: (Site, Site, f64),
    seed: u64,
    samples: usize,
) -> Result<BkrEstimate, LppError> {
    let (mut both, mut na, mut nb) = (0usize, 0usize, 0usize);
    for s in 0..samples as u64 {
        let f = WeightField::sample(*spec, grid.clone(), crate::rng::derive_seed(seed, s, 0));
        let ga = max_path_weight(&f, a.0, a.1)?.is_some_and(|g| g >= a.2);
        let gb = max_path_weight(&f, b.0, b.1)?.is_some_and(|g| g >= b.2);
        na += ga as usize;
        nb += gb as usize;
        if ga && gb {
            both += disjoint_occurrence(&f, a, b)? as usize;
        }
    }
    let n = samples.max(1) as f64;
    Ok(BkrEstimate { both: both as f64 / n, a: na as f64 / n, b: nb as f64 / n, samples })
}
