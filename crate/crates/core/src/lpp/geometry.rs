use super::{passage_times, LppError, Region, Site, Source, WeightField};

/// Supported sites of the width-`width` strip with `x1 + x2 = n`, ordered by
/// increasing `x1 - x2` (diagonal side first).
pub fn anti_diagonal(width: usize, n: i64) -> Result<Vec<Site>, LppError> {
    let w = width as i64;
    if n < w {
        return Err(LppError::BelowStripWidth(n));
    }
    Ok((0..=w).filter(|d| (n - d) % 2 == 0).map(|d| ((n + d) / 2, (n - d) / 2)).collect())
}

/// `R_n^m`: the part of the strip between `L_n` and `L_{n+m-1}`.
///
/// Corners run counter-clockwise: `a1`, `a2` on `L_n` (diagonal side first),
/// `a3`, `a4` on `L_{n+m-1}` (boundary side first).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rect {
    pub width: usize,
    pub n: i64,
    pub m: i64,
    pub a1: Site,
    pub a2: Site,
    pub a3: Site,
    pub a4: Site,
}

pub fn rectangle(width: usize, n: i64, m: i64) -> Result<Rect, LppError> {
    if m < 1 {
        return Err(LppError::BadSpec);
    }
    let lo = anti_diagonal(width, n)?;
    let hi = anti_diagonal(width, n + m - 1)?;
    Ok(Rect {
        width,
        n,
        m,
        a1: lo[0],
        a2: *lo.last().unwrap(),
        a3: *hi.last().unwrap(),
        a4: hi[0],
    })
}

impl Rect {
    pub fn contains(&self, x: Site) -> bool {
        let s = x.0 + x.1;
        let d = x.0 - x.1;
        s >= self.n && s < self.n + self.m && d >= 0 && d <= self.width as i64
    }

    /// The rectangle as a DP region.
    pub fn region(&self) -> Region {
        let (row_lo, row_hi) = (self.a2.1, self.a4.1);
        let w = self.width as i64;
        let spans = (row_lo..=row_hi)
            .map(|r| {
                let lo = r.max(self.n - r);
                let hi = (r + w).min(self.n + self.m - 1 - r);
                (lo, hi)
            })
            .collect();
        Region::from_spans(row_lo, spans)
    }

    pub fn corners(&self) -> [Site; 4] {
        [self.a1, self.a2, self.a3, self.a4]
    }

    /// Diagonal side `x1 = x2`.
    pub fn on_upper(&self, x: Site) -> bool {
        self.contains(x) && x.0 == x.1
    }

    /// Boundary side `x1 - x2 = width`.
    pub fn on_lower(&self, x: Site) -> bool {
        self.contains(x) && x.0 - x.1 == self.width as i64
    }
}

/// Whether the corner geodesics `pi(a1, a4)` and `pi(a2, a3)` share a site.
pub fn coalescence_check(field: &WeightField, rect: &Rect) -> Result<bool, LppError> {
    let upper = passage_times(field, Source::point(rect.a1))?.geodesic(rect.a4)?;
    let lower = passage_times(field, Source::point(rect.a2))?.geodesic(rect.a3)?;
    Ok(upper.intersects(&lower))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lpp::EnvironmentSpec;

    #[test]
    fn diagonal_count_and_support() {
        let spec = EnvironmentSpec::strip(0.5, 0.5, 5).unwrap();
        for n in [5, 6, 12, 13] {
            let l = anti_diagonal(5, n).unwrap();
            let brute: Vec<Site> = (-20..40)
                .flat_map(|a| (-20..40).map(move |b| (a, b)))
                .filter(|x| x.0 + x.1 == n && spec.in_support(*x))
                .collect();
            assert_eq!(l.len(), brute.len());
            assert_eq!(l.len() as i64, (n + 5).div_euclid(2) - (n + 1).div_euclid(2) + 1);
            assert!(l.iter().all(|x| spec.in_support(*x)));
        }
        assert!(anti_diagonal(5, 4).is_err());
    }

    #[test]
    fn rect_region_matches_contains() {
        let r = rectangle(4, 6, 5).unwrap();
        let region = r.region();
        let brute = (-5..20).flat_map(|a| (-5..20).map(move |b| (a, b))).filter(|&x| r.contains(x)).count();
        assert_eq!(region.len(), brute);
        assert!(region.iter().all(|x| r.contains(x)));
        for a in r.corners() {
            assert!(region.contains(a));
        }
        assert_eq!((r.a1, r.a2, r.a3, r.a4), ((3, 3), (5, 1), (7, 3), (5, 5)));
    }

    #[test]
    fn degenerate_rect_coalesces() {
        let spec = EnvironmentSpec::strip(0.5, 0.5, 1).unwrap();
        let r = rectangle(1, 1, 1).unwrap();
        assert_eq!(r.a1, r.a2);
        let f = WeightField::sample(spec, r.region(), 0);
        assert!(coalescence_check(&f, &r).unwrap());
    }
}
