use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;

use super::{LppError, Region, Site, WeightField, WeightSource};
use crate::tasep::Configuration;

/// Down-right path `gamma^0 = (0,0), ..., gamma^n` encoding a configuration:
/// step `i` is `+e1` for an empty site `i` and `-e2` for an occupied one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthInterface {
    points: Vec<Site>,
    lookup: HashMap<Site, usize>,
    row_min: i64,
    /// `thresholds[r - row_min - 1]`: least column above the path in row `r <= 0`.
    thresholds: Vec<i64>,
}

impl GrowthInterface {
    pub fn from_config(config: &Configuration) -> Self {
        let mut points = vec![(0i64, 0i64)];
        for &b in config.bits() {
            let (x1, x2) = *points.last().unwrap();
            points.push(if b == 0 { (x1 + 1, x2) } else { (x1, x2 - 1) });
        }
        Self::build(points)
    }

    pub fn from_points(points: Vec<Site>) -> Result<Self, LppError> {
        if points.first() != Some(&(0, 0)) {
            return Err(LppError::BadInterface);
        }
        for w in points.windows(2) {
            let d = (w[1].0 - w[0].0, w[1].1 - w[0].1);
            if d != (1, 0) && d != (0, -1) {
                return Err(LppError::BadInterface);
            }
        }
        Ok(Self::build(points))
    }

    fn build(points: Vec<Site>) -> Self {
        let lookup = points.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let row_min = points.last().unwrap().1;
        // rows row_min + 1 ..= 0; first point (in path order) with y2 <= r - 1
        let thresholds = (row_min + 1..=0)
            .map(|r| points.iter().find(|y| y.1 < r).unwrap().0 + 1)
            .collect();
        GrowthInterface { points, lookup, row_min, thresholds }
    }

    pub fn points(&self) -> &[Site] {
        &self.points
    }

    /// Number of steps, i.e. the segment length.
    pub fn width(&self) -> usize {
        self.points.len() - 1
    }

    pub fn position(&self, x: Site) -> Option<usize> {
        self.lookup.get(&x).copied()
    }

    /// Configuration read back from the steps.
    pub fn config(&self) -> Configuration {
        let bits = self.points.windows(2).map(|w| (w[1].1 < w[0].1) as u8).collect();
        Configuration::new(bits).unwrap()
    }

    /// Whether `x >= y + (1,1)` for some point `y` of the path.
    #[inline]
    pub fn is_above(&self, x: Site) -> bool {
        if x.1 >= 1 {
            return x.0 >= 1;
        }
        if x.1 <= self.row_min {
            return false;
        }
        x.0 >= self.thresholds[(x.1 - self.row_min - 1) as usize]
    }

    /// Lowest row holding a site above the path.
    pub fn first_row_above(&self) -> i64 {
        self.row_min + 1
    }
}

/// Source set of a passage-time computation.
///
/// For `Points` the source weights count. For `Interface` the interface
/// sites have passage time 0 and their weights do not count; only the sites
/// flagged in `active` act as sources, the others block paths.
#[derive(Clone, Debug, PartialEq)]
pub enum Source {
    Points(Vec<Site>),
    Interface { gamma: GrowthInterface, active: Vec<bool> },
}

impl Source {
    pub fn point(x: Site) -> Self {
        Source::Points(vec![x])
    }

    pub fn interface(gamma: GrowthInterface) -> Self {
        let active = vec![true; gamma.points().len()];
        Source::Interface { gamma, active }
    }

    /// Interface with only `gamma^i, i in range` acting as sources.
    pub fn interface_part(gamma: GrowthInterface, range: std::ops::Range<usize>) -> Self {
        let active = (0..gamma.points().len()).map(|i| range.contains(&i)).collect();
        Source::Interface { gamma, active }
    }

    pub fn gamma(&self) -> Option<&GrowthInterface> {
        match self {
            Source::Interface { gamma, .. } => Some(gamma),
            Source::Points(_) => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u8)]
enum Pred {
    Unreachable,
    Start,
    Left,
    Below,
}

/// Last-passage values over a region, with backtracking pointers.
#[derive(Clone, Debug)]
pub struct PassageField {
    region: Region,
    values: Vec<f64>,
    pred: Vec<Pred>,
    source: Source,
}

/// Last-passage times from `source` to every site of the field's region.
///
/// Paths stay inside the region. Ties between the two predecessors go to
/// `x - e1`.
pub fn passage_times(field: &WeightField, source: Source) -> Result<PassageField, LppError> {
    let region = field.region().clone();
    let w = field.values();
    let len = region.len();
    let mut values = vec![0.0f64; len];
    let mut pred = vec![Pred::Unreachable; len];

    let mut is_source = Vec::new();
    let (mut row_start, mut col_start) = (region.row_lo(), i64::MIN);
    match &source {
        Source::Points(pts) => {
            is_source = vec![false; len];
            for &p in pts {
                let i = region.index(p).ok_or(LppError::OutsideRegion(p))?;
                is_source[i] = true;
            }
            row_start = pts.iter().map(|p| p.1).min().unwrap_or(region.row_hi() + 1);
            col_start = pts.iter().map(|p| p.0).min().unwrap_or(i64::MAX);
        }
        Source::Interface { gamma, .. } => {
            row_start = row_start.max(gamma.row_min);
        }
    }

    let outside = |x: Site| -> Option<f64> {
        match &source {
            Source::Interface { gamma, active } => match gamma.position(x) {
                Some(i) if active[i] => Some(0.0),
                _ => None,
            },
            Source::Points(_) => None,
        }
    };

    for r in row_start..=region.row_hi() {
        let Some((lo, hi)) = region.span(r) else { continue };
        let below_span = region.span(r - 1);
        let base = region.index((lo, r)).unwrap();
        for c in lo.max(col_start)..=hi {
            let i = base + (c - lo) as usize;
            let x = (c, r);
            if let Source::Interface { gamma, active } = &source {
                if let Some(k) = gamma.position(x) {
                    if active[k] {
                        pred[i] = Pred::Start;
                    }
                    continue;
                }
                if !gamma.is_above(x) {
                    continue;
                }
            }
            let left = if c > lo {
                (pred[i - 1] != Pred::Unreachable).then(|| values[i - 1])
            } else {
                outside((c - 1, r))
            };
            let below = match below_span {
                Some((blo, bhi)) if c >= blo && c <= bhi => {
                    let j = region.index((c, r - 1)).unwrap();
                    (pred[j] != Pred::Unreachable).then(|| values[j])
                }
                _ => outside((c, r - 1)),
            };
            let best = match (left, below) {
                (Some(a), Some(b)) if a >= b => Some((a, Pred::Left)),
                (Some(_), Some(b)) => Some((b, Pred::Below)),
                (Some(a), None) => Some((a, Pred::Left)),
                (None, Some(b)) => Some((b, Pred::Below)),
                (None, None) => None,
            };
            match best {
                Some((v, p)) => {
                    values[i] = v + w[i];
                    pred[i] = p;
                }
                None if !is_source.is_empty() && is_source[i] => {
                    values[i] = w[i];
                    pred[i] = Pred::Start;
                }
                None => {}
            }
        }
    }
    Ok(PassageField { region, values, pred, source })
}

impl PassageField {
    pub fn region(&self) -> &Region {
        &self.region
    }

    pub fn source(&self) -> &Source {
        &self.source
    }

    /// `G(source, x)`; `None` when unreachable or outside the region. Active
    /// interface sites outside the region report 0.
    pub fn get(&self, x: Site) -> Option<f64> {
        match self.region.index(x) {
            Some(i) => (self.pred[i] != Pred::Unreachable).then(|| self.values[i]),
            None => match &self.source {
                Source::Interface { gamma, active } => match gamma.position(x) {
                    Some(k) if active[k] => Some(0.0),
                    _ => None,
                },
                Source::Points(_) => None,
            },
        }
    }

    /// Backtracking pointer at `x`: the maximising predecessor, `None` for
    /// source sites, unreachable sites and sites outside the region.
    pub fn predecessor(&self, x: Site) -> Option<Site> {
        match self.pred[self.region.index(x)?] {
            Pred::Left => Some((x.0 - 1, x.1)),
            Pred::Below => Some((x.0, x.1 - 1)),
            Pred::Start | Pred::Unreachable => None,
        }
    }

    pub fn is_reachable(&self, x: Site) -> bool {
        self.get(x).is_some()
    }

    /// Maximising path ending at `y`, backtracked through the stored
    /// predecessors. Interface-sourced paths start at their interface site.
    pub fn geodesic(&self, y: Site) -> Result<LatticePath, LppError> {
        let i = self.region.index(y).ok_or(LppError::OutsideRegion(y))?;
        if self.pred[i] == Pred::Unreachable {
            return Err(LppError::Unreachable(y));
        }
        let mut pts = vec![y];
        let mut cur = y;
        loop {
            let Some(i) = self.region.index(cur) else { break };
            cur = match self.pred[i] {
                Pred::Start => break,
                Pred::Left => (cur.0 - 1, cur.1),
                Pred::Below => (cur.0, cur.1 - 1),
                Pred::Unreachable => unreachable!("backtracking left the reachable set"),
            };
            pts.push(cur);
        }
        pts.reverse();
        Ok(LatticePath { points: pts })
    }

    /// `gamma_t`: sites with `G <= t < G(x + (1,1))`, for interface sources.
    pub fn growth_interface_at(&self, t: f64) -> Result<Vec<Site>, LppError> {
        let Source::Interface { gamma, .. } = &self.source else {
            return Err(LppError::NotInterfaceSource);
        };
        if let Some((lo, hi)) = self.region.span(self.region.row_hi()) {
            if (lo..=hi).any(|c| self.get((c, self.region.row_hi())).is_some_and(|g| g <= t)) {
                return Err(LppError::RegionTooSmall);
            }
        }
        let mut out: Vec<Site> = gamma
            .points()
            .iter()
            .copied()
            .chain(self.region.iter())
            .filter(|&x| {
                self.get(x).is_some_and(|g| g <= t)
                    && self.get((x.0 + 1, x.1 + 1)).is_none_or(|g| g > t)
            })
            .collect();
        out.sort_by_key(|x| (x.0 - x.1, x.0));
        out.dedup();
        Ok(out)
    }

    /// Largest value over a set, `None` if any site is unreachable.
    pub fn max_over(&self, sites: &[Site]) -> Option<f64> {
        sites.iter().map(|&x| self.get(x)).try_fold(f64::NEG_INFINITY, |m, v| v.map(|v| m.max(v)))
    }

    /// `# passage x1 x2 value` header, then one row per reachable site.
    pub fn dump(&self) -> String {
        let mut s = String::from("# passage x1 x2 value\n");
        for (k, x) in self.region.iter().enumerate() {
            if self.pred[k] != Pred::Unreachable {
                let _ = writeln!(s, "{} {} {}", x.0, x.1, self.values[k]);
            }
        }
        s
    }
}

/// Point-to-point geodesic inside the field's region.
pub fn geodesic(field: &WeightField, x: Site, y: Site) -> Result<LatticePath, LppError> {
    passage_times(field, Source::point(x))?.geodesic(y)
}

/// Up-right lattice path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePath {
    points: Vec<Site>,
}

impl LatticePath {
    pub fn new(points: Vec<Site>) -> Result<Self, LppError> {
        if points.is_empty() {
            return Err(LppError::BadPath);
        }
        for w in points.windows(2) {
            let d = (w[1].0 - w[0].0, w[1].1 - w[0].1);
            if d != (1, 0) && d != (0, 1) {
                return Err(LppError::BadPath);
            }
        }
        Ok(LatticePath { points })
    }

    pub fn points(&self) -> &[Site] {
        &self.points
    }

    pub fn start(&self) -> Site {
        self.points[0]
    }

    pub fn end(&self) -> Site {
        *self.points.last().unwrap()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, x: Site) -> bool {
        self.points.contains(&x)
    }

    pub fn intersects(&self, other: &LatticePath) -> bool {
        let set: HashSet<Site> = self.points.iter().copied().collect();
        other.points.iter().any(|x| set.contains(x))
    }

    /// Sum of weights along the path.
    pub fn weight<S: WeightSource + ?Sized>(&self, w: &S) -> f64 {
        self.points.iter().map(|&x| w.weight(x)).sum()
    }

    /// Prefix ending at the first point with `x1 + x2 = k`.
    pub fn prefix_through(&self, k: i64) -> Option<LatticePath> {
        let i = self.points.iter().position(|x| x.0 + x.1 == k)?;
        Some(LatticePath { points: self.points[..=i].to_vec() })
    }
}

/// `pi1` lies weakly above `pi2`: in every shared column, both the lowest and
/// the highest point of `pi1` are at least those of `pi2`.
pub fn paths_ordered(pi1: &LatticePath, pi2: &LatticePath) -> bool {
    fn columns(p: &LatticePath) -> BTreeMap<i64, (i64, i64)> {
        let mut m = BTreeMap::new();
        for &(c, r) in p.points() {
            let e = m.entry(c).or_insert((r, r));
            e.0 = e.0.min(r);
            e.1 = e.1.max(r);
        }
        m
    }
    let (a, b) = (columns(pi1), columns(pi2));
    a.iter().all(|(c, &(lo1, hi1))| b.get(c).is_none_or(|&(lo2, hi2)| lo1 >= lo2 && hi1 >= hi2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lpp::EnvironmentSpec;

    fn block() -> WeightField {
        let r = Region::rectangle((1, 1), (2, 2));
        // storage order: (1,1), (2,1), (1,2), (2,2)
        WeightField::from_vec(r, vec![1.0, 2.0, 3.0, 4.0])
    }

    #[test]
    fn two_by_two_block() {
        let pf = passage_times(&block(), Source::point((1, 1))).unwrap();
        assert_eq!(pf.get((2, 2)), Some(8.0));
        assert_eq!(pf.geodesic((2, 2)).unwrap().points(), &[(1, 1), (1, 2), (2, 2)]);
        assert_eq!(pf.get((1, 1)), Some(1.0));
        assert_eq!(geodesic(&block(), (1, 1), (1, 1)).unwrap().len(), 1);
    }

    #[test]
    fn unreachable_is_marked() {
        let pf = passage_times(&block(), Source::point((2, 1))).unwrap();
        assert_eq!(pf.get((1, 2)), None);
        assert!(matches!(pf.geodesic((1, 2)), Err(LppError::Unreachable(_))));
    }

    #[test]
    fn interface_examples() {
        let g = |s: &str| GrowthInterface::from_config(&s.parse().unwrap()).points().to_vec();
        assert_eq!(g("000"), vec![(0, 0), (1, 0), (2, 0), (3, 0)]);
        assert_eq!(g("11"), vec![(0, 0), (0, -1), (0, -2)]);
        assert_eq!(g("10"), vec![(0, 0), (0, -1), (1, -1)]);
    }

    #[test]
    fn above_matches_definition() {
        for s in ["0000", "1111", "0110", "1001", "10101"] {
            let gamma = GrowthInterface::from_config(&s.parse().unwrap());
            for x1 in -3..8 {
                for x2 in -7..4 {
                    let direct = gamma.points().iter().any(|y| x1 > y.0 && x2 > y.1);
                    assert_eq!(gamma.is_above((x1, x2)), direct, "{s} {x1} {x2}");
                }
            }
        }
    }

    #[test]
    fn first_entry_time_is_diagonal_weight() {
        let spec = EnvironmentSpec::strip(0.5, 0.5, 3).unwrap();
        let f = WeightField::sample(spec, Region::support_rows(&spec, 0, 6).unwrap(), 5);
        let gamma = GrowthInterface::from_config(&Configuration::zeros(3));
        let pf = passage_times(&f, Source::interface(gamma)).unwrap();
        assert_eq!(pf.get((1, 1)), f.get((1, 1)));
        assert_eq!(pf.get((0, 0)), Some(0.0));
        assert_eq!(pf.growth_interface_at(0.0).unwrap(), vec![(0, 0), (1, 0), (2, 0), (3, 0)]);
    }

    #[test]
    fn ordering_counterexample() {
        let a = LatticePath::new(vec![(0, 0), (0, 1), (1, 1), (2, 1)]).unwrap();
        let b = LatticePath::new(vec![(0, 0), (1, 0), (1, 1), (1, 2), (2, 2)]).unwrap();
        assert!(paths_ordered(&a, &a));
        assert!(!paths_ordered(&a, &b));
        assert!(paths_ordered(&b, &a) || !paths_ordered(&b, &a));
    }
}
