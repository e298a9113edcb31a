//! Colourings, competition interfaces and second class particles.

use std::fmt::Write as _;

use crate::lpp::{
    anti_diagonal, passage_times, semi_infinite_geodesic_in, weights_from_trajectory, EnvironmentSpec, GrowthInterface,
    LppError, PassageField, Region, Site, Source, WeightField, WeightSource, DEPTH_CAP,
};
use crate::tasep::{canonical_couple, disagreement, simulate, Configuration, DisagreementConfig, EventKind, Params, TasepError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CompetitionError {
    #[error("no corner at m = {0}: need an empty site m followed by a particle at m + 1, 1 <= m < n")]
    NoCorner(usize),
    #[error("interface left the coloured region")]
    OutOfRegion,
    #[error("colouring and argmin recursions disagree at step {0}")]
    RecursionMismatch(usize),
    #[error("colouring disagrees with the passage-time comparison at {0:?}")]
    ColorMismatch(Site),
    #[error("configuration needs exactly one second class particle")]
    NotSingleSecondClass,
    #[error(transparent)]
    Lpp(#[from] LppError),
    #[error(transparent)]
    Tasep(#[from] TasepError),
}

/// Relative tolerance for event times rebuilt from read-back weights.
pub const TIME_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Color {
    Plus,
    Minus,
}

/// Corners `m` of a configuration: `eta(m) = 0`, `eta(m + 1) = 1`.
pub fn corners(config: &Configuration) -> Vec<usize> {
    (1..config.len()).filter(|&m| config.get(m) == 0 && config.get(m + 1) == 1).collect()
}

/// Split of the strip above `gamma_0` into sites won by
/// `gamma_+ = {gamma^0, ..., gamma^(m-1)}` and by the rest of the interface.
///
/// Colours follow the geodesic tree of `G(gamma_0, .)`: a site is plus when
/// its geodesic starts in `gamma_+` or runs through the corner cell
/// `gamma^m + e2`. Off exact ties this is the comparison of
/// `G(gamma_+, x)` with `G(gamma_-, x)`.
#[derive(Clone, Debug)]
pub struct Coloring {
    pub m: usize,
    pub width: usize,
    pf: PassageField,
    colors: Vec<Option<Color>>,
    /// Sites whose comparison is an exact tie, resolved by the tree.
    pub ties: usize,
}

impl Coloring {
    /// Colours every cell of `field` above the interface of `config`.
    pub fn new(field: &WeightField, config: &Configuration, m: usize) -> Result<Self, CompetitionError> {
        if !corners(config).contains(&m) {
            return Err(CompetitionError::NoCorner(m));
        }
        let gamma = GrowthInterface::from_config(config);
        let corner = {
            let g = gamma.points()[m];
            (g.0, g.1 + 1)
        };
        let pf = passage_times(field, Source::interface(gamma.clone()))?;
        let region = pf.region().clone();
        let mut colors = vec![None; region.len()];
        for (i, x) in region.iter().enumerate() {
            if gamma.position(x).is_some() || !pf.is_reachable(x) {
                continue;
            }
            colors[i] = Some(if x == corner {
                Color::Plus
            } else {
                match pf.predecessor(x) {
                    Some(p) => match gamma.position(p) {
                        Some(k) => if k < m { Color::Plus } else { Color::Minus },
                        None => colors[region.index(p).unwrap()].unwrap(),
                    },
                    None => unreachable!("cell without predecessor"),
                }
            });
        }
        let plus = passage_times(field, Source::interface_part(gamma.clone(), 0..m))?;
        let minus = passage_times(field, Source::interface_part(gamma.clone(), m..gamma.points().len()))?;
        let mut ties = 0;
        for (i, x) in region.iter().enumerate() {
            let Some(c) = colors[i] else { continue };
            let (gp, gm) = (plus.get(x), minus.get(x));
            let strict = match (gp, gm) {
                (Some(a), Some(b)) if a > b => Some(Color::Plus),
                (Some(a), Some(b)) if a < b => Some(Color::Minus),
                (Some(_), None) => Some(Color::Plus),
                (None, Some(_)) => Some(Color::Minus),
                _ => None,
            };
            match strict {
                None => ties += 1,
                Some(s) if s == c => {}
                // at m = 1 the corner cell is only reachable from gamma_-
                Some(_) if m == 1 && in_subtree(&pf, x, corner) => ties += 1,
                Some(_) => return Err(CompetitionError::ColorMismatch(x)),
            }
        }
        Ok(Coloring { m, width: config.len(), pf, colors, ties })
    }

    pub fn passage(&self) -> &PassageField {
        &self.pf
    }

    pub fn color(&self, x: Site) -> Option<Color> {
        self.pf.region().index(x).and_then(|i| self.colors[i])
    }

    /// Number of plus and minus sites.
    pub fn counts(&self) -> (usize, usize) {
        let plus = self.colors.iter().filter(|c| **c == Some(Color::Plus)).count();
        let minus = self.colors.iter().filter(|c| **c == Some(Color::Minus)).count();
        (plus, minus)
    }

    /// `# coloring x1 x2 color` header, one row per coloured site.
    pub fn dump(&self) -> String {
        let mut s = String::from("# coloring x1 x2 color\n");
        for (x, c) in self.pf.region().iter().zip(&self.colors) {
            if let Some(c) = c {
                let tag = if *c == Color::Plus { "plus" } else { "minus" };
                let _ = writeln!(s, "{} {} {}", x.0, x.1, tag);
            }
        }
        s
    }
}

fn in_subtree(pf: &PassageField, mut x: Site, root: Site) -> bool {
    loop {
        if x == root {
            return true;
        }
        match pf.predecessor(x) {
            Some(p) => x = p,
            None => return false,
        }
    }
}

/// Whether `L_k` is entirely plus or entirely minus.
pub fn monochromatic_diagonal(coloring: &Coloring, k: i64) -> Result<bool, CompetitionError> {
    let sites = anti_diagonal(coloring.width, k)?;
    let mut seen = None;
    for x in sites {
        let c = coloring.color(x).ok_or(LppError::OutsideRegion(x))?;
        if seen.is_some_and(|s| s != c) {
            return Ok(false);
        }
        seen = Some(c);
    }
    Ok(true)
}

/// Corner geodesics of `R_n^k` against the colour of `L_{n+k}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoalescenceProbe {
    pub m: usize,
    pub coalesced: bool,
    pub monochromatic: bool,
}

impl CoalescenceProbe {
    /// Coalesced corner geodesics with a two-coloured `L_{n+k}`.
    pub fn counterexample(&self) -> bool {
        self.coalesced && !self.monochromatic
    }
}

/// Random initial configuration with a corner on the width-`width` strip at
/// `alpha = beta = 1/2`; checks whether `pi(a1, a4)` meets `pi(a2, a3)` in
/// `R_n^k` and whether `L_{n+k}` is monochromatic.
pub fn coalescence_probe(width: usize, n: i64, k: i64, seed: u64) -> Result<CoalescenceProbe, CompetitionError> {
    let mut config = Configuration::random(width, seed);
    if corners(&config).is_empty() {
        let mut bits = config.bits().to_vec();
        if width >= 2 {
            bits[0] = 0;
            bits[1] = 1;
        }
        config = Configuration::new(bits)?;
    }
    let cs = corners(&config);
    let m = *cs.get((seed % cs.len().max(1) as u64) as usize).ok_or(CompetitionError::NoCorner(0))?;
    let spec = EnvironmentSpec::strip(0.5, 0.5, width)?;
    let lo = -(config.particles() as i64);
    let field = WeightField::sample(spec, Region::support_rows(&spec, lo, (n + k) / 2 + 1)?, seed);
    let rect = crate::lpp::rectangle(width, n, k)?;
    let coalesced = crate::lpp::coalescence_check(&field, &rect)?;
    let coloring = Coloring::new(&field, &config, m)?;
    let monochromatic = monochromatic_diagonal(&coloring, n + k)?;
    Ok(CoalescenceProbe { m, coalesced, monochromatic })
}

/// Competition interface `phi_1 = gamma^m, phi_2, ...`; stops once it reaches
/// a side of the strip.
#[derive(Clone, Debug, PartialEq)]
pub struct InterfacePath {
    pub sites: Vec<Site>,
    pub absorbed: bool,
}

impl InterfacePath {
    /// Displacement `d(phi_n) - d(phi_1)`, with `d = x1 - x2`.
    pub fn displacement(&self, n: usize) -> i64 {
        let (a, b) = (self.sites[n], self.sites[0]);
        (a.0 - a.1) - (b.0 - b.1)
    }
}

/// Runs both recursions for at most `steps` steps: argmin of
/// `G(phi + e2)`, `G(phi + e1)`, and the colour of `phi + (1,1)` (plus steps
/// right, minus steps up). They must agree at every step.
pub fn competition_interface(coloring: &Coloring, steps: usize) -> Result<InterfacePath, CompetitionError> {
    let gamma = coloring.pf.source().gamma().ok_or(LppError::NotInterfaceSource)?;
    let w = coloring.width as i64;
    let mut phi = gamma.points()[coloring.m];
    let mut sites = vec![phi];
    for step in 1..=steps {
        phi = competition_interface_step(coloring, phi).map_err(|e| match e {
            CompetitionError::RecursionMismatch(_) => CompetitionError::RecursionMismatch(step),
            e => e,
        })?;
        sites.push(phi);
        let d = phi.0 - phi.1;
        if d == 0 || d == w {
            return Ok(InterfacePath { sites, absorbed: true });
        }
    }
    Ok(InterfacePath { sites, absorbed: false })
}

/// Configuration on `n + 1` sites with the second class particle at `x`
/// replaced by the pair `(0, 1)` at `x, x + 1`.
pub fn star_pair_config(xi: &DisagreementConfig) -> Result<(Configuration, usize), CompetitionError> {
    let twos = xi.second_class_sites();
    let [x] = twos[..] else { return Err(CompetitionError::NotSingleSecondClass) };
    let mut bits = Vec::with_capacity(xi.vals.len() + 1);
    for (i, &v) in xi.vals.iter().enumerate() {
        if i + 1 == x {
            bits.extend([0, 1]);
        } else {
            bits.push(v);
        }
    }
    Ok((Configuration::new(bits)?, x))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SecondClassReport {
    pub start: usize,
    /// Events of the pair system compared against the interface.
    pub steps_checked: usize,
    pub identity_holds: bool,
    /// Exit time of the second class particle, if before the horizon.
    pub exit_time: Option<f64>,
    /// `G(gamma_0, phi_k)` at the absorbing interface site.
    pub interface_exit: Option<f64>,
    pub monochromatic_checked: usize,
    pub monochromatic_violations: usize,
}

/// Second class particle against the competition interface, both driven by
/// one clock stream: the pair system on `n + 1` sites is simulated, its
/// weights are read back, and the interface of those weights must track the
/// pair exactly.
pub fn second_class_vs_interface(
    xi0: &DisagreementConfig,
    params: &Params,
    t_end: f64,
    seed: u64,
) -> Result<SecondClassReport, CompetitionError> {
    let (eta01, x) = star_pair_config(xi0)?;
    let n1 = params.n + 1;
    let p1 = Params::new(n1, params.alpha, params.beta)?;
    let traj = simulate(&eta01, &p1, t_end, seed)?;
    let weights = weights_from_trajectory(&traj, seed)?;

    // pair position and exit from the trajectory
    let mut pos = x;
    let mut pair_path = vec![(0.0, x)];
    let mut exit_time = None;
    for e in &traj.events {
        let moved = match e.kind {
            EventKind::Swap(s) if s == pos + 1 => Some(pos + 1),
            EventKind::Swap(s) if s + 1 == pos => Some(pos - 1),
            EventKind::Exit if pos == n1 - 1 => Some(n1),
            EventKind::Entry if pos == 1 => Some(0),
            _ => None,
        };
        if let Some(p) = moved {
            pos = p;
            pair_path.push((e.time, p));
            if p == 0 || p == n1 {
                exit_time = Some(e.time);
                break;
            }
        }
    }

    let spec = EnvironmentSpec::strip(params.alpha, params.beta, n1)?;
    let entries = traj.events.iter().filter(|e| e.kind == EventKind::Entry).count() as i64;
    let lo = -(eta01.particles() as i64);
    let region = Region::support_rows(&spec, lo, entries + 2)?;
    let field = WeightField::from_source(&weights, region);
    let coloring = Coloring::new(&field, &eta01, x)?;
    let pf = coloring.passage();

    // interface sites with their passage times, up to the horizon
    let mut phi = eta01_corner(&coloring);
    let mut interface = vec![(0.0, (phi.0 - phi.1) as usize)];
    let mut interface_exit = None;
    loop {
        let next = competition_interface_step(&coloring, phi)?;
        let g = pf.get(next).unwrap();
        if g > t_end {
            break;
        }
        let d = next.0 - next.1;
        interface.push((g, d as usize));
        phi = next;
        if d == 0 || d == n1 as i64 {
            interface_exit = Some(g);
            break;
        }
    }
    // weights read back from clock times carry one rounding each, so times
    // match to rounding while positions match exactly
    let close = |a: f64, b: f64| (a - b).abs() <= TIME_TOL * a.abs().max(1.0);
    let identity = interface.len() == pair_path.len()
        && interface.iter().zip(&pair_path).all(|(a, b)| a.1 == b.1 && close(a.0, b.0))
        && match (interface_exit, exit_time) {
            (Some(a), Some(b)) => close(a, b),
            (None, None) => true,
            _ => false,
        };
    let steps = interface.len().min(pair_path.len());

    let (mut mono_checked, mut mono_bad) = (0, 0);
    for kk in (n1 as i64 + 1)..=(entries + 2) {
        let Ok(true) = monochromatic_diagonal(&coloring, kk) else { continue };
        let sites = anti_diagonal(n1, kk)?;
        let Some(g) = pf.max_over(&sites) else { continue };
        mono_checked += 1;
        let ok = match exit_time {
            Some(tx) => tx <= g + TIME_TOL * g.max(1.0),
            None => g > t_end,
        };
        if !ok {
            mono_bad += 1;
        }
    }
    Ok(SecondClassReport {
        start: x,
        steps_checked: steps,
        identity_holds: identity,
        exit_time,
        interface_exit,
        monochromatic_checked: mono_checked,
        monochromatic_violations: mono_bad,
    })
}

fn eta01_corner(c: &Coloring) -> Site {
    c.pf.source().gamma().unwrap().points()[c.m]
}

fn competition_interface_step(coloring: &Coloring, phi: Site) -> Result<Site, CompetitionError> {
    let pf = &coloring.pf;
    let up = (phi.0, phi.1 + 1);
    let right = (phi.0 + 1, phi.1);
    let (Some(gu), Some(gr)) = (pf.get(up), pf.get(right)) else {
        return Err(CompetitionError::OutOfRegion);
    };
    let by_argmin = if gu < gr { up } else { right };
    let by_color = match coloring.color((phi.0 + 1, phi.1 + 1)).ok_or(CompetitionError::OutOfRegion)? {
        Color::Plus => right,
        Color::Minus => up,
    };
    if by_argmin != by_color {
        return Err(CompetitionError::RecursionMismatch(0));
    }
    Ok(by_argmin)
}

#[derive(Clone, Debug, PartialEq)]
pub struct TagReport {
    /// Diagonal site `(j, j)` and boundary site `(j' + n, j')` on the
    /// geodesic, with the passage time to the latter.
    pub hit: Option<(Site, Site, f64)>,
    pub fired: bool,
    pub second_class_at_t: usize,
    pub tags_checked: usize,
    pub tag_violations: usize,
}

/// Tagging check at the triple point for the all-one versus all-zero
/// coupling on `n` sites up to time `t`.
pub fn triple_point_tag_check(n: usize, t: f64, seed: u64) -> Result<TagReport, CompetitionError> {
    let p = Params::triple_point(n);
    let (eta, zeta) = canonical_couple(&Configuration::ones(n), &Configuration::zeros(n), &p, &p, t, seed)?;
    let xi = disagreement(&eta, &zeta)?;
    let second = xi.at(t).second_class();
    let weights = weights_from_trajectory(&eta, seed)?;
    let spec = EnvironmentSpec::strip(0.5, 0.5, n)?;
    let start = (1, 1 - n as i64);
    let w = n as i64;

    // extend the certified prefix until a boundary return is found or the
    // passage time exceeds t
    let mut target = 4 * w + 4;
    let (path, cum) = loop {
        let semi = semi_infinite_geodesic_in(&weights, &spec, start, target, DEPTH_CAP)?;
        let pts = semi.path.points().to_vec();
        let cum: Vec<f64> = pts
            .iter()
            .scan(0.0, |acc, &x| {
                *acc += weights.weight(x);
                Some(*acc)
            })
            .collect();
        if *cum.last().unwrap() >= t || find_hit(&pts, w).is_some() {
            break (pts, cum);
        }
        target *= 2;
    };
    let hit = find_hit(&path, w).map(|(a, b)| (path[a], path[b], cum[b]));
    let fired = hit.is_some_and(|h| h.2 < t);
    let mut report = TagReport { hit, fired, second_class_at_t: second, tags_checked: 0, tag_violations: 0 };
    if !fired {
        return Ok(report);
    }
    let (diag, bnd, _) = hit.unwrap();
    // t_i: last passage time of the geodesic in row j + i - 1
    let rows: Vec<(i64, f64)> = (diag.1..=bnd.1)
        .map(|r| {
            let last = path.iter().zip(&cum).filter(|(x, _)| x.1 == r).map(|(_, &g)| g).fold(f64::MIN, f64::max);
            (r, last)
        })
        .collect();
    let labels = crate::tasep::label_particles(&eta);
    let mut times: Vec<f64> = vec![0.0];
    times.extend(eta.events.iter().map(|e| e.time).filter(|&s| s < rows.last().unwrap().1));
    for s in times {
        let Some(&(label, _)) = rows.iter().find(|(_, ti)| s < *ti) else { continue };
        if let crate::tasep::LabelPos::At(l) = labels.position_at(label, s) {
            report.tags_checked += 1;
            if l < n && eta.state_at(s).get(l + 1) == 1 {
                report.tag_violations += 1;
            }
        }
    }
    Ok(report)
}

/// Indices of the first diagonal site `(j, j)`, `j > 1`, and of the first
/// boundary site `(j' + w, j')`, `j' > j`, after it.
fn find_hit(path: &[Site], w: i64) -> Option<(usize, usize)> {
    let a = path.iter().position(|x| x.0 == x.1 && x.1 > 1)?;
    let j = path[a].1;
    let b = path.iter().skip(a).position(|x| x.0 - x.1 == w && x.1 > j)? + a;
    Some((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field_for(config: &Configuration, seed: u64, rows: i64) -> WeightField {
        let spec = EnvironmentSpec::strip(0.5, 0.5, config.len()).unwrap();
        let lo = -(config.particles() as i64);
        WeightField::sample(spec, Region::support_rows(&spec, lo, rows).unwrap(), seed)
    }

    #[test]
    fn coalescence_forces_one_colour() {
        let mut hits = 0;
        for seed in 0..60 {
            let p = coalescence_probe(4, 4, 40, seed).unwrap();
            assert!(!p.counterexample(), "seed {seed}");
            hits += p.coalesced as usize;
        }
        assert!(hits > 20);
    }

    #[test]
    fn corner_detection() {
        let c: Configuration = "0101".parse().unwrap();
        assert_eq!(corners(&c), vec![1, 3]);
        assert!(corners(&"1100".parse().unwrap()).is_empty());
    }

    #[test]
    fn partition_and_recursions_agree() {
        let c: Configuration = "100110".parse().unwrap();
        for seed in 0..30 {
            let f = field_for(&c, seed, 200);
            for m in corners(&c) {
                let col = Coloring::new(&f, &c, m).unwrap();
                let (p, q) = col.counts();
                assert!(p + q > 0);
                let path = competition_interface(&col, 400).unwrap();
                assert!(path.absorbed);
            }
        }
    }

    #[test]
    fn colors_constant_after_absorption() {
        let c: Configuration = "0011".parse().unwrap();
        let f = field_for(&c, 4, 120);
        let col = Coloring::new(&f, &c, 2).unwrap();
        let path = competition_interface(&col, 400).unwrap();
        let last = *path.sites.last().unwrap();
        let k0 = last.0 + last.1 + 2;
        for k in k0..k0 + 20 {
            assert!(monochromatic_diagonal(&col, k).unwrap());
        }
    }

    #[test]
    fn second_class_identity_small() {
        let xi = DisagreementConfig { vals: vec![1, 0, 2, 1, 0] };
        for seed in 0..20 {
            let r = second_class_vs_interface(&xi, &Params::triple_point(5), 200.0, seed).unwrap();
            assert!(r.identity_holds, "{seed} {r:?}");
            assert_eq!(r.monochromatic_violations, 0);
        }
    }

    #[test]
    fn tag_check_fires_cleanly() {
        let mut fired = 0;
        for seed in 0..40 {
            let r = triple_point_tag_check(4, 40.0, seed).unwrap();
            if r.fired {
                fired += 1;
                assert_eq!(r.second_class_at_t, 0, "{seed}");
                assert_eq!(r.tag_violations, 0, "{seed}");
                assert!(r.tags_checked > 0);
            }
        }
        assert!(fired > 5, "{fired}");
    }

    #[test]
    fn tag_check_zero_time() {
        let r = triple_point_tag_check(4, 0.0, 1).unwrap();
        assert!(!r.fired);
    }
}
