use super::{LatticePath, LppError, Rect};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PathClass {
    /// Touches the strip sides at most at its endpoints.
    Pi1,
    /// Runs from one strip side to the other.
    Pi2,
    /// Starts and ends on the same side without touching the other one.
    Pi3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    Upper,
    Lower,
}

/// Splits `path` into consecutive segments classified by how they meet the
/// sides `R+` (diagonal) and `R-` (`x1 - x2 = width`) of `rect`.
///
/// Consecutive segments share their junction site. Degenerate one-site
/// segments are dropped.
pub fn decompose_path(path: &LatticePath, rect: &Rect) -> Result<Vec<(LatticePath, PathClass)>, LppError> {
    let pts = path.points();
    if let Some(&x) = pts.iter().find(|&&x| !rect.contains(x)) {
        return Err(LppError::OutsideRegion(x));
    }
    let side = |i: usize| {
        let x = pts[i];
        if rect.on_upper(x) {
            Some(Side::Upper)
        } else if rect.on_lower(x) {
            Some(Side::Lower)
        } else {
            None
        }
    };
    let seg = |a: usize, b: usize| LatticePath::new(pts[a..=b].to_vec()).unwrap();
    let last = pts.len() - 1;
    let mut out = Vec::new();
    let mut s = 0usize;
    while s < last {
        let touches: Vec<usize> = (s..=last).filter(|&i| side(i).is_some()).collect();
        let Some(&i_min) = touches.first() else {
            out.push((seg(s, last), PathClass::Pi1));
            break;
        };
        if i_min != s {
            out.push((seg(s, i_min), PathClass::Pi1));
            s = i_min;
            continue;
        }
        if touches.len() == 1 {
            out.push((seg(s, last), PathClass::Pi1));
            break;
        }
        let own = side(s).unwrap();
        let j = touches.iter().copied().find(|&i| side(i) != Some(own));
        let k = touches.iter().copied().filter(|&i| j.is_none_or(|j| i < j)).max().unwrap();
        if k > s {
            out.push((seg(s, k), PathClass::Pi3));
        }
        match j {
            Some(j) => {
                out.push((seg(k, j), PathClass::Pi2));
                s = j;
            }
            None => s = k,
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lpp::rectangle;

    fn join(segs: &[(LatticePath, PathClass)]) -> Vec<(i64, i64)> {
        let mut v: Vec<(i64, i64)> = Vec::new();
        for (p, _) in segs {
            let skip = usize::from(v.last() == Some(&p.start()));
            v.extend_from_slice(&p.points()[skip..]);
        }
        v
    }

    #[test]
    fn interior_path_is_one_segment() {
        let r = rectangle(4, 4, 6).unwrap();
        let p = LatticePath::new(vec![(3, 1), (4, 1), (4, 2), (5, 2)]).unwrap();
        let d = decompose_path(&p, &r).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].1, PathClass::Pi1);
    }

    #[test]
    fn diagonal_then_cross() {
        let r = rectangle(2, 4, 8).unwrap();
        // (2,2) (3,2) (3,3) on the diagonal, then down to (5,3) on the lower side
        let p = LatticePath::new(vec![(2, 2), (3, 2), (3, 3), (4, 3), (5, 3), (5, 4)]).unwrap();
        let d = decompose_path(&p, &r).unwrap();
        let classes: Vec<PathClass> = d.iter().map(|s| s.1).collect();
        assert_eq!(classes, vec![PathClass::Pi3, PathClass::Pi2, PathClass::Pi1]);
        assert_eq!(join(&d), p.points());
    }
}
