use super::{EnvironmentSpec, LppError, Site};

/// Finite set of sites given row by row as column intervals.
///
/// Sites are stored row-major (rows increasing, columns increasing), which is
/// a topological order for up-right paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Region {
    row_lo: i64,
    spans: Vec<(i64, i64)>,
    offsets: Vec<usize>,
    len: usize,
}

impl Region {
    /// `spans[k]` is the inclusive column range of row `row_lo + k`; rows with
    /// `lo > hi` are empty.
    pub fn from_spans(row_lo: i64, spans: Vec<(i64, i64)>) -> Self {
        let mut offsets = Vec::with_capacity(spans.len());
        let mut len = 0usize;
        for &(lo, hi) in &spans {
            offsets.push(len);
            if hi >= lo {
                len += (hi - lo + 1) as usize;
            }
        }
        Region { row_lo, spans, offsets, len }
    }

    /// All sites `lo <= x <= hi` componentwise.
    pub fn rectangle(lo: Site, hi: Site) -> Self {
        let rows = (hi.1 - lo.1 + 1).max(0) as usize;
        Region::from_spans(lo.1, vec![(lo.0, hi.0); rows])
    }

    /// Support of a strip spec in rows `row_lo..=row_hi`.
    pub fn support_rows(spec: &EnvironmentSpec, row_lo: i64, row_hi: i64) -> Result<Self, LppError> {
        if spec.width().is_none() {
            return Err(LppError::NotStrip);
        }
        let spans = (row_lo..=row_hi)
            .map(|r| spec.row_span(r).unwrap_or((1, 0)))
            .collect::<Vec<_>>();
        Ok(Region::from_spans(row_lo, spans))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn row_lo(&self) -> i64 {
        self.row_lo
    }

    pub fn row_hi(&self) -> i64 {
        self.row_lo + self.spans.len() as i64 - 1
    }

    pub fn span(&self, row: i64) -> Option<(i64, i64)> {
        let k = row - self.row_lo;
        if k < 0 || k as usize >= self.spans.len() {
            return None;
        }
        let s = self.spans[k as usize];
        (s.1 >= s.0).then_some(s)
    }

    #[inline]
    pub fn index(&self, x: Site) -> Option<usize> {
        let k = x.1 - self.row_lo;
        if k < 0 || k as usize >= self.spans.len() {
            return None;
        }
        let (lo, hi) = self.spans[k as usize];
        if x.0 < lo || x.0 > hi {
            return None;
        }
        Some(self.offsets[k as usize] + (x.0 - lo) as usize)
    }

    pub fn contains(&self, x: Site) -> bool {
        self.index(x).is_some()
    }

    /// Sites in storage order.
    pub fn iter(&self) -> impl Iterator<Item = Site> + '_ {
        self.spans.iter().enumerate().flat_map(move |(k, &(lo, hi))| {
            let r = self.row_lo + k as i64;
            (lo..=hi).map(move |c| (c, r))
        })
    }

    /// Site at storage index `i`.
    pub fn site(&self, i: usize) -> Site {
        // an empty row shares its offset with the next row, so the last
        // row with offset <= i is nonempty
        let k = self.offsets.partition_point(|&o| o <= i) - 1;
        (self.spans[k].0 + (i - self.offsets[k]) as i64, self.row_lo + k as i64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indices_follow_iteration_order() {
        let r = Region::from_spans(-1, vec![(0, 2), (1, 0), (3, 5), (4, 4)]);
        for (i, x) in r.iter().enumerate() {
            assert_eq!(r.index(x), Some(i));
            assert_eq!(r.site(i), x);
        }
        assert_eq!(r.len(), 7);
        assert!(!r.contains((0, 0)));
    }

    #[test]
    fn rectangle_size() {
        let r = Region::rectangle((1, 1), (3, 4));
        assert_eq!(r.len(), 12);
        assert_eq!(r.row_hi(), 4);
    }
}
