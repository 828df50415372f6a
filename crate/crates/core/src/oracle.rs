//! Brute-force reference answers by linear scan.

use crate::data::{Color, Dataset, Histogram, RangeQuery, Rect};
use crate::error::{Error, Result};

/// Everything the oracle knows about one query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleAnswer {
    pub colors: Vec<Color>,
    pub k: usize,
    pub histogram: Histogram,
}

/// Distinct colors of points in `q`, sorted.
pub fn oracle_colors(ds: &Dataset, q: &RangeQuery) -> Result<Vec<Color>> {
    q.check_dim(ds)?;
    Ok(colors_among(ds, 0..ds.m(), q))
}

/// Distinct colors among the points `ids` that lie in `q`.
pub fn colors_among(ds: &Dataset, ids: impl IntoIterator<Item = usize>, q: &RangeQuery) -> Vec<Color> {
    let mut seen = vec![false; ds.num_colors()];
    for i in ids {
        let p = ds.point(i);
        if q.contains(p) {
            seen[p.color.index()] = true;
        }
    }
    seen.iter().enumerate().filter(|e| *e.1).map(|(c, _)| Color(c as u32)).collect()
}

pub fn oracle_k(ds: &Dataset, q: &RangeQuery) -> Result<usize> {
    oracle_colors(ds, q).map(|c| c.len())
}

/// Per-color total weight of points in a rank-space rectangle.
pub fn oracle_type2(ds: &Dataset, r: &Rect) -> Result<Histogram> {
    if ds.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: ds.dim() });
    }
    let q = RangeQuery::Rect2(*r);
    Ok(Histogram::from_items(ds.points().iter().filter(|p| q.contains(p)).map(|p| (p.color, p.weight))))
}

pub fn oracle_answer(ds: &Dataset, q: &RangeQuery) -> Result<OracleAnswer> {
    q.check_dim(ds)?;
    let histogram = Histogram::from_items(ds.points().iter().filter(|p| q.contains(p)).map(|p| (p.color, p.weight)));
    let colors = histogram.colors();
    Ok(OracleAnswer { k: colors.len(), colors, histogram })
}

/// Colors with some point dominated by `corner` (rank space).
pub fn oracle_conflict_colors(ds: &Dataset, corner: [i64; 3]) -> Result<Vec<Color>> {
    if ds.dim() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, found: ds.dim() });
    }
    oracle_colors(ds, &RangeQuery::Dominance3(corner))
}
