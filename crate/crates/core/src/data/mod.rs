//! Colored point sets in rank space.
//!
//! Every structure in this crate works on a [`Dataset`]: the input points
//! with each coordinate replaced by its rank (ties broken by input index),
//! plus the original integer coordinates kept alongside for halfplane and
//! halfspace predicates, which are not rank-reduced.

mod histogram;
pub mod io;
mod query;
mod seed;

pub use histogram::{merge_histograms, Histogram};
pub use query::{Halfplane, Halfspace, RangeQuery, Rect, NEG_INF, POS_INF};
pub use seed::Seed;

use crate::error::{Error, Result};

/// Largest magnitude accepted for an original coordinate. Keeps every exact
/// predicate in the crate inside `i128`.
pub const COORD_LIMIT: i64 = 1 << 31;

/// A color (category) id. Ids of a valid dataset are dense in `0..m_c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Color(pub u32);

impl Color {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl std::fmt::Display for Color {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An input point before rank reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawPoint {
    pub coords: Vec<i64>,
    pub color: u32,
    pub weight: i64,
}

impl RawPoint {
    pub fn new(coords: &[i64], color: u32) -> Self {
        RawPoint { coords: coords.to_vec(), color, weight: 1 }
    }

    pub fn weighted(coords: &[i64], color: u32, weight: i64) -> Self {
        RawPoint { coords: coords.to_vec(), color, weight }
    }
}

/// A point after rank reduction.
///
/// `rank` holds 1-based ranks on the first `dim` axes (unused axes are 0);
/// `orig` holds the original coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ColoredPoint {
    pub rank: [i64; 3],
    pub orig: [i64; 3],
    pub color: Color,
    pub weight: u64,
}

impl ColoredPoint {
    pub fn xy(&self) -> [i64; 2] {
        [self.rank[0], self.rank[1]]
    }

    pub fn orig_xy(&self) -> [i64; 2] {
        [self.orig[0], self.orig[1]]
    }
}

/// Rank-space colored point set with a per-color index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dataset {
    dim: usize,
    points: Vec<ColoredPoint>,
    color_index: Vec<Vec<usize>>,
    /// Per axis, `(original value, input index)` sorted; entry `r - 1` is the
    /// point holding rank `r`.
    rank_maps: Vec<Vec<(i64, usize)>>,
    total_weight: u64,
}

impl Dataset {
    /// Replaces coordinates by 1-based ranks per axis, ties broken by input
    /// index, and builds the color index.
    pub fn reduce_to_rank_space(raw: &[RawPoint]) -> Result<Dataset> {
        let first = raw.first().ok_or(Error::EmptyInput)?;
        let dim = first.coords.len();
        if dim != 2 && dim != 3 {
            return Err(Error::UnsupportedDimension(dim));
        }
        for (index, p) in raw.iter().enumerate() {
            if p.coords.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: p.coords.len() });
            }
            if p.weight < 1 {
                return Err(Error::NonPositiveWeight { index });
            }
            if p.coords.iter().any(|c| c.abs() > COORD_LIMIT) {
                return Err(Error::CoordinateOutOfRange { index });
            }
        }

        let mut points: Vec<ColoredPoint> = raw
            .iter()
            .map(|p| {
                let mut orig = [0i64; 3];
                orig[..dim].copy_from_slice(&p.coords);
                ColoredPoint { rank: [0; 3], orig, color: Color(p.color), weight: p.weight as u64 }
            })
            .collect();

        let mut rank_maps = Vec::with_capacity(dim);
        for axis in 0..dim {
            let mut order: Vec<(i64, usize)> =
                points.iter().enumerate().map(|(i, p)| (p.orig[axis], i)).collect();
            order.sort_unstable();
            for (r, &(_, i)) in order.iter().enumerate() {
                points[i].rank[axis] = r as i64 + 1;
            }
            rank_maps.push(order);
        }

        Ok(Self::assemble(dim, points, rank_maps))
    }

    fn assemble(dim: usize, points: Vec<ColoredPoint>, rank_maps: Vec<Vec<(i64, usize)>>) -> Dataset {
        let num_colors = points.iter().map(|p| p.color.index() + 1).max().unwrap_or(0);
        let mut color_index = vec![Vec::new(); num_colors];
        for (i, p) in points.iter().enumerate() {
            color_index[p.color.index()].push(i);
        }
        let total_weight = points.iter().map(|p| p.weight).sum();
        Dataset { dim, points, color_index, rank_maps, total_weight }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[ColoredPoint] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &ColoredPoint {
        &self.points[i]
    }

    /// Number of points.
    pub fn m(&self) -> usize {
        self.points.len()
    }

    /// Total weight.
    pub fn n(&self) -> u64 {
        self.total_weight
    }

    /// Number of color ids (`max id + 1`).
    pub fn num_colors(&self) -> usize {
        self.color_index.len()
    }

    pub fn color_points(&self, c: Color) -> &[usize] {
        self.color_index.get(c.index()).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn color_index(&self) -> &[Vec<usize>] {
        &self.color_index
    }

    pub fn rank_map(&self, axis: usize) -> &[(i64, usize)] {
        &self.rank_maps[axis]
    }

    /// Rank of the predecessor of `bound` on `axis`: the number of points
    /// whose original coordinate is `<= bound`.
    pub fn predecessor_rank(&self, axis: usize, bound: i64) -> i64 {
        self.rank_maps[axis].partition_point(|&(v, _)| v <= bound) as i64
    }

    /// Maps a dominance or rectangle query given in original coordinates to
    /// rank space. Membership is preserved point by point.
    pub fn map_query(&self, q: &RangeQuery) -> Result<RangeQuery> {
        match q {
            RangeQuery::Dominance3(c) => {
                if self.dim != 3 {
                    return Err(Error::DimensionMismatch { expected: 3, found: self.dim });
                }
                let mut out = [0i64; 3];
                for axis in 0..3 {
                    out[axis] = self.predecessor_rank(axis, c[axis]);
                }
                Ok(RangeQuery::Dominance3(out))
            }
            RangeQuery::Rect2(r) => {
                if self.dim != 2 {
                    return Err(Error::DimensionMismatch { expected: 2, found: self.dim });
                }
                let lo = |axis: usize, b: i64| {
                    if b == NEG_INF {
                        0
                    } else {
                        self.predecessor_rank(axis, b - 1) + 1
                    }
                };
                let hi = |axis: usize, b: i64| {
                    if b == POS_INF {
                        self.m() as i64
                    } else {
                        self.predecessor_rank(axis, b)
                    }
                };
                Ok(RangeQuery::Rect2(Rect::unchecked(
                    lo(0, r.x_lo),
                    hi(0, r.x_hi),
                    lo(1, r.y_lo),
                    hi(1, r.y_hi),
                )))
            }
            RangeQuery::Halfplane2(_) | RangeQuery::Halfspace3(_) => Err(Error::WrongQueryKind),
        }
    }

    /// Point indices sorted by color, in the order of `colors`.
    pub fn points_of_colors(&self, colors: &[Color]) -> Vec<usize> {
        let mut out = Vec::new();
        for &c in colors {
            out.extend_from_slice(self.color_points(c));
        }
        out
    }
}

/// First invariant violation found by [`validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NonPositiveWeight { index: usize },
    NonDenseColors { missing: Color },
    ColorIndexMismatch { index: usize },
    RankOutOfRange { index: usize, axis: usize },
    RankMapNotIncreasing { axis: usize },
    WeightTotalMismatch,
}

/// Checks every dataset invariant and reports the first violation.
pub fn validate(ds: &Dataset) -> std::result::Result<(), Violation> {
    let m = ds.m() as i64;
    for (index, p) in ds.points.iter().enumerate() {
        if p.weight == 0 {
            return Err(Violation::NonPositiveWeight { index });
        }
        for axis in 0..ds.dim {
            if p.rank[axis] < 1 || p.rank[axis] > m {
                return Err(Violation::RankOutOfRange { index, axis });
            }
        }
    }
    for (c, members) in ds.color_index.iter().enumerate() {
        if members.is_empty() {
            return Err(Violation::NonDenseColors { missing: Color(c as u32) });
        }
        if let Some(&index) = members.iter().find(|&&i| ds.points[i].color.index() != c) {
            return Err(Violation::ColorIndexMismatch { index });
        }
    }
    let indexed: usize = ds.color_index.iter().map(Vec::len).sum();
    if indexed != ds.points.len() {
        return Err(Violation::ColorIndexMismatch { index: indexed.min(ds.points.len()) });
    }
    for (axis, map) in ds.rank_maps.iter().enumerate() {
        if map.len() != ds.points.len() || map.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Violation::RankMapNotIncreasing { axis });
        }
        for (r, &(v, i)) in map.iter().enumerate() {
            let p = &ds.points[i];
            if p.orig[axis] != v || p.rank[axis] != r as i64 + 1 {
                return Err(Violation::RankMapNotIncreasing { axis });
            }
        }
    }
    if ds.points.iter().map(|p| p.weight).sum::<u64>() != ds.total_weight {
        return Err(Violation::WeightTotalMismatch);
    }
    Ok(())
}

#[cfg(test)]
impl Dataset {
    /// Unchecked mutable access for invariant tests.
    pub(crate) fn points_mut(&mut self) -> &mut Vec<ColoredPoint> {
        &mut self.points
    }
}
