use num_integer::Integer;
use num_rational::Ratio;

use super::{ColoredPoint, Dataset};
use crate::error::{Error, Result};

/// Open lower bound of a rectangle side.
pub const NEG_INF: i64 = i64::MIN;
/// Open upper bound of a rectangle side.
pub const POS_INF: i64 = i64::MAX;

/// `{p : d*p_y <= a*p_x + b}` with `d > 0`, i.e. slope `a/d`, intercept `b/d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Halfplane {
    pub a: i64,
    pub b: i64,
    pub d: i64,
}

impl Halfplane {
    pub fn from_integers(slope: i64, intercept: i64) -> Self {
        Halfplane { a: slope, b: intercept, d: 1 }
    }

    pub fn from_ratios(slope: Ratio<i64>, intercept: Ratio<i64>) -> Result<Self> {
        let d = checked_lcm(*slope.denom(), *intercept.denom())?;
        let a = slope.numer().checked_mul(d / slope.denom()).ok_or_else(overflow)?;
        let b = intercept.numer().checked_mul(d / intercept.denom()).ok_or_else(overflow)?;
        Ok(Halfplane { a, b, d })
    }

    pub fn contains_xy(&self, x: i64, y: i64) -> bool {
        (self.d as i128) * (y as i128) <= (self.a as i128) * (x as i128) + self.b as i128
    }
}

/// `{p : d*p_z <= a*p_x + b*p_y + c}` with `d > 0` (non-vertical).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Halfspace {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Halfspace {
    pub fn from_integers(a: i64, b: i64, c: i64) -> Self {
        Halfspace { a, b, c, d: 1 }
    }

    pub fn from_ratios(a: Ratio<i64>, b: Ratio<i64>, c: Ratio<i64>) -> Result<Self> {
        let d = checked_lcm(checked_lcm(*a.denom(), *b.denom())?, *c.denom())?;
        let scale = |r: Ratio<i64>| r.numer().checked_mul(d / r.denom()).ok_or_else(overflow);
        Ok(Halfspace { a: scale(a)?, b: scale(b)?, c: scale(c)?, d })
    }

    pub fn contains_xyz(&self, x: i64, y: i64, z: i64) -> bool {
        (self.d as i128) * (z as i128)
            <= (self.a as i128) * (x as i128) + (self.b as i128) * (y as i128) + self.c as i128
    }
}

fn overflow() -> Error {
    Error::InvalidRange("coefficient overflow".into())
}

fn checked_lcm(p: i64, q: i64) -> Result<i64> {
    (p / p.gcd(&q)).checked_mul(q).ok_or_else(overflow)
}

/// Axis-parallel rectangle with inclusive bounds; `NEG_INF`/`POS_INF` mark
/// open sides.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Rect {
    pub x_lo: i64,
    pub x_hi: i64,
    pub y_lo: i64,
    pub y_hi: i64,
}

impl Rect {
    pub fn new(x_lo: i64, x_hi: i64, y_lo: i64, y_hi: i64) -> Result<Self> {
        if x_lo > x_hi || y_lo > y_hi {
            return Err(Error::InvalidRange(format!("[{x_lo},{x_hi}]x[{y_lo},{y_hi}]")));
        }
        Ok(Rect { x_lo, x_hi, y_lo, y_hi })
    }

    /// Builds without the `lo <= hi` check; an inverted side is an empty range.
    pub fn unchecked(x_lo: i64, x_hi: i64, y_lo: i64, y_hi: i64) -> Self {
        Rect { x_lo, x_hi, y_lo, y_hi }
    }

    /// 2-sided `[0,a] x [0,b]` in rank space.
    pub fn two_sided(a: i64, b: i64) -> Self {
        Rect { x_lo: NEG_INF, x_hi: a, y_lo: NEG_INF, y_hi: b }
    }

    /// Number of finite sides.
    pub fn sidedness(&self) -> usize {
        [self.x_lo != NEG_INF, self.x_hi != POS_INF, self.y_lo != NEG_INF, self.y_hi != POS_INF]
            .iter()
            .filter(|&&f| f)
            .count()
    }

    pub fn contains_xy(&self, x: i64, y: i64) -> bool {
        self.x_lo <= x && x <= self.x_hi && self.y_lo <= y && y <= self.y_hi
    }

    pub fn is_empty(&self) -> bool {
        self.x_lo > self.x_hi || self.y_lo > self.y_hi
    }
}

/// A query range. `Dominance3` and `Rect2` are in rank space once mapped;
/// half-spaces always refer to original coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RangeQuery {
    Dominance3([i64; 3]),
    Halfplane2(Halfplane),
    Halfspace3(Halfspace),
    Rect2(Rect),
}

impl RangeQuery {
    /// Dimension of datasets this query applies to.
    pub fn dim(&self) -> usize {
        match self {
            RangeQuery::Dominance3(_) | RangeQuery::Halfspace3(_) => 3,
            RangeQuery::Halfplane2(_) | RangeQuery::Rect2(_) => 2,
        }
    }

    /// Membership of a dataset point: rank coordinates for dominance and
    /// rectangles, original coordinates for half-spaces.
    pub fn contains(&self, p: &ColoredPoint) -> bool {
        match self {
            RangeQuery::Dominance3(c) => (0..3).all(|i| p.rank[i] <= c[i]),
            RangeQuery::Rect2(r) => r.contains_xy(p.rank[0], p.rank[1]),
            RangeQuery::Halfplane2(h) => h.contains_xy(p.orig[0], p.orig[1]),
            RangeQuery::Halfspace3(h) => h.contains_xyz(p.orig[0], p.orig[1], p.orig[2]),
        }
    }

    /// Membership using original coordinates throughout.
    pub fn contains_original(&self, p: &ColoredPoint) -> bool {
        match self {
            RangeQuery::Dominance3(c) => (0..3).all(|i| p.orig[i] <= c[i]),
            RangeQuery::Rect2(r) => r.contains_xy(p.orig[0], p.orig[1]),
            _ => self.contains(p),
        }
    }

    pub fn check_dim(&self, ds: &Dataset) -> Result<()> {
        if self.dim() != ds.dim() {
            return Err(Error::DimensionMismatch { expected: ds.dim(), found: self.dim() });
        }
        Ok(())
    }
}
