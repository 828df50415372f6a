//! Weighted 2D per-color counting (type-2 queries).

mod cutting;
mod estimator;
mod general;
mod grid;
mod sided;

use std::fmt;

pub use cutting::{build_shallow_cutting, ColoredShallowCutting};
pub use estimator::{build_estimator, Estimate, EstimatorE};
pub use general::{build_general, GeneralStructure, Type2Params, Type2Stats};
pub use grid::{build_grid, split_by_weight, Axis, GridLevel, GridStructure, DEFAULT_DEPTH_BUDGET};
pub use sided::{build_3sided, build_4sided, Capped3, Capped4};

use crate::data::{Color, Dataset, Histogram};

/// A weighted point in rank space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WPoint {
    pub x: i64,
    pub y: i64,
    pub color: Color,
    pub weight: u64,
}

/// The rank-space xy points of a dataset.
pub fn points_of(ds: &Dataset) -> Vec<WPoint> {
    ds.points()
        .iter()
        .map(|p| WPoint { x: p.rank[0], y: p.rank[1], color: p.color, weight: p.weight })
        .collect()
}

/// Answer of a capped query: exact, or NULL when the range may hold more
/// than `τ` colors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CappedAnswer {
    Exact(Histogram),
    Null,
}

impl CappedAnswer {
    pub fn is_null(&self) -> bool {
        matches!(self, CappedAnswer::Null)
    }

    pub fn histogram(&self) -> Option<&Histogram> {
        match self {
            CappedAnswer::Exact(h) => Some(h),
            CappedAnswer::Null => None,
        }
    }
}

impl From<Option<Histogram>> for CappedAnswer {
    fn from(h: Option<Histogram>) -> Self {
        h.map_or(CappedAnswer::Null, CappedAnswer::Exact)
    }
}

impl fmt::Display for CappedAnswer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CappedAnswer::Exact(h) => h.fmt(f),
            CappedAnswer::Null => f.write_str("NULL"),
        }
    }
}
