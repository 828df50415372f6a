//! Decompositions of the region no sampled range covers.

mod dominance;
mod halfplane;
mod halfspace;

pub(crate) use dominance::DomCells;
pub(crate) use halfplane::PlaneCells;
pub(crate) use halfspace::SpaceCells;

use super::RangeFamily;
use crate::data::{ColoredPoint, Dataset, RangeQuery};

#[derive(Clone, Debug)]
pub(crate) enum Decomposition {
    Dominance(DomCells),
    Halfplane(PlaneCells),
    Halfspace(SpaceCells),
}

impl Decomposition {
    /// `sampled` are point ids whose ranges count as covered.
    pub(crate) fn build(ds: &Dataset, family: RangeFamily, sampled: &[usize], window: i64) -> Self {
        match family {
            RangeFamily::Dominance3 => Decomposition::Dominance(DomCells::build(ds, sampled)),
            RangeFamily::Halfplane2 => Decomposition::Halfplane(PlaneCells::build(ds, sampled)),
            RangeFamily::Halfspace3 => Decomposition::Halfspace(SpaceCells::build(ds, sampled, window)),
        }
    }

    pub(crate) fn len(&self) -> usize {
        match self {
            Decomposition::Dominance(c) => c.len(),
            Decomposition::Halfplane(c) => c.len(),
            Decomposition::Halfspace(c) => c.len(),
        }
    }

    /// Cell holding the query, `None` when it is covered, outside the
    /// decomposed window, or of another family.
    pub(crate) fn locate(&self, q: &RangeQuery) -> Option<usize> {
        match (self, q) {
            (Decomposition::Dominance(c), RangeQuery::Dominance3(corner)) => c.locate(corner),
            (Decomposition::Halfplane(c), RangeQuery::Halfplane2(h)) => c.locate(h),
            (Decomposition::Halfspace(c), RangeQuery::Halfspace3(h)) => c.locate(h),
            _ => None,
        }
    }

    /// Whether the range of point `p` meets the cell.
    pub(crate) fn conflicts(&self, cell: usize, p: &ColoredPoint) -> bool {
        match self {
            Decomposition::Dominance(c) => {
                let top = c.max_corner(cell);
                (0..3).all(|a| p.rank[a] <= top[a])
            }
            Decomposition::Halfplane(c) => c.conflicts(cell, p.orig_xy()),
            Decomposition::Halfspace(c) => c.conflicts(cell, p.orig),
        }
    }

    pub(crate) fn dominance(&self) -> Option<&DomCells> {
        match self {
            Decomposition::Dominance(c) => Some(c),
            _ => None,
        }
    }
}
