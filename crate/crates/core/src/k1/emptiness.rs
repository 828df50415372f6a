use std::collections::BTreeMap;

use super::RangeFamily;
use crate::data::{Dataset, RangeQuery};
use crate::geom::lower_hull;
use crate::ric::hull_vertices;

/// Uncolored emptiness with report-one over a fixed point set.
///
/// Keeps only the points that can be the first hit by a range of the
/// family: 3D minima for dominance, lower-hull vertices for halfplanes,
/// hull vertices for halfspaces. A range is nonempty iff it holds one of
/// them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmptinessIndex {
    family: RangeFamily,
    candidates: Vec<usize>,
}

impl EmptinessIndex {
    pub fn build(ds: &Dataset, ids: &[usize], family: RangeFamily) -> Self {
        let candidates = match family {
            RangeFamily::Dominance3 => minima3(ds, ids),
            RangeFamily::Halfplane2 => {
                let mut sorted: Vec<([i64; 2], usize)> = ids.iter().map(|&i| (ds.point(i).orig_xy(), i)).collect();
                sorted.sort_unstable();
                let coords: Vec<[i64; 2]> = sorted.iter().map(|e| e.0).collect();
                lower_hull(&coords).into_iter().map(|j| sorted[j].1).collect()
            }
            RangeFamily::Halfspace3 => {
                let pts: Vec<[i64; 3]> = ids.iter().map(|&i| ds.point(i).orig).collect();
                match hull_vertices(&pts) {
                    Some(v) => v.into_iter().map(|j| ids[j]).collect(),
                    None => ids.to_vec(),
                }
            }
        };
        EmptinessIndex { family, candidates }
    }

    pub fn family(&self) -> RangeFamily {
        self.family
    }

    /// Point ids that decide emptiness.
    pub fn candidates(&self) -> &[usize] {
        &self.candidates
    }

    /// A point of the set inside `q`, if any.
    pub fn witness(&self, ds: &Dataset, q: &RangeQuery) -> Option<usize> {
        self.candidates.iter().copied().find(|&i| q.contains(ds.point(i)))
    }

    pub fn is_empty(&self, ds: &Dataset, q: &RangeQuery) -> bool {
        self.witness(ds, q).is_none()
    }
}

/// Points not dominated by another point of `ids` (rank coordinates are
/// distinct per axis).
fn minima3(ds: &Dataset, ids: &[usize]) -> Vec<usize> {
    let mut order = ids.to_vec();
    order.sort_unstable_by_key(|&i| ds.point(i).rank[0]);
    // Staircase of (y, z) minima: z strictly decreases as y increases.
    let mut stair: BTreeMap<i64, i64> = BTreeMap::new();
    let mut out = Vec::new();
    for i in order {
        let [_, y, z] = ds.point(i).rank;
        if stair.range(..=y).next_back().is_some_and(|(_, &sz)| sz <= z) {
            continue;
        }
        let dead: Vec<i64> = stair.range(y..).take_while(|(_, &sz)| sz >= z).map(|(&k, _)| k).collect();
        for k in dead {
            stair.remove(&k);
        }
        stair.insert(y, z);
        out.push(i);
    }
    out.sort_unstable();
    out
}
