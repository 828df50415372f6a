use std::collections::BTreeMap;

use crate::data::Dataset;

/// Boxes covering the part of `[0, m]^3` that dominates no sampled point.
///
/// Sampled points sorted by z cut the domain into slabs; inside a slab the
/// uncovered cross-section is the region below the staircase of 2D minima
/// of the sampled points seen so far, split at the staircase's x-steps.
#[derive(Clone, Debug)]
pub(crate) struct DomCells {
    m: i64,
    /// Slab `k >= 1` starts at `slab_z[k - 1]`; slab 0 starts at 0.
    slab_z: Vec<i64>,
    slab_offset: Vec<usize>,
    /// Per slab, staircase steps `(x, y)` with x increasing, y decreasing.
    stairs: Vec<Vec<(i64, i64)>>,
    boxes: Vec<([i64; 3], [i64; 3])>,
}

impl DomCells {
    pub(crate) fn build(ds: &Dataset, sampled: &[usize]) -> Self {
        let m = ds.m() as i64;
        let mut by_z: Vec<[i64; 3]> = sampled.iter().map(|&i| ds.point(i).rank).collect();
        by_z.sort_unstable_by_key(|p| p[2]);
        let slab_z: Vec<i64> = by_z.iter().map(|p| p[2]).collect();

        let mut stair: BTreeMap<i64, i64> = BTreeMap::new();
        let mut stairs = Vec::with_capacity(by_z.len() + 1);
        let mut slab_offset = Vec::with_capacity(by_z.len() + 1);
        let mut boxes = Vec::new();
        for k in 0..=by_z.len() {
            if k > 0 {
                let [x, y, _] = by_z[k - 1];
                let covered = stair.range(..=x).next_back().is_some_and(|(_, &sy)| sy <= y);
                if !covered {
                    let dead: Vec<i64> = stair.range(x..).take_while(|(_, &sy)| sy >= y).map(|(&sx, _)| sx).collect();
                    for sx in dead {
                        stair.remove(&sx);
                    }
                    stair.insert(x, y);
                }
            }
            let z_lo = if k == 0 { 0 } else { slab_z[k - 1] };
            let z_hi = slab_z.get(k).map_or(m, |&z| z - 1);
            let steps: Vec<(i64, i64)> = stair.iter().map(|(&x, &y)| (x, y)).collect();
            slab_offset.push(boxes.len());
            match steps.first() {
                None => boxes.push(([0, 0, z_lo], [m, m, z_hi])),
                Some(&(x1, _)) => {
                    boxes.push(([0, 0, z_lo], [x1 - 1, m, z_hi]));
                    for (i, &(x, y)) in steps.iter().enumerate() {
                        let x_hi = steps.get(i + 1).map_or(m, |s| s.0 - 1);
                        boxes.push(([x, 0, z_lo], [x_hi, y - 1, z_hi]));
                    }
                }
            }
            stairs.push(steps);
        }
        DomCells { m, slab_z, slab_offset, stairs, boxes }
    }

    pub(crate) fn len(&self) -> usize {
        self.boxes.len()
    }

    pub(crate) fn cell_box(&self, cell: usize) -> ([i64; 3], [i64; 3]) {
        self.boxes[cell]
    }

    pub(crate) fn max_corner(&self, cell: usize) -> [i64; 3] {
        self.boxes[cell].1
    }

    /// Cell containing the (clamped) corner, or `None` if it is covered.
    pub(crate) fn locate(&self, corner: &[i64; 3]) -> Option<usize> {
        let [x, y, z] = corner.map(|c| c.clamp(0, self.m));
        let k = self.slab_z.partition_point(|&sz| sz <= z);
        let steps = &self.stairs[k];
        let i = steps.partition_point(|s| s.0 <= x);
        if i > 0 && y >= steps[i - 1].1 {
            return None;
        }
        Some(self.slab_offset[k] + i)
    }
}
