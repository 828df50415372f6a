use std::collections::HashMap;

use super::WPoint;
use crate::data::Color;
use crate::error::{Error, Result};

/// Distinct colors among a point set restricted to a y-interval: a point
/// counts iff its same-color y-predecessor lies below the interval.
#[derive(Clone, Debug)]
struct DistinctCounter {
    ys: Vec<i64>,
    /// Merge-sort tree over predecessor y values in y order.
    tree: Vec<Vec<i64>>,
    size: usize,
}

impl DistinctCounter {
    fn new(points: &mut [(i64, Color)]) -> Self {
        points.sort_unstable();
        let mut last: HashMap<Color, i64> = HashMap::new();
        let mut prev = Vec::with_capacity(points.len());
        for &(y, c) in points.iter() {
            prev.push(last.insert(c, y).unwrap_or(i64::MIN));
        }
        let size = points.len().next_power_of_two().max(1);
        let mut tree = vec![Vec::new(); 2 * size];
        for (i, &p) in prev.iter().enumerate() {
            tree[size + i] = vec![p];
        }
        for v in (1..size).rev() {
            let (a, b) = (&tree[2 * v], &tree[2 * v + 1]);
            let mut merged = Vec::with_capacity(a.len() + b.len());
            let (mut i, mut j) = (0, 0);
            while i < a.len() || j < b.len() {
                if j == b.len() || (i < a.len() && a[i] <= b[j]) {
                    merged.push(a[i]);
                    i += 1;
                } else {
                    merged.push(b[j]);
                    j += 1;
                }
            }
            tree[v] = merged;
        }
        DistinctCounter { ys: points.iter().map(|e| e.0).collect(), tree, size }
    }

    fn count(&self, c: i64, d: i64) -> usize {
        let (mut lo, mut hi) = (self.ys.partition_point(|&y| y < c) + self.size, self.ys.partition_point(|&y| y <= d) + self.size);
        let below = |v: &Vec<i64>| v.partition_point(|&p| p < c);
        let mut n = 0;
        while lo < hi {
            if lo & 1 == 1 {
                n += below(&self.tree[lo]);
                lo += 1;
            }
            if hi & 1 == 1 {
                hi -= 1;
                n += below(&self.tree[hi]);
            }
            lo /= 2;
            hi /= 2;
        }
        n
    }
}

#[derive(Clone, Debug)]
struct ENode {
    start: usize,
    /// Child start offsets plus the end.
    bounds: Vec<usize>,
    children: Vec<ENode>,
    /// Counter for children `i..=j` at index `pair_index(i, j)`.
    sets: Vec<DistinctCounter>,
}

fn pair_index(i: usize, j: usize, k: usize) -> usize {
    i * k + j
}

/// Whether a rectangle may hold many colors: a degree-`B` range tree over
/// x whose canonical child runs count distinct colors exactly over y.
#[derive(Clone, Debug)]
pub struct EstimatorE {
    degree: usize,
    t_yes: usize,
    t_no: usize,
    xs: Vec<i64>,
    root: Option<ENode>,
    depth: usize,
}

/// Estimator outcome with the per-set counts it was based on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Estimate {
    pub yes: bool,
    pub counts: Vec<usize>,
}

fn build_enode(sorted: &[WPoint], start: usize, degree: usize, depth: &mut usize, level: usize) -> ENode {
    *depth = (*depth).max(level + 1);
    let n = sorted.len();
    if n <= 1 {
        let mut pts: Vec<(i64, Color)> = sorted.iter().map(|p| (p.y, p.color)).collect();
        return ENode { start, bounds: vec![start, start + n], children: Vec::new(), sets: vec![DistinctCounter::new(&mut pts)] };
    }
    let k = degree.min(n);
    let bounds: Vec<usize> = (0..=k).map(|i| start + i * n / k).collect();
    let children = (0..k)
        .map(|i| build_enode(&sorted[bounds[i] - start..bounds[i + 1] - start], bounds[i], degree, depth, level + 1))
        .collect();
    let mut sets = Vec::with_capacity(k * k);
    for i in 0..k {
        for j in 0..k {
            let mut pts: Vec<(i64, Color)> = if j >= i {
                sorted[bounds[i] - start..bounds[j + 1] - start].iter().map(|p| (p.y, p.color)).collect()
            } else {
                Vec::new()
            };
            sets.push(DistinctCounter::new(&mut pts));
        }
    }
    ENode { start, bounds, children, sets }
}

impl ENode {
    /// Counts for the canonical runs covering indices `lo..hi`.
    fn collect(&self, lo: usize, hi: usize, c: i64, d: i64, out: &mut Vec<usize>) {
        let k = self.children.len();
        let end = *self.bounds.last().unwrap();
        if lo >= hi || hi <= self.start || lo >= end {
            return;
        }
        if k == 0 {
            out.push(self.sets[0].count(c, d));
            return;
        }
        // Children fully inside [lo, hi).
        let full: Vec<usize> = (0..k).filter(|&i| lo <= self.bounds[i] && self.bounds[i + 1] <= hi).collect();
        if let (Some(&i), Some(&j)) = (full.first(), full.last()) {
            out.push(self.sets[pair_index(i, j, k)].count(c, d));
        }
        for i in 0..k {
            let (s, e) = (self.bounds[i], self.bounds[i + 1]);
            let partial = s < hi && lo < e && !(lo <= s && e <= hi);
            if partial {
                self.children[i].collect(lo, hi, c, d, out);
            }
        }
    }
}

pub fn build_estimator(points: &[WPoint], degree: usize, t_yes: usize, t_no: usize) -> Result<EstimatorE> {
    if t_yes == 0 || t_yes > t_no || degree < 2 {
        return Err(Error::BadThresholds);
    }
    let mut sorted = points.to_vec();
    sorted.sort_unstable_by_key(|p| p.x);
    let mut depth = 0;
    let root = (!sorted.is_empty()).then(|| build_enode(&sorted, 0, degree, &mut depth, 0));
    Ok(EstimatorE { degree, t_yes, t_no, xs: sorted.iter().map(|p| p.x).collect(), root, depth })
}

impl EstimatorE {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn thresholds(&self) -> (usize, usize) {
        (self.t_yes, self.t_no)
    }

    /// Most canonical sets any query can produce.
    pub fn max_sets(&self) -> usize {
        (2 * self.depth).saturating_sub(1).max(1)
    }

    /// Whether `max_sets * t_yes <= t_no`, i.e. a range with at most
    /// `t_yes` colors is certain to get `yes`.
    pub fn promise_holds(&self) -> bool {
        self.max_sets() * self.t_yes <= self.t_no
    }

    /// Exact distinct-color counts of the canonical sets of `[a,b] x [c,d]`.
    pub fn canonical_counts(&self, a: i64, b: i64, c: i64, d: i64) -> Vec<usize> {
        let lo = self.xs.partition_point(|&x| x < a);
        let hi = self.xs.partition_point(|&x| x <= b);
        // Predecessor value `i64::MIN` marks "none"; keep `c` above it.
        let c = c.max(i64::MIN + 1);
        let mut out = Vec::new();
        if let Some(root) = &self.root {
            if c <= d {
                root.collect(lo, hi, c, d, &mut out);
            }
        }
        out
    }

    /// `yes` iff every canonical count is at most `t_yes` and their sum is
    /// at most `t_no`; so `yes` bounds the true count by `t_no`.
    pub fn estimate_many_colors(&self, a: i64, b: i64, c: i64, d: i64) -> Estimate {
        let counts = self.canonical_counts(a, b, c, d);
        let yes = counts.iter().all(|&n| n <= self.t_yes) && counts.iter().sum::<usize>() <= self.t_no;
        Estimate { yes, counts }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{Dataset, Seed};
    use crate::gen::{generate, Family, GenSpec};
    use crate::oracle::oracle_type2;
    use crate::queries::random_rect;
    use crate::type2::points_of;

    fn wp(x: i64, y: i64, c: u32) -> WPoint {
        WPoint { x, y, color: Color(c), weight: 1 }
    }

    #[test]
    fn chaining_identity() {
        let mut pts = vec![(1, Color(0)), (2, Color(1)), (3, Color(0))];
        let dc = DistinctCounter::new(&mut pts);
        assert_eq!(dc.count(2, 3), 2);
        assert_eq!(dc.count(1, 3), 2);
        assert_eq!(dc.count(3, 3), 1);
        assert_eq!(dc.count(4, 9), 0);
    }

    #[test]
    fn thresholds_validated() {
        assert_eq!(build_estimator(&[], 4, 5, 4).unwrap_err(), Error::BadThresholds);
        assert_eq!(build_estimator(&[], 1, 1, 4).unwrap_err(), Error::BadThresholds);
    }

    #[test]
    fn single_color_says_yes() {
        let pts: Vec<WPoint> = (1..=40).map(|i| wp(i, 41 - i, 3)).collect();
        let e = build_estimator(&pts, 4, 1, 100).unwrap();
        assert!(e.estimate_many_colors(1, 40, 1, 40).yes);
    }

    #[test]
    fn one_set_over_t_yes_says_no() {
        let pts: Vec<WPoint> = (1..=4).map(|i| wp(i, i, i as u32)).collect();
        let e = build_estimator(&pts, 4, 3, 100).unwrap();
        let est = e.estimate_many_colors(1, 4, 1, 4);
        assert_eq!(est.counts, vec![4]);
        assert!(!est.yes);
    }

    #[test]
    fn canonical_sets_partition_and_count_exactly() {
        let ds = Dataset::reduce_to_rank_space(&generate(&GenSpec::new(Family::Uniform2, 300, 15, Seed(1))).unwrap()).unwrap();
        let pts = points_of(&ds);
        let e = build_estimator(&pts, 4, 4, 400).unwrap();
        let mut rng = Seed(2).rng();
        for _ in 0..500 {
            let r = random_rect(300, 4, &mut rng);
            let counts = e.canonical_counts(r.x_lo, r.x_hi, r.y_lo, r.y_hi);
            let k = oracle_type2(&ds, &r).unwrap().len();
            let total: usize = counts.iter().sum();
            assert!(total >= k);
            assert!(counts.iter().all(|&n| n <= k));
            assert!(counts.len() <= e.max_sets());
            let est = e.estimate_many_colors(r.x_lo, r.x_hi, r.y_lo, r.y_hi);
            if est.yes {
                assert!(k <= 400);
            }
            if k <= 4 && e.promise_holds() {
                assert!(est.yes);
            }
        }
    }
}
