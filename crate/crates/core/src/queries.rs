//! Random query workloads whose output sizes spread over all scales.

use rand::Rng;

use crate::data::{Dataset, Halfplane, Halfspace, RangeQuery, Rect, NEG_INF};
use crate::k1::RangeFamily;

/// Log-uniform target count in `[1, m]`.
fn target(m: usize, rng: &mut impl Rng) -> usize {
    let t = (rng.random::<f64>() * (m.max(1) as f64).ln()).exp();
    (t as usize).clamp(1, m.max(1))
}

/// Value of `values[t - 1]` in sorted order, or one less (empty-ish range).
fn offset_at(values: &mut [i64], t: usize, rng: &mut impl Rng) -> i64 {
    let (_, v, _) = values.select_nth_unstable(t - 1);
    *v - i64::from(rng.random_bool(0.1))
}

/// A random query of the family; dominance corners are in rank space.
pub fn random_query(ds: &Dataset, family: RangeFamily, rng: &mut impl Rng) -> RangeQuery {
    let m = ds.m();
    let t = target(m, rng);
    match family {
        RangeFamily::Dominance3 => {
            let side = (m as f64 * (t as f64 / m as f64).cbrt()).round() as i64;
            RangeQuery::Dominance3([0; 3].map(|_| rng.random_range(0..=side.max(1))))
        }
        RangeFamily::Halfplane2 => {
            let (a, d) = (rng.random_range(-64..=64), rng.random_range(1..=16));
            let mut vals: Vec<i64> = ds.points().iter().map(|p| d * p.orig[1] - a * p.orig[0]).collect();
            RangeQuery::Halfplane2(Halfplane { a, b: offset_at(&mut vals, t, rng), d })
        }
        RangeFamily::Halfspace3 => {
            let (a, b, d) = (rng.random_range(-64..=64), rng.random_range(-64..=64), rng.random_range(1..=16));
            let mut vals: Vec<i64> =
                ds.points().iter().map(|p| d * p.orig[2] - a * p.orig[0] - b * p.orig[1]).collect();
            RangeQuery::Halfspace3(Halfspace { a, b, c: offset_at(&mut vals, t, rng), d })
        }
    }
}

pub fn random_queries(ds: &Dataset, family: RangeFamily, count: usize, rng: &mut impl Rng) -> Vec<RangeQuery> {
    (0..count).map(|_| random_query(ds, family, rng)).collect()
}

/// A dominance corner whose range holds exactly `k` colors, grown from the
/// origin one rank step at a time along randomly weighted axes. `None` if
/// the growth never hits `k`.
pub fn dominance_query_with_k(ds: &Dataset, k: usize, rng: &mut impl Rng) -> Option<RangeQuery> {
    let m = ds.m();
    let mut at_rank = vec![[0usize; 3]; m + 1];
    for (i, p) in ds.points().iter().enumerate() {
        for a in 0..3 {
            at_rank[p.rank[a] as usize][a] = i;
        }
    }
    let w: [f64; 3] = [0; 3].map(|_| rng.random_range(0.2..1.0));
    let mut corner = [0i64; 3];
    let mut count = vec![0usize; ds.num_colors()];
    let mut distinct = 0;
    if k == 0 {
        return Some(RangeQuery::Dominance3(corner));
    }
    loop {
        let open: Vec<usize> = (0..3).filter(|&a| corner[a] < m as i64).collect();
        if open.is_empty() {
            return None;
        }
        let total: f64 = open.iter().map(|&a| w[a]).sum();
        let mut pick = rng.random::<f64>() * total;
        let mut axis = open[open.len() - 1];
        for &a in &open {
            if pick < w[a] {
                axis = a;
                break;
            }
            pick -= w[a];
        }
        corner[axis] += 1;
        let p = ds.point(at_rank[corner[axis] as usize][axis]);
        if (0..3).all(|a| p.rank[a] <= corner[a]) {
            count[p.color.index()] += 1;
            if count[p.color.index()] == 1 {
                distinct += 1;
                if distinct == k {
                    return Some(RangeQuery::Dominance3(corner));
                }
            }
        }
    }
}

/// A random rank-space rectangle with `sides` bounded sides (2, 3 or 4):
/// 2 bounds x and y from above, 3 adds a lower x bound, 4 a lower y bound.
pub fn random_rect(m: usize, sides: usize, rng: &mut impl Rng) -> Rect {
    let m = m as i64;
    let mut span = || {
        let a = rng.random_range(1..=m);
        let b = rng.random_range(1..=m);
        (a.min(b), a.max(b))
    };
    let (xl, xh) = span();
    let (yl, yh) = span();
    match sides {
        2 => Rect::two_sided(xh, yh),
        3 => Rect::unchecked(xl, xh, NEG_INF, yh),
        _ => Rect::unchecked(xl, xh, yl, yh),
    }
}
