use std::collections::BTreeSet;

use super::{ChangeStats, InsertionPlan, StepCounter};
use crate::error::{Error, Result};
use crate::geom::P2;

/// Line `y = slope * x + intercept`.
pub type Line = (i64, i64);

/// Dual line of point `(x, y)`: `Y = x * X - y`.
pub fn dual_line(p: P2) -> Line {
    (p[0], -p[1])
}

/// An envelope edge: a line together with its envelope neighbors.
type Edge = (usize, usize, usize);

/// Incremental lower envelope of lines. Left to right, slopes decrease.
#[derive(Clone, Debug, Default)]
pub struct Envelope2 {
    lines: Vec<Line>,
    /// Line ids on the envelope, left to right.
    env: Vec<usize>,
    seen: BTreeSet<Line>,
    /// Live edges with the id they were created under.
    edge_ids: std::collections::BTreeMap<Edge, usize>,
    next_edge_id: usize,
}

/// `L(x0) <= A(x0)` (or `<` when `strict`) at `x0 = x(P, A)` for lines with
/// slopes `P > A` and arbitrary `L`.
fn below_at_cross(l: Line, a: Line, p: Line, strict: bool) -> bool {
    // x0 = (b_a - b_p) / (m_p - m_a), denominator > 0.
    let lhs = (l.0 as i128 - a.0 as i128) * (a.1 as i128 - p.1 as i128);
    let rhs = (a.1 as i128 - l.1 as i128) * (p.0 as i128 - a.0 as i128);
    if strict {
        lhs < rhs
    } else {
        lhs <= rhs
    }
}

impl Envelope2 {
    pub fn new(lines: Vec<Line>) -> Self {
        Envelope2 { lines, ..Default::default() }
    }

    /// Envelope line ids, left to right.
    pub fn envelope(&self) -> &[usize] {
        &self.env
    }

    fn edge_at(&self, env: &[usize], i: usize) -> Edge {
        const NONE: usize = usize::MAX;
        let l = if i == 0 { NONE } else { env[i - 1] };
        let r = env.get(i + 1).copied().unwrap_or(NONE);
        (l, env[i], r)
    }

    /// Inserts line `id`, reporting edge births and deaths to `counter`.
    pub(crate) fn insert(&mut self, id: usize, counter: &mut StepCounter) -> Result<()> {
        let l = self.lines[id];
        if !self.seen.insert(l) {
            return Err(Error::DuplicateLine { index: id });
        }
        let lines = &self.lines;
        // First position whose slope is <= l's slope.
        let pos = self.env.partition_point(|&j| lines[j].0 > l.0);
        let mut lo = pos;
        let mut hi = pos;
        if let Some(&j) = self.env.get(pos) {
            if lines[j].0 == l.0 {
                if lines[j].1 <= l.1 {
                    return Ok(());
                }
                hi = pos + 1;
            }
        }
        if lo == hi && pos > 0 && pos < self.env.len() {
            let (a, b) = (lines[self.env[pos - 1]], lines[self.env[pos]]);
            // Is l strictly below the vertex where a meets b?
            if !below_at_cross(l, b, a, true) {
                return Ok(());
            }
        }
        while lo >= 2 && below_at_cross(l, lines[self.env[lo - 1]], lines[self.env[lo - 2]], false) {
            lo -= 1;
        }
        while hi + 1 < self.env.len() {
            // Right neighbor B with its own right neighbor BB; B dies if l is
            // at or below B where B meets BB. Mirror the x axis to reuse the
            // helper.
            let (b, bb) = (lines[self.env[hi]], lines[self.env[hi + 1]]);
            let mirror = |x: Line| (-x.0, x.1);
            if below_at_cross(mirror(l), mirror(b), mirror(bb), false) {
                hi += 1;
            } else {
                break;
            }
        }

        let w_lo = lo.saturating_sub(1);
        let w_hi_old = (hi + 1).min(self.env.len());
        let old: Vec<Edge> = (w_lo..w_hi_old).map(|i| self.edge_at(&self.env, i)).collect();
        self.env.splice(lo..hi, [id]);
        let w_hi_new = (lo + 2).min(self.env.len());
        let new: Vec<Edge> = (w_lo..w_hi_new).map(|i| self.edge_at(&self.env, i)).collect();
        for e in &old {
            if !new.contains(e) {
                let eid = self.edge_ids.remove(e).expect("live edge");
                counter.on_destroy(eid);
            }
        }
        for e in new {
            if !old.contains(&e) {
                self.edge_ids.insert(e, self.next_edge_id);
                self.next_edge_id += 1;
                counter.on_create();
            }
        }
        Ok(())
    }

    fn next_id(&self) -> usize {
        self.next_edge_id
    }
}

/// Runs the plan over `lines`, counting envelope edges per step.
pub fn envelope2_changes(lines: &[Line], plan: &InsertionPlan) -> Result<ChangeStats> {
    let mut env = Envelope2::new(lines.to_vec());
    let mut stats = ChangeStats::default();
    for step in plan.steps() {
        let mut counter = StepCounter::start(env.next_id());
        for &i in &plan.order[step] {
            env.insert(i, &mut counter)?;
        }
        counter.finish(&mut stats);
    }
    Ok(stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn plan(n: usize) -> InsertionPlan {
        InsertionPlan { order: (0..n).collect(), batch_boundaries: vec![0], batched: false, levels: 1 }
    }

    /// Envelope by brute force: lines achieving the strict minimum on some
    /// open interval, left to right.
    fn brute(lines: &[Line]) -> Vec<usize> {
        // Sample between all pairwise crossings.
        let mut xs: Vec<f64> = Vec::new();
        for (i, a) in lines.iter().enumerate() {
            for b in &lines[i + 1..] {
                if a.0 != b.0 {
                    xs.push((b.1 - a.1) as f64 / (a.0 - b.0) as f64);
                }
            }
        }
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut probes = vec![xs.first().copied().unwrap_or(0.0) - 1e6];
        for w in xs.windows(2) {
            if w[1] - w[0] > 1e-9 {
                probes.push((w[0] + w[1]) / 2.0);
            }
        }
        probes.push(xs.last().copied().unwrap_or(0.0) + 1e6);
        let mut out: Vec<usize> = Vec::new();
        for x in probes {
            let best = (0..lines.len())
                .min_by(|&i, &j| {
                    let (a, b) = (lines[i].0 as f64 * x + lines[i].1 as f64, lines[j].0 as f64 * x + lines[j].1 as f64);
                    a.partial_cmp(&b).unwrap()
                })
                .unwrap();
            if out.last() != Some(&best) {
                out.push(best);
            }
        }
        out
    }

    #[test]
    fn two_crossing_lines() {
        let s = envelope2_changes(&[(1, 0), (-1, 0)], &plan(2)).unwrap();
        assert_eq!(s.created_per_step, vec![1, 2]);
        assert_eq!(s.destroyed_per_step, vec![0, 1]);
    }

    #[test]
    fn line_above_everything_changes_nothing() {
        let s = envelope2_changes(&[(1, 0), (-1, 0), (0, 5), (0, 0)], &plan(4)).unwrap();
        assert_eq!((s.created_per_step[2], s.destroyed_per_step[2]), (0, 0));
        // Concurrent through the vertex: touches but adds no edge.
        assert_eq!((s.created_per_step[3], s.destroyed_per_step[3]), (0, 0));
    }

    #[test]
    fn duplicate_rejected() {
        assert_eq!(envelope2_changes(&[(1, 2), (3, 4), (1, 2)], &plan(3)), Err(Error::DuplicateLine { index: 2 }));
    }

    #[test]
    fn matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for round in 0..200 {
            let range = if round % 2 == 0 { 5 } else { 1000 };
            let mut lines: Vec<Line> = Vec::new();
            while lines.len() < 12 {
                let l = (rng.random_range(-range..=range), rng.random_range(-range..=range));
                if !lines.contains(&l) {
                    lines.push(l);
                }
            }
            let mut env = Envelope2::new(lines.clone());
            let mut c = StepCounter::start(0);
            for i in 0..lines.len() {
                env.insert(i, &mut c).unwrap();
                assert_eq!(env.envelope(), brute(&lines[..=i]).as_slice(), "{lines:?}");
                assert_eq!(env.edge_ids.len(), env.envelope().len());
            }
        }
    }
}
