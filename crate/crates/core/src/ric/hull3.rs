use rand::seq::SliceRandom;

use super::{ChangeStats, InsertionPlan, StepCounter};
use crate::data::Seed;
use crate::error::{Error, Result};
use crate::geom::{collinear3, orient3d, P3};

const NONE: usize = usize::MAX;

#[derive(Clone, Debug)]
struct Facet {
    /// Counter-clockwise seen from outside.
    v: [usize; 3],
    /// `nb[k]` is the facet across the edge opposite `v[k]`.
    nb: [usize; 3],
    alive: bool,
    /// Uninserted points strictly outside this facet's plane.
    conf: Vec<usize>,
    mark: u32,
}

/// Prefix of points that is still coplanar; the hull is not 3D yet.
#[derive(Clone, Debug, Default)]
struct Flat {
    buf: Vec<usize>,
    a: Option<usize>,
    b: Option<usize>,
    c: Option<usize>,
}

/// Incremental 3D convex hull with a conflict graph over a known point set.
///
/// A point sees a facet iff it lies strictly outside the facet's plane, so
/// points on the boundary are absorbed without change. While the inserted
/// prefix is coplanar, points are buffered; the first point off that plane
/// builds the hull of everything so far in one step.
#[derive(Clone, Debug)]
pub struct IncrementalHull<'a> {
    pts: &'a [P3],
    facets: Vec<Facet>,
    pconf: Vec<Vec<usize>>,
    inserted: Vec<bool>,
    flat: Option<Flat>,
    epoch: u32,
    stamp: Vec<u32>,
    start_of: Vec<usize>,
    end_of: Vec<usize>,
}

impl<'a> IncrementalHull<'a> {
    pub fn new(pts: &'a [P3]) -> Self {
        let n = pts.len();
        IncrementalHull {
            pts,
            facets: Vec::new(),
            pconf: vec![Vec::new(); n],
            inserted: vec![false; n],
            flat: Some(Flat::default()),
            epoch: 0,
            stamp: vec![0; n],
            start_of: vec![NONE; n],
            end_of: vec![NONE; n],
        }
    }

    /// True until the inserted points span 3D.
    pub fn is_flat(&self) -> bool {
        self.flat.is_some()
    }

    /// Facet id counter; ids are never reused.
    pub fn next_facet_id(&self) -> usize {
        self.facets.len()
    }

    /// Live facets as vertex triples.
    pub fn facets(&self) -> Vec<[usize; 3]> {
        self.facets.iter().filter(|f| f.alive).map(|f| f.v).collect()
    }

    /// Distinct vertices of live facets, sorted.
    pub fn vertices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.facets.iter().filter(|f| f.alive).flat_map(|f| f.v).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    fn orient(&self, f: [usize; 3], q: usize) -> i128 {
        orient3d(self.pts[f[0]], self.pts[f[1]], self.pts[f[2]], self.pts[q])
    }

    /// Inserts point `p`, reporting facet births and deaths to `counter`.
    pub(crate) fn insert(&mut self, p: usize, counter: &mut StepCounter) {
        if self.inserted[p] {
            return;
        }
        if let Some(flat) = self.flat.as_mut() {
            let pts = self.pts;
            if let (Some(a), Some(b), Some(c)) = (flat.a, flat.b, flat.c) {
                if orient3d(pts[a], pts[b], pts[c], pts[p]) != 0 {
                    self.leave_flat(p, counter);
                    return;
                }
            }
            match (flat.a, flat.b, flat.c) {
                (None, _, _) => flat.a = Some(p),
                (Some(a), None, _) if pts[a] != pts[p] => flat.b = Some(p),
                (Some(a), Some(b), None) if !collinear3(pts[a], pts[b], pts[p]) => flat.c = Some(p),
                _ => {}
            }
            flat.buf.push(p);
            return;
        }
        self.insert_3d(p, counter);
    }

    fn leave_flat(&mut self, p: usize, counter: &mut StepCounter) {
        let flat = self.flat.take().expect("flat phase");
        let (a, b, c) = (flat.a.unwrap(), flat.b.unwrap(), flat.c.unwrap());
        let tet = [a, b, c, p];
        for &i in &tet {
            self.inserted[i] = true;
        }
        let base = self.facets.len();
        for skip in (0..4).rev() {
            let mut v = [0usize; 3];
            let mut j = 0;
            for (i, &t) in tet.iter().enumerate() {
                if i != skip {
                    v[j] = t;
                    j += 1;
                }
            }
            if self.orient(v, tet[skip]) > 0 {
                v.swap(1, 2);
            }
            self.facets.push(Facet { v, nb: [NONE; 3], alive: true, conf: Vec::new(), mark: 0 });
            counter.on_create();
        }
        for i in base..base + 4 {
            for k in 0..3 {
                let v = self.facets[i].v;
                let (u, w) = (v[(k + 1) % 3], v[(k + 2) % 3]);
                let j = (base..base + 4)
                    .find(|&j| j != i && self.facets[j].v.contains(&u) && self.facets[j].v.contains(&w))
                    .expect("tetrahedron adjacency");
                self.facets[i].nb[k] = j;
            }
        }
        for q in 0..self.pts.len() {
            if self.inserted[q] {
                continue;
            }
            for f in base..base + 4 {
                if self.orient(self.facets[f].v, q) > 0 {
                    self.facets[f].conf.push(q);
                    self.pconf[q].push(f);
                }
            }
        }
        for q in flat.buf {
            if q != a && q != b && q != c {
                self.insert_3d(q, counter);
            }
        }
    }

    fn insert_3d(&mut self, p: usize, counter: &mut StepCounter) {
        self.inserted[p] = true;
        let conf = std::mem::take(&mut self.pconf[p]);
        self.epoch += 1;
        let epoch = self.epoch;
        let mut visible = Vec::new();
        for f in conf {
            if self.facets[f].alive && self.facets[f].mark != epoch {
                self.facets[f].mark = epoch;
                visible.push(f);
            }
        }
        if visible.is_empty() {
            return;
        }

        // Horizon edges (u, w) of visible f against invisible neighbor g.
        let mut horizon = Vec::new();
        for &f in &visible {
            let fc = &self.facets[f];
            for k in 0..3 {
                let g = fc.nb[k];
                if self.facets[g].mark != epoch {
                    horizon.push((fc.v[(k + 1) % 3], fc.v[(k + 2) % 3], f, g));
                }
            }
        }

        let first_new = self.facets.len();
        for &(u, w, f, g) in &horizon {
            let h = self.facets.len();
            self.facets.push(Facet { v: [u, w, p], nb: [NONE, NONE, g], alive: true, conf: Vec::new(), mark: 0 });
            counter.on_create();
            let gk = self.facets[g].nb.iter().position(|&x| x == f).expect("symmetric adjacency");
            self.facets[g].nb[gk] = h;
            self.start_of[u] = h;
            self.end_of[w] = h;
        }
        for h in first_new..self.facets.len() {
            let [u, w, _] = self.facets[h].v;
            self.facets[h].nb[0] = self.start_of[w];
            self.facets[h].nb[1] = self.end_of[u];
        }

        for (i, &(_, _, f, g)) in horizon.iter().enumerate() {
            let h = first_new + i;
            let hv = self.facets[h].v;
            self.epoch += 1;
            let tag = self.epoch;
            let mut conf = Vec::new();
            for src in [f, g] {
                for &q in &self.facets[src].conf {
                    if q != p && !self.inserted[q] && self.stamp[q] != tag {
                        self.stamp[q] = tag;
                        if orient3d(self.pts[hv[0]], self.pts[hv[1]], self.pts[hv[2]], self.pts[q]) > 0 {
                            conf.push(q);
                        }
                    }
                }
            }
            for &q in &conf {
                self.pconf[q].push(h);
            }
            self.facets[h].conf = conf;
        }

        for f in visible {
            let fc = &mut self.facets[f];
            fc.alive = false;
            fc.conf = Vec::new();
            counter.on_destroy(f);
        }
    }
}

/// Runs the plan on `points`, counting facets per step. Batched steps count
/// net changes against the hull before the batch.
pub fn hull3_changes(points: &[P3], plan: &InsertionPlan) -> Result<ChangeStats> {
    if points.len() < 4 {
        return Err(Error::DegenerateInput);
    }
    let mut hull = IncrementalHull::new(points);
    let mut stats = ChangeStats::default();
    for step in plan.steps() {
        let mut counter = StepCounter::start(hull.next_facet_id());
        for &p in &plan.order[step] {
            hull.insert(p, &mut counter);
        }
        counter.finish(&mut stats);
    }
    if hull.is_flat() {
        return Err(Error::DegenerateInput);
    }
    Ok(stats)
}

/// Vertices of a triangulated convex hull of `points` (sorted ids), or
/// `None` when the points are coplanar or fewer than four. Every extreme
/// point is included; boundary points that are not extreme may be too.
pub fn hull_vertices(points: &[P3]) -> Option<Vec<usize>> {
    if points.len() < 4 {
        return None;
    }
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.shuffle(&mut Seed(0x4855_4c4c).rng());
    let mut hull = IncrementalHull::new(points);
    let mut counter = StepCounter::start(0);
    for p in order {
        hull.insert(p, &mut counter);
    }
    (!hull.is_flat()).then(|| hull.vertices())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn plan_of(order: Vec<usize>, batched: bool) -> InsertionPlan {
        InsertionPlan { order, batch_boundaries: vec![0], batched, levels: 2 }
    }

    /// Brute-force facets of points in general position.
    fn brute_facets(pts: &[P3], ids: &[usize]) -> Vec<[usize; 3]> {
        let mut out = Vec::new();
        for (x, &i) in ids.iter().enumerate() {
            for (y, &j) in ids.iter().enumerate().skip(x + 1) {
                for &k in ids.iter().skip(y + 1) {
                    let signs: Vec<i128> =
                        ids.iter().filter(|&&q| q != i && q != j && q != k).map(|&q| orient3d(pts[i], pts[j], pts[k], pts[q]).signum()).collect();
                    if signs.iter().all(|&s| s < 0) || signs.iter().all(|&s| s > 0) {
                        out.push(canon([i, j, k]));
                    }
                }
            }
        }
        out.sort();
        out
    }

    fn canon(mut f: [usize; 3]) -> [usize; 3] {
        f.sort();
        f
    }

    fn check_convex(h: &IncrementalHull, inserted: &[usize]) {
        let facets = h.facets();
        for f in &facets {
            for &q in inserted {
                assert!(h.orient(*f, q) <= 0, "point {q} outside facet {f:?}");
            }
        }
        let v = h.vertices().len();
        assert_eq!(facets.len(), 2 * v - 4, "Euler relation");
        for (i, fc) in h.facets.iter().enumerate().filter(|(_, f)| f.alive) {
            for &g in &fc.nb {
                assert!(h.facets[g].alive && h.facets[g].nb.contains(&i));
            }
        }
    }

    #[test]
    fn tetrahedron() {
        let pts = [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]];
        let s = hull3_changes(&pts, &plan_of(vec![0, 1, 2, 3], false)).unwrap();
        assert_eq!((s.total_created, s.total_destroyed), (4, 0));
        assert_eq!(s.created_per_step, vec![0, 0, 0, 4]);
    }

    #[test]
    fn five_points_one_batch_counts_hull_facets() {
        // Triangular bipyramid: 6 facets.
        let pts = [[0, 0, 0], [4, 0, 0], [0, 4, 0], [1, 1, 3], [1, 1, -3]];
        let s = hull3_changes(&pts, &plan_of(vec![3, 0, 1, 2, 4], true)).unwrap();
        assert_eq!(s.created_per_step, vec![6]);
        assert_eq!(s.total_destroyed, 0);
        assert_eq!(brute_facets(&pts, &[0, 1, 2, 3, 4]).len(), 6);
        let single = hull3_changes(&pts, &plan_of(vec![3, 0, 1, 2, 4], false)).unwrap();
        assert_eq!(single.created_per_step, vec![0, 0, 0, 4, 3]);
        assert_eq!(single.destroyed_per_step, vec![0, 0, 0, 0, 1]);
    }

    #[test]
    fn coplanar_input_is_degenerate() {
        let pts = [[0, 0, 0], [1, 0, 0], [0, 1, 0], [5, 5, 0], [2, 7, 0]];
        assert_eq!(hull3_changes(&pts, &plan_of(vec![0, 1, 2, 3, 4], false)), Err(Error::DegenerateInput));
        assert_eq!(hull3_changes(&pts[..3], &plan_of(vec![0, 1, 2], false)), Err(Error::DegenerateInput));
        assert_eq!(hull_vertices(&pts), None);
    }

    #[test]
    fn prefix_matches_from_scratch_hull() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let pts: Vec<P3> = (0..40).map(|_| [rng.random_range(0..1 << 20), rng.random_range(0..1 << 20), rng.random_range(0..1 << 20)]).collect();
            let mut h = IncrementalHull::new(&pts);
            let mut c = StepCounter::start(0);
            for p in 0..pts.len() {
                h.insert(p, &mut c);
                if p >= 3 {
                    let mut got: Vec<[usize; 3]> = h.facets().into_iter().map(canon).collect();
                    got.sort();
                    let ids: Vec<usize> = (0..=p).collect();
                    assert_eq!(got, brute_facets(&pts, &ids));
                }
            }
        }
    }

    #[test]
    fn degenerate_grids_stay_convex() {
        // Small integer grid: many coplanar and collinear subsets.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let pts: Vec<P3> = (0..60).map(|_| [rng.random_range(0..4), rng.random_range(0..4), rng.random_range(0..3)]).collect();
            let mut h = IncrementalHull::new(&pts);
            let mut c = StepCounter::start(0);
            let mut done = Vec::new();
            for p in 0..pts.len() {
                h.insert(p, &mut c);
                done.push(p);
                if !h.is_flat() {
                    check_convex(&h, &done);
                }
            }
        }
    }

    #[test]
    fn flat_prefix_then_apex() {
        // Square in z=0 then an apex: the step that leaves the plane creates
        // the whole pyramid.
        let pts = [[0, 0, 0], [2, 0, 0], [2, 2, 0], [0, 2, 0], [1, 1, 0], [1, 1, 5]];
        let s = hull3_changes(&pts, &plan_of(vec![0, 1, 2, 3, 4, 5], false)).unwrap();
        assert_eq!(s.created_per_step, vec![0, 0, 0, 0, 0, 6]);
        assert_eq!(s.destroyed_per_step, vec![0; 6]);
        let v = hull_vertices(&pts).unwrap();
        assert!([0, 1, 2, 3, 5].iter().all(|i| v.contains(i)));
    }
}
