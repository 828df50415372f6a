//! Static 3D kd-tree over keyed points with subtree min/max key aggregates,
//! answering dominance (`p <= corner`) queries.

const LEAF: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Entry {
    at: [i64; 3],
    key: u32,
    id: usize,
}

#[derive(Clone, Debug)]
struct Node {
    lo: [i64; 3],
    hi: [i64; 3],
    /// `(key, id)` of the minimum and maximum key in the subtree.
    min: (u32, usize),
    max: (u32, usize),
    start: usize,
    end: usize,
    children: Option<(usize, usize)>,
}

/// Keyed point set supporting dominance min/max/report queries.
#[derive(Clone, Debug)]
pub struct KdTree {
    entries: Vec<Entry>,
    nodes: Vec<Node>,
}

fn le3(a: &[i64; 3], b: &[i64; 3]) -> bool {
    a[0] <= b[0] && a[1] <= b[1] && a[2] <= b[2]
}

impl KdTree {
    /// Builds from `(coordinates, key, id)` triples.
    pub fn build(items: impl IntoIterator<Item = ([i64; 3], u32, usize)>) -> Self {
        let mut entries: Vec<Entry> =
            items.into_iter().map(|(at, key, id)| Entry { at, key, id }).collect();
        let mut nodes = Vec::new();
        if !entries.is_empty() {
            let n = entries.len();
            Self::build_rec(&mut entries, 0, n, 0, &mut nodes);
        }
        KdTree { entries, nodes }
    }

    fn build_rec(e: &mut [Entry], start: usize, end: usize, depth: usize, nodes: &mut Vec<Node>) -> usize {
        let slice = &e[start..end];
        let mut lo = slice[0].at;
        let mut hi = slice[0].at;
        let mut min = (slice[0].key, slice[0].id);
        let mut max = min;
        for x in slice {
            for a in 0..3 {
                lo[a] = lo[a].min(x.at[a]);
                hi[a] = hi[a].max(x.at[a]);
            }
            if x.key < min.0 {
                min = (x.key, x.id);
            }
            if x.key > max.0 {
                max = (x.key, x.id);
            }
        }
        let me = nodes.len();
        nodes.push(Node { lo, hi, min, max, start, end, children: None });
        if end - start > LEAF {
            // Widest axis; ties go to the depth-cycled axis.
            let axis = (0..3).max_by_key(|&a| (hi[a] - lo[a], a == depth % 3)).unwrap_or(0);
            let mid = (start + end) / 2;
            e[start..end].select_nth_unstable_by_key(mid - start, |x| (x.at[axis], x.id));
            let l = Self::build_rec(e, start, mid, depth + 1, nodes);
            let r = Self::build_rec(e, mid, end, depth + 1, nodes);
            nodes[me].children = Some((l, r));
        }
        me
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Minimum key among points dominated by `corner`, with a witness.
    pub fn dominance_min(&self, corner: &[i64; 3]) -> Option<(u32, usize)> {
        let mut best = None;
        if !self.nodes.is_empty() {
            self.min_rec(0, corner, &mut best);
        }
        best
    }

    fn min_rec(&self, v: usize, corner: &[i64; 3], best: &mut Option<(u32, usize)>) {
        let n = &self.nodes[v];
        if !le3(&n.lo, corner) || best.is_some_and(|b| n.min.0 >= b.0) {
            return;
        }
        if le3(&n.hi, corner) {
            *best = Some(n.min);
            return;
        }
        match n.children {
            Some((l, r)) => {
                let (a, b) = if self.nodes[l].min.0 <= self.nodes[r].min.0 { (l, r) } else { (r, l) };
                self.min_rec(a, corner, best);
                self.min_rec(b, corner, best);
            }
            None => {
                for x in &self.entries[n.start..n.end] {
                    if le3(&x.at, corner) && best.is_none_or(|b| x.key < b.0) {
                        *best = Some((x.key, x.id));
                    }
                }
            }
        }
    }

    /// Maximum key among points dominated by `corner`, with a witness.
    pub fn dominance_max(&self, corner: &[i64; 3]) -> Option<(u32, usize)> {
        let mut best = None;
        if !self.nodes.is_empty() {
            self.max_rec(0, corner, &mut best);
        }
        best
    }

    fn max_rec(&self, v: usize, corner: &[i64; 3], best: &mut Option<(u32, usize)>) {
        let n = &self.nodes[v];
        if !le3(&n.lo, corner) || best.is_some_and(|b| n.max.0 <= b.0) {
            return;
        }
        if le3(&n.hi, corner) {
            *best = Some(n.max);
            return;
        }
        match n.children {
            Some((l, r)) => {
                let (a, b) = if self.nodes[l].max.0 >= self.nodes[r].max.0 { (l, r) } else { (r, l) };
                self.max_rec(a, corner, best);
                self.max_rec(b, corner, best);
            }
            None => {
                for x in &self.entries[n.start..n.end] {
                    if le3(&x.at, corner) && best.is_none_or(|b| x.key > b.0) {
                        *best = Some((x.key, x.id));
                    }
                }
            }
        }
    }

    /// Some point dominated by `corner`.
    pub fn report_one(&self, corner: &[i64; 3]) -> Option<usize> {
        let mut found = None;
        self.for_each_dominated(corner, |id| {
            found = Some(id);
            false
        });
        found
    }

    /// Calls `f` on every dominated point id until `f` returns `false`.
    pub fn for_each_dominated(&self, corner: &[i64; 3], mut f: impl FnMut(usize) -> bool) {
        if !self.nodes.is_empty() {
            self.each_rec(0, corner, &mut f);
        }
    }

    fn each_rec(&self, v: usize, corner: &[i64; 3], f: &mut impl FnMut(usize) -> bool) -> bool {
        let n = &self.nodes[v];
        if !le3(&n.lo, corner) {
            return true;
        }
        let all = le3(&n.hi, corner);
        match n.children {
            Some((l, r)) if !all => self.each_rec(l, corner, f) && self.each_rec(r, corner, f),
            _ => {
                for x in &self.entries[n.start..n.end] {
                    if (all || le3(&x.at, corner)) && !f(x.id) {
                        return false;
                    }
                }
                true
            }
        }
    }
}
