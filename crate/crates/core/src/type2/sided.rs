use super::grid::{build_grid, GridStructure, DEFAULT_DEPTH_BUDGET};
use super::WPoint;
use crate::data::{merge_histograms, Histogram};
use crate::error::{Error, Result};

/// Reflection constant for mirrored copies; rank coordinates stay far below.
const MIRROR: i64 = 1 << 40;
/// Subtrees this small are scanned.
const LEAF: usize = 16;

fn mirror_x(p: &WPoint) -> WPoint {
    WPoint { x: MIRROR - p.x, ..*p }
}

fn mirror_y(p: &WPoint) -> WPoint {
    WPoint { y: MIRROR - p.y, ..*p }
}

fn clamp(v: i64) -> i64 {
    v.clamp(-1, 2 * MIRROR)
}

fn scan(points: &[WPoint], keep: impl Fn(&WPoint) -> bool) -> Histogram {
    Histogram::from_items(points.iter().filter(|p| keep(p)).map(|p| (p.color, p.weight)))
}

fn merge2(a: Option<Histogram>, b: Option<Histogram>) -> Option<Histogram> {
    Some(merge_histograms(&[&a?, &b?]).expect("sorted parts"))
}

#[derive(Clone, Debug)]
enum Payload3 {
    Scan(Vec<WPoint>),
    /// `upto` answers `x <= b`; `from` answers `x >= a` on mirrored x.
    Grids { upto: GridStructure, from: GridStructure },
}

#[derive(Clone, Debug)]
struct Node3 {
    payload: Payload3,
    children: Option<(Box<Node3>, Box<Node3>, usize)>,
}

/// Capped 3-sided structure for `a <= x <= b, y <= c`: a range tree over x
/// whose nodes keep a 2-sided grid and its x-mirrored twin.
#[derive(Clone, Debug)]
pub struct Capped3 {
    tau: usize,
    xs: Vec<i64>,
    root: Option<Node3>,
}

fn build3(sorted: &[WPoint], tau: usize) -> Result<Node3> {
    if sorted.len() <= LEAF {
        return Ok(Node3 { payload: Payload3::Scan(sorted.to_vec()), children: None });
    }
    let upto = build_grid(sorted, tau, DEFAULT_DEPTH_BUDGET)?;
    let mirrored: Vec<WPoint> = sorted.iter().map(mirror_x).collect();
    let from = build_grid(&mirrored, tau, DEFAULT_DEPTH_BUDGET)?;
    let mid = sorted.len() / 2;
    let l = build3(&sorted[..mid], tau)?;
    let r = build3(&sorted[mid..], tau)?;
    Ok(Node3 { payload: Payload3::Grids { upto, from }, children: Some((Box::new(l), Box::new(r), mid)) })
}

impl Node3 {
    fn upto(&self, b: i64, c: i64) -> Option<Histogram> {
        match &self.payload {
            Payload3::Scan(p) => Some(scan(p, |p| p.x <= b && p.y <= c)),
            Payload3::Grids { upto, .. } => upto.query(b, c),
        }
    }

    fn from(&self, a: i64, c: i64) -> Option<Histogram> {
        match &self.payload {
            Payload3::Scan(p) => Some(scan(p, |p| p.x >= a && p.y <= c)),
            Payload3::Grids { from, .. } => from.query(MIRROR - a, c),
        }
    }

    /// `lo..hi` indexes this node's points, all inside `[a, b]`.
    fn query(&self, lo: usize, hi: usize, a: i64, b: i64, c: i64) -> Option<Histogram> {
        match (&self.payload, &self.children) {
            (Payload3::Scan(p), _) => Some(scan(p, |p| a <= p.x && p.x <= b && p.y <= c)),
            (_, Some((l, r, mid))) => {
                if hi <= *mid {
                    l.query(lo, hi, a, b, c)
                } else if lo >= *mid {
                    r.query(lo - mid, hi - mid, a, b, c)
                } else {
                    merge2(l.from(a, c), r.upto(b, c))
                }
            }
            _ => unreachable!("grid nodes have children"),
        }
    }
}

pub fn build_3sided(points: &[WPoint], tau: usize) -> Result<Capped3> {
    if tau < 1 {
        return Err(Error::BadTau);
    }
    let mut sorted = points.to_vec();
    sorted.sort_unstable_by_key(|p| p.x);
    let xs = sorted.iter().map(|p| p.x).collect();
    let root = if sorted.is_empty() { None } else { Some(build3(&sorted, tau)?) };
    Ok(Capped3 { tau, xs, root })
}

impl Capped3 {
    pub fn tau(&self) -> usize {
        self.tau
    }

    /// `[a, b] x (-inf, c]`; `None` is NULL.
    pub fn query(&self, a: i64, b: i64, c: i64) -> Option<Histogram> {
        let (a, b, c) = (clamp(a), clamp(b), clamp(c));
        let lo = self.xs.partition_point(|&x| x < a);
        let hi = self.xs.partition_point(|&x| x <= b);
        match &self.root {
            Some(root) if lo < hi => root.query(lo, hi, a, b, c),
            _ => Some(Histogram::new()),
        }
    }
}

#[derive(Clone, Debug)]
enum Payload4 {
    Scan(Vec<WPoint>),
    /// `upto` answers `y <= d`; `from` answers `y >= c` on mirrored y.
    Sided { upto: Capped3, from: Capped3 },
}

#[derive(Clone, Debug)]
struct Node4 {
    payload: Payload4,
    children: Option<(Box<Node4>, Box<Node4>, usize)>,
}

/// Capped 4-sided structure: a range tree over y of 3-sided structures and
/// their y-mirrored twins.
#[derive(Clone, Debug)]
pub struct Capped4 {
    tau: usize,
    ys: Vec<i64>,
    root: Option<Node4>,
}

fn build4(sorted: &[WPoint], tau: usize) -> Result<Node4> {
    if sorted.len() <= LEAF {
        return Ok(Node4 { payload: Payload4::Scan(sorted.to_vec()), children: None });
    }
    let upto = build_3sided(sorted, tau)?;
    let mirrored: Vec<WPoint> = sorted.iter().map(mirror_y).collect();
    let from = build_3sided(&mirrored, tau)?;
    let mid = sorted.len() / 2;
    let l = build4(&sorted[..mid], tau)?;
    let r = build4(&sorted[mid..], tau)?;
    Ok(Node4 { payload: Payload4::Sided { upto, from }, children: Some((Box::new(l), Box::new(r), mid)) })
}

impl Node4 {
    fn upto(&self, a: i64, b: i64, d: i64) -> Option<Histogram> {
        match &self.payload {
            Payload4::Scan(p) => Some(scan(p, |p| a <= p.x && p.x <= b && p.y <= d)),
            Payload4::Sided { upto, .. } => upto.query(a, b, d),
        }
    }

    fn from(&self, a: i64, b: i64, c: i64) -> Option<Histogram> {
        match &self.payload {
            Payload4::Scan(p) => Some(scan(p, |p| a <= p.x && p.x <= b && p.y >= c)),
            Payload4::Sided { from, .. } => from.query(a, b, MIRROR - c),
        }
    }

    fn query(&self, lo: usize, hi: usize, q: [i64; 4]) -> Option<Histogram> {
        let [a, b, c, d] = q;
        match (&self.payload, &self.children) {
            (Payload4::Scan(p), _) => Some(scan(p, |p| a <= p.x && p.x <= b && c <= p.y && p.y <= d)),
            (_, Some((l, r, mid))) => {
                if hi <= *mid {
                    l.query(lo, hi, q)
                } else if lo >= *mid {
                    r.query(lo - mid, hi - mid, q)
                } else {
                    merge2(l.from(a, b, c), r.upto(a, b, d))
                }
            }
            _ => unreachable!("inner nodes have children"),
        }
    }
}

pub fn build_4sided(points: &[WPoint], tau: usize) -> Result<Capped4> {
    if tau < 1 {
        return Err(Error::BadTau);
    }
    let mut sorted = points.to_vec();
    sorted.sort_unstable_by_key(|p| p.y);
    let ys = sorted.iter().map(|p| p.y).collect();
    let root = if sorted.is_empty() { None } else { Some(build4(&sorted, tau)?) };
    Ok(Capped4 { tau, ys, root })
}

impl Capped4 {
    pub fn tau(&self) -> usize {
        self.tau
    }

    /// `[a, b] x [c, d]`; `None` is NULL.
    pub fn query(&self, a: i64, b: i64, c: i64, d: i64) -> Option<Histogram> {
        let q = [a, b, c, d].map(clamp);
        let lo = self.ys.partition_point(|&y| y < q[2]);
        let hi = self.ys.partition_point(|&y| y <= q[3]);
        if q[0] > q[1] {
            return Some(Histogram::new());
        }
        match &self.root {
            Some(root) if lo < hi => root.query(lo, hi, q),
            _ => Some(Histogram::new()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{Color, Dataset, Rect, Seed};
    use crate::gen::{generate, Family, GenSpec};
    use crate::oracle::oracle_type2;
    use crate::queries::random_rect;
    use crate::type2::points_of;

    fn weighted(m: usize, colors: usize, seed: u64) -> Dataset {
        let spec = GenSpec::new(Family::Uniform2, m, colors, Seed(seed)).weights(3);
        Dataset::reduce_to_rank_space(&generate(&spec).unwrap()).unwrap()
    }

    fn check(ans: Option<Histogram>, want: Histogram, tau: usize) {
        match ans {
            Some(h) => assert_eq!(h, want),
            None => assert!(want.len() > tau, "NULL with k = {}", want.len()),
        }
    }

    #[test]
    fn three_sided_matches_oracle() {
        let ds = weighted(300, 10, 1);
        let mut rng = Seed(2).rng();
        for tau in [2, 4, 10] {
            let s = build_3sided(&points_of(&ds), tau).unwrap();
            for _ in 0..400 {
                let r = random_rect(300, 3, &mut rng);
                check(s.query(r.x_lo, r.x_hi, r.y_hi), oracle_type2(&ds, &r).unwrap(), tau);
            }
            let full = s.query(0, 400, 400);
            check(full, oracle_type2(&ds, &Rect::two_sided(400, 400)).unwrap(), tau);
        }
    }

    #[test]
    fn four_sided_matches_oracle() {
        let ds = weighted(250, 8, 3);
        let mut rng = Seed(4).rng();
        for tau in [2, 8] {
            let s = build_4sided(&points_of(&ds), tau).unwrap();
            for sides in 2..=4 {
                for _ in 0..300 {
                    let r = random_rect(250, sides, &mut rng);
                    check(s.query(r.x_lo, r.x_hi, r.y_lo, r.y_hi), oracle_type2(&ds, &r).unwrap(), tau);
                }
            }
        }
    }

    #[test]
    fn degenerate_four_sided_equals_three_sided() {
        let ds = weighted(200, 5, 5);
        let pts = points_of(&ds);
        let (s3, s4) = (build_3sided(&pts, 5).unwrap(), build_4sided(&pts, 5).unwrap());
        let mut rng = Seed(6).rng();
        for _ in 0..200 {
            let r = random_rect(200, 3, &mut rng);
            assert_eq!(s4.query(r.x_lo, r.x_hi, 0, r.y_hi), s3.query(r.x_lo, r.x_hi, r.y_hi));
        }
    }

    #[test]
    fn empty_ranges() {
        let s = build_4sided(&[], 3).unwrap();
        assert_eq!(s.query(0, 10, 0, 10), Some(Histogram::new()));
        let pts = [WPoint { x: 1, y: 1, color: Color(0), weight: 1 }];
        let s = build_4sided(&pts, 3).unwrap();
        assert_eq!(s.query(2, 1, 0, 10), Some(Histogram::new()));
        assert_eq!(build_3sided(&pts, 0).unwrap_err(), Error::BadTau);
    }
}
