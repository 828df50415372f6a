use num_bigint::BigInt;
use num_integer::Integer;

use crate::data::{Dataset, Halfspace};
use crate::geom::P3;
use crate::ric::hull_vertices;

/// `a * s + b * t = c` in the dual parameter plane.
type Line = (i128, i128, i128);

/// Reduced homogeneous point `(s, t) = (sn / den, tn / den)`, `den > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct RatPt {
    sn: i128,
    tn: i128,
    den: i128,
}

impl RatPt {
    fn meet(l: Line, m: Line) -> Option<RatPt> {
        let det = l.0 * m.1 - m.0 * l.1;
        if det == 0 {
            return None;
        }
        let sn = l.2 * m.1 - m.2 * l.1;
        let tn = l.0 * m.2 - m.0 * l.2;
        let (mut sn, mut tn, mut den) = if det < 0 { (-sn, -tn, -det) } else { (sn, tn, det) };
        let g = sn.gcd(&tn).gcd(&den);
        if g > 1 {
            sn /= g;
            tn /= g;
            den /= g;
        }
        Some(RatPt { sn, tn, den })
    }

    /// Sign-carrying value of `a * s + b * t - c`, scaled by `den`.
    fn eval(&self, l: Line) -> i128 {
        l.0 * self.sn + l.1 * self.tn - l.2 * self.den
    }

    fn big(&self) -> [BigInt; 3] {
        [BigInt::from(self.sn), BigInt::from(self.tn), BigInt::from(self.den)]
    }
}

/// Orientation of three homogeneous points with positive weights.
fn orient(p: &[BigInt; 3], q: &[BigInt; 3], r: &[BigInt; 3]) -> std::cmp::Ordering {
    let det = &p[0] * (&q[1] * &r[2] - &q[2] * &r[1]) - &p[1] * (&q[0] * &r[2] - &q[2] * &r[0])
        + &p[2] * (&q[0] * &r[1] - &q[1] * &r[0]);
    det.sign().cmp(&num_bigint::Sign::NoSign)
}

#[derive(Clone, Debug)]
struct Tri {
    plane: usize,
    v: [RatPt; 3],
}

/// Cells below the lower envelope of the sampled points' dual planes
/// `f_p(s, t) = z_p - s * x_p - t * y_p` over the window `|s|, |t| <= W`.
///
/// Each envelope face is the window clipped by `f_i <= f_j` for all other
/// candidates, then fan-triangulated from its lowest vertex; a cell is the
/// prism below one triangle. Without a sample there is one cell.
#[derive(Clone, Debug)]
pub(crate) struct SpaceCells {
    window: i64,
    planes: Vec<P3>,
    tris: Vec<Tri>,
    faces: Vec<Vec<usize>>,
}

impl SpaceCells {
    pub(crate) fn build(ds: &Dataset, sampled: &[usize], window: i64) -> Self {
        let pts: Vec<P3> = sampled.iter().map(|&i| ds.point(i).orig).collect();
        let mut planes: Vec<P3> = match hull_vertices(&pts) {
            Some(v) => v.into_iter().map(|i| pts[i]).collect(),
            None => pts,
        };
        planes.sort_unstable();
        planes.dedup();

        let w = window as i128;
        let box_lines: [Line; 4] = [(0, 1, -w), (1, 0, w), (0, 1, w), (1, 0, -w)];
        let mut tris = Vec::new();
        let mut faces = vec![Vec::new(); planes.len()];
        for (i, pi) in planes.iter().enumerate() {
            // Counter-clockwise window, each vertex with its outgoing edge.
            let mut poly: Vec<(RatPt, Line)> = (0..4)
                .map(|k| (RatPt::meet(box_lines[(k + 3) % 4], box_lines[k]).unwrap(), box_lines[k]))
                .collect();
            for (j, pj) in planes.iter().enumerate() {
                if j == i || poly.is_empty() {
                    continue;
                }
                let clip: Line =
                    ((pj[0] - pi[0]) as i128, (pj[1] - pi[1]) as i128, (pj[2] - pi[2]) as i128);
                poly = clip_polygon(&poly, clip);
            }
            if poly.len() < 3 {
                continue;
            }
            let bottom = lowest_vertex(&poly, *pi);
            let n = poly.len();
            let b = poly[bottom].0;
            for k in 1..n - 1 {
                let v1 = poly[(bottom + k) % n].0;
                let v2 = poly[(bottom + k + 1) % n].0;
                if orient(&b.big(), &v1.big(), &v2.big()) == std::cmp::Ordering::Greater {
                    faces[i].push(tris.len());
                    tris.push(Tri { plane: i, v: [b, v1, v2] });
                }
            }
        }
        SpaceCells { window, planes, tris, faces }
    }

    pub(crate) fn len(&self) -> usize {
        if self.planes.is_empty() {
            1
        } else {
            self.tris.len()
        }
    }

    pub(crate) fn locate(&self, h: &Halfspace) -> Option<usize> {
        let (a, b, c, d) = (h.a as i128, h.b as i128, h.c as i128, h.d as i128);
        let w = self.window as i128;
        if a.abs() > w * d || b.abs() > w * d {
            return None;
        }
        if self.planes.is_empty() {
            return Some(0);
        }
        let value = |p: &P3| d * p[2] as i128 - a * p[0] as i128 - b * p[1] as i128;
        let min = self.planes.iter().map(value).min().expect("nonempty");
        if c >= min {
            return None;
        }
        let q = [BigInt::from(a), BigInt::from(b), BigInt::from(d)];
        for (i, p) in self.planes.iter().enumerate() {
            if value(p) != min {
                continue;
            }
            for &t in &self.faces[i] {
                let v = self.tris[t].v.map(|x| x.big());
                if (0..3).all(|k| orient(&v[k], &v[(k + 1) % 3], &q) != std::cmp::Ordering::Less) {
                    return Some(t);
                }
            }
        }
        None
    }

    /// Whether `f_p` dips below the cell's top triangle at a vertex.
    pub(crate) fn conflicts(&self, cell: usize, p: P3) -> bool {
        if self.planes.is_empty() {
            return true;
        }
        let tri = &self.tris[cell];
        let top = self.planes[tri.plane];
        let (dx, dy, dz) = ((p[0] - top[0]) as i128, (p[1] - top[1]) as i128, (p[2] - top[2]) as i128);
        tri.v.iter().any(|v| dz * v.den - dx * v.sn - dy * v.tn < 0)
    }

    /// Window coordinates of the cell's top triangle.
    #[cfg(test)]
    pub(crate) fn triangle(&self, cell: usize) -> [(f64, f64); 3] {
        self.tris[cell].v.map(|v| (v.sn as f64 / v.den as f64, v.tn as f64 / v.den as f64))
    }
}

/// Keeps the part of a convex polygon where `a * s + b * t <= c`.
fn clip_polygon(poly: &[(RatPt, Line)], clip: Line) -> Vec<(RatPt, Line)> {
    if clip.0 == 0 && clip.1 == 0 {
        return if clip.2 >= 0 { poly.to_vec() } else { Vec::new() };
    }
    let n = poly.len();
    let mut out: Vec<(RatPt, Line)> = Vec::with_capacity(n + 1);
    for k in 0..n {
        let (p, e) = poly[k];
        let q = poly[(k + 1) % n].0;
        let (sp, sq) = (p.eval(clip), q.eval(clip));
        if sp <= 0 {
            if sq > 0 {
                if sp == 0 {
                    out.push((p, clip));
                } else {
                    out.push((p, e));
                    out.push((RatPt::meet(e, clip).expect("crossing edge"), clip));
                }
            } else {
                out.push((p, e));
            }
        } else if sq < 0 {
            out.push((RatPt::meet(e, clip).expect("crossing edge"), e));
        }
    }
    // Drop repeated vertices.
    let mut dedup: Vec<(RatPt, Line)> = Vec::with_capacity(out.len());
    for v in out {
        if dedup.last().is_none_or(|l| l.0 != v.0) {
            dedup.push(v);
        }
    }
    while dedup.len() > 1 && dedup[0].0 == dedup[dedup.len() - 1].0 {
        dedup.pop();
    }
    dedup
}

/// Index of the vertex minimizing `f_p` (ties: first).
fn lowest_vertex(poly: &[(RatPt, Line)], p: P3) -> usize {
    let val = |v: &RatPt| -> (BigInt, BigInt) {
        let num = BigInt::from(p[2]) * v.den - BigInt::from(p[0]) * v.sn - BigInt::from(p[1]) * v.tn;
        (num, BigInt::from(v.den))
    };
    let mut best = 0;
    let mut best_val = val(&poly[0].0);
    for (k, (v, _)) in poly.iter().enumerate().skip(1) {
        let cur = val(v);
        if &cur.0 * &best_val.1 < &best_val.0 * &cur.1 {
            best = k;
            best_val = cur;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{RawPoint, Seed};
    use crate::gen::{generate, Family, GenSpec};

    fn area(t: [(f64, f64); 3]) -> f64 {
        let [(ax, ay), (bx, by), (cx, cy)] = t;
        ((bx - ax) * (cy - ay) - (cx - ax) * (by - ay)) / 2.0
    }

    #[test]
    fn triangles_tile_the_window() {
        let raw = generate(&GenSpec::new(Family::Uniform3, 60, 1, Seed(3))).unwrap();
        let ds = Dataset::reduce_to_rank_space(&raw).unwrap();
        let ids: Vec<usize> = (0..60).collect();
        let w = 1 << 8;
        let cells = SpaceCells::build(&ds, &ids, w);
        let total: f64 = (0..cells.len()).map(|c| area(cells.triangle(c))).sum();
        let want = (2.0 * w as f64).powi(2);
        assert!((total - want).abs() < 1e-6 * want, "{total} vs {want}");
        assert!((0..cells.len()).all(|c| area(cells.triangle(c)) > 0.0));
    }

    #[test]
    fn single_plane_is_two_triangles() {
        let ds = Dataset::reduce_to_rank_space(&[RawPoint::new(&[3, 4, 5], 0)]).unwrap();
        let cells = SpaceCells::build(&ds, &[0], 16);
        assert_eq!(cells.len(), 2);
        let below = Halfspace { a: 1, b: 1, c: 5 - 3 - 4 - 1, d: 1 };
        let on = Halfspace { c: 5 - 3 - 4, ..below };
        assert!(cells.locate(&below).is_some());
        assert_eq!(cells.locate(&on), None);
        let outside = Halfspace { a: 17, ..below };
        assert_eq!(cells.locate(&outside), None);
    }
}
