use crate::data::{Dataset, Halfplane};
use crate::geom::{lower_hull, P2};

/// Cells below the lower envelope of the sampled points' dual lines
/// `f_p(s) = y_p - s * x_p`.
///
/// The envelope's pieces correspond to the sampled points' lower-hull
/// vertices; cell `i` is the vertical slab of slopes where vertex `i` is
/// lowest, below its dual line. No sample leaves one cell: the whole plane.
#[derive(Clone, Debug)]
pub(crate) struct PlaneCells {
    verts: Vec<P2>,
}

/// Sign of `f_p - f_v` where the slope parameter is pushed to an end.
fn below_at_infinity(p: P2, v: P2, plus: bool) -> bool {
    let dx = p[0] - v[0];
    if dx == 0 {
        p[1] < v[1]
    } else {
        (dx > 0) == plus
    }
}

impl PlaneCells {
    pub(crate) fn build(ds: &Dataset, sampled: &[usize]) -> Self {
        let mut pts: Vec<P2> = sampled.iter().map(|&i| ds.point(i).orig_xy()).collect();
        pts.sort_unstable();
        pts.dedup();
        let verts = lower_hull(&pts).into_iter().map(|i| pts[i]).collect();
        PlaneCells { verts }
    }

    pub(crate) fn len(&self) -> usize {
        self.verts.len().max(1)
    }

    /// Breakpoint slope between cells `i` and `i + 1` as `(dy, dx)`, `dx > 0`.
    fn breakpoint(&self, i: usize) -> (i128, i128) {
        let (a, b) = (self.verts[i], self.verts[i + 1]);
        ((b[1] - a[1]) as i128, (b[0] - a[0]) as i128)
    }

    pub(crate) fn locate(&self, h: &Halfplane) -> Option<usize> {
        if self.verts.is_empty() {
            return Some(0);
        }
        let (a, d) = (h.a as i128, h.d as i128);
        // Number of breakpoints strictly left of slope a/d.
        let (mut lo, mut hi) = (0, self.verts.len() - 1);
        while lo < hi {
            let mid = (lo + hi) / 2;
            let (dy, dx) = self.breakpoint(mid);
            if dy * d < a * dx {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        let v = self.verts[lo];
        let top = d * v[1] as i128 - a * v[0] as i128;
        ((h.b as i128) < top).then_some(lo)
    }

    /// Whether a range of point `p` meets cell `cell`: `f_p` dips below the
    /// cell's top line somewhere on its closed slab.
    pub(crate) fn conflicts(&self, cell: usize, p: P2) -> bool {
        let Some(&v) = self.verts.get(cell) else {
            return true;
        };
        let at = |(dy, dx): (i128, i128)| ((p[1] - v[1]) as i128 * dx - dy * (p[0] - v[0]) as i128) < 0;
        let left = if cell == 0 { below_at_infinity(p, v, false) } else { at(self.breakpoint(cell - 1)) };
        let right =
            if cell + 1 == self.verts.len() { below_at_infinity(p, v, true) } else { at(self.breakpoint(cell)) };
        left || right
    }
}
