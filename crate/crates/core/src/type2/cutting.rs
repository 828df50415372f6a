use super::WPoint;
use crate::data::Color;

/// Origin-cornered cells `[0, X_j] x [0, Y_j]` with `X` strictly decreasing
/// and `Y` strictly increasing. Each cell holds at most `2t` colors; a point
/// in no cell dominates at least `t` colors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredShallowCutting {
    pub t: usize,
    pub corners: Vec<(i64, i64)>,
    /// Sorted colors inside each cell.
    pub clists: Vec<Vec<Color>>,
}

/// Staircase sweep over points with distinct x and distinct y (rank space).
///
/// Starts at `(x_max, 0)` and alternates: move up until the corner dominates
/// `2t` colors or passes `y_max` (a cell corner), then move left until it
/// dominates only `t` colors.
pub fn build_shallow_cutting(points: &[WPoint], t: usize) -> ColoredShallowCutting {
    let t = t.max(1);
    if points.is_empty() {
        return ColoredShallowCutting { t, corners: vec![(0, 1)], clists: vec![Vec::new()] };
    }
    let x_max = points.iter().map(|p| p.x).max().unwrap();
    let y_max = points.iter().map(|p| p.y).max().unwrap();
    let x_min = points.iter().map(|p| p.x).min().unwrap().min(0);
    let y_min = points.iter().map(|p| p.y).min().unwrap().min(0);
    let mut by_x: Vec<&WPoint> = points.iter().collect();
    by_x.sort_unstable_by_key(|p| p.x);
    let mut by_y: Vec<&WPoint> = points.iter().collect();
    by_y.sort_unstable_by_key(|p| p.y);
    let colors = points.iter().map(|p| p.color.index()).max().unwrap() + 1;
    let mut count = vec![0usize; colors];
    let mut distinct = 0usize;

    let (mut x, mut y) = (x_max, y_min);
    // Points with y <= current y, in y order, not yet swept in.
    let mut iy = by_y.partition_point(|p| p.y <= y);
    let mut ix = by_x.len();
    for p in &by_y[..iy] {
        count[p.color.index()] += 1;
        distinct += usize::from(count[p.color.index()] == 1);
    }
    let inside = |p: &WPoint, x: i64, y: i64| p.x <= x && p.y <= y;
    let mut corners = Vec::new();
    let mut clists = Vec::new();
    loop {
        // Up.
        while distinct < 2 * t && y <= y_max {
            y += 1;
            while iy < by_y.len() && by_y[iy].y <= y {
                let p = by_y[iy];
                if p.x <= x {
                    count[p.color.index()] += 1;
                    distinct += usize::from(count[p.color.index()] == 1);
                }
                iy += 1;
            }
        }
        corners.push((x, y));
        let mut cl: Vec<Color> =
            (0..colors).filter(|&c| count[c] > 0).map(|c| Color(c as u32)).collect();
        cl.sort_unstable();
        clists.push(cl);
        if y > y_max {
            break;
        }
        // Left.
        while ix > 0 && by_x[ix - 1].x > x {
            ix -= 1;
        }
        while distinct > t && x > x_min {
            while ix > 0 && by_x[ix - 1].x >= x {
                let p = by_x[ix - 1];
                if inside(p, x, y) {
                    count[p.color.index()] -= 1;
                    distinct -= usize::from(count[p.color.index()] == 0);
                }
                ix -= 1;
            }
            x -= 1;
        }
    }
    ColoredShallowCutting { t, corners, clists }
}

impl ColoredShallowCutting {
    /// Clamps a query point into the swept extent.
    pub fn clamp(&self, qx: i64, qy: i64) -> (i64, i64) {
        match (self.corners.first(), self.corners.last()) {
            (Some(first), Some(last)) => (qx.min(first.0), qy.min(last.1)),
            _ => (qx, qy),
        }
    }

    pub fn len(&self) -> usize {
        self.corners.len()
    }

    pub fn is_empty(&self) -> bool {
        self.corners.is_empty()
    }

    /// Smallest-area cell containing `(qx, qy)`, or `None`. Coordinates past
    /// the data extent (`x_max`, `y_max + 1`) are clamped first; this keeps
    /// the dominated point set unchanged.
    pub fn locate(&self, qx: i64, qy: i64) -> Option<usize> {
        let (qx, qy) = self.clamp(qx, qy);
        // Cells with X >= qx form a prefix; cells with Y >= qy a suffix.
        let end = self.corners.partition_point(|c| c.0 >= qx);
        let start = self.corners.partition_point(|c| c.1 < qy);
        (start..end).min_by_key(|&j| {
            let (x, y) = self.corners[j];
            (x as i128 + 1) * (y as i128 + 1)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{Dataset, Seed};
    use crate::gen::{generate, Family, GenSpec};
    use crate::type2::points_of;
    use rand::Rng;

    fn wp(x: i64, y: i64, c: u32) -> WPoint {
        WPoint { x, y, color: Color(c), weight: 1 }
    }

    fn colors_dominated(pts: &[WPoint], x: i64, y: i64) -> usize {
        let mut c: Vec<Color> = pts.iter().filter(|p| p.x <= x && p.y <= y).map(|p| p.color).collect();
        c.sort_unstable();
        c.dedup();
        c.len()
    }

    #[test]
    fn anti_diagonal_example() {
        let pts = [wp(1, 4, 0), wp(2, 3, 1), wp(3, 2, 2), wp(4, 1, 3)];
        let sc = build_shallow_cutting(&pts, 2);
        assert_eq!(sc.corners, vec![(4, 4), (2, 5)]);
        assert_eq!(sc.clists.iter().map(Vec::len).collect::<Vec<_>>(), vec![4, 2]);
        assert_eq!(sc.locate(3, 1), Some(0));
        assert_eq!(sc.locate(1, 1), Some(1));
        assert_eq!(sc.locate(3, 5), None);
        assert_eq!(sc.locate(1, 5), Some(1));
        assert_eq!(sc.locate(9, 2), Some(0));
    }

    #[test]
    fn few_colors_single_cell() {
        let pts = [wp(1, 2, 0), wp(2, 1, 0), wp(3, 3, 1)];
        let sc = build_shallow_cutting(&pts, 2);
        assert_eq!(sc.corners, vec![(3, 4)]);
        assert_eq!(sc.clists, vec![vec![Color(0), Color(1)]]);
        assert_eq!(sc.locate(1, 1), Some(0));
    }

    #[test]
    fn random_invariants() {
        for seed in 0..10 {
            let ds = Dataset::reduce_to_rank_space(&generate(&GenSpec::new(Family::Uniform2, 200, 20, Seed(seed))).unwrap())
                .unwrap();
            let pts = points_of(&ds);
            let t = 3;
            let sc = build_shallow_cutting(&pts, t);
            assert!(sc.corners.windows(2).all(|w| w[0].0 > w[1].0 && w[0].1 < w[1].1));
            for (&(x, y), cl) in sc.corners.iter().zip(&sc.clists) {
                assert!(cl.len() <= 2 * t);
                assert_eq!(cl.len(), colors_dominated(&pts, x, y));
            }
            assert!(sc.len() <= 4 * 200 / t + 1);
            let mut rng = Seed(seed).rng();
            for _ in 0..1000 {
                let (qx, qy) = sc.clamp(rng.random_range(0..=203), rng.random_range(0..=203));
                let holders: Vec<usize> =
                    (0..sc.len()).filter(|&j| qx <= sc.corners[j].0 && qy <= sc.corners[j].1).collect();
                match sc.locate(qx, qy) {
                    None => {
                        assert!(holders.is_empty());
                        assert!(colors_dominated(&pts, qx, qy) >= t);
                    }
                    Some(j) => assert!(holders.contains(&j)),
                }
            }
        }
    }
}
