//! Exact integer predicates. Inputs are bounded by `COORD_LIMIT`, so every
//! determinant here fits in `i128`.

pub type P2 = [i64; 2];
pub type P3 = [i64; 3];

/// Twice the signed area of `(a, b, c)`; positive for a left turn.
pub fn orient2d(a: P2, b: P2, c: P2) -> i128 {
    let (bx, by) = ((b[0] - a[0]) as i128, (b[1] - a[1]) as i128);
    let (cx, cy) = ((c[0] - a[0]) as i128, (c[1] - a[1]) as i128);
    bx * cy - by * cx
}

/// Six times the signed volume of `(a, b, c, d)`: positive when `d` lies on
/// the side of plane `abc` that sees `a, b, c` counter-clockwise.
pub fn orient3d(a: P3, b: P3, c: P3, d: P3) -> i128 {
    let u = sub3(b, a);
    let v = sub3(c, a);
    let w = sub3(d, a);
    let n = cross3(u, v);
    n[0] * w[0] + n[1] * w[1] + n[2] * w[2]
}

fn sub3(a: P3, b: P3) -> [i128; 3] {
    [(a[0] - b[0]) as i128, (a[1] - b[1]) as i128, (a[2] - b[2]) as i128]
}

fn cross3(u: [i128; 3], v: [i128; 3]) -> [i128; 3] {
    [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]
}

pub fn collinear3(a: P3, b: P3, c: P3) -> bool {
    cross3(sub3(b, a), sub3(c, a)) == [0, 0, 0]
}

/// Lower convex hull of points sorted by `(x, y)`, left to right, with
/// collinear points removed. Vertical runs at either end keep only their
/// lowest point.
pub fn lower_hull(sorted: &[P2]) -> Vec<usize> {
    let mut hull: Vec<usize> = Vec::new();
    for (i, &p) in sorted.iter().enumerate() {
        if let Some(&last) = hull.last() {
            if sorted[last][0] == p[0] {
                // Same x, higher y: never on the lower hull.
                continue;
            }
        }
        while hull.len() >= 2 {
            let a = sorted[hull[hull.len() - 2]];
            let b = sorted[hull[hull.len() - 1]];
            if orient2d(a, b, p) <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }
    hull
}
