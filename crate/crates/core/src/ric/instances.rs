use super::ClassHierarchy;
use crate::data::{Dataset, RawPoint};
use crate::error::{Error, Result};
use crate::geom::orient2d;

const RADIUS: f64 = ((1i64 << 31) - 1) as f64;
/// Class ids of planar points at inner hierarchy levels start here.
const PLANAR_CLASS_BASE: u32 = 1 << 30;

/// `n/2` points in convex position on a circle in `z = 0`, colors `1..=n/2`,
/// and `n/2` points on the positive z-axis, all color 0.
pub fn adversarial_points(n: usize) -> Result<Vec<RawPoint>> {
    if n < 8 || n % 2 == 1 {
        return Err(Error::TooSmall { n });
    }
    let half = n / 2;
    let ring: Vec<[i64; 2]> = (0..half)
        .map(|i| {
            let t = std::f64::consts::TAU * i as f64 / half as f64;
            [(RADIUS * t.cos()).round() as i64, (RADIUS * t.sin()).round() as i64]
        })
        .collect();
    let convex = (0..half).all(|i| orient2d(ring[i], ring[(i + 1) % half], ring[(i + 2) % half]) > 0);
    if !convex {
        return Err(Error::BadSpec(format!("n = {n} too large for integer convex position")));
    }
    let step = ((1i64 << 31) - 1) / half as i64;
    let mut pts: Vec<RawPoint> =
        ring.iter().enumerate().map(|(i, p)| RawPoint::new(&[p[0], p[1], 0], i as u32 + 1)).collect();
    pts.extend((0..half).map(|i| RawPoint::new(&[0, 0, (i as i64 + 1) * step], 0)));
    Ok(pts)
}

pub fn adversarial_instance(n: usize) -> Result<Dataset> {
    Dataset::reduce_to_rank_space(&adversarial_points(n)?)
}

/// The adversarial instance with a hierarchy of depth `levels - 1`: color
/// classes on top, then the axis class cut into contiguous height blocks
/// with equal branching at every level. Planar points stay singletons.
pub fn nested_adversarial(n: usize, levels: usize) -> Result<(Dataset, ClassHierarchy)> {
    if levels < 2 {
        return Err(Error::BadHierarchy("nested family needs at least 2 levels".into()));
    }
    let ds = adversarial_instance(n)?;
    let half = n / 2;
    let inner = levels - 2;
    let branching = if inner == 0 { 1 } else { (half as f64).powf(1.0 / (levels - 1) as f64).ceil() as usize };
    // Block size at each inner level.
    let mut sizes = Vec::with_capacity(inner);
    let mut s = half;
    for _ in 0..inner {
        s = s.div_ceil(branching.max(2));
        sizes.push(s);
    }
    let paths = (0..n)
        .map(|p| {
            if p < half {
                let mut path = vec![p as u32 + 1];
                path.extend((0..inner).map(|_| PLANAR_CLASS_BASE + p as u32));
                path
            } else {
                let h = p - half;
                let mut path = vec![0];
                path.extend(sizes.iter().map(|&sz| (h / sz) as u32));
                path
            }
        })
        .collect();
    Ok((ds, ClassHierarchy { paths }))
}
