use rand::seq::SliceRandom;

use super::K1Result;
use crate::data::{Color, Dataset, Seed};
use crate::error::{Error, Result};
use crate::kdtree::KdTree;

/// Exact k = 1 tester for 3D dominance ranges.
///
/// Colors get a uniformly random rank; the range holds exactly one color iff
/// the minimum and maximum rank over the range coincide.
#[derive(Clone, Debug)]
pub struct ExactK1Dominance {
    /// `by_rank[r]` is the color of rank `r`.
    by_rank: Vec<Color>,
    /// `(color, rank)` sorted by color.
    rank_of: Vec<(Color, u32)>,
    tree: KdTree,
}

pub fn build_exact_k1_dominance(ds: &Dataset, seed: Seed) -> Result<ExactK1Dominance> {
    let ids: Vec<usize> = (0..ds.m()).collect();
    ExactK1Dominance::build_on(ds, &ids, seed)
}

impl ExactK1Dominance {
    /// Builds over the points `ids` of `ds`.
    pub fn build_on(ds: &Dataset, ids: &[usize], seed: Seed) -> Result<Self> {
        if ds.dim() != 3 {
            return Err(Error::DimensionMismatch { expected: 3, found: ds.dim() });
        }
        let mut colors: Vec<Color> = ids.iter().map(|&i| ds.point(i).color).collect();
        colors.sort_unstable();
        colors.dedup();
        let mut by_rank = colors.clone();
        by_rank.shuffle(&mut seed.rng());
        let mut rank_of: Vec<(Color, u32)> = by_rank.iter().enumerate().map(|(r, &c)| (c, r as u32)).collect();
        rank_of.sort_unstable();
        let key = |c: Color| rank_of[rank_of.binary_search_by_key(&c, |e| e.0).unwrap()].1;
        let tree = KdTree::build(ids.iter().map(|&i| {
            let p = ds.point(i);
            (p.rank, key(p.color), i)
        }));
        Ok(ExactK1Dominance { by_rank, rank_of, tree })
    }

    /// The random rank of `c`, if `c` occurs.
    pub fn rank(&self, c: Color) -> Option<u32> {
        self.rank_of.binary_search_by_key(&c, |e| e.0).ok().map(|i| self.rank_of[i].1)
    }

    pub fn color_of_rank(&self, r: u32) -> Color {
        self.by_rank[r as usize]
    }

    /// Minimum color rank in the range, with a witness point.
    pub fn min_rank(&self, corner: &[i64; 3]) -> Option<(u32, usize)> {
        self.tree.dominance_min(corner)
    }

    pub fn max_rank(&self, corner: &[i64; 3]) -> Option<(u32, usize)> {
        self.tree.dominance_max(corner)
    }

    /// Some point in the range.
    pub fn report_one(&self, corner: &[i64; 3]) -> Option<usize> {
        self.tree.report_one(corner)
    }

    pub fn query(&self, corner: &[i64; 3]) -> K1Result {
        let Some((lo, witness)) = self.min_rank(corner) else {
            return K1Result::Empty;
        };
        let (hi, _) = self.max_rank(corner).expect("nonempty range has a maximum");
        if lo == hi {
            K1Result::Single(self.by_rank[lo as usize], witness)
        } else {
            K1Result::Multi
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{RangeQuery, RawPoint};
    use crate::oracle::oracle_colors;

    fn ds(pts: &[([i64; 3], u32)]) -> Dataset {
        let raw: Vec<RawPoint> = pts.iter().map(|(c, col)| RawPoint::new(c, *col)).collect();
        Dataset::reduce_to_rank_space(&raw).unwrap()
    }

    #[test]
    fn singleton() {
        let d = ds(&[([5, 5, 5], 0)]);
        let t = build_exact_k1_dominance(&d, Seed(1)).unwrap();
        let r = t.rank(Color(0)).unwrap();
        assert_eq!(t.min_rank(&[1, 1, 1]).map(|x| x.0), Some(r));
        assert_eq!(t.max_rank(&[1, 1, 1]).map(|x| x.0), Some(r));
        assert_eq!(t.query(&[0, 0, 0]), K1Result::Empty);
        assert_eq!(t.min_rank(&[0, 0, 0]), None);
        assert_eq!(t.query(&[1, 1, 1]), K1Result::Single(Color(0), 0));
    }

    #[test]
    fn two_points() {
        let diff = ds(&[([1, 1, 1], 0), ([2, 2, 2], 1)]);
        let t = build_exact_k1_dominance(&diff, Seed(2)).unwrap();
        assert_eq!(t.query(&[2, 2, 2]), K1Result::Multi);
        let same = ds(&[([1, 1, 1], 0), ([2, 2, 2], 0)]);
        let t = build_exact_k1_dominance(&same, Seed(2)).unwrap();
        assert!(matches!(t.query(&[2, 2, 2]), K1Result::Single(Color(0), _)));
    }

    #[test]
    fn rank_is_a_bijection() {
        let d = ds(&[([1, 2, 3], 0), ([2, 3, 1], 1), ([3, 1, 2], 2), ([4, 4, 4], 3)]);
        let t = build_exact_k1_dominance(&d, Seed(8)).unwrap();
        let mut ranks: Vec<u32> = (0..4).map(|c| t.rank(Color(c)).unwrap()).collect();
        for c in 0..4 {
            assert_eq!(t.color_of_rank(t.rank(Color(c)).unwrap()), Color(c));
        }
        ranks.sort();
        assert_eq!(ranks, vec![0, 1, 2, 3]);
    }

    #[test]
    fn exhaustive_against_oracle() {
        let d = ds(&[([1, 2, 3], 0), ([2, 3, 1], 1), ([3, 1, 2], 2), ([4, 4, 4], 0), ([5, 1, 5], 1)]);
        let t = build_exact_k1_dominance(&d, Seed(3)).unwrap();
        for x in 0..=5 {
            for y in 0..=5 {
                for z in 0..=5 {
                    let c = [x, y, z];
                    let want = oracle_colors(&d, &RangeQuery::Dominance3(c)).unwrap();
                    match t.query(&c) {
                        K1Result::Empty => assert!(want.is_empty()),
                        K1Result::Single(col, w) => {
                            assert_eq!(want, vec![col]);
                            assert!(RangeQuery::Dominance3(c).contains(d.point(w)));
                        }
                        K1Result::Multi => assert!(want.len() >= 2),
                    }
                }
            }
        }
    }

    #[test]
    fn wrong_dimension() {
        let d = Dataset::reduce_to_rank_space(&[RawPoint::new(&[1, 1], 0)]).unwrap();
        assert!(matches!(build_exact_k1_dominance(&d, Seed(0)), Err(Error::DimensionMismatch { .. })));
    }
}
