use std::sync::Arc;

use rand::Rng;

use super::cells::Decomposition;
use super::{EmptinessIndex, RangeFamily};
use crate::data::{Color, Dataset, RangeQuery, Seed};
use crate::error::{Error, Result};
use crate::kdtree::KdTree;

pub const DEFAULT_CAP: usize = 20;
/// Halfspace cells cover slopes with `|a|, |b| <= DEFAULT_WINDOW * d`.
pub const DEFAULT_WINDOW: i64 = 1 << 20;

/// One emptiness index per color, shared by every structure over `ds`.
#[derive(Clone, Debug)]
pub struct ColorIndexes {
    family: RangeFamily,
    per_color: Vec<EmptinessIndex>,
}

impl ColorIndexes {
    pub fn build(ds: &Dataset, family: RangeFamily) -> Result<Self> {
        if ds.dim() != family.dim() {
            return Err(Error::DimensionMismatch { expected: family.dim(), found: ds.dim() });
        }
        let per_color = ds.color_index().iter().map(|ids| EmptinessIndex::build(ds, ids, family)).collect();
        Ok(ColorIndexes { family, per_color })
    }

    pub fn family(&self) -> RangeFamily {
        self.family
    }

    pub fn get(&self, c: Color) -> Option<&EmptinessIndex> {
        self.per_color.get(c.index())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum CellList {
    Good(Vec<Color>),
    Bad,
}

/// Answer of the Monte Carlo tester. `Yes` is always right; `No` may be
/// wrong when the range holds exactly one color.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum McAnswer {
    /// The only color in the range and one of its points inside.
    Yes(Color, usize),
    No,
}

/// Monte Carlo "exactly one color?" tester over a color subset.
#[derive(Clone, Debug)]
pub struct MonteCarloK1Structure {
    family: RangeFamily,
    cap: usize,
    colors: Vec<Color>,
    sampled: Vec<Color>,
    indexes: Arc<ColorIndexes>,
    cells: Decomposition,
    lists: Vec<CellList>,
}

pub fn build_mc_k1(ds: &Dataset, family: RangeFamily, cap: usize, seed: Seed) -> Result<MonteCarloK1Structure> {
    let indexes = Arc::new(ColorIndexes::build(ds, family)?);
    let colors: Vec<Color> = (0..ds.num_colors() as u32).map(Color).collect();
    MonteCarloK1Structure::build_shared(ds, &colors, indexes, cap, seed)
}

impl MonteCarloK1Structure {
    /// Builds over the points of `colors`, reusing prebuilt indexes.
    pub fn build_shared(
        ds: &Dataset,
        colors: &[Color],
        indexes: Arc<ColorIndexes>,
        cap: usize,
        seed: Seed,
    ) -> Result<Self> {
        Self::build_with_window(ds, colors, indexes, cap, seed, DEFAULT_WINDOW)
    }

    pub fn build_with_window(
        ds: &Dataset,
        colors: &[Color],
        indexes: Arc<ColorIndexes>,
        cap: usize,
        seed: Seed,
        window: i64,
    ) -> Result<Self> {
        if cap < 1 {
            return Err(Error::CapTooSmall);
        }
        let family = indexes.family();
        if ds.dim() != family.dim() {
            return Err(Error::DimensionMismatch { expected: family.dim(), found: ds.dim() });
        }
        for &c in colors {
            if indexes.get(c).is_none() {
                return Err(Error::UnknownColor(c.0));
            }
        }
        let mut rng = seed.rng();
        let (sampled, rest): (Vec<Color>, Vec<Color>) = colors.iter().partition(|_| rng.random_bool(0.5));
        let cands = |cs: &[Color]| -> Vec<usize> {
            cs.iter().flat_map(|&c| indexes.get(c).unwrap().candidates().iter().copied()).collect()
        };
        let cells = Decomposition::build(ds, family, &cands(&sampled), window);
        let lists = capped_lists(ds, &cells, &cands(&rest), cap);
        Ok(MonteCarloK1Structure { family, cap, colors: colors.to_vec(), sampled, indexes, cells, lists })
    }

    pub fn family(&self) -> RangeFamily {
        self.family
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    pub fn sampled_colors(&self) -> &[Color] {
        &self.sampled
    }

    pub fn is_sampled(&self, c: Color) -> bool {
        self.sampled.contains(&c)
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn num_bad_cells(&self) -> usize {
        self.lists.iter().filter(|l| **l == CellList::Bad).count()
    }

    /// Cell containing `q`; `None` if a sampled color's range covers it.
    pub fn locate(&self, q: &RangeQuery) -> Option<usize> {
        self.cells.locate(q)
    }

    /// Stored conflict list, `None` for a bad cell.
    pub fn cell_list(&self, cell: usize) -> Option<&[Color]> {
        match &self.lists[cell] {
            CellList::Good(l) => Some(l),
            CellList::Bad => None,
        }
    }

    /// Box `(min, max)` of a dominance cell in rank space.
    pub fn cell_box(&self, cell: usize) -> Option<([i64; 3], [i64; 3])> {
        self.cells.dominance().map(|c| c.cell_box(cell))
    }

    /// Full conflict set of a cell, ignoring the cap.
    pub fn cell_conflicts_exact(&self, ds: &Dataset, cell: usize) -> Vec<Color> {
        let mut out: Vec<Color> = self
            .colors
            .iter()
            .copied()
            .filter(|&c| {
                let idx = self.indexes.get(c).unwrap();
                idx.candidates().iter().any(|&i| self.cells.conflicts(cell, ds.point(i)))
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// True iff no point of `color` lies in `q`.
    pub fn per_color_empty(&self, ds: &Dataset, color: Color, q: &RangeQuery) -> Result<bool> {
        if !self.family.matches(q) {
            return Err(Error::WrongQueryKind);
        }
        let idx = self.indexes.get(color).ok_or(Error::UnknownColor(color.0))?;
        Ok(idx.is_empty(ds, q))
    }

    /// `No` for queries of another family.
    pub fn query(&self, ds: &Dataset, q: &RangeQuery) -> McAnswer {
        let Some(cell) = self.locate(q) else {
            return McAnswer::No;
        };
        let CellList::Good(list) = &self.lists[cell] else {
            return McAnswer::No;
        };
        let mut found = None;
        for &c in list {
            if let Some(w) = self.indexes.get(c).unwrap().witness(ds, q) {
                if found.is_some() {
                    return McAnswer::No;
                }
                found = Some((c, w));
            }
        }
        match found {
            Some((c, w)) => McAnswer::Yes(c, w),
            None => McAnswer::No,
        }
    }
}

fn capped_lists(ds: &Dataset, cells: &Decomposition, cands: &[usize], cap: usize) -> Vec<CellList> {
    let finish = |mut l: Vec<Color>| {
        if l.len() > cap {
            CellList::Bad
        } else {
            l.sort_unstable();
            CellList::Good(l)
        }
    };
    if let Some(dom) = cells.dominance() {
        let tree = KdTree::build(cands.iter().map(|&i| (ds.point(i).rank, ds.point(i).color.0, i)));
        let mut stamp = vec![usize::MAX; ds.num_colors()];
        return (0..cells.len())
            .map(|cell| {
                let mut l = Vec::new();
                tree.for_each_dominated(&dom.max_corner(cell), |i| {
                    let c = ds.point(i).color;
                    if stamp[c.index()] != cell {
                        stamp[c.index()] = cell;
                        l.push(c);
                    }
                    l.len() <= cap
                });
                finish(l)
            })
            .collect();
    }
    (0..cells.len())
        .map(|cell| {
            let mut l: Vec<Color> = Vec::new();
            for &i in cands {
                let p = ds.point(i);
                if l.last() != Some(&p.color) && !l.contains(&p.color) && cells.conflicts(cell, p) {
                    l.push(p.color);
                    if l.len() > cap {
                        break;
                    }
                }
            }
            finish(l)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{Halfplane, Halfspace, RawPoint};
    use crate::gen::{generate, Family, GenSpec};
    use crate::oracle::{oracle_colors, oracle_conflict_colors};

    fn dataset(family: Family, m: usize, colors: usize, seed: u64) -> Dataset {
        Dataset::reduce_to_rank_space(&generate(&GenSpec::new(family, m, colors, Seed(seed))).unwrap()).unwrap()
    }

    fn random_query(ds: &Dataset, fam: RangeFamily, rng: &mut impl Rng) -> RangeQuery {
        let m = ds.m() as i64;
        match fam {
            RangeFamily::Dominance3 => RangeQuery::Dominance3([0; 3].map(|_| rng.random_range(0..=m))),
            RangeFamily::Halfplane2 => RangeQuery::Halfplane2(Halfplane {
                a: rng.random_range(-6..=6),
                b: rng.random_range(-(1 << 22)..(1 << 21)),
                d: rng.random_range(1..=3),
            }),
            RangeFamily::Halfspace3 => RangeQuery::Halfspace3(Halfspace {
                a: rng.random_range(-3..=3),
                b: rng.random_range(-3..=3),
                c: rng.random_range(-(1 << 22)..(1 << 20)),
                d: rng.random_range(1..=3),
            }),
        }
    }

    #[test]
    fn cap_zero_rejected() {
        let ds = dataset(Family::Uniform3, 20, 2, 1);
        assert_eq!(build_mc_k1(&ds, RangeFamily::Dominance3, 0, Seed(1)).unwrap_err(), Error::CapTooSmall);
    }

    #[test]
    fn family_dimension_checked() {
        let ds = dataset(Family::Uniform2, 20, 2, 1);
        assert!(matches!(
            build_mc_k1(&ds, RangeFamily::Dominance3, 5, Seed(1)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn single_color_unsampled_gives_one_cell() {
        let ds = dataset(Family::Uniform3, 30, 1, 2);
        for fam in [RangeFamily::Dominance3, RangeFamily::Halfspace3] {
            let s = (0..).map(Seed).find(|&s| {
                build_mc_k1(&ds, fam, 5, s).unwrap().sampled_colors().is_empty()
            });
            let st = build_mc_k1(&ds, fam, 5, s.unwrap()).unwrap();
            assert_eq!(st.num_cells(), 1);
            assert_eq!(st.cell_list(0), Some(&[Color(0)][..]));
        }
    }

    #[test]
    fn single_color_sampled_covers_its_ranges() {
        let ds = dataset(Family::Uniform3, 30, 1, 3);
        let s = (0..).map(Seed).find(|&s| build_mc_k1(&ds, RangeFamily::Dominance3, 5, s).unwrap().is_sampled(Color(0)));
        let st = build_mc_k1(&ds, RangeFamily::Dominance3, 5, s.unwrap()).unwrap();
        let mut rng = Seed(9).rng();
        for _ in 0..2000 {
            let q = random_query(&ds, RangeFamily::Dominance3, &mut rng);
            let nonempty = !oracle_colors(&ds, &q).unwrap().is_empty();
            assert_eq!(st.locate(&q).is_none(), nonempty);
        }
    }

    #[test]
    fn dominance_good_lists_match_oracle() {
        for seed in 0..6 {
            let ds = dataset(Family::Uniform3, 60, 8, seed);
            let st = build_mc_k1(&ds, RangeFamily::Dominance3, 4, Seed(seed + 100)).unwrap();
            for cell in 0..st.num_cells() {
                let (_, top) = st.cell_box(cell).unwrap();
                let want = oracle_conflict_colors(&ds, top).unwrap();
                assert_eq!(st.cell_conflicts_exact(&ds, cell), want);
                match st.cell_list(cell) {
                    Some(l) => assert_eq!(l, &want[..]),
                    None => assert!(want.len() > 4),
                }
            }
        }
    }

    #[test]
    fn dominance_cells_partition_uncovered_region() {
        let ds = dataset(Family::Uniform3, 40, 6, 11);
        let st = build_mc_k1(&ds, RangeFamily::Dominance3, 20, Seed(5)).unwrap();
        let sampled_pts = ds.points_of_colors(st.sampled_colors());
        let m = ds.m() as i64;
        let mut rng = Seed(12).rng();
        for _ in 0..10_000 {
            let p = [0; 3].map(|_| rng.random_range(0..=m));
            let q = RangeQuery::Dominance3(p);
            let covered = sampled_pts.iter().any(|&i| q.contains(ds.point(i)));
            let holders: Vec<usize> = (0..st.num_cells())
                .filter(|&c| {
                    let (lo, hi) = st.cell_box(c).unwrap();
                    (0..3).all(|a| lo[a] <= p[a] && p[a] <= hi[a])
                })
                .collect();
            if covered {
                assert!(holders.is_empty() && st.locate(&q).is_none());
            } else {
                assert_eq!(holders.len(), 1);
                assert_eq!(st.locate(&q), Some(holders[0]));
            }
        }
    }

    #[test]
    fn location_matches_coverage_for_halfspaces_and_halfplanes() {
        for (fam, gen) in [(RangeFamily::Halfplane2, Family::Uniform2), (RangeFamily::Halfspace3, Family::Uniform3)] {
            let ds = dataset(gen, 80, 6, 21);
            let st = build_mc_k1(&ds, fam, 20, Seed(8)).unwrap();
            let sampled_pts = ds.points_of_colors(st.sampled_colors());
            let mut rng = Seed(13).rng();
            for _ in 0..3000 {
                let q = random_query(&ds, fam, &mut rng);
                let covered = sampled_pts.iter().any(|&i| q.contains(ds.point(i)));
                assert_eq!(st.locate(&q).is_none(), covered, "{fam} {q:?}");
            }
        }
    }

    #[test]
    fn good_lists_hold_colors_met_by_located_queries() {
        // Any color present in a located query's range must be listed.
        for (fam, gen) in [
            (RangeFamily::Dominance3, Family::Uniform3),
            (RangeFamily::Halfplane2, Family::Uniform2),
            (RangeFamily::Halfspace3, Family::Uniform3),
        ] {
            let ds = dataset(gen, 120, 10, 31);
            let st = build_mc_k1(&ds, fam, 20, Seed(2)).unwrap();
            let mut rng = Seed(14).rng();
            for _ in 0..2000 {
                let q = random_query(&ds, fam, &mut rng);
                let Some(cell) = st.locate(&q) else { continue };
                let exact = st.cell_conflicts_exact(&ds, cell);
                for c in oracle_colors(&ds, &q).unwrap() {
                    assert!(exact.contains(&c), "{fam}: {c} missing");
                }
                if let Some(l) = st.cell_list(cell) {
                    assert_eq!(l, &exact[..]);
                }
            }
        }
    }

    #[test]
    fn yes_answers_are_sound() {
        for (fam, gen) in [
            (RangeFamily::Dominance3, Family::Uniform3),
            (RangeFamily::Halfplane2, Family::Uniform2),
            (RangeFamily::Halfspace3, Family::Uniform3),
        ] {
            let ds = dataset(gen, 100, 5, 41);
            let mut rng = Seed(15).rng();
            let mut yes = 0;
            for b in 0..10 {
                let st = build_mc_k1(&ds, fam, 20, Seed(b)).unwrap();
                for _ in 0..300 {
                    let q = random_query(&ds, fam, &mut rng);
                    if let McAnswer::Yes(c, w) = st.query(&ds, &q) {
                        yes += 1;
                        assert_eq!(oracle_colors(&ds, &q).unwrap(), vec![c]);
                        assert!(q.contains(ds.point(w)) && ds.point(w).color == c);
                    }
                }
            }
            assert!(yes > 0, "{fam}: no Yes answers at all");
        }
    }

    #[test]
    fn per_color_empty_matches_oracle() {
        let ds = dataset(Family::Uniform3, 150, 7, 51);
        let st = build_mc_k1(&ds, RangeFamily::Dominance3, 20, Seed(3)).unwrap();
        let mut rng = Seed(16).rng();
        for _ in 0..500 {
            let c = Color(rng.random_range(0..7));
            let q = random_query(&ds, RangeFamily::Dominance3, &mut rng);
            let present = oracle_colors(&ds, &q).unwrap().contains(&c);
            assert_eq!(st.per_color_empty(&ds, c, &q).unwrap(), !present);
        }
        let q = RangeQuery::Dominance3([1, 1, 1]);
        assert_eq!(st.per_color_empty(&ds, Color(99), &q), Err(Error::UnknownColor(99)));
    }

    #[test]
    fn planted_single_color_query_answers_yes() {
        // Color 1 sits alone near the origin; color 0 is far away.
        let mut raw = vec![RawPoint::new(&[1, 1, 1], 1), RawPoint::new(&[2, 3, 2], 1)];
        raw.extend((0..20).map(|i| RawPoint::new(&[50 + i, 60 - i, 40 + 2 * i], 0)));
        let ds = Dataset::reduce_to_rank_space(&raw).unwrap();
        let q = ds.map_query(&RangeQuery::Dominance3([10, 10, 10])).unwrap();
        let seed = (0..)
            .map(Seed)
            .find(|&s| {
                let st = build_mc_k1(&ds, RangeFamily::Dominance3, 20, s).unwrap();
                !st.is_sampled(Color(1)) && st.is_sampled(Color(0))
            })
            .unwrap();
        let st = build_mc_k1(&ds, RangeFamily::Dominance3, 20, seed).unwrap();
        assert!(matches!(st.query(&ds, &q), McAnswer::Yes(Color(1), _)));
        let empty = RangeQuery::Dominance3([0, 0, 0]);
        assert_eq!(st.query(&ds, &empty), McAnswer::No);
    }
}
