//! Colored randomized incremental construction: insertion plans over color
//! classes, an incremental 3D hull and a 2D lower envelope that count
//! structural changes, and the adversarial instances.

mod envelope2;
mod experiment;
mod hull3;
mod instances;

pub use envelope2::{dual_line, envelope2_changes, Envelope2};
pub use experiment::{ric_experiment, RicConfig, RicFamily, RicRow};
pub use hull3::{hull3_changes, hull_vertices, IncrementalHull};
pub use instances::{adversarial_instance, adversarial_points, nested_adversarial};

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;

use crate::data::{Dataset, Seed};
use crate::error::{Error, Result};

/// How color classes are turned into an insertion order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InsertionMode {
    /// Classes in random order, each class inserted as one batch.
    ClassBatch,
    /// Classes in random order, points of a class in random order, one per step.
    WithinClass,
    /// `levels` nested uniform permutations over a class hierarchy.
    Hierarchy(usize),
}

impl FromStr for InsertionMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classBatch" => Ok(InsertionMode::ClassBatch),
            "withinClass" => Ok(InsertionMode::WithinClass),
            _ => match s.strip_prefix("hierarchy") {
                Some(l) => l
                    .trim_matches(|c| c == '(' || c == ')')
                    .parse()
                    .map(InsertionMode::Hierarchy)
                    .map_err(|_| Error::BadConfig(format!("bad mode {s:?}"))),
                None => Err(Error::BadConfig(format!("unknown mode {s:?}"))),
            },
        }
    }
}

impl fmt::Display for InsertionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InsertionMode::ClassBatch => f.write_str("classBatch"),
            InsertionMode::WithinClass => f.write_str("withinClass"),
            InsertionMode::Hierarchy(l) => write!(f, "hierarchy({l})"),
        }
    }
}

/// Nested classes: `paths[p]` lists point `p`'s class ids from the outermost
/// level inwards. All paths have the same length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassHierarchy {
    pub paths: Vec<Vec<u32>>,
}

impl ClassHierarchy {
    /// One level: the colors.
    pub fn from_colors(ds: &Dataset) -> Self {
        ClassHierarchy { paths: ds.points().iter().map(|p| vec![p.color.0]).collect() }
    }

    pub fn depth(&self) -> usize {
        self.paths.first().map_or(0, Vec::len)
    }

    /// Every path has the same length and each class id has one parent.
    fn check(&self, n: usize) -> Result<()> {
        if self.paths.len() != n {
            return Err(Error::BadHierarchy(format!("{} paths for {n} points", self.paths.len())));
        }
        let depth = self.depth();
        if self.paths.iter().any(|p| p.len() != depth) {
            return Err(Error::BadHierarchy("paths of unequal length".into()));
        }
        for lvl in 1..depth {
            let mut parent = std::collections::BTreeMap::new();
            for p in &self.paths {
                if *parent.entry(p[lvl]).or_insert(p[lvl - 1]) != p[lvl - 1] {
                    return Err(Error::BadHierarchy(format!("class {} at level {lvl} has two parents", p[lvl])));
                }
            }
        }
        Ok(())
    }
}

/// An insertion order plus how it is grouped into steps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InsertionPlan {
    pub order: Vec<usize>,
    /// Positions in `order` where a top-level class begins.
    pub batch_boundaries: Vec<usize>,
    /// Whether each class is one step (`ClassBatch`) or each point is.
    pub batched: bool,
    pub levels: usize,
}

impl InsertionPlan {
    /// Steps as ranges into `order`.
    pub fn steps(&self) -> Vec<std::ops::Range<usize>> {
        if self.batched {
            let mut b = self.batch_boundaries.clone();
            b.push(self.order.len());
            b.windows(2).map(|w| w[0]..w[1]).collect()
        } else {
            (0..self.order.len()).map(|i| i..i + 1).collect()
        }
    }
}

/// Builds an insertion plan; `Hierarchy(l)` with `l >= 3` needs an explicit
/// hierarchy of depth `l - 1` via [`make_hierarchy_plan`].
pub fn make_insertion_plan(ds: &Dataset, mode: InsertionMode, seed: Seed) -> Result<InsertionPlan> {
    if ds.m() == 0 {
        return Err(Error::EmptyInput);
    }
    match mode {
        InsertionMode::ClassBatch | InsertionMode::WithinClass => {
            let mut plan = nested_order(&ClassHierarchy::from_colors(ds), seed);
            plan.batched = mode == InsertionMode::ClassBatch;
            plan.levels = 2;
            Ok(plan)
        }
        InsertionMode::Hierarchy(0) => Err(Error::BadHierarchy("levels must be at least 1".into())),
        InsertionMode::Hierarchy(1) => {
            let h = ClassHierarchy { paths: vec![Vec::new(); ds.m()] };
            make_hierarchy_plan(&h, 1, seed)
        }
        InsertionMode::Hierarchy(2) => make_hierarchy_plan(&ClassHierarchy::from_colors(ds), 2, seed),
        InsertionMode::Hierarchy(l) => Err(Error::BadHierarchy(format!("{l} levels need an explicit hierarchy"))),
    }
}

/// Nested uniform permutation over `h`, which must have depth `levels - 1`.
pub fn make_hierarchy_plan(h: &ClassHierarchy, levels: usize, seed: Seed) -> Result<InsertionPlan> {
    if levels < 1 || h.depth() + 1 != levels {
        return Err(Error::BadHierarchy(format!("depth {} does not match {levels} levels", h.depth())));
    }
    h.check(h.paths.len())?;
    if h.paths.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut plan = nested_order(h, seed);
    plan.levels = levels;
    Ok(plan)
}

/// Orders points by random keys drawn per class at every level, then per
/// point. Keys are compared lexicographically, which realizes independent
/// uniform permutations at each level.
fn nested_order(h: &ClassHierarchy, seed: Seed) -> InsertionPlan {
    let mut rng = seed.rng();
    let depth = h.depth();
    let mut level_keys: Vec<std::collections::BTreeMap<u32, u64>> = vec![Default::default(); depth];
    let n = h.paths.len();
    // Draw class keys in a fixed (sorted) order so the plan is reproducible.
    for (lvl, keys) in level_keys.iter_mut().enumerate() {
        let mut ids: Vec<u32> = h.paths.iter().map(|p| p[lvl]).collect();
        ids.sort_unstable();
        ids.dedup();
        let mut perm: Vec<u64> = (0..ids.len() as u64).collect();
        perm.shuffle(&mut rng);
        keys.extend(ids.into_iter().zip(perm));
    }
    let mut point_perm: Vec<u64> = (0..n as u64).collect();
    point_perm.shuffle(&mut rng);
    let key = |p: usize| -> (Vec<u64>, u64) {
        ((0..depth).map(|l| level_keys[l][&h.paths[p][l]]).collect(), point_perm[p])
    };
    let mut keyed: Vec<((Vec<u64>, u64), usize)> = (0..n).map(|p| (key(p), p)).collect();
    keyed.sort_unstable();
    let order: Vec<usize> = keyed.iter().map(|e| e.1).collect();
    let batch_boundaries = if depth == 0 {
        vec![0]
    } else {
        (0..n).filter(|&i| i == 0 || keyed[i].0 .0[0] != keyed[i - 1].0 .0[0]).collect()
    };
    InsertionPlan { order, batch_boundaries, batched: false, levels: depth + 1 }
}

/// Structural change counts per step.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ChangeStats {
    pub created_per_step: Vec<u64>,
    pub destroyed_per_step: Vec<u64>,
    pub total_created: u64,
    pub total_destroyed: u64,
}

impl ChangeStats {
    pub(crate) fn push(&mut self, created: u64, destroyed: u64) {
        self.created_per_step.push(created);
        self.destroyed_per_step.push(destroyed);
        self.total_created += created;
        self.total_destroyed += destroyed;
    }
}

/// Net change bookkeeping for one step: objects alive after the step and
/// created during it count as created; objects alive before and killed
/// during it count as destroyed.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct StepCounter {
    first_new_id: usize,
    created: u64,
    destroyed: u64,
}

impl StepCounter {
    pub(crate) fn start(next_id: usize) -> Self {
        StepCounter { first_new_id: next_id, created: 0, destroyed: 0 }
    }

    pub(crate) fn on_create(&mut self) {
        self.created += 1;
    }

    pub(crate) fn on_destroy(&mut self, id: usize) {
        if id < self.first_new_id {
            self.destroyed += 1;
        } else {
            self.created -= 1;
        }
    }

    pub(crate) fn finish(self, stats: &mut ChangeStats) {
        stats.push(self.created, self.destroyed);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::RawPoint;

    fn ds_colors(colors: &[u32]) -> Dataset {
        let raw: Vec<RawPoint> =
            colors.iter().enumerate().map(|(i, &c)| RawPoint::new(&[i as i64, 0, 0], c)).collect();
        Dataset::reduce_to_rank_space(&raw).unwrap()
    }

    fn is_perm(v: &[usize], n: usize) -> bool {
        let mut s = v.to_vec();
        s.sort();
        s == (0..n).collect::<Vec<_>>()
    }

    #[test]
    fn one_class_batch() {
        let ds = ds_colors(&[0, 0, 0, 0]);
        let plan = make_insertion_plan(&ds, InsertionMode::ClassBatch, Seed(1)).unwrap();
        assert!(is_perm(&plan.order, 4));
        assert_eq!(plan.steps(), vec![0..4]);
    }

    #[test]
    fn classes_are_contiguous() {
        let ds = ds_colors(&[0, 1, 2, 0, 1, 2, 0, 1, 2, 2]);
        for s in 0..20 {
            let plan = make_insertion_plan(&ds, InsertionMode::WithinClass, Seed(s)).unwrap();
            assert!(is_perm(&plan.order, 10));
            assert_eq!(plan.batch_boundaries.len(), 3);
            for r in (InsertionPlan { batched: true, ..plan.clone() }).steps() {
                let c = ds.point(plan.order[r.start]).color;
                assert!(plan.order[r].iter().all(|&i| ds.point(i).color == c));
            }
            assert_eq!(plan.steps().len(), 10);
        }
    }

    #[test]
    fn singleton_classes_give_uniform_permutations() {
        // 3 points, each its own class: all 6 orders should appear.
        let ds = ds_colors(&[0, 1, 2]);
        let mut seen = std::collections::BTreeSet::new();
        for s in 0..200 {
            seen.insert(make_insertion_plan(&ds, InsertionMode::WithinClass, Seed(s)).unwrap().order);
        }
        assert_eq!(seen.len(), 6);
        let mut seen1 = std::collections::BTreeSet::new();
        for s in 0..200 {
            seen1.insert(make_insertion_plan(&ds_colors(&[0, 0, 0]), InsertionMode::Hierarchy(1), Seed(s)).unwrap().order);
        }
        assert_eq!(seen1.len(), 6);
    }

    #[test]
    fn bad_hierarchies() {
        let ds = ds_colors(&[0, 1]);
        assert!(matches!(make_insertion_plan(&ds, InsertionMode::Hierarchy(0), Seed(0)), Err(Error::BadHierarchy(_))));
        let h = ClassHierarchy { paths: vec![vec![0, 5], vec![1, 5]] };
        assert!(matches!(make_hierarchy_plan(&h, 3, Seed(0)), Err(Error::BadHierarchy(_))));
        let ragged = ClassHierarchy { paths: vec![vec![0, 5], vec![1]] };
        assert!(matches!(make_hierarchy_plan(&ragged, 3, Seed(0)), Err(Error::BadHierarchy(_))));
    }

    #[test]
    fn mode_parsing() {
        for m in [InsertionMode::ClassBatch, InsertionMode::WithinClass, InsertionMode::Hierarchy(3)] {
            assert_eq!(m.to_string().parse::<InsertionMode>().unwrap(), m);
        }
    }
}
