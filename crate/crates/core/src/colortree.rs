//! Random color-splitting tree: turns a k <= 1 tester into a distinct-color
//! reporter. Each node splits its colors by independent fair coins; a query
//! stops at nodes whose range is empty or holds one color.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;

use crate::data::{Color, Dataset, RangeQuery, Seed};
use crate::error::{Error, Result};
use crate::k1::{
    ColorIndexes, EmptinessIndex, ExactK1Dominance, K1Result, McAnswer, MonteCarloK1Structure, RangeFamily,
    DEFAULT_CAP,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TesterMode {
    Exact,
    MonteCarlo,
}

impl FromStr for TesterMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(TesterMode::Exact),
            "monteCarlo" | "montecarlo" | "mc" => Ok(TesterMode::MonteCarlo),
            _ => Err(Error::BadConfig(format!("unknown tester mode {s:?}"))),
        }
    }
}

impl fmt::Display for TesterMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TesterMode::Exact => "exact",
            TesterMode::MonteCarlo => "monteCarlo",
        })
    }
}

#[derive(Clone, Debug)]
enum Tester {
    Exact(ExactK1Dominance),
    MonteCarlo { k1: MonteCarloK1Structure, nonempty: EmptinessIndex },
    Leaf(Color),
}

#[derive(Clone, Debug)]
struct Node {
    colors: Vec<Color>,
    level: usize,
    tester: Tester,
    children: Option<(usize, usize)>,
}

/// Per-query counters.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QueryStats {
    pub visited_per_level: Vec<usize>,
    pub total_visited: usize,
    /// Nodes whose range holds exactly one color but whose tester said No.
    pub bad_nodes_visited: usize,
    pub non_bad_visited: usize,
}

impl QueryStats {
    fn visit(&mut self, level: usize) {
        if self.visited_per_level.len() <= level {
            self.visited_per_level.resize(level + 1, 0);
        }
        self.visited_per_level[level] += 1;
        self.total_visited += 1;
    }
}

#[derive(Clone, Debug)]
pub struct ColorSplitTree {
    family: RangeFamily,
    mode: TesterMode,
    nodes: Vec<Node>,
}

pub fn build_color_split_tree(
    ds: &Dataset,
    mode: TesterMode,
    family: RangeFamily,
    seed: Seed,
) -> Result<ColorSplitTree> {
    ColorSplitTree::build(ds, mode, family, DEFAULT_CAP, seed)
}

impl ColorSplitTree {
    pub fn build(ds: &Dataset, mode: TesterMode, family: RangeFamily, cap: usize, seed: Seed) -> Result<Self> {
        if ds.dim() != family.dim() || (mode == TesterMode::Exact && family != RangeFamily::Dominance3) {
            return Err(Error::IncompatibleTester);
        }
        if cap < 1 {
            return Err(Error::CapTooSmall);
        }
        let indexes = Arc::new(ColorIndexes::build(ds, family)?);
        let colors: Vec<Color> = (0..ds.num_colors() as u32).map(Color).collect();
        let mut tree = ColorSplitTree { family, mode, nodes: Vec::new() };
        tree.build_node(ds, colors, 0, &indexes, cap, seed)?;
        Ok(tree)
    }

    fn build_node(
        &mut self,
        ds: &Dataset,
        colors: Vec<Color>,
        level: usize,
        indexes: &Arc<ColorIndexes>,
        cap: usize,
        seed: Seed,
    ) -> Result<usize> {
        let id = self.nodes.len();
        if colors.len() == 1 {
            self.nodes.push(Node { colors: colors.clone(), level, tester: Tester::Leaf(colors[0]), children: None });
            return Ok(id);
        }
        let tester = match self.mode {
            TesterMode::Exact => Tester::Exact(ExactK1Dominance::build_on(ds, &ds.points_of_colors(&colors), seed.derive(0))?),
            TesterMode::MonteCarlo => Tester::MonteCarlo {
                k1: MonteCarloK1Structure::build_shared(ds, &colors, indexes.clone(), cap, seed.derive(0))?,
                nonempty: EmptinessIndex::build(ds, &ds.points_of_colors(&colors), self.family),
            },
        };
        // Redraw one-sided splits: the node adopts its nonempty child.
        let mut rng = seed.derive(3).rng();
        let (left, right) = loop {
            let (l, r): (Vec<Color>, Vec<Color>) = colors.iter().partition(|_| rng.random_bool(0.5));
            if !l.is_empty() && !r.is_empty() {
                break (l, r);
            }
        };
        self.nodes.push(Node { colors, level, tester, children: None });
        let l = self.build_node(ds, left, level + 1, indexes, cap, seed.derive(1))?;
        let r = self.build_node(ds, right, level + 1, indexes, cap, seed.derive(2))?;
        self.nodes[id].children = Some((l, r));
        Ok(id)
    }

    pub fn family(&self) -> RangeFamily {
        self.family
    }

    pub fn mode(&self) -> TesterMode {
        self.mode
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn depth(&self) -> usize {
        self.nodes.iter().map(|n| n.level).max().unwrap_or(0)
    }

    /// Colors of each leaf, in tree order.
    pub fn leaf_colors(&self) -> Vec<Color> {
        self.nodes.iter().filter_map(|n| if let Tester::Leaf(c) = n.tester { Some(c) } else { None }).collect()
    }

    /// Checks that every internal node's colors are the disjoint union of
    /// its children's.
    pub fn check_partition(&self) -> bool {
        self.nodes.iter().all(|n| match n.children {
            None => n.colors.len() == 1,
            Some((l, r)) => {
                let mut u: Vec<Color> = self.nodes[l].colors.iter().chain(&self.nodes[r].colors).copied().collect();
                u.sort_unstable();
                let mut own = n.colors.clone();
                own.sort_unstable();
                u == own
            }
        })
    }

    /// Distinct colors in `q` (rank space for dominance), sorted.
    pub fn report_colors(&self, ds: &Dataset, q: &RangeQuery) -> Result<(Vec<Color>, QueryStats)> {
        if !self.family.matches(q) {
            return Err(Error::WrongQueryKind);
        }
        let mut out = Vec::new();
        let mut stats = QueryStats::default();
        if !self.nodes.is_empty() {
            self.visit(ds, 0, q, &mut out, &mut stats);
        }
        out.sort_unstable();
        Ok((out, stats))
    }

    fn visit(&self, ds: &Dataset, v: usize, q: &RangeQuery, out: &mut Vec<Color>, stats: &mut QueryStats) {
        let node = &self.nodes[v];
        stats.visit(node.level);
        let before = out.len();
        let mut said_no = false;
        match &node.tester {
            Tester::Leaf(c) => {
                if !self.leaf_empty(ds, *c, q) {
                    out.push(*c);
                }
                stats.non_bad_visited += 1;
                return;
            }
            Tester::Exact(t) => {
                let RangeQuery::Dominance3(corner) = q else { unreachable!("family checked") };
                match t.query(corner) {
                    K1Result::Empty => {}
                    K1Result::Single(c, _) => out.push(c),
                    K1Result::Multi => self.recurse(ds, node, q, out, stats),
                }
            }
            Tester::MonteCarlo { k1, nonempty } => {
                if nonempty.witness(ds, q).is_some() {
                    match k1.query(ds, q) {
                        McAnswer::Yes(c, _) => out.push(c),
                        McAnswer::No => {
                            said_no = true;
                            self.recurse(ds, node, q, out, stats);
                        }
                    }
                }
            }
        }
        if said_no && out.len() - before == 1 {
            stats.bad_nodes_visited += 1;
        } else {
            stats.non_bad_visited += 1;
        }
    }

    fn recurse(&self, ds: &Dataset, node: &Node, q: &RangeQuery, out: &mut Vec<Color>, stats: &mut QueryStats) {
        let (l, r) = node.children.expect("internal node");
        self.visit(ds, l, q, out, stats);
        self.visit(ds, r, q, out, stats);
    }

    fn leaf_empty(&self, ds: &Dataset, c: Color, q: &RangeQuery) -> bool {
        !ds.color_points(c).iter().any(|&i| q.contains(ds.point(i)))
    }
}

/// Visit statistics aggregated over a query set.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct VisitProfile {
    pub queries: usize,
    pub per_level: Vec<u64>,
    pub total_visited: u64,
    pub total_k: u64,
    pub bad: u64,
    pub non_bad: u64,
}

impl VisitProfile {
    pub fn add(&mut self, k: usize, s: &QueryStats) {
        self.queries += 1;
        if self.per_level.len() < s.visited_per_level.len() {
            self.per_level.resize(s.visited_per_level.len(), 0);
        }
        for (acc, &v) in self.per_level.iter_mut().zip(&s.visited_per_level) {
            *acc += v as u64;
        }
        self.total_visited += s.total_visited as u64;
        self.total_k += k as u64;
        self.bad += s.bad_nodes_visited as u64;
        self.non_bad += s.non_bad_visited as u64;
    }

    pub fn mean_level(&self, level: usize) -> f64 {
        self.per_level.get(level).map_or(0.0, |&v| v as f64 / self.queries.max(1) as f64)
    }

    /// Mean visited nodes per reported color (queries with k = 0 count
    /// toward visits but not colors).
    pub fn visited_per_k(&self) -> f64 {
        self.total_visited as f64 / self.total_k.max(1) as f64
    }

    pub fn bad_per_k(&self) -> f64 {
        self.bad as f64 / self.total_k.max(1) as f64
    }

    pub fn bad_per_non_bad(&self) -> f64 {
        self.bad as f64 / self.non_bad.max(1) as f64
    }

    /// `level,meanVisited` rows, then summary rows.
    pub fn write_csv(&self, mode: TesterMode, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "level,meanVisited")?;
        for l in 0..self.per_level.len() {
            writeln!(out, "{l},{:.4}", self.mean_level(l))?;
        }
        writeln!(out, "visitedPerK,{:.4}", self.visited_per_k())?;
        if mode == TesterMode::MonteCarlo {
            writeln!(out, "badPerK,{:.4}", self.bad_per_k())?;
            writeln!(out, "badPerNonBad,{:.4}", self.bad_per_non_bad())?;
        }
        Ok(())
    }
}

/// Runs every query and aggregates the visit counters.
pub fn node_visit_profile(tree: &ColorSplitTree, ds: &Dataset, queries: &[RangeQuery]) -> Result<VisitProfile> {
    let mut p = VisitProfile::default();
    for q in queries {
        let (colors, s) = tree.report_colors(ds, q)?;
        p.add(colors.len(), &s);
    }
    Ok(p)
}
