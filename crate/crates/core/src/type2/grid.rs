use std::collections::BTreeMap;
use std::ops::Range;

use super::WPoint;
use crate::data::{merge_histograms, Color, Histogram};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    fn of(self, p: &WPoint) -> i64 {
        match self {
            Axis::X => p.x,
            Axis::Y => p.y,
        }
    }
}

/// Cuts points sorted along `axis` into contiguous slabs: a point heavier
/// than `threshold` opens a new slab (unless the current one is empty), and
/// a slab is closed once its weight exceeds `threshold`.
pub fn split_by_weight(points: &[WPoint], axis: Axis, threshold: u64) -> Result<Vec<Range<usize>>> {
    if threshold == 0 {
        return Err(Error::BadTau);
    }
    if points.windows(2).any(|w| axis.of(&w[0]) > axis.of(&w[1])) {
        return Err(Error::Unsorted);
    }
    let mut out = Vec::new();
    let (mut start, mut weight) = (0, 0u64);
    for (i, p) in points.iter().enumerate() {
        if p.weight > threshold && i > start {
            out.push(start..i);
            start = i;
            weight = 0;
        }
        weight += p.weight;
        if weight > threshold {
            out.push(start..i + 1);
            start = i + 1;
            weight = 0;
        }
    }
    if start < points.len() {
        out.push(start..points.len());
    }
    Ok(out)
}

#[derive(Clone, Debug)]
enum GridNode {
    Scan(Vec<WPoint>),
    Grid(Box<Grid>),
}

#[derive(Clone, Debug)]
struct Grid {
    /// Largest x of each column, largest y of each row.
    col_hi: Vec<i64>,
    row_hi: Vec<i64>,
    /// `lists[i * rows + j]`: colors of `x <= col_hi[i], y <= row_hi[j]`,
    /// `None` past the cap.
    lists: Vec<Option<Histogram>>,
    cols: Vec<GridNode>,
    rows: Vec<GridNode>,
}

/// Capped 2-sided structure for queries `x <= a, y <= b`.
#[derive(Clone, Debug)]
pub struct GridStructure {
    tau: usize,
    root: GridNode,
}

pub const DEFAULT_DEPTH_BUDGET: usize = 32;

/// Builds the recursive grid. Points must have distinct x and distinct y.
pub fn build_grid(points: &[WPoint], tau: usize, depth_budget: usize) -> Result<GridStructure> {
    if tau < 1 {
        return Err(Error::BadTau);
    }
    Ok(GridStructure { tau, root: build_node(points.to_vec(), tau as u64, depth_budget) })
}

fn scan(points: &[WPoint], a: i64, b: i64) -> Histogram {
    Histogram::from_items(points.iter().filter(|p| p.x <= a && p.y <= b).map(|p| (p.color, p.weight)))
}

fn build_node(mut pts: Vec<WPoint>, tau: u64, budget: usize) -> GridNode {
    let n: u64 = pts.iter().map(|p| p.weight).sum();
    if pts.len() <= 1 || n < tau.saturating_mul(tau) || budget == 0 {
        return GridNode::Scan(pts);
    }
    let threshold = ((n as f64) * (tau as f64)).sqrt().ceil() as u64;
    pts.sort_unstable_by_key(|p| p.x);
    let col_ranges = split_by_weight(&pts, Axis::X, threshold).expect("sorted");
    let by_x = pts.clone();
    pts.sort_unstable_by_key(|p| p.y);
    let row_ranges = split_by_weight(&pts, Axis::Y, threshold).expect("sorted");
    let by_y = pts;
    if col_ranges.len() == 1 && row_ranges.len() == 1 {
        return GridNode::Scan(by_x);
    }
    let col_hi: Vec<i64> = col_ranges.iter().map(|r| by_x[r.end - 1].x).collect();
    let row_hi: Vec<i64> = row_ranges.iter().map(|r| by_y[r.end - 1].y).collect();
    let lists = dom_lists(&by_x, &col_ranges, &row_hi, tau as usize);
    let child = |slab: &[WPoint]| {
        if slab.len() == by_x.len() {
            GridNode::Scan(slab.to_vec())
        } else {
            build_node(slab.to_vec(), tau, budget - 1)
        }
    };
    let cols = col_ranges.iter().map(|r| child(&by_x[r.clone()])).collect();
    let rows = row_ranges.iter().map(|r| child(&by_y[r.clone()])).collect();
    GridNode::Grid(Box::new(Grid { col_hi, row_hi, lists, cols, rows }))
}

/// Histograms of every `Dom(i, j)`, built column by column.
fn dom_lists(by_x: &[WPoint], cols: &[Range<usize>], row_hi: &[i64], tau: usize) -> Vec<Option<Histogram>> {
    let rows = row_hi.len();
    let mut out = Vec::with_capacity(cols.len() * rows);
    let mut prev: Vec<Option<BTreeMap<Color, u64>>> = vec![Some(BTreeMap::new()); rows];
    for r in cols {
        let mut col: Vec<(usize, Color, u64)> = by_x[r.clone()]
            .iter()
            .map(|p| (row_hi.partition_point(|&h| h < p.y), p.color, p.weight))
            .collect();
        col.sort_unstable_by_key(|e| e.0);
        let mut cum: Option<BTreeMap<Color, u64>> = Some(BTreeMap::new());
        let mut k = 0;
        for (j, slot) in prev.iter_mut().enumerate() {
            while k < col.len() && col[k].0 == j {
                if let Some(m) = cum.as_mut() {
                    *m.entry(col[k].1).or_insert(0) += col[k].2;
                    if m.len() > tau {
                        cum = None;
                    }
                }
                k += 1;
            }
            let dom = match (slot.take(), &cum) {
                (Some(mut p), Some(c)) => {
                    for (&color, &w) in c {
                        *p.entry(color).or_insert(0) += w;
                    }
                    (p.len() <= tau).then_some(p)
                }
                _ => None,
            };
            out.push(dom.as_ref().map(|m| Histogram::from_items(m.iter().map(|(&c, &w)| (c, w)))));
            *slot = dom;
        }
    }
    out
}

fn query_node(node: &GridNode, a: i64, b: i64) -> Option<Histogram> {
    let g = match node {
        GridNode::Scan(pts) => return Some(scan(pts, a, b)),
        GridNode::Grid(g) => g,
    };
    let i = g.col_hi.partition_point(|&h| h <= a);
    let j = g.row_hi.partition_point(|&h| h <= b);
    if i == 0 {
        return query_node(&g.cols[0], a, b);
    }
    if j == 0 {
        return query_node(&g.rows[0], a, b);
    }
    let middle = g.lists[(i - 1) * g.row_hi.len() + (j - 1)].as_ref()?;
    let upper = match g.rows.get(j) {
        Some(r) => query_node(r, a, b)?,
        None => Histogram::new(),
    };
    let right = match g.cols.get(i) {
        Some(c) => query_node(c, a, g.row_hi[j - 1])?,
        None => Histogram::new(),
    };
    Some(merge_histograms(&[middle, &upper, &right]).expect("sorted parts"))
}

/// Per-level summary of a grid, for invariant checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridLevel {
    pub column_weights: Vec<u64>,
    pub column_sizes: Vec<usize>,
    pub row_weights: Vec<u64>,
    pub row_sizes: Vec<usize>,
    pub col_hi: Vec<i64>,
    pub row_hi: Vec<i64>,
}

impl GridStructure {
    pub fn tau(&self) -> usize {
        self.tau
    }

    /// Exact histogram of `x <= a, y <= b`, or `None` (NULL) when some part
    /// of the decomposition holds more than `tau` colors.
    pub fn query(&self, a: i64, b: i64) -> Option<Histogram> {
        query_node(&self.root, a, b)
    }

    /// Whether the top level is a grid rather than a scan list.
    pub fn is_grid(&self) -> bool {
        matches!(self.root, GridNode::Grid(_))
    }

    /// Top-level column/row layout, `None` for a scan list.
    pub fn top_level(&self) -> Option<GridLevel> {
        let GridNode::Grid(g) = &self.root else { return None };
        let summary = |nodes: &[GridNode]| -> (Vec<u64>, Vec<usize>) {
            nodes.iter().map(|n| (node_weight(n), node_len(n))).unzip()
        };
        let (column_weights, column_sizes) = summary(&g.cols);
        let (row_weights, row_sizes) = summary(&g.rows);
        Some(GridLevel { column_weights, column_sizes, row_weights, row_sizes, col_hi: g.col_hi.clone(), row_hi: g.row_hi.clone() })
    }

    /// Top-level lists as `((x_i, y_j), L_ij)`.
    pub fn top_lists(&self) -> Vec<((i64, i64), Option<&Histogram>)> {
        let GridNode::Grid(g) = &self.root else { return Vec::new() };
        let rows = g.row_hi.len();
        g.lists.iter().enumerate().map(|(k, l)| ((g.col_hi[k / rows], g.row_hi[k % rows]), l.as_ref())).collect()
    }

    /// Adds one unit of weight to the first nonempty top-level list, so that
    /// verification has a known-bad structure to catch. Returns false if
    /// there is no such list.
    #[doc(hidden)]
    pub fn inject_fault(&mut self) -> bool {
        let GridNode::Grid(g) = &mut self.root else { return false };
        for l in g.lists.iter_mut().flatten() {
            if let Some(&(c, _)) = l.entries().first() {
                *l = merge_histograms(&[l, &Histogram::from_items([(c, 1)])]).expect("sorted");
                return true;
            }
        }
        false
    }
}

fn node_weight(n: &GridNode) -> u64 {
    match n {
        GridNode::Scan(p) => p.iter().map(|p| p.weight).sum(),
        GridNode::Grid(g) => g.cols.iter().map(node_weight).sum(),
    }
}

fn node_len(n: &GridNode) -> usize {
    match n {
        GridNode::Scan(p) => p.len(),
        GridNode::Grid(g) => g.cols.iter().map(node_len).sum(),
    }
}
