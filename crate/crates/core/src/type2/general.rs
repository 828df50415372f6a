use super::estimator::{build_estimator, EstimatorE};
use super::sided::{build_4sided, Capped4};
use super::WPoint;
use crate::data::{Color, Histogram, Rect};
use crate::error::{Error, Result};

/// Build parameters of the general structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Type2Params {
    pub tau: usize,
    pub t_yes: usize,
    pub t_no: usize,
    pub degree: usize,
}

impl Type2Params {
    /// Defaults for total weight `n`.
    pub fn defaults(n: u64) -> Self {
        let lg = (n.max(2) as f64).log2().ceil() as usize;
        let tau = lg.pow(3).min(n as usize).max(8);
        let t_yes = (lg * lg).max(4);
        Type2Params { tau, t_yes: t_yes.min(tau), t_no: tau, degree: 4 }
    }
}

/// Per-query node counts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Type2Stats {
    pub visited: usize,
    pub yes_nodes: usize,
    pub no_nodes: usize,
}

#[derive(Clone, Debug)]
struct GNode {
    capped: Capped4,
    estimator: EstimatorE,
    children: Option<(Box<GNode>, Box<GNode>)>,
}

/// Binary range tree over color ids; each node keeps a capped 4-sided
/// structure and an estimator over its points.
#[derive(Clone, Debug)]
pub struct GeneralStructure {
    params: Type2Params,
    root: Option<GNode>,
    nodes: usize,
}

fn build_node(points: &[WPoint], colors: &[Color], params: &Type2Params, nodes: &mut usize) -> Result<GNode> {
    *nodes += 1;
    let capped = build_4sided(points, params.tau)?;
    let estimator = build_estimator(points, params.degree, params.t_yes, params.t_no)?;
    let children = if colors.len() > 1 {
        let mid = colors.len() / 2;
        let split = colors[mid];
        let (l, r): (Vec<WPoint>, Vec<WPoint>) = points.iter().partition(|p| p.color < split);
        Some((
            Box::new(build_node(&l, &colors[..mid], params, nodes)?),
            Box::new(build_node(&r, &colors[mid..], params, nodes)?),
        ))
    } else {
        None
    };
    Ok(GNode { capped, estimator, children })
}

pub fn build_general(points: &[WPoint], params: Type2Params) -> Result<GeneralStructure> {
    if params.tau < 1 {
        return Err(Error::BadTau);
    }
    let mut colors: Vec<Color> = points.iter().map(|p| p.color).collect();
    colors.sort_unstable();
    colors.dedup();
    let mut nodes = 0;
    let root = if colors.is_empty() { None } else { Some(build_node(points, &colors, &params, &mut nodes)?) };
    Ok(GeneralStructure { params, root, nodes })
}

impl GNode {
    fn query(&self, q: &Rect, stats: &mut Type2Stats) -> Result<Histogram> {
        stats.visited += 1;
        let est = self.estimator.estimate_many_colors(q.x_lo, q.x_hi, q.y_lo, q.y_hi);
        match &self.children {
            Some((l, r)) if !est.yes => {
                stats.no_nodes += 1;
                let mut h = l.query(q, stats)?;
                h.append_disjoint(r.query(q, stats)?);
                Ok(h)
            }
            _ => {
                stats.yes_nodes += usize::from(est.yes);
                self.capped.query(q.x_lo, q.x_hi, q.y_lo, q.y_hi).ok_or(Error::CappedReturnedNullOnYes)
            }
        }
    }
}

impl GeneralStructure {
    pub fn params(&self) -> Type2Params {
        self.params
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes
    }

    /// Exact per-color weights in `q` (rank space).
    pub fn query_type2(&self, q: &Rect) -> Result<(Histogram, Type2Stats)> {
        let mut stats = Type2Stats::default();
        let h = match &self.root {
            Some(root) if !q.is_empty() => root.query(q, &mut stats)?,
            _ => Histogram::new(),
        };
        Ok((h, stats))
    }
}
