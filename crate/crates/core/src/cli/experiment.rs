use std::fmt;
use std::io::Write;
use std::str::FromStr;

use crate::colortree::{node_visit_profile, ColorSplitTree, TesterMode};
use crate::data::{Dataset, RangeQuery, Seed};
use crate::error::{Error, Result};
use crate::gen::{generate, Family, GenSpec};
use crate::k1::{conflict_experiment, yes_rate_experiment, RangeFamily};
use crate::oracle::oracle_k;
use crate::queries::{dominance_query_with_k, random_query, random_queries};
use crate::ric::{ric_experiment, InsertionMode, RicConfig, RicFamily};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExperimentKind {
    Ric,
    Conflict,
    YesRate,
    Visits,
}

impl FromStr for ExperimentKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "ric" => ExperimentKind::Ric,
            "conflict" => ExperimentKind::Conflict,
            "yesrate" => ExperimentKind::YesRate,
            "visits" => ExperimentKind::Visits,
            _ => return Err(Error::BadConfig(format!("unknown experiment {s:?}"))),
        })
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExperimentKind::Ric => "ric",
            ExperimentKind::Conflict => "conflict",
            ExperimentKind::YesRate => "yesrate",
            ExperimentKind::Visits => "visits",
        })
    }
}

/// Shared experiment knobs. `family` and `mode` are parsed per kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub family: String,
    pub mode: String,
    pub sizes: Vec<usize>,
    pub seeds: u64,
    pub seed: Seed,
    pub cap: usize,
    /// `0` picks a per-kind default.
    pub colors: usize,
    pub queries: usize,
    pub builds: usize,
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind) -> Self {
        let (family, mode) = match kind {
            ExperimentKind::Ric => ("uniform3", "classBatch"),
            _ => ("dominance", "exact"),
        };
        ExperimentConfig {
            kind,
            family: family.into(),
            mode: mode.into(),
            sizes: vec![500, 2000],
            seeds: 3,
            seed: Seed(0),
            cap: 20,
            colors: 0,
            queries: 200,
            builds: 10,
        }
    }
}

fn mean(v: &[f64]) -> f64 {
    if v.is_empty() {
        0.0
    } else {
        v.iter().sum::<f64>() / v.len() as f64
    }
}

fn uniform_for(family: RangeFamily) -> Family {
    match family {
        RangeFamily::Halfplane2 => Family::Uniform2,
        _ => Family::Uniform3,
    }
}

fn dataset(family: RangeFamily, m: usize, colors: usize, seed: Seed) -> Result<Dataset> {
    Dataset::reduce_to_rank_space(&generate(&GenSpec::new(uniform_for(family), m, colors.clamp(1, m), seed))?)
}

/// A query whose range holds exactly one color, if one turns up.
pub fn single_color_query(ds: &Dataset, family: RangeFamily, seed: Seed) -> Result<Option<RangeQuery>> {
    let mut rng = seed.rng();
    for _ in 0..10_000 {
        let q = match family {
            RangeFamily::Dominance3 => match dominance_query_with_k(ds, 1, &mut rng) {
                Some(q) => q,
                None => continue,
            },
            _ => random_query(ds, family, &mut rng),
        };
        if oracle_k(ds, &q)? == 1 {
            return Ok(Some(q));
        }
    }
    Ok(None)
}

/// Writes the experiment CSV: one row per (size, seed), then one `mean`
/// row per size.
pub fn run_experiment(cfg: &ExperimentConfig, out: &mut dyn Write) -> Result<()> {
    if cfg.sizes.is_empty() || cfg.seeds == 0 {
        return Err(Error::BadConfig("need at least one size and one seed".into()));
    }
    match cfg.kind {
        ExperimentKind::Ric => ric(cfg, out),
        ExperimentKind::Conflict => conflict(cfg, out),
        ExperimentKind::YesRate => yes_rate(cfg, out),
        ExperimentKind::Visits => visits(cfg, out),
    }
}

fn ric(cfg: &ExperimentConfig, out: &mut dyn Write) -> Result<()> {
    let family: RicFamily = cfg.family.parse()?;
    let mode: InsertionMode = cfg.mode.parse()?;
    let rows = ric_experiment(&RicConfig::new(family, mode, cfg.sizes.clone(), cfg.seeds, cfg.seed))?;
    writeln!(out, "family,mode,levels,n,seed,totalCreated,perN,perNLnN")?;
    for &n in &cfg.sizes {
        let (mut created, mut per_n, mut per_nln) = (Vec::new(), Vec::new(), Vec::new());
        let mut levels = 0;
        for (s, r) in rows.iter().filter(|r| r.n == n).enumerate() {
            let nf = r.n as f64;
            let (a, b) = (r.total_created as f64 / nf, r.total_created as f64 / (nf * nf.ln()));
            writeln!(out, "{family},{mode},{},{n},{s},{},{a:.4},{b:.4}", r.levels, r.total_created)?;
            created.push(r.total_created as f64);
            per_n.push(a);
            per_nln.push(b);
            levels = r.levels;
        }
        writeln!(
            out,
            "{family},{mode},{levels},{n},mean,{:.1},{:.4},{:.4}",
            mean(&created),
            mean(&per_n),
            mean(&per_nln)
        )?;
    }
    Ok(())
}

fn conflict(cfg: &ExperimentConfig, out: &mut dyn Write) -> Result<()> {
    let family: RangeFamily = cfg.family.parse()?;
    writeln!(out, "family,m,colors,c,seed,located,meanConflictSize,badCellFraction")?;
    for &m in &cfg.sizes {
        let colors = if cfg.colors == 0 { 50 } else { cfg.colors }.min(m);
        let (mut sizes, mut bad) = (Vec::new(), Vec::new());
        for s in 0..cfg.seeds {
            let run = cfg.seed.derive(m as u64).derive(s);
            let ds = dataset(family, m, colors, run.derive(0))?;
            let r = conflict_experiment(&ds, family, cfg.cap, cfg.builds, cfg.queries, run.derive(1))?;
            writeln!(
                out,
                "{family},{m},{colors},{},{s},{},{:.4},{:.4}",
                cfg.cap, r.located, r.mean_conflict_size, r.bad_cell_fraction
            )?;
            sizes.push(r.mean_conflict_size);
            bad.push(r.bad_cell_fraction);
        }
        writeln!(out, "{family},{m},{colors},{},mean,,{:.4},{:.4}", cfg.cap, mean(&sizes), mean(&bad))?;
    }
    Ok(())
}

fn yes_rate(cfg: &ExperimentConfig, out: &mut dyn Write) -> Result<()> {
    let family: RangeFamily = cfg.family.parse()?;
    writeln!(out, "family,m,colors,c,seed,trials,yesRate")?;
    for &m in &cfg.sizes {
        let colors = if cfg.colors == 0 { (m / 10).max(1) } else { cfg.colors }.min(m);
        let mut rates = Vec::new();
        for s in 0..cfg.seeds {
            let run = cfg.seed.derive(m as u64).derive(s);
            let ds = dataset(family, m, colors, run.derive(0))?;
            let Some(q) = single_color_query(&ds, family, run.derive(1))? else {
                return Err(Error::BadConfig(format!("no single-color query found for m={m}")));
            };
            let rate = yes_rate_experiment(&ds, family, &q, cfg.cap, cfg.builds, run.derive(2))?;
            writeln!(out, "{family},{m},{colors},{},{s},{},{rate:.4}", cfg.cap, cfg.builds)?;
            rates.push(rate);
        }
        writeln!(out, "{family},{m},{colors},{},mean,{},{:.4}", cfg.cap, cfg.builds, mean(&rates))?;
    }
    Ok(())
}

fn visits(cfg: &ExperimentConfig, out: &mut dyn Write) -> Result<()> {
    let family: RangeFamily = cfg.family.parse()?;
    let mode: TesterMode = cfg.mode.parse()?;
    writeln!(out, "family,mode,m,colors,seed,queries,meanK,visitedPerK,badPerK,badPerNonBad")?;
    for &m in &cfg.sizes {
        let colors = if cfg.colors == 0 { (m / 16).max(1) } else { cfg.colors }.min(m);
        let (mut vk, mut bk, mut bn) = (Vec::new(), Vec::new(), Vec::new());
        for s in 0..cfg.seeds {
            let run = cfg.seed.derive(m as u64).derive(s);
            let ds = dataset(family, m, colors, run.derive(0))?;
            let tree = ColorSplitTree::build(&ds, mode, family, cfg.cap, run.derive(1))?;
            let qs = random_queries(&ds, family, cfg.queries, &mut run.derive(2).rng());
            let p = node_visit_profile(&tree, &ds, &qs)?;
            let mean_k = p.total_k as f64 / p.queries.max(1) as f64;
            writeln!(
                out,
                "{family},{mode},{m},{colors},{s},{},{mean_k:.4},{:.4},{:.4},{:.4}",
                p.queries,
                p.visited_per_k(),
                p.bad_per_k(),
                p.bad_per_non_bad()
            )?;
            vk.push(p.visited_per_k());
            bk.push(p.bad_per_k());
            bn.push(p.bad_per_non_bad());
        }
        writeln!(
            out,
            "{family},{mode},{m},{colors},mean,{},,{:.4},{:.4},{:.4}",
            cfg.queries,
            mean(&vk),
            mean(&bk),
            mean(&bn)
        )?;
    }
    Ok(())
}
