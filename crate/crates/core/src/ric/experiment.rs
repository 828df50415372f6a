use std::fmt;
use std::io::Write;
use std::str::FromStr;

use super::{
    dual_line, envelope2_changes, hull3_changes, make_hierarchy_plan, make_insertion_plan, nested_adversarial,
    InsertionMode,
};
use crate::data::{Dataset, Seed};
use crate::error::{Error, Result};
use crate::gen::{generate, Family, GenSpec};

/// Instance family for change-counting runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RicFamily {
    /// Uniform points in a cube, 3D hull.
    Uniform3,
    /// Gaussian clusters, 3D hull.
    Clustered3,
    /// Uniform points with Zipf colors, 3D hull.
    Zipf3,
    /// The adversarial circle-plus-axis instance, 3D hull.
    Remark1,
    /// Duals of uniform planar points, 2D lower envelope.
    Lines,
}

impl FromStr for RicFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "uniform3" => RicFamily::Uniform3,
            "clustered" => RicFamily::Clustered3,
            "zipfColors" => RicFamily::Zipf3,
            "remark1" => RicFamily::Remark1,
            "lines" => RicFamily::Lines,
            _ => return Err(Error::BadConfig(format!("unknown ric family {s:?}"))),
        })
    }
}

impl fmt::Display for RicFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RicFamily::Uniform3 => "uniform3",
            RicFamily::Clustered3 => "clustered",
            RicFamily::Zipf3 => "zipfColors",
            RicFamily::Remark1 => "remark1",
            RicFamily::Lines => "lines",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RicConfig {
    pub family: RicFamily,
    pub mode: InsertionMode,
    pub sizes: Vec<usize>,
    pub seeds: u64,
    pub seed: Seed,
    /// Points per color for random families.
    pub class_size: usize,
}

impl RicConfig {
    pub fn new(family: RicFamily, mode: InsertionMode, sizes: Vec<usize>, seeds: u64, seed: Seed) -> Self {
        RicConfig { family, mode, sizes, seeds, seed, class_size: 4 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RicRow {
    pub family: RicFamily,
    pub mode: InsertionMode,
    pub levels: usize,
    pub n: usize,
    pub seed: u64,
    pub total_created: u64,
    pub total_destroyed: u64,
}

impl RicRow {
    pub const CSV_HEADER: &'static str = "family,mode,levels,n,seed,totalCreated,totalDestroyed";

    pub fn write_csv<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        let mode = match self.mode {
            InsertionMode::Hierarchy(_) => "hierarchy".to_string(),
            m => m.to_string(),
        };
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            self.family, mode, self.levels, self.n, self.seed, self.total_created, self.total_destroyed
        )
    }
}

/// One run per (size, seed index).
pub fn ric_experiment(cfg: &RicConfig) -> Result<Vec<RicRow>> {
    let mut rows = Vec::new();
    for &n in &cfg.sizes {
        for s in 0..cfg.seeds {
            let run = cfg.seed.derive(n as u64).derive(s);
            rows.push(ric_run(cfg, n, run)?);
        }
    }
    Ok(rows)
}

fn ric_run(cfg: &RicConfig, n: usize, run: Seed) -> Result<RicRow> {
    let data_seed = run.derive(0);
    let plan_seed = run.derive(1);
    let colors = (n / cfg.class_size.max(1)).clamp(1, n);
    let random = |family: Family, dim: usize| -> Result<Dataset> {
        Dataset::reduce_to_rank_space(&generate(&GenSpec::new(family, n, colors, data_seed).dim(dim))?)
    };
    let (ds, plan) = match (cfg.family, cfg.mode) {
        (RicFamily::Remark1, InsertionMode::Hierarchy(l)) if l >= 2 => {
            let (ds, h) = nested_adversarial(n, l)?;
            let plan = make_hierarchy_plan(&h, l, plan_seed)?;
            (ds, plan)
        }
        (family, mode) => {
            let ds = match family {
                RicFamily::Uniform3 => random(Family::Uniform3, 3)?,
                RicFamily::Clustered3 => random(Family::Clustered, 3)?,
                RicFamily::Zipf3 => random(Family::ZipfColors, 3)?,
                RicFamily::Lines => random(Family::Uniform2, 2)?,
                RicFamily::Remark1 => super::adversarial_instance(n)?,
            };
            let plan = make_insertion_plan(&ds, mode, plan_seed).map_err(|e| match e {
                Error::BadHierarchy(m) => Error::BadConfig(m),
                e => e,
            })?;
            (ds, plan)
        }
    };
    let stats = if cfg.family == RicFamily::Lines {
        let lines: Vec<_> = ds.points().iter().map(|p| dual_line(p.orig_xy())).collect();
        envelope2_changes(&lines, &plan)?
    } else {
        let pts: Vec<[i64; 3]> = ds.points().iter().map(|p| p.orig).collect();
        hull3_changes(&pts, &plan)?
    };
    Ok(RicRow {
        family: cfg.family,
        mode: cfg.mode,
        levels: plan.levels,
        n,
        seed: run.0,
        total_created: stats.total_created,
        total_destroyed: stats.total_destroyed,
    })
}
