use std::io::Write;
use std::sync::Arc;

use super::mc::{ColorIndexes, McAnswer, MonteCarloK1Structure};
use super::RangeFamily;
use crate::data::{Color, Dataset, RangeQuery, Seed};
use crate::error::{Error, Result};
use crate::gen::{generate, Family, GenSpec};
use crate::oracle::oracle_colors;
use crate::queries::random_queries;

/// Fraction of `trials` fresh builds answering `Yes` on a fixed query whose
/// range holds exactly one color.
pub fn yes_rate_experiment(
    ds: &Dataset,
    family: RangeFamily,
    q: &RangeQuery,
    cap: usize,
    trials: usize,
    seed: Seed,
) -> Result<f64> {
    let truth = oracle_colors(ds, q)?;
    if truth.len() != 1 {
        return Err(Error::NotSingleColor { k: truth.len() });
    }
    let indexes = Arc::new(ColorIndexes::build(ds, family)?);
    let colors: Vec<Color> = (0..ds.num_colors() as u32).map(Color).collect();
    let mut yes = 0usize;
    for t in 0..trials {
        let st = MonteCarloK1Structure::build_shared(ds, &colors, indexes.clone(), cap, seed.derive(t as u64))?;
        if let McAnswer::Yes(c, _) = st.query(ds, q) {
            debug_assert_eq!(c, truth[0]);
            yes += 1;
        }
    }
    Ok(yes as f64 / trials.max(1) as f64)
}

/// Aggregates over many (build, query) pairs with queries drawn
/// independently of the builds.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConflictSummary {
    pub pairs: usize,
    /// Pairs whose query landed in a cell.
    pub located: usize,
    /// Mean exact conflict-set size of the located cell.
    pub mean_conflict_size: f64,
    /// Fraction of located pairs whose cell is bad.
    pub bad_cell_fraction: f64,
    /// Pairs whose range holds exactly one color.
    pub single_color: usize,
    pub yes_on_single: usize,
    /// `Yes` answers disagreeing with the oracle. Always zero.
    pub unsound_yes: usize,
}

impl ConflictSummary {
    pub fn yes_rate(&self) -> f64 {
        if self.single_color == 0 {
            0.0
        } else {
            self.yes_on_single as f64 / self.single_color as f64
        }
    }
}

pub fn conflict_experiment(
    ds: &Dataset,
    family: RangeFamily,
    cap: usize,
    builds: usize,
    queries_per_build: usize,
    seed: Seed,
) -> Result<ConflictSummary> {
    let indexes = Arc::new(ColorIndexes::build(ds, family)?);
    let colors: Vec<Color> = (0..ds.num_colors() as u32).map(Color).collect();
    let mut qrng = seed.derive(1).rng();
    let mut s = ConflictSummary::default();
    let (mut conflict_total, mut bad) = (0usize, 0usize);
    for b in 0..builds {
        let st = MonteCarloK1Structure::build_shared(ds, &colors, indexes.clone(), cap, seed.derive(0).derive(b as u64))?;
        for q in random_queries(ds, family, queries_per_build, &mut qrng) {
            s.pairs += 1;
            if let Some(cell) = st.locate(&q) {
                s.located += 1;
                conflict_total += st.cell_conflicts_exact(ds, cell).len();
                bad += usize::from(st.cell_list(cell).is_none());
            }
            let truth = oracle_colors(ds, &q)?;
            let ans = st.query(ds, &q);
            if truth.len() == 1 {
                s.single_color += 1;
            }
            match ans {
                McAnswer::Yes(c, _) if truth == [c] => s.yes_on_single += 1,
                McAnswer::Yes(..) => s.unsound_yes += 1,
                McAnswer::No => {}
            }
        }
    }
    if s.located > 0 {
        s.mean_conflict_size = conflict_total as f64 / s.located as f64;
        s.bad_cell_fraction = bad as f64 / s.located as f64;
    }
    Ok(s)
}

#[derive(Clone, Debug, PartialEq)]
pub struct K1Config {
    pub family: RangeFamily,
    pub sizes: Vec<usize>,
    /// Colors per dataset; `0` means `m / 10`.
    pub colors: usize,
    pub cap: usize,
    pub builds: usize,
    pub queries: usize,
    pub seed: Seed,
}

#[derive(Clone, Debug, PartialEq)]
pub struct K1Row {
    pub family: RangeFamily,
    pub m: usize,
    pub colors: usize,
    pub cap: usize,
    pub seed: u64,
    pub yes_rate: f64,
    pub mean_conflict_size: f64,
    pub bad_cell_fraction: f64,
    pub unsound_yes: usize,
}

impl K1Row {
    pub const CSV_HEADER: &'static str = "family,m,colors,c,seed,yesRate,meanConflictSize,badCellFraction";

    pub fn write_csv(rows: &[K1Row], mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "{}", Self::CSV_HEADER)?;
        for r in rows {
            writeln!(
                out,
                "{},{},{},{},{},{:.4},{:.4},{:.4}",
                r.family, r.m, r.colors, r.cap, r.seed, r.yes_rate, r.mean_conflict_size, r.bad_cell_fraction
            )?;
        }
        Ok(())
    }
}

/// One row per dataset size: uniform points, random colors.
pub fn k1_experiment(cfg: &K1Config) -> Result<Vec<K1Row>> {
    if cfg.sizes.is_empty() || cfg.builds == 0 {
        return Err(Error::BadConfig("need at least one size and one build".into()));
    }
    let gen_family = match cfg.family {
        RangeFamily::Halfplane2 => Family::Uniform2,
        _ => Family::Uniform3,
    };
    let mut rows = Vec::new();
    for &m in &cfg.sizes {
        let colors = if cfg.colors == 0 { (m / 10).max(1) } else { cfg.colors };
        let run = cfg.seed.derive(m as u64);
        let raw = generate(&GenSpec::new(gen_family, m, colors, run.derive(0)))?;
        let ds = Dataset::reduce_to_rank_space(&raw)?;
        let s = conflict_experiment(&ds, cfg.family, cfg.cap, cfg.builds, cfg.queries, run.derive(1))?;
        rows.push(K1Row {
            family: cfg.family,
            m,
            colors,
            cap: cfg.cap,
            seed: cfg.seed.0,
            yes_rate: s.yes_rate(),
            mean_conflict_size: s.mean_conflict_size,
            bad_cell_fraction: s.bad_cell_fraction,
            unsound_yes: s.unsound_yes,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::RawPoint;

    fn planted() -> (Dataset, RangeQuery) {
        let mut raw = vec![RawPoint::new(&[1, 1, 1], 1), RawPoint::new(&[2, 3, 2], 1)];
        raw.extend((0..30).map(|i| RawPoint::new(&[50 + i, 80 - i, 40 + 2 * i], 0)));
        raw.extend((0..30).map(|i| RawPoint::new(&[60 - i, 50 + i, 45 + i], 2)));
        let ds = Dataset::reduce_to_rank_space(&raw).unwrap();
        let q = ds.map_query(&RangeQuery::Dominance3([10, 10, 10])).unwrap();
        (ds, q)
    }

    #[test]
    fn multi_color_query_rejected() {
        let (ds, _) = planted();
        let q = RangeQuery::Dominance3([ds.m() as i64; 3]);
        assert_eq!(
            yes_rate_experiment(&ds, RangeFamily::Dominance3, &q, 20, 10, Seed(1)),
            Err(Error::NotSingleColor { k: 3 })
        );
    }

    #[test]
    fn yes_rate_near_half_with_large_cap() {
        let (ds, q) = planted();
        let r = yes_rate_experiment(&ds, RangeFamily::Dominance3, &q, 1000, 2000, Seed(2)).unwrap();
        assert!(r >= 0.45, "{r}");
    }

    #[test]
    fn summary_is_sound() {
        let raw = generate(&GenSpec::new(Family::Uniform3, 200, 20, Seed(3))).unwrap();
        let ds = Dataset::reduce_to_rank_space(&raw).unwrap();
        let s = conflict_experiment(&ds, RangeFamily::Dominance3, 20, 5, 200, Seed(4)).unwrap();
        assert_eq!(s.pairs, 1000);
        assert_eq!(s.unsound_yes, 0);
        assert!(s.located > 0 && s.mean_conflict_size > 0.0);
    }

    #[test]
    fn csv_layout() {
        let cfg = K1Config {
            family: RangeFamily::Halfplane2,
            sizes: vec![100],
            colors: 0,
            cap: 20,
            builds: 2,
            queries: 50,
            seed: Seed(5),
        };
        let rows = k1_experiment(&cfg).unwrap();
        let mut buf = Vec::new();
        K1Row::write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], K1Row::CSV_HEADER);
        assert!(lines[1].starts_with("halfplane,100,10,20,5,"));
    }
}
