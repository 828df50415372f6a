use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::colortree::{ColorSplitTree, TesterMode};
use crate::data::{Color, Dataset, RangeQuery, Rect, Seed};
use crate::error::{Error, Result};
use crate::k1::{build_exact_k1_dominance, build_mc_k1, K1Result, McAnswer, RangeFamily, DEFAULT_CAP};
use crate::oracle::{oracle_colors, oracle_type2};
use crate::queries::{random_query, random_rect};
use crate::type2::{
    build_4sided, build_general, build_grid, build_shallow_cutting, points_of, CappedAnswer, Type2Params,
    DEFAULT_DEPTH_BUDGET,
};

/// What `verify` and `bench` exercise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Structure {
    ExactK1,
    McK1,
    ColorTree,
    Type2Capped,
    Type2General,
    ShallowCutting,
}

impl FromStr for Structure {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "exactK1" => Structure::ExactK1,
            "mcK1" => Structure::McK1,
            "colorTree" => Structure::ColorTree,
            "type2Capped" => Structure::Type2Capped,
            "type2General" => Structure::Type2General,
            "shallowCutting" => Structure::ShallowCutting,
            _ => return Err(Error::BadConfig(format!("unknown structure {s:?}"))),
        })
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Structure::ExactK1 => "exactK1",
            Structure::McK1 => "mcK1",
            Structure::ColorTree => "colorTree",
            Structure::Type2Capped => "type2Capped",
            Structure::Type2General => "type2General",
            Structure::ShallowCutting => "shallowCutting",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub queries: usize,
    pub seed: Seed,
    pub tau: Option<usize>,
    pub cap: usize,
    pub family: Option<RangeFamily>,
    pub mode: TesterMode,
    /// Corrupt one precomputed list before checking (type2Capped only).
    pub inject_fault: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            queries: 1000,
            seed: Seed(0),
            tau: None,
            cap: DEFAULT_CAP,
            family: None,
            mode: TesterMode::Exact,
            inject_fault: false,
        }
    }
}

/// First disagreement with the oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub index: usize,
    pub query: String,
    pub expected: String,
    pub got: String,
    pub seed: Seed,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "counterexample #{} (seed {}): query {} expected {} got {}",
            self.index, self.seed.0, self.query, self.expected, self.got
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub structure: Structure,
    pub m: usize,
    pub checked: usize,
    pub seed: Seed,
    pub counterexample: Option<Counterexample>,
}

impl VerifyReport {
    pub const CSV_HEADER: &'static str = "structure,m,checked,seed,status";

    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }

    pub fn csv_row(&self) -> String {
        let status = if self.passed() { "pass" } else { "fail" };
        format!("{},{},{},{},{}", self.structure, self.m, self.checked, self.seed.0, status)
    }
}

/// Default family for a dataset's dimension.
pub fn default_family(ds: &Dataset) -> RangeFamily {
    if ds.dim() == 2 {
        RangeFamily::Halfplane2
    } else {
        RangeFamily::Dominance3
    }
}

fn fmt_colors(c: &[Color]) -> String {
    let v: Vec<String> = c.iter().map(|c| c.to_string()).collect();
    format!("[{}]", v.join(" "))
}

fn need_2d(ds: &Dataset) -> Result<()> {
    if ds.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: ds.dim() });
    }
    Ok(())
}

struct Checker {
    checked: usize,
    seed: Seed,
    first: Option<Counterexample>,
}

impl Checker {
    fn check(&mut self, ok: bool, query: impl fmt::Debug, expected: impl FnOnce() -> String, got: impl FnOnce() -> String) {
        let index = self.checked;
        self.checked += 1;
        if !ok && self.first.is_none() {
            self.first =
                Some(Counterexample { index, query: format!("{query:?}"), expected: expected(), got: got(), seed: self.seed });
        }
    }
}

/// Runs a structure against the oracle; stops collecting at the first
/// mismatch but finishes the query set.
pub fn verify(ds: &Dataset, structure: Structure, opts: &VerifyOptions) -> Result<VerifyReport> {
    let mut ck = Checker { checked: 0, seed: opts.seed, first: None };
    let mut rng = opts.seed.derive(1).rng();
    let m = ds.m();
    match structure {
        Structure::ExactK1 => {
            let tester = build_exact_k1_dominance(ds, opts.seed.derive(0))?;
            let mut qs: Vec<RangeQuery> = Vec::new();
            if m <= 64 {
                let m = m as i64;
                for a in 0..=m {
                    for b in 0..=m {
                        qs.extend((0..=m).map(|c| RangeQuery::Dominance3([a, b, c])));
                    }
                }
            }
            qs.extend((0..opts.queries).map(|_| random_query(ds, RangeFamily::Dominance3, &mut rng)));
            for q in qs {
                let RangeQuery::Dominance3(corner) = q else { unreachable!() };
                let want = oracle_colors(ds, &q)?;
                let got = tester.query(&corner);
                let ok = match (got, want.len()) {
                    (K1Result::Empty, 0) | (K1Result::Multi, 2..) => true,
                    (K1Result::Single(c, i), 1) => c == want[0] && ds.point(i).color == c && q.contains(ds.point(i)),
                    _ => false,
                };
                ck.check(ok, q, || fmt_colors(&want), || format!("{got:?}"));
            }
        }
        Structure::McK1 => {
            let family = opts.family.unwrap_or_else(|| default_family(ds));
            let builds = opts.queries.div_ceil(1000).clamp(1, 10);
            for b in 0..builds {
                let tester = build_mc_k1(ds, family, opts.cap, opts.seed.derive(0).derive(b as u64))?;
                let n = opts.queries / builds + usize::from(b < opts.queries % builds);
                for _ in 0..n {
                    let q = random_query(ds, family, &mut rng);
                    let want = oracle_colors(ds, &q)?;
                    let got = tester.query(ds, &q);
                    let ok = match got {
                        McAnswer::No => true,
                        McAnswer::Yes(c, i) => want == [c] && q.contains(ds.point(i)),
                    };
                    ck.check(ok, q, || fmt_colors(&want), || format!("{got:?}"));
                }
            }
        }
        Structure::ColorTree => {
            let family = opts.family.unwrap_or_else(|| default_family(ds));
            let tree = ColorSplitTree::build(ds, opts.mode, family, opts.cap, opts.seed.derive(0))?;
            for _ in 0..opts.queries {
                let q = random_query(ds, family, &mut rng);
                let want = oracle_colors(ds, &q)?;
                let (got, _) = tree.report_colors(ds, &q)?;
                ck.check(got == want, q, || fmt_colors(&want), || fmt_colors(&got));
            }
        }
        Structure::Type2Capped => {
            need_2d(ds)?;
            let pts = points_of(ds);
            let tau = opts.tau.unwrap_or_else(|| Type2Params::defaults(ds.n()).tau);
            let mut grid = build_grid(&pts, tau, DEFAULT_DEPTH_BUDGET)?;
            if opts.inject_fault {
                grid.inject_fault();
            }
            let capped = build_4sided(&pts, tau)?;
            let contract = |ck: &mut Checker, r: Rect, got: CappedAnswer| -> Result<()> {
                let want = oracle_type2(ds, &r)?;
                let ok = match &got {
                    CappedAnswer::Exact(h) => *h == want,
                    CappedAnswer::Null => want.len() > tau,
                };
                ck.check(ok, r, || want.to_string(), || got.to_string());
                Ok(())
            };
            // Every top-level boundary pair reads one precomputed list.
            let corners: Vec<(i64, i64)> = grid.top_lists().into_iter().map(|e| e.0).collect();
            for (a, b) in corners {
                contract(&mut ck, Rect::two_sided(a, b), grid.query(a, b).into())?;
            }
            for i in 0..opts.queries {
                let sides = 2 + i % 3;
                let r = random_rect(m, sides, &mut rng);
                let got = if sides == 2 {
                    grid.query(r.x_hi, r.y_hi)
                } else {
                    capped.query(r.x_lo, r.x_hi, r.y_lo, r.y_hi)
                };
                contract(&mut ck, r, got.into())?;
            }
        }
        Structure::Type2General => {
            need_2d(ds)?;
            let mut params = Type2Params::defaults(ds.n());
            if let Some(t) = opts.tau {
                params = Type2Params { tau: t, t_no: t, t_yes: params.t_yes.min(t), ..params };
            }
            let g = build_general(&points_of(ds), params)?;
            for i in 0..opts.queries {
                let r = random_rect(m, 2 + i % 3, &mut rng);
                let want = oracle_type2(ds, &r)?;
                let (got, _) = g.query_type2(&r)?;
                ck.check(got == want, r, || want.to_string(), || got.to_string());
            }
        }
        Structure::ShallowCutting => {
            need_2d(ds)?;
            let pts = points_of(ds);
            let ts = opts.tau.map_or(vec![1, 2, 4, 8], |t| vec![t]);
            let dominated = |x: i64, y: i64| -> Result<usize> { Ok(oracle_type2(ds, &Rect::two_sided(x, y))?.len()) };
            for (ti, &t) in ts.iter().enumerate() {
                let sc = build_shallow_cutting(&pts, t);
                let monotone = sc.corners.windows(2).all(|w| w[0].0 > w[1].0 && w[0].1 < w[1].1);
                let bound = sc.len() <= 4 * m / t + 1;
                ck.check(monotone && bound, ("t", t), || format!("monotone corners, <= {} cells", 4 * m / t + 1), || {
                    format!("{} cells {:?}", sc.len(), sc.corners)
                });
                for (&(x, y), cl) in sc.corners.iter().zip(&sc.clists) {
                    let want = oracle_type2(ds, &Rect::two_sided(x, y))?.colors();
                    ck.check(*cl == want && cl.len() <= 2 * t, ("t", t, "cell", x, y), || fmt_colors(&want), || {
                        fmt_colors(cl)
                    });
                }
                let n = opts.queries / ts.len() + usize::from(ti < opts.queries % ts.len());
                for _ in 0..n {
                    let hi = m as i64 + 2;
                    let (qx, qy) = sc.clamp(rng.random_range(0..=hi), rng.random_range(0..=hi));
                    let got = sc.locate(qx, qy);
                    let ok = match got {
                        None => {
                            sc.corners.iter().all(|&(x, y)| qx > x || qy > y) && dominated(qx, qy)? >= t
                        }
                        Some(j) => qx <= sc.corners[j].0 && qy <= sc.corners[j].1,
                    };
                    ck.check(ok, ("t", t, "point", qx, qy), || "a containing cell, or >= t dominated colors".into(), || {
                        format!("{got:?}")
                    });
                }
            }
        }
    }
    Ok(VerifyReport { structure, m, checked: ck.checked, seed: opts.seed, counterexample: ck.first })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{generate, Family, GenSpec};

    fn ds(family: Family, m: usize, colors: usize) -> Dataset {
        Dataset::reduce_to_rank_space(&generate(&GenSpec::new(family, m, colors, Seed(3)).weights(3)).unwrap()).unwrap()
    }

    #[test]
    fn all_structures_pass() {
        let d3 = ds(Family::Uniform3, 40, 6);
        let d2 = ds(Family::Uniform2, 300, 12);
        let opts = VerifyOptions { queries: 300, tau: Some(4), ..Default::default() };
        for (s, d) in [
            (Structure::ExactK1, &d3),
            (Structure::McK1, &d3),
            (Structure::ColorTree, &d3),
            (Structure::McK1, &d2),
            (Structure::Type2Capped, &d2),
            (Structure::Type2General, &d2),
            (Structure::ShallowCutting, &d2),
        ] {
            let r = verify(d, s, &opts).unwrap();
            assert!(r.passed(), "{s}: {:?}", r.counterexample);
            assert!(r.checked >= 300);
        }
        let r = verify(&d3, Structure::ExactK1, &opts).unwrap();
        assert_eq!(r.checked, 41 * 41 * 41 + 300);
    }

    #[test]
    fn injected_fault_is_caught() {
        let d2 = ds(Family::Uniform2, 300, 12);
        let opts = VerifyOptions { queries: 10, tau: Some(4), inject_fault: true, ..Default::default() };
        let r = verify(&d2, Structure::Type2Capped, &opts).unwrap();
        let cx = r.counterexample.expect("fault must be caught");
        assert!(cx.to_string().starts_with("counterexample #"));
    }

    #[test]
    fn structure_names_roundtrip() {
        for s in ["exactK1", "mcK1", "colorTree", "type2Capped", "type2General", "shallowCutting"] {
            assert_eq!(s.parse::<Structure>().unwrap().to_string(), s);
        }
        assert!("nope".parse::<Structure>().is_err());
    }
}
