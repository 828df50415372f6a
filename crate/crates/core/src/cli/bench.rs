use std::time::Instant;

use super::verify::{default_family, Counterexample, Structure, VerifyOptions};
use crate::colortree::ColorSplitTree;
use crate::data::{Dataset, RangeQuery, Rect};
use crate::error::{Error, Result};
use crate::k1::{build_exact_k1_dominance, build_mc_k1, K1Result, McAnswer, RangeFamily};
use crate::oracle::{oracle_colors, oracle_type2};
use crate::queries::{random_queries, random_rect};
use crate::type2::{build_4sided, build_general, build_shallow_cutting, points_of, Type2Params};

/// One timed run, correctness co-checked.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchRecord {
    pub structure: Structure,
    pub params: String,
    pub build_ms: f64,
    pub qps: f64,
    pub correct: bool,
    pub extra: String,
}

impl BenchRecord {
    pub const CSV_HEADER: &'static str = "structure,params,build_ms,qps,extra";

    pub fn csv_row(&self) -> String {
        format!("{},{},{:.3},{:.1},{}", self.structure, self.params, self.build_ms, self.qps, self.extra)
    }
}

/// Why a bench run stopped.
#[derive(Debug)]
pub enum BenchOutcome {
    Done(BenchRecord),
    Mismatch(Counterexample),
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

/// Times `run` over all queries after a warm-up pass over a tenth of them.
fn timed<Q, A>(queries: &[Q], mut run: impl FnMut(&Q) -> Result<A>) -> Result<(Vec<A>, f64)> {
    for q in queries.iter().take(queries.len() / 10) {
        run(q)?;
    }
    let t = Instant::now();
    let answers = queries.iter().map(&mut run).collect::<Result<Vec<A>>>()?;
    let secs = t.elapsed().as_secs_f64().max(1e-9);
    Ok((answers, queries.len() as f64 / secs))
}

fn mismatch(opts: &VerifyOptions, index: usize, q: impl std::fmt::Debug, expected: String, got: String) -> BenchOutcome {
    BenchOutcome::Mismatch(Counterexample { index, query: format!("{q:?}"), expected, got, seed: opts.seed })
}

pub fn bench(ds: &Dataset, structure: Structure, opts: &VerifyOptions) -> Result<BenchOutcome> {
    let mut rng = opts.seed.derive(1).rng();
    let m = ds.m();
    let n = opts.queries;
    let family = opts.family.unwrap_or_else(|| default_family(ds));
    let rects = || -> Vec<Rect> {
        let mut rng = opts.seed.derive(1).rng();
        (0..n).map(|i| random_rect(m, 2 + i % 3, &mut rng)).collect()
    };
    let record = |params: String, build_ms: f64, qps: f64, extra: String| {
        BenchOutcome::Done(BenchRecord { structure, params, build_ms, qps, correct: true, extra })
    };
    Ok(match structure {
        Structure::ExactK1 => {
            let qs = random_queries(ds, RangeFamily::Dominance3, n, &mut rng);
            let t = Instant::now();
            let st = build_exact_k1_dominance(ds, opts.seed.derive(0))?;
            let build = ms(t);
            let (ans, qps) = timed(&qs, |q| match q {
                RangeQuery::Dominance3(c) => Ok(st.query(c)),
                _ => Err(Error::WrongQueryKind),
            })?;
            for (i, (q, a)) in qs.iter().zip(&ans).enumerate() {
                let k = oracle_colors(ds, q)?.len();
                let ok = matches!((a, k), (K1Result::Empty, 0) | (K1Result::Single(..), 1) | (K1Result::Multi, 2..));
                if !ok {
                    return Ok(mismatch(opts, i, q, format!("k={k}"), format!("{a:?}")));
                }
            }
            record(format!("m={m}"), build, qps, String::new())
        }
        Structure::McK1 => {
            let qs = random_queries(ds, family, n, &mut rng);
            let t = Instant::now();
            let st = build_mc_k1(ds, family, opts.cap, opts.seed.derive(0))?;
            let build = ms(t);
            let (ans, qps) = timed(&qs, |q| Ok(st.query(ds, q)))?;
            let mut yes = 0;
            for (i, (q, a)) in qs.iter().zip(&ans).enumerate() {
                if let McAnswer::Yes(c, _) = a {
                    let want = oracle_colors(ds, q)?;
                    if want != [*c] {
                        return Ok(mismatch(opts, i, q, format!("{want:?}"), format!("{a:?}")));
                    }
                    yes += 1;
                }
            }
            let extra = format!("cells={};bad={};yes={yes}", st.num_cells(), st.num_bad_cells());
            record(format!("m={m};family={family};c={}", opts.cap), build, qps, extra)
        }
        Structure::ColorTree => {
            let qs = random_queries(ds, family, n, &mut rng);
            let t = Instant::now();
            let tree = ColorSplitTree::build(ds, opts.mode, family, opts.cap, opts.seed.derive(0))?;
            let build = ms(t);
            let (ans, qps) = timed(&qs, |q| tree.report_colors(ds, q))?;
            let (mut visited, mut k) = (0usize, 0usize);
            for (i, (q, (colors, st))) in qs.iter().zip(&ans).enumerate() {
                let want = oracle_colors(ds, q)?;
                if *colors != want {
                    return Ok(mismatch(opts, i, q, format!("{want:?}"), format!("{colors:?}")));
                }
                visited += st.total_visited;
                k += colors.len();
            }
            let extra = format!("visitedPerK={:.4}", visited as f64 / k.max(1) as f64);
            record(format!("m={m};family={family};mode={}", opts.mode), build, qps, extra)
        }
        Structure::Type2Capped => {
            let tau = opts.tau.unwrap_or_else(|| Type2Params::defaults(ds.n()).tau);
            let qs = rects();
            let t = Instant::now();
            let st = build_4sided(&points_of(ds), tau)?;
            let build = ms(t);
            let (ans, qps) = timed(&qs, |r| Ok(st.query(r.x_lo, r.x_hi, r.y_lo, r.y_hi)))?;
            let mut nulls = 0;
            for (i, (r, a)) in qs.iter().zip(&ans).enumerate() {
                let want = oracle_type2(ds, r)?;
                let ok = match a {
                    Some(h) => *h == want,
                    None => want.len() > tau,
                };
                if !ok {
                    return Ok(mismatch(opts, i, r, want.to_string(), format!("{a:?}")));
                }
                nulls += usize::from(a.is_none());
            }
            record(format!("m={m};tau={tau}"), build, qps, format!("nulls={nulls}"))
        }
        Structure::Type2General => {
            let mut params = Type2Params::defaults(ds.n());
            if let Some(t) = opts.tau {
                params = Type2Params { tau: t, t_no: t, t_yes: params.t_yes.min(t), ..params };
            }
            let qs = rects();
            let t = Instant::now();
            let st = build_general(&points_of(ds), params)?;
            let build = ms(t);
            let (ans, qps) = timed(&qs, |r| st.query_type2(r))?;
            let mut visited = 0;
            for (i, (r, (h, s))) in qs.iter().zip(&ans).enumerate() {
                let want = oracle_type2(ds, r)?;
                if *h != want {
                    return Ok(mismatch(opts, i, r, want.to_string(), h.to_string()));
                }
                visited += s.visited;
            }
            let params_s = format!("m={m};tau={};tyes={};degree={}", params.tau, params.t_yes, params.degree);
            record(params_s, build, qps, format!("meanVisited={:.4}", visited as f64 / n.max(1) as f64))
        }
        Structure::ShallowCutting => {
            let tt = opts.tau.unwrap_or(4);
            let pts = points_of(ds);
            let t = Instant::now();
            let sc = build_shallow_cutting(&pts, tt);
            let build = ms(t);
            let qs = rects();
            let (ans, qps) = timed(&qs, |r| Ok(sc.locate(r.x_hi, r.y_hi)))?;
            for (i, (r, a)) in qs.iter().zip(&ans).enumerate() {
                let (qx, qy) = sc.clamp(r.x_hi, r.y_hi);
                let ok = match a {
                    Some(j) => qx <= sc.corners[*j].0 && qy <= sc.corners[*j].1,
                    None => oracle_type2(ds, &Rect::two_sided(qx, qy))?.len() >= tt,
                };
                if !ok {
                    return Ok(mismatch(opts, i, r, "containing cell".into(), format!("{a:?}")));
                }
            }
            record(format!("m={m};t={tt}"), build, qps, format!("cells={}", sc.len()))
        }
    })
}
