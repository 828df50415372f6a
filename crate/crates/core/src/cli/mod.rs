//! Command-line front end. [`run`] parses arguments, writes CSV to `out`
//! and returns the process exit code: 0 pass, 1 counterexample, 2 usage or
//! I/O error.

mod bench;
mod experiment;
mod verify;

pub use bench::{bench, BenchOutcome, BenchRecord};
pub use experiment::{run_experiment, single_color_query, ExperimentConfig, ExperimentKind};
pub use verify::{default_family, verify, Counterexample, Structure, VerifyOptions, VerifyReport};

use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::colortree::{ColorSplitTree, TesterMode};
use crate::data::io::{load_dataset, read_points, read_queries, write_points, QueryKind};
use crate::data::{Dataset, RangeQuery, Seed};
use crate::error::{Error, Result};
use crate::gen::{generate, Family, GenSpec};
use crate::k1::{k1_experiment, K1Config, K1Row, RangeFamily, DEFAULT_CAP};
use crate::ric::{ric_experiment, InsertionMode, RicConfig, RicFamily, RicRow};
use crate::type2::{build_4sided, build_general, points_of, CappedAnswer, Type2Params};

#[derive(Parser, Debug)]
#[command(name = "colored-range", version, about = "Colored range searching structures and experiments")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug, Clone)]
struct Common {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Omit the leading `# generated-at` comment line.
    #[arg(long)]
    no_timestamp: bool,
}

#[derive(Args, Debug, Clone)]
struct StructureArgs {
    dataset: PathBuf,
    #[arg(long)]
    structure: Structure,
    #[arg(long, default_value_t = 1000)]
    queries: usize,
    #[arg(long)]
    tau: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
    #[arg(long)]
    family: Option<RangeFamily>,
    /// Tester mode; exact for dominance, monteCarlo otherwise.
    #[arg(long)]
    mode: Option<TesterMode>,
    #[command(flatten)]
    common: Common,
}

/// Exact testers exist only for dominance.
fn resolve_mode(mode: Option<TesterMode>, family: RangeFamily) -> TesterMode {
    mode.unwrap_or(if family == RangeFamily::Dominance3 { TesterMode::Exact } else { TesterMode::MonteCarlo })
}

impl StructureArgs {
    fn options(&self, ds: &Dataset) -> VerifyOptions {
        let family = self.family.unwrap_or_else(|| default_family(ds));
        VerifyOptions {
            queries: self.queries,
            seed: Seed(self.common.seed),
            tau: self.tau,
            cap: self.cap,
            family: Some(family),
            mode: resolve_mode(self.mode, family),
            inject_fault: false,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Generate a dataset file.
    Gen {
        #[arg(long, default_value = "uniform3")]
        family: Family,
        #[arg(long, default_value_t = 1000)]
        m: usize,
        #[arg(long, default_value_t = 100)]
        colors: usize,
        #[arg(long, default_value_t = 1)]
        weight_max: u64,
        /// Dimension for zipfColors and clustered.
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output path; stdout if absent.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Check a structure against the brute-force oracle.
    Verify {
        #[command(flatten)]
        args: StructureArgs,
        /// Corrupt one precomputed list first (type2Capped).
        #[arg(long)]
        inject_fault: bool,
    },
    /// Time build and queries; answers are co-checked.
    Bench {
        #[command(flatten)]
        args: StructureArgs,
    },
    /// Report distinct colors for each query in a file.
    Report {
        dataset: PathBuf,
        queries: PathBuf,
        #[arg(long)]
        family: Option<RangeFamily>,
        #[arg(long)]
        mode: Option<TesterMode>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Per-color weight histograms for rectangle queries `a b c d`.
    Type2 {
        dataset: PathBuf,
        queries: PathBuf,
        /// Capped mode: print NULL when the range may exceed tau colors.
        #[arg(long)]
        capped: bool,
        #[arg(long)]
        tau: Option<usize>,
        #[arg(long)]
        tyes: Option<usize>,
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Structural change counts under colored insertion orders.
    RicExp {
        #[arg(long, default_value = "uniform3")]
        family: RicFamily,
        #[arg(long, default_value = "classBatch")]
        mode: InsertionMode,
        #[arg(long, value_delimiter = ',', default_values_t = [1024usize, 2048])]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 5)]
        seeds: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Monte Carlo tester yes rates and conflict sizes.
    K1Exp {
        #[arg(long, default_value = "dominance")]
        family: RangeFamily,
        #[arg(long, value_delimiter = ',', default_values_t = [500usize, 2000])]
        sizes: Vec<usize>,
        /// Colors per dataset; 0 means m/10.
        #[arg(long, default_value_t = 0)]
        colors: usize,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[arg(long, default_value_t = 10)]
        builds: usize,
        #[arg(long, default_value_t = 200)]
        queries: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Named experiment: ric, conflict, yesrate or visits.
    Experiment {
        kind: ExperimentKind,
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        mode: Option<String>,
        #[arg(long, value_delimiter = ',', default_values_t = [500usize, 2000])]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        seeds: u64,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[arg(long, default_value_t = 0)]
        colors: usize,
        #[arg(long, default_value_t = 200)]
        queries: usize,
        #[arg(long, default_value_t = 10)]
        builds: usize,
        #[command(flatten)]
        common: Common,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli.cmd, out, err) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn stamp(out: &mut dyn Write, common: &Common) -> Result<()> {
    if !common.no_timestamp {
        let secs = std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map_or(0, |d| d.as_secs());
        writeln!(out, "# generated-at {secs}")?;
    }
    Ok(())
}

fn load(path: &Path) -> Result<Dataset> {
    load_dataset(path).map(|(_, ds)| ds)
}

fn open(path: &Path) -> Result<BufReader<std::fs::File>> {
    Ok(BufReader::new(std::fs::File::open(path)?))
}

fn dispatch(cmd: Cmd, out: &mut dyn Write, err: &mut dyn Write) -> Result<bool> {
    match cmd {
        Cmd::Gen { family, m, colors, weight_max, dim, seed, out: path } => {
            let spec = GenSpec::new(family, m, colors, Seed(seed)).weights(weight_max).dim(dim);
            let pts = generate(&spec)?;
            match path {
                Some(p) => {
                    let mut f = std::io::BufWriter::new(std::fs::File::create(p)?);
                    write_points(&mut f, spec.effective_dim(), &pts)?;
                    f.flush()?;
                }
                None => write_points(&mut &mut *out, spec.effective_dim(), &pts)?,
            }
            Ok(true)
        }
        Cmd::Verify { args, inject_fault } => {
            let ds = load(&args.dataset)?;
            let opts = VerifyOptions { inject_fault, ..args.options(&ds) };
            let report = verify(&ds, args.structure, &opts)?;
            stamp(out, &args.common)?;
            writeln!(out, "{}", VerifyReport::CSV_HEADER)?;
            writeln!(out, "{}", report.csv_row())?;
            if let Some(cx) = &report.counterexample {
                writeln!(err, "{cx}")?;
            }
            Ok(report.passed())
        }
        Cmd::Bench { args } => {
            let ds = load(&args.dataset)?;
            stamp(out, &args.common)?;
            match bench(&ds, args.structure, &args.options(&ds))? {
                BenchOutcome::Done(r) => {
                    writeln!(out, "{}", BenchRecord::CSV_HEADER)?;
                    writeln!(out, "{}", r.csv_row())?;
                    Ok(true)
                }
                BenchOutcome::Mismatch(cx) => {
                    writeln!(err, "{cx}")?;
                    Ok(false)
                }
            }
        }
        Cmd::Report { dataset, queries, family, mode, cap, common } => {
            let ds = load(&dataset)?;
            let family = family.unwrap_or_else(|| default_family(&ds));
            let kind = match family {
                RangeFamily::Dominance3 => QueryKind::Dominance,
                RangeFamily::Halfplane2 => QueryKind::Halfplane,
                RangeFamily::Halfspace3 => QueryKind::Halfspace,
            };
            let qs = read_queries(open(&queries)?, kind)?;
            let tree = ColorSplitTree::build(&ds, resolve_mode(mode, family), family, cap, Seed(common.seed))?;
            stamp(out, &common)?;
            writeln!(out, "query,k,colors,totalVisited,badVisited")?;
            for (i, q) in qs.iter().enumerate() {
                // Half-plane and half-space queries stay in original coordinates.
                let q = match q {
                    RangeQuery::Dominance3(_) => ds.map_query(q)?,
                    _ => *q,
                };
                let (colors, st) = tree.report_colors(&ds, &q)?;
                let list: Vec<String> = colors.iter().map(|c| c.to_string()).collect();
                writeln!(out, "{i},{},{},{},{}", colors.len(), list.join(";"), st.total_visited, st.bad_nodes_visited)?;
            }
            Ok(true)
        }
        Cmd::Type2 { dataset, queries, capped, tau, tyes, degree } => {
            let text = std::fs::read_to_string(&dataset)?;
            let (dim, raw) = read_points(text.as_bytes())?;
            if dim != 2 {
                return Err(Error::DimensionMismatch { expected: 2, found: dim });
            }
            require_weights(&text, dim)?;
            let ds = Dataset::reduce_to_rank_space(&raw)?;
            let qs = read_queries(open(&queries)?, QueryKind::Rect)?;
            let mut params = Type2Params::defaults(ds.n());
            if let Some(t) = tau {
                params.tau = t;
                params.t_no = t;
                params.t_yes = params.t_yes.min(t);
            }
            if let Some(t) = tyes {
                params.t_yes = t;
            }
            if let Some(d) = degree {
                params.degree = d;
            }
            let rects = qs
                .iter()
                .map(|q| match ds.map_query(q)? {
                    RangeQuery::Rect2(r) => Ok(r),
                    _ => Err(Error::WrongQueryKind),
                })
                .collect::<Result<Vec<_>>>()?;
            if capped {
                let st = build_4sided(&points_of(&ds), params.tau)?;
                for r in rects {
                    writeln!(out, "{}", CappedAnswer::from(st.query(r.x_lo, r.x_hi, r.y_lo, r.y_hi)))?;
                }
            } else {
                let st = build_general(&points_of(&ds), params)?;
                for r in rects {
                    writeln!(out, "{}", st.query_type2(&r)?.0)?;
                }
            }
            Ok(true)
        }
        Cmd::RicExp { family, mode, sizes, seeds, common } => {
            let rows = ric_experiment(&RicConfig::new(family, mode, sizes, seeds, Seed(common.seed)))?;
            stamp(out, &common)?;
            writeln!(out, "{}", RicRow::CSV_HEADER)?;
            for r in &rows {
                r.write_csv(&mut &mut *out)?;
            }
            Ok(true)
        }
        Cmd::K1Exp { family, sizes, colors, cap, builds, queries, common } => {
            let rows = k1_experiment(&K1Config { family, sizes, colors, cap, builds, queries, seed: Seed(common.seed) })?;
            stamp(out, &common)?;
            K1Row::write_csv(&rows, &mut *out)?;
            Ok(rows.iter().all(|r| r.unsound_yes == 0))
        }
        Cmd::Experiment { kind, family, mode, sizes, seeds, cap, colors, queries, builds, common } => {
            let base = ExperimentConfig::new(kind);
            let cfg = ExperimentConfig {
                family: family.unwrap_or(base.family),
                mode: mode.unwrap_or(base.mode),
                sizes,
                seeds,
                seed: Seed(common.seed),
                cap,
                colors,
                queries,
                builds,
                kind,
            };
            let mut buf = Vec::new();
            run_experiment(&cfg, &mut buf)?;
            stamp(out, &common)?;
            out.write_all(&buf)?;
            Ok(true)
        }
    }
}

/// Type-2 input must carry explicit weights on every point line.
fn require_weights(text: &str, dim: usize) -> Result<()> {
    let body = text.lines().enumerate().filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('#')
    });
    for (i, line) in body.skip(1) {
        if line.split_whitespace().count() != dim + 2 {
            return Err(Error::Parse { line: i + 1, msg: "weight column required".into() });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("colored-range").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    fn tmp(name: &str, body: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("colored-range-cli-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let p = dir.join(name);
        std::fs::write(&p, body).unwrap();
        p
    }

    #[test]
    fn gen_is_deterministic() {
        let a = call(&["gen", "--family", "uniform3", "--m", "100", "--colors", "10", "--seed", "4"]);
        let b = call(&["gen", "--family", "uniform3", "--m", "100", "--colors", "10", "--seed", "4"]);
        assert_eq!(a.0, 0);
        assert_eq!(a.1, b.1);
        assert_eq!(a.1.lines().count(), 101);
        let colors: std::collections::BTreeSet<&str> =
            a.1.lines().skip(1).map(|l| l.split_whitespace().nth(3).unwrap()).collect();
        assert_eq!(colors.len(), 10);
        let r = call(&["gen", "--family", "remark1", "--m", "64"]);
        let colors: std::collections::BTreeSet<&str> =
            r.1.lines().skip(1).map(|l| l.split_whitespace().nth(3).unwrap()).collect();
        assert_eq!(colors.len(), 33);
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(call(&["frobnicate"]).0, 2);
        assert_eq!(call(&["verify", "/nonexistent/file", "--structure", "exactK1"]).0, 2);
        assert_eq!(call(&["experiment", "nope"]).0, 2);
    }

    #[test]
    fn verify_pass_and_fault() {
        let (_, data, _) = call(&["gen", "--family", "uniform2", "--m", "200", "--colors", "12", "--weight-max", "3"]);
        let p = tmp("v.txt", &data);
        let ps = p.to_str().unwrap();
        let ok = call(&["verify", ps, "--structure", "type2Capped", "--tau", "4", "--queries", "100", "--no-timestamp"]);
        assert_eq!(ok.0, 0, "{}", ok.2);
        assert_eq!(ok.1, "structure,m,checked,seed,status\n".to_string() + &ok.1.lines().nth(1).unwrap() + "\n");
        assert!(ok.1.ends_with(",pass\n"));
        let bad = call(&[
            "verify", ps, "--structure", "type2Capped", "--tau", "4", "--queries", "100", "--inject-fault", "--no-timestamp",
        ]);
        assert_eq!(bad.0, 1);
        assert!(bad.2.starts_with("counterexample #"));
        let stamped = call(&["verify", ps, "--structure", "type2General", "--queries", "50"]);
        assert!(stamped.1.starts_with("# generated-at "));
    }

    #[test]
    fn bench_header() {
        let (_, data, _) = call(&["gen", "--family", "uniform3", "--m", "300", "--colors", "30"]);
        let p = tmp("b.txt", &data);
        let r = call(&["bench", p.to_str().unwrap(), "--structure", "colorTree", "--queries", "100", "--no-timestamp"]);
        assert_eq!(r.0, 0, "{}", r.2);
        let mut lines = r.1.lines();
        assert_eq!(lines.next(), Some("structure,params,build_ms,qps,extra"));
        assert!(lines.next().unwrap().contains("visitedPerK="));
    }

    #[test]
    fn type2_and_report_files() {
        let data = tmp("t.txt", "2 3\n1 1 0 2\n2 2 0 3\n3 1 1 4\n");
        let qs = tmp("tq.txt", "0 2 0 2\n-inf inf -inf inf\n2 3 1 1\n");
        let r = call(&["type2", data.to_str().unwrap(), qs.to_str().unwrap()]);
        assert_eq!(r, (0, "0:5\n0:5 1:4\n1:4\n".into(), String::new()));
        // Small inputs are scanned, so capped answers stay exact.
        let r = call(&["type2", data.to_str().unwrap(), qs.to_str().unwrap(), "--capped", "--tau", "1"]);
        assert_eq!(r.1, "0:5\n0:5 1:4\n1:4\n");
        let many: String = (1..=200).map(|i| format!("{i} {i} {i} 1\n")).collect();
        let big = tmp("big.txt", &format!("2 200\n{many}"));
        let r = call(&["type2", big.to_str().unwrap(), qs.to_str().unwrap(), "--capped", "--tau", "2"]);
        assert_eq!(r.1.lines().nth(1), Some("NULL"));
        let unweighted = tmp("u.txt", "2 1\n1 1 0\n");
        assert_eq!(call(&["type2", unweighted.to_str().unwrap(), qs.to_str().unwrap()]).0, 2);

        let d3 = tmp("r.txt", "3 3\n1 1 1 0\n2 2 2 1\n3 3 3 0\n");
        let q3 = tmp("rq.txt", "1 1 1\n2 2 2\n0 0 0\n");
        let r = call(&["report", d3.to_str().unwrap(), q3.to_str().unwrap(), "--no-timestamp"]);
        assert_eq!(r.0, 0, "{}", r.2);
        let rows: Vec<&str> = r.1.lines().collect();
        assert_eq!(rows[0], "query,k,colors,totalVisited,badVisited");
        assert!(rows[1].starts_with("0,1,0,"));
        assert!(rows[2].starts_with("1,2,0;1,"));
        assert!(rows[3].starts_with("2,0,,"));

        let d2 = tmp("h.txt", "2 3\n0 0 0\n1 5 1\n2 1 2\n");
        let q2 = tmp("hq.txt", "0 1\n1/2 0\n");
        let r = call(&["report", d2.to_str().unwrap(), q2.to_str().unwrap(), "--family", "halfplane", "--no-timestamp"]);
        assert_eq!(r.0, 0, "{}", r.2);
        let rows: Vec<&str> = r.1.lines().collect();
        assert!(rows[1].starts_with("0,2,0;2,"), "{}", r.1);
        assert!(rows[2].starts_with("1,2,0;2,"), "{}", r.1);
    }

    #[test]
    fn experiment_csv_is_byte_identical() {
        let args = ["experiment", "visits", "--sizes", "128", "--seeds", "2", "--queries", "30", "--no-timestamp"];
        let (a, b) = (call(&args), call(&args));
        assert_eq!(a.0, 0, "{}", a.2);
        assert_eq!(a.1, b.1);
        let ric = call(&["ric-exp", "--sizes", "64", "--seeds", "2", "--no-timestamp"]);
        assert!(ric.1.starts_with("family,mode,levels,n,seed,totalCreated,totalDestroyed\n"));
        let k1 = call(&["k1-exp", "--sizes", "100", "--builds", "2", "--queries", "20", "--no-timestamp"]);
        assert!(k1.1.starts_with("family,m,colors,c,seed,yesRate,meanConflictSize,badCellFraction\n"));
    }
}
