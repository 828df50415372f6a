//! Text formats: datasets (`dim m` header, then `x y [z] color [weight]`)
//! and query files (one query per line).

use std::io::{BufRead, Write};
use std::path::Path;

use num_rational::Ratio;

use super::query::{Halfplane, Halfspace, RangeQuery, Rect, NEG_INF, POS_INF};
use super::{Dataset, RawPoint};
use crate::error::{Error, Result};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn content_lines<R: BufRead>(r: R) -> impl Iterator<Item = (usize, std::io::Result<String>)> {
    r.lines().enumerate().map(|(i, l)| (i + 1, l)).filter(|(_, l)| match l {
        Ok(s) => {
            let t = s.trim();
            !t.is_empty() && !t.starts_with('#')
        }
        Err(_) => true,
    })
}

/// Reads raw points. The weight column is optional per line.
pub fn read_points<R: BufRead>(r: R) -> Result<(usize, Vec<RawPoint>)> {
    let mut lines = content_lines(r);
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let header = header?;
    let hv: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| parse_err(hl, format!("bad header token {t:?}"))))
        .collect::<Result<_>>()?;
    let [dim, m] = hv[..] else { return Err(parse_err(hl, "header must be `dim m_points`")) };
    if dim != 2 && dim != 3 {
        return Err(Error::UnsupportedDimension(dim));
    }
    let mut pts = Vec::with_capacity(m);
    for (ln, line) in lines {
        let line = line?;
        let v: Vec<i64> = line
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| parse_err(ln, format!("bad integer {t:?}"))))
            .collect::<Result<_>>()?;
        if v.len() != dim + 1 && v.len() != dim + 2 {
            return Err(parse_err(ln, format!("expected {} or {} fields", dim + 1, dim + 2)));
        }
        let color = u32::try_from(v[dim]).map_err(|_| parse_err(ln, "bad color"))?;
        let weight = v.get(dim + 1).copied().unwrap_or(1);
        pts.push(RawPoint::weighted(&v[..dim], color, weight));
    }
    if pts.len() != m {
        return Err(parse_err(0, format!("header declares {m} points, found {}", pts.len())));
    }
    Ok((dim, pts))
}

/// Writes raw points with an explicit weight column.
pub fn write_points<W: Write>(w: &mut W, dim: usize, pts: &[RawPoint]) -> Result<()> {
    writeln!(w, "{dim} {}", pts.len())?;
    for p in pts {
        for c in &p.coords {
            write!(w, "{c} ")?;
        }
        writeln!(w, "{} {}", p.color, p.weight)?;
    }
    Ok(())
}

pub fn load_dataset(path: &Path) -> Result<(Vec<RawPoint>, Dataset)> {
    let f = std::fs::File::open(path)?;
    let (_, pts) = read_points(std::io::BufReader::new(f))?;
    let ds = Dataset::reduce_to_rank_space(&pts)?;
    Ok((pts, ds))
}

fn parse_bound(tok: &str, ln: usize, low: bool) -> Result<i64> {
    match tok {
        "-inf" => Ok(NEG_INF),
        "inf" | "+inf" => Ok(POS_INF),
        _ => {
            let v: i64 = tok.parse().map_err(|_| parse_err(ln, format!("bad bound {tok:?}")))?;
            Ok(if low && v == 0 { NEG_INF } else { v })
        }
    }
}

fn parse_ratio(tok: &str, ln: usize) -> Result<Ratio<i64>> {
    tok.parse().map_err(|_| parse_err(ln, format!("bad rational {tok:?}")))
}

/// Parses one query line in original coordinates.
///
/// * `dominance`: `q1 q2 q3`
/// * `halfplane`: `alpha beta` (rationals such as `-3/2`)
/// * `halfspace`: `alpha beta gamma`
/// * `rect`: `a b c d` for `[a,b] x [c,d]`; `-inf`, `inf`, and a lower bound
///   of `0` denote open sides.
pub fn parse_query(kind: QueryKind, line: &str, ln: usize) -> Result<RangeQuery> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    let want = match kind {
        QueryKind::Dominance => 3,
        QueryKind::Halfplane => 2,
        QueryKind::Halfspace => 3,
        QueryKind::Rect => 4,
    };
    if toks.len() != want {
        return Err(parse_err(ln, format!("expected {want} fields")));
    }
    Ok(match kind {
        QueryKind::Dominance => {
            let mut c = [0i64; 3];
            for (i, t) in toks.iter().enumerate() {
                c[i] = t.parse().map_err(|_| parse_err(ln, format!("bad integer {t:?}")))?;
            }
            RangeQuery::Dominance3(c)
        }
        QueryKind::Halfplane => RangeQuery::Halfplane2(Halfplane::from_ratios(
            parse_ratio(toks[0], ln)?,
            parse_ratio(toks[1], ln)?,
        )?),
        QueryKind::Halfspace => RangeQuery::Halfspace3(Halfspace::from_ratios(
            parse_ratio(toks[0], ln)?,
            parse_ratio(toks[1], ln)?,
            parse_ratio(toks[2], ln)?,
        )?),
        QueryKind::Rect => RangeQuery::Rect2(Rect::new(
            parse_bound(toks[0], ln, true)?,
            parse_bound(toks[1], ln, false)?,
            parse_bound(toks[2], ln, true)?,
            parse_bound(toks[3], ln, false)?,
        )?),
    })
}

/// Query line syntax selector for [`parse_query`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QueryKind {
    Dominance,
    Halfplane,
    Halfspace,
    Rect,
}

pub fn read_queries<R: BufRead>(r: R, kind: QueryKind) -> Result<Vec<RangeQuery>> {
    content_lines(r).map(|(ln, l)| parse_query(kind, &l?, ln)).collect()
}
