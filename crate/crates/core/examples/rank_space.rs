//! Rank reduction, query mapping and the brute-force oracle.

use colored_range::data::{Halfplane, RangeQuery, RawPoint, Rect, NEG_INF};
use colored_range::oracle::{oracle_answer, oracle_type2};
use colored_range::Dataset;

fn main() -> colored_range::Result<()> {
    let raw = vec![
        RawPoint::weighted(&[10, 40], 0, 2),
        RawPoint::weighted(&[-5, 7], 1, 1),
        RawPoint::weighted(&[10, 40], 2, 5),
        RawPoint::weighted(&[33, -1], 0, 3),
    ];
    let ds = Dataset::reduce_to_rank_space(&raw)?;
    for p in ds.points() {
        println!("orig {:?} -> rank {:?} color {} weight {}", &p.orig[..2], &p.rank[..2], p.color, p.weight);
    }

    let q = RangeQuery::Rect2(Rect::new(NEG_INF, 10, 0, 50)?);
    let RangeQuery::Rect2(r) = ds.map_query(&q)? else { unreachable!() };
    println!("[-inf,10] x [0,50] in ranks: [{},{}] x [{},{}]", r.x_lo, r.x_hi, r.y_lo, r.y_hi);
    println!("histogram: {}", oracle_type2(&ds, &r)?);

    let below = RangeQuery::Halfplane2(Halfplane::from_integers(1, 0));
    let ans = oracle_answer(&ds, &below)?;
    println!("y <= x holds k = {} colors: {:?}", ans.k, ans.colors);
    Ok(())
}
