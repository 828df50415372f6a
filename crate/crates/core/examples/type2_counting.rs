//! Weighted per-color counting: capped grid and 4-sided structures, the
//! many-colors estimator and the exact general structure.

use colored_range::gen::{generate, Family, GenSpec};
use colored_range::oracle::oracle_type2;
use colored_range::queries::random_rect;
use colored_range::type2::{
    build_4sided, build_estimator, build_general, build_grid, points_of, CappedAnswer, Type2Params,
    DEFAULT_DEPTH_BUDGET,
};
use colored_range::{Dataset, Seed};

fn main() -> colored_range::Result<()> {
    let spec = GenSpec::new(Family::Uniform2, 3000, 300, Seed(1)).weights(10);
    let ds = Dataset::reduce_to_rank_space(&generate(&spec)?)?;
    let pts = points_of(&ds);
    let params = Type2Params::defaults(ds.n());
    println!("n = {}, defaults {params:?}", ds.n());

    let tau = 6;
    let grid = build_grid(&pts, tau, DEFAULT_DEPTH_BUDGET)?;
    if let Some(level) = grid.top_level() {
        println!("top grid: {} columns, {} rows", level.col_hi.len(), level.row_hi.len());
    }
    let capped = build_4sided(&pts, tau)?;
    let general = build_general(&pts, params)?;
    let est = build_estimator(&pts, 4, 4, 64)?;
    let mut rng = Seed(2).rng();
    for sides in [2, 3, 4] {
        let r = random_rect(ds.m(), sides, &mut rng);
        let truth = oracle_type2(&ds, &r)?;
        let ans = CappedAnswer::from(capped.query(r.x_lo, r.x_hi, r.y_lo, r.y_hi));
        let (exact, stats) = general.query_type2(&r)?;
        let e = est.estimate_many_colors(r.x_lo, r.x_hi, r.y_lo, r.y_hi);
        println!("{sides}-sided, k = {}:", truth.len());
        println!("  capped (tau {tau}): {}", if ans.is_null() { "NULL".to_string() } else { format!("{} colors", truth.len()) });
        println!("  estimator: yes = {} from set counts {:?}", e.yes, e.counts);
        println!("  general: exact = {}, {stats:?}", exact == truth);
    }
    Ok(())
}
