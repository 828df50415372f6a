//! "Exactly one color?" testers: the exact dominance tester and the Monte
//! Carlo tester for all three range families.

use colored_range::cli::single_color_query;
use colored_range::gen::{generate, Family, GenSpec};
use colored_range::k1::{build_exact_k1_dominance, build_mc_k1, yes_rate_experiment, McAnswer, RangeFamily, DEFAULT_CAP};
use colored_range::oracle::oracle_colors;
use colored_range::queries::random_queries;
use colored_range::{Dataset, Seed};

fn main() -> colored_range::Result<()> {
    let ds = Dataset::reduce_to_rank_space(&generate(&GenSpec::new(Family::Uniform3, 2000, 200, Seed(1)))?)?;
    let exact = build_exact_k1_dominance(&ds, Seed(2))?;
    let qs = random_queries(&ds, RangeFamily::Dominance3, 5, &mut Seed(3).rng());
    for q in &qs {
        let colored_range::RangeQuery::Dominance3(c) = q else { unreachable!() };
        println!("corner {c:?}: {:?} (oracle k = {})", exact.query(c), oracle_colors(&ds, q)?.len());
    }

    for (family, gen) in [
        (RangeFamily::Dominance3, Family::Uniform3),
        (RangeFamily::Halfplane2, Family::Uniform2),
        (RangeFamily::Halfspace3, Family::Uniform3),
    ] {
        let ds = Dataset::reduce_to_rank_space(&generate(&GenSpec::new(gen, 1000, 50, Seed(4)))?)?;
        let mc = build_mc_k1(&ds, family, DEFAULT_CAP, Seed(5))?;
        let q = single_color_query(&ds, family, Seed(6))?.expect("a single-color query");
        let ans = mc.query(&ds, &q);
        let rate = yes_rate_experiment(&ds, family, &q, DEFAULT_CAP, 200, Seed(7))?;
        let shown = match ans {
            McAnswer::Yes(c, _) => format!("Yes({c})"),
            McAnswer::No => "No".into(),
        };
        println!(
            "{family}: {} cells, {} bad; one build says {shown}; yes rate over 200 builds {rate:.3}",
            mc.num_cells(),
            mc.num_bad_cells()
        );
    }
    Ok(())
}
