//! Reporting distinct colors with the random color-splitting tree, in exact
//! and Monte Carlo tester modes, with per-level visit profiles.

use colored_range::colortree::{node_visit_profile, ColorSplitTree, TesterMode};
use colored_range::gen::{generate, Family, GenSpec};
use colored_range::k1::{RangeFamily, DEFAULT_CAP};
use colored_range::queries::dominance_query_with_k;
use colored_range::{Dataset, Seed};

fn main() -> colored_range::Result<()> {
    let ds = Dataset::reduce_to_rank_space(&generate(&GenSpec::new(Family::Uniform3, 4096, 256, Seed(1)))?)?;
    let mut rng = Seed(2).rng();
    for mode in [TesterMode::Exact, TesterMode::MonteCarlo] {
        let tree = ColorSplitTree::build(&ds, mode, RangeFamily::Dominance3, DEFAULT_CAP, Seed(3))?;
        println!("{mode}: {} nodes, depth {}", tree.num_nodes(), tree.depth());
        for k in [1usize, 4, 16, 64] {
            let qs: Vec<_> = (0..50).filter_map(|_| dominance_query_with_k(&ds, k, &mut rng)).collect();
            let p = node_visit_profile(&tree, &ds, &qs)?;
            println!("  k={k:>2}: visited/k {:.2}, bad/non-bad {:.3}", p.visited_per_k(), p.bad_per_non_bad());
        }
        let q = dominance_query_with_k(&ds, 5, &mut rng).expect("k=5 corner");
        let (colors, stats) = tree.report_colors(&ds, &q)?;
        println!("  {q:?} -> {colors:?}, per level {:?}", stats.visited_per_level);
    }
    Ok(())
}
