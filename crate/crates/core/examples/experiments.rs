//! The experiment drivers and oracle verification behind the CLI, driven
//! from code. Prints CSV.

use colored_range::cli::{run_experiment, verify, ExperimentConfig, ExperimentKind, Structure, VerifyOptions};
use colored_range::gen::{generate, Family, GenSpec};
use colored_range::{Dataset, Seed};

fn main() -> colored_range::Result<()> {
    let mut out = std::io::stdout().lock();
    for kind in [ExperimentKind::Ric, ExperimentKind::Conflict, ExperimentKind::YesRate, ExperimentKind::Visits] {
        let cfg = ExperimentConfig { sizes: vec![256, 1024], seeds: 2, builds: 20, ..ExperimentConfig::new(kind) };
        println!("## {kind}");
        run_experiment(&cfg, &mut out)?;
    }

    let ds = Dataset::reduce_to_rank_space(&generate(&GenSpec::new(Family::Uniform2, 500, 40, Seed(1)).weights(5))?)?;
    println!("## verify");
    for s in [Structure::McK1, Structure::ColorTree, Structure::Type2Capped, Structure::Type2General, Structure::ShallowCutting] {
        let mode = colored_range::colortree::TesterMode::MonteCarlo;
        let r = verify(&ds, s, &VerifyOptions { queries: 500, tau: Some(8), mode, ..Default::default() })?;
        println!("{}", r.csv_row());
    }
    Ok(())
}
