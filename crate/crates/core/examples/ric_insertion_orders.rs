//! Structural changes of the incremental 3D hull under colored insertion
//! orders: batches of whole classes versus one point at a time, on uniform
//! points and on the adversarial instance.

use colored_range::ric::{ric_experiment, InsertionMode, RicConfig, RicFamily};
use colored_range::Seed;

fn main() -> colored_range::Result<()> {
    println!("family,mode,n,meanCreated,perN,perNLnN");
    for family in [RicFamily::Uniform3, RicFamily::Remark1, RicFamily::Lines] {
        for mode in [InsertionMode::ClassBatch, InsertionMode::WithinClass] {
            for n in [256usize, 1024] {
                let rows = ric_experiment(&RicConfig::new(family, mode, vec![n], 4, Seed(7)))?;
                let mean = rows.iter().map(|r| r.total_created as f64).sum::<f64>() / rows.len() as f64;
                let nf = n as f64;
                println!("{family},{mode},{n},{mean:.1},{:.3},{:.3}", mean / nf, mean / (nf * nf.ln()));
            }
        }
    }
    Ok(())
}
