//! Colored shallow cuttings: the staircase of origin-cornered cells.

use colored_range::data::Color;
use colored_range::gen::{generate, Family, GenSpec};
use colored_range::type2::{build_shallow_cutting, points_of, WPoint};
use colored_range::{Dataset, Seed};

fn main() -> colored_range::Result<()> {
    let diag: Vec<WPoint> =
        (1..=4).map(|i| WPoint { x: i, y: 5 - i, color: Color(i as u32), weight: 1 }).collect();
    let sc = build_shallow_cutting(&diag, 2);
    println!("anti-diagonal, t=2: corners {:?}", sc.corners);
    println!("clists {:?}", sc.clists);
    println!("locate (3,1) -> {:?}, (3,5) -> {:?}", sc.locate(3, 1), sc.locate(3, 5));

    let ds = Dataset::reduce_to_rank_space(&generate(&GenSpec::new(Family::Uniform2, 2000, 100, Seed(1)))?)?;
    let pts = points_of(&ds);
    for t in [1, 2, 4, 8, 16] {
        let sc = build_shallow_cutting(&pts, t);
        let widest = sc.clists.iter().map(Vec::len).max().unwrap_or(0);
        println!("t={t:>2}: {:>4} cells (bound {}), widest clist {widest}", sc.len(), 4 * pts.len() / t + 1);
    }
    Ok(())
}
