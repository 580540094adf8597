//! Samples the gasket attractor by the chaos game and box-counts the cloud.

use erlab::ifs::{box_counting_dimension, IFSystem};
use erlab::stoch::RngSpec;

fn main() {
    let ifs = IFSystem::sierpinski();
    let points = ifs.chaos_game(100_000, &mut RngSpec::new(1).rng());
    let scales: Vec<f64> = (3..=8).map(|k| 0.5f64.powi(k)).collect();
    let result = box_counting_dimension(&points, &scales).unwrap();
    println!("scale      boxes");
    for (d, c) in result.scales.iter().zip(&result.counts) {
        println!("{d:<10.6} {c}");
    }
    println!(
        "\nslope {:.4} (r2 {:.4}), target log3/log2 = {:.4}",
        result.dimension(),
        result.fit.r2,
        3f64.ln() / 2f64.ln()
    );
}
