//! Similarity dimensions from the Moran equation Σ rᵢˢ = 1.

use erlab::ifs::{moran_dimension, IFSystem};

fn main() {
    let cases: &[(&str, Vec<f64>)] = &[
        ("Sierpinski gasket", IFSystem::sierpinski().ratios()),
        ("middle-thirds Cantor set", vec![1.0 / 3.0, 1.0 / 3.0]),
        ("Koch curve", vec![1.0 / 3.0; 4]),
        ("uneven pair", vec![0.5, 0.25]),
    ];
    for (name, ratios) in cases {
        let s = moran_dimension(ratios).unwrap();
        println!("{name:26} ratios {ratios:?} -> dimension {s:.6}");
    }
    println!(
        "\ngasket closed form log3/log2 = {:.6}",
        3f64.ln() / 2f64.ln()
    );
}
