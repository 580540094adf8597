//! Brownian exit times from Euclidean balls and the walk dimension 2.

use erlab::dims::{bm_exit_curve, walk_dimension};
use erlab::spaces::{Point, SpaceDescriptor};
use erlab::stoch::RngSpec;

fn main() {
    let radii = [0.4, 0.2, 0.1, 0.05];
    for (dim, start, norm) in [
        (1usize, Point::one(0.0), 1.0),
        (2, Point::two(0.0, 0.0), 2.0),
    ] {
        let space = SpaceDescriptor::Euclidean { dim };
        let curve = bm_exit_curve(&space, &start, &radii, 2000, RngSpec::new(7)).unwrap();
        println!("R^{dim} (closed form E[tau] = r^2/{norm}):");
        for ((r, m), se) in curve.radii.iter().zip(&curve.means).zip(&curve.stderrs) {
            println!(
                "  r = {r:.3}  E[tau] = {m:.6} +/- {se:.6}  target {:.6}",
                r * r / norm
            );
        }
        let fit = walk_dimension(&curve).unwrap();
        println!("  walk dimension {:.4} (r2 {:.4})\n", fit.value, fit.fit.r2);
    }
}
