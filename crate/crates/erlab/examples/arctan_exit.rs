//! Exit times on the real line with the bounded metric |arctan x − arctan y|.
//!
//! Balls around the origin pull back to (−tan r, tan r), so the exit means
//! follow tan(r)² while the local walk dimension stays 2.

use erlab::dims::{bm_exit_curve, walk_dimension};
use erlab::spaces::{Point, SpaceDescriptor};
use erlab::stoch::RngSpec;

fn main() {
    let space = SpaceDescriptor::ArctanLine;
    let radii = [0.2, 0.1, 0.05, 0.025];
    let curve = bm_exit_curve(&space, &Point::one(0.0), &radii, 2000, RngSpec::new(9)).unwrap();
    for ((r, m), se) in curve.radii.iter().zip(&curve.means).zip(&curve.stderrs) {
        println!(
            "r = {r:.3}  E[tau] = {m:.6} +/- {se:.6}  tan(r)^2 = {:.6}",
            r.tan() * r.tan()
        );
    }
    let fit = walk_dimension(&curve).unwrap();
    println!("\nwalk dimension {:.4} (target 2)", fit.value);
}
