//! Exact renormalized crossing times of the gasket walk and the walk
//! dimension they imply.

use erlab::fit::log_log_fit;
use erlab::stoch::srw::{exact_crossing_mean, sg_walk_curve};

fn main() {
    println!("expected steps between V_m visits on G_n (exact solves):");
    for (n, m) in [(1, 0), (2, 0), (2, 1), (3, 1), (4, 2)] {
        println!(
            "  n = {n}, m = {m}: {:10.4}  (5^(n-m) = {})",
            exact_crossing_mean(n, m).unwrap(),
            5u32.pow((n - m) as u32)
        );
    }
    let (radii, times) = sg_walk_curve(7, 1..=5).unwrap();
    println!("\nrenormalized curve at fine level 7:");
    for (r, t) in radii.iter().zip(&times) {
        println!("  r = {r:.6}  E[tau] = {t:.6e}");
    }
    let fit = log_log_fit(&radii, &times).unwrap();
    println!(
        "\nslope {:.4}, target log5/log2 = {:.4}",
        fit.slope,
        5f64.ln() / 2f64.ln()
    );
}
