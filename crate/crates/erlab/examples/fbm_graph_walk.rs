//! Crossing-time curves on graphs of fractional Brownian motion: the sup-ball
//! exit products scale like r^{2/H}, each leg like r^{1/H}.
//!
//! Uses lighter sampling than the acceptance suite; expect ~±0.1 scatter.

use erlab::dims::{fbm_default_radii, fbm_graph_walk_curve, walk_dimension, FbmWalkParams};
use erlab::fit::log_log_fit;
use erlab::stoch::RngSpec;

fn main() {
    let params = FbmWalkParams {
        steps_per_crossing: 100,
        n_paths: 100,
        anchors_per_path: 10,
    };
    for &h in &[0.3, 0.5, 0.7] {
        let radii = fbm_default_radii(h);
        let curves = fbm_graph_walk_curve(h, &radii, params, RngSpec::new(11)).unwrap();
        let slope = walk_dimension(&curves.product).unwrap().value;
        let plus = log_log_fit(&curves.plus.radii, &curves.plus.means).unwrap().slope;
        let minus = log_log_fit(&curves.minus.radii, &curves.minus.means)
            .unwrap()
            .slope;
        println!(
            "H = {h}: product slope {slope:.3} (target 2/H = {:.3}), legs {plus:.3}/{minus:.3} (target 1/H = {:.3})",
            2.0 / h,
            1.0 / h
        );
    }
}
