//! The Hölder-product counterexample: the upper bound 2/α on the walk
//! dimension can be strict.
//!
//! On R² with d((x₁,x₂),(y₁,y₂)) = |x₁−y₁|^α + |x₂−y₂| the degenerate
//! diffusion (0, W_t) lives on an isometric copy of the line, so its walk
//! dimension is 2 even though the Hölder machinery only caps it by 2/α.

use erlab::report::{emit_report, run_experiment, ExperimentConfig, HolderConfig, ReportFormat};

fn main() {
    let cfg = HolderConfig {
        alpha: 0.5,
        ..Default::default()
    };
    let out = run_experiment(&ExperimentConfig::HolderCounterexample(cfg)).unwrap();
    print!("{}", emit_report(&out.report, ReportFormat::Text));
}
