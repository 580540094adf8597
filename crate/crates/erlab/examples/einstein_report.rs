//! Full Einstein-relation report on the Sierpinski gasket: Hausdorff
//! dimension from the Moran equation, spectral dimension from the Dirichlet
//! spectrum, walk dimension from exact crossing times, and the constant c
//! tying them together.

use erlab::report::{emit_report, run_experiment, ExperimentConfig, ReportFormat};

fn main() {
    let cfg = ExperimentConfig::by_name("sierpinski").unwrap();
    let out = run_experiment(&cfg).unwrap();
    print!("{}", emit_report(&out.report, ReportFormat::Text));
    println!(
        "closed-form targets: dim_h = {:.6}, dim_s = {:.6}, dim_w = {:.6}",
        3f64.ln() / 2f64.ln(),
        3f64.ln() / 5f64.ln(),
        5f64.ln() / 2f64.ln()
    );
}
