//! Dirichlet spectrum of the gasket Laplacian and the spectral-dimension fit.

use erlab::energy::{sg_dirichlet_spectrum, spectral_dimension_fit};
use erlab::report::SPECTRAL_FIT_WINDOW;

fn main() {
    for level in 3..=6 {
        let spectrum = sg_dirichlet_spectrum(level).unwrap();
        let fit = spectral_dimension_fit(&spectrum, SPECTRAL_FIT_WINDOW).unwrap();
        println!(
            "level {level}: {:4} eigenvalues, lambda_1 = {:10.4}, counting slope {:.4} (r2 {:.4})",
            spectrum.eigenvalues.len(),
            spectrum.eigenvalues[0],
            fit.slope,
            fit.r2
        );
    }
    println!("\ntarget slope log3/log5 = {:.4}", 3f64.ln() / 5f64.ln());
}
