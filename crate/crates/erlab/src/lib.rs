//! A numerical laboratory for fractal dimensions on metric measure spaces.
//!
//! The crate estimates three dimensions on concrete spaces — Hausdorff
//! (`ifs`), spectral (`energy`), and walk (`stoch`, `dims`) — and checks the
//! Einstein relation `dim_H = c · dim_S · dim_W` tying them together
//! (`report`). Supported spaces include the Sierpinski gasket, Euclidean
//! domains, the arctan-metric line, and graphs of fractional Brownian motion
//! (`spaces`, `sg`).
//!
//! Start from [`report::run_experiment`] or the `erlab` binary; the
//! `examples/` directory exercises each capability in isolation.

pub mod dims;
pub mod energy;
pub mod error;
pub mod fit;
pub mod ifs;
pub mod report;
pub mod sg;
pub mod spaces;
pub mod stats;
pub mod stoch;

pub use error::{Error, Result};
