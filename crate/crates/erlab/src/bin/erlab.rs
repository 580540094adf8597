use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use erlab::dims::{bm_exit_curve, walk_dimension};
use erlab::energy::{sg_dirichlet_spectrum, spectral_dimension_fit};
use erlab::fit::log_log_fit;
use erlab::ifs::moran_dimension;
use erlab::report::{
    emit_report, parse_config, run_experiment, write_artifacts, ExperimentConfig, ReportFormat,
    SPECTRAL_FIT_WINDOW,
};
use erlab::spaces::{Point, SpaceDescriptor};
use erlab::stoch::srw::sg_walk_curve;
use erlab::stoch::RngSpec;

/// Numerical laboratory for the Einstein relation dim_H = c · dim_S · dim_W.
#[derive(Parser)]
#[command(name = "erlab", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// JSON experiment config; overrides the built-in defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// RNG seed override.
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for artifact files (report.json, *.csv).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format: json, csv or text.
    #[arg(long, default_value = "text")]
    format: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// Similarity dimension of an IFS from its contraction ratios.
    Moran {
        /// Comma-separated contraction ratios in (0,1).
        #[arg(long, value_delimiter = ',', required = true)]
        ratios: Vec<f64>,
    },
    /// Dirichlet spectrum of the gasket and its counting-slope fit.
    SgSpectral {
        #[arg(long, default_value_t = 6)]
        level: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Exact renormalized crossing-time curve of the gasket walk.
    SgWalk {
        #[arg(long, default_value_t = 7)]
        fine_level: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Brownian exit-time curve on a one- or two-dimensional space.
    BmExit {
        /// One of: euclidean1, euclidean2, arctan.
        #[arg(long, default_value = "euclidean1")]
        space: String,
        #[arg(long, value_delimiter = ',', default_values_t = [0.4, 0.2, 0.1, 0.05])]
        radii: Vec<f64>,
        #[arg(long, default_value_t = 2000)]
        n_paths: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Crossing-time curve on the graph of fractional Brownian motion.
    FbmGraph {
        #[arg(long, default_value_t = 0.5)]
        hurst: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Full experiment: the three dimensions plus the Einstein constant.
    Report {
        /// Experiment name when no --config is given; one of
        /// euclidean_interval, euclidean_disk, arctan_line, sierpinski,
        /// fbm_graph, holder_counterexample, bilipschitz_check.
        #[arg(long)]
        experiment: Option<String>,
        #[command(flatten)]
        common: Common,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn load_config(common: &Common, fallback: ExperimentConfig) -> erlab::Result<ExperimentConfig> {
    let mut cfg = match &common.config {
        Some(path) => parse_config(&std::fs::read_to_string(path)?)?,
        None => fallback,
    };
    if let Some(seed) = common.seed {
        cfg.set_seed(seed);
    }
    Ok(cfg)
}

fn finish_experiment(cfg: &ExperimentConfig, common: &Common) -> erlab::Result<ExitCode> {
    let format: ReportFormat = common.format.parse()?;
    let output = run_experiment(cfg)?;
    if let Some(dir) = &common.out {
        for path in write_artifacts(dir, &output)? {
            eprintln!("wrote {}", path.display());
        }
    }
    print!("{}", emit_report(&output.report, format));
    Ok(if output.report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn run(cli: Cli) -> erlab::Result<ExitCode> {
    match cli.cmd {
        Cmd::Moran { ratios } => {
            println!("{}", moran_dimension(&ratios)?);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::SgSpectral { level, common } => {
            let spectrum = sg_dirichlet_spectrum(level)?;
            let fit = spectral_dimension_fit(&spectrum, SPECTRAL_FIT_WINDOW)?;
            println!(
                "level {level}: {} eigenvalues, counting slope {:.4} (target log3/log5 = {:.4}, r2 {:.4})",
                spectrum.eigenvalues.len(),
                fit.slope,
                3f64.ln() / 5f64.ln(),
                fit.r2
            );
            if let Some(dir) = &common.out {
                std::fs::create_dir_all(dir)?;
                let path = dir.join("spectrum.csv");
                std::fs::write(&path, spectrum.to_csv())?;
                eprintln!("wrote {}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::SgWalk { fine_level, common } => {
            let (radii, times) = sg_walk_curve(fine_level, 1..=fine_level.saturating_sub(2))?;
            let fit = log_log_fit(&radii, &times)?;
            println!(
                "fine level {fine_level}: slope {:.4} (target log5/log2 = {:.4})",
                fit.slope,
                5f64.ln() / 2f64.ln()
            );
            for (r, t) in radii.iter().zip(&times) {
                println!("  r = {r:.6}  E[crossing] = {t:.6e}");
            }
            if let Some(dir) = &common.out {
                std::fs::create_dir_all(dir)?;
                let mut csv = String::from("radius,mean_exit_time,stderr\n");
                for (r, t) in radii.iter().zip(&times) {
                    csv.push_str(&format!("{r},{t},0\n"));
                }
                let path = dir.join("exit_curve.csv");
                std::fs::write(&path, csv)?;
                eprintln!("wrote {}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::BmExit {
            space,
            radii,
            n_paths,
            common,
        } => {
            let (descriptor, start) = match space.as_str() {
                "euclidean1" => (SpaceDescriptor::Euclidean { dim: 1 }, Point::one(0.0)),
                "euclidean2" => (SpaceDescriptor::Euclidean { dim: 2 }, Point::two(0.0, 0.0)),
                "arctan" => (SpaceDescriptor::ArctanLine, Point::one(0.0)),
                other => {
                    return Err(erlab::Error::Config(format!("unknown space `{other}`")));
                }
            };
            let spec = RngSpec::new(common.seed.unwrap_or(0));
            let curve = bm_exit_curve(&descriptor, &start, &radii, n_paths, spec)?;
            let fit = walk_dimension(&curve)?;
            println!("{space}: walk dimension {:.4} (r2 {:.4})", fit.value, fit.fit.r2);
            for ((r, m), se) in curve.radii.iter().zip(&curve.means).zip(&curve.stderrs) {
                println!("  r = {r:.3}  E[τ] = {m:.6} ± {se:.6}");
            }
            if let Some(dir) = &common.out {
                std::fs::create_dir_all(dir)?;
                let path = dir.join("exit_curve.csv");
                std::fs::write(&path, curve.to_csv())?;
                eprintln!("wrote {}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::FbmGraph { hurst, common } => {
            let mut cfg = erlab::report::FbmGraphConfig {
                hurst,
                ..Default::default()
            };
            if let Some(seed) = common.seed {
                cfg.seed = seed;
            }
            let cfg = load_config(&common, ExperimentConfig::FbmGraph(cfg))?;
            if !matches!(cfg, ExperimentConfig::FbmGraph(_)) {
                return Err(erlab::Error::Config(
                    "fbm-graph needs an fbm_graph config".into(),
                ));
            }
            finish_experiment(&cfg, &common)
        }
        Cmd::Report { experiment, common } => {
            let fallback = match &experiment {
                Some(name) => ExperimentConfig::by_name(name)?,
                None if common.config.is_some() => {
                    // placeholder; load_config replaces it from the file
                    ExperimentConfig::by_name("euclidean_interval")?
                }
                None => {
                    return Err(erlab::Error::Config(
                        "need --experiment <name> or --config <path>".into(),
                    ));
                }
            };
            let cfg = load_config(&common, fallback)?;
            finish_experiment(&cfg, &common)
        }
    }
}
