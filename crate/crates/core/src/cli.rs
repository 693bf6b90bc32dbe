//! Command-line front end: `report`, `figure` and `validate` subcommands.
//!
//! Exit codes: 0 success, 1 validation failure, 2 configuration error,
//! 3 unstable model (or a failed numerical solve).

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::config::ScenarioConfig;
use crate::csv;
use crate::error::Error;
use crate::figures::{Figure, FIGURE_NAMES};
use crate::measurement::snr_matrix;
use crate::validate;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_UNSTABLE: i32 = 3;

#[derive(Parser)]
#[command(
    name = "rf-sense",
    about = "Optoelectromechanical rf sensing analysis",
    long_about = "Analyzes an rf capacitance-sensing scheme where mechanical modes couple \
                  an LC resonator to an optical cavity: scattering matrices, homodyne \
                  signal-to-noise ratios, impedance matching and cooperativity optimization. \
                  All frequencies and rates are angular (rad/s), temperatures kelvin."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one scenario and print a single-row CSV report to stdout.
    Report {
        /// JSON scenario file; defaults describe the reference scenario.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Override single keys, e.g. --set gamma2=10 --set eta=0.5.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
    /// Generate figure data as a CSV file.
    Figure {
        /// One of: r-vs-gamma2, rmax-vs-gamma1, rmax-heatmap-eta,
        /// rmax-heatmap-zeta, snr-vs-zeta, snr-vs-temperature, r-vs-phi,
        /// rmax-vs-xi.
        name: String,
        /// JSON scenario file; defaults describe the reference scenario.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output path [default: <name>.csv in the working directory].
        #[arg(long)]
        out: Option<PathBuf>,
        /// Points per axis [default: 200 for curves, 120 for rmax-vs-gamma1,
        /// 60 per heatmap axis].
        #[arg(long)]
        points: Option<usize>,
        /// Override single keys, e.g. --set gamma1=100.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
    /// Run the full invariant suite; exit 0 iff every check passes.
    Validate {
        /// Only run checks whose name contains this substring.
        #[arg(long)]
        filter: Option<String>,
    },
}

fn exit_code_for(error: &Error) -> i32 {
    match error {
        Error::Unstable { .. } | Error::Numerical { .. } => EXIT_UNSTABLE,
        _ => EXIT_CONFIG,
    }
}

fn load_config(path: Option<&PathBuf>, sets: &[String]) -> Result<ScenarioConfig, Error> {
    let mut config = match path {
        Some(p) => ScenarioConfig::from_path(p)?,
        None => ScenarioConfig::default(),
    };
    for assignment in sets {
        config.apply_set(assignment)?;
    }
    Ok(config)
}

/// Report columns, in output order.
pub const REPORT_COLUMNS: [&str; 14] = [
    "u",
    "w",
    "xi",
    "rho",
    "sigma",
    "w_opt",
    "snr_per_unit",
    "snr0_per_unit",
    "r",
    "r_max",
    "r_im",
    "s22_abs",
    "sx_out",
    "stability_margin",
];

fn cmd_report<W: Write>(config: &ScenarioConfig, out: &mut W) -> Result<(), Error> {
    let (params, topology, mode) = config.to_params()?;
    let report = snr_matrix(&params, topology, mode)?;
    let per_unit = params.tau * params.beta * params.beta * params.epsilon * params.epsilon;
    let d = &report.diagnostics;
    let values = [
        d.u,
        d.w,
        d.xi,
        d.rho,
        d.sigma,
        d.w_opt,
        report.snr / per_unit,
        report.snr0 / per_unit,
        report.r,
        d.r_max,
        d.r_im,
        d.s22_abs,
        d.sx_out,
        d.stability_margin,
    ];
    csv::write_single_row(out, &REPORT_COLUMNS, &values)?;
    Ok(())
}

fn cmd_figure(
    name: &str,
    config: &ScenarioConfig,
    out_path: Option<PathBuf>,
    points: Option<usize>,
) -> Result<PathBuf, Error> {
    let figure: Figure = name.parse()?;
    let points = points.unwrap_or_else(|| figure.default_points());
    if points == 0 {
        return Err(Error::config("--points must be at least 1"));
    }
    let path = out_path.unwrap_or_else(|| PathBuf::from(format!("{}.csv", figure.name())));
    let mut file = std::fs::File::create(&path)
        .map_err(|e| Error::config(format!("cannot create {}: {e}", path.display())))?;
    crate::figures::render(figure, config, points, &mut file)?;
    Ok(path)
}

fn cmd_validate(filter: Option<&str>) -> i32 {
    let outcomes = validate::run(filter);
    if outcomes.is_empty() {
        eprintln!(
            "no checks match the filter; available: {}",
            validate::CHECKS
                .iter()
                .map(|(name, _)| *name)
                .collect::<Vec<_>>()
                .join(", ")
        );
        return EXIT_CONFIG;
    }
    let mut failures = 0;
    for outcome in &outcomes {
        let status = if outcome.passed { "PASS" } else { "FAIL" };
        println!(
            "{status} {name}: {detail} [{runtime:.1?}]",
            name = outcome.name,
            detail = outcome.detail,
            runtime = outcome.runtime
        );
        if !outcome.passed {
            failures += 1;
        }
    }
    println!(
        "{} of {} checks passed",
        outcomes.len() - failures,
        outcomes.len()
    );
    if failures == 0 {
        EXIT_OK
    } else {
        EXIT_VALIDATION
    }
}

/// Entry point used by the binary; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // Help/version are successful exits in clap's model.
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match cli.command {
        Command::Report { config, set } => {
            let config = match load_config(config.as_ref(), &set) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {e}");
                    return exit_code_for(&e);
                }
            };
            let stdout = std::io::stdout();
            match cmd_report(&config, &mut stdout.lock()) {
                Ok(()) => EXIT_OK,
                Err(e) => {
                    eprintln!("error: {e}");
                    exit_code_for(&e)
                }
            }
        }
        Command::Figure {
            name,
            config,
            out,
            points,
            set,
        } => {
            let config = match load_config(config.as_ref(), &set) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {e}");
                    return exit_code_for(&e);
                }
            };
            match cmd_figure(&name, &config, out, points) {
                Ok(path) => {
                    eprintln!("wrote {}", path.display());
                    EXIT_OK
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    if matches!(&e, Error::Config(msg) if msg.contains("unknown figure")) {
                        eprintln!("valid figures: {}", FIGURE_NAMES.join(", "));
                    }
                    exit_code_for(&e)
                }
            }
        }
        Command::Validate { filter } => cmd_validate(filter.as_deref()),
    }
}
