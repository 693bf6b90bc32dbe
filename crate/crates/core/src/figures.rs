//! Named figure-data products: each figure is a sweep specification plus a
//! CSV layout, built from a scenario configuration.
//!
//! Axis ranges are chosen to bracket the analytic optima of the default
//! scenario; every file records its ranges and column meanings in header
//! comments. Output is deterministic (see [`crate::csv`]).

use std::io::Write;

use crate::closed_form::enhancement_threshold;
use crate::config::ScenarioConfig;
use crate::error::{Error, Result};
use crate::params::Topology;
use crate::scattering::nonreciprocal_point;
use crate::sweep::{run_sweep, Axis, Column, ParamKey, Quantity, SweepSpec};

/// All figure products exposed by the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    /// Relative SNR vs electromechanical cooperativity, three topologies.
    RVsGamma2,
    /// Optimized relative SNR vs optical cooperativity, closed form,
    /// impedance-matched limit and brute-force dots.
    RmaxVsGamma1,
    /// Optimized relative SNR over (Gamma_1, eta), long format.
    RmaxHeatmapEta,
    /// Optimized relative SNR over (Gamma_1, zeta), long format.
    RmaxHeatmapZeta,
    /// SNR budget vs detection noise coefficient.
    SnrVsZeta,
    /// SNR budget vs temperature at fixed zeta.
    SnrVsTemperature,
    /// Relative SNR vs loop phase: fixed detuning, tracked optimal
    /// detuning, and the nonreciprocal-configuration curve.
    RVsPhi,
    /// Optimized relative SNR and its impedance-matched approximation as
    /// functions of xi directly.
    RmaxVsXi,
}

pub const FIGURE_NAMES: [&str; 8] = [
    "r-vs-gamma2",
    "rmax-vs-gamma1",
    "rmax-heatmap-eta",
    "rmax-heatmap-zeta",
    "snr-vs-zeta",
    "snr-vs-temperature",
    "r-vs-phi",
    "rmax-vs-xi",
];

impl std::str::FromStr for Figure {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "r-vs-gamma2" => Figure::RVsGamma2,
            "rmax-vs-gamma1" => Figure::RmaxVsGamma1,
            "rmax-heatmap-eta" => Figure::RmaxHeatmapEta,
            "rmax-heatmap-zeta" => Figure::RmaxHeatmapZeta,
            "snr-vs-zeta" => Figure::SnrVsZeta,
            "snr-vs-temperature" => Figure::SnrVsTemperature,
            "r-vs-phi" => Figure::RVsPhi,
            "rmax-vs-xi" => Figure::RmaxVsXi,
            other => {
                return Err(Error::config(format!(
                    "unknown figure '{other}'; valid names: {}",
                    FIGURE_NAMES.join(", ")
                )))
            }
        })
    }
}

impl Figure {
    pub fn name(self) -> &'static str {
        match self {
            Figure::RVsGamma2 => "r-vs-gamma2",
            Figure::RmaxVsGamma1 => "rmax-vs-gamma1",
            Figure::RmaxHeatmapEta => "rmax-heatmap-eta",
            Figure::RmaxHeatmapZeta => "rmax-heatmap-zeta",
            Figure::SnrVsZeta => "snr-vs-zeta",
            Figure::SnrVsTemperature => "snr-vs-temperature",
            Figure::RVsPhi => "r-vs-phi",
            Figure::RmaxVsXi => "rmax-vs-xi",
        }
    }

    /// Default axis resolution (overridable via `--points`).
    pub fn default_points(self) -> usize {
        match self {
            Figure::RmaxHeatmapEta | Figure::RmaxHeatmapZeta => 60,
            Figure::RmaxVsGamma1 => 120,
            _ => 200,
        }
    }
}

/// Build the sweep and header comments for a figure, then write the CSV.
pub fn render<W: Write>(
    figure: Figure,
    config: &ScenarioConfig,
    points: usize,
    out: &mut W,
) -> Result<()> {
    let (params, topology, mode) = config.to_params()?;
    let echo = config.echo();
    let mut comments: Vec<String> = vec![format!("figure: {}", figure.name())];

    let three_cols = |quantity: Quantity, prefix: &str| -> Vec<Column> {
        vec![
            Column::new(format!("{prefix}_3high"), quantity)
                .with_topology(Topology::ThreeModeHigh),
            Column::new(format!("{prefix}_4mode"), quantity).with_topology(Topology::FourMode),
            Column::new(format!("{prefix}_3low"), quantity).with_topology(Topology::ThreeModeLow),
        ]
    };

    let spec = match figure {
        Figure::RVsGamma2 => {
            comments.push(
                "relative SNR r at fixed gamma1 as the electromechanical cooperativity \
                 sweeps across its optimum; rim_* are the impedance-matched plateaus"
                    .into(),
            );
            comments.push("axis: gamma2 in [1e-1, 1e3], log spacing".into());
            let mut columns = three_cols(Quantity::RelativeSnr, "r");
            columns.extend(three_cols(Quantity::ImRelativeSnr, "rim"));
            SweepSpec {
                axis1: Axis::log(ParamKey::Gamma2, 1e-1, 1e3, points),
                axis2: None,
                topology,
                base: params,
                mode,
                columns,
                config_echo: echo,
            }
        }
        Figure::RmaxVsGamma1 => {
            comments.push(
                "optimized relative SNR vs optical cooperativity: closed form (rmax_*), \
                 impedance-matched limit (rim_*), and brute-force maximization of the \
                 matrix-route SNR over gamma2 (rnum_*)"
                    .into(),
            );
            comments.push("axis: gamma1 in [1e-1, 1e3], log spacing".into());
            let mut columns = three_cols(Quantity::MaxRelativeSnr, "rmax");
            columns.extend(three_cols(Quantity::ImRelativeSnr, "rim"));
            columns.extend(three_cols(Quantity::NumMaxRelativeSnr, "rnum"));
            SweepSpec {
                axis1: Axis::log(ParamKey::Gamma1, 1e-1, 1e3, points),
                axis2: None,
                topology,
                base: params,
                mode,
                columns,
                config_echo: echo,
            }
        }
        Figure::RmaxHeatmapEta => {
            comments.push(
                "optimized relative SNR over optical cooperativity and detection \
                 efficiency, long format (x, y, value)"
                    .into(),
            );
            comments.push("axes: gamma1 in [1e-1, 1e3] log, eta in [1e-4, 1] log".into());
            SweepSpec {
                axis1: Axis::log(ParamKey::Gamma1, 1e-1, 1e3, points),
                axis2: Some(Axis::log(ParamKey::Eta, 1e-4, 1.0, points)),
                topology,
                base: params,
                mode,
                columns: vec![Column::new("rmax", Quantity::MaxRelativeSnr)],
                config_echo: echo,
            }
        }
        Figure::RmaxHeatmapZeta => {
            comments.push(
                "optimized relative SNR over optical cooperativity and detection \
                 noise coefficient, long format (x, y, value)"
                    .into(),
            );
            comments.push("axes: gamma1 in [1e-1, 1e3] log, zeta in [1e0, 1e5] log (1/K)".into());
            SweepSpec {
                axis1: Axis::log(ParamKey::Gamma1, 1e-1, 1e3, points),
                axis2: Some(Axis::log(ParamKey::Zeta, 1e0, 1e5, points)),
                topology,
                base: params,
                mode,
                columns: vec![Column::new("rmax", Quantity::MaxRelativeSnr)],
                config_echo: echo,
            }
        }
        Figure::SnrVsZeta => {
            comments.push(
                "SNR budget vs detection noise: closed-form optimum, bare-LC baseline \
                 and impedance-matched limit, all per tau |beta|^2 epsilon^2, plus the \
                 relative ratios and the brute-force check (rnum)"
                    .into(),
            );
            comments.push("axis: zeta in [1e0, 1e5], log spacing (1/K)".into());
            SweepSpec {
                axis1: Axis::log(ParamKey::Zeta, 1e0, 1e5, points),
                axis2: None,
                topology,
                base: params,
                mode,
                columns: snr_budget_columns(),
                config_echo: echo,
            }
        }
        Figure::SnrVsTemperature => {
            comments.push(
                "SNR budget vs temperature at the configured detection model; \
                 columns as in snr-vs-zeta"
                    .into(),
            );
            comments.push("axis: temperature in [1e-3, 1e1] K, log spacing".into());
            SweepSpec {
                axis1: Axis::log(ParamKey::Temperature, 1e-3, 1e1, points),
                axis2: None,
                topology,
                base: params,
                mode,
                columns: snr_budget_columns(),
                config_echo: echo,
            }
        }
        Figure::RVsPhi => {
            let gamma_m = params.gamma_m_equal()?;
            let (delta_nr, phi_nr) = nonreciprocal_point(params.gamma1, gamma_m)?;
            comments.push(
                "relative SNR vs loop phase: r_delta0 holds delta = 0, r_delta_opt \
                 tracks the per-phase optimal detuning (undefined at phi = pi), \
                 r_nonreciprocal pins gamma2 = gamma1 and delta to the nonreciprocal \
                 configuration"
                    .into(),
            );
            comments.push(format!(
                "nonreciprocal point of the base scenario: phi = {phi_nr:.12e} rad, \
                 delta = {delta_nr:.12e} rad/s"
            ));
            comments.push("axis: phi in [-pi, pi], linear spacing".into());
            SweepSpec {
                axis1: Axis::linear(
                    ParamKey::Phi,
                    -std::f64::consts::PI,
                    std::f64::consts::PI,
                    points,
                ),
                axis2: None,
                topology: Topology::FourMode,
                base: params,
                mode,
                columns: vec![
                    Column::new("r_delta0", Quantity::RelativeSnr),
                    Column::new("r_delta_opt", Quantity::RelativeSnrDeltaOpt),
                    Column::new("r_nonreciprocal", Quantity::RelativeSnrNonreciprocal),
                ],
                config_echo: echo,
            }
        }
        Figure::RmaxVsXi => {
            comments.push(
                "optimized relative SNR and its impedance-matched approximation as \
                 direct functions of xi = rho/sigma over the enhancement window"
                    .into(),
            );
            comments.push(format!(
                "axis: xi in [1e-4, {:.12e}), linear spacing",
                enhancement_threshold()
            ));
            SweepSpec {
                axis1: Axis::linear(
                    ParamKey::Xi,
                    1e-4,
                    enhancement_threshold() - 1e-6,
                    points,
                ),
                axis2: None,
                topology,
                base: params,
                mode,
                columns: vec![
                    Column::new("rmax", Quantity::MaxRelativeSnrOfXi),
                    Column::new("rim", Quantity::ImRelativeSnrOfXi),
                ],
                config_echo: echo,
            }
        }
    };

    let scan = run_sweep(&spec)?;
    crate::csv::write_scan(out, &scan, &comments)?;
    Ok(())
}

fn snr_budget_columns() -> Vec<Column> {
    vec![
        Column::new("eta", Quantity::Eta),
        Column::new("snrmax_per_unit", Quantity::SnrMaxPerUnit),
        Column::new("snr0_per_unit", Quantity::Snr0PerUnit),
        Column::new("snrim_per_unit", Quantity::SnrImPerUnit),
        Column::new("rmax", Quantity::MaxRelativeSnr),
        Column::new("rim", Quantity::ImRelativeSnr),
        Column::new("rnum", Quantity::NumMaxRelativeSnr),
    ]
}

/// Render a figure into a byte buffer (tests and in-process callers).
pub fn render_to_vec(figure: Figure, config: &ScenarioConfig, points: usize) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    render(figure, config, points, &mut buf)?;
    Ok(buf)
}
