//! Declarative 1D/2D parameter sweeps with deterministic output ordering.
//!
//! A [`SweepSpec`] names one or two axes, a topology, a base scenario and a
//! list of quantities to emit. Grid points are independent and evaluated in
//! parallel; rows are gathered in axis2-major order (axis2 varies slowest)
//! regardless of completion order. Per-point failures are recorded in the
//! stability flag column and never abort the sweep, so 2D maps render with
//! holes instead of dying at a degenerate corner.

use rayon::prelude::*;
use std::sync::OnceLock;

use crate::closed_form::{self, NoiseParams};
use crate::error::{Error, Result};
use crate::measurement::{output_noise_spectrum, snr_matrix, RF_PORT};
use crate::optimizer::maximize_over_gamma2;
use crate::params::{
    couplings_for_params, Detection, PerturbationMode, SystemParams, ThermalOccupancies, Topology,
};
use crate::scattering::{build_coupling, build_drift, nonreciprocal_point, scattering_zeroth,
    stability_margin};

/// Parameter selected by a sweep axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamKey {
    Gamma1,
    Gamma2,
    Delta,
    Phi,
    Temperature,
    Eta,
    Zeta,
    Epsilon,
    Beta,
    Tau,
    Kappa,
    OmegaLc,
    GammaLc,
    /// Virtual axis: xi = rho/sigma swept directly, bypassing the scenario.
    Xi,
}

impl ParamKey {
    pub fn name(self) -> &'static str {
        match self {
            ParamKey::Gamma1 => "gamma1",
            ParamKey::Gamma2 => "gamma2",
            ParamKey::Delta => "delta",
            ParamKey::Phi => "phi",
            ParamKey::Temperature => "temperature",
            ParamKey::Eta => "eta",
            ParamKey::Zeta => "zeta",
            ParamKey::Epsilon => "epsilon",
            ParamKey::Beta => "beta",
            ParamKey::Tau => "tau",
            ParamKey::Kappa => "kappa",
            ParamKey::OmegaLc => "omega_lc",
            ParamKey::GammaLc => "gamma_lc",
            ParamKey::Xi => "xi",
        }
    }

    fn apply(self, params: &mut SystemParams, value: f64) {
        match self {
            ParamKey::Gamma1 => params.gamma1 = value,
            ParamKey::Gamma2 => params.gamma2 = value,
            ParamKey::Delta => params.delta = value,
            ParamKey::Phi => params.phi = value,
            ParamKey::Temperature => params.temperature = value,
            ParamKey::Eta => params.detection = Detection::Efficiency(value),
            ParamKey::Zeta => params.detection = Detection::NoiseCoefficient(value),
            ParamKey::Epsilon => params.epsilon = value,
            ParamKey::Beta => params.beta = value,
            ParamKey::Tau => params.tau = value,
            ParamKey::Kappa => params.kappa = value,
            ParamKey::OmegaLc => params.omega_lc = value,
            ParamKey::GammaLc => params.gamma_lc = value,
            ParamKey::Xi => {} // virtual; read by the *OfXi quantities
        }
    }
}

impl std::str::FromStr for ParamKey {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "gamma1" => ParamKey::Gamma1,
            "gamma2" => ParamKey::Gamma2,
            "delta" => ParamKey::Delta,
            "phi" => ParamKey::Phi,
            "temperature" => ParamKey::Temperature,
            "eta" => ParamKey::Eta,
            "zeta" => ParamKey::Zeta,
            "epsilon" => ParamKey::Epsilon,
            "beta" => ParamKey::Beta,
            "tau" => ParamKey::Tau,
            "kappa" => ParamKey::Kappa,
            "omega_lc" => ParamKey::OmegaLc,
            "gamma_lc" => ParamKey::GammaLc,
            "xi" => ParamKey::Xi,
            other => {
                return Err(Error::config(format!(
                    "unknown sweep parameter '{other}'"
                )))
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisScale {
    Linear,
    Log,
}

/// One sweep axis: parameter, range, resolution, spacing.
#[derive(Debug, Clone)]
pub struct Axis {
    pub key: ParamKey,
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub scale: AxisScale,
}

impl Axis {
    pub fn linear(key: ParamKey, min: f64, max: f64, points: usize) -> Self {
        Axis {
            key,
            min,
            max,
            points,
            scale: AxisScale::Linear,
        }
    }

    pub fn log(key: ParamKey, min: f64, max: f64, points: usize) -> Self {
        Axis {
            key,
            min,
            max,
            points,
            scale: AxisScale::Log,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.points == 0 {
            return Err(Error::config("axis needs at least one point"));
        }
        if self.points >= 2 && !(self.min < self.max) {
            return Err(Error::config("axis range must be strictly ordered"));
        }
        if self.scale == AxisScale::Log && self.min <= 0.0 {
            return Err(Error::config("log axis requires positive bounds"));
        }
        Ok(())
    }

    fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.min];
        }
        let n = self.points;
        (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                match self.scale {
                    AxisScale::Linear => self.min + (self.max - self.min) * t,
                    AxisScale::Log => (self.min.ln() + (self.max.ln() - self.min.ln()) * t).exp(),
                }
            })
            .collect()
    }
}

/// Quantity evaluated at each grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Quantity {
    /// Closed-form relative SNR r at the scenario's matching parameter.
    RelativeSnr,
    /// Closed-form optimum r_max(xi).
    MaxRelativeSnr,
    /// Impedance-matching value r_im = sigma/(16 rho).
    ImRelativeSnr,
    /// Brute-force maximization of the matrix-route SNR over Gamma_2.
    NumMaxRelativeSnr,
    /// Matrix-route SNR normalized by tau |beta|^2 epsilon^2.
    SnrPerUnit,
    /// Bare-LC SNR, same normalization.
    Snr0PerUnit,
    /// Closed-form maximum SNR, same normalization.
    SnrMaxPerUnit,
    /// Impedance-matched SNR, same normalization.
    SnrImPerUnit,
    /// Cooled mechanical noise u.
    CooledNoise,
    /// Matching parameter w.
    Matching,
    /// xi = rho/sigma.
    Xi,
    /// Effective detection efficiency.
    Eta,
    /// |S0_22| rf reflection magnitude.
    RfReflectionAbs,
    /// |S0_12| rf-to-optical transmission magnitude.
    RfToOpticalAbs,
    /// |S0_21| optical-to-rf transmission magnitude.
    OpticalToRfAbs,
    /// Stationary rf output noise spectrum at zero frequency.
    OutputNoise,
    /// max Re(eigenvalue) of the drift matrix.
    StabilityMargin,
    /// r with the detuning tracking its per-phase optimum.
    RelativeSnrDeltaOpt,
    /// r with equal cooperativities and the detuning pinned to the
    /// nonreciprocal point of the base Gamma_1.
    RelativeSnrNonreciprocal,
    /// r_max as a direct function of a xi axis.
    MaxRelativeSnrOfXi,
    /// r_im = 1/(16 xi) as a direct function of a xi axis.
    ImRelativeSnrOfXi,
}

/// Named output column: a quantity evaluated under a topology.
#[derive(Debug, Clone)]
pub struct Column {
    pub name: String,
    pub quantity: Quantity,
    /// Overrides the sweep topology when set.
    pub topology: Option<Topology>,
}

impl Column {
    pub fn new(name: impl Into<String>, quantity: Quantity) -> Self {
        Column {
            name: name.into(),
            quantity,
            topology: None,
        }
    }

    pub fn with_topology(mut self, topology: Topology) -> Self {
        self.topology = Some(topology);
        self
    }
}

/// Declarative sweep description.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub axis1: Axis,
    pub axis2: Option<Axis>,
    pub topology: Topology,
    pub base: SystemParams,
    pub mode: PerturbationMode,
    pub columns: Vec<Column>,
    /// Echoed verbatim into the output metadata.
    pub config_echo: String,
}

/// One output row: grid coordinates, emitted values, stability flag.
#[derive(Debug, Clone)]
pub struct Row {
    pub x1: f64,
    pub x2: Option<f64>,
    pub values: Vec<f64>,
    /// False when any quantity at this point failed (unstable drift,
    /// undefined optimum...); failed entries hold NaN.
    pub stable: bool,
}

/// Sweep output: rows in axis2-major order plus reproducibility metadata.
#[derive(Debug, Clone)]
pub struct ScanResult {
    pub axis1: String,
    pub axis2: Option<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Row>,
    pub git_hash: String,
    pub config_echo: String,
}

fn git_hash() -> &'static str {
    static HASH: OnceLock<String> = OnceLock::new();
    HASH.get_or_init(|| {
        std::process::Command::new("git")
            .args(["rev-parse", "--short", "HEAD"])
            .output()
            .ok()
            .filter(|o| o.status.success())
            .and_then(|o| String::from_utf8(o.stdout).ok())
            .map(|s| s.trim().to_string())
            .unwrap_or_else(|| "unknown".to_string())
    })
}

/// Evaluate a sweep. Grid points run in parallel; the returned row order
/// is deterministic (axis2-major, axis1 fastest).
pub fn run_sweep(spec: &SweepSpec) -> Result<ScanResult> {
    spec.axis1.validate()?;
    if let Some(axis2) = &spec.axis2 {
        axis2.validate()?;
    }
    let v1 = spec.axis1.values();
    let v2 = spec.axis2.as_ref().map(|a| a.values()).unwrap_or_default();
    let n1 = v1.len();
    let n2 = v2.len().max(1);

    let rows: Vec<Row> = (0..n1 * n2)
        .into_par_iter()
        .map(|flat| {
            let i2 = flat / n1;
            let i1 = flat % n1;
            let x1 = v1[i1];
            let x2 = spec.axis2.as_ref().map(|_| v2[i2]);
            let mut params = spec.base.clone();
            spec.axis1.key.apply(&mut params, x1);
            if let (Some(axis2), Some(x2)) = (&spec.axis2, x2) {
                axis2.key.apply(&mut params, x2);
            }
            let xi_axis = xi_axis_value(spec, x1, x2);
            let mut stable = true;
            let values = spec
                .columns
                .iter()
                .map(|col| {
                    let topology = col.topology.unwrap_or(spec.topology);
                    match evaluate(col.quantity, &params, topology, spec.mode, xi_axis) {
                        Ok(v) => v,
                        Err(_) => {
                            stable = false;
                            f64::NAN
                        }
                    }
                })
                .collect();
            Row {
                x1,
                x2,
                values,
                stable,
            }
        })
        .collect();

    Ok(ScanResult {
        axis1: spec.axis1.key.name().to_string(),
        axis2: spec.axis2.as_ref().map(|a| a.key.name().to_string()),
        columns: spec.columns.iter().map(|c| c.name.clone()).collect(),
        rows,
        git_hash: git_hash().to_string(),
        config_echo: spec.config_echo.clone(),
    })
}

fn xi_axis_value(spec: &SweepSpec, x1: f64, x2: Option<f64>) -> Option<f64> {
    if spec.axis1.key == ParamKey::Xi {
        return Some(x1);
    }
    if let (Some(axis2), Some(x2)) = (&spec.axis2, x2) {
        if axis2.key == ParamKey::Xi {
            return Some(x2);
        }
    }
    None
}

fn evaluate(
    quantity: Quantity,
    params: &SystemParams,
    topology: Topology,
    mode: PerturbationMode,
    xi_axis: Option<f64>,
) -> Result<f64> {
    use Quantity::*;
    match quantity {
        MaxRelativeSnrOfXi => {
            let xi = xi_axis.ok_or_else(|| Error::config("quantity requires a xi axis"))?;
            return Ok(closed_form::max_relative_snr(xi));
        }
        ImRelativeSnrOfXi => {
            let xi = xi_axis.ok_or_else(|| Error::config("quantity requires a xi axis"))?;
            return Ok(1.0 / (16.0 * xi));
        }
        _ => {}
    }

    match quantity {
        RelativeSnr => {
            let (noise, occ, eta) = noise_context(params, topology)?;
            Ok(closed_form::relative_snr(noise.w, noise.u, occ.n_a2, eta))
        }
        MaxRelativeSnr => {
            let (noise, _, _) = noise_context(params, topology)?;
            Ok(closed_form::max_relative_snr(noise.xi))
        }
        ImRelativeSnr => {
            let (noise, _, _) = noise_context(params, topology)?;
            Ok(closed_form::impedance_matched_relative_snr(
                noise.rho, noise.sigma,
            ))
        }
        NumMaxRelativeSnr => {
            let bracket = 10.0 * (params.gamma1 + 1.0);
            Ok(maximize_over_gamma2(params, topology, bracket)?.r)
        }
        SnrPerUnit => {
            let report = snr_matrix(params, topology, mode)?;
            Ok(report.snr / per_unit(params))
        }
        Snr0PerUnit => {
            let report = snr_matrix(params, topology, mode)?;
            Ok(report.snr0 / per_unit(params))
        }
        SnrMaxPerUnit => {
            let (noise, _, eta) = noise_context(params, topology)?;
            Ok(closed_form::snr_max(
                1.0,
                1.0,
                1.0,
                eta,
                params.omega_lc,
                params.gamma_lc,
                noise.rho,
                noise.sigma,
            ))
        }
        SnrImPerUnit => {
            let (noise, _, eta) = noise_context(params, topology)?;
            Ok(closed_form::snr_impedance_matched(
                1.0,
                1.0,
                1.0,
                eta,
                params.omega_lc,
                params.gamma_lc,
                noise.rho,
            ))
        }
        CooledNoise => Ok(noise_context(params, topology)?.0.u),
        Matching => Ok(noise_context(params, topology)?.0.w),
        Xi => Ok(noise_context(params, topology)?.0.xi),
        Eta => Ok(params.eta()),
        RfReflectionAbs | RfToOpticalAbs | OpticalToRfAbs | OutputNoise | StabilityMargin => {
            params.validate(topology)?;
            let couplings = couplings_for_params(params, topology)?;
            let drift = build_drift(params, &couplings, topology);
            if quantity == StabilityMargin {
                return Ok(stability_margin(&drift));
            }
            let coupling = build_coupling(params, topology);
            let s0 = scattering_zeroth(&drift, &coupling)?;
            Ok(match quantity {
                RfReflectionAbs => s0[(RF_PORT, RF_PORT)].norm(),
                RfToOpticalAbs => s0[(0, RF_PORT)].norm(),
                OpticalToRfAbs => s0[(RF_PORT, 0)].norm(),
                OutputNoise => {
                    let occ = ThermalOccupancies::for_params(params)?;
                    output_noise_spectrum(&s0, &occ, topology)
                }
                _ => unreachable!(),
            })
        }
        RelativeSnrDeltaOpt => {
            let mut p = params.clone();
            p.delta = closed_form::delta_opt(p.gamma1, p.gamma_m_equal()?, p.phi)?;
            let (noise, occ, eta) = noise_context(&p, topology)?;
            Ok(closed_form::relative_snr(noise.w, noise.u, occ.n_a2, eta))
        }
        RelativeSnrNonreciprocal => {
            let mut p = params.clone();
            p.gamma2 = p.gamma1;
            let (delta, _) = nonreciprocal_point(p.gamma1, p.gamma_m_equal()?)?;
            p.delta = delta;
            let (noise, occ, eta) = noise_context(&p, topology)?;
            Ok(closed_form::relative_snr(noise.w, noise.u, occ.n_a2, eta))
        }
        MaxRelativeSnrOfXi | ImRelativeSnrOfXi => unreachable!(),
    }
}

fn noise_context(
    params: &SystemParams,
    topology: Topology,
) -> Result<(NoiseParams, ThermalOccupancies, f64)> {
    let occ = ThermalOccupancies::for_params(params)?;
    let (u, w) = closed_form::uw_for_params(params, topology)?;
    let eta = params.eta();
    Ok((NoiseParams::new(u, w, occ.n_a2, eta), occ, eta))
}

fn per_unit(params: &SystemParams) -> f64 {
    params.tau * params.beta * params.beta * params.epsilon * params.epsilon
}
