//! Scenario configuration: a JSON document mapping directly onto
//! [`SystemParams`] plus topology and perturbation-mode selectors.
//!
//! Unknown keys are rejected, exactly one of `eta`/`zeta` may be present,
//! and the schema version is pinned. All frequencies/rates are rad/s,
//! temperature is K, time is s. Defaults reproduce the reference scenario
//! of [`SystemParams::defaults`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{
    BareCouplings, Detection, PerturbationMode, SystemParams, Topology,
};

pub const SPEC_VERSION: u32 = 1;

/// JSON-facing scenario document.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default = "default_spec_version")]
    pub spec_version: u32,
    /// "four-mode" | "three-mode-high" | "three-mode-low".
    #[serde(default = "default_topology")]
    pub topology: String,
    #[serde(default = "default_omega_lc")]
    pub omega_lc: f64,
    #[serde(default = "default_gamma_lc")]
    pub gamma_lc: f64,
    #[serde(default = "default_omega_1")]
    pub omega_1: f64,
    #[serde(default = "default_omega_2")]
    pub omega_2: f64,
    /// Mechanical decay rate, applied to both modes.
    #[serde(default = "default_gamma_m")]
    pub gamma_m: f64,
    #[serde(default = "default_kappa")]
    pub kappa: f64,
    #[serde(default)]
    pub delta: f64,
    #[serde(default)]
    pub phi: f64,
    #[serde(default = "default_temperature")]
    pub temperature: f64,
    #[serde(default = "default_gamma1")]
    pub gamma1: f64,
    #[serde(default = "default_gamma2")]
    pub gamma2: f64,
    /// Detection efficiency in (0, 1]. Mutually exclusive with `zeta`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    /// Detection noise coefficient, 1/K. Mutually exclusive with `eta`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeta: Option<f64>,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_beta")]
    pub beta: f64,
    #[serde(default = "default_tau")]
    pub tau: f64,
    /// Bare optomechanical couplings [mode1, mode2], rad/s.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g0_optical: Option<[f64; 2]>,
    /// Bare electromechanical couplings [mode1, mode2], rad/s.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g0_electrical: Option<[f64; 2]>,
    /// "dominant" | "full".
    #[serde(default = "default_perturbation_mode")]
    pub perturbation_mode: String,
}

fn default_spec_version() -> u32 {
    SPEC_VERSION
}
fn default_topology() -> String {
    "four-mode".into()
}
fn default_omega_lc() -> f64 {
    5e6
}
fn default_gamma_lc() -> f64 {
    6e3
}
fn default_omega_1() -> f64 {
    2e6
}
fn default_omega_2() -> f64 {
    8e6
}
fn default_gamma_m() -> f64 {
    500.0
}
fn default_kappa() -> f64 {
    5e5
}
fn default_temperature() -> f64 {
    0.1
}
fn default_gamma1() -> f64 {
    60.0
}
fn default_gamma2() -> f64 {
    56.8
}
fn default_epsilon() -> f64 {
    1e-6
}
fn default_beta() -> f64 {
    1.0
}
fn default_tau() -> f64 {
    1.0
}
fn default_perturbation_mode() -> String {
    "full".into()
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("empty config is valid")
    }
}

impl ScenarioConfig {
    /// Parse a JSON document, rejecting unknown keys.
    pub fn from_json(text: &str) -> Result<Self> {
        let config: ScenarioConfig =
            serde_json::from_str(text).map_err(|e| Error::config(format!("{e}")))?;
        config.check()?;
        Ok(config)
    }

    /// Load from a file path.
    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    fn check(&self) -> Result<()> {
        if self.spec_version != SPEC_VERSION {
            return Err(Error::config(format!(
                "unsupported spec_version {} (expected {SPEC_VERSION})",
                self.spec_version
            )));
        }
        if self.eta.is_some() && self.zeta.is_some() {
            return Err(Error::config(
                "exactly one of eta/zeta may be supplied, not both",
            ));
        }
        Ok(())
    }

    /// Apply a `key=value` override (CLI `--set`).
    pub fn apply_set(&mut self, assignment: &str) -> Result<()> {
        let (key, value) = assignment.split_once('=').ok_or_else(|| {
            Error::config(format!("--set expects key=value, got '{assignment}'"))
        })?;
        let parse = |v: &str| -> Result<f64> {
            v.parse::<f64>()
                .map_err(|_| Error::config(format!("value '{v}' for '{key}' is not a number")))
        };
        match key {
            "topology" => self.topology = value.to_string(),
            "perturbation_mode" => self.perturbation_mode = value.to_string(),
            "omega_lc" => self.omega_lc = parse(value)?,
            "gamma_lc" => self.gamma_lc = parse(value)?,
            "omega_1" => self.omega_1 = parse(value)?,
            "omega_2" => self.omega_2 = parse(value)?,
            "gamma_m" => self.gamma_m = parse(value)?,
            "kappa" => self.kappa = parse(value)?,
            "delta" => self.delta = parse(value)?,
            "phi" => self.phi = parse(value)?,
            "temperature" => self.temperature = parse(value)?,
            "gamma1" => self.gamma1 = parse(value)?,
            "gamma2" => self.gamma2 = parse(value)?,
            "eta" => {
                self.eta = Some(parse(value)?);
                self.zeta = None;
            }
            "zeta" => {
                self.zeta = Some(parse(value)?);
                self.eta = None;
            }
            "epsilon" => self.epsilon = parse(value)?,
            "beta" => self.beta = parse(value)?,
            "tau" => self.tau = parse(value)?,
            other => {
                return Err(Error::config(format!(
                    "unknown key '{other}'; valid keys: topology, omega_lc, gamma_lc, \
                     omega_1, omega_2, gamma_m, kappa, delta, phi, temperature, gamma1, \
                     gamma2, eta, zeta, epsilon, beta, tau, perturbation_mode"
                )))
            }
        }
        Ok(())
    }

    pub fn topology(&self) -> Result<Topology> {
        match self.topology.as_str() {
            "four-mode" => Ok(Topology::FourMode),
            "three-mode-high" => Ok(Topology::ThreeModeHigh),
            "three-mode-low" => Ok(Topology::ThreeModeLow),
            other => Err(Error::config(format!(
                "unknown topology '{other}'; expected four-mode, three-mode-high or \
                 three-mode-low"
            ))),
        }
    }

    pub fn perturbation_mode(&self) -> Result<PerturbationMode> {
        match self.perturbation_mode.as_str() {
            "dominant" => Ok(PerturbationMode::Dominant),
            "full" => Ok(PerturbationMode::Full),
            other => Err(Error::config(format!(
                "unknown perturbation_mode '{other}'; expected dominant or full"
            ))),
        }
    }

    /// Materialize and validate the physical parameter set.
    pub fn to_params(&self) -> Result<(SystemParams, Topology, PerturbationMode)> {
        self.check()?;
        let topology = self.topology()?;
        let mode = self.perturbation_mode()?;
        let detection = match (self.eta, self.zeta) {
            (Some(eta), None) => Detection::Efficiency(eta),
            (None, Some(zeta)) => Detection::NoiseCoefficient(zeta),
            (None, None) => Detection::NoiseCoefficient(100.0),
            (Some(_), Some(_)) => unreachable!("check() rejects this"),
        };
        let mut bare = BareCouplings::default();
        if let Some(g0) = self.g0_optical {
            bare.optical = g0;
        }
        if let Some(g0) = self.g0_electrical {
            bare.electrical = g0;
        }
        let params = SystemParams {
            omega_lc: self.omega_lc,
            gamma_lc: self.gamma_lc,
            omega_1: self.omega_1,
            omega_2: self.omega_2,
            gamma_m1: self.gamma_m,
            gamma_m2: self.gamma_m,
            kappa: self.kappa,
            delta: self.delta,
            phi: self.phi,
            temperature: self.temperature,
            gamma1: self.gamma1,
            gamma2: self.gamma2,
            bare,
            epsilon: self.epsilon,
            beta: self.beta,
            tau: self.tau,
            detection,
        };
        params.validate(topology)?;
        Ok((params, topology, mode))
    }

    /// Compact JSON echo for output metadata.
    pub fn echo(&self) -> String {
        serde_json::to_string(self).unwrap_or_default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_reference_scenario() {
        let config = ScenarioConfig::from_json("{}").unwrap();
        let (params, topology, mode) = config.to_params().unwrap();
        assert_eq!(params, SystemParams::defaults());
        assert_eq!(topology, Topology::FourMode);
        assert_eq!(mode, PerturbationMode::Full);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(ScenarioConfig::from_json(r#"{"omega_lcc": 1.0}"#).is_err());
    }

    #[test]
    fn eta_zeta_exclusive() {
        assert!(ScenarioConfig::from_json(r#"{"eta": 0.5, "zeta": 10.0}"#).is_err());
        let c = ScenarioConfig::from_json(r#"{"eta": 0.5}"#).unwrap();
        let (params, _, _) = c.to_params().unwrap();
        assert_eq!(params.detection, Detection::Efficiency(0.5));
    }

    #[test]
    fn wrong_spec_version_rejected() {
        assert!(ScenarioConfig::from_json(r#"{"spec_version": 2}"#).is_err());
    }

    #[test]
    fn set_overrides() {
        let mut config = ScenarioConfig::default();
        config.apply_set("gamma2=10.5").unwrap();
        assert_eq!(config.gamma2, 10.5);
        config.apply_set("topology=three-mode-high").unwrap();
        assert_eq!(config.topology().unwrap().n_modes(), 3);
        config.apply_set("eta=0.25").unwrap();
        assert_eq!(config.eta, Some(0.25));
        assert_eq!(config.zeta, None);
        assert!(config.apply_set("nonsense=1").is_err());
        assert!(config.apply_set("gamma2").is_err());
        assert!(config.apply_set("gamma2=abc").is_err());
    }

    #[test]
    fn invalid_physical_values_rejected() {
        let config = ScenarioConfig::from_json(r#"{"temperature": -1.0}"#).unwrap();
        assert!(config.to_params().is_err());
        let config = ScenarioConfig::from_json(r#"{"eta": 1.5}"#).unwrap();
        assert!(config.to_params().is_err());
    }

    #[test]
    fn echo_round_trips() {
        let mut config = ScenarioConfig::default();
        config.apply_set("gamma1=42").unwrap();
        let echo = config.echo();
        let parsed = ScenarioConfig::from_json(&echo).unwrap();
        assert_eq!(parsed.gamma1, 42.0);
    }
}
