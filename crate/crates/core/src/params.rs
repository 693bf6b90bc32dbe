//! System parameters, unit conventions and coupling bookkeeping.
//!
//! All frequencies and rates are ANGULAR (rad/s). This convention is load
//! bearing: at T = 0.1 K a 5e6 rad/s resonator holds ~2618 thermal quanta,
//! a number that anchors the rest of the analysis. Temperatures are kelvin,
//! times are seconds, cooperativities are dimensionless.
//!
//! The model couples an optical cavity (a1) and an rf LC resonator (a2)
//! through one or two mechanical modes (b1, b2). Which mechanical modes
//! participate is selected by [`Topology`].

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Boltzmann constant, J/K (SI exact).
pub const KB: f64 = 1.380649e-23;
/// Reduced Planck constant, J*s (CODATA).
pub const HBAR: f64 = 1.054571817e-34;

/// Which mechanical modes mediate the optical-rf interaction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Topology {
    /// Both mechanical modes participate; the LC sits midway between them.
    FourMode,
    /// Single mechanical mode with frequency above the LC resonance (b2).
    ThreeModeHigh,
    /// Single mechanical mode with frequency below the LC resonance (b1).
    ThreeModeLow,
}

impl Topology {
    /// Number of active modes (matrix dimension).
    pub fn n_modes(self) -> usize {
        match self {
            Topology::FourMode => 4,
            _ => 3,
        }
    }

    /// True if the low-frequency mechanical mode (b1) participates.
    pub fn uses_low_mode(self) -> bool {
        matches!(self, Topology::FourMode | Topology::ThreeModeLow)
    }

    /// True if the high-frequency mechanical mode (b2) participates.
    pub fn uses_high_mode(self) -> bool {
        matches!(self, Topology::FourMode | Topology::ThreeModeHigh)
    }
}

/// Detection model: either a fixed homodyne efficiency or a noise
/// coefficient zeta (1/K) from which eta = 1/(1 + zeta*T) follows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Detection {
    /// Efficiency eta in (0, 1].
    Efficiency(f64),
    /// Noise coefficient zeta >= 0 in 1/K.
    NoiseCoefficient(f64),
}

/// Bare (single-photon/phonon) coupling rates, rad/s. Only the small
/// perturbation corrections depend on them, and only through the ratios
/// g0_optical/g0_electrical.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BareCouplings {
    /// Optomechanical bare couplings g0 for mechanical modes 1 and 2.
    pub optical: [f64; 2],
    /// Electromechanical bare couplings g0 for mechanical modes 1 and 2.
    pub electrical: [f64; 2],
}

impl Default for BareCouplings {
    /// Equal bare couplings of 2*pi*10 Hz on every arm.
    fn default() -> Self {
        let g0 = 2.0 * std::f64::consts::PI * 10.0;
        BareCouplings {
            optical: [g0, g0],
            electrical: [g0, g0],
        }
    }
}

/// Which terms of the capacitance perturbation enter the response matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PerturbationMode {
    /// Keep only the dominant LC frequency shift (omega_lc/2).
    Dominant,
    /// Include the Appendix-level corrections (frequency shifts and
    /// coupling modifications) derived from the bare couplings.
    Full,
}

/// Full physical parameter set for one sensing scenario.
///
/// Frequencies/rates in rad/s, temperature in K, detection time in s,
/// probe amplitude in sqrt(quanta/s). `gamma1`/`gamma2` are the optical
/// and electrical cooperativities that set the dressed coupling strengths.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams {
    /// LC resonance frequency omega_LC.
    pub omega_lc: f64,
    /// LC energy decay rate gamma_LC.
    pub gamma_lc: f64,
    /// Low mechanical frequency omega_1.
    pub omega_1: f64,
    /// High mechanical frequency omega_2.
    pub omega_2: f64,
    /// Mechanical decay rate of mode 1.
    pub gamma_m1: f64,
    /// Mechanical decay rate of mode 2.
    pub gamma_m2: f64,
    /// Optical half width kappa.
    pub kappa: f64,
    /// Detuning from exact red-sideband driving (4-mode only).
    pub delta: f64,
    /// Loop phase phi accumulated along the two transmission paths.
    pub phi: f64,
    /// Bath temperature, K.
    pub temperature: f64,
    /// Optical cooperativity Gamma_1.
    pub gamma1: f64,
    /// Electrical cooperativity Gamma_2.
    pub gamma2: f64,
    /// Bare couplings; only the perturbation corrections use them.
    pub bare: BareCouplings,
    /// Capacitance perturbation strength epsilon (dimensionless, << 1).
    pub epsilon: f64,
    /// Probe amplitude |beta|, sqrt(quanta/s).
    pub beta: f64,
    /// Detection (integration) time tau, s.
    pub tau: f64,
    /// Detection model (eta or zeta).
    pub detection: Detection,
}

impl SystemParams {
    /// Caption-level default scenario: a 5e6 rad/s LC resonator between
    /// 2e6 and 8e6 rad/s mechanical modes at 0.1 K with Gamma_1 = 60 and
    /// Gamma_2 tuned near the optimal matching point.
    pub fn defaults() -> Self {
        SystemParams {
            omega_lc: 5e6,
            gamma_lc: 6e3,
            omega_1: 2e6,
            omega_2: 8e6,
            gamma_m1: 500.0,
            gamma_m2: 500.0,
            kappa: 5e5,
            delta: 0.0,
            phi: 0.0,
            temperature: 0.1,
            gamma1: 60.0,
            gamma2: 56.8,
            bare: BareCouplings::default(),
            epsilon: 1e-6,
            beta: 1.0,
            tau: 1.0,
            detection: Detection::NoiseCoefficient(100.0),
        }
    }

    /// Effective detection efficiency for this scenario.
    pub fn eta(&self) -> f64 {
        match self.detection {
            Detection::Efficiency(eta) => eta,
            Detection::NoiseCoefficient(zeta) => {
                crate::closed_form::detection_efficiency(zeta, self.temperature)
            }
        }
    }

    /// Mechanical decay rate shared by both modes.
    ///
    /// The closed-form route assumes equal mechanical decay rates; this is
    /// the accessor it uses, and it fails on unequal rates.
    pub fn gamma_m_equal(&self) -> Result<f64> {
        let rel = (self.gamma_m1 - self.gamma_m2).abs() / self.gamma_m1.max(self.gamma_m2);
        if rel > 1e-12 {
            return Err(Error::domain(
                "closed-form expressions assume equal mechanical decay rates",
            ));
        }
        Ok(self.gamma_m1)
    }

    /// Mechanical decay rate of the mode(s) active under `topology`.
    /// For the 4-mode model this requires equal rates.
    pub fn gamma_m(&self, topology: Topology) -> Result<f64> {
        match topology {
            Topology::FourMode => self.gamma_m_equal(),
            Topology::ThreeModeLow => Ok(self.gamma_m1),
            Topology::ThreeModeHigh => Ok(self.gamma_m2),
        }
    }

    /// Validate positivity and range constraints shared by every route.
    pub fn validate(&self, topology: Topology) -> Result<()> {
        let positive = [
            ("omega_lc", self.omega_lc),
            ("gamma_lc", self.gamma_lc),
            ("omega_1", self.omega_1),
            ("omega_2", self.omega_2),
            ("gamma_m1", self.gamma_m1),
            ("gamma_m2", self.gamma_m2),
            ("kappa", self.kappa),
            ("temperature", self.temperature),
            ("tau", self.tau),
        ];
        for (name, value) in positive {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::domain(format!("{name} must be strictly positive")));
            }
        }
        if self.gamma1 < 0.0 || self.gamma2 < 0.0 {
            return Err(Error::domain("cooperativities must be nonnegative"));
        }
        if self.epsilon < 0.0 {
            return Err(Error::domain("epsilon must be nonnegative"));
        }
        if self.beta < 0.0 {
            return Err(Error::domain("beta amplitude must be nonnegative"));
        }
        match self.detection {
            Detection::Efficiency(eta) => {
                if !(eta > 0.0 && eta <= 1.0) {
                    return Err(Error::domain("eta must lie in (0, 1]"));
                }
            }
            Detection::NoiseCoefficient(zeta) => {
                if zeta < 0.0 {
                    return Err(Error::domain("zeta must be nonnegative"));
                }
            }
        }
        // Resonance bookkeeping doubles as a consistency check.
        let res = resonance_frequencies(topology, self.omega_1, self.omega_2, self.delta)?;
        if topology == Topology::FourMode {
            let rel = (self.omega_lc - res.omega_lc).abs() / res.omega_lc;
            if rel > 1e-9 {
                return Err(Error::config(format!(
                    "four-mode resonance requires omega_lc = (omega_1 + omega_2)/2; \
                     got omega_lc = {} but (omega_1 + omega_2)/2 = {}",
                    self.omega_lc, res.omega_lc
                )));
            }
        }
        Ok(())
    }
}

/// Mean thermal occupations of the noise baths feeding each port.
/// The optical bath is vacuum (`n_a1` is identically zero).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalOccupancies {
    /// rf resonator bath.
    pub n_a2: f64,
    /// Low mechanical mode bath.
    pub n_b1: f64,
    /// High mechanical mode bath.
    pub n_b2: f64,
}

impl ThermalOccupancies {
    /// Occupancies for a parameter set at its configured temperature.
    pub fn for_params(params: &SystemParams) -> Result<Self> {
        Ok(ThermalOccupancies {
            n_a2: thermal_occupancy(params.omega_lc, params.temperature)?,
            n_b1: thermal_occupancy(params.omega_1, params.temperature)?,
            n_b2: thermal_occupancy(params.omega_2, params.temperature)?,
        })
    }
}

/// Bose-Einstein mean occupation 1/(exp(hbar*omega/kB*T) - 1).
pub fn thermal_occupancy(omega: f64, temperature: f64) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(Error::domain("thermal_occupancy requires omega > 0"));
    }
    if !(temperature > 0.0) {
        return Err(Error::domain("thermal_occupancy requires T > 0"));
    }
    let x = HBAR * omega / (KB * temperature);
    // exp_m1 keeps precision in the classical regime x << 1.
    Ok(1.0 / x.exp_m1())
}

/// Dressed coupling rates between the electromagnetic modes and the
/// mechanical modes, rad/s. Inactive arms are zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Couplings {
    /// Optical cavity to mechanical mode 1.
    pub g11: Complex64,
    /// Optical cavity to mechanical mode 2.
    pub g12: Complex64,
    /// LC resonator to mechanical mode 1.
    pub g21: Complex64,
    /// LC resonator to mechanical mode 2.
    pub g22: Complex64,
}

impl Couplings {
    /// The gauge-invariant loop phase arg(g11) - arg(g12) + arg(g21) - arg(g22).
    ///
    /// Local mode-phase redistributions change the individual arguments but
    /// leave this combination (and every observable) unchanged. Only
    /// meaningful for the 4-mode topology, where the two transmission paths
    /// close a loop.
    pub fn loop_phase(&self) -> f64 {
        (self.g11.arg() - self.g12.arg() + self.g21.arg() - self.g22.arg())
            .rem_euclid(2.0 * std::f64::consts::PI)
    }

    /// Apply a local gauge transformation with mode phases
    /// (theta_a1, theta_a2, theta_b1, theta_b2). Observables are invariant.
    pub fn gauge_transformed(&self, theta: [f64; 4]) -> Couplings {
        let rot = |p: f64| Complex64::from_polar(1.0, p);
        Couplings {
            g11: self.g11 * rot(theta[0] - theta[2]),
            g12: self.g12 * rot(theta[0] - theta[3]),
            g21: self.g21 * rot(theta[2] - theta[1]),
            g22: self.g22 * rot(theta[3] - theta[1]),
        }
    }
}

/// Convert cooperativities to dressed couplings.
///
/// |g1j| = sqrt(Gamma_1 * kappa * gamma_m / 2), |g2j| = sqrt(Gamma_2 *
/// gamma_LC * gamma_m / 4). The loop phase phi is carried entirely by the
/// optical coupling of the low mode (g11); all other entries are real
/// positive. For the 3-mode topologies the phase is gauge-trivial and is
/// placed on the participating optical arm for symmetry.
pub fn cooperativities_to_couplings(
    gamma1: f64,
    gamma2: f64,
    kappa: f64,
    gamma_lc: f64,
    gamma_m: f64,
    phi: f64,
    topology: Topology,
) -> Result<Couplings> {
    if gamma1 < 0.0 || gamma2 < 0.0 {
        return Err(Error::domain("cooperativities must be nonnegative"));
    }
    if !(kappa > 0.0 && gamma_lc > 0.0 && gamma_m > 0.0) {
        return Err(Error::domain("rates must be strictly positive"));
    }
    let g1 = (gamma1 * kappa * gamma_m / 2.0).sqrt();
    let g2 = (gamma2 * gamma_lc * gamma_m / 4.0).sqrt();
    let phased = Complex64::from_polar(g1, phi);
    let real1 = Complex64::new(g1, 0.0);
    let real2 = Complex64::new(g2, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    Ok(match topology {
        Topology::FourMode => Couplings {
            g11: phased,
            g12: real1,
            g21: real2,
            g22: real2,
        },
        Topology::ThreeModeLow => Couplings {
            g11: phased,
            g12: zero,
            g21: real2,
            g22: zero,
        },
        Topology::ThreeModeHigh => Couplings {
            g11: zero,
            g12: phased,
            g21: zero,
            g22: real2,
        },
    })
}

/// Recover (Gamma_1, Gamma_2) from dressed couplings.
///
/// Active arms of the same kind must have equal magnitudes (to 1e-9
/// relative); the closed-form route is meaningless otherwise.
pub fn couplings_to_cooperativities(
    couplings: &Couplings,
    kappa: f64,
    gamma_lc: f64,
    gamma_m: f64,
) -> Result<(f64, f64)> {
    if !(kappa > 0.0 && gamma_lc > 0.0 && gamma_m > 0.0) {
        return Err(Error::domain("rates must be strictly positive"));
    }
    let g1 = equal_magnitude(couplings.g11, couplings.g12, "optical couplings")?;
    let g2 = equal_magnitude(couplings.g21, couplings.g22, "electrical couplings")?;
    Ok((
        2.0 * g1 * g1 / (kappa * gamma_m),
        4.0 * g2 * g2 / (gamma_lc * gamma_m),
    ))
}

fn equal_magnitude(a: Complex64, b: Complex64, what: &str) -> Result<f64> {
    let (ma, mb) = (a.norm(), b.norm());
    if ma == 0.0 || mb == 0.0 {
        // One arm inactive: the other defines the cooperativity.
        return Ok(ma.max(mb));
    }
    if (ma - mb).abs() / ma.max(mb) > 1e-9 {
        return Err(Error::domain(format!(
            "{what} must have equal magnitudes for the symmetric closed forms"
        )));
    }
    Ok(ma)
}

/// Resonance bookkeeping: LC frequency and rf drive frequency implied by
/// red-sideband driving.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resonance {
    /// Dressed LC resonance frequency.
    pub omega_lc: f64,
    /// rf driving frequency omega_X.
    pub omega_x: f64,
    /// Set when omega_1 = omega_2 collapses the 4-mode scheme.
    pub degenerate: bool,
}

/// Frequencies implied by driving on (or close to) the red mechanical
/// sidebands.
///
/// Four-mode: omega_LC = (omega_1 + omega_2)/2 and omega_X =
/// (omega_2 - omega_1)/2 - delta. Three-mode: the drive detuning spans the
/// gap between the LC and the participating mechanical mode, and delta is
/// forced to zero.
pub fn resonance_frequencies(
    topology: Topology,
    omega_1: f64,
    omega_2: f64,
    delta: f64,
) -> Result<Resonance> {
    if !(omega_1 > 0.0 && omega_2 > 0.0) {
        return Err(Error::domain("mechanical frequencies must be positive"));
    }
    match topology {
        Topology::FourMode => {
            if omega_1 > omega_2 {
                return Err(Error::config(
                    "four-mode topology requires omega_1 <= omega_2",
                ));
            }
            Ok(Resonance {
                omega_lc: 0.5 * (omega_1 + omega_2),
                omega_x: 0.5 * (omega_2 - omega_1) - delta,
                degenerate: omega_1 == omega_2,
            })
        }
        Topology::ThreeModeLow => {
            let omega_lc = 0.5 * (omega_1 + omega_2);
            let omega_x = omega_lc - omega_1;
            if omega_x <= 0.0 {
                return Err(Error::config(
                    "three-mode (low) requires omega_lc > omega_1",
                ));
            }
            Ok(Resonance {
                omega_lc,
                omega_x,
                degenerate: false,
            })
        }
        Topology::ThreeModeHigh => {
            let omega_lc = 0.5 * (omega_1 + omega_2);
            let omega_x = omega_2 - omega_lc;
            if omega_x <= 0.0 {
                return Err(Error::config(
                    "three-mode (high) requires omega_2 > omega_lc",
                ));
            }
            Ok(Resonance {
                omega_lc,
                omega_x,
                degenerate: false,
            })
        }
    }
}

/// Resonance bookkeeping for a full parameter set.
pub fn resonance_for_params(params: &SystemParams, topology: Topology) -> Result<Resonance> {
    // The 3-mode models keep the configured omega_lc and measure omega_x
    // from it, so recompute with the configured value rather than the
    // midpoint when they differ.
    match topology {
        Topology::FourMode => {
            resonance_frequencies(topology, params.omega_1, params.omega_2, params.delta)
        }
        Topology::ThreeModeLow => {
            let omega_x = params.omega_lc - params.omega_1;
            if omega_x <= 0.0 {
                return Err(Error::config(
                    "three-mode (low) requires omega_lc > omega_1",
                ));
            }
            Ok(Resonance {
                omega_lc: params.omega_lc,
                omega_x,
                degenerate: false,
            })
        }
        Topology::ThreeModeHigh => {
            let omega_x = params.omega_2 - params.omega_lc;
            if omega_x <= 0.0 {
                return Err(Error::config(
                    "three-mode (high) requires omega_2 > omega_lc",
                ));
            }
            Ok(Resonance {
                omega_lc: params.omega_lc,
                omega_x,
                degenerate: false,
            })
        }
    }
}

/// Couplings implied by a parameter set under a topology.
pub fn couplings_for_params(params: &SystemParams, topology: Topology) -> Result<Couplings> {
    let gamma_m = params.gamma_m(topology)?;
    cooperativities_to_couplings(
        params.gamma1,
        params.gamma2,
        params.kappa,
        params.gamma_lc,
        gamma_m,
        params.phi,
        topology,
    )
}
