//! Homodyne measurement model: signal, output noise spectrum, variance
//! and the matrix-route signal-to-noise ratio.
//!
//! The probe beta reflects off the rf port; the capacitance perturbation
//! shifts the reflected phase, and a phase-sensitive detector integrates
//! the chosen output quadrature for a time tau. The signal is evaluated at
//! the optimal homodyne phase, the variance at epsilon = 0 (lowest relevant
//! order), and SNR = delta_m^2 / Sigma^2.

use num_complex::Complex64;

use crate::closed_form::{self, NoiseParams, SmallParams};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::params::{
    couplings_for_params, PerturbationMode, SystemParams, ThermalOccupancies, Topology,
};
use crate::scattering::{
    build_coupling, build_drift, build_perturbation, scattering_pair, stability_margin,
};

/// rf port index in the mode ordering (a1, a2, b...).
pub const RF_PORT: usize = 1;

/// Everything the analysis reports about one sensing scenario.
#[derive(Debug, Clone)]
pub struct SensingReport {
    /// Homodyne signal shift at the optimal phase.
    pub delta_m: f64,
    /// Measurement variance at epsilon = 0, seconds.
    pub sigma2: f64,
    /// Signal-to-noise ratio delta_m^2 / sigma2.
    pub snr: f64,
    /// Baseline SNR of the bare LC probe (Gamma_2 = 0, same inputs).
    pub snr0: f64,
    /// Relative SNR r = snr/snr0.
    pub r: f64,
    pub diagnostics: Diagnostics,
}

/// Closed-form context and solve health carried alongside the report.
#[derive(Debug, Clone)]
pub struct Diagnostics {
    /// Cooled mechanical noise.
    pub u: f64,
    /// Matching parameter.
    pub w: f64,
    /// xi = rho/sigma.
    pub xi: f64,
    pub rho: f64,
    pub sigma: f64,
    /// Matching parameter that would maximize the SNR at this xi.
    pub w_opt: f64,
    /// Best achievable relative SNR at this xi.
    pub r_max: f64,
    /// Relative SNR at perfect impedance matching.
    pub r_im: f64,
    /// Optimal homodyne phase, rad.
    pub phi_hom: f64,
    /// |S0_22|: rf reflection magnitude.
    pub s22_abs: f64,
    /// rf output noise spectrum at zero frequency, epsilon = 0.
    pub sx_out: f64,
    /// max Re(eigenvalue) of the drift matrix; negative when stable.
    pub stability_margin: f64,
    /// Condition number of the drift matrix; flagged above 1e8.
    pub condition: f64,
    pub condition_flagged: bool,
    /// tau times the slowest decay rate. The stationary treatment of the
    /// integrated signal assumes this is >> 1; it is reported, not enforced,
    /// since the SNR is tau-linear and used in ratios.
    pub tau_correlation_ratio: f64,
}

/// Homodyne phase maximizing the signal, from the first-order response of
/// the rf port and the (complex) probe amplitude.
pub fn optimal_homodyne_phase(s1: &CMatrix, beta: Complex64) -> Result<f64> {
    let s1_22 = s1[(RF_PORT, RF_PORT)];
    if s1_22.norm() == 0.0 {
        return Err(Error::SignalNull(
            "first-order response vanishes at the rf port; the perturbation is invisible here"
                .into(),
        ));
    }
    // phi = pi - arg(beta * {M^-1 V M^-1}_22) with S1_22 = -gamma_lc * {.}_22
    // collapses to -arg(beta * S1_22).
    let mut phi = -(beta * s1_22).arg();
    if phi <= -std::f64::consts::PI {
        phi += 2.0 * std::f64::consts::PI;
    }
    Ok(phi)
}

/// Signal shift at the optimal homodyne phase:
/// delta_m = 2 epsilon tau sqrt(eta) |beta| |S1_22|.
pub fn signal_delta_m(s1: &CMatrix, beta: f64, epsilon: f64, tau: f64, eta: f64) -> f64 {
    2.0 * epsilon * tau * eta.sqrt() * beta * s1[(RF_PORT, RF_PORT)].norm()
}

/// Diagnostic variant: signal at an arbitrary homodyne phase.
pub fn signal_at_phase(
    s1: &CMatrix,
    beta: Complex64,
    epsilon: f64,
    tau: f64,
    eta: f64,
    phase: f64,
) -> f64 {
    let rotated = beta * Complex64::from_polar(1.0, phase) * s1[(RF_PORT, RF_PORT)];
    2.0 * epsilon * tau * eta.sqrt() * rotated.re
}

/// Stationary noise spectrum of the measured rf quadrature at zero
/// frequency (epsilon = 0): sum over input ports of |S0_2p|^2 (1 + 2 n_p),
/// with vacuum at the optical port.
pub fn output_noise_spectrum(
    s0: &CMatrix,
    occupancies: &ThermalOccupancies,
    topology: Topology,
) -> f64 {
    let mut bath = vec![0.0, occupancies.n_a2];
    if topology.uses_low_mode() {
        bath.push(occupancies.n_b1);
    }
    if topology.uses_high_mode() {
        bath.push(occupancies.n_b2);
    }
    bath.iter()
        .enumerate()
        .map(|(p, n)| s0[(RF_PORT, p)].norm_sqr() * (1.0 + 2.0 * n))
        .sum()
}

/// Variance of the integrated measurement: Sigma^2 = tau [eta Sx + (1-eta)].
pub fn measurement_variance(sx_out: f64, eta: f64, tau: f64) -> f64 {
    tau * (eta * sx_out + (1.0 - eta))
}

/// Full matrix-route sensing analysis for one scenario.
pub fn snr_matrix(
    params: &SystemParams,
    topology: Topology,
    mode: PerturbationMode,
) -> Result<SensingReport> {
    params.validate(topology)?;
    let eta = params.eta();
    let occupancies = ThermalOccupancies::for_params(params)?;

    let (delta_m, sigma2, snr, diag_parts) = evaluate(params, topology, mode, eta, &occupancies)?;

    // Baseline: identical inputs with the electromechanical arm switched off.
    let mut baseline = params.clone();
    baseline.gamma2 = 0.0;
    let (_, _, snr0, _) = evaluate(&baseline, topology, mode, eta, &occupancies)?;
    let r = if snr0 > 0.0 { snr / snr0 } else { 0.0 };

    let noise = NoiseParams::new(diag_parts.u, diag_parts.w, occupancies.n_a2, eta);
    let diagnostics = Diagnostics {
        u: noise.u,
        w: noise.w,
        xi: noise.xi,
        rho: noise.rho,
        sigma: noise.sigma,
        w_opt: closed_form::optimal_matching(noise.xi)?,
        r_max: closed_form::max_relative_snr(noise.xi),
        r_im: closed_form::impedance_matched_relative_snr(noise.rho, noise.sigma),
        phi_hom: diag_parts.phi_hom,
        s22_abs: diag_parts.s22_abs,
        sx_out: diag_parts.sx_out,
        stability_margin: diag_parts.stability_margin,
        condition: diag_parts.condition,
        condition_flagged: diag_parts.condition_flagged,
        tau_correlation_ratio: params.tau * diag_parts.stability_margin.abs(),
    };
    Ok(SensingReport {
        delta_m,
        sigma2,
        snr,
        snr0,
        r,
        diagnostics,
    })
}

struct EvalParts {
    u: f64,
    w: f64,
    phi_hom: f64,
    s22_abs: f64,
    sx_out: f64,
    stability_margin: f64,
    condition: f64,
    condition_flagged: bool,
}

fn evaluate(
    params: &SystemParams,
    topology: Topology,
    mode: PerturbationMode,
    eta: f64,
    occupancies: &ThermalOccupancies,
) -> Result<(f64, f64, f64, EvalParts)> {
    let couplings = couplings_for_params(params, topology)?;
    let drift = build_drift(params, &couplings, topology);
    let coupling = build_coupling(params, topology);
    let small = match mode {
        PerturbationMode::Dominant => SmallParams::zero(),
        PerturbationMode::Full => closed_form::small_params(params, topology)?,
    };
    let perturbation = build_perturbation(params.omega_lc, &small, topology);
    let pair = scattering_pair(&drift, &perturbation, &coupling)?;

    let phi_hom = optimal_homodyne_phase(&pair.s1, Complex64::new(params.beta, 0.0))
        .unwrap_or(0.0);
    let delta_m = signal_delta_m(&pair.s1, params.beta, params.epsilon, params.tau, eta);
    let sx_out = output_noise_spectrum(&pair.s0, occupancies, topology);
    let sigma2 = measurement_variance(sx_out, eta, params.tau);
    let snr = delta_m * delta_m / sigma2;
    let (u, w) = closed_form::uw_for_params(params, topology)?;
    Ok((
        delta_m,
        sigma2,
        snr,
        EvalParts {
            u,
            w,
            phi_hom,
            s22_abs: pair.s0[(RF_PORT, RF_PORT)].norm(),
            sx_out,
            stability_margin: stability_margin(&drift),
            condition: pair.condition,
            condition_flagged: pair.flagged,
        },
    ))
}
