//! Closed-form expressions for the sensing performance.
//!
//! Everything here is an explicit algebraic function of the cooperativities,
//! the detuning/phase, the thermal occupancies and the detection efficiency:
//! the cooled mechanical noise `u`, the matching parameter `w`, the
//! signal-to-noise ratio and its optimum over `w`, the relative SNR against
//! a bare LC probe, the impedance-matching limits, and the detection
//! efficiency model eta = 1/(1 + zeta*T).
//!
//! The matrix pipeline in [`crate::measurement`] computes the same
//! quantities by linear solves; the two routes agree to near machine
//! precision under the symmetry assumptions (equal mechanical decay rates
//! and equal coupling magnitudes), which the test suite enforces.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::{
    couplings_for_params, resonance_for_params, SystemParams, ThermalOccupancies, Topology, HBAR,
    KB,
};

/// Noise/matching summary entering every closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseParams {
    /// Residual mechanical thermal noise after laser cooling.
    pub u: f64,
    /// Matching parameter; w = 1 is perfect impedance matching.
    pub w: f64,
    /// rho = 1 + eta*u/2.
    pub rho: f64,
    /// sigma = 1 + 2*eta*n_a2.
    pub sigma: f64,
    /// xi = rho/sigma; enhancement requires xi below [`enhancement_threshold`].
    pub xi: f64,
}

impl NoiseParams {
    pub fn new(u: f64, w: f64, n_a2: f64, eta: f64) -> Self {
        let rho = 1.0 + eta * u / 2.0;
        let sigma = 1.0 + 2.0 * eta * n_a2;
        NoiseParams {
            u,
            w,
            rho,
            sigma,
            xi: rho / sigma,
        }
    }
}

/// Cooled mechanical noise and matching parameter, 4-mode model.
///
/// `u` carries the thermal load of both mechanical modes reduced by the
/// optical cooling; `w` is the electromechanical response relative to the
/// cooled mechanical linewidth. The loop phase and the sideband detuning
/// enter through the interference factor 1 + Gamma_1(1 - cos phi).
pub fn uw_four_mode(
    gamma1: f64,
    gamma2: f64,
    delta: f64,
    phi: f64,
    gamma_m: f64,
    n_b1: f64,
    n_b2: f64,
) -> Result<(f64, f64)> {
    if gamma1 < 0.0 || gamma2 < 0.0 {
        return Err(Error::domain("cooperativities must be nonnegative"));
    }
    let d = gamma1 + 0.5 + 2.0 * delta * delta / (gamma_m * gamma_m);
    let a = 1.0 + gamma1 * (1.0 - phi.cos());
    let s = gamma1 * phi.sin() - 2.0 * delta / gamma_m;
    let u = (n_b1 + n_b2) / d * (a + s * s / a);
    let w = gamma2 * a / d;
    Ok((u, w))
}

/// Cooled mechanical noise and matching parameter, 3-mode model
/// (single mechanical mode with occupancy `n_bj`, zero detuning).
pub fn uw_three_mode(gamma1: f64, gamma2: f64, n_bj: f64) -> Result<(f64, f64)> {
    if gamma1 < 0.0 || gamma2 < 0.0 {
        return Err(Error::domain("cooperativities must be nonnegative"));
    }
    Ok((4.0 * n_bj / (gamma1 + 1.0), gamma2 / (gamma1 + 1.0)))
}

/// Ratio w/Gamma_2 for a topology; finite at Gamma_2 = 0.
pub fn matching_ratio(topology: Topology, gamma1: f64, delta: f64, phi: f64, gamma_m: f64) -> f64 {
    match topology {
        Topology::FourMode => {
            let d = gamma1 + 0.5 + 2.0 * delta * delta / (gamma_m * gamma_m);
            (1.0 + gamma1 * (1.0 - phi.cos())) / d
        }
        _ => 1.0 / (gamma1 + 1.0),
    }
}

/// (u, w) for a full parameter set under a topology.
pub fn uw_for_params(params: &SystemParams, topology: Topology) -> Result<(f64, f64)> {
    let occ = ThermalOccupancies::for_params(params)?;
    match topology {
        Topology::FourMode => uw_four_mode(
            params.gamma1,
            params.gamma2,
            params.delta,
            params.phi,
            params.gamma_m_equal()?,
            occ.n_b1,
            occ.n_b2,
        ),
        Topology::ThreeModeLow => uw_three_mode(params.gamma1, params.gamma2, occ.n_b1),
        Topology::ThreeModeHigh => uw_three_mode(params.gamma1, params.gamma2, occ.n_b2),
    }
}

/// Detuning minimizing the 4-mode mechanical noise `u` at fixed phase.
///
/// Undefined at phi = pi, where the interference factor degenerates.
pub fn delta_opt(gamma1: f64, gamma_m: f64, phi: f64) -> Result<f64> {
    let denom = 1.0 + phi.cos();
    if denom.abs() < 1e-12 {
        return Err(Error::UndefinedOptimum(
            "delta_opt diverges at phi = pi".into(),
        ));
    }
    Ok(gamma_m * (0.5 + gamma1) * phi.sin() / denom)
}

/// First-order corrections induced by the capacitance perturbation on the
/// couplings and frequencies, and the resulting signal corrections X, Y.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmallParams {
    /// Response factor of the rf mode at the drive frequency.
    pub v: Complex64,
    /// Coupling corrections g~_2j (zero on inactive arms).
    pub g_tilde_21: Complex64,
    pub g_tilde_22: Complex64,
    /// Static LC frequency correction, rad/s.
    pub omega_lc_tilde: f64,
    /// Static optical detuning correction, rad/s.
    pub delta_tilde: f64,
    /// Signal numerator corrections; both << 1 when omega_lc >> gamma_lc.
    pub x: f64,
    pub y: f64,
}

impl SmallParams {
    /// All corrections zeroed (dominant-effect model).
    pub fn zero() -> Self {
        SmallParams {
            v: Complex64::new(0.0, 0.0),
            g_tilde_21: Complex64::new(0.0, 0.0),
            g_tilde_22: Complex64::new(0.0, 0.0),
            omega_lc_tilde: 0.0,
            delta_tilde: 0.0,
            x: 0.0,
            y: 0.0,
        }
    }
}

/// rf response factor v = 1/4 - z^2/(omega_lc^2 + z^2), z = gamma_lc/2 + i*omega_x.
pub fn response_factor(omega_lc: f64, gamma_lc: f64, omega_x: f64) -> Complex64 {
    let z = Complex64::new(gamma_lc / 2.0, omega_x);
    let z2 = z * z;
    Complex64::new(0.25, 0.0) - z2 / (Complex64::new(omega_lc * omega_lc, 0.0) + z2)
}

/// Compute the perturbation corrections for a parameter set.
///
/// The dressed LC frequency stands in for its unperturbed value (their
/// difference is second order in the bare couplings). The bare couplings
/// only enter through the optical/electrical ratio; a zero electrical bare
/// coupling with a finite electrical cooperativity is contradictory.
pub fn small_params(params: &SystemParams, topology: Topology) -> Result<SmallParams> {
    let res = resonance_for_params(params, topology)?;
    let v = response_factor(params.omega_lc, params.gamma_lc, res.omega_x);
    let couplings = couplings_for_params(params, topology)?;
    let gamma_m = params.gamma_m(topology)?;

    let g_tilde_21 = couplings.g21 * v;
    let g_tilde_22 = couplings.g22 * v.conj();

    // Re(beta_j_dc) with the optical arm switched off:
    //   Re{ i |g2j|^2 / (2 g0_el_j (gamma_m/2 + i omega_j)) }.
    let mut beta_dc_re = [0.0_f64; 2];
    for (j, (g2, omega_j)) in [(couplings.g21, params.omega_1), (couplings.g22, params.omega_2)]
        .into_iter()
        .enumerate()
    {
        let mag2 = g2.norm_sqr();
        if mag2 == 0.0 {
            continue;
        }
        let g0 = params.bare.electrical[j];
        if g0 <= 0.0 {
            return Err(Error::domain(
                "zero bare electromechanical coupling with a finite electrical cooperativity",
            ));
        }
        beta_dc_re[j] = mag2 * omega_j / (2.0 * g0 * (gamma_m * gamma_m / 4.0 + omega_j * omega_j));
    }
    let factor = 0.5 + 2.0 * v.re;
    let omega_lc_tilde = 4.0
        * factor
        * (params.bare.electrical[0] * beta_dc_re[0] + params.bare.electrical[1] * beta_dc_re[1]);
    let delta_tilde = 2.0
        * factor
        * (params.bare.optical[0] * beta_dc_re[0] + params.bare.optical[1] * beta_dc_re[1]);

    let ratio = matching_ratio(topology, params.gamma1, params.delta, params.phi, gamma_m);
    let w = params.gamma2 * ratio;
    let (x, y) = match topology {
        Topology::FourMode => {
            let a = 1.0 + params.gamma1 * (1.0 - params.phi.cos());
            let x = 2.0 * omega_lc_tilde / params.omega_lc
                - w * params.gamma1 * params.gamma_lc * delta_tilde
                    / (params.kappa * params.omega_lc)
                    * (ratio + params.phi.cos() - 1.0)
                    / a;
            let y = 2.0 * w * params.gamma_lc / params.omega_lc
                * (v.re + v.im * params.gamma1 * params.phi.sin() / a);
            (x, y)
        }
        _ => {
            // w^2/Gamma_2 written as Gamma_2 * ratio^2 to stay finite at 0.
            let x = 2.0 * omega_lc_tilde / params.omega_lc
                - params.gamma2 * ratio * ratio * params.gamma1 * params.gamma_lc * delta_tilde
                    / (params.kappa * params.omega_lc);
            let y = 2.0 * w * params.gamma_lc / params.omega_lc * v.re;
            (x, y)
        }
    };

    Ok(SmallParams {
        v,
        g_tilde_21,
        g_tilde_22,
        omega_lc_tilde,
        delta_tilde,
        x,
        y,
    })
}

/// Signal-to-noise ratio of the homodyne capacitance measurement.
///
/// `x`, `y` are the numerator corrections from [`small_params`]; pass zero
/// to use the dominant-effect model.
#[allow(clippy::too_many_arguments)]
pub fn snr_closed(
    beta: f64,
    epsilon: f64,
    tau: f64,
    eta: f64,
    omega_lc: f64,
    gamma_lc: f64,
    n_a2: f64,
    u: f64,
    w: f64,
    x: f64,
    y: f64,
) -> f64 {
    let scale = 16.0 * beta * beta * epsilon * epsilon * tau * eta * omega_lc * omega_lc
        / (gamma_lc * gamma_lc);
    let numer = (1.0 + x) * (1.0 + x) + y * y;
    let one_w = 1.0 + w;
    let denom = one_w * one_w
        * (one_w * one_w + 2.0 * eta * ((1.0 - w) * (1.0 - w) * n_a2 + u * w));
    scale * numer / denom
}

/// Baseline SNR of a bare LC probe (w = 0).
pub fn snr_baseline(
    beta: f64,
    epsilon: f64,
    tau: f64,
    eta: f64,
    omega_lc: f64,
    gamma_lc: f64,
    n_a2: f64,
) -> f64 {
    let sigma = 1.0 + 2.0 * eta * n_a2;
    16.0 * beta * beta * epsilon * epsilon * tau * eta * omega_lc * omega_lc
        / (gamma_lc * gamma_lc * sigma)
}

/// SNR at perfect impedance matching (w = 1).
pub fn snr_impedance_matched(
    beta: f64,
    epsilon: f64,
    tau: f64,
    eta: f64,
    omega_lc: f64,
    gamma_lc: f64,
    rho: f64,
) -> f64 {
    beta * beta * epsilon * epsilon * tau * eta * omega_lc * omega_lc / (gamma_lc * gamma_lc * rho)
}

/// Maximum SNR over the matching parameter.
#[allow(clippy::too_many_arguments)]
pub fn snr_max(
    beta: f64,
    epsilon: f64,
    tau: f64,
    eta: f64,
    omega_lc: f64,
    gamma_lc: f64,
    rho: f64,
    sigma: f64,
) -> f64 {
    let xi = rho / sigma;
    if xi >= enhancement_threshold() {
        return snr_baseline_from_sigma(beta, epsilon, tau, eta, omega_lc, gamma_lc, sigma);
    }
    let bracket = 2.25 * (1.0 / 9.0 - xi) * (1.0 + ((1.0 - xi) / (1.0 / 9.0 - xi)).sqrt());
    12.0 * beta * beta * epsilon * epsilon * tau * eta * omega_lc * omega_lc
        / (gamma_lc * gamma_lc * sigma * (1.0 - xi) * (1.0 - xi) * (1.0 - bracket * bracket))
}

fn snr_baseline_from_sigma(
    beta: f64,
    epsilon: f64,
    tau: f64,
    eta: f64,
    omega_lc: f64,
    gamma_lc: f64,
    sigma: f64,
) -> f64 {
    16.0 * beta * beta * epsilon * epsilon * tau * eta * omega_lc * omega_lc
        / (gamma_lc * gamma_lc * sigma)
}

/// Matching parameter maximizing the SNR: the local branch for
/// xi below the enhancement threshold, zero (bare LC) above it.
pub fn optimal_matching(xi: f64) -> Result<f64> {
    if !(xi > 0.0) {
        return Err(Error::domain("optimal_matching requires xi > 0"));
    }
    if xi >= enhancement_threshold() {
        return Ok(0.0);
    }
    Ok(matching_branch(xi))
}

/// Local minimizer branch of the SNR denominator, defined for 0 < xi <= 1/9.
/// Above the enhancement threshold it is only a local (not global) optimum.
pub fn matching_branch(xi: f64) -> f64 {
    1.5 * (1.0 / 3.0 - xi + ((1.0 - xi) * (1.0 / 9.0 - xi)).sqrt())
}

/// SNR denominator d(w) = (1+w)^2 [w^2 - 2(1-2 xi) w + 1]; d(0) = 1.
pub fn snr_denominator(w: f64, xi: f64) -> f64 {
    let one_w = 1.0 + w;
    one_w * one_w * (w * w - 2.0 * (1.0 - 2.0 * xi) * w + 1.0)
}

/// Denominator value at the local optimum branch.
pub fn snr_denominator_at_branch(xi: f64) -> f64 {
    let bracket = 2.25 * (1.0 / 9.0 - xi) * (1.0 + ((1.0 - xi) / (1.0 / 9.0 - xi)).sqrt());
    4.0 / 3.0 * (1.0 - xi) * (1.0 - xi) * (1.0 - bracket * bracket)
}

/// Exact threshold on xi = rho/sigma below which the coupled system beats
/// a bare LC probe. Roots of d(w_branch(xi)) = 1; approximately 0.0973.
pub fn enhancement_threshold() -> f64 {
    let s = 312.0_f64.powf(1.5);
    (37.0 - (23.0 * 277.0 - s).cbrt() - (23.0 * 277.0 + s).cbrt()) / 48.0
}

/// Relative SNR r = SNR/SNR_0 at matching parameter `w` (corrections
/// neglected); r(0) = 1 by construction.
pub fn relative_snr(w: f64, u: f64, n_a2: f64, eta: f64) -> f64 {
    let sigma = 1.0 + 2.0 * eta * n_a2;
    let one_w = 1.0 + w;
    sigma
        / (one_w
            * one_w
            * (one_w * one_w + 2.0 * eta * ((1.0 - w) * (1.0 - w) * n_a2 + u * w)))
}

/// Maximum relative SNR as a function of xi alone; 1 above the threshold.
pub fn max_relative_snr(xi: f64) -> f64 {
    if xi >= enhancement_threshold() {
        return 1.0;
    }
    let bracket = 2.25 * (1.0 / 9.0 - xi) * (1.0 + ((1.0 - xi) / (1.0 / 9.0 - xi)).sqrt());
    0.75 / ((1.0 - xi) * (1.0 - xi) * (1.0 - bracket * bracket))
}

/// Relative SNR at perfect impedance matching: sigma/(16 rho) = 1/(16 xi).
pub fn impedance_matched_relative_snr(rho: f64, sigma: f64) -> f64 {
    sigma / (16.0 * rho)
}

/// Stationary rf output noise spectrum at zero frequency, closed form.
pub fn output_noise_closed(w: f64, u: f64, n_a2: f64) -> f64 {
    let refl = (w - 1.0) / (w + 1.0);
    refl * refl * (1.0 + 2.0 * n_a2) + 2.0 * w * (2.0 + u) / ((w + 1.0) * (w + 1.0))
}

/// Detection efficiency eta = 1/(1 + zeta*T).
pub fn detection_efficiency(zeta: f64, temperature: f64) -> f64 {
    1.0 / (1.0 + zeta * temperature)
}

/// Minimum detection efficiency for the protocol to beat a bare LC probe,
/// (1 - xi_threshold)/(2 n_a2 - u/2).
pub fn min_detection_efficiency(n_a2: f64, u: f64) -> Result<f64> {
    let denom = 2.0 * n_a2 - u / 2.0;
    if denom <= 0.0 {
        return Err(Error::domain(
            "threshold undefined: mechanical noise exceeds the rf noise budget, \
             the protocol cannot win",
        ));
    }
    Ok((1.0 - enhancement_threshold()) / denom)
}

/// Temperature-scaled mechanical noise coefficient: u ~ u_check * kB*T/hbar.
pub fn u_check(topology: Topology, gamma1: f64, omega_lc: f64, omega_1: f64, omega_2: f64) -> f64 {
    match topology {
        Topology::FourMode => 2.0 * omega_lc / ((gamma1 + 0.5) * omega_1 * omega_2),
        Topology::ThreeModeLow => 4.0 / ((gamma1 + 1.0) * omega_1),
        Topology::ThreeModeHigh => 4.0 / ((gamma1 + 1.0) * omega_2),
    }
}

/// Maximum detection-noise coefficient zeta for enhanced sensing at
/// temperature T.
pub fn max_detection_noise(
    topology: Topology,
    gamma1: f64,
    omega_lc: f64,
    omega_1: f64,
    omega_2: f64,
    temperature: f64,
) -> f64 {
    let xibar = enhancement_threshold();
    let uc = u_check(topology, gamma1, omega_lc, omega_1, omega_2);
    2.0 * KB / (HBAR * omega_lc) * xibar / (1.0 - xibar) * (1.0 - omega_lc * uc / (4.0 * xibar))
        - 1.0 / temperature
}

/// True when the high-mode 3-mode model carries less cooled mechanical
/// noise than the 4-mode model at matched large cooperativities,
/// i.e. when omega_lc < (2/3) omega_2. The boundary itself is excluded.
pub fn three_mode_preferred(omega_lc: f64, omega_2: f64) -> bool {
    omega_lc < 2.0 / 3.0 * omega_2
}

/// Full closed-form noise summary for a parameter set.
pub fn noise_params_for(params: &SystemParams, topology: Topology) -> Result<NoiseParams> {
    let (u, w) = uw_for_params(params, topology)?;
    let occ = ThermalOccupancies::for_params(params)?;
    Ok(NoiseParams::new(u, w, occ.n_a2, params.eta()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG_N_B1: f64 = 6545.0;
    const FIG_N_B2: f64 = 1636.0;
    const FIG_N_A2: f64 = 2618.0;

    #[test]
    fn uw_four_reduces_at_zero_detuning_and_phase() {
        let (u, w) = uw_four_mode(60.0, 56.8, 0.0, 0.0, 500.0, FIG_N_B1, FIG_N_B2).unwrap();
        assert!((u - (FIG_N_B1 + FIG_N_B2) / 60.5).abs() < 1e-9);
        assert!((w - 56.8 / 60.5).abs() < 1e-12);
        assert!((u - 135.22).abs() < 0.01);
    }

    #[test]
    fn uw_four_zero_gamma2_is_bare_lc() {
        let (_, w) = uw_four_mode(60.0, 0.0, 100.0, 1.0, 500.0, FIG_N_B1, FIG_N_B2).unwrap();
        assert_eq!(w, 0.0);
    }

    #[test]
    fn uw_three_matches_anchor() {
        let (u, _) = uw_three_mode(60.0, 0.0, FIG_N_B2).unwrap();
        assert!((u - 6544.0 / 61.0).abs() < 1e-9);
        assert!((u - 107.28).abs() < 0.01);
        let (u0, _) = uw_three_mode(60.0, 0.0, 0.0).unwrap();
        assert_eq!(u0, 0.0);
        let (_, w1) = uw_three_mode(60.0, 61.0, FIG_N_B2).unwrap();
        assert!((w1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn delta_opt_values() {
        assert_eq!(delta_opt(60.0, 500.0, 0.0).unwrap(), 0.0);
        let d = delta_opt(60.0, 500.0, std::f64::consts::FRAC_PI_2).unwrap();
        assert!((d - 500.0 * 60.5).abs() < 1e-9);
        assert!(delta_opt(60.0, 500.0, std::f64::consts::PI).is_err());
    }

    #[test]
    fn delta_opt_minimizes_u_on_grid() {
        // 1e4-point scan over +-10*gamma_m*(1/2+Gamma_1) at phi = 1 rad.
        let (gamma1, gamma_m, phi) = (60.0, 500.0, 1.0);
        let d_star = delta_opt(gamma1, gamma_m, phi).unwrap();
        let u_at = |delta: f64| {
            uw_four_mode(gamma1, 10.0, delta, phi, gamma_m, FIG_N_B1, FIG_N_B2)
                .unwrap()
                .0
        };
        let span = 10.0 * gamma_m * (0.5 + gamma1);
        let n = 10_000;
        let mut best = (f64::INFINITY, 0.0);
        for i in 0..=n {
            let delta = -span + 2.0 * span * i as f64 / n as f64;
            let u = u_at(delta);
            if u < best.0 {
                best = (u, delta);
            }
        }
        let grid_step = 2.0 * span / n as f64;
        assert!((best.1 - d_star).abs() <= grid_step);
        assert!(u_at(d_star) <= best.0 + 1e-12 * best.0.abs());
        // Minimum value matches (n_b1 + n_b2)/(Gamma_1 + 1/2).
        assert!((u_at(d_star) - (FIG_N_B1 + FIG_N_B2) / 60.5).abs() < 1e-9);
    }

    #[test]
    fn response_factor_limits() {
        // omega_x -> 0, gamma_lc -> 0 gives v -> 1/4.
        let v = response_factor(5e6, 1e-6, 1e-6);
        assert!((v.re - 0.25).abs() < 1e-9);
        assert!(v.im.abs() < 1e-9);
        // omega_x = 3e6, omega_lc = 5e6, gamma_lc << omega_x: 1/4 + 9/16.
        let v = response_factor(5e6, 1.0, 3e6);
        assert!((v.re - 0.8125).abs() < 1e-3);
    }

    #[test]
    fn small_params_are_small_on_defaults() {
        let params = SystemParams::defaults();
        let sp = small_params(&params, Topology::FourMode).unwrap();
        assert!(sp.x.abs() < 1e-2);
        assert!(sp.y.abs() < 1e-2);
        assert!(sp.omega_lc_tilde.abs() < params.omega_lc * 1e-2);
        assert!(sp.delta_tilde.abs() < params.omega_lc * 1e-2);
        // V22 magnitude check: |omega_lc/2 + omega_lc_tilde| within 1% above.
        let v22 = params.omega_lc / 2.0 + sp.omega_lc_tilde;
        let rel = v22 / (params.omega_lc / 2.0);
        assert!(rel > 1.0 && rel < 1.01);
    }

    #[test]
    fn small_params_reject_zero_bare_with_coupling() {
        let mut params = SystemParams::defaults();
        params.bare.electrical = [0.0, 0.0];
        assert!(small_params(&params, Topology::FourMode).is_err());
        params.gamma2 = 0.0;
        assert!(small_params(&params, Topology::FourMode).is_ok());
    }

    #[test]
    fn snr_closed_reduces_to_baseline_and_matched() {
        let (beta, eps, tau, eta) = (2.0, 1e-5, 3.0, 0.2);
        let (olc, glc, na2, u) = (5e6, 6e3, FIG_N_A2, 135.22);
        let s0 = snr_closed(beta, eps, tau, eta, olc, glc, na2, u, 0.0, 0.0, 0.0);
        assert!((s0 - snr_baseline(beta, eps, tau, eta, olc, glc, na2)).abs() < 1e-9 * s0);
        let rho = 1.0 + eta * u / 2.0;
        let s1 = snr_closed(beta, eps, tau, eta, olc, glc, na2, u, 1.0, 0.0, 0.0);
        assert!(
            (s1 - snr_impedance_matched(beta, eps, tau, eta, olc, glc, rho)).abs() < 1e-9 * s1
        );
    }

    #[test]
    fn threshold_constant_value() {
        let xibar = enhancement_threshold();
        assert!((xibar - 0.0973).abs() < 0.0002);
        assert!(xibar < 1.0 / 9.0);
    }

    #[test]
    fn optimal_matching_limits() {
        assert!((optimal_matching(1e-12).unwrap() - 1.0).abs() < 1e-9);
        let at_bar = matching_branch(enhancement_threshold());
        assert!((at_bar - 0.5215).abs() < 0.001);
        // Above the threshold the global optimum is the bare resonator.
        assert_eq!(optimal_matching(0.10).unwrap(), 0.0);
        assert_eq!(optimal_matching(1.0 / 9.0).unwrap(), 0.0);
        // The local branch itself stays defined up to 1/9.
        assert!((matching_branch(1.0 / 9.0) - 1.0 / 3.0).abs() < 1e-12);
        assert!(optimal_matching(0.0).is_err());
    }

    #[test]
    fn relative_snr_normalization() {
        assert!((relative_snr(0.0, 135.0, FIG_N_A2, 0.3) - 1.0).abs() < 1e-12);
        let eta = 1.0 / 11.0;
        let u = (FIG_N_B1 + FIG_N_B2) / 60.5;
        let np = NoiseParams::new(u, 1.0, FIG_N_A2, eta);
        let rim = impedance_matched_relative_snr(np.rho, np.sigma);
        assert!((relative_snr(1.0, u, FIG_N_A2, eta) - rim).abs() < 1e-9 * rim);
        // Caption anchor: r_im = 4.17 within 1%.
        assert!((rim - 4.17).abs() < 0.01 * 4.17);
    }

    #[test]
    fn max_relative_snr_continuity_at_threshold() {
        let xibar = enhancement_threshold();
        assert!((max_relative_snr(xibar - 1e-9) - 1.0).abs() < 1e-6);
        assert_eq!(max_relative_snr(xibar), 1.0);
        assert_eq!(max_relative_snr(0.2), 1.0);
    }

    #[test]
    fn max_relative_snr_caption_anchor() {
        let eta = 1.0 / 11.0;
        let u = (FIG_N_B1 + FIG_N_B2) / 60.5;
        let np = NoiseParams::new(u, 0.0, FIG_N_A2, eta);
        let r = max_relative_snr(np.xi);
        assert!((r - 4.43).abs() < 0.005 * 4.43, "r = {r}");
    }

    #[test]
    fn snr_max_consistent_with_relative_form() {
        let (beta, eps, tau, eta) = (1.0, 1e-6, 1.0, 1.0 / 11.0);
        let (olc, glc) = (5e6, 6e3);
        let u = (FIG_N_B1 + FIG_N_B2) / 60.5;
        let np = NoiseParams::new(u, 0.0, FIG_N_A2, eta);
        let smax = snr_max(beta, eps, tau, eta, olc, glc, np.rho, np.sigma);
        let s0 = snr_baseline(beta, eps, tau, eta, olc, glc, FIG_N_A2);
        assert!((smax / s0 - max_relative_snr(np.xi)).abs() < 1e-12 * max_relative_snr(np.xi));
    }

    #[test]
    fn detection_efficiency_model() {
        assert!((detection_efficiency(100.0, 0.1) - 1.0 / 11.0).abs() < 1e-15);
        assert_eq!(detection_efficiency(0.0, 0.1), 1.0);
    }

    #[test]
    fn min_detection_efficiency_anchor() {
        let u = (FIG_N_B1 + FIG_N_B2) / 60.5;
        let th = min_detection_efficiency(FIG_N_A2, u).unwrap();
        assert!((th - 1.75e-4).abs() < 0.02 * 1.75e-4, "threshold = {th}");
        // Undefined when the mechanical load swamps the rf budget.
        assert!(min_detection_efficiency(10.0, 100.0).is_err());
    }

    #[test]
    fn crossover_predicate() {
        assert!(three_mode_preferred(5e6, 8e6));
        assert!(!three_mode_preferred(2.0 / 3.0 * 8e6, 8e6));
        assert!(!three_mode_preferred(6e6, 8e6));
    }

    #[test]
    fn noise_params_ranges() {
        let params = SystemParams::defaults();
        let np = noise_params_for(&params, Topology::FourMode).unwrap();
        assert!(np.u >= 0.0 && np.w >= 0.0);
        assert!(np.rho >= 1.0 && np.sigma >= 1.0);
        assert!(np.xi > 0.0 && np.xi <= np.rho);
        assert!((np.xi - 0.01498).abs() < 1e-4);
    }
}
