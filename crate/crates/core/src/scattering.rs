//! Drift, perturbation and input-coupling matrices of the linearized
//! dynamics, and the stationary scattering matrices derived from them.
//!
//! Mode ordering is (a1, a2, b1, b2) for the 4-mode model; the 3-mode
//! models drop the inactive mechanical row/column entirely, so their
//! matrices are genuinely 3x3. Port 2 (index 1) is always the rf port.
//!
//! The scattering expansion in the perturbation strength epsilon is
//!   S(eps) = I + L (M + eps V)^-1 L ~= S0 + eps S1,
//! with S0 = I + L M^-1 L and S1 = -L M^-1 V M^-1 L. Every entry point
//! checks stability of M first; the stationary formulas are meaningless
//! for a non-decaying drift.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CONDITION_FLAG};
use crate::params::{Couplings, SystemParams, Topology};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Drift matrix M of the linearized Langevin dynamics.
#[derive(Debug, Clone)]
pub struct DriftMatrix {
    pub topology: Topology,
    pub m: CMatrix,
}

/// First-order response matrix V (the epsilon coefficient of the drift).
#[derive(Debug, Clone)]
pub struct PerturbationMatrix {
    pub v: CMatrix,
}

/// Diagonal input-coupling matrix L.
#[derive(Debug, Clone)]
pub struct CouplingMatrix {
    pub l: CMatrix,
}

/// Zeroth- and first-order scattering matrices, with solve diagnostics.
#[derive(Debug, Clone)]
pub struct ScatteringPair {
    pub s0: CMatrix,
    pub s1: CMatrix,
    /// 1-norm condition number of the drift matrix.
    pub condition: f64,
    /// Set when the condition number exceeds 1e8; results degrade gracefully
    /// near degenerate sweeps instead of aborting.
    pub flagged: bool,
}

/// Build the drift matrix for the active modes.
///
/// The diagonal is -(kappa, gamma_LC/2, gamma_m1/2 - i delta,
/// gamma_m2/2 + i delta) restricted to active modes; the 3-mode models run
/// at exact red-sideband driving, so their detuning is pinned to zero.
pub fn build_drift(
    params: &SystemParams,
    couplings: &Couplings,
    topology: Topology,
) -> DriftMatrix {
    let kappa = Complex64::new(params.kappa, 0.0);
    let glc = Complex64::new(params.gamma_lc / 2.0, 0.0);
    let z = Complex64::new(0.0, 0.0);
    let m = match topology {
        Topology::FourMode => {
            let gm1 = Complex64::new(params.gamma_m1 / 2.0, -params.delta);
            let gm2 = Complex64::new(params.gamma_m2 / 2.0, params.delta);
            let c = couplings;
            CMatrix::from_row_slice(
                4,
                4,
                &[
                    kappa, z, I * c.g11, I * c.g12,
                    z, glc, -I * c.g21.conj(), -I * c.g22.conj(),
                    I * c.g11.conj(), -I * c.g21, gm1, z,
                    I * c.g12.conj(), -I * c.g22, z, gm2,
                ],
            )
        }
        Topology::ThreeModeLow => {
            let gm1 = Complex64::new(params.gamma_m1 / 2.0, 0.0);
            let c = couplings;
            CMatrix::from_row_slice(
                3,
                3,
                &[
                    kappa, z, I * c.g11,
                    z, glc, -I * c.g21.conj(),
                    I * c.g11.conj(), -I * c.g21, gm1,
                ],
            )
        }
        Topology::ThreeModeHigh => {
            let gm2 = Complex64::new(params.gamma_m2 / 2.0, 0.0);
            let c = couplings;
            CMatrix::from_row_slice(
                3,
                3,
                &[
                    kappa, z, I * c.g12,
                    z, glc, -I * c.g22.conj(),
                    I * c.g12.conj(), -I * c.g22, gm2,
                ],
            )
        }
    };
    DriftMatrix { topology, m: -m }
}

/// Build the input-coupling matrix diag(sqrt(2 kappa), sqrt(gamma_LC),
/// sqrt(gamma_mj)...) for the active modes.
pub fn build_coupling(params: &SystemParams, topology: Topology) -> CouplingMatrix {
    let mut rates = vec![2.0 * params.kappa, params.gamma_lc];
    if topology.uses_low_mode() {
        rates.push(params.gamma_m1);
    }
    if topology.uses_high_mode() {
        rates.push(params.gamma_m2);
    }
    let n = rates.len();
    let mut l = CMatrix::zeros(n, n);
    for (i, rate) in rates.into_iter().enumerate() {
        l[(i, i)] = Complex64::new(rate.sqrt(), 0.0);
    }
    CouplingMatrix { l }
}

/// Build the perturbation matrix from the correction parameters.
///
/// Pass [`crate::closed_form::SmallParams::zero`] for the dominant-effect
/// model, which keeps only the LC frequency shift omega_lc/2 in entry (2,2).
pub fn build_perturbation(
    omega_lc: f64,
    small: &crate::closed_form::SmallParams,
    topology: Topology,
) -> PerturbationMatrix {
    let d11 = -Complex64::new(small.delta_tilde, 0.0);
    let d22 = Complex64::new(omega_lc / 2.0 + small.omega_lc_tilde, 0.0);
    let v = match topology {
        Topology::FourMode => {
            let g1 = small.g_tilde_21;
            let g2 = small.g_tilde_22;
            CMatrix::from_row_slice(
                4,
                4,
                &[
                    d11,
                    Complex64::new(0.0, 0.0),
                    Complex64::new(0.0, 0.0),
                    Complex64::new(0.0, 0.0),
                    Complex64::new(0.0, 0.0),
                    d22,
                    g1.conj(),
                    g2.conj(),
                    Complex64::new(0.0, 0.0),
                    g1,
                    Complex64::new(0.0, 0.0),
                    Complex64::new(0.0, 0.0),
                    Complex64::new(0.0, 0.0),
                    g2,
                    Complex64::new(0.0, 0.0),
                    Complex64::new(0.0, 0.0),
                ],
            )
        }
        Topology::ThreeModeLow => {
            let g1 = small.g_tilde_21;
            CMatrix::from_row_slice(
                3,
                3,
                &[
                    d11,
                    Complex64::new(0.0, 0.0),
                    Complex64::new(0.0, 0.0),
                    Complex64::new(0.0, 0.0),
                    d22,
                    g1.conj(),
                    Complex64::new(0.0, 0.0),
                    g1,
                    Complex64::new(0.0, 0.0),
                ],
            )
        }
        Topology::ThreeModeHigh => {
            let g2 = small.g_tilde_22;
            CMatrix::from_row_slice(
                3,
                3,
                &[
                    d11,
                    Complex64::new(0.0, 0.0),
                    Complex64::new(0.0, 0.0),
                    Complex64::new(0.0, 0.0),
                    d22,
                    g2.conj(),
                    Complex64::new(0.0, 0.0),
                    g2,
                    Complex64::new(0.0, 0.0),
                ],
            )
        }
    };
    PerturbationMatrix { v: v.map(|z| I * z) }
}

/// Largest real part over the spectrum of the drift matrix. Stationary
/// formulas require a strictly negative value.
pub fn stability_margin(drift: &DriftMatrix) -> f64 {
    linalg::max_re_eigenvalue(&drift.m)
}

fn require_stable(drift: &DriftMatrix) -> Result<()> {
    let margin = stability_margin(drift);
    if margin >= 0.0 {
        return Err(Error::Unstable { margin });
    }
    Ok(())
}

/// Zeroth-order scattering matrix S0 = I + L M^-1 L.
pub fn scattering_zeroth(drift: &DriftMatrix, coupling: &CouplingMatrix) -> Result<CMatrix> {
    require_stable(drift)?;
    let x = linalg::solve(&drift.m, &coupling.l)?;
    Ok(CMatrix::identity(drift.m.nrows(), drift.m.nrows()) + &coupling.l * x)
}

/// First-order scattering response S1 = -L M^-1 V M^-1 L.
pub fn scattering_first_order(
    drift: &DriftMatrix,
    perturbation: &PerturbationMatrix,
    coupling: &CouplingMatrix,
) -> Result<CMatrix> {
    require_stable(drift)?;
    let x = linalg::solve(&drift.m, &coupling.l)?;
    let y = linalg::solve(&drift.m, &(&perturbation.v * x))?;
    Ok(-(&coupling.l * y))
}

/// Both scattering orders plus condition diagnostics.
pub fn scattering_pair(
    drift: &DriftMatrix,
    perturbation: &PerturbationMatrix,
    coupling: &CouplingMatrix,
) -> Result<ScatteringPair> {
    let s0 = scattering_zeroth(drift, coupling)?;
    let s1 = scattering_first_order(drift, perturbation, coupling)?;
    let condition = linalg::condition_number(&drift.m);
    Ok(ScatteringPair {
        s0,
        s1,
        condition,
        flagged: condition > CONDITION_FLAG,
    })
}

/// Exact finite-epsilon scattering S(eps) = I + L (M + eps V)^-1 L.
/// Reference route for checking the first-order expansion.
pub fn scattering_exact(
    drift: &DriftMatrix,
    perturbation: &PerturbationMatrix,
    coupling: &CouplingMatrix,
    epsilon: f64,
) -> Result<CMatrix> {
    require_stable(drift)?;
    let perturbed = &drift.m + perturbation.v.map(|z| z * epsilon);
    let x = linalg::solve(&perturbed, &coupling.l)?;
    Ok(CMatrix::identity(drift.m.nrows(), drift.m.nrows()) + &coupling.l * x)
}

/// Closed-form rf reflection at matching parameter w: (w - 1)/(w + 1).
pub fn rf_reflection(w: f64) -> Result<f64> {
    if w < 0.0 {
        return Err(Error::domain("matching parameter must be nonnegative"));
    }
    Ok((w - 1.0) / (w + 1.0))
}

/// Detuning and loop phase putting the 4-mode model at its nonreciprocal
/// point for equal cooperativities Gamma >= 1/2: rf-to-optical transmission
/// vanishes while the reverse transmission stays finite, and w = 1.
pub fn nonreciprocal_point(gamma: f64, gamma_m: f64) -> Result<(f64, f64)> {
    if gamma < 0.5 {
        return Err(Error::domain(
            "nonreciprocal point requires cooperativity >= 1/2",
        ));
    }
    let delta = gamma_m / 2.0 * (2.0 * gamma - 1.0).sqrt();
    let num = Complex64::new(gamma_m, -2.0 * delta);
    let den = Complex64::new(gamma_m, 2.0 * delta);
    let phi = (-num / den).arg();
    Ok((delta, phi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::{self, SmallParams};
    use crate::params::{
        cooperativities_to_couplings, couplings_for_params, thermal_occupancy, SystemParams,
    };
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn defaults() -> SystemParams {
        SystemParams::defaults()
    }

    fn pair_for(params: &SystemParams, topology: Topology) -> (DriftMatrix, CouplingMatrix) {
        let couplings = couplings_for_params(params, topology).unwrap();
        (
            build_drift(params, &couplings, topology),
            build_coupling(params, topology),
        )
    }

    #[test]
    fn drift_reduces_to_decay_diagonal_without_couplings() {
        let mut params = defaults();
        params.gamma1 = 0.0;
        params.gamma2 = 0.0;
        let (drift, _) = pair_for(&params, Topology::FourMode);
        let expect = [-5e5, -3e3, -250.0, -250.0];
        for i in 0..4 {
            assert!((drift.m[(i, i)].re - expect[i]).abs() < 1e-9);
            assert_eq!(drift.m[(i, i)].im, 0.0);
            for j in 0..4 {
                if i != j {
                    assert_eq!(drift.m[(i, j)].norm(), 0.0);
                }
            }
        }
    }

    #[test]
    fn drift_hermitian_part_is_pure_decay() {
        let mut params = defaults();
        params.delta = 300.0;
        params.phi = 0.9;
        let (drift, _) = pair_for(&params, Topology::FourMode);
        let herm = &drift.m + drift.m.adjoint();
        let expect = [-2.0 * 5e5, -6e3, -500.0, -500.0];
        for i in 0..4 {
            assert!((herm[(i, i)].re - expect[i]).abs() < 1e-9);
            for j in 0..4 {
                if i != j {
                    assert!(herm[(i, j)].norm() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn defaults_are_stable() {
        let (drift, _) = pair_for(&defaults(), Topology::FourMode);
        let margin = stability_margin(&drift);
        assert!(margin < 0.0, "margin = {margin}");
    }

    #[test]
    fn stability_margin_without_couplings_is_smallest_decay() {
        let mut params = defaults();
        params.gamma1 = 0.0;
        params.gamma2 = 0.0;
        let (drift, _) = pair_for(&params, Topology::FourMode);
        assert!((stability_margin(&drift) + 250.0).abs() < 1e-9);
    }

    #[test]
    fn stability_margin_scales_linearly() {
        let (drift, _) = pair_for(&defaults(), Topology::FourMode);
        let m1 = stability_margin(&drift);
        let doubled = DriftMatrix {
            topology: drift.topology,
            m: drift.m.map(|z| 2.0 * z),
        };
        let m2 = stability_margin(&doubled);
        assert!((m2 - 2.0 * m1).abs() < 1e-9 * m1.abs());
    }

    #[test]
    fn zero_couplings_reflect_everything() {
        let mut params = defaults();
        params.gamma1 = 0.0;
        params.gamma2 = 0.0;
        for topology in [Topology::FourMode, Topology::ThreeModeLow, Topology::ThreeModeHigh] {
            let (drift, coupling) = pair_for(&params, topology);
            let s0 = scattering_zeroth(&drift, &coupling).unwrap();
            let n = s0.nrows();
            let residual = &s0 + CMatrix::identity(n, n);
            assert!(linalg::frobenius(&residual) < 1e-12);
        }
    }

    #[test]
    fn rf_reflection_matches_matrix_route() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut params = defaults();
        for _ in 0..200 {
            params.gamma1 = rng.gen_range(0.0..200.0);
            params.gamma2 = rng.gen_range(0.0..200.0);
            params.delta = rng.gen_range(-2500.0..2500.0);
            params.phi = rng.gen_range(0.0..std::f64::consts::TAU);
            let (drift, coupling) = pair_for(&params, Topology::FourMode);
            let s0 = scattering_zeroth(&drift, &coupling).unwrap();
            let (_, w) = closed_form::uw_four_mode(
                params.gamma1,
                params.gamma2,
                params.delta,
                params.phi,
                500.0,
                1.0,
                1.0,
            )
            .unwrap();
            let closed = rf_reflection(w).unwrap();
            assert!(
                (s0[(1, 1)] - Complex64::new(closed, 0.0)).norm() < 1e-9,
                "mismatch at G1={} G2={}",
                params.gamma1,
                params.gamma2
            );
        }
    }

    #[test]
    fn nonreciprocal_point_suppresses_rf_to_optical() {
        let mut params = defaults();
        for gamma in [1.0, 10.0, 60.0] {
            let (delta, phi) = nonreciprocal_point(gamma, 500.0).unwrap();
            params.gamma1 = gamma;
            params.gamma2 = gamma;
            params.delta = delta;
            params.phi = phi;
            let (drift, coupling) = pair_for(&params, Topology::FourMode);
            let s0 = scattering_zeroth(&drift, &coupling).unwrap();
            assert!(s0[(0, 1)].norm() < 1e-10, "|S12| = {}", s0[(0, 1)].norm());
            assert!(s0[(1, 0)].norm() > 0.1);
            let (_, w) = closed_form::uw_four_mode(gamma, gamma, delta, phi, 500.0, 1.0, 1.0)
                .unwrap();
            assert!((w - 1.0).abs() < 1e-12);
            // w = 1 means no rf reflection either.
            assert!(s0[(1, 1)].norm() < 1e-10);
        }
    }

    #[test]
    fn perturbation_dominant_mode_single_entry() {
        let params = defaults();
        let v = build_perturbation(params.omega_lc, &SmallParams::zero(), Topology::FourMode);
        for i in 0..4 {
            for j in 0..4 {
                if (i, j) == (1, 1) {
                    let expect = Complex64::new(0.0, params.omega_lc / 2.0);
                    assert!((v.v[(1, 1)] - expect).norm() < 1e-12);
                } else {
                    assert_eq!(v.v[(i, j)].norm(), 0.0);
                }
            }
        }
    }

    #[test]
    fn perturbation_couplings_vanish_without_gamma2() {
        let mut params = defaults();
        params.gamma2 = 0.0;
        let small = closed_form::small_params(&params, Topology::FourMode).unwrap();
        let v = build_perturbation(params.omega_lc, &small, Topology::FourMode);
        for k in 2..4 {
            assert_eq!(v.v[(1, k)].norm(), 0.0);
            assert_eq!(v.v[(k, 1)].norm(), 0.0);
        }
    }

    #[test]
    fn zero_perturbation_zero_response() {
        let params = defaults();
        let (drift, coupling) = pair_for(&params, Topology::FourMode);
        let v = PerturbationMatrix {
            v: CMatrix::zeros(4, 4),
        };
        let s1 = scattering_first_order(&drift, &v, &coupling).unwrap();
        assert_eq!(linalg::frobenius(&s1), 0.0);
    }

    #[test]
    fn first_order_expansion_residual_is_second_order() {
        let params = defaults();
        let (drift, coupling) = pair_for(&params, Topology::FourMode);
        let small = closed_form::small_params(&params, Topology::FourMode).unwrap();
        let v = build_perturbation(params.omega_lc, &small, Topology::FourMode);
        let s0 = scattering_zeroth(&drift, &coupling).unwrap();
        let s1 = scattering_first_order(&drift, &v, &coupling).unwrap();
        let mut residuals = Vec::new();
        for &eps in &[1e-6, 1e-5, 1e-4] {
            let exact = scattering_exact(&drift, &v, &coupling, eps).unwrap();
            let diff = &exact - &s0 - s1.map(|z| z * eps);
            residuals.push((eps, linalg::frobenius(&diff)));
        }
        // log-log slope of the residual against eps is 2.
        for pair in residuals.windows(2) {
            let slope = (pair[1].1 / pair[0].1).log10() / (pair[1].0 / pair[0].0).log10();
            assert!((slope - 2.0).abs() < 0.05, "slope = {slope}");
        }
    }

    #[test]
    fn scattering_magnitudes_are_gauge_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let params = defaults();
        let base = couplings_for_params(&params, Topology::FourMode).unwrap();
        let (drift0, coupling) = (
            build_drift(&params, &base, Topology::FourMode),
            build_coupling(&params, Topology::FourMode),
        );
        let s0_ref = scattering_zeroth(&drift0, &coupling).unwrap();
        for _ in 0..20 {
            let theta: [f64; 4] = std::array::from_fn(|_| rng.gen_range(0.0..std::f64::consts::TAU));
            let transformed = base.gauge_transformed(theta);
            let drift = build_drift(&params, &transformed, Topology::FourMode);
            let s0 = scattering_zeroth(&drift, &coupling).unwrap();
            for i in 0..4 {
                for j in 0..4 {
                    assert!(
                        (s0[(i, j)].norm() - s0_ref[(i, j)].norm()).abs() < 1e-10,
                        "entry ({i},{j}) changed under gauge"
                    );
                }
            }
        }
    }

    #[test]
    fn impedance_matched_configuration_has_no_reflection() {
        let mut params = defaults();
        // Gamma_2 chosen so that w = 1 exactly.
        params.gamma2 = params.gamma1 + 0.5;
        let (drift, coupling) = pair_for(&params, Topology::FourMode);
        let s0 = scattering_zeroth(&drift, &coupling).unwrap();
        assert!(s0[(1, 1)].norm() < 1e-9);
    }

    #[test]
    fn rf_reflection_closed_values() {
        assert_eq!(rf_reflection(1.0).unwrap(), 0.0);
        assert_eq!(rf_reflection(0.0).unwrap(), -1.0);
        assert!((rf_reflection(3.0).unwrap() - 0.5).abs() < 1e-15);
        assert!(rf_reflection(-0.1).is_err());
    }

    #[test]
    fn three_mode_uses_configured_gamma_m() {
        let mut params = defaults();
        params.gamma_m1 = 400.0;
        params.gamma_m2 = 700.0;
        let c_low = cooperativities_to_couplings(
            1.0,
            1.0,
            params.kappa,
            params.gamma_lc,
            params.gamma_m1,
            0.0,
            Topology::ThreeModeLow,
        )
        .unwrap();
        let drift = build_drift(&params, &c_low, Topology::ThreeModeLow);
        assert!((drift.m[(2, 2)].re + 200.0).abs() < 1e-12);
        let c_high = cooperativities_to_couplings(
            1.0,
            1.0,
            params.kappa,
            params.gamma_lc,
            params.gamma_m2,
            0.0,
            Topology::ThreeModeHigh,
        )
        .unwrap();
        let drift = build_drift(&params, &c_high, Topology::ThreeModeHigh);
        assert!((drift.m[(2, 2)].re + 350.0).abs() < 1e-12);
    }

    #[test]
    fn thermal_anchor_guards_unit_convention() {
        // The matrices inherit the rad/s convention; this anchor keeps the
        // two modules consistent.
        assert!((thermal_occupancy(5e6, 0.1).unwrap() - 2618.0).abs() < 1.0);
    }
}
