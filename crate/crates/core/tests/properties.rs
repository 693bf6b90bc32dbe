//! Property-based invariants over the physical parameter space.

use num_complex::Complex64;
use proptest::prelude::*;

use rf_sense::closed_form::{
    delta_opt, matching_branch, snr_denominator, snr_denominator_at_branch, uw_four_mode,
    uw_three_mode,
};
use rf_sense::measurement::{measurement_variance, RF_PORT};
use rf_sense::params::{
    cooperativities_to_couplings, couplings_to_cooperativities, thermal_occupancy, Couplings,
    SystemParams, Topology, HBAR, KB,
};
use rf_sense::scattering::{build_coupling, build_drift, scattering_zeroth};

proptest! {
    // Bose identity: n(omega, T) * (exp(hbar omega / kB T) - 1) = 1.
    #[test]
    fn occupancy_satisfies_bose_identity(
        omega in 1e4f64..1e9,
        temperature in 1e-3f64..300.0,
    ) {
        let n = thermal_occupancy(omega, temperature).unwrap();
        let x = HBAR * omega / (KB * temperature);
        prop_assert!((n * x.exp_m1() - 1.0).abs() < 1e-12);
    }

    // Cooperativity <-> coupling conversions are exact inverses.
    #[test]
    fn coupling_conversions_invert(
        gamma1 in 0.0f64..200.0,
        gamma2 in 0.0f64..200.0,
        kappa in 1e5f64..1e7,
        gamma_lc in 1e2f64..1e5,
        gamma_m in 10.0f64..5e3,
        phi in 0.0f64..std::f64::consts::TAU,
    ) {
        let c = cooperativities_to_couplings(
            gamma1, gamma2, kappa, gamma_lc, gamma_m, phi, Topology::FourMode,
        ).unwrap();
        let (r1, r2) = couplings_to_cooperativities(&c, kappa, gamma_lc, gamma_m).unwrap();
        prop_assert!((r1 - gamma1).abs() <= 1e-12 * gamma1.max(1.0));
        prop_assert!((r2 - gamma2).abs() <= 1e-12 * gamma2.max(1.0));
    }

    // The rf reflection from the linear solve equals (w-1)/(w+1).
    #[test]
    fn reflection_matches_matching_parameter(
        gamma1 in 0.0f64..200.0,
        gamma2 in 0.0f64..200.0,
        delta in -2500.0f64..2500.0,
        phi in 0.0f64..std::f64::consts::TAU,
    ) {
        let mut p = SystemParams::defaults();
        p.gamma1 = gamma1;
        p.gamma2 = gamma2;
        p.delta = delta;
        p.phi = phi;
        let couplings = cooperativities_to_couplings(
            gamma1, gamma2, p.kappa, p.gamma_lc, p.gamma_m1, phi, Topology::FourMode,
        ).unwrap();
        let drift = build_drift(&p, &couplings, Topology::FourMode);
        let coupling = build_coupling(&p, Topology::FourMode);
        let s0 = scattering_zeroth(&drift, &coupling).unwrap();
        let (_, w) = uw_four_mode(gamma1, gamma2, delta, phi, p.gamma_m1, 1.0, 1.0).unwrap();
        let predicted = (w - 1.0) / (w + 1.0);
        prop_assert!((s0[(RF_PORT, RF_PORT)] - Complex64::new(predicted, 0.0)).norm() < 1e-9);
    }

    // Variance never drops below the detection-noise floor tau (1 - eta).
    #[test]
    fn variance_floor(
        sx in 0.0f64..1e6,
        eta in 0.0f64..1.0,
        tau in 1e-3f64..1e3,
    ) {
        prop_assert!(measurement_variance(sx, eta, tau) >= tau * (1.0 - eta) - 1e-12);
    }

    // The closed-form branch minimizes the SNR denominator below the
    // threshold; its closed value matches.
    #[test]
    fn denominator_branch_is_minimal(
        xi in 1e-4f64..0.097,
        w in 0.0f64..3.0,
    ) {
        let w_star = matching_branch(xi);
        let d_star = snr_denominator(w_star, xi);
        prop_assert!((d_star - snr_denominator_at_branch(xi)).abs() < 1e-10 * d_star);
        prop_assert!(d_star <= snr_denominator(w, xi) + 1e-12);
    }

    // The optimal detuning minimizes the cooled mechanical noise.
    #[test]
    fn delta_opt_minimizes_noise(
        gamma1 in 0.0f64..150.0,
        phi in -2.9f64..2.9,
        delta in -1e6f64..1e6,
    ) {
        let gamma_m = 500.0;
        let d_star = delta_opt(gamma1, gamma_m, phi).unwrap();
        let u_at = |d: f64| {
            uw_four_mode(gamma1, 1.0, d, phi, gamma_m, 100.0, 40.0).unwrap().0
        };
        prop_assert!(u_at(d_star) <= u_at(delta) + 1e-9 * u_at(delta).abs());
    }

    // A 4-mode model with the high-mode arms switched off is exactly the
    // 3-mode (low) model: same reflection at the matching parameter
    // Gamma_2/(Gamma_1 + 1).
    #[test]
    fn four_mode_degenerates_to_three(
        gamma1 in 0.0f64..150.0,
        gamma2 in 0.0f64..150.0,
    ) {
        let mut p = SystemParams::defaults();
        p.gamma1 = gamma1;
        p.gamma2 = gamma2;
        p.delta = 0.0;
        let g1 = (gamma1 * p.kappa * p.gamma_m1 / 2.0).sqrt();
        let g2 = (gamma2 * p.gamma_lc * p.gamma_m1 / 4.0).sqrt();
        let couplings = Couplings {
            g11: Complex64::new(g1, 0.0),
            g12: Complex64::new(0.0, 0.0),
            g21: Complex64::new(g2, 0.0),
            g22: Complex64::new(0.0, 0.0),
        };
        let drift = build_drift(&p, &couplings, Topology::FourMode);
        let coupling = build_coupling(&p, Topology::FourMode);
        let s0 = scattering_zeroth(&drift, &coupling).unwrap();
        let (_, w3) = uw_three_mode(gamma1, gamma2, 1.0).unwrap();
        let predicted = (w3 - 1.0) / (w3 + 1.0);
        prop_assert!((s0[(RF_PORT, RF_PORT)] - Complex64::new(predicted, 0.0)).norm() < 1e-9);
    }

    // Reflection magnitude is bounded by 1 and monotone in w on each side
    // of the matching point.
    #[test]
    fn reflection_bounded(w in 0.0f64..1e6) {
        let r = rf_sense::scattering::rf_reflection(w).unwrap();
        prop_assert!(r.abs() <= 1.0);
    }
}
