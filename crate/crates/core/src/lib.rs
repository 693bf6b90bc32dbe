//! Analysis toolkit for optics-assisted rf sensing in an
//! optoelectromechanical system.
//!
//! An LC resonator couples to an optical cavity through one or two
//! mechanical modes driven on their red sidebands. A weak rf probe reflects
//! off the LC port; a small capacitance perturbation shifts the reflected
//! phase, and a homodyne detector integrates the shifted quadrature. Near
//! impedance matching the rf thermal noise is rerouted into the unused
//! optical port, so the probe sees almost vacuum noise and the
//! signal-to-noise ratio can beat a bare LC resonator by a large factor
//! even at high temperature.
//!
//! The crate computes this twice and checks the routes against each other:
//!
//! - [`scattering`] + [`measurement`]: the linearized Langevin drift is
//!   assembled mode by mode, the stationary scattering matrices follow from
//!   dense complex LU solves, and the SNR is built from the scattering
//!   entries and thermal occupancies.
//! - [`closed_form`]: the same quantities as explicit algebra in the
//!   cooperativities, the matching parameter `w` and the noise summary
//!   (`u`, `rho`, `sigma`, `xi`), including every optimum (`w_opt`,
//!   `r_max`, impedance-matching limits, detection-efficiency thresholds).
//!
//! [`optimizer`] re-derives the closed-form optima by brute force,
//! [`sweep`] turns parameter scans into deterministic tables, [`figures`]
//! names the standard data products, and [`cli`] exposes everything as the
//! `rf-sense` binary. Run `rf-sense validate` for the end-to-end invariant
//! suite in [`validate`].
//!
//! Units: all frequencies and rates are angular (rad/s), temperature is
//! kelvin, time is seconds. Start from [`SystemParams::defaults`] for a
//! fully worked reference scenario.

pub mod cli;
pub mod closed_form;
pub mod config;
pub mod csv;
pub mod error;
pub mod figures;
pub mod linalg;
pub mod measurement;
pub mod optimizer;
pub mod params;
pub mod scattering;
pub mod sweep;
pub mod validate;

pub use closed_form::{NoiseParams, SmallParams};
pub use error::{Error, Result};
pub use measurement::{Diagnostics, SensingReport};
pub use params::{
    BareCouplings, Couplings, Detection, PerturbationMode, SystemParams, ThermalOccupancies,
    Topology,
};
pub use scattering::{CouplingMatrix, DriftMatrix, PerturbationMatrix, ScatteringPair};
