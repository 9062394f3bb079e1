//! Atom-optics delta-kicked rotor: closed-form few-kick energies, full
//! Floquet evolution on a momentum ladder, the classical standard map, and
//! a sweep harness that writes CSV, SVG and replayable run manifests.
//!
//! Energies throughout are in the calibrated recoil convention where the
//! first kick from a momentum eigenstate raises the energy by `phi_d^2`.

pub mod analytic;
pub mod csim;
pub mod harness;
pub mod qsim;
pub mod units;

pub use analytic::{
    analytic_sweep, bessel_j, energy_after_kicks, energy_spread_averaged, kappa_q, EnergyValue,
    IntensitySpread,
};
pub use csim::{run_classical, standard_map_step, ClassicalEnsemble, ClassicalParticle};
pub use harness::{run_config, SweepConfig, SweepResult, SweepRow};
pub use qsim::{run_ensemble, run_trajectory, EnergySeries, EnsembleSpec, LadderState};
pub use units::{
    period_for_kbar, rabi_effective, scaled_from_physical, PhysicalParams, ScaledParams,
};
