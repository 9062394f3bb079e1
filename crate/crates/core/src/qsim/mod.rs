//! Floquet evolution of the kicked rotor on a momentum ladder.
//!
//! One period is a delta kick `exp(-i phi_d cos(phi))` followed by free
//! evolution `exp(-i kbar (n + q)^2 / 2)`. Energies are recorded right after
//! each kick.

mod ensemble;
mod kick;
mod state;

pub use ensemble::{run_ensemble, EnsembleSpec, InitialDistribution, QuasiSampling};
pub use kick::{apply_free, apply_kick, KickKernel};
pub use state::{LadderState, BOUNDARY_OCCUPANCY_LIMIT};

use thiserror::Error;

use crate::analytic::IntensitySpread;
use crate::units::ScaledParams;

/// Energy calibration on `<(n + q)^2>`: the first kick from a momentum
/// eigenstate adds `C * phi_d^2 / 2 = phi_d^2`.
pub const CALIBRATION: f64 = 2.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QsimError {
    #[error("{}", truncation_message(*n_max, *occupancy, *kick))]
    Truncation {
        n_max: usize,
        occupancy: f64,
        kick: Option<usize>,
    },
    #[error("initial rung {n0} does not fit in a ladder with n_max = {n_max}")]
    LadderIndex { n0: i64, n_max: usize },
    #[error("ladder needs an odd length of at least 3 (got {0})")]
    LadderLength(usize),
    #[error("quasimomentum {0} is outside [0, 1)")]
    Quasimomentum(f64),
    #[error("phi_d must be non-negative and finite (got {0})")]
    KickStrength(f64),
    #[error("kbar must be positive and finite (got {0})")]
    Kbar(f64),
    #[error("ensemble needs at least one quasimomentum sample")]
    NoSamples,
    #[error("initial momentum width must be non-negative and finite (got {0})")]
    Width(f64),
    #[error(transparent)]
    Spread(#[from] crate::analytic::AnalyticError),
}

fn truncation_message(n_max: usize, occupancy: f64, kick: Option<usize>) -> String {
    let at = kick.map(|k| format!(" after kick {k}")).unwrap_or_default();
    format!(
        "ladder truncation inadequate{at}: boundary occupancy {occupancy:.3e} >= {BOUNDARY_OCCUPANCY_LIMIT:e} \
         with n_max = {n_max}; increase n_max"
    )
}

/// Mean energies `E(0..=N)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergySeries {
    pub params: ScaledParams,
    pub energies: Vec<f64>,
    /// Standard error of the per-member energy gain `E(k) - E(0)`, for
    /// Monte Carlo results.
    pub std_errors: Option<Vec<f64>>,
    /// Largest `|norm - 1|` seen after any kick.
    pub norm_drift: Option<f64>,
    pub ensemble: Option<EnsembleSpec>,
    pub spread: Option<IntensitySpread>,
}

impl EnergySeries {
    pub fn initial(&self) -> f64 {
        self.energies[0]
    }

    /// `E(k) - E(0)` for every recorded kick.
    pub fn gains(&self) -> Vec<f64> {
        self.energies.iter().map(|e| e - self.energies[0]).collect()
    }
}

/// Default ladder half-width for `kicks` kicks of strength `phi_d` from a
/// start at rung `n0`.
pub fn auto_n_max(kicks: usize, phi_d: f64, n0_abs: u64) -> usize {
    let per_kick = phi_d + 8.0 * phi_d.cbrt().max(1.0);
    (kicks as f64 * per_kick + n0_abs as f64).ceil() as usize + 16
}

/// Kicks and free-evolves `state` `kicks` times. Returns the energies and
/// the largest norm drift.
pub(crate) fn evolve(
    mut state: LadderState,
    kernel: &KickKernel,
    kbar: f64,
    kicks: usize,
) -> Result<(Vec<f64>, f64), QsimError> {
    let mut energies = Vec::with_capacity(kicks + 1);
    energies.push(state.energy());
    let norm0 = state.norm();
    let mut drift: f64 = 0.0;
    for k in 1..=kicks {
        kernel.apply(&mut state).map_err(|e| match e {
            QsimError::Truncation {
                n_max, occupancy, ..
            } => QsimError::Truncation {
                n_max,
                occupancy,
                kick: Some(k),
            },
            other => other,
        })?;
        energies.push(state.energy());
        drift = drift.max((state.norm() - norm0).abs());
        state.apply_free(kbar);
    }
    Ok((energies, drift))
}

/// Single trajectory from `initial`.
pub fn run_trajectory(
    initial: LadderState,
    params: &ScaledParams,
) -> Result<EnergySeries, QsimError> {
    let kernel = KickKernel::new(params.phi_d())?;
    let (energies, drift) = evolve(initial, &kernel, params.kbar(), params.kicks())?;
    Ok(EnergySeries {
        params: *params,
        energies,
        std_errors: None,
        norm_drift: Some(drift),
        ensemble: None,
        spread: None,
    })
}
