//! Closed-form mean energies after the first five kicks.
//!
//! With `kq = 2 phi_d sin(kbar / 2)` and `J_n = J_n(kq)`:
//!
//! ```text
//! E1 = E0 + phi^2
//! E2 = E0 + 2 phi^2
//! E3 = E0 + phi^2 (3 - 2 J2)
//! E4 = E0 + phi^2 (4 - 4 J2 + 2 J3 - 2 J1^2)
//! E5 = E0 + phi^2 (5 - 6 J2 + 4 J3^2 - 4 J1^2 + 2 J2^2)
//! ```
//!
//! `kq` flips sign under `kbar -> kbar + 2 pi`. E1, E2, E3 and E5 only see
//! even functions of `kq` and are 2 pi periodic in `kbar`; the linear `J3`
//! term makes E4 4 pi periodic only. E5 is itself an approximation, so the
//! quantum simulator is the reference beyond the first few kicks.

mod bessel;
mod spread;

pub use bessel::{bessel_j, bessel_j_table, MAX_ARG, MAX_ORDER};
pub use spread::{gauss_legendre, IntensitySpread, QuadratureRule, SpreadDistribution};

use thiserror::Error;

use crate::harness::{Method, SweepRow};

/// Largest kick count with a closed form.
pub const MAX_ANALYTIC_KICKS: usize = 5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalyticError {
    #[error("Bessel order {0} is outside 0..=8")]
    BesselOrder(u32),
    #[error("Bessel argument {0} is outside [-50, 50]")]
    BesselArgument(f64),
    #[error("no closed form for {0} kicks (supported: 1..=5)")]
    UnsupportedKicks(usize),
    #[error("phi_d must be non-negative and finite (got {0})")]
    KickStrength(f64),
    #[error("initial energy must be non-negative and finite (got {0})")]
    InitialEnergy(f64),
    #[error("kbar must be finite (got {0})")]
    Kbar(f64),
    #[error("spread width {0} is outside [0, 1)")]
    SpreadWidth(f64),
    #[error("spread needs at least one quadrature point")]
    SpreadPoints,
    #[error("kbar grid is empty")]
    EmptyGrid,
    #[error("kbar grid is not strictly increasing at index {0}")]
    GridOrder(usize),
}

/// Mean energy after `kick_index` kicks, in calibrated recoil units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyValue {
    pub value: f64,
    pub kick_index: usize,
}

/// Quasi-classical kick strength `2 phi_d sin(kbar / 2)`.
pub fn kappa_q(phi_d: f64, kbar: f64) -> f64 {
    2.0 * phi_d * (0.5 * kbar).sin()
}

fn check_inputs(n: usize, phi_d: f64, kbar: f64, e0: f64) -> Result<(), AnalyticError> {
    if !(1..=MAX_ANALYTIC_KICKS).contains(&n) {
        return Err(AnalyticError::UnsupportedKicks(n));
    }
    if !(phi_d.is_finite() && phi_d >= 0.0) {
        return Err(AnalyticError::KickStrength(phi_d));
    }
    if !(e0.is_finite() && e0 >= 0.0) {
        return Err(AnalyticError::InitialEnergy(e0));
    }
    if !kbar.is_finite() {
        return Err(AnalyticError::Kbar(kbar));
    }
    Ok(())
}

/// `[J0, J1, J2, J3]` at `x`.
fn low_orders(x: f64) -> Result<[f64; 4], AnalyticError> {
    Ok([
        bessel_j(0, x)?,
        bessel_j(1, x)?,
        bessel_j(2, x)?,
        bessel_j(3, x)?,
    ])
}

/// Mean energy after `n` kicks (`1..=5`) from a cloud of initial energy `e0`.
pub fn energy_after_kicks(
    n: usize,
    phi_d: f64,
    kbar: f64,
    e0: f64,
) -> Result<EnergyValue, AnalyticError> {
    check_inputs(n, phi_d, kbar, e0)?;
    let p2 = phi_d * phi_d;
    let bracket = match n {
        1 => 1.0,
        2 => 2.0,
        _ => {
            let [_, j1, j2, j3] = low_orders(kappa_q(phi_d, kbar))?;
            match n {
                3 => 3.0 - 2.0 * j2,
                4 => 4.0 - 4.0 * j2 + 2.0 * j3 - 2.0 * j1 * j1,
                _ => 5.0 - 6.0 * j2 + 4.0 * j3 * j3 - 4.0 * j1 * j1 + 2.0 * j2 * j2,
            }
        }
    };
    Ok(EnergyValue {
        value: e0 + p2 * bracket,
        kick_index: n,
    })
}

/// [`energy_after_kicks`] averaged over the kick-strength spread.
pub fn energy_spread_averaged(
    n: usize,
    phi_d_nominal: f64,
    kbar: f64,
    e0: f64,
    spread: &IntensitySpread,
) -> Result<EnergyValue, AnalyticError> {
    check_inputs(n, phi_d_nominal, kbar, e0)?;
    let value = spread.average(phi_d_nominal, |phi| {
        energy_after_kicks(n, phi, kbar, e0).map(|e| e.value)
    })?;
    Ok(EnergyValue {
        value,
        kick_index: n,
    })
}

pub(crate) fn check_grid(grid: &[f64]) -> Result<(), AnalyticError> {
    if grid.is_empty() {
        return Err(AnalyticError::EmptyGrid);
    }
    if let Some(bad) = grid.iter().position(|k| !k.is_finite()) {
        return Err(AnalyticError::Kbar(grid[bad]));
    }
    if let Some(i) = grid.windows(2).position(|w| w[1] <= w[0]) {
        return Err(AnalyticError::GridOrder(i + 1));
    }
    Ok(())
}

/// Spread-averaged energies for every kick count in `kicks` over the grid,
/// kicks-major and kbar-ascending. Energies are absolute (`E0` included).
pub fn analytic_sweep(
    kicks: &[usize],
    phi_d: f64,
    kbar_grid: &[f64],
    e0: f64,
    spread: &IntensitySpread,
) -> Result<Vec<SweepRow>, AnalyticError> {
    check_grid(kbar_grid)?;
    spread.validate()?;
    let mut ns = kicks.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let mut rows = Vec::with_capacity(ns.len() * kbar_grid.len());
    for &n in &ns {
        for &kbar in kbar_grid {
            let e = energy_spread_averaged(n, phi_d, kbar, e0, spread)?;
            rows.push(SweepRow {
                kbar,
                phi_d,
                kicks: n,
                energy: e.value,
                method: Method::Analytic,
            });
        }
    }
    Ok(rows)
}
