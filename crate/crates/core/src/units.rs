//! Conversions between laboratory quantities and the dimensionless kicked
//! rotor parameters.
//!
//! All angular frequencies are in rad/s. There are no cycles/s fields.

use thiserror::Error;

/// Relative tolerance for `Omega_R == Omega^2 / (4 Delta)` consistency.
const RABI_CONSISTENCY: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum UnitsError {
    #[error("{field} must be strictly positive (got {value})")]
    NonPositive { field: &'static str, value: f64 },
    #[error("{field} must be finite (got {value})")]
    NonFinite { field: &'static str, value: f64 },
    #[error("pulse length {tau_p} s is not shorter than the kick period {period} s")]
    PulseNotShort { tau_p: f64, period: f64 },
    #[error("effective Rabi frequency {given} rad/s disagrees with Omega^2/(4 Delta) = {expected} rad/s")]
    InconsistentRabi { given: f64, expected: f64 },
    #[error("detuning must be non-zero")]
    ZeroDetuning,
    #[error("kick count must be at least 1")]
    NoKicks,
    #[error("phi_d must be non-negative and finite (got {0})")]
    BadKickStrength(f64),
}

/// Laboratory parameters of the pulsed standing wave.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    /// Recoil frequency `hbar k_l^2 / 2m`, rad/s.
    pub omega_r: f64,
    /// Effective Rabi frequency `Omega^2 / (4 Delta)`, rad/s.
    pub rabi_eff: f64,
    /// Pulse length, s.
    pub tau_p: f64,
    /// Kick period, s.
    pub period: f64,
    /// Bare Rabi frequency, rad/s.
    pub rabi_bare: Option<f64>,
    /// Detuning, rad/s.
    pub detuning: Option<f64>,
}

impl PhysicalParams {
    pub fn new(omega_r: f64, rabi_eff: f64, tau_p: f64, period: f64) -> Result<Self, UnitsError> {
        let p = Self {
            omega_r,
            rabi_eff,
            tau_p,
            period,
            rabi_bare: None,
            detuning: None,
        };
        p.validate()?;
        Ok(p)
    }

    /// Builds the parameters from the bare Rabi frequency and detuning,
    /// deriving the effective Rabi frequency.
    pub fn from_bare(
        omega_r: f64,
        rabi_bare: f64,
        detuning: f64,
        tau_p: f64,
        period: f64,
    ) -> Result<Self, UnitsError> {
        let p = Self {
            omega_r,
            rabi_eff: rabi_effective(rabi_bare, detuning)?,
            tau_p,
            period,
            rabi_bare: Some(rabi_bare),
            detuning: Some(detuning),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), UnitsError> {
        positive("omega_r", self.omega_r)?;
        positive("rabi_eff", self.rabi_eff)?;
        positive("tau_p", self.tau_p)?;
        positive("period", self.period)?;
        if let Some(o) = self.rabi_bare {
            positive("rabi_bare", o)?;
        }
        if let Some(d) = self.detuning {
            positive("detuning", d)?;
        }
        if self.tau_p >= self.period {
            return Err(UnitsError::PulseNotShort {
                tau_p: self.tau_p,
                period: self.period,
            });
        }
        if let (Some(o), Some(d)) = (self.rabi_bare, self.detuning) {
            let expected = rabi_effective(o, d)?;
            if ((self.rabi_eff - expected) / expected).abs() > RABI_CONSISTENCY {
                return Err(UnitsError::InconsistentRabi {
                    given: self.rabi_eff,
                    expected,
                });
            }
        }
        Ok(())
    }
}

fn positive(field: &'static str, value: f64) -> Result<(), UnitsError> {
    if !value.is_finite() {
        Err(UnitsError::NonFinite { field, value })
    } else if value <= 0.0 {
        Err(UnitsError::NonPositive { field, value })
    } else {
        Ok(())
    }
}

/// Dimensionless parameters of the scaled Hamiltonian.
///
/// `kappa` is derived and always equals `kbar * phi_d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledParams {
    kbar: f64,
    phi_d: f64,
    kicks: usize,
}

impl ScaledParams {
    pub fn new(kbar: f64, phi_d: f64, kicks: usize) -> Result<Self, UnitsError> {
        positive("kbar", kbar)?;
        if !(phi_d.is_finite() && phi_d >= 0.0) {
            return Err(UnitsError::BadKickStrength(phi_d));
        }
        if kicks == 0 {
            return Err(UnitsError::NoKicks);
        }
        Ok(Self { kbar, phi_d, kicks })
    }

    /// Effective Planck constant.
    pub fn kbar(&self) -> f64 {
        self.kbar
    }

    /// Experimental kick strength.
    pub fn phi_d(&self) -> f64 {
        self.phi_d
    }

    pub fn kicks(&self) -> usize {
        self.kicks
    }

    /// Classical kick strength.
    pub fn kappa(&self) -> f64 {
        self.kbar * self.phi_d
    }

    pub fn with_phi_d(&self, phi_d: f64) -> Result<Self, UnitsError> {
        Self::new(self.kbar, phi_d, self.kicks)
    }
}

/// `kbar = 8 omega_r T`, `phi_d = Omega_R tau_p / 2`.
pub fn scaled_from_physical(p: &PhysicalParams, kicks: usize) -> Result<ScaledParams, UnitsError> {
    p.validate()?;
    let kbar = 8.0 * p.omega_r * p.period;
    let phi_d = p.rabi_eff * p.tau_p / 2.0;
    ScaledParams::new(kbar, phi_d, kicks)
}

/// Classical kick strength computed directly from the lab quantities,
/// `4 Omega_R omega_r tau_p T`.
pub fn kappa_from_physical(p: &PhysicalParams) -> Result<f64, UnitsError> {
    p.validate()?;
    Ok(4.0 * p.rabi_eff * p.omega_r * p.tau_p * p.period)
}

/// Kick period realising a given `kbar`.
pub fn period_for_kbar(omega_r: f64, kbar: f64) -> Result<f64, UnitsError> {
    positive("omega_r", omega_r)?;
    positive("kbar", kbar)?;
    Ok(kbar / (8.0 * omega_r))
}

/// `Omega^2 / (4 Delta)`.
pub fn rabi_effective(rabi_bare: f64, detuning: f64) -> Result<f64, UnitsError> {
    if detuning == 0.0 {
        return Err(UnitsError::ZeroDetuning);
    }
    if !rabi_bare.is_finite() {
        return Err(UnitsError::NonFinite {
            field: "rabi_bare",
            value: rabi_bare,
        });
    }
    if !detuning.is_finite() {
        return Err(UnitsError::NonFinite {
            field: "detuning",
            value: detuning,
        });
    }
    Ok(rabi_bare * rabi_bare / (4.0 * detuning))
}
