use num_complex::Complex64;

use crate::analytic::bessel_j_table;

use super::{LadderState, QsimError};

// Taps with |J_m| below this are dropped; the discarded norm is < 1e-34.
const TAP_CUTOFF: f64 = 1e-18;

/// Momentum-space form of `exp(-i phi_d cos(phi))`:
/// `c'_n = sum_m (-i)^m J_m(phi_d) c_{n-m}`.
#[derive(Debug, Clone, PartialEq)]
pub struct KickKernel {
    phi_d: f64,
    taps: Vec<Complex64>,
}

impl KickKernel {
    pub fn new(phi_d: f64) -> Result<Self, QsimError> {
        if !(phi_d.is_finite() && phi_d >= 0.0) {
            return Err(QsimError::KickStrength(phi_d));
        }
        let top = phi_d.ceil() as usize + 40 + (10.0 * phi_d).sqrt() as usize;
        let j = bessel_j_table(top, phi_d);
        let band = j.iter().rposition(|v| v.abs() >= TAP_CUTOFF).unwrap_or(0);
        let mut taps = vec![Complex64::new(0.0, 0.0); 2 * band + 1];
        for (m, &jm) in j.iter().enumerate().take(band + 1) {
            // (-i)^m, and K_{-m} = K_m
            let k = match m % 4 {
                0 => Complex64::new(jm, 0.0),
                1 => Complex64::new(0.0, -jm),
                2 => Complex64::new(-jm, 0.0),
                _ => Complex64::new(0.0, jm),
            };
            taps[band + m] = k;
            taps[band - m] = k;
        }
        Ok(Self { phi_d, taps })
    }

    pub fn phi_d(&self) -> f64 {
        self.phi_d
    }

    /// Largest `|m|` kept.
    pub fn band(&self) -> usize {
        self.taps.len() / 2
    }

    /// Tap for momentum transfer `m`.
    pub fn tap(&self, m: i64) -> Complex64 {
        let b = self.band() as i64;
        if m.abs() > b {
            Complex64::new(0.0, 0.0)
        } else {
            self.taps[(m + b) as usize]
        }
    }

    pub fn apply(&self, state: &mut LadderState) -> Result<(), QsimError> {
        state.convolve(&self.taps)
    }
}

/// Applies one kick of strength `phi_d`. Quasimomentum is unchanged.
pub fn apply_kick(state: &mut LadderState, phi_d: f64) -> Result<(), QsimError> {
    KickKernel::new(phi_d)?.apply(state)
}

/// Free evolution over one kick period.
pub fn apply_free(state: &mut LadderState, kbar: f64) -> Result<(), QsimError> {
    if !(kbar.is_finite() && kbar > 0.0) {
        return Err(QsimError::Kbar(kbar));
    }
    state.apply_free(kbar);
    Ok(())
}
