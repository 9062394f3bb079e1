use num_complex::Complex64;

use super::{QsimError, CALIBRATION};

/// Largest allowed `|c|^2` summed over the two outermost rungs on each side.
pub const BOUNDARY_OCCUPANCY_LIMIT: f64 = 1e-10;

const NEGLIGIBLE: f64 = 1e-40;

/// A state on the momentum ladder `p = n + q` (two-photon recoils) at fixed
/// quasimomentum `q`, truncated to `n` in `[-n_max, n_max]`.
///
/// Amplitudes outside the tracked support `[lo, hi]` are exactly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderState {
    q: f64,
    n_max: usize,
    amps: Vec<Complex64>,
    lo: usize,
    hi: usize,
    scratch: Vec<Complex64>,
    origin: f64,
}

impl LadderState {
    /// Momentum eigenstate `|n0 + q>`.
    pub fn plane_wave(n0: i64, q: f64, n_max: usize) -> Result<Self, QsimError> {
        check_q(q)?;
        if n_max == 0 || n0.unsigned_abs() >= n_max as u64 {
            return Err(QsimError::LadderIndex { n0, n_max });
        }
        let len = 2 * n_max + 1;
        let mut amps = vec![Complex64::new(0.0, 0.0); len];
        let idx = (n0 + n_max as i64) as usize;
        amps[idx] = Complex64::new(1.0, 0.0);
        Ok(Self {
            q,
            n_max,
            amps,
            lo: idx,
            hi: idx,
            scratch: Vec::new(),
            origin: 0.0,
        })
    }

    /// Arbitrary amplitudes indexed from `n = -n_max`. Not normalised.
    pub fn from_amplitudes(q: f64, amps: Vec<Complex64>) -> Result<Self, QsimError> {
        check_q(q)?;
        if amps.len() < 3 || amps.len().is_multiple_of(2) {
            return Err(QsimError::LadderLength(amps.len()));
        }
        let n_max = amps.len() / 2;
        let mut s = Self {
            q,
            n_max,
            amps,
            lo: 0,
            hi: 0,
            scratch: Vec::new(),
            origin: 0.0,
        };
        s.refresh_support();
        Ok(s)
    }

    fn refresh_support(&mut self) {
        let zero = Complex64::new(0.0, 0.0);
        match self.amps.iter().position(|c| *c != zero) {
            Some(lo) => {
                self.lo = lo;
                self.hi = self.amps.iter().rposition(|c| *c != zero).unwrap_or(lo);
            }
            None => {
                self.lo = 0;
                self.hi = 0;
            }
        }
    }

    /// Measures energy from momentum `p` instead of zero. The dynamics are
    /// unchanged.
    pub fn with_energy_origin(mut self, p: f64) -> Self {
        self.origin = p;
        self
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Amplitude of ladder rung `n`, zero outside the ladder.
    pub fn amplitude(&self, n: i64) -> Complex64 {
        let idx = n + self.n_max as i64;
        if idx < 0 || idx as usize >= self.amps.len() {
            Complex64::new(0.0, 0.0)
        } else {
            self.amps[idx as usize]
        }
    }

    pub fn norm(&self) -> f64 {
        self.amps[self.lo..=self.hi]
            .iter()
            .map(|c| c.norm_sqr())
            .sum()
    }

    /// Calibrated mean energy `C <(n + q - origin)^2>`, origin zero by default.
    pub fn energy(&self) -> f64 {
        let mut acc = 0.0;
        for i in self.lo..=self.hi {
            let p = (i as i64 - self.n_max as i64) as f64 + self.q - self.origin;
            acc += p * p * self.amps[i].norm_sqr();
        }
        CALIBRATION * acc
    }

    /// Population of the two outermost rungs at each end of the ladder.
    pub fn boundary_occupancy(&self) -> f64 {
        let l = self.amps.len();
        [0, 1, l - 2, l - 1]
            .iter()
            .map(|&i| self.amps[i].norm_sqr())
            .sum()
    }

    /// Convolves the amplitudes with the kick taps `K_{-b..=b}`.
    pub(crate) fn convolve(&mut self, taps: &[Complex64]) -> Result<(), QsimError> {
        let band = taps.len() / 2;
        let len = self.amps.len();
        let new_lo = self.lo.saturating_sub(band);
        let new_hi = (self.hi + band).min(len - 1);
        self.scratch.clear();
        self.scratch.resize(len, Complex64::new(0.0, 0.0));
        for i in new_lo..=new_hi {
            let j_lo = self.lo.max(i.saturating_sub(band));
            let j_hi = self.hi.min(i + band);
            let mut acc = Complex64::new(0.0, 0.0);
            for j in j_lo..=j_hi {
                // tap index m = i - j, stored at m + band
                acc += taps[i + band - j] * self.amps[j];
            }
            self.scratch[i] = acc;
        }
        std::mem::swap(&mut self.amps, &mut self.scratch);
        self.lo = new_lo;
        self.hi = new_hi;
        self.trim_support();
        let occupancy = self.boundary_occupancy();
        if occupancy >= BOUNDARY_OCCUPANCY_LIMIT {
            return Err(QsimError::Truncation {
                n_max: self.n_max,
                occupancy,
                kick: None,
            });
        }
        Ok(())
    }

    /// Drops edge rungs whose population is far below double precision, so
    /// the band does not widen by the full kick reach every step.
    fn trim_support(&mut self) {
        while self.lo < self.hi && self.amps[self.lo].norm_sqr() < NEGLIGIBLE {
            self.amps[self.lo] = Complex64::new(0.0, 0.0);
            self.lo += 1;
        }
        while self.hi > self.lo && self.amps[self.hi].norm_sqr() < NEGLIGIBLE {
            self.amps[self.hi] = Complex64::new(0.0, 0.0);
            self.hi -= 1;
        }
    }

    /// Multiplies `c_n` by `exp(-i kbar (n + q)^2 / 2)`.
    pub fn apply_free(&mut self, kbar: f64) {
        let half = 0.5 * kbar;
        for i in self.lo..=self.hi {
            let p = (i as i64 - self.n_max as i64) as f64 + self.q;
            let (s, c) = (half * p * p).sin_cos();
            self.amps[i] *= Complex64::new(c, -s);
        }
    }
}

fn check_q(q: f64) -> Result<(), QsimError> {
    if q.is_finite() && (0.0..1.0).contains(&q) {
        Ok(())
    } else {
        Err(QsimError::Quasimomentum(q))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn plane_wave_basics() {
        let s = LadderState::plane_wave(0, 0.25, 64).unwrap();
        assert_eq!(s.amplitude(0), Complex64::new(1.0, 0.0));
        assert_eq!(s.norm(), 1.0);
        assert_eq!(s.amplitudes().len(), 129);
        assert_eq!(LadderState::plane_wave(0, 0.0, 8).unwrap().energy(), 0.0);
        assert_eq!(LadderState::plane_wave(3, 0.5, 8).unwrap().energy(), 24.5);
        let s = LadderState::plane_wave(-4, 0.3, 8).unwrap();
        assert!((s.energy() - 2.0 * 3.7 * 3.7).abs() < 1e-13);
    }

    #[test]
    fn plane_wave_rejects_bad_input() {
        assert!(matches!(
            LadderState::plane_wave(8, 0.0, 8),
            Err(QsimError::LadderIndex { .. })
        ));
        assert!(matches!(
            LadderState::plane_wave(-9, 0.0, 8),
            Err(QsimError::LadderIndex { .. })
        ));
        assert!(matches!(
            LadderState::plane_wave(0, 1.0, 8),
            Err(QsimError::Quasimomentum(_))
        ));
        assert!(matches!(
            LadderState::plane_wave(0, -0.1, 8),
            Err(QsimError::Quasimomentum(_))
        ));
        assert!(LadderState::from_amplitudes(0.0, vec![Complex64::new(1.0, 0.0); 4]).is_err());
    }

    fn spread_state(q: f64) -> LadderState {
        let amps = (0..41)
            .map(|i| {
                let x = (i as f64 - 20.0) / 4.0;
                Complex64::from_polar((-x * x).exp(), 0.3 * i as f64)
            })
            .collect::<Vec<_>>();
        let mut s = LadderState::from_amplitudes(q, amps).unwrap();
        let n = s.norm().sqrt();
        for c in s.amps.iter_mut() {
            *c /= n;
        }
        s
    }

    #[test]
    fn free_evolution_keeps_populations() {
        let mut s = spread_state(0.37);
        let before: Vec<f64> = s.amps.iter().map(|c| c.norm_sqr()).collect();
        let e = s.energy();
        s.apply_free(1.234);
        let after: Vec<f64> = s.amps.iter().map(|c| c.norm_sqr()).collect();
        for (a, b) in before.iter().zip(&after) {
            assert!((a - b).abs() <= 1e-15 * a.max(1e-300));
        }
        assert!(((s.energy() - e) / e).abs() < 1e-14);
    }

    #[test]
    fn free_evolution_at_resonant_kbar() {
        let s0 = spread_state(0.0);
        let mut s = s0.clone();
        s.apply_free(4.0 * PI);
        for (a, b) in s.amps.iter().zip(&s0.amps) {
            assert!((a - b).norm() < 1e-12);
        }
        let mut s = s0.clone();
        s.apply_free(2.0 * PI);
        for (i, (a, b)) in s.amps.iter().zip(&s0.amps).enumerate() {
            let n = i as i64 - 20;
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert!((a - b * sign).norm() < 1e-12);
        }
    }
}
