//! Classical standard map, the `kbar -> 0` limit at fixed `kappa`.
//!
//! Each step kicks then drifts for one scaled period:
//! `rho' = rho + kappa sin(phi)`, `phi' = (phi + rho') mod 2 pi`.
//! Energies use the quantum calibration, `E = 2 <(rho / kbar)^2>`, so the
//! first kick from `rho = 0` adds `phi_d^2` on average.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::qsim::{EnergySeries, CALIBRATION};
use crate::units::ScaledParams;

const CHUNK: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalParticle {
    /// Angle in `[0, 2 pi)`.
    pub phi: f64,
    /// Scaled momentum.
    pub rho: f64,
}

pub fn standard_map_step(p: ClassicalParticle, kappa: f64) -> ClassicalParticle {
    let rho = p.rho + kappa * p.phi.sin();
    ClassicalParticle {
        phi: (p.phi + rho).rem_euclid(TAU),
        rho,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RhoInit {
    Zero,
    /// Uniform on `[-pi, pi)`, one full period of the map in `rho`.
    FullPeriod,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalEnsemble {
    pub particles: usize,
    pub rho_init: RhoInit,
    pub seed: u64,
}

impl ClassicalEnsemble {
    pub fn new(particles: usize, seed: u64) -> Self {
        Self {
            particles: particles.max(1),
            rho_init: RhoInit::Zero,
            seed,
        }
    }

    pub fn with_rho_init(mut self, rho_init: RhoInit) -> Self {
        self.rho_init = rho_init;
        self
    }

    /// Initial condition of particle `i`, drawn from its own stream.
    pub fn particle(&self, i: usize) -> ClassicalParticle {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(i as u64);
        let phi = rng.gen::<f64>() * TAU;
        let rho = match self.rho_init {
            RhoInit::Zero => 0.0,
            RhoInit::FullPeriod => PI * (2.0 * rng.gen::<f64>() - 1.0),
        };
        ClassicalParticle { phi, rho }
    }
}

/// Iterates the map for `params.kicks()` steps at `kappa = kbar * phi_d` and
/// returns mean calibrated energies with standard errors of the gain.
pub fn run_classical(ensemble: &ClassicalEnsemble, params: &ScaledParams) -> EnergySeries {
    let kicks = params.kicks();
    let kappa = params.kappa();
    let scale = CALIBRATION / (params.kbar() * params.kbar());
    let count = ensemble.particles.max(1);

    // Per chunk: sums of E and of (E - E0)^2, summed serially inside the
    // chunk and combined in chunk order afterwards.
    let chunks: Vec<(Vec<f64>, Vec<f64>, Vec<f64>)> = (0..count.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut sum = vec![0.0; kicks + 1];
            let mut gain = vec![0.0; kicks + 1];
            let mut gain_sq = vec![0.0; kicks + 1];
            for i in c * CHUNK..((c + 1) * CHUNK).min(count) {
                let mut p = ensemble.particle(i);
                let e0 = scale * p.rho * p.rho;
                sum[0] += e0;
                for k in 1..=kicks {
                    p = standard_map_step(p, kappa);
                    let e = scale * p.rho * p.rho;
                    sum[k] += e;
                    gain[k] += e - e0;
                    gain_sq[k] += (e - e0) * (e - e0);
                }
            }
            (sum, gain, gain_sq)
        })
        .collect();

    let mut sum = vec![0.0; kicks + 1];
    let mut gain = vec![0.0; kicks + 1];
    let mut gain_sq = vec![0.0; kicks + 1];
    for (s, g, g2) in chunks {
        for k in 0..=kicks {
            sum[k] += s[k];
            gain[k] += g[k];
            gain_sq[k] += g2[k];
        }
    }
    let n = count as f64;
    let energies = sum.iter().map(|s| s / n).collect();
    let std_errors = (0..=kicks)
        .map(|k| {
            if count < 2 {
                return 0.0;
            }
            let mean = gain[k] / n;
            let var = ((gain_sq[k] / n - mean * mean) * n / (n - 1.0)).max(0.0);
            (var / n).sqrt()
        })
        .collect();

    EnergySeries {
        params: *params,
        energies,
        std_errors: Some(std_errors),
        norm_drift: None,
        ensemble: None,
        spread: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_arithmetic() {
        let p = standard_map_step(
            ClassicalParticle {
                phi: PI / 2.0,
                rho: 0.0,
            },
            5.0,
        );
        assert_eq!(p.rho, 5.0);
        assert_eq!(p.phi, (PI / 2.0 + 5.0).rem_euclid(TAU));

        let p = standard_map_step(ClassicalParticle { phi: 1.0, rho: 9.0 }, 0.0);
        assert_eq!(p.rho, 9.0);
        assert_eq!(p.phi, 10.0f64.rem_euclid(TAU));

        let p = standard_map_step(
            ClassicalParticle {
                phi: 0.0,
                rho: -3.0,
            },
            7.0,
        );
        assert_eq!(p.rho, -3.0);
        let p = standard_map_step(ClassicalParticle { phi: PI, rho: 2.0 }, 7.0);
        assert!((p.rho - 2.0).abs() < 1e-14);
    }

    #[test]
    fn angle_stays_reduced() {
        let mut p = ClassicalParticle { phi: 0.3, rho: 0.0 };
        for _ in 0..200 {
            p = standard_map_step(p, 12.0);
            assert!((0.0..TAU).contains(&p.phi));
        }
    }

    #[test]
    fn no_kick_constant_series() {
        let e = ClassicalEnsemble::new(500, 1).with_rho_init(RhoInit::FullPeriod);
        let s = run_classical(&e, &ScaledParams::new(1.0, 0.0, 4).unwrap());
        assert!(s.energies.iter().all(|&x| x == s.energies[0]));
    }

    #[test]
    fn particles_are_reproducible() {
        let e = ClassicalEnsemble::new(10, 99);
        assert_eq!(e.particle(3), e.particle(3));
        assert_ne!(e.particle(3), e.particle(4));
        assert!(e.particle(7).rho == 0.0);
    }

    #[test]
    fn momentum_reversal() {
        let e = ClassicalEnsemble::new(64, 5).with_rho_init(RhoInit::FullPeriod);
        for i in 0..64 {
            let mut a = e.particle(i);
            let mut b = ClassicalParticle {
                phi: (TAU - a.phi).rem_euclid(TAU),
                rho: -a.rho,
            };
            for _ in 0..3 {
                a = standard_map_step(a, 2.5);
                b = standard_map_step(b, 2.5);
                assert!((a.rho + b.rho).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let e = ClassicalEnsemble::new(5000, 11).with_rho_init(RhoInit::FullPeriod);
        let p = ScaledParams::new(0.5, 8.0, 5).unwrap();
        let par = run_classical(&e, &p);
        let serial = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| run_classical(&e, &p));
        assert_eq!(par, serial);
    }
}
