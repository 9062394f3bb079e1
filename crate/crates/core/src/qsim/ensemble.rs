use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analytic::IntensitySpread;
use crate::units::ScaledParams;

use super::{auto_n_max, evolve, EnergySeries, KickKernel, LadderState, QsimError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuasiSampling {
    /// `u_i = (i + 1/2) / n_q`.
    Midpoint,
    /// `u_i` uniform on `[0, 1)`, drawn from stream `i` of the seeded generator.
    Random,
}

/// Initial momentum distribution of the cloud, as an incoherent mixture of
/// momentum eigenstates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialDistribution {
    /// Every sample starts on rung 0 with quasimomentum `q = u`.
    Cold,
    /// Quasimomentum `q = u` with rungs `n0` weighted by
    /// `exp(-(n0 + q)^2 / (2 sigma^2))`; width in two-photon recoils.
    DiscreteGaussian { sigma: f64 },
    /// A cloud much wider than `2 pi / kbar`. A trajectory only feels its
    /// initial momentum `p0` through `kbar * p0 mod 2 pi`, sampled here by
    /// `p0 = (2 pi / kbar)(u - 1/2)`. In a wide cloud the momenta sharing
    /// one phase average to zero, so the cross term `2 p0 <p - p0>` drops
    /// out and each member reports `C <(p - p0)^2>`: energies are measured
    /// above the cloud's own energy, which is not represented.
    BroadThermal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleSpec {
    pub n_q: usize,
    pub sampling: QuasiSampling,
    pub initial: InitialDistribution,
    pub seed: u64,
    /// Ladder half-width; sized automatically when `None`.
    pub n_max: Option<usize>,
}

impl EnsembleSpec {
    pub fn midpoint(n_q: usize, initial: InitialDistribution) -> Self {
        Self {
            n_q,
            sampling: QuasiSampling::Midpoint,
            initial,
            seed: 0,
            n_max: None,
        }
    }

    pub fn validate(&self) -> Result<(), QsimError> {
        if self.n_q == 0 {
            return Err(QsimError::NoSamples);
        }
        if let InitialDistribution::DiscreteGaussian { sigma } = self.initial {
            if !(sigma.is_finite() && sigma >= 0.0) {
                return Err(QsimError::Width(sigma));
            }
        }
        Ok(())
    }

    /// Position of sample `i` in `[0, 1)`.
    pub fn sample(&self, i: usize) -> f64 {
        match self.sampling {
            QuasiSampling::Midpoint => (i as f64 + 0.5) / self.n_q as f64,
            QuasiSampling::Random => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                rng.set_stream(i as u64);
                rng.gen::<f64>()
            }
        }
    }

    /// `(n0, q, weight)` components of sample `u`; weights sum to 1.
    fn components(&self, u: f64, kbar: f64) -> Vec<(i64, f64, f64)> {
        match self.initial {
            InitialDistribution::Cold => vec![(0, u, 1.0)],
            InitialDistribution::DiscreteGaussian { sigma: 0.0 } => vec![(0, u, 1.0)],
            InitialDistribution::DiscreteGaussian { sigma } => {
                let reach = (6.0 * sigma).ceil() as i64 + 1;
                let mut out: Vec<(i64, f64, f64)> = (-reach..=reach)
                    .map(|n0| {
                        let p = n0 as f64 + u;
                        (n0, u, (-p * p / (2.0 * sigma * sigma)).exp())
                    })
                    .collect();
                let total: f64 = out.iter().map(|c| c.2).sum();
                for c in out.iter_mut() {
                    c.2 /= total;
                }
                out
            }
            InitialDistribution::BroadThermal => {
                let p0 = 2.0 * PI / kbar * (u - 0.5);
                let n0 = p0.floor();
                let mut q = p0 - n0;
                let mut n0 = n0 as i64;
                if q >= 1.0 {
                    q = 0.0;
                    n0 += 1;
                }
                vec![(n0, q, 1.0)]
            }
        }
    }
}

struct Member {
    kernel: usize,
    n0: i64,
    q: f64,
    weight: f64,
    origin: f64,
}

/// Incoherent average of trajectories over quasimomentum samples, the
/// initial momentum distribution and the kick-strength spread.
///
/// Members are evaluated in parallel and summed in a fixed order, so the
/// result does not depend on the thread count.
pub fn run_ensemble(
    spec: &EnsembleSpec,
    params: &ScaledParams,
    spread: &IntensitySpread,
) -> Result<EnergySeries, QsimError> {
    spec.validate()?;
    let nodes = spread.nodes(params.phi_d())?;
    let kernels = nodes
        .iter()
        .map(|&(phi, _)| KickKernel::new(phi))
        .collect::<Result<Vec<_>, _>>()?;

    let kbar = params.kbar();
    let mut members = Vec::new();
    for i in 0..spec.n_q {
        let u = spec.sample(i);
        let comps = spec.components(u, kbar);
        for (k, &(_, w_spread)) in nodes.iter().enumerate() {
            for &(n0, q, w) in &comps {
                let origin = match spec.initial {
                    InitialDistribution::BroadThermal => n0 as f64 + q,
                    _ => 0.0,
                };
                members.push(Member {
                    kernel: k,
                    n0,
                    q,
                    weight: w_spread * w / spec.n_q as f64,
                    origin,
                });
            }
        }
    }

    let n_max = match spec.n_max {
        Some(n) => n,
        None => {
            let phi_max = nodes.iter().map(|n| n.0).fold(0.0, f64::max);
            let n0_max = members
                .iter()
                .map(|m| m.n0.unsigned_abs())
                .max()
                .unwrap_or(0);
            auto_n_max(params.kicks(), phi_max, n0_max)
        }
    };

    let runs: Vec<Result<(Vec<f64>, f64), QsimError>> = members
        .par_iter()
        .map(|m| {
            let state = LadderState::plane_wave(m.n0, m.q, n_max)?.with_energy_origin(m.origin);
            evolve(state, &kernels[m.kernel], kbar, params.kicks())
        })
        .collect();

    let mut energies = vec![0.0; params.kicks() + 1];
    let mut drift: f64 = 0.0;
    for (m, run) in members.iter().zip(runs) {
        let (e, d) = run?;
        for (acc, v) in energies.iter_mut().zip(&e) {
            *acc += m.weight * v;
        }
        drift = drift.max(d);
    }

    Ok(EnergySeries {
        params: *params,
        energies,
        std_errors: None,
        norm_drift: Some(drift),
        ensemble: Some(*spec),
        spread: Some(*spread),
    })
}

impl fmt::Display for QuasiSampling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QuasiSampling::Midpoint => "midpoint",
            QuasiSampling::Random => "random",
        })
    }
}

impl FromStr for QuasiSampling {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "midpoint" => Ok(Self::Midpoint),
            "random" => Ok(Self::Random),
            other => Err(format!(
                "unknown sampling `{other}` (expected midpoint or random)"
            )),
        }
    }
}

impl InitialDistribution {
    pub fn name(&self) -> &'static str {
        match self {
            InitialDistribution::Cold => "cold",
            InitialDistribution::DiscreteGaussian { .. } => "gaussian",
            InitialDistribution::BroadThermal => "broad",
        }
    }
}
