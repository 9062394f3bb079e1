use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::qsim::{InitialDistribution, QuasiSampling, BOUNDARY_OCCUPANCY_LIMIT, CALIBRATION};

use super::config::{Mode, SweepConfig};
use super::run::PointFailure;
use super::HarnessError;

/// Everything needed to reproduce a sweep. The text form starts with the
/// resolved config, so [`SweepConfig::from_manifest`] can replay it.
#[derive(Debug, Clone, PartialEq)]
pub struct Manifest {
    pub config: SweepConfig,
    pub tool_version: String,
    pub wall_time_s: f64,
    pub rows: usize,
    pub failures: Vec<String>,
}

impl Manifest {
    pub fn new(
        config: SweepConfig,
        wall_time_s: f64,
        rows: usize,
        failures: &[PointFailure],
    ) -> Self {
        Self {
            config,
            tool_version: format!("kickrotor {}", env!("CARGO_PKG_VERSION")),
            wall_time_s,
            rows,
            failures: failures
                .iter()
                .map(|f| format!("kbar={:?} phi_d={:?}: {}", f.kbar, f.phi_d, f.message))
                .collect(),
        }
    }

    /// How closely a replay of this run must agree with it.
    pub fn replay_contract(&self) -> &'static str {
        let random = match self.config.mode {
            Mode::Classical => true,
            Mode::Quantum | Mode::Compare => self.config.ensemble.sampling == QuasiSampling::Random,
            Mode::Analytic => false,
        };
        if random {
            "bit-identical (fixed-seed random sampling)"
        } else {
            "energies within 1e-12 relative (deterministic quadrature)"
        }
    }

    pub fn to_text(&self) -> String {
        let cfg = &self.config;
        let mut s = String::from("# kickrotor run manifest\n");
        s.push_str(&cfg.to_text());
        let _ = writeln!(s, "manifest.tool = {}", self.tool_version);
        let _ = writeln!(s, "manifest.wall_time_s = {:.6}", self.wall_time_s);
        let _ = writeln!(s, "manifest.calibration = {CALIBRATION:?}");
        let _ = writeln!(
            s,
            "manifest.energy = {} in recoil units, C * <(n + q)^2> with C = {CALIBRATION:?}",
            if cfg.subtract_e0 { "E - E(0)" } else { "E" }
        );
        let _ = writeln!(
            s,
            "manifest.spread = {} over phi_d (1 +/- {:?}), {} nodes, {}",
            cfg.spread.distribution,
            cfg.spread.relative_width,
            cfg.spread.quadrature_points,
            cfg.spread.rule
        );
        let initial = match cfg.ensemble.initial {
            InitialDistribution::Cold => "n0 = 0, q = u".to_string(),
            InitialDistribution::DiscreteGaussian { sigma } => {
                format!("q = u, n0 weighted by exp(-(n0 + q)^2 / (2 * {sigma:?}^2))")
            }
            InitialDistribution::BroadThermal => {
                "p0 = (2 pi / kbar)(u - 1/2), energies measured from p0".to_string()
            }
        };
        let _ = writeln!(
            s,
            "manifest.ensemble = {} samples u ({}), {}",
            cfg.ensemble.n_q, cfg.ensemble.sampling, initial
        );
        let _ = writeln!(
            s,
            "manifest.kick = exp(-i phi_d cos(phi)), banded Bessel convolution"
        );
        let _ = writeln!(
            s,
            "manifest.map = kick then drift; energy recorded after each kick"
        );
        let _ = writeln!(
            s,
            "manifest.tolerance.boundary_occupancy = {BOUNDARY_OCCUPANCY_LIMIT:e}"
        );
        let _ = writeln!(s, "manifest.contract.replay = {}", self.replay_contract());
        let _ = writeln!(
            s,
            "manifest.contract.workers = independent of worker count (fixed-order reduction), <= 1e-13 relative"
        );
        let _ = writeln!(s, "manifest.rows = {}", self.rows);
        let _ = writeln!(s, "manifest.failures = {}", self.failures.len());
        for (i, f) in self.failures.iter().enumerate() {
            let _ = writeln!(s, "manifest.failure.{i} = {f}");
        }
        s
    }

    pub fn write(&self, path: &Path) -> Result<(), HarnessError> {
        fs::write(path, self.to_text()).map_err(|source| HarnessError::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}
