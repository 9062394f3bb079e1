use std::time::Instant;

use rayon::prelude::*;

use crate::analytic::energy_spread_averaged;
use crate::csim::{run_classical, ClassicalEnsemble};
use crate::qsim::run_ensemble;
use crate::units::ScaledParams;

use super::config::{Mode, SweepConfig};
use super::{HarnessError, Manifest, Method, SweepRow};

/// A grid point that could not be evaluated; the rest of the sweep still runs.
#[derive(Debug, Clone, PartialEq)]
pub struct PointFailure {
    pub kbar: f64,
    pub phi_d: f64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    /// Kicks-major, then kbar ascending, then `phi_d` in config order, then method.
    pub rows: Vec<SweepRow>,
    pub failures: Vec<PointFailure>,
    pub manifest: Manifest,
}

impl SweepResult {
    pub fn energies(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.energy).collect()
    }
}

/// Runs a validated sweep. Grid points are evaluated independently (in
/// parallel when `workers != 1`) and merged in grid order.
pub fn run_config(cfg: &SweepConfig) -> Result<SweepResult, HarnessError> {
    cfg.validate()?;
    let started = Instant::now();
    let grid = cfg.kbar.values();
    let tasks: Vec<(usize, f64)> = (0..cfg.phi_d.len())
        .flat_map(|p| grid.iter().map(move |&k| (p, k)))
        .collect();

    let evaluate = || -> Vec<Result<Vec<SweepRow>, String>> {
        tasks
            .par_iter()
            .map(|&(p, kbar)| evaluate_point(cfg, cfg.phi_d[p], kbar))
            .collect()
    };
    let outcomes = if cfg.workers == 0 {
        evaluate()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build()
            .map_err(|e| HarnessError::Pool(e.to_string()))?
            .install(evaluate)
    };

    let mut tagged = Vec::new();
    let mut failures = Vec::new();
    for (&(p, kbar), outcome) in tasks.iter().zip(outcomes) {
        match outcome {
            Ok(rows) => tagged.extend(rows.into_iter().map(|r| (p, r))),
            Err(message) => failures.push(PointFailure {
                kbar,
                phi_d: cfg.phi_d[p],
                message,
            }),
        }
    }
    tagged.sort_by(|(pa, a), (pb, b)| {
        a.kicks
            .cmp(&b.kicks)
            .then(a.kbar.total_cmp(&b.kbar))
            .then(pa.cmp(pb))
            .then(a.method.cmp(&b.method))
    });
    let rows: Vec<SweepRow> = tagged.into_iter().map(|(_, r)| r).collect();
    let manifest = Manifest::new(
        cfg.clone(),
        started.elapsed().as_secs_f64(),
        rows.len(),
        &failures,
    );
    Ok(SweepResult {
        rows,
        failures,
        manifest,
    })
}

fn evaluate_point(cfg: &SweepConfig, phi_d: f64, kbar: f64) -> Result<Vec<SweepRow>, String> {
    let row = |kicks, energy, method| SweepRow {
        kbar,
        phi_d,
        kicks,
        energy,
        method,
    };
    let analytic = |rows: &mut Vec<SweepRow>| -> Result<(), String> {
        for &n in &cfg.kicks {
            let e = energy_spread_averaged(n, phi_d, kbar, cfg.e0, &cfg.spread)
                .map_err(|e| e.to_string())?;
            let shift = if cfg.subtract_e0 { cfg.e0 } else { 0.0 };
            rows.push(row(n, e.value - shift, Method::Analytic));
        }
        Ok(())
    };
    let max_kicks = cfg.kicks.iter().copied().max().unwrap_or(1);
    let params = ScaledParams::new(kbar, phi_d, max_kicks).map_err(|e| e.to_string())?;
    let pick = |energies: &[f64], n: usize| {
        if cfg.subtract_e0 {
            energies[n] - energies[0]
        } else {
            energies[n]
        }
    };

    let mut rows = Vec::new();
    match cfg.mode {
        Mode::Analytic => analytic(&mut rows)?,
        Mode::Quantum => {
            let s = run_ensemble(&cfg.ensemble, &params, &cfg.spread).map_err(|e| e.to_string())?;
            for &n in &cfg.kicks {
                rows.push(row(n, pick(&s.energies, n), Method::Quantum));
            }
        }
        Mode::Classical => {
            let ens = ClassicalEnsemble::new(cfg.classical.particles, cfg.seed)
                .with_rho_init(cfg.classical.rho_init);
            let s = run_classical(&ens, &params);
            for &n in &cfg.kicks {
                rows.push(row(n, pick(&s.energies, n), Method::Classical));
            }
        }
        Mode::Compare => {
            analytic(&mut rows)?;
            let s = run_ensemble(&cfg.ensemble, &params, &cfg.spread).map_err(|e| e.to_string())?;
            let analytic_rows = rows.clone();
            for (a, &n) in analytic_rows.iter().zip(&cfg.kicks) {
                let q = pick(&s.energies, n);
                let gap = (a.energy - q).abs();
                rows.push(row(n, q, Method::Quantum));
                rows.push(row(n, gap, Method::GapAbs));
                rows.push(row(
                    n,
                    if a.energy != 0.0 {
                        gap / a.energy.abs()
                    } else {
                        f64::NAN
                    },
                    Method::GapRel,
                ));
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::KbarGrid;
    use std::f64::consts::PI;

    fn small(mode: Mode) -> SweepConfig {
        let mut cfg = SweepConfig {
            mode,
            ..SweepConfig::default()
        };
        cfg.kicks = vec![1, 3];
        cfg.kbar = KbarGrid::List(vec![0.7, 2.0, 2.0 * PI]);
        cfg.ensemble.n_q = 16;
        cfg.classical.particles = 2000;
        cfg
    }

    #[test]
    fn row_order_is_kicks_major_then_kbar() {
        let mut cfg = small(Mode::Analytic);
        cfg.phi_d = vec![5.0, 3.4];
        let r = run_config(&cfg).unwrap();
        assert_eq!(r.rows.len(), 2 * 3 * 2);
        let keys: Vec<(usize, f64, f64)> =
            r.rows.iter().map(|x| (x.kicks, x.kbar, x.phi_d)).collect();
        assert_eq!(keys[0], (1, 0.7, 5.0));
        assert_eq!(keys[1], (1, 0.7, 3.4));
        assert_eq!(keys[2], (1, 2.0, 5.0));
        assert_eq!(keys[6], (3, 0.7, 5.0));
    }

    #[test]
    fn every_mode_runs() {
        for mode in [
            Mode::Analytic,
            Mode::Quantum,
            Mode::Classical,
            Mode::Compare,
        ] {
            let r = run_config(&small(mode)).unwrap();
            let per_point = if mode == Mode::Compare { 4 } else { 1 };
            assert_eq!(r.rows.len(), 2 * 3 * per_point, "{mode}");
            assert!(r.failures.is_empty());
            for row in r.rows.iter().filter(|x| {
                x.kicks == 1 && x.method != Method::GapAbs && x.method != Method::GapRel
            }) {
                if mode != Mode::Classical {
                    // first kick adds phi_d^2 (1 + delta^2 / 3) after spread averaging
                    let want = 4.8f64.powi(2) * (1.0 + 0.01 / 3.0);
                    assert!((row.energy - want).abs() < 1e-8 * want, "{mode} {row:?}");
                }
            }
        }
    }

    #[test]
    fn truncation_failures_do_not_abort_the_sweep() {
        let mut cfg = small(Mode::Quantum);
        cfg.kicks = vec![4];
        cfg.spread.relative_width = 0.0;
        cfg.ensemble.n_max = Some(14);
        cfg.phi_d = vec![0.5, 6.0];
        let r = run_config(&cfg).unwrap();
        assert_eq!(r.rows.len(), 3);
        assert_eq!(r.failures.len(), 3);
        assert!(r
            .failures
            .iter()
            .all(|f| f.phi_d == 6.0 && f.message.contains("n_max")));
    }

    #[test]
    fn invalid_config_never_runs() {
        let mut cfg = small(Mode::Analytic);
        cfg.kicks = vec![7];
        assert!(matches!(
            run_config(&cfg),
            Err(HarnessError::Invalid { .. })
        ));
    }
}
