//! Sweep configuration in a line-oriented `key = value` format.
//!
//! ```text
//! # comment
//! mode = analytic            # analytic | quantum | classical | compare
//! kicks = 2, 3, 4, 5         # list; `a..b` is an inclusive range
//! phi_d = 4.8
//! kbar.min = 0.05            # numbers accept a `pi` suffix: 2.4pi, pi
//! kbar.max = 2.4pi
//! kbar.points = 256
//! # or: kbar.values = 0.5, 1.0, 1.5
//!
//! [spread]                   # a section header prefixes the keys below it
//! width = 0.1
//! points = 51
//! ```
//!
//! Keys are `mode`, `kicks`, `phi_d`, `e0`, `subtract_e0`, `seed`,
//! `workers`, `kbar.{min,max,points,values}`,
//! `spread.{width,points,distribution,rule}`,
//! `ensemble.{n_q,sampling,initial,sigma,n_max}`,
//! `classical.{particles,rho_init}` and `output.{csv,svg,manifest}`.
//! Unknown or repeated keys are errors.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::{self, Write as _};
use std::path::PathBuf;
use std::str::FromStr;

use crate::analytic::{
    IntensitySpread, QuadratureRule, SpreadDistribution, MAX_ANALYTIC_KICKS, MAX_ARG,
};
use crate::csim::RhoInit;
use crate::qsim::{EnsembleSpec, InitialDistribution, QuasiSampling};

use super::HarnessError;

/// Largest kick count accepted by the simulation modes.
pub const MAX_KICKS: usize = 80;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Analytic,
    Quantum,
    Classical,
    Compare,
}

#[derive(Debug, Clone, PartialEq)]
pub enum KbarGrid {
    /// `points` values evenly spaced from `min` to `max` inclusive.
    Range {
        min: f64,
        max: f64,
        points: usize,
    },
    List(Vec<f64>),
}

impl KbarGrid {
    pub fn values(&self) -> Vec<f64> {
        match self {
            KbarGrid::List(v) => v.clone(),
            KbarGrid::Range { min, points: 1, .. } => vec![*min],
            KbarGrid::Range { min, max, points } => {
                let step = (max - min) / (*points as f64 - 1.0);
                (0..*points)
                    .map(|i| {
                        if i + 1 == *points {
                            *max
                        } else {
                            min + step * i as f64
                        }
                    })
                    .collect()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalSettings {
    pub particles: usize,
    pub rho_init: RhoInit,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct OutputPaths {
    pub csv: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub mode: Mode,
    pub kicks: Vec<usize>,
    pub phi_d: Vec<f64>,
    pub kbar: KbarGrid,
    pub spread: IntensitySpread,
    pub ensemble: EnsembleSpec,
    pub classical: ClassicalSettings,
    pub e0: f64,
    /// Report `E - E(0)` instead of `E`.
    pub subtract_e0: bool,
    pub seed: u64,
    /// Worker threads; 0 uses the global pool.
    pub workers: usize,
    pub output: OutputPaths,
}

impl Default for SweepConfig {
    /// Two to five kicks at `phi_d = 4.8` over `kbar` in `[0.05, 2.4 pi]`.
    fn default() -> Self {
        Self {
            mode: Mode::Analytic,
            kicks: vec![2, 3, 4, 5],
            phi_d: vec![4.8],
            kbar: KbarGrid::Range {
                min: 0.05,
                max: 2.4 * PI,
                points: 256,
            },
            spread: IntensitySpread::default(),
            ensemble: EnsembleSpec {
                n_q: 512,
                sampling: QuasiSampling::Midpoint,
                initial: InitialDistribution::BroadThermal,
                seed: 0,
                n_max: None,
            },
            classical: ClassicalSettings {
                particles: 100_000,
                rho_init: RhoInit::FullPeriod,
            },
            e0: 0.0,
            subtract_e0: true,
            seed: 0,
            workers: 0,
            output: OutputPaths::default(),
        }
    }
}

fn invalid(field: &str, constraint: impl Into<String>) -> HarnessError {
    HarnessError::Invalid {
        field: field.to_string(),
        constraint: constraint.into(),
    }
}

impl SweepConfig {
    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        let mut cfg = Self::default();
        cfg.apply_text(text, false)?;
        Ok(cfg)
    }

    /// Reads the resolved configuration back out of a run manifest.
    pub fn from_manifest(text: &str) -> Result<Self, HarnessError> {
        let mut cfg = Self::default();
        cfg.apply_text(text, true)?;
        Ok(cfg)
    }

    /// Applies `key = value` lines on top of the current values.
    pub fn apply_text(&mut self, text: &str, skip_manifest_keys: bool) -> Result<(), HarnessError> {
        let mut seen = BTreeMap::new();
        let mut section = String::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest.strip_suffix(']').ok_or_else(|| HarnessError::Parse {
                    line: line_no,
                    message: format!("unterminated section header `{line}`"),
                })?;
                section = name.trim().to_string();
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| HarnessError::Parse {
                line: line_no,
                message: format!("expected `key = value`, got `{line}`"),
            })?;
            let key = key.trim();
            let key = if section.is_empty() {
                key.to_string()
            } else {
                format!("{section}.{key}")
            };
            if skip_manifest_keys && key.starts_with("manifest.") {
                continue;
            }
            if let Some(prev) = seen.insert(key.clone(), line_no) {
                return Err(HarnessError::Parse {
                    line: line_no,
                    message: format!("key `{key}` already set on line {prev}"),
                });
            }
            self.set(&key, value.trim()).map_err(|e| match e {
                HarnessError::Invalid { field, constraint } => HarnessError::Parse {
                    line: line_no,
                    message: format!("{field}: {constraint}"),
                },
                other => other,
            })?;
        }
        Ok(())
    }

    /// Sets one key. Used by the parser and by command-line overrides.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), HarnessError> {
        match key {
            "mode" => self.mode = parse_enum(key, value)?,
            "kicks" => self.kicks = parse_kicks(key, value)?,
            "phi_d" => self.phi_d = parse_list(key, value)?,
            "e0" => self.e0 = parse_num(key, value)?,
            "subtract_e0" => self.subtract_e0 = parse_bool(key, value)?,
            "seed" => {
                self.seed = parse_int(key, value)?;
                self.ensemble.seed = self.seed;
            }
            "workers" => self.workers = parse_int(key, value)?,
            "kbar.values" => self.kbar = KbarGrid::List(parse_list(key, value)?),
            "kbar.min" | "kbar.max" | "kbar.points" => {
                let (mut min, mut max, mut points) = match self.kbar {
                    KbarGrid::Range { min, max, points } => (min, max, points),
                    KbarGrid::List(_) => (0.05, 2.4 * PI, 256),
                };
                match key {
                    "kbar.min" => min = parse_num(key, value)?,
                    "kbar.max" => max = parse_num(key, value)?,
                    _ => points = parse_int(key, value)?,
                }
                self.kbar = KbarGrid::Range { min, max, points };
            }
            "spread.width" => self.spread.relative_width = parse_num(key, value)?,
            "spread.points" => self.spread.quadrature_points = parse_int(key, value)?,
            "spread.distribution" => {
                self.spread.distribution =
                    SpreadDistribution::from_str(value).map_err(|m| invalid(key, m))?
            }
            "spread.rule" => {
                self.spread.rule = QuadratureRule::from_str(value).map_err(|m| invalid(key, m))?
            }
            "ensemble.n_q" => self.ensemble.n_q = parse_int(key, value)?,
            "ensemble.sampling" => {
                self.ensemble.sampling =
                    QuasiSampling::from_str(value).map_err(|m| invalid(key, m))?
            }
            "ensemble.initial" => {
                let sigma = match self.ensemble.initial {
                    InitialDistribution::DiscreteGaussian { sigma } => sigma,
                    _ => 0.0,
                };
                self.ensemble.initial = match value {
                    "cold" => InitialDistribution::Cold,
                    "gaussian" => InitialDistribution::DiscreteGaussian { sigma },
                    "broad" => InitialDistribution::BroadThermal,
                    other => {
                        return Err(invalid(
                            key,
                            format!("unknown initial distribution `{other}` (expected cold, gaussian or broad)"),
                        ))
                    }
                };
            }
            "ensemble.sigma" => {
                let sigma = parse_num(key, value)?;
                if let InitialDistribution::DiscreteGaussian { sigma: s } =
                    &mut self.ensemble.initial
                {
                    *s = sigma;
                } else {
                    self.ensemble.initial = InitialDistribution::DiscreteGaussian { sigma };
                }
            }
            "ensemble.n_max" => {
                self.ensemble.n_max = if value == "auto" {
                    None
                } else {
                    Some(parse_int(key, value)?)
                }
            }
            "classical.particles" => self.classical.particles = parse_int(key, value)?,
            "classical.rho_init" => {
                self.classical.rho_init = match value {
                    "zero" => RhoInit::Zero,
                    "full-period" => RhoInit::FullPeriod,
                    other => {
                        return Err(invalid(
                            key,
                            format!("unknown rho_init `{other}` (expected zero or full-period)"),
                        ))
                    }
                }
            }
            // an empty path clears the output
            "output.csv" => self.output.csv = optional_path(value),
            "output.svg" => self.output.svg = optional_path(value),
            "output.manifest" => self.output.manifest = optional_path(value),
            other => return Err(invalid(other, "unknown key")),
        }
        Ok(())
    }

    /// Checks every constraint; a config that passes can be run.
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.kicks.is_empty() {
            return Err(invalid("kicks", "at least one kick count"));
        }
        let limit = match self.mode {
            Mode::Analytic | Mode::Compare => MAX_ANALYTIC_KICKS,
            Mode::Quantum | Mode::Classical => MAX_KICKS,
        };
        if let Some(&k) = self.kicks.iter().find(|&&k| k == 0 || k > limit) {
            return Err(invalid(
                "kicks",
                format!("{k} is outside 1..={limit} for {} mode", self.mode),
            ));
        }
        if self.phi_d.is_empty() {
            return Err(invalid("phi_d", "at least one value"));
        }
        if let Some(p) = self.phi_d.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
            return Err(invalid(
                "phi_d",
                format!("{p} must be non-negative and finite"),
            ));
        }
        match &self.kbar {
            KbarGrid::Range { min, max, points } => {
                if *points == 0 {
                    return Err(invalid("kbar.points", "must be at least 1"));
                }
                if !(min.is_finite() && *min > 0.0) {
                    return Err(invalid(
                        "kbar.min",
                        format!("{min} must be positive and finite"),
                    ));
                }
                if !max.is_finite() || (*points > 1 && max <= min) {
                    return Err(invalid(
                        "kbar.max",
                        format!("{max} must exceed kbar.min = {min}"),
                    ));
                }
            }
            KbarGrid::List(v) => {
                if v.is_empty() {
                    return Err(invalid("kbar.values", "at least one value"));
                }
                if let Some(k) = v.iter().find(|k| !(k.is_finite() && **k > 0.0)) {
                    return Err(invalid(
                        "kbar.values",
                        format!("{k} must be positive and finite"),
                    ));
                }
                if let Some(i) = v.windows(2).position(|w| w[1] <= w[0]) {
                    return Err(invalid(
                        "kbar.values",
                        format!("not strictly increasing at index {}", i + 1),
                    ));
                }
            }
        }
        if !(self.spread.relative_width.is_finite()
            && (0.0..1.0).contains(&self.spread.relative_width))
        {
            return Err(invalid("spread.width", "must lie in [0, 1)"));
        }
        if self.spread.quadrature_points == 0 {
            return Err(invalid("spread.points", "must be at least 1"));
        }
        if matches!(self.mode, Mode::Analytic | Mode::Compare) {
            let top =
                self.phi_d.iter().cloned().fold(0.0, f64::max) * (1.0 + self.spread.relative_width);
            if 2.0 * top > MAX_ARG {
                return Err(invalid(
                    "phi_d",
                    format!(
                        "2 phi_d (1 + spread.width) = {} exceeds the Bessel range {MAX_ARG}",
                        2.0 * top
                    ),
                ));
            }
        }
        if self.ensemble.n_q == 0 {
            return Err(invalid("ensemble.n_q", "must be at least 1"));
        }
        if let InitialDistribution::DiscreteGaussian { sigma } = self.ensemble.initial {
            if !(sigma.is_finite() && sigma >= 0.0) {
                return Err(invalid("ensemble.sigma", "must be non-negative and finite"));
            }
        }
        if self.ensemble.n_max == Some(0) {
            return Err(invalid("ensemble.n_max", "must be at least 1 or `auto`"));
        }
        if self.classical.particles == 0 {
            return Err(invalid("classical.particles", "must be at least 1"));
        }
        if !(self.e0.is_finite() && self.e0 >= 0.0) {
            return Err(invalid("e0", "must be non-negative and finite"));
        }
        Ok(())
    }

    /// Canonical text form; parses back to an identical config.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let list = |v: &[f64]| {
            v.iter()
                .map(|x| format!("{x:?}"))
                .collect::<Vec<_>>()
                .join(", ")
        };
        let _ = writeln!(s, "mode = {}", self.mode);
        let kicks = self
            .kicks
            .iter()
            .map(|k| k.to_string())
            .collect::<Vec<_>>()
            .join(", ");
        let _ = writeln!(s, "kicks = {kicks}");
        let _ = writeln!(s, "phi_d = {}", list(&self.phi_d));
        match &self.kbar {
            KbarGrid::Range { min, max, points } => {
                let _ = writeln!(s, "kbar.min = {min:?}");
                let _ = writeln!(s, "kbar.max = {max:?}");
                let _ = writeln!(s, "kbar.points = {points}");
            }
            KbarGrid::List(v) => {
                let _ = writeln!(s, "kbar.values = {}", list(v));
            }
        }
        let _ = writeln!(s, "spread.width = {:?}", self.spread.relative_width);
        let _ = writeln!(s, "spread.points = {}", self.spread.quadrature_points);
        let _ = writeln!(s, "spread.distribution = {}", self.spread.distribution);
        let _ = writeln!(s, "spread.rule = {}", self.spread.rule);
        let _ = writeln!(s, "ensemble.n_q = {}", self.ensemble.n_q);
        let _ = writeln!(s, "ensemble.sampling = {}", self.ensemble.sampling);
        let _ = writeln!(s, "ensemble.initial = {}", self.ensemble.initial.name());
        if let InitialDistribution::DiscreteGaussian { sigma } = self.ensemble.initial {
            let _ = writeln!(s, "ensemble.sigma = {sigma:?}");
        }
        match self.ensemble.n_max {
            Some(n) => {
                let _ = writeln!(s, "ensemble.n_max = {n}");
            }
            None => {
                let _ = writeln!(s, "ensemble.n_max = auto");
            }
        }
        let _ = writeln!(s, "classical.particles = {}", self.classical.particles);
        let rho = match self.classical.rho_init {
            RhoInit::Zero => "zero",
            RhoInit::FullPeriod => "full-period",
        };
        let _ = writeln!(s, "classical.rho_init = {rho}");
        let _ = writeln!(s, "e0 = {:?}", self.e0);
        let _ = writeln!(s, "subtract_e0 = {}", self.subtract_e0);
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "workers = {}", self.workers);
        for (key, path) in [
            ("output.csv", &self.output.csv),
            ("output.svg", &self.output.svg),
            ("output.manifest", &self.output.manifest),
        ] {
            if let Some(p) = path {
                let _ = writeln!(s, "{key} = {}", p.display());
            }
        }
        s
    }
}

fn parse_num(key: &str, value: &str) -> Result<f64, HarnessError> {
    let v = value.trim();
    let (body, times_pi) = match v.strip_suffix("pi") {
        Some(b) => (b.trim(), true),
        None => (v, false),
    };
    let x = if times_pi && body.is_empty() {
        1.0
    } else {
        f64::from_str(body).map_err(|_| invalid(key, format!("`{value}` is not a number")))?
    };
    Ok(if times_pi { x * PI } else { x })
}

fn parse_int<T: FromStr>(key: &str, value: &str) -> Result<T, HarnessError> {
    value
        .trim()
        .parse()
        .map_err(|_| invalid(key, format!("`{value}` is not a non-negative integer")))
}

fn optional_path(value: &str) -> Option<PathBuf> {
    (!value.is_empty()).then(|| PathBuf::from(value))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, HarnessError> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(invalid(key, format!("`{other}` is not true or false"))),
    }
}

fn parse_list(key: &str, value: &str) -> Result<Vec<f64>, HarnessError> {
    value.split(',').map(|v| parse_num(key, v)).collect()
}

fn parse_kicks(key: &str, value: &str) -> Result<Vec<usize>, HarnessError> {
    let mut out = Vec::new();
    for part in value.split(',') {
        let part = part.trim();
        if let Some((a, b)) = part.split_once("..") {
            let a: usize = parse_int(key, a)?;
            let b: usize = parse_int(key, b)?;
            if b < a {
                return Err(invalid(key, format!("empty range `{part}`")));
            }
            out.extend(a..=b);
        } else {
            out.push(parse_int(key, part)?);
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn parse_enum<T: FromStr<Err = String>>(key: &str, value: &str) -> Result<T, HarnessError> {
    T::from_str(value).map_err(|m| invalid(key, m))
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Analytic => "analytic",
            Mode::Quantum => "quantum",
            Mode::Classical => "classical",
            Mode::Compare => "compare",
        })
    }
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "analytic" => Ok(Mode::Analytic),
            "quantum" => Ok(Mode::Quantum),
            "classical" => Ok(Mode::Classical),
            "compare" => Ok(Mode::Compare),
            other => Err(format!(
                "unknown mode `{other}` (expected analytic, quantum, classical or compare)"
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections_comments_and_pi() {
        let cfg = SweepConfig::parse(
            "mode = quantum # trailing\n\
             kicks = 1..3, 5\n\
             phi_d = 3.4, 4.8\n\
             [kbar]\n\
             min = 0.5\n\
             max = 2pi\n\
             points = 5\n\
             [ensemble]\n\
             initial = gaussian\n\
             sigma = 1.5\n",
        )
        .unwrap();
        assert_eq!(cfg.mode, Mode::Quantum);
        assert_eq!(cfg.kicks, vec![1, 2, 3, 5]);
        assert_eq!(cfg.phi_d, vec![3.4, 4.8]);
        assert_eq!(
            cfg.kbar,
            KbarGrid::Range {
                min: 0.5,
                max: 2.0 * PI,
                points: 5
            }
        );
        assert_eq!(
            cfg.ensemble.initial,
            InitialDistribution::DiscreteGaussian { sigma: 1.5 }
        );
        cfg.validate().unwrap();
    }

    #[test]
    fn canonical_text_round_trips() {
        let mut cfg = SweepConfig::default();
        cfg.kbar = KbarGrid::List(vec![0.1, 1.0 / 3.0, 2.0 * PI]);
        cfg.ensemble.initial = InitialDistribution::DiscreteGaussian { sigma: 0.7 };
        cfg.output.csv = Some("out/a.csv".into());
        let back = SweepConfig::parse(&cfg.to_text()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn grid_endpoints_exact() {
        let g = KbarGrid::Range {
            min: 0.05,
            max: 2.4 * PI,
            points: 256,
        }
        .values();
        assert_eq!(g.len(), 256);
        assert_eq!(g[0], 0.05);
        assert_eq!(g[255], 2.4 * PI);
        assert_eq!(
            KbarGrid::Range {
                min: 1.0,
                max: 1.0,
                points: 1
            }
            .values(),
            vec![1.0]
        );
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = SweepConfig::parse("mode = analytic\nbogus = 1\n").unwrap_err();
        assert!(matches!(err, HarnessError::Parse { line: 2, .. }), "{err}");
        let err = SweepConfig::parse("kicks = 2\nkicks = 3\n").unwrap_err();
        assert!(matches!(err, HarnessError::Parse { line: 2, .. }));
        let err = SweepConfig::parse("phi_d = fast\n").unwrap_err();
        assert!(err.to_string().contains("phi_d"));
        assert!(SweepConfig::parse("no equals sign\n").is_err());
        assert!(SweepConfig::parse("[kbar\n").is_err());
    }

    #[test]
    fn validation_names_field_and_constraint() {
        let check = |text: &str, field: &str| {
            let cfg = SweepConfig::parse(text).unwrap();
            match cfg.validate() {
                Err(HarnessError::Invalid { field: f, .. }) => assert_eq!(f, field, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        };
        check("kicks = 6", "kicks");
        check("mode = quantum\nkicks = 81", "kicks");
        check("kbar.values = 1, 0.5", "kbar.values");
        check("kbar.points = 0", "kbar.points");
        check("kbar.min = 0", "kbar.min");
        check("kbar.min = 3\nkbar.max = 2", "kbar.max");
        check("spread.width = 1.2", "spread.width");
        check("spread.points = 0", "spread.points");
        check("phi_d = 30", "phi_d");
        check("ensemble.n_q = 0", "ensemble.n_q");
        check("e0 = -1", "e0");
        check("classical.particles = 0", "classical.particles");
        let cfg = SweepConfig::parse("mode = quantum\nkicks = 80").unwrap();
        cfg.validate().unwrap();
    }

    #[test]
    fn manifest_keys_are_skipped_only_in_manifests() {
        let text = "mode = analytic\nmanifest.tool = x\n";
        assert!(SweepConfig::parse(text).is_err());
        assert_eq!(
            SweepConfig::from_manifest(text).unwrap().mode,
            Mode::Analytic
        );
    }
}
