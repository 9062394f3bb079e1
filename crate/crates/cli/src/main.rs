use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use kickrotor::harness::{csv_string, emit_csv, emit_svg, run_config, Mode, SweepConfig};
use kickrotor::units::{
    kappa_from_physical, period_for_kbar, scaled_from_physical, PhysicalParams,
};

#[derive(Parser)]
#[command(
    name = "kickrotor",
    version,
    about = "Energy sweeps for the kicked rotor near quantum resonance"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form energies for 1 to 5 kicks.
    AnalyticSweep(SweepArgs),
    /// Momentum-ladder simulation averaged over quasimomentum.
    QuantumSweep(SweepArgs),
    /// Monte Carlo on the standard map.
    ClassicalSweep(SweepArgs),
    /// Analytic and quantum side by side, with their gaps.
    Compare(SweepArgs),
    /// Convert lab parameters to kbar, phi_d and kappa.
    ConvertUnits(UnitsArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// Config file; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override any config key, e.g. `--set spread.width=0.05`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,
    /// Kick counts, e.g. `2,3,4,5` or `1..80`.
    #[arg(long)]
    kicks: Option<String>,
    /// Comma-separated kick strengths.
    #[arg(long)]
    phi_d: Option<String>,
    #[arg(long)]
    kbar_min: Option<String>,
    #[arg(long)]
    kbar_max: Option<String>,
    #[arg(long)]
    kbar_points: Option<String>,
    /// Explicit comma-separated kbar list, replacing the range.
    #[arg(long)]
    kbar_values: Option<String>,
    /// Relative half-width of the intensity spread.
    #[arg(long)]
    spread_width: Option<String>,
    /// Quasimomentum samples per grid point.
    #[arg(long)]
    n_q: Option<String>,
    /// Classical ensemble size.
    #[arg(long)]
    particles: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Worker threads, 0 for all cores.
    #[arg(long)]
    workers: Option<String>,
    #[arg(long)]
    out_csv: Option<PathBuf>,
    #[arg(long)]
    out_svg: Option<PathBuf>,
    #[arg(long)]
    out_manifest: Option<PathBuf>,
}

#[derive(Args)]
struct UnitsArgs {
    /// Recoil frequency, rad/s.
    #[arg(long)]
    omega_r: f64,
    /// Effective Rabi frequency, rad/s.
    #[arg(long, conflicts_with_all = ["rabi_bare", "detuning"])]
    rabi: Option<f64>,
    /// Bare Rabi frequency, rad/s (needs --detuning).
    #[arg(long, requires = "detuning")]
    rabi_bare: Option<f64>,
    /// Detuning, rad/s.
    #[arg(long, requires = "rabi_bare")]
    detuning: Option<f64>,
    /// Pulse duration, s.
    #[arg(long)]
    tau_p: Option<f64>,
    /// Kick period, s.
    #[arg(long)]
    period: Option<f64>,
    #[arg(long, default_value_t = 1)]
    kicks: usize,
    /// Print the kick period that realises this kbar and exit.
    #[arg(long)]
    period_for_kbar: Option<f64>,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::AnalyticSweep(a) => sweep(Mode::Analytic, a),
        Command::QuantumSweep(a) => sweep(Mode::Quantum, a),
        Command::ClassicalSweep(a) => sweep(Mode::Classical, a),
        Command::Compare(a) => sweep(Mode::Compare, a),
        Command::ConvertUnits(a) => convert(a),
    }
}

fn build_config(mode: Mode, a: &SweepArgs) -> Result<SweepConfig> {
    let mut cfg = match &a.config {
        Some(path) => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let is_manifest = text
                .lines()
                .any(|l| l.trim_start().starts_with("manifest."));
            let parsed = if is_manifest {
                SweepConfig::from_manifest(&text)
            } else {
                SweepConfig::parse(&text)
            };
            parsed.with_context(|| format!("in {}", path.display()))?
        }
        None => SweepConfig::default(),
    };
    cfg.mode = mode;
    let flags = [
        ("kicks", &a.kicks),
        ("phi_d", &a.phi_d),
        ("kbar.min", &a.kbar_min),
        ("kbar.max", &a.kbar_max),
        ("kbar.points", &a.kbar_points),
        ("kbar.values", &a.kbar_values),
        ("spread.width", &a.spread_width),
        ("ensemble.n_q", &a.n_q),
        ("classical.particles", &a.particles),
        ("seed", &a.seed),
        ("workers", &a.workers),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            cfg.set(key, v)?;
        }
    }
    for s in &a.sets {
        let Some((k, v)) = s.split_once('=') else {
            bail!("--set expects KEY=VALUE, got `{s}`");
        };
        cfg.set(k.trim(), v.trim())?;
    }
    if a.out_csv.is_some() {
        cfg.output.csv = a.out_csv.clone();
    }
    if a.out_svg.is_some() {
        cfg.output.svg = a.out_svg.clone();
    }
    if a.out_manifest.is_some() {
        cfg.output.manifest = a.out_manifest.clone();
    }
    Ok(cfg)
}

fn sweep(mode: Mode, a: SweepArgs) -> Result<()> {
    let cfg = build_config(mode, &a)?;
    let result = run_config(&cfg)?;
    for f in &result.failures {
        eprintln!("warning: kbar={} phi_d={}: {}", f.kbar, f.phi_d, f.message);
    }
    let out = &cfg.output;
    if let Some(p) = &out.csv {
        emit_csv(&result, p)?;
    }
    if let Some(p) = &out.svg {
        emit_svg(&result, p)?;
    }
    if let Some(p) = &out.manifest {
        result.manifest.write(p)?;
    }
    if out.csv.is_none() && out.svg.is_none() && out.manifest.is_none() {
        print!("{}", csv_string(&result.rows));
    }
    Ok(())
}

fn convert(a: UnitsArgs) -> Result<()> {
    if let Some(kbar) = a.period_for_kbar {
        println!("period = {:e}", period_for_kbar(a.omega_r, kbar)?);
        return Ok(());
    }
    let (Some(tau_p), Some(period)) = (a.tau_p, a.period) else {
        bail!("--tau-p and --period are required unless --period-for-kbar is given");
    };
    let p = match (a.rabi, a.rabi_bare, a.detuning) {
        (Some(r), None, None) => PhysicalParams::new(a.omega_r, r, tau_p, period)?,
        (None, Some(o), Some(d)) => PhysicalParams::from_bare(a.omega_r, o, d, tau_p, period)?,
        _ => bail!("give either --rabi or both --rabi-bare and --detuning"),
    };
    let s = scaled_from_physical(&p, a.kicks)?;
    println!("kbar = {:?}", s.kbar());
    println!("phi_d = {:?}", s.phi_d());
    println!("kappa = {:?}", kappa_from_physical(&p)?);
    println!("rabi_eff = {:?}", p.rabi_eff);
    println!("kicks = {}", s.kicks());
    Ok(())
}
