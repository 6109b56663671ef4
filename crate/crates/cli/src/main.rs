use modqed::{config, error, output, presets, runner, scenario, sweep};

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::Config;
use error::CliError;
use modqed_core::effective::{calibration_objective, CalibrationScenario, ResonanceChoice};
use rayon::prelude::*;
use runner::run_scenario;
use scenario::Scenario;

#[derive(Parser)]
#[command(name = "modqed", version, about)]
struct Cli {
    /// Worker count for sweeps and grids (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Reserved; the dynamics is deterministic and ignores it.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and emit series.csv + metadata.txt.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a parameter sweep (sweep.* keys) over independent scenarios.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Materialize and execute a named preset.
    Preset {
        #[arg(long)]
        name: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the modulation-induced photon rates for a config.
    Rates {
        #[arg(long)]
        config: PathBuf,
    },
    /// Calibrate the resonance shift over a grid (start:stop:count or list).
    Calibrate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        grid: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()
        {
            eprintln!("error: config: could not set --jobs: {e}");
            return ExitCode::FAILURE;
        }
    }
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn load_config(path: &Path) -> Result<Config, CliError> {
    Config::parse(&fs::read_to_string(path)?)
}

fn dispatch(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Run { config, out } => {
            let cfg = load_config(&config)?;
            run_one(&cfg, &out)
        }
        Command::Sweep { config, out } => {
            let cfg = load_config(&config)?;
            sweep_one(&cfg, &out)
        }
        Command::Preset { name, out } => {
            let preset = presets::find(&name).ok_or_else(|| {
                let known: Vec<&str> = presets::PRESETS.iter().map(|p| p.name).collect();
                CliError::Config(format!(
                    "unknown preset '{name}'; available: {}",
                    known.join(", ")
                ))
            })?;
            fs::create_dir_all(&out)?;
            fs::write(out.join("config.txt"), preset.config)?;
            println!("preset {} ({})", preset.name, preset.panel);
            let cfg = Config::parse(preset.config)?;
            if cfg.has("sweep.parameter") {
                sweep_one(&cfg, &out)
            } else {
                run_one(&cfg, &out)
            }
        }
        Command::Rates { config } => {
            let cfg = load_config(&config)?;
            let s = Scenario::from_config(&cfg)?;
            let kappa = cfg.f64("rates.kappa")?.unwrap_or(0.0);
            let gamma = cfg.f64("rates.gamma")?.unwrap_or(0.0);
            let gamma_ph = cfg.f64("rates.gamma_ph")?.unwrap_or(0.0);
            let report = modqed_core::effective::rate_report(&s.derived, kappa, gamma, gamma_ph)
                .map_err(CliError::Core)?;
            println!("dce_rate_over_omega = {:.6e}", report.dce_rate_over_omega);
            println!("ajc_rate_over_omega = {:.6e}", report.ajc_rate_over_omega);
            println!(
                "dce_exceeds_dissipation = {}",
                report.dce_exceeds_dissipation
            );
            println!(
                "ajc_exceeds_dissipation = {}",
                report.ajc_exceeds_dissipation
            );
            Ok(())
        }
        Command::Calibrate { config, grid } => {
            let cfg = load_config(&config)?;
            calibrate(&cfg, &grid)
        }
    }
}

fn run_one(cfg: &Config, out: &Path) -> Result<(), CliError> {
    let scenario = Scenario::from_config(cfg)?;
    for w in &scenario.warnings {
        eprintln!("warning: {w}");
    }
    let run = run_scenario(&scenario)?;
    output::write_run(out, &scenario, &run)?;
    println!(
        "wrote {} samples to {} (max norm drift {:.3e})",
        run.series.times.len(),
        out.join("series.csv").display(),
        run.max_norm_drift
    );
    Ok(())
}

fn sweep_one(cfg: &Config, out: &Path) -> Result<(), CliError> {
    let result = sweep::run_sweep(cfg, out)?;
    for row in &result.rows {
        match &row.objective {
            Ok(v) => println!("{:>12.6e}  {:>14.6e}  {}", row.value, v, row.path),
            Err(e) => println!("{:>12.6e}  {:>14}  {} ({e})", row.value, "-", row.path),
        }
    }
    if let Some((value, best)) = result.best() {
        println!("best: value = {value:.6e}, objective = {best:.6e}");
    }
    println!("wrote {}", out.join("sweep.csv").display());
    Ok(())
}

fn parse_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() == 3 {
            let start: f64 = parts[0]
                .parse()
                .map_err(|_| CliError::Config(format!("grid start '{}' invalid", parts[0])))?;
            let stop: f64 = parts[1]
                .parse()
                .map_err(|_| CliError::Config(format!("grid stop '{}' invalid", parts[1])))?;
            let count: usize = parts[2]
                .parse()
                .map_err(|_| CliError::Config(format!("grid count '{}' invalid", parts[2])))?;
            if count < 2 {
                return Err(CliError::Config("grid count must be >= 2".into()));
            }
            let step = (stop - start) / (count - 1) as f64;
            return Ok((0..count).map(|i| start + step * i as f64).collect());
        }
        return Err(CliError::Config(format!(
            "grid '{spec}': expected start:stop:count"
        )));
    }
    spec.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Config(format!("grid value '{s}' invalid")))
        })
        .collect()
}

fn calibrate(cfg: &Config, grid_spec: &str) -> Result<(), CliError> {
    let s = Scenario::from_config(cfg)?;
    let choice: ResonanceChoice = s.choice.ok_or_else(|| {
        CliError::Config("calibrate needs a periodic resonance (ajc/jc/dce)".into())
    })?;
    let grid = parse_grid(grid_spec)?;
    let cal = CalibrationScenario {
        sys: s.sys,
        epsilon: s.modulation.epsilon,
        fourier: s.modulation.fourier.clone(),
        kind: choice.kind,
        order: choice.order,
        initial: s.initial,
        n_max: s.n_max,
        t_end: s.t_end,
        integrator: s.integrator.clone(),
    };
    // Grid points are independent; evaluate them in parallel and apply the
    // same selection rule as the sequential core routine.
    let rows: Vec<(f64, Result<f64, String>)> = grid
        .par_iter()
        .map(|&xi| (xi, calibration_objective(&cal, xi).map_err(|e| e.to_string())))
        .collect();
    let mut best: Option<(f64, f64)> = None;
    for (xi, obj) in &rows {
        match obj {
            Ok(peak) => {
                println!("xi = {xi:>14.6e}  peak_N = {peak:>12.6e}");
                best = match best {
                    Some((bx, bp)) => {
                        if *peak > bp + 1e-12 || ((peak - bp).abs() <= 1e-12 && xi.abs() < bx.abs())
                        {
                            Some((*xi, *peak))
                        } else {
                            Some((bx, bp))
                        }
                    }
                    None => Some((*xi, *peak)),
                };
            }
            Err(e) => println!("xi = {xi:>14.6e}  error: {e}"),
        }
    }
    let (xi_star, peak) = best
        .ok_or_else(|| CliError::Config("calibration failed on every grid point".into()))?;
    println!("xi_star = {xi_star:.12e} (peak_N = {peak:.6e})");
    // Verify against the sequential selection when the whole grid succeeded.
    if rows.iter().all(|(_, o)| o.is_ok()) {
        debug_assert!({
            let seq = modqed_core::effective::calibrate_shift(&cal, &grid);
            seq.map(|c| (c.xi_star - xi_star).abs() < 1e-15).unwrap_or(false)
        });
    }
    Ok(())
}
