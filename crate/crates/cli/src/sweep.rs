//! Parameter sweeps: one base scenario, one swept key, a value grid and a
//! scalar objective. Rows run independently (rayon) and per-row failures
//! are recorded without aborting the sweep.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rayon::prelude::*;

use crate::config::Config;
use crate::error::CliError;
use crate::output::write_run;
use crate::runner::{run_scenario, Objective};
use crate::scenario::Scenario;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    /// Resonance shift as a multiple of delta_0.
    XiDelta0,
    /// Absolute resonance shift.
    Xi,
    /// Modulation frequency (forces kind-independent explicit eta).
    Eta,
    /// Resonance order K.
    Order,
}

impl SweepParameter {
    fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "xi_delta0" => Ok(SweepParameter::XiDelta0),
            "xi" => Ok(SweepParameter::Xi),
            "eta" => Ok(SweepParameter::Eta),
            "order" => Ok(SweepParameter::Order),
            other => Err(CliError::Config(format!(
                "unknown sweep.parameter '{other}'"
            ))),
        }
    }

    fn apply(&self, cfg: &mut Config, value: f64) -> Result<(), CliError> {
        match self {
            SweepParameter::XiDelta0 | SweepParameter::Xi => {
                // The swept shift replaces any base shift specification.
                cfg.unset("modulation.xi");
                cfg.unset("modulation.xi_delta0");
                cfg.unset("modulation.xi_fock_n0");
                cfg.unset("modulation.resonant_branch");
                let key = if *self == SweepParameter::XiDelta0 {
                    "modulation.xi_delta0"
                } else {
                    "modulation.xi"
                };
                cfg.set(key, &format!("{value:.17e}"))
            }
            SweepParameter::Eta => cfg.set("modulation.eta", &format!("{value:.17e}")),
            SweepParameter::Order => {
                if value < 1.0 || value.fract() != 0.0 {
                    return Err(CliError::Config(format!(
                        "sweep over order needs positive integers, got {value}"
                    )));
                }
                cfg.set("modulation.order", &format!("{}", value as u64))
            }
        }
    }
}

pub struct SweepRow {
    pub value: f64,
    pub objective: Result<f64, String>,
    pub path: String,
}

pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    /// Grid value maximizing the objective among successful rows.
    pub fn best(&self) -> Option<(f64, f64)> {
        self.rows
            .iter()
            .filter_map(|r| r.objective.as_ref().ok().map(|o| (r.value, *o)))
            .fold(None, |acc, (v, o)| match acc {
                Some((_, best)) if best >= o => acc,
                _ => Some((v, o)),
            })
    }

    pub fn render_csv(&self) -> String {
        let mut out = String::from("value, objective, status, path\n");
        for row in &self.rows {
            let (obj, status) = match &row.objective {
                Ok(v) => (format!("{v:.16e}"), "ok".to_string()),
                Err(e) => (String::new(), format!("error: {e}")),
            };
            let _ = writeln!(out, "{:.16e}, {obj}, {status}, {}", row.value, row.path);
        }
        out
    }
}

pub fn run_sweep(base: &Config, out_dir: &Path) -> Result<SweepResult, CliError> {
    let parameter = SweepParameter::parse(base.require("sweep.parameter")?)?;
    let values = base
        .f64_list("sweep.values")?
        .ok_or_else(|| CliError::Config("missing required key 'sweep.values'".into()))?;
    if values.is_empty() {
        return Err(CliError::Config("sweep.values must be non-empty".into()));
    }
    let objective = Objective::parse(base.require("sweep.objective")?)?;
    fs::create_dir_all(out_dir)?;

    let rows: Vec<SweepRow> = values
        .par_iter()
        .enumerate()
        .map(|(i, &value)| {
            let rel = format!("run_{i:03}");
            let row = || -> Result<f64, CliError> {
                let mut cfg = base.clone();
                parameter.apply(&mut cfg, value)?;
                let scenario = Scenario::from_config(&cfg)?;
                let run = run_scenario(&scenario)?;
                write_run(&out_dir.join(&rel), &scenario, &run)?;
                Ok(objective.evaluate(&run.series))
            };
            SweepRow {
                value,
                objective: row().map_err(|e| e.to_string()),
                path: rel,
            }
        })
        .collect();

    let result = SweepResult { rows };
    fs::write(out_dir.join("sweep.csv"), result.render_csv())?;
    Ok(result)
}
