//! Executes a resolved scenario: builds the Hamiltonian (exact lab-frame or
//! effective), integrates, measures, and optionally averages out the fast
//! oscillations.

use modqed_core::effective::{build_effective, ResonanceChoice, ResonanceKind};
use modqed_core::hilbert::make_state;
use modqed_core::model::InteractionHamiltonian;
use modqed_core::observables::{measure, moving_average, ObservableSeries};
use modqed_core::solver::evolve;

use crate::error::CliError;
use crate::scenario::{ModelKind, Scenario};

/// Everything a run produces besides files.
pub struct RunOutput {
    pub series: ObservableSeries,
    /// Moving-average of the main columns, when requested.
    pub averaged: Option<ObservableSeries>,
    pub max_norm_drift: f64,
    pub guard_events: usize,
}

pub fn run_scenario(s: &Scenario) -> Result<RunOutput, CliError> {
    let psi0 = make_state(s.initial, s.n_max).map_err(CliError::Core)?;
    let traj = match s.model {
        ModelKind::Exact => {
            // Exact dynamics run in the interaction picture: the stiff
            // diagonal part is removed analytically and every reported
            // observable is diagonal, hence frame-invariant.
            let h = InteractionHamiltonian::new(s.sys, s.modulation.clone(), s.n_max)
                .map_err(CliError::Core)?;
            evolve(&h, &psi0, (0.0, s.t_end), &s.integrator).map_err(CliError::Core)?
        }
        ModelKind::Effective => {
            let choice = s.choice.unwrap_or(ResonanceChoice {
                kind: ResonanceKind::Ajc,
                order: 1,
                xi: 0.0,
            });
            let h = build_effective(
                &choice,
                &s.sys,
                &s.modulation,
                &s.derived,
                s.n_max,
                s.atom_sign(),
            )
            .map_err(CliError::Core)?;
            evolve(&h, &psi0, (0.0, s.t_end), &s.integrator).map_err(CliError::Core)?
        }
    };
    let max_norm_drift = traj.max_norm_drift();
    let guard_events = traj.guard_events.len();
    let series = measure(&traj, s.n_ref(), &s.populations).map_err(CliError::Core)?;
    let averaged = match s.average_window {
        Some(window) => Some(average_series(&series, window)?),
        None => None,
    };
    Ok(RunOutput {
        series,
        averaged,
        max_norm_drift,
        guard_events,
    })
}

fn average_series(series: &ObservableSeries, window: f64) -> Result<ObservableSeries, CliError> {
    let avg = |v: &[f64]| moving_average(&series.times, v, window).map_err(CliError::Core);
    Ok(ObservableSeries {
        times: series.times.clone(),
        n_mean: avg(&series.n_mean)?,
        created: avg(&series.created)?,
        p_e: avg(&series.p_e)?,
        p_g: avg(&series.p_g)?,
        sz: avg(&series.sz)?,
        populations: series
            .populations
            .iter()
            .map(|p| avg(p))
            .collect::<Result<_, _>>()?,
        norm_drift: series.norm_drift.clone(),
    })
}

/// Sweep objectives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    PeakN,
    FinalN,
    PeakPe,
}

impl Objective {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "peak_N" => Ok(Objective::PeakN),
            "final_N" => Ok(Objective::FinalN),
            "peak_Pe" => Ok(Objective::PeakPe),
            other => Err(CliError::Config(format!("unknown sweep.objective '{other}'"))),
        }
    }

    pub fn evaluate(&self, series: &ObservableSeries) -> f64 {
        match self {
            Objective::PeakN => series
                .created
                .iter()
                .fold(f64::NEG_INFINITY, |a, &b| a.max(b)),
            Objective::FinalN => *series.created.last().unwrap_or(&f64::NAN),
            Objective::PeakPe => series.p_e.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b)),
        }
    }
}
