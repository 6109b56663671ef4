//! CSV and metadata emission. The CSV header is fixed so runs overlay the
//! reference figures directly; absent population columns stay empty.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use modqed_core::hilbert::Atom;
use modqed_core::observables::ObservableSeries;

use crate::error::CliError;
use crate::runner::RunOutput;
use crate::scenario::Scenario;

pub const CSV_HEADER: &str =
    "t_raw, t_dimensionless, n_mean, N, p_e, p_g, sz, P_g0, P_e1, P_g2, norm_drift";

/// Column slots for the three fixed population columns.
const POPULATION_COLUMNS: [(Atom, usize); 3] =
    [(Atom::Ground, 0), (Atom::Excited, 1), (Atom::Ground, 2)];

fn fmt(v: f64) -> String {
    // 17 significant digits: enough to round-trip any f64.
    format!("{v:.16e}")
}

pub fn render_csv(scenario: &Scenario, series: &ObservableSeries) -> String {
    // Map each fixed column to its index in the requested populations.
    let slots: Vec<Option<usize>> = POPULATION_COLUMNS
        .iter()
        .map(|slot| scenario.populations.iter().position(|p| p == slot))
        .collect();
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for i in 0..series.times.len() {
        let t = series.times[i];
        let mut row: Vec<String> = vec![
            fmt(t),
            fmt(t * scenario.time_scale),
            fmt(series.n_mean[i]),
            fmt(series.created[i]),
            fmt(series.p_e[i]),
            fmt(series.p_g[i]),
            fmt(series.sz[i]),
        ];
        for slot in &slots {
            row.push(match slot {
                Some(j) => fmt(series.populations[*j][i]),
                None => String::new(),
            });
        }
        row.push(fmt(series.norm_drift[i]));
        out.push_str(&row.join(", "));
        out.push('\n');
    }
    out
}

pub fn render_metadata(scenario: &Scenario, run: &RunOutput) -> String {
    let d = &scenario.derived;
    let mut m = String::new();
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(m, "{k} = {v}");
    };
    kv("system.omega", fmt(scenario.sys.omega));
    kv("system.omega0", fmt(scenario.sys.omega0_atom));
    kv("system.g0", fmt(scenario.sys.g0));
    kv("modulation.epsilon", fmt(scenario.modulation.epsilon));
    kv("modulation.eta", fmt(scenario.modulation.eta));
    kv("derived.delta_plus", fmt(d.delta_plus));
    kv("derived.delta_minus", fmt(d.delta_minus));
    kv(
        "derived.delta0",
        match d.delta0() {
            Ok(v) => fmt(v),
            Err(_) => "undefined".to_string(),
        },
    );
    kv("derived.theta_re", fmt(d.theta.re));
    kv("derived.theta_im", fmt(d.theta.im));
    kv("derived.theta_abs", fmt(d.theta.norm()));
    kv("derived.n_c", fmt(d.n_c));
    kv("derived.small_param", fmt(d.small_param));
    if let Some(choice) = &scenario.choice {
        kv("resonance.kind", format!("{:?}", choice.kind).to_lowercase());
        kv("resonance.order", choice.order.to_string());
        kv("resonance.xi", fmt(choice.xi));
    }
    if let Some(bi) = &scenario.modulation.bichromatic {
        kv("bichromatic.epsilon_minus", fmt(bi.epsilon_minus));
        kv("bichromatic.xi_t0", fmt(bi.xi.at(0.0)));
        kv("bichromatic.xi_minus_t0", fmt(bi.xi_minus.at(0.0)));
    }
    kv("hilbert.n_max", scenario.n_max.to_string());
    kv("horizon.t_end_raw", fmt(scenario.t_end));
    kv("horizon.unit", scenario.horizon_unit.name().to_string());
    kv("horizon.time_scale", fmt(scenario.time_scale));
    kv(
        "output.average_window",
        match scenario.average_window {
            Some(w) => fmt(w),
            None => "none".to_string(),
        },
    );
    kv("run.max_norm_drift", fmt(run.max_norm_drift));
    kv("run.guard_events", run.guard_events.to_string());
    kv("run.samples", run.series.times.len().to_string());
    for (i, w) in scenario.warnings.iter().enumerate() {
        kv(&format!("warning.{i}"), w.clone());
    }
    m
}

/// Writes series.csv (+ averaged.csv when present) and metadata.txt.
pub fn write_run(dir: &Path, scenario: &Scenario, run: &RunOutput) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("series.csv"), render_csv(scenario, &run.series))?;
    if let Some(avg) = &run.averaged {
        fs::write(dir.join("averaged.csv"), render_csv(scenario, avg))?;
    }
    fs::write(dir.join("metadata.txt"), render_metadata(scenario, run))?;
    Ok(())
}
