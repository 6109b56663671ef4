//! Measurement of trajectories (photon statistics, atomic populations,
//! selected Fock-state populations) plus the closed-form predictions used
//! to benchmark the exact dynamics: the resonant-regime AJC populations and
//! the DCE squeezing-limit photon growth.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::Error;
use crate::hilbert::Atom;
use crate::model::DerivedParams;
use crate::solver::Trajectory;
use crate::Result;

/// Time series of everything the output layer reports.
#[derive(Debug, Clone)]
pub struct ObservableSeries {
    pub times: Vec<f64>,
    /// <n> at each sample.
    pub n_mean: Vec<f64>,
    /// Created photons N = <n> - n_ref.
    pub created: Vec<f64>,
    pub p_e: Vec<f64>,
    pub p_g: Vec<f64>,
    /// <sigma_z> = p_e - p_g.
    pub sz: Vec<f64>,
    /// One series per requested (atom, n) population, in request order.
    pub populations: Vec<Vec<f64>>,
    pub norm_drift: Vec<f64>,
}

/// Extracts observables from a trajectory. `n_ref` is the photon-number
/// reference subtracted to form the created-photon series; `requested`
/// lists extra |atom, n> populations to record.
pub fn measure(
    traj: &Trajectory,
    n_ref: f64,
    requested: &[(Atom, usize)],
) -> Result<ObservableSeries> {
    let n_samples = traj.times.len();
    let n_max = match traj.states.first() {
        Some(s) => s.n_max(),
        None => return Err(Error::EmptyGrid),
    };
    for &(_, n) in requested {
        if n > n_max {
            return Err(Error::OutOfRange(format!(
                "requested Fock population n = {n} exceeds n_max = {n_max}"
            )));
        }
    }
    let mut series = ObservableSeries {
        times: traj.times.clone(),
        n_mean: Vec::with_capacity(n_samples),
        created: Vec::with_capacity(n_samples),
        p_e: Vec::with_capacity(n_samples),
        p_g: Vec::with_capacity(n_samples),
        sz: Vec::with_capacity(n_samples),
        populations: vec![Vec::with_capacity(n_samples); requested.len()],
        norm_drift: traj.norm_drift.clone(),
    };
    for state in &traj.states {
        let n_mean = state.mean_photon_number();
        let p_e = state.excited_population();
        let p_g = 1.0 - p_e;
        series.n_mean.push(n_mean);
        series.created.push(n_mean - n_ref);
        series.p_e.push(p_e);
        series.p_g.push(p_g);
        series.sz.push(p_e - p_g);
        for (slot, &(atom, n)) in requested.iter().enumerate() {
            series.populations[slot].push(state.population(atom, n));
        }
    }
    Ok(series)
}

/// Which of the two resonant-regime shifts xi_-+ the modulation targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResonantBranch {
    /// xi = Delta_-/2 - sqrt(2) g0; mixing phase q = 0.
    XiMinus,
    /// xi = Delta_-/2 + sqrt(2) g0; mixing phase q = pi/2.
    XiPlus,
}

/// Closed-form populations for the AJC resonance in the resonant atom-cavity
/// regime, starting from |g,0>.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AjcPopulations {
    pub p_g0: f64,
    pub p_e1: f64,
    pub p_g2: f64,
    /// Oscillation rate chi; the |g,0> population returns at t = pi/chi.
    pub chi: f64,
}

/// P_g0 = cos^2(chi t), P_e1 = sin^2(y+q) sin^2(chi t),
/// P_g2 = cos^2(y-q) sin^2(chi t), with
/// tan y = sqrt[(2 sqrt2 g0 + Delta_-)/(2 sqrt2 g0 - Delta_-)] and
/// chi = |g theta| sin(y+q). Requires 2 sqrt2 g0 > |Delta_-|.
pub fn analytic_resonant_ajc(
    t: f64,
    d: &DerivedParams,
    branch: ResonantBranch,
) -> Result<AjcPopulations> {
    let root8_g0 = 2.0 * 2f64.sqrt() * d.g0;
    if root8_g0 <= d.delta_minus.abs() {
        return Err(Error::Domain(
            "resonant-regime formulas require 2 sqrt(2) g0 > |Delta_-|".into(),
        ));
    }
    let y = ((root8_g0 + d.delta_minus) / (root8_g0 - d.delta_minus))
        .sqrt()
        .atan();
    let q = match branch {
        ResonantBranch::XiMinus => 0.0,
        ResonantBranch::XiPlus => core::f64::consts::FRAC_PI_2,
    };
    let amp = (d.g_complex * d.theta).norm();
    let chi = amp * (y + q).sin();
    let (s, c) = (chi * t).sin_cos();
    Ok(AjcPopulations {
        p_g0: c * c,
        p_e1: (y + q).sin().powi(2) * s * s,
        p_g2: (y - q).cos().powi(2) * s * s,
        chi,
    })
}

/// DCE squeezing-limit prediction <n>(t) = sinh^2(2 |delta_0 theta| t).
pub fn dce_squeezing_prediction(t: f64, d: &DerivedParams) -> Result<f64> {
    let rate = (d.delta0()? * d.theta.norm()).abs();
    Ok((2.0 * rate * t).sinh().powi(2))
}

/// Centered moving average over a time window: each output sample averages
/// all inputs within +-window/2 of its time. Handles uneven grids; edges
/// average over the truncated window.
pub fn moving_average(times: &[f64], values: &[f64], window: f64) -> Result<Vec<f64>> {
    if times.len() != values.len() {
        return Err(Error::DimensionMismatch {
            expected: times.len(),
            got: values.len(),
        });
    }
    if times.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if !(window > 0.0) {
        return Err(Error::InvalidParameter("window must be positive".into()));
    }
    // A slight widening keeps samples sitting exactly on the window edge
    // from dropping out to floating-point roundoff.
    let half = window / 2.0 * (1.0 + 1e-12) + 1e-300;
    let mut out = Vec::with_capacity(times.len());
    let mut lo = 0usize;
    let mut hi = 0usize;
    for (i, &t) in times.iter().enumerate() {
        while lo < times.len() && times[lo] < t - half {
            lo += 1;
        }
        if hi < i + 1 {
            hi = i + 1;
        }
        while hi < times.len() && times[hi] <= t + half {
            hi += 1;
        }
        let slice = &values[lo..hi];
        out.push(slice.iter().sum::<f64>() / slice.len() as f64);
    }
    Ok(out)
}

/// Maximum absolute difference between two sampled series over their common
/// time range, linearly interpolating the second onto the first. Errors if
/// the ranges are disjoint.
pub fn compare_series(
    times_a: &[f64],
    values_a: &[f64],
    times_b: &[f64],
    values_b: &[f64],
) -> Result<f64> {
    if times_a.len() != values_a.len() || times_b.len() != values_b.len() {
        return Err(Error::DimensionMismatch {
            expected: times_a.len(),
            got: values_a.len(),
        });
    }
    if times_a.is_empty() || times_b.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let lo = times_a[0].max(times_b[0]);
    let hi = times_a[times_a.len() - 1].min(times_b[times_b.len() - 1]);
    if lo > hi {
        return Err(Error::Domain("series time ranges do not overlap".into()));
    }
    let mut max_dev: f64 = 0.0;
    let mut j = 0usize;
    let mut any = false;
    for (i, &t) in times_a.iter().enumerate() {
        if t < lo || t > hi {
            continue;
        }
        while j + 1 < times_b.len() && times_b[j + 1] < t {
            j += 1;
        }
        let b = if times_b[j + 1] == times_b[j] {
            values_b[j]
        } else {
            let w = (t - times_b[j]) / (times_b[j + 1] - times_b[j]);
            values_b[j] * (1.0 - w) + values_b[j + 1] * w
        };
        max_dev = max_dev.max((values_a[i] - b).abs());
        any = true;
    }
    if !any {
        return Err(Error::Domain("no samples in the overlap range".into()));
    }
    Ok(max_dev)
}
