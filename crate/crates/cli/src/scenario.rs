//! Turns a parsed config into a fully resolved scenario: system, modulation
//! (with the resonance frequency computed from the selected resonance and
//! shift), initial state, raw time horizon and integrator settings.

use modqed_core::effective::{
    adiabatic_shift_schedule, ajc_shift_for_fock, resonance_frequency, resonant_regime_shifts,
    ResonanceChoice, ResonanceKind,
};
use modqed_core::hilbert::{Atom, StateKind};
use modqed_core::model::{
    derive_params, Bichromatic, DerivedParams, FourierSeries, ModulatedParameter, ModulationSpec,
    Shift, SystemParams,
};
use modqed_core::solver::{default_dt, IntegratorConfig, Method};

use crate::config::Config;
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Exact,
    Effective,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HorizonUnit {
    /// Raw omega t.
    Raw,
    /// |theta| g0 t (AJC/JC figures).
    ThetaG0T,
    /// |delta_0 theta| t (DCE figures).
    Delta0ThetaT,
    /// eps t (bichromatic figures).
    EpsilonT,
}

impl HorizonUnit {
    fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "raw" | "omega_t" => Ok(HorizonUnit::Raw),
            "theta_g0_t" => Ok(HorizonUnit::ThetaG0T),
            "delta0_theta_t" => Ok(HorizonUnit::Delta0ThetaT),
            "epsilon_t" => Ok(HorizonUnit::EpsilonT),
            _ => Err(CliError::Config(format!("unknown horizon unit '{s}'"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            HorizonUnit::Raw => "omega_t",
            HorizonUnit::ThetaG0T => "theta_g0_t",
            HorizonUnit::Delta0ThetaT => "delta0_theta_t",
            HorizonUnit::EpsilonT => "epsilon_t",
        }
    }
}

/// Fully resolved simulation scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub sys: SystemParams,
    pub modulation: ModulationSpec,
    pub derived: DerivedParams,
    /// Present for the periodic resonances (absent for bichromatic runs).
    pub choice: Option<ResonanceChoice>,
    pub initial: StateKind,
    pub n_max: usize,
    /// Raw end time.
    pub t_end: f64,
    pub horizon_unit: HorizonUnit,
    /// t_dimensionless = time_scale * t_raw.
    pub time_scale: f64,
    pub integrator: IntegratorConfig,
    pub model: ModelKind,
    /// Populations to report, restricted to the |g,0>, |e,1>, |g,2| columns.
    pub populations: Vec<(Atom, usize)>,
    pub average_window: Option<f64>,
    pub warnings: Vec<String>,
}

fn parse_atom(s: &str) -> Result<Atom, CliError> {
    match s {
        "g" => Ok(Atom::Ground),
        "e" => Ok(Atom::Excited),
        _ => Err(CliError::Config(format!("unknown atom state '{s}'"))),
    }
}

fn parse_initial(cfg: &Config) -> Result<StateKind, CliError> {
    match (cfg.get("initial.fock"), cfg.get("initial.coherent")) {
        (Some(_), Some(_)) => Err(CliError::Config(
            "initial.fock and initial.coherent are mutually exclusive".into(),
        )),
        (Some(v), None) => {
            let (atom, n) = v.split_once(',').ok_or_else(|| {
                CliError::Config(format!("initial.fock: expected 'atom,n' got '{v}'"))
            })?;
            let n = n.trim().parse::<usize>().map_err(|_| {
                CliError::Config(format!("initial.fock: '{n}' is not a photon number"))
            })?;
            Ok(StateKind::Fock(parse_atom(atom.trim())?, n))
        }
        (None, Some(v)) => {
            let (atom, alpha) = v.split_once(',').ok_or_else(|| {
                CliError::Config(format!("initial.coherent: expected 'atom,alpha' got '{v}'"))
            })?;
            let alpha = alpha.trim().parse::<f64>().map_err(|_| {
                CliError::Config(format!("initial.coherent: '{alpha}' is not a number"))
            })?;
            Ok(StateKind::Coherent(
                parse_atom(atom.trim())?,
                modqed_core::C64::new(alpha, 0.0),
            ))
        }
        (None, None) => Err(CliError::Config(
            "one of initial.fock / initial.coherent is required".into(),
        )),
    }
}

fn parse_fourier(cfg: &Config) -> Result<FourierSeries, CliError> {
    match (
        cfg.f64_list("modulation.fourier_s")?,
        cfg.f64_list("modulation.fourier_c")?,
    ) {
        (None, None) => Ok(FourierSeries::harmonic()),
        (s, c) => {
            FourierSeries::new(s.unwrap_or_default(), c.unwrap_or_default()).map_err(Into::into)
        }
    }
}

fn parse_shift(
    cfg: &Config,
    key_abs: &str,
    key_rel: &str,
    delta0: Option<f64>,
) -> Result<Option<f64>, CliError> {
    match (cfg.f64(key_abs)?, cfg.f64(key_rel)?) {
        (Some(_), Some(_)) => Err(CliError::Config(format!(
            "{key_abs} and {key_rel} are mutually exclusive"
        ))),
        (Some(xi), None) => Ok(Some(xi)),
        (None, Some(x)) => {
            let d0 = delta0.ok_or_else(|| {
                CliError::Config(format!(
                    "{key_rel} needs the dispersive shift, undefined at Delta_- = 0"
                ))
            })?;
            Ok(Some(x * d0))
        }
        (None, None) => Ok(None),
    }
}

impl Scenario {
    pub fn from_config(cfg: &Config) -> Result<Self, CliError> {
        // --- system ---
        let omega = cfg.f64("system.omega")?.unwrap_or(1.0);
        let omega0_atom = cfg.require_f64("system.omega0")?;
        let g0 = cfg.require_f64("system.g0")?;
        let kind = cfg.require("modulation.kind")?;
        let modulated = match cfg.get("system.modulated") {
            Some("atom_frequency") => ModulatedParameter::AtomFrequency,
            Some("coupling") => ModulatedParameter::Coupling,
            Some("coupling_bichromatic") => ModulatedParameter::CouplingBichromatic,
            Some(other) => {
                return Err(CliError::Config(format!(
                    "unknown system.modulated '{other}'"
                )))
            }
            None => {
                if kind == "bichromatic" {
                    ModulatedParameter::CouplingBichromatic
                } else {
                    ModulatedParameter::AtomFrequency
                }
            }
        };
        let sys = SystemParams {
            omega,
            omega0_atom,
            g0,
            modulated,
        };
        sys.validate().map_err(CliError::Core)?;

        let epsilon = cfg.require_f64("modulation.epsilon")?;
        let fourier = parse_fourier(cfg)?;
        let initial = parse_initial(cfg)?;

        // Eta-independent derived quantities for resolving xi and eta.
        let probe = ModulationSpec::periodic(epsilon, fourier.clone(), 1.0);
        let d0 = derive_params(&sys, &probe).map_err(CliError::Core)?;
        let delta0 = d0.delta0().ok();

        // --- modulation / resonance ---
        let (modulation, choice) = if kind == "bichromatic" {
            let epsilon_minus = cfg.f64("modulation.epsilon_minus")?.unwrap_or(epsilon);
            let adiabatic = cfg.bool("modulation.xi_adiabatic")?.unwrap_or(false);
            let (xi, xi_minus) = if adiabatic {
                let sched = adiabatic_shift_schedule(&d0, epsilon).map_err(CliError::Core)?;
                (sched, sched)
            } else {
                let xi = parse_shift(cfg, "modulation.xi", "modulation.xi_delta0", delta0)?
                    .unwrap_or(0.0);
                let xi_minus = parse_shift(
                    cfg,
                    "modulation.xi_minus",
                    "modulation.xi_minus_delta0",
                    delta0,
                )?
                .unwrap_or(xi);
                (Shift::Constant(xi), Shift::Constant(xi_minus))
            };
            let m = ModulationSpec::bichromatic(
                epsilon,
                Bichromatic {
                    epsilon_minus,
                    xi,
                    xi_minus,
                },
            );
            (m, None)
        } else {
            let resonance = match kind {
                "ajc" => Some(ResonanceKind::Ajc),
                "jc" => Some(ResonanceKind::Jc),
                "dce" => Some(ResonanceKind::Dce),
                "explicit" => None,
                other => {
                    return Err(CliError::Config(format!(
                        "unknown modulation.kind '{other}'"
                    )))
                }
            };
            let order = cfg.usize("modulation.order")?.unwrap_or(1) as u32;
            let xi = resolve_periodic_xi(cfg, &d0, delta0, &initial)?;
            let eta = match (cfg.f64("modulation.eta")?, resonance) {
                (Some(eta), _) => eta,
                (None, Some(res)) => {
                    let choice = ResonanceChoice::new(res, order, xi).map_err(CliError::Core)?;
                    resonance_frequency(&choice, &d0).map_err(CliError::Core)?
                }
                (None, None) => {
                    return Err(CliError::Config(
                        "modulation.kind = explicit requires modulation.eta".into(),
                    ))
                }
            };
            let choice = resonance
                .map(|res| ResonanceChoice::new(res, order, xi))
                .transpose()
                .map_err(CliError::Core)?;
            (
                ModulationSpec::periodic(epsilon, fourier, eta),
                choice,
            )
        };
        let derived = derive_params(&sys, &modulation).map_err(CliError::Core)?;

        // --- horizon ---
        let horizon_unit = HorizonUnit::parse(cfg.get("horizon.unit").unwrap_or("raw"))?;
        let t_end_given = cfg.require_f64("horizon.t_end")?;
        if t_end_given < 0.0 {
            return Err(CliError::Config("horizon.t_end must be >= 0".into()));
        }
        let time_scale = match horizon_unit {
            HorizonUnit::Raw => 1.0,
            HorizonUnit::ThetaG0T => derived.theta.norm() * g0,
            HorizonUnit::Delta0ThetaT => {
                let d = delta0.ok_or_else(|| {
                    CliError::Config("delta0_theta_t horizon undefined at Delta_- = 0".into())
                })?;
                (d * derived.theta.norm()).abs()
            }
            HorizonUnit::EpsilonT => epsilon,
        };
        if time_scale <= 0.0 {
            return Err(CliError::Config(format!(
                "horizon unit '{}' has zero scale for these parameters",
                horizon_unit.name()
            )));
        }
        let t_end = t_end_given / time_scale;

        // --- truncation ---
        let n_max = match cfg.usize("hilbert.n_max")? {
            Some(n) if n >= 1 => n,
            Some(_) => return Err(CliError::Config("hilbert.n_max must be >= 1".into())),
            None => default_n_max(&initial),
        };
        if let StateKind::Fock(_, n) = initial {
            if n > n_max {
                return Err(CliError::Config(format!(
                    "initial Fock level {n} exceeds hilbert.n_max = {n_max}"
                )));
            }
        }

        // --- integrator ---
        let eta_fast = modulation
            .eta
            .max(derived.delta_plus)
            .max(2.0 * omega);
        let dt = match cfg.f64("integrator.dt")? {
            Some(dt) => dt,
            None => default_dt(eta_fast).min(drift_limited_dt(
                &sys, &modulation, n_max, t_end,
            )),
        };
        if dt <= 0.0 {
            return Err(CliError::Config("integrator.dt must be positive".into()));
        }
        let method = match cfg.get("integrator.method").unwrap_or("rk4") {
            "rk4" => Method::Rk4Fixed { dt },
            "adaptive" => Method::RkAdaptive {
                rtol: cfg.f64("integrator.rtol")?.unwrap_or(1e-10),
                atol: cfg.f64("integrator.atol")?.unwrap_or(1e-12),
                dt_init: dt,
            },
            other => {
                return Err(CliError::Config(format!(
                    "unknown integrator.method '{other}'"
                )))
            }
        };
        let stride = match cfg.usize("integrator.stride")? {
            Some(0) => return Err(CliError::Config("integrator.stride must be >= 1".into())),
            Some(s) => s,
            None => {
                // Keep sample counts near 4000 regardless of step count.
                let n_steps = (t_end / dt).ceil() as usize;
                (n_steps / 4000).max(1)
            }
        };
        let integrator = IntegratorConfig {
            method,
            sample_stride: stride,
            tail_guard: cfg.f64("integrator.tail_guard")?.unwrap_or(1e-6),
            norm_guard: cfg.f64("integrator.norm_guard")?.unwrap_or(1e-8),
        };

        // --- outputs / model ---
        let model = match cfg.get("model").unwrap_or("exact") {
            "exact" => ModelKind::Exact,
            "effective" => ModelKind::Effective,
            other => return Err(CliError::Config(format!("unknown model '{other}'"))),
        };
        let populations = parse_populations(cfg)?;
        let average_window = resolve_average_window(cfg, &derived)?;
        let warnings = modulation.warnings(&sys);

        Ok(Scenario {
            sys,
            modulation,
            derived,
            choice,
            initial,
            n_max,
            t_end,
            horizon_unit,
            time_scale,
            integrator,
            model,
            populations,
            average_window,
            warnings,
        })
    }

    /// Reference photon number for the created-photon series.
    pub fn n_ref(&self) -> f64 {
        match self.initial {
            StateKind::Fock(_, n) => n as f64,
            StateKind::Coherent(_, alpha) => alpha.norm_sqr(),
        }
    }

    /// Sign of sigma_z in the initial state (squeezing-limit convention).
    pub fn atom_sign(&self) -> i8 {
        match self.initial {
            StateKind::Fock(Atom::Excited, _) | StateKind::Coherent(Atom::Excited, _) => 1,
            _ => -1,
        }
    }
}

fn resolve_periodic_xi(
    cfg: &Config,
    d0: &DerivedParams,
    delta0: Option<f64>,
    initial: &StateKind,
) -> Result<f64, CliError> {
    if let Some(branch) = cfg.get("modulation.resonant_branch") {
        if cfg.has("modulation.xi") || cfg.has("modulation.xi_delta0") {
            return Err(CliError::Config(
                "modulation.resonant_branch excludes explicit xi keys".into(),
            ));
        }
        let (xm, xp) = resonant_regime_shifts(d0);
        return match branch {
            "minus" => Ok(xm),
            "plus" => Ok(xp),
            other => Err(CliError::Config(format!(
                "unknown modulation.resonant_branch '{other}'"
            ))),
        };
    }
    if let Some(v) = cfg.get("modulation.xi_fock_n0") {
        if cfg.has("modulation.xi") || cfg.has("modulation.xi_delta0") {
            return Err(CliError::Config(
                "modulation.xi_fock_n0 excludes explicit xi keys".into(),
            ));
        }
        let n0 = if v == "auto" {
            match initial {
                StateKind::Fock(_, n) => *n,
                StateKind::Coherent(..) => {
                    return Err(CliError::Config(
                        "modulation.xi_fock_n0 = auto needs a Fock initial state".into(),
                    ))
                }
            }
        } else {
            v.parse::<usize>().map_err(|_| {
                CliError::Config(format!("modulation.xi_fock_n0: '{v}' is not a level"))
            })?
        };
        return ajc_shift_for_fock(n0, d0).map_err(CliError::Core);
    }
    Ok(parse_shift(cfg, "modulation.xi", "modulation.xi_delta0", delta0)?.unwrap_or(0.0))
}

fn parse_populations(cfg: &Config) -> Result<Vec<(Atom, usize)>, CliError> {
    let Some(spec) = cfg.get("output.populations") else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    for item in spec.split(',') {
        let slot = match item.trim() {
            "g0" => (Atom::Ground, 0),
            "e1" => (Atom::Excited, 1),
            "g2" => (Atom::Ground, 2),
            other => {
                return Err(CliError::Config(format!(
                    "output.populations: '{other}' is not one of g0, e1, g2"
                )))
            }
        };
        if !out.contains(&slot) {
            out.push(slot);
        }
    }
    Ok(out)
}

fn resolve_average_window(
    cfg: &Config,
    derived: &DerivedParams,
) -> Result<Option<f64>, CliError> {
    let enabled = cfg.bool("output.average")?.unwrap_or(false);
    let window = cfg.f64("output.average_window")?;
    match (enabled, window) {
        (false, None) => Ok(None),
        (false, Some(_)) => Err(CliError::Config(
            "output.average_window requires output.average = true".into(),
        )),
        (true, Some(w)) if w > 0.0 => Ok(Some(w)),
        (true, Some(_)) => Err(CliError::Config(
            "output.average_window must be positive".into(),
        )),
        (true, None) => {
            if derived.delta_minus == 0.0 {
                return Err(CliError::Config(
                    "automatic averaging window undefined at Delta_- = 0; set output.average_window".into(),
                ));
            }
            Ok(Some(2.0 * core::f64::consts::PI / derived.delta_minus.abs()))
        }
    }
}

/// Largest fixed step keeping the accumulated RK4 norm drift well below the
/// 1e-8 guard. The drift per step of RK4 on a unitary flow is
/// ~ (|H| dt)^6 / 72 with the interaction-picture norm bounded by
/// 2 g_max sqrt(n_max + 1); time-dependent coefficients add to that, so the
/// budget carries a large safety margin.
fn drift_limited_dt(
    sys: &SystemParams,
    modulation: &ModulationSpec,
    n_max: usize,
    t_end: f64,
) -> f64 {
    let g_max = match sys.modulated {
        ModulatedParameter::AtomFrequency => sys.g0,
        ModulatedParameter::Coupling => {
            let f = &modulation.fourier;
            let f_max: f64 = (0..f.k_len()).map(|k| f.s(k).abs() + f.c(k).abs()).sum();
            sys.g0 + modulation.epsilon * f_max
        }
        ModulatedParameter::CouplingBichromatic => {
            let eps_minus = modulation
                .bichromatic
                .map(|b| b.epsilon_minus.abs())
                .unwrap_or(0.0);
            sys.g0 + 2.0 * modulation.epsilon.abs() + 2.0 * eps_minus
        }
    };
    let h_norm = 2.0 * g_max * ((n_max + 1) as f64).sqrt();
    if t_end <= 0.0 || h_norm <= 0.0 {
        return f64::INFINITY;
    }
    (72.0 * 1e-12 / (t_end * h_norm.powi(6))).powf(0.2)
}

fn default_n_max(initial: &StateKind) -> usize {
    match initial {
        StateKind::Fock(_, n) => (n + 10).max(15),
        StateKind::Coherent(_, alpha) => (alpha.norm_sqr() as usize + 15).max(20),
    }
}
