//! Parameter bookkeeping and the exact time-dependent Hamiltonians: the
//! lab-frame Rabi Hamiltonian with a modulated atomic frequency or
//! coupling, its interaction-picture form, and the bichromatic-coupling
//! variant.
//!
//! Everything here is a pure function of `(t, params)`, safe to evaluate
//! concurrently.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::Error;
use crate::hilbert::{build_atom_operator, build_field_operator, tensor, AtomOp, FieldOp, Operator};
use crate::solver::Hamiltonian;
use crate::{Result, C64};

/// Which system parameter carries the external modulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModulatedParameter {
    AtomFrequency,
    Coupling,
    CouplingBichromatic,
}

/// Bare system frequencies, in units where the cavity frequency sets the
/// scale (omega = 1 in all presets).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub omega: f64,
    pub omega0_atom: f64,
    pub g0: f64,
    pub modulated: ModulatedParameter,
}

impl SystemParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0 && self.omega0_atom > 0.0 && self.g0 > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "all frequencies must be positive (omega = {}, Omega0 = {}, g0 = {})",
                self.omega, self.omega0_atom, self.g0
            )));
        }
        if self.g0 >= self.omega {
            return Err(Error::InvalidParameter(format!(
                "g0 = {} must stay below omega = {} (sub-ultrastrong regime)",
                self.g0, self.omega
            )));
        }
        Ok(())
    }
}

/// Truncated Fourier series f_t = sum_k [s_k sin(k eta t) + c_k cos(k eta t)].
/// Index 0 of `s` is unused; `c[0]` is the DC offset.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSeries {
    s: Vec<f64>,
    c: Vec<f64>,
}

pub const DEFAULT_K_MAX: usize = 8;

impl FourierSeries {
    /// Coefficients beyond `k_max` are rejected, not silently dropped.
    pub fn with_k_max(s: Vec<f64>, c: Vec<f64>, k_max: usize) -> Result<Self> {
        if s.len() > k_max + 1 || c.len() > k_max + 1 {
            return Err(Error::InvalidParameter(format!(
                "Fourier spec has {} sine / {} cosine coefficients; cap is k_max = {k_max}",
                s.len().saturating_sub(1),
                c.len().saturating_sub(1)
            )));
        }
        Ok(FourierSeries { s, c })
    }

    pub fn new(s: Vec<f64>, c: Vec<f64>) -> Result<Self> {
        Self::with_k_max(s, c, DEFAULT_K_MAX)
    }

    /// f_t = sin(eta t).
    pub fn harmonic() -> Self {
        FourierSeries {
            s: vec![0.0, 1.0],
            c: vec![0.0],
        }
    }

    pub fn s(&self, k: usize) -> f64 {
        self.s.get(k).copied().unwrap_or(0.0)
    }

    pub fn c(&self, k: usize) -> f64 {
        self.c.get(k).copied().unwrap_or(0.0)
    }

    pub fn k_len(&self) -> usize {
        self.s.len().max(self.c.len())
    }

    /// f at phase eta*t.
    pub fn eval(&self, eta_t: f64) -> f64 {
        let mut acc = self.c(0);
        for k in 1..self.k_len() {
            let kt = k as f64 * eta_t;
            acc += self.s(k) * kt.sin() + self.c(k) * kt.cos();
        }
        acc
    }

    /// Periodic part of the antiderivative of f, scaled by eta:
    /// eta * int_0^t f dtau - c0 * eta t
    ///   = sum_k [ s_k (1 - cos k eta t) + c_k sin k eta t ] / k.
    pub fn phase_integral_periodic(&self, eta_t: f64) -> f64 {
        let mut acc = 0.0;
        for k in 1..self.k_len() {
            let kt = k as f64 * eta_t;
            acc += (self.s(k) * (1.0 - kt.cos()) + self.c(k) * kt.sin()) / k as f64;
        }
        acc
    }

    /// sum_{k>=1} s_k / k, the phase of the complex coupling constant.
    pub fn sine_harmonic_sum(&self) -> f64 {
        (1..self.s.len()).map(|k| self.s[k] / k as f64).sum()
    }
}

/// Resonance shift, either fixed or adjusted linearly (adiabatically) in
/// time: xi(t) = offset + slope * t.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Shift {
    Constant(f64),
    Linear { offset: f64, slope: f64 },
}

impl Shift {
    pub fn at(&self, t: f64) -> f64 {
        match *self {
            Shift::Constant(x) => x,
            Shift::Linear { offset, slope } => offset + slope * t,
        }
    }

    pub fn at_zero(&self) -> f64 {
        self.at(0.0)
    }
}

/// Second tone of a bichromatic coupling modulation
/// g(t) = g0 + 2 eps sin[(Delta_+ - 2 xi) t] + 2 eps_- sin[(Delta_- - 2 xi_-) t].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bichromatic {
    pub epsilon_minus: f64,
    pub xi: Shift,
    pub xi_minus: Shift,
}

/// External modulation: amplitude, shape, and frequency. The bichromatic
/// mode carries its own two tones tied to Delta_+- and ignores
/// `fourier`/`eta`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModulationSpec {
    pub epsilon: f64,
    pub fourier: FourierSeries,
    pub eta: f64,
    pub bichromatic: Option<Bichromatic>,
}

impl ModulationSpec {
    pub fn periodic(epsilon: f64, fourier: FourierSeries, eta: f64) -> Self {
        ModulationSpec {
            epsilon,
            fourier,
            eta,
            bichromatic: None,
        }
    }

    pub fn bichromatic(epsilon: f64, bi: Bichromatic) -> Self {
        ModulationSpec {
            epsilon,
            fourier: FourierSeries::harmonic(),
            eta: 0.0,
            bichromatic: Some(bi),
        }
    }

    /// Soft validity checks; hard errors stay in `SystemParams::validate`.
    pub fn warnings(&self, sys: &SystemParams) -> Vec<String> {
        let mut w = Vec::new();
        if self.epsilon / sys.omega0_atom > 0.5 {
            w.push(format!(
                "epsilon/Omega0 = {:.3} exceeds 0.5; the modulation is not small",
                self.epsilon / sys.omega0_atom
            ));
        }
        if self.bichromatic.is_none() && self.eta > 0.0 && self.epsilon / self.eta > 0.2 {
            w.push(format!(
                "epsilon/eta = {:.3} exceeds 0.2; first-order expansions degrade",
                self.epsilon / self.eta
            ));
        }
        w
    }
}

/// Quantities derived from the system and modulation parameters.
///
/// `delta0` is `None` exactly at atom-cavity resonance (Delta_- = 0), where
/// dispersive quantities are undefined.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedParams {
    pub omega: f64,
    pub g0: f64,
    pub epsilon: f64,
    pub eta: f64,
    pub delta_plus: f64,
    pub delta_minus: f64,
    delta0: Option<f64>,
    pub lambda: Vec<C64>,
    pub g_complex: C64,
    pub theta: C64,
    pub n_c: f64,
    pub small_param: f64,
}

impl DerivedParams {
    /// Dispersive shift delta_0 = g0^2 / Delta_-.
    pub fn delta0(&self) -> Result<f64> {
        self.delta0.ok_or(Error::ResonantRegime)
    }

    pub fn lambda_k(&self, k: usize) -> C64 {
        self.lambda.get(k).copied().unwrap_or(C64::new(0.0, 0.0))
    }
}

/// Evaluates Delta_+-, Lambda_k, the complex coupling g, delta_0, theta and
/// the dispersive-validity figures.
pub fn derive_params(sys: &SystemParams, modulation: &ModulationSpec) -> Result<DerivedParams> {
    sys.validate()?;
    let eps = modulation.epsilon;
    let f = &modulation.fourier;
    let eta = modulation.eta;

    let c0 = if modulation.bichromatic.is_some() {
        0.0
    } else {
        f.c(0)
    };
    let delta_plus = (sys.omega0_atom + eps * c0) + sys.omega;
    let delta_minus = (sys.omega0_atom + eps * c0) - sys.omega;

    let mut lambda = vec![C64::new(0.0, 0.0); f.k_len().max(2)];
    for k in 1..f.k_len() {
        lambda[k] = C64::new(-f.c(k) / (2.0 * k as f64), -f.s(k) / (2.0 * k as f64));
    }

    let (g_complex, theta) = if modulation.bichromatic.is_some() || eta == 0.0 {
        (C64::new(sys.g0, 0.0), C64::new(0.0, 0.0))
    } else {
        let phase = eps / eta * f.sine_harmonic_sum();
        let g = C64::new(sys.g0, 0.0) * C64::new(0.0, phase).exp();
        let theta = lambda[1] * C64::new(eps / eta, 0.0);
        (g, theta)
    };

    let delta0 = if delta_minus == 0.0 {
        None
    } else {
        Some(sys.g0 * sys.g0 / delta_minus)
    };
    let n_c = (delta_minus / sys.g0) * (delta_minus / sys.g0);
    let small_param = if delta_minus == 0.0 {
        f64::INFINITY
    } else {
        (sys.g0 / delta_minus).abs()
    };

    Ok(DerivedParams {
        omega: sys.omega,
        g0: sys.g0,
        epsilon: eps,
        eta,
        delta_plus,
        delta_minus,
        delta0,
        lambda,
        g_complex,
        theta,
        n_c,
        small_param,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// Closed-form phase integral Xi_+-(t) = int_0^t [Omega(tau) +- omega] dtau
/// for the atom-frequency modulation. No numerical quadrature: the
/// antiderivative of the Fourier series is analytic.
pub fn xi_phase(t: f64, sys: &SystemParams, modulation: &ModulationSpec, sign: Sign) -> f64 {
    let eps = modulation.epsilon;
    let f = &modulation.fourier;
    let eta = modulation.eta;
    let delta = match sign {
        Sign::Plus => (sys.omega0_atom + eps * f.c(0)) + sys.omega,
        Sign::Minus => (sys.omega0_atom + eps * f.c(0)) - sys.omega,
    };
    let periodic = if eta == 0.0 {
        0.0
    } else {
        eps / eta * f.phase_integral_periodic(eta * t)
    };
    delta * t + periodic
}

/// Instantaneous atomic frequency Omega(t) (atom-frequency mode).
pub fn atom_frequency_at(t: f64, sys: &SystemParams, modulation: &ModulationSpec) -> f64 {
    match sys.modulated {
        ModulatedParameter::AtomFrequency => {
            sys.omega0_atom + modulation.epsilon * modulation.fourier.eval(modulation.eta * t)
        }
        _ => sys.omega0_atom,
    }
}

/// Instantaneous coupling g(t).
pub fn coupling_at(t: f64, sys: &SystemParams, modulation: &ModulationSpec) -> f64 {
    match sys.modulated {
        ModulatedParameter::AtomFrequency => sys.g0,
        ModulatedParameter::Coupling => {
            sys.g0 + modulation.epsilon * modulation.fourier.eval(modulation.eta * t)
        }
        ModulatedParameter::CouplingBichromatic => {
            let bi = modulation
                .bichromatic
                .expect("bichromatic mode requires tone parameters");
            let delta_plus = sys.omega0_atom + sys.omega;
            let delta_minus = sys.omega0_atom - sys.omega;
            sys.g0
                + 2.0 * modulation.epsilon * ((delta_plus - 2.0 * bi.xi.at(t)) * t).sin()
                + 2.0 * bi.epsilon_minus * ((delta_minus - 2.0 * bi.xi_minus.at(t)) * t).sin()
        }
    }
}

/// Lab-frame Rabi Hamiltonian with structure-exploiting `apply`:
/// H(t) = omega n + Omega(t)/2 sigma_z + g(t) (a + a†)(sigma_+ + sigma_-).
#[derive(Debug, Clone)]
pub struct RabiHamiltonian {
    sys: SystemParams,
    modulation: ModulationSpec,
    n_max: usize,
    /// omega * n per basis index.
    photon_energy: Vec<f64>,
    /// +-1/2 per basis index (sigma_z / 2).
    half_sz: Vec<f64>,
    /// sqrt factors for (a + a†) acting within one atomic column.
    sqrt_n: Vec<f64>,
}

impl RabiHamiltonian {
    pub fn new(sys: SystemParams, modulation: ModulationSpec, n_max: usize) -> Result<Self> {
        sys.validate()?;
        if n_max < 1 {
            return Err(Error::InvalidDimension(format!(
                "n_max must be >= 1, got {n_max}"
            )));
        }
        if sys.modulated == ModulatedParameter::CouplingBichromatic
            && modulation.bichromatic.is_none()
        {
            return Err(Error::InvalidParameter(
                "bichromatic mode requires tone parameters".into(),
            ));
        }
        let levels = n_max + 1;
        let dim = 2 * levels;
        let mut photon_energy = vec![0.0; dim];
        let mut half_sz = vec![0.0; dim];
        for i in 0..dim {
            photon_energy[i] = sys.omega * (i % levels) as f64;
            half_sz[i] = if i < levels { -0.5 } else { 0.5 };
        }
        let sqrt_n: Vec<f64> = (0..=levels).map(|n| (n as f64).sqrt()).collect();
        Ok(RabiHamiltonian {
            sys,
            modulation,
            n_max,
            photon_energy,
            half_sz,
            sqrt_n,
        })
    }

    pub fn system(&self) -> &SystemParams {
        &self.sys
    }

    pub fn modulation(&self) -> &ModulationSpec {
        &self.modulation
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }
}

impl Hamiltonian for RabiHamiltonian {
    fn dim(&self) -> usize {
        2 * (self.n_max + 1)
    }

    fn apply(&self, t: f64, psi: &[C64], out: &mut [C64]) {
        let levels = self.n_max + 1;
        let omega_t = atom_frequency_at(t, &self.sys, &self.modulation);
        let g_t = coupling_at(t, &self.sys, &self.modulation);

        for i in 0..psi.len() {
            out[i] = psi[i] * (self.photon_energy[i] + omega_t * self.half_sz[i]);
        }
        // g(t) (a + a†) sigma_x: (atom, n) couples to (1 - atom, n -+ 1).
        for atom in 0..2usize {
            let src = (1 - atom) * levels;
            let dst = atom * levels;
            for n in 0..levels {
                let mut acc = C64::new(0.0, 0.0);
                if n > 0 {
                    // <n| a† |n-1> = sqrt(n)
                    acc += psi[src + n - 1] * self.sqrt_n[n];
                }
                if n + 1 < levels {
                    // <n| a |n+1> = sqrt(n+1)
                    acc += psi[src + n + 1] * self.sqrt_n[n + 1];
                }
                out[dst + n] += acc * g_t;
            }
        }
    }
}

/// Dense lab-frame Hamiltonian matrix at time `t` (spec surface; the solver
/// path goes through [`RabiHamiltonian::apply`]).
pub fn hamiltonian_lab(
    t: f64,
    sys: &SystemParams,
    modulation: &ModulationSpec,
    n_max: usize,
) -> Result<Operator> {
    let h = RabiHamiltonian::new(*sys, modulation.clone(), n_max)?;
    Ok(h.matrix(t))
}

/// Interaction picture with respect to H_0(t).
///
/// Atom-frequency mode: H_I = g0 (e^{i Xi_-} a sigma_+ + e^{i Xi_+} a† sigma_+ + h.c.)
/// with the analytic phase integrals. Coupling modes: the bracketed
/// prefactor g(t) multiplying phases e^{i (Omega -+ omega) t}.
#[derive(Debug, Clone)]
pub struct InteractionHamiltonian {
    sys: SystemParams,
    modulation: ModulationSpec,
    n_max: usize,
    /// sqrt(n) for n = 0..=n_max + 1.
    sqrt_n: Vec<f64>,
}

impl InteractionHamiltonian {
    pub fn new(sys: SystemParams, modulation: ModulationSpec, n_max: usize) -> Result<Self> {
        sys.validate()?;
        if n_max < 1 {
            return Err(Error::InvalidDimension(
                "interaction Hamiltonian needs n_max >= 1".into(),
            ));
        }
        let sqrt_n: Vec<f64> = (0..=n_max + 1).map(|n| (n as f64).sqrt()).collect();
        Ok(InteractionHamiltonian {
            sys,
            modulation,
            n_max,
            sqrt_n,
        })
    }

    fn coefficients(&self, t: f64) -> (C64, C64) {
        match self.sys.modulated {
            ModulatedParameter::AtomFrequency => {
                let xm = xi_phase(t, &self.sys, &self.modulation, Sign::Minus);
                let xp = xi_phase(t, &self.sys, &self.modulation, Sign::Plus);
                (
                    C64::new(self.sys.g0, 0.0) * C64::new(0.0, xm).exp(),
                    C64::new(self.sys.g0, 0.0) * C64::new(0.0, xp).exp(),
                )
            }
            ModulatedParameter::Coupling | ModulatedParameter::CouplingBichromatic => {
                let g_t = coupling_at(t, &self.sys, &self.modulation);
                let dm = self.sys.omega0_atom - self.sys.omega;
                let dp = self.sys.omega0_atom + self.sys.omega;
                (
                    C64::new(g_t, 0.0) * C64::new(0.0, dm * t).exp(),
                    C64::new(g_t, 0.0) * C64::new(0.0, dp * t).exp(),
                )
            }
        }
    }
}

impl Hamiltonian for InteractionHamiltonian {
    fn dim(&self) -> usize {
        2 * (self.n_max + 1)
    }

    fn apply(&self, t: f64, psi: &[C64], out: &mut [C64]) {
        // H = cm (sigma_+ a) + cp (sigma_+ a†) + h.c.; one element per row,
        // applied by index arithmetic in O(dim).
        let (cm, cp) = self.coefficients(t);
        let levels = self.n_max + 1;
        for o in out.iter_mut() {
            *o = C64::new(0.0, 0.0);
        }
        for n in 0..levels {
            let g = n;
            let e = levels + n;
            // sigma_+ a: |g,n> -> sqrt(n) |e,n-1>.
            if n >= 1 {
                out[e - 1] += cm * self.sqrt_n[n] * psi[g];
                out[g] += cm.conj() * self.sqrt_n[n] * psi[e - 1];
            }
            // sigma_+ a†: |g,n> -> sqrt(n+1) |e,n+1>.
            if n + 1 < levels {
                out[e + 1] += cp * self.sqrt_n[n + 1] * psi[g];
                out[g] += cp.conj() * self.sqrt_n[n + 1] * psi[e + 1];
            }
        }
    }

    fn matrix(&self, t: f64) -> Operator {
        let (cm, cp) = self.coefficients(t);
        let sp = build_atom_operator(AtomOp::SigmaPlus);
        let a = build_field_operator(FieldOp::Annihilate, self.n_max).expect("n_max >= 1");
        let ad = build_field_operator(FieldOp::Create, self.n_max).expect("n_max >= 1");
        let mut h = tensor(&sp, &a).expect("square factors").scaled(cm);
        h.add_scaled(&tensor(&sp, &ad).expect("square factors"), cp);
        let hc = h.adjoint();
        h.add_scaled(&hc, C64::new(1.0, 0.0));
        h
    }
}

/// Dense interaction-picture Hamiltonian at time `t` (spec surface).
pub fn hamiltonian_interaction(
    t: f64,
    sys: &SystemParams,
    modulation: &ModulationSpec,
    n_max: usize,
) -> Result<Operator> {
    let h = InteractionHamiltonian::new(*sys, modulation.clone(), n_max)?;
    Ok(h.matrix(t))
}

/// Diagonal frame phases accumulated by H_0(t) up to time `t`:
/// exp(+i int H_0 dtau) applied to a lab-frame state maps it into the
/// interaction picture. Returns the per-index phase angle.
pub fn free_frame_phases(
    t: f64,
    sys: &SystemParams,
    modulation: &ModulationSpec,
    n_max: usize,
) -> Vec<f64> {
    let levels = n_max + 1;
    // int Omega dtau = (Xi_+ + Xi_-) / 2 when the atomic frequency is
    // modulated; otherwise Omega is constant.
    let omega_integral = match sys.modulated {
        ModulatedParameter::AtomFrequency => {
            0.5 * (xi_phase(t, sys, modulation, Sign::Plus)
                + xi_phase(t, sys, modulation, Sign::Minus))
        }
        _ => sys.omega0_atom * t,
    };
    let mut phases = vec![0.0; 2 * levels];
    for (i, p) in phases.iter_mut().enumerate() {
        let n = (i % levels) as f64;
        let half_sz = if i < levels { -0.5 } else { 0.5 };
        *p = sys.omega * n * t + half_sz * omega_integral;
    }
    phases
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::Hamiltonian;
    use core::f64::consts::PI;

    fn fig1_system() -> SystemParams {
        SystemParams {
            omega: 1.0,
            omega0_atom: 1.4,
            g0: 2e-2,
            modulated: ModulatedParameter::AtomFrequency,
        }
    }

    fn fig1_modulation(eta: f64) -> ModulationSpec {
        ModulationSpec::periodic(0.2, FourierSeries::harmonic(), eta)
    }

    #[test]
    fn harmonic_lambda() {
        let d = derive_params(&fig1_system(), &fig1_modulation(2.4)).unwrap();
        assert!((d.lambda_k(1) - C64::new(0.0, -0.5)).norm() < 1e-15);
        assert_eq!(d.lambda_k(2), C64::new(0.0, 0.0));
        assert_eq!(d.lambda_k(7), C64::new(0.0, 0.0));
    }

    #[test]
    fn fig1_detunings_and_shift() {
        let d = derive_params(&fig1_system(), &fig1_modulation(2.4)).unwrap();
        assert!((d.delta_minus - 0.4).abs() < 1e-15);
        assert!((d.delta_plus - 2.4).abs() < 1e-15);
        assert!((d.delta0().unwrap() - 1e-3).abs() < 1e-15);
        // theta = Lambda_1 eps / eta = -i * 0.2 / (2 * 2.4)
        assert!((d.theta.norm() - 0.2 / 4.8).abs() < 1e-12);
        assert!((d.theta.norm() - 0.0417).abs() < 1e-4);
        assert!((d.n_c - 400.0).abs() < 1e-9);
    }

    #[test]
    fn g_complex_is_pure_phase() {
        // |g| = g0 for any Fourier spec.
        let f = FourierSeries::new(vec![0.0, 0.3, -0.7, 0.1], vec![0.2, 0.4, 0.05]).unwrap();
        let m = ModulationSpec::periodic(0.1, f, 1.7);
        let d = derive_params(&fig1_system(), &m).unwrap();
        assert!((d.g_complex.norm() - 2e-2).abs() < 1e-14);
    }

    #[test]
    fn resonant_regime_flags_delta0() {
        let sys = SystemParams {
            omega: 1.0,
            omega0_atom: 1.0,
            g0: 0.04,
            modulated: ModulatedParameter::AtomFrequency,
        };
        let d = derive_params(&sys, &fig1_modulation(2.0)).unwrap();
        assert!(matches!(d.delta0(), Err(Error::ResonantRegime)));
    }

    #[test]
    fn xi_phase_trivial_cases() {
        let sys = fig1_system();
        let m = fig1_modulation(2.4);
        assert_eq!(xi_phase(0.0, &sys, &m, Sign::Plus), 0.0);

        let unmod = ModulationSpec::periodic(0.0, FourierSeries::harmonic(), 2.4);
        let t = 3.7;
        assert!((xi_phase(t, &sys, &unmod, Sign::Minus) - 0.4 * t).abs() < 1e-12);
        assert!((xi_phase(t, &sys, &unmod, Sign::Plus) - 2.4 * t).abs() < 1e-12);
    }

    #[test]
    fn xi_phase_full_period_matches_quadrature() {
        // Oracle: composite Simpson quadrature of int (Omega(tau) +- omega) dtau.
        let sys = fig1_system();
        let m = fig1_modulation(2.4);
        let t = 2.0 * PI / m.eta;
        for sign in [Sign::Plus, Sign::Minus] {
            let analytic = xi_phase(t, &sys, &m, sign);
            let n = 20_000;
            let h = t / n as f64;
            let f = |tau: f64| {
                let om = atom_frequency_at(tau, &sys, &m);
                match sign {
                    Sign::Plus => om + sys.omega,
                    Sign::Minus => om - sys.omega,
                }
            };
            let mut acc = f(0.0) + f(t);
            for i in 1..n {
                let w = if i % 2 == 0 { 2.0 } else { 4.0 };
                acc += w * f(i as f64 * h);
            }
            let quad = acc * h / 3.0;
            assert!(
                (analytic - quad).abs() < 1e-10,
                "sign {sign:?}: {analytic} vs {quad}"
            );
            // Periodic part vanishes over a full period.
            let delta = match sign {
                Sign::Plus => 2.4,
                Sign::Minus => 0.4,
            };
            assert!((analytic - delta * t).abs() < 1e-12);
        }
    }

    #[test]
    fn xi_phase_difference_identity() {
        let sys = fig1_system();
        let m = fig1_modulation(2.4);
        for &t in &[0.3, 1.9, 13.4, 200.0] {
            let diff =
                xi_phase(t, &sys, &m, Sign::Plus) - xi_phase(t, &sys, &m, Sign::Minus);
            assert!((diff - 2.0 * sys.omega * t).abs() < 1e-9);
        }
    }

    #[test]
    fn lab_hamiltonian_stationary_and_hermitian() {
        let sys = fig1_system();
        let unmod = ModulationSpec::periodic(0.0, FourierSeries::harmonic(), 2.4);
        let h0 = hamiltonian_lab(0.0, &sys, &unmod, 6).unwrap();
        let h1 = hamiltonian_lab(17.3, &sys, &unmod, 6).unwrap();
        assert!((&h0 - &h1).max_abs() < 1e-14);
        assert!(h0.is_hermitian(1e-12));
    }

    #[test]
    fn lab_hamiltonian_periodicity() {
        let sys = fig1_system();
        let m = fig1_modulation(2.4);
        let period = 2.0 * PI / m.eta;
        for &t in &[0.0, 0.7, 3.1] {
            let h = hamiltonian_lab(t, &sys, &m, 5).unwrap();
            let hp = hamiltonian_lab(t + period, &sys, &m, 5).unwrap();
            assert!((&h - &hp).max_abs() < 1e-12);
            assert!(h.is_hermitian(1e-12));
        }
    }

    #[test]
    fn lab_hamiltonian_at_t0_harmonic() {
        // sin 0 = 0, so Omega(0) = Omega_0.
        let sys = fig1_system();
        let m = fig1_modulation(2.4);
        let h = hamiltonian_lab(0.0, &sys, &m, 4).unwrap();
        let levels = 5;
        // <g,0|H|g,0> = -Omega_0/2
        assert!((h.get(0, 0) - C64::new(-0.7, 0.0)).norm() < 1e-14);
        // <e,0|H|e,0> = +Omega_0/2
        assert!((h.get(levels, levels) - C64::new(0.7, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn coupling_mode_matrix_element() {
        // <g,0|H(t)|e,1> = g(t): coupling connects (g,0) <-> (e,1) via a sigma_-.
        let sys = SystemParams {
            omega: 1.0,
            omega0_atom: 1.3,
            g0: 5e-2,
            modulated: ModulatedParameter::Coupling,
        };
        let m = ModulationSpec::periodic(5e-3, FourierSeries::harmonic(), 2.3);
        let n_max = 4;
        let levels = n_max + 1;
        for &t in &[0.0, 0.9, 4.2] {
            let h = hamiltonian_lab(t, &sys, &m, n_max).unwrap();
            let g_t = coupling_at(t, &sys, &m);
            // index (g,0) = 0, (e,1) = levels + 1
            assert!((h.get(0, levels + 1) - C64::new(g_t, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn interaction_hamiltonian_unmodulated_phases() {
        let sys = fig1_system();
        let unmod = ModulationSpec::periodic(0.0, FourierSeries::harmonic(), 2.4);
        let hi = InteractionHamiltonian::new(sys, unmod, 3).unwrap();
        let t = 1.3;
        let h = hi.matrix(t);
        // <e,0| H |g,1> = g0 e^{i Delta_- t} * sqrt(1)
        let levels = 4;
        let expect = C64::new(sys.g0, 0.0) * C64::new(0.0, 0.4 * t).exp();
        assert!((h.get(levels, 1) - expect).norm() < 1e-12);
        assert!(h.is_hermitian(1e-12));
    }

    #[test]
    fn interaction_hamiltonian_hermitian_at_random_times() {
        let sys = fig1_system();
        let m = fig1_modulation(2.402);
        let hi = InteractionHamiltonian::new(sys, m, 5).unwrap();
        for k in 0..20 {
            let t = 0.37 * (k as f64 + 0.13) * (k as f64);
            assert!(hi.matrix(t).is_hermitian(1e-12));
        }
    }

    #[test]
    fn interaction_apply_matches_matrix() {
        let sys = fig1_system();
        let m = fig1_modulation(2.402);
        let hi = InteractionHamiltonian::new(sys, m, 4).unwrap();
        let dim = hi.dim();
        let psi: Vec<C64> = (0..dim)
            .map(|i| C64::new((i as f64 * 0.37).sin(), (i as f64 * 0.71).cos()))
            .collect();
        let t = 2.9;
        let mut fast = vec![C64::new(0.0, 0.0); dim];
        hi.apply(t, &psi, &mut fast);
        let mut dense = vec![C64::new(0.0, 0.0); dim];
        hi.matrix(t).matvec(&psi, &mut dense);
        for (a, b) in fast.iter().zip(dense.iter()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn rabi_apply_matches_matrix_bichromatic() {
        let sys = SystemParams {
            omega: 1.0,
            omega0_atom: 1.3,
            g0: 5e-2,
            modulated: ModulatedParameter::CouplingBichromatic,
        };
        let bi = Bichromatic {
            epsilon_minus: 5e-3,
            xi: Shift::Constant(-8.33e-3),
            xi_minus: Shift::Constant(-8.33e-3),
        };
        let m = ModulationSpec::bichromatic(5e-3, bi);
        let h = RabiHamiltonian::new(sys, m, 6).unwrap();
        let dim = h.dim();
        let psi: Vec<C64> = (0..dim)
            .map(|i| C64::new((i as f64 * 0.13).cos(), (i as f64 * 0.41).sin()))
            .collect();
        for &t in &[0.0, 1.7, 23.5] {
            let mut fast = vec![C64::new(0.0, 0.0); dim];
            h.apply(t, &psi, &mut fast);
            let mut dense = vec![C64::new(0.0, 0.0); dim];
            h.matrix(t).matvec(&psi, &mut dense);
            for (a, b) in fast.iter().zip(dense.iter()) {
                assert!((a - b).norm() < 1e-12);
            }
            assert!(h.matrix(t).is_hermitian(1e-12));
        }
    }

    #[test]
    fn fourier_cap_enforced() {
        let s = vec![0.0; 12];
        assert!(FourierSeries::new(s, vec![0.0]).is_err());
    }
}
