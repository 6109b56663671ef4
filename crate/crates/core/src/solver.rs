//! Time-dependent Schrödinger integration with norm monitoring and
//! Fock-truncation guards, plus independent matrix-exponential oracles.
//!
//! No renormalization is ever applied during integration: norm drift is the
//! primary accuracy telemetry and silently renormalizing would mask
//! step-size errors.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::eig::{apply_spectral_function, eigh};
use crate::error::{Error, GuardKind};
use crate::hilbert::{Operator, StateVector};
use crate::{Result, C64};

/// Hamiltonian as a function of time. `apply` is the hot path;
/// `matrix` defaults to applying against basis vectors.
pub trait Hamiltonian {
    fn dim(&self) -> usize;

    /// `out = H(t) psi`.
    fn apply(&self, t: f64, psi: &[C64], out: &mut [C64]);

    fn matrix(&self, t: f64) -> Operator {
        let n = self.dim();
        let mut e = vec![C64::new(0.0, 0.0); n];
        let mut col = vec![C64::new(0.0, 0.0); n];
        let mut m = Operator::zeros(n);
        for j in 0..n {
            e[j] = C64::new(1.0, 0.0);
            self.apply(t, &e, &mut col);
            for i in 0..n {
                m.set(i, j, col[i]);
            }
            e[j] = C64::new(0.0, 0.0);
        }
        m
    }
}

/// Wraps a `Fn(t) -> Operator` closure as a Hamiltonian.
pub struct MatrixFn<F: Fn(f64) -> Operator> {
    dim: usize,
    f: F,
}

impl<F: Fn(f64) -> Operator> MatrixFn<F> {
    pub fn new(dim: usize, f: F) -> Self {
        MatrixFn { dim, f }
    }
}

impl<F: Fn(f64) -> Operator> Hamiltonian for MatrixFn<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, t: f64, psi: &[C64], out: &mut [C64]) {
        (self.f)(t).matvec(psi, out);
    }

    fn matrix(&self, t: f64) -> Operator {
        (self.f)(t)
    }
}

/// Time-independent Hamiltonian.
pub struct ConstantHamiltonian(pub Operator);

impl Hamiltonian for ConstantHamiltonian {
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn apply(&self, _t: f64, psi: &[C64], out: &mut [C64]) {
        self.0.matvec(psi, out);
    }

    fn matrix(&self, _t: f64) -> Operator {
        self.0.clone()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    /// Classic fourth-order Runge-Kutta with fixed step `dt`.
    Rk4Fixed { dt: f64 },
    /// Embedded Cash-Karp 4(5) with per-step error control. Validation
    /// path; output is sampled on accepted steps.
    RkAdaptive { rtol: f64, atol: f64, dt_init: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub method: Method,
    /// Record every `sample_stride`-th step (>= 1).
    pub sample_stride: usize,
    /// Max allowed population in the top two Fock levels.
    pub tail_guard: f64,
    /// Max allowed |‖ψ‖² − 1|.
    pub norm_guard: f64,
}

impl IntegratorConfig {
    pub fn rk4(dt: f64) -> Self {
        IntegratorConfig {
            method: Method::Rk4Fixed { dt },
            sample_stride: 1,
            tail_guard: 1e-6,
            norm_guard: 1e-8,
        }
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.sample_stride = stride.max(1);
        self
    }

    pub fn with_guards(mut self, tail: f64, norm: f64) -> Self {
        self.tail_guard = tail;
        self.norm_guard = norm;
        self
    }

    fn validate(&self) -> Result<()> {
        let ok = match self.method {
            Method::Rk4Fixed { dt } => dt > 0.0,
            Method::RkAdaptive {
                rtol,
                atol,
                dt_init,
            } => rtol > 0.0 && atol > 0.0 && dt_init > 0.0,
        };
        if !ok {
            return Err(Error::InvalidParameter(
                "step size and tolerances must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Step-size rule for the fixed integrator: at least 40 steps per period of
/// the fastest retained phase.
pub fn default_dt(eta_fast: f64) -> f64 {
    (2.0 * core::f64::consts::PI / eta_fast) / 40.0
}

/// Guard-threshold crossings observed along an accepted run (diagnostics at
/// one tenth of the configured limit; reaching the limit itself aborts).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GuardEvent {
    pub kind: GuardKind,
    pub t: f64,
    pub magnitude: f64,
}

/// Sampled time series of state snapshots with norm-drift diagnostics.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<StateVector>,
    pub norm_drift: Vec<f64>,
    pub guard_events: Vec<GuardEvent>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> &StateVector {
        self.states.last().expect("trajectory has at least one sample")
    }

    pub fn max_norm_drift(&self) -> f64 {
        self.norm_drift.iter().copied().fold(0.0, f64::max)
    }
}

struct SampleGuards<'a> {
    cfg: &'a IntegratorConfig,
    n_max: usize,
}

impl SampleGuards<'_> {
    fn check(&self, t: f64, psi: &[C64], events: &mut Vec<GuardEvent>) -> Result<f64> {
        if psi.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NumericalBlowup { t });
        }
        let norm_sq: f64 = psi.iter().map(|a| a.norm_sqr()).sum();
        let drift = (norm_sq - 1.0).abs();
        if drift > self.cfg.norm_guard {
            return Err(Error::GuardViolation {
                guard: GuardKind::Norm,
                t,
                magnitude: drift,
                limit: self.cfg.norm_guard,
            });
        }
        if drift > self.cfg.norm_guard / 10.0 {
            events.push(GuardEvent {
                kind: GuardKind::Norm,
                t,
                magnitude: drift,
            });
        }
        let levels = self.n_max + 1;
        let mut tail = 0.0;
        for base in [0usize, levels] {
            tail += psi[base + self.n_max].norm_sqr();
            if self.n_max >= 1 {
                tail += psi[base + self.n_max - 1].norm_sqr();
            }
        }
        if tail > self.cfg.tail_guard {
            return Err(Error::GuardViolation {
                guard: GuardKind::FockTail,
                t,
                magnitude: tail,
                limit: self.cfg.tail_guard,
            });
        }
        if tail > self.cfg.tail_guard / 10.0 {
            events.push(GuardEvent {
                kind: GuardKind::FockTail,
                t,
                magnitude: tail,
            });
        }
        Ok(drift)
    }
}

fn state_from_raw(psi: &[C64], n_max: usize) -> StateVector {
    // Snapshot without renormalization: bypass the normalizing constructor
    // by scaling with norm 1 factor is wrong; instead keep raw amplitudes.
    StateVector::from_raw_unchecked(psi.to_vec(), n_max)
}

/// Integrates i dpsi/dt = H(t) psi over `t_span`, sampling on the stride.
pub fn evolve(
    h: &dyn Hamiltonian,
    psi0: &StateVector,
    t_span: (f64, f64),
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    cfg.validate()?;
    let dim = h.dim();
    if psi0.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: psi0.dim(),
        });
    }
    let (t0, t1) = t_span;
    if t1 < t0 {
        return Err(Error::InvalidParameter("t_span must be increasing".into()));
    }
    let n_max = psi0.n_max();
    let guards = SampleGuards { cfg, n_max };

    let mut times = Vec::new();
    let mut states = Vec::new();
    let mut norm_drift = Vec::new();
    let mut events = Vec::new();

    let mut psi: Vec<C64> = psi0.amplitudes().to_vec();
    let drift0 = guards.check(t0, &psi, &mut events)?;
    times.push(t0);
    states.push(state_from_raw(&psi, n_max));
    norm_drift.push(drift0);

    if t1 == t0 {
        return Ok(Trajectory {
            times,
            states,
            norm_drift,
            guard_events: events,
        });
    }

    match cfg.method {
        Method::Rk4Fixed { dt } => {
            let span = t1 - t0;
            let n_steps = (span / dt).ceil().max(1.0) as usize;
            let dt = span / n_steps as f64;
            let mut stepper = Rk4Workspace::new(dim);
            let mut t = t0;
            for step in 1..=n_steps {
                stepper.step(h, t, dt, &mut psi);
                t = t0 + span * step as f64 / n_steps as f64;
                if step % cfg.sample_stride == 0 || step == n_steps {
                    let drift = guards.check(t, &psi, &mut events)?;
                    times.push(t);
                    states.push(state_from_raw(&psi, n_max));
                    norm_drift.push(drift);
                }
            }
        }
        Method::RkAdaptive {
            rtol,
            atol,
            dt_init,
        } => {
            let mut stepper = CashKarpWorkspace::new(dim);
            let mut t = t0;
            let mut dt = dt_init.min(t1 - t0);
            let mut accepted = 0usize;
            let mut trial = vec![C64::new(0.0, 0.0); dim];
            while t < t1 {
                let dt_clamped = dt.min(t1 - t);
                let err = stepper.step(h, t, dt_clamped, &psi, &mut trial);
                let scale: f64 = atol
                    + rtol
                        * psi
                            .iter()
                            .map(|a| a.norm())
                            .fold(0.0, f64::max);
                if err <= scale {
                    psi.copy_from_slice(&trial);
                    t += dt_clamped;
                    accepted += 1;
                    if accepted % cfg.sample_stride == 0 || t >= t1 {
                        let drift = guards.check(t, &psi, &mut events)?;
                        times.push(t);
                        states.push(state_from_raw(&psi, n_max));
                        norm_drift.push(drift);
                    }
                }
                // Standard fifth-order step-size update, clamped.
                let ratio = if err > 0.0 {
                    0.9 * (scale / err).powf(0.2)
                } else {
                    5.0
                };
                dt = (dt_clamped * ratio.clamp(0.2, 5.0)).max(1e-12);
            }
        }
    }

    Ok(Trajectory {
        times,
        states,
        norm_drift,
        guard_events: events,
    })
}

struct Rk4Workspace {
    k1: Vec<C64>,
    k2: Vec<C64>,
    k3: Vec<C64>,
    k4: Vec<C64>,
    tmp: Vec<C64>,
}

const MINUS_I: C64 = C64::new(0.0, -1.0);

impl Rk4Workspace {
    fn new(dim: usize) -> Self {
        let z = vec![C64::new(0.0, 0.0); dim];
        Rk4Workspace {
            k1: z.clone(),
            k2: z.clone(),
            k3: z.clone(),
            k4: z.clone(),
            tmp: z,
        }
    }

    /// psi <- psi advanced by one RK4 step of i dpsi/dt = H psi.
    fn step(&mut self, h: &dyn Hamiltonian, t: f64, dt: f64, psi: &mut [C64]) {
        let half = 0.5 * dt;
        h.apply(t, psi, &mut self.k1);
        for (k, _) in self.k1.iter_mut().zip(psi.iter()) {
            *k *= MINUS_I;
        }
        for i in 0..psi.len() {
            self.tmp[i] = psi[i] + self.k1[i] * half;
        }
        h.apply(t + half, &self.tmp, &mut self.k2);
        for k in self.k2.iter_mut() {
            *k *= MINUS_I;
        }
        for i in 0..psi.len() {
            self.tmp[i] = psi[i] + self.k2[i] * half;
        }
        h.apply(t + half, &self.tmp, &mut self.k3);
        for k in self.k3.iter_mut() {
            *k *= MINUS_I;
        }
        for i in 0..psi.len() {
            self.tmp[i] = psi[i] + self.k3[i] * dt;
        }
        h.apply(t + dt, &self.tmp, &mut self.k4);
        for k in self.k4.iter_mut() {
            *k *= MINUS_I;
        }
        let sixth = dt / 6.0;
        for i in 0..psi.len() {
            psi[i] += (self.k1[i] + (self.k2[i] + self.k3[i]) * 2.0 + self.k4[i]) * sixth;
        }
    }
}

/// Cash-Karp embedded 4(5) pair.
struct CashKarpWorkspace {
    k: [Vec<C64>; 6],
    tmp: Vec<C64>,
}

impl CashKarpWorkspace {
    fn new(dim: usize) -> Self {
        let z = vec![C64::new(0.0, 0.0); dim];
        CashKarpWorkspace {
            k: [
                z.clone(),
                z.clone(),
                z.clone(),
                z.clone(),
                z.clone(),
                z.clone(),
            ],
            tmp: z,
        }
    }

    /// Returns the max-norm error estimate; `out` holds the 5th-order result.
    fn step(&mut self, h: &dyn Hamiltonian, t: f64, dt: f64, psi: &[C64], out: &mut [C64]) -> f64 {
        const A: [f64; 6] = [0.0, 0.2, 0.3, 0.6, 1.0, 0.875];
        const B: [[f64; 5]; 6] = [
            [0.0, 0.0, 0.0, 0.0, 0.0],
            [0.2, 0.0, 0.0, 0.0, 0.0],
            [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0],
            [0.3, -0.9, 1.2, 0.0, 0.0],
            [-11.0 / 54.0, 2.5, -70.0 / 27.0, 35.0 / 27.0, 0.0],
            [
                1631.0 / 55296.0,
                175.0 / 512.0,
                575.0 / 13824.0,
                44275.0 / 110592.0,
                253.0 / 4096.0,
            ],
        ];
        const C5: [f64; 6] = [
            37.0 / 378.0,
            0.0,
            250.0 / 621.0,
            125.0 / 594.0,
            0.0,
            512.0 / 1771.0,
        ];
        const C4: [f64; 6] = [
            2825.0 / 27648.0,
            0.0,
            18575.0 / 48384.0,
            13525.0 / 55296.0,
            277.0 / 14336.0,
            0.25,
        ];

        let n = psi.len();
        for stage in 0..6 {
            for i in 0..n {
                let mut acc = psi[i];
                for (j, b) in B[stage].iter().enumerate().take(stage) {
                    acc += self.k[j][i] * (*b * dt);
                }
                self.tmp[i] = acc;
            }
            let (head, tail) = self.k.split_at_mut(stage);
            let _ = head;
            h.apply(t + A[stage] * dt, &self.tmp, &mut tail[0]);
            for v in tail[0].iter_mut() {
                *v *= MINUS_I;
            }
        }
        let mut err = 0.0f64;
        for i in 0..n {
            let mut y5 = psi[i];
            let mut y4 = psi[i];
            for stage in 0..6 {
                y5 += self.k[stage][i] * (C5[stage] * dt);
                y4 += self.k[stage][i] * (C4[stage] * dt);
            }
            out[i] = y5;
            err = err.max((y5 - y4).norm());
        }
        err
    }
}

/// Exact `exp(-i H t) psi0` for a constant Hermitian `H` via
/// eigendecomposition. Independent of the RK integration path.
pub fn expm_oracle(h: &Operator, t: f64, psi0: &StateVector) -> Result<StateVector> {
    if h.dim() > 256 {
        return Err(Error::InvalidDimension(
            "expm oracle limited to dim <= 256".into(),
        ));
    }
    if h.dim() != psi0.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            got: psi0.dim(),
        });
    }
    let (w, v) = eigh(h)?;
    let amps = apply_spectral_function(&w, &v, |lam| C64::new(0.0, -lam * t).exp(), psi0.amplitudes());
    Ok(StateVector::from_raw_unchecked(amps, psi0.n_max()))
}

/// First-order Magnus oracle for time-dependent Hamiltonians: midpoint-
/// sampled H on each slice, exact exponential step per slice.
pub fn evolve_piecewise_constant(
    h: &dyn Hamiltonian,
    psi0: &StateVector,
    t_span: (f64, f64),
    n_slices: usize,
) -> Result<StateVector> {
    if n_slices == 0 {
        return Err(Error::InvalidParameter("n_slices must be >= 1".into()));
    }
    let (t0, t1) = t_span;
    let dt = (t1 - t0) / n_slices as f64;
    let mut psi = psi0.clone();
    for s in 0..n_slices {
        let mid = t0 + (s as f64 + 0.5) * dt;
        let hm = h.matrix(mid);
        psi = expm_oracle(&hm, dt, &psi)?;
    }
    Ok(psi)
}
