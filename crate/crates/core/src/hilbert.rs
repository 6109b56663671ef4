//! States and operators on the tensor product of a two-level atom and a
//! Fock space truncated at `n_max`.
//!
//! The basis layout is fixed: index = atom · (n_max + 1) + n, with the
//! atomic ground state mapping to atom = 0 and the excited state to
//! atom = 1. Output files and cross-implementation comparisons rely on
//! this ordering.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::Error;
use crate::{Result, C64};

/// Atomic level of the two-level system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Atom {
    Ground,
    Excited,
}

impl Atom {
    pub fn index(self) -> usize {
        match self {
            Atom::Ground => 0,
            Atom::Excited => 1,
        }
    }
}

/// Dense complex matrix. Hamiltonian-role operators are kept Hermitian to
/// 1e-12 by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    dim: usize,
    data: Vec<C64>,
}

impl Operator {
    pub fn zeros(dim: usize) -> Self {
        Operator {
            dim,
            data: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut op = Self::zeros(dim);
        for i in 0..dim {
            op.data[i * dim + i] = C64::new(1.0, 0.0);
        }
        op
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut op = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                op.data[i * dim + j] = f(i, j);
            }
        }
        op
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.dim + j] = v;
    }

    #[inline]
    pub fn add_to(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.dim + j] += v;
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> Operator {
        Operator::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    /// Max elementwise |H - H^dagger|.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut max = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                let d = (self.get(i, j) - self.get(j, i).conj()).norm();
                if d > max {
                    max = d;
                }
            }
        }
        max
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub fn scaled(&self, s: C64) -> Operator {
        Operator {
            dim: self.dim,
            data: self.data.iter().map(|&x| x * s).collect(),
        }
    }

    pub fn scale_inplace(&mut self, s: C64) {
        for x in self.data.iter_mut() {
            *x *= s;
        }
    }

    pub fn add_scaled(&mut self, other: &Operator, s: C64) {
        debug_assert_eq!(self.dim, other.dim);
        for (a, b) in self.data.iter_mut().zip(other.data.iter()) {
            *a += b * s;
        }
    }

    pub fn matmul(&self, other: &Operator) -> Result<Operator> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let n = self.dim;
        let mut out = Operator::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.data[i * n + k];
                if aik == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += aik * other.data[k * n + j];
                }
            }
        }
        Ok(out)
    }

    /// `out = H psi`. Slices must have length `dim`.
    pub fn matvec(&self, psi: &[C64], out: &mut [C64]) {
        debug_assert_eq!(psi.len(), self.dim);
        debug_assert_eq!(out.len(), self.dim);
        let n = self.dim;
        for i in 0..n {
            let row = &self.data[i * n..(i + 1) * n];
            let mut acc = C64::new(0.0, 0.0);
            for (h, p) in row.iter().zip(psi.iter()) {
                acc += h * p;
            }
            out[i] = acc;
        }
    }

    /// `out += s * (H psi)`.
    pub fn matvec_add_scaled(&self, psi: &[C64], s: C64, out: &mut [C64]) {
        let n = self.dim;
        for i in 0..n {
            let row = &self.data[i * n..(i + 1) * n];
            let mut acc = C64::new(0.0, 0.0);
            for (h, p) in row.iter().zip(psi.iter()) {
                acc += h * p;
            }
            out[i] += s * acc;
        }
    }

    pub fn commutator(&self, other: &Operator) -> Result<Operator> {
        let mut ab = self.matmul(other)?;
        let ba = other.matmul(self)?;
        ab.add_scaled(&ba, C64::new(-1.0, 0.0));
        Ok(ab)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }
}

impl core::ops::Add<&Operator> for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        let mut out = self.clone();
        out.add_scaled(rhs, C64::new(1.0, 0.0));
        out
    }
}

impl core::ops::Sub<&Operator> for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        let mut out = self.clone();
        out.add_scaled(rhs, C64::new(-1.0, 0.0));
        out
    }
}

/// Normalized state on the qubit ⊗ Fock(n_max) space.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<C64>,
    n_max: usize,
}

impl StateVector {
    /// Builds a state from raw amplitudes, normalizing them. Errors on a
    /// zero vector or a length inconsistent with `2 (n_max + 1)`.
    pub fn from_amplitudes(amps: Vec<C64>, n_max: usize) -> Result<Self> {
        let dim = 2 * (n_max + 1);
        if amps.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: amps.len(),
            });
        }
        let norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if !(norm_sq > 0.0) || !norm_sq.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "cannot normalize state with squared norm {norm_sq}"
            )));
        }
        let inv = 1.0 / norm_sq.sqrt();
        let amps = amps.into_iter().map(|a| a * inv).collect();
        Ok(StateVector { amps, n_max })
    }

    /// Snapshot constructor used by the solver: keeps raw amplitudes so
    /// norm drift stays observable. Callers guarantee the length.
    pub(crate) fn from_raw_unchecked(amps: Vec<C64>, n_max: usize) -> Self {
        debug_assert_eq!(amps.len(), 2 * (n_max + 1));
        StateVector { amps, n_max }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn fock_levels(&self) -> usize {
        self.n_max + 1
    }

    #[inline]
    pub fn index(&self, atom: Atom, n: usize) -> usize {
        atom.index() * (self.n_max + 1) + n
    }

    pub fn amplitude(&self, atom: Atom, n: usize) -> C64 {
        self.amps[self.index(atom, n)]
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Probability of the basis state `|atom, n>`.
    pub fn population(&self, atom: Atom, n: usize) -> f64 {
        self.amplitude(atom, n).norm_sqr()
    }

    /// Mean photon number.
    pub fn mean_photon_number(&self) -> f64 {
        let levels = self.n_max + 1;
        let mut acc = 0.0;
        for (i, a) in self.amps.iter().enumerate() {
            acc += (i % levels) as f64 * a.norm_sqr();
        }
        acc
    }

    /// Probability of finding the atom excited.
    pub fn excited_population(&self) -> f64 {
        let levels = self.n_max + 1;
        self.amps[levels..].iter().map(|a| a.norm_sqr()).sum()
    }

    /// Combined population of the top two Fock levels (both atomic states).
    pub fn tail_population(&self) -> f64 {
        let mut acc = 0.0;
        for atom in [Atom::Ground, Atom::Excited] {
            for n in [self.n_max.saturating_sub(1), self.n_max] {
                acc += self.population(atom, n);
            }
        }
        acc
    }
}

/// Field operators on the Fock factor alone (dimension n_max + 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Annihilate,
    Create,
    Number,
}

/// Standard truncated ladder operators: a|n> = sqrt(n)|n-1>,
/// a†|n> = sqrt(n+1)|n+1> with a†|n_max> = 0.
pub fn build_field_operator(kind: FieldOp, n_max: usize) -> Result<Operator> {
    if n_max < 1 {
        return Err(Error::InvalidDimension(format!(
            "n_max must be >= 1, got {n_max}"
        )));
    }
    let levels = n_max + 1;
    let mut op = Operator::zeros(levels);
    match kind {
        FieldOp::Annihilate => {
            for n in 1..levels {
                op.set(n - 1, n, C64::new((n as f64).sqrt(), 0.0));
            }
        }
        FieldOp::Create => {
            for n in 0..n_max {
                op.set(n + 1, n, C64::new(((n + 1) as f64).sqrt(), 0.0));
            }
        }
        FieldOp::Number => {
            for n in 0..levels {
                op.set(n, n, C64::new(n as f64, 0.0));
            }
        }
    }
    Ok(op)
}

/// Atomic (2x2) operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtomOp {
    SigmaPlus,
    SigmaMinus,
    SigmaZ,
}

/// sigma_+ = |e><g|, sigma_- = |g><e|, sigma_z = |e><e| - |g><g|,
/// in the g -> 0, e -> 1 layout.
pub fn build_atom_operator(kind: AtomOp) -> Operator {
    let mut op = Operator::zeros(2);
    match kind {
        AtomOp::SigmaPlus => op.set(1, 0, C64::new(1.0, 0.0)),
        AtomOp::SigmaMinus => op.set(0, 1, C64::new(1.0, 0.0)),
        AtomOp::SigmaZ => {
            op.set(0, 0, C64::new(-1.0, 0.0));
            op.set(1, 1, C64::new(1.0, 0.0));
        }
    }
    op
}

/// Kronecker product `atom_op ⊗ field_op`, consistent with the atom-major
/// index layout. `atom_op` must be 2x2.
pub fn tensor(atom_op: &Operator, field_op: &Operator) -> Result<Operator> {
    if atom_op.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: atom_op.dim(),
        });
    }
    let f = field_op.dim();
    let dim = 2 * f;
    let mut out = Operator::zeros(dim);
    for ai in 0..2 {
        for aj in 0..2 {
            let w = atom_op.get(ai, aj);
            if w == C64::new(0.0, 0.0) {
                continue;
            }
            for fi in 0..f {
                for fj in 0..f {
                    out.set(ai * f + fi, aj * f + fj, w * field_op.get(fi, fj));
                }
            }
        }
    }
    Ok(out)
}

/// Initial-state constructors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateKind {
    Fock(Atom, usize),
    Coherent(Atom, C64),
}

const COHERENT_TAIL_LIMIT: f64 = 1e-9;

pub fn make_state(kind: StateKind, n_max: usize) -> Result<StateVector> {
    let levels = n_max + 1;
    let dim = 2 * levels;
    match kind {
        StateKind::Fock(atom, n0) => {
            if n0 > n_max {
                return Err(Error::OutOfRange(format!(
                    "fock level {n0} exceeds n_max = {n_max}"
                )));
            }
            let mut amps = vec![C64::new(0.0, 0.0); dim];
            amps[atom.index() * levels + n0] = C64::new(1.0, 0.0);
            StateVector::from_amplitudes(amps, n_max)
        }
        StateKind::Coherent(atom, alpha) => {
            // c_n = exp(-|alpha|^2/2) alpha^n / sqrt(n!), built recursively.
            let mut amps = vec![C64::new(0.0, 0.0); dim];
            let mut c = C64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
            let mut kept = 0.0;
            for n in 0..levels {
                amps[atom.index() * levels + n] = c;
                kept += c.norm_sqr();
                c *= alpha / C64::new(((n + 1) as f64).sqrt(), 0.0);
            }
            let tail = (1.0 - kept).max(0.0);
            if tail > COHERENT_TAIL_LIMIT {
                return Err(Error::TruncationTail {
                    weight: tail,
                    limit: COHERENT_TAIL_LIMIT,
                });
            }
            StateVector::from_amplitudes(amps, n_max)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn annihilate_lowers_one() {
        let a = build_field_operator(FieldOp::Annihilate, 2).unwrap();
        let psi = [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)];
        let mut out = [c(0.0, 0.0); 3];
        a.matvec(&psi, &mut out);
        assert_eq!(out[0], c(1.0, 0.0));
        assert_eq!(out[1], c(0.0, 0.0));
        assert_eq!(out[2], c(0.0, 0.0));
    }

    #[test]
    fn number_operator_diagonal() {
        let n = build_field_operator(FieldOp::Number, 3).unwrap();
        for k in 0..4 {
            assert_eq!(n.get(k, k), c(k as f64, 0.0));
        }
        assert_eq!(n.get(0, 1), c(0.0, 0.0));
    }

    #[test]
    fn ladder_commutator_with_truncation() {
        // [a, a†] = identity except the -n_max entry at the top level.
        let n_max = 4;
        let a = build_field_operator(FieldOp::Annihilate, n_max).unwrap();
        let ad = build_field_operator(FieldOp::Create, n_max).unwrap();
        let comm = a.commutator(&ad).unwrap();
        for i in 0..n_max {
            assert!((comm.get(i, i) - c(1.0, 0.0)).norm() < 1e-14);
        }
        assert!((comm.get(n_max, n_max) - c(-(n_max as f64), 0.0)).norm() < 1e-14);
    }

    #[test]
    fn number_equals_adagger_a_below_truncation() {
        let n_max = 6;
        let a = build_field_operator(FieldOp::Annihilate, n_max).unwrap();
        let ad = build_field_operator(FieldOp::Create, n_max).unwrap();
        let num = build_field_operator(FieldOp::Number, n_max).unwrap();
        let prod = ad.matmul(&a).unwrap();
        for i in 0..n_max {
            assert!((prod.get(i, i) - num.get(i, i)).norm() < 1e-14);
        }
    }

    #[test]
    fn atom_operators() {
        let sp = build_atom_operator(AtomOp::SigmaPlus);
        let sm = build_atom_operator(AtomOp::SigmaMinus);
        let sz = build_atom_operator(AtomOp::SigmaZ);
        // sigma_+ |g> = |e>
        assert_eq!(sp.get(1, 0), c(1.0, 0.0));
        // sigma_z |g> = -|g>
        assert_eq!(sz.get(0, 0), c(-1.0, 0.0));
        // sigma_+ sigma_- + sigma_- sigma_+ = 1
        let mut anti = sp.matmul(&sm).unwrap();
        anti.add_scaled(&sm.matmul(&sp).unwrap(), c(1.0, 0.0));
        assert!((&anti - &Operator::identity(2)).max_abs() < 1e-15);
    }

    #[test]
    fn tensor_identity_and_sigma_z() {
        let n_max = 3;
        let id2 = Operator::identity(2);
        let idf = Operator::identity(n_max + 1);
        let full = tensor(&id2, &idf).unwrap();
        assert!((&full - &Operator::identity(2 * (n_max + 1))).max_abs() < 1e-15);

        let sz = tensor(&build_atom_operator(AtomOp::SigmaZ), &idf).unwrap();
        let psi = make_state(StateKind::Fock(Atom::Ground, 3), n_max).unwrap();
        let mut out = vec![c(0.0, 0.0); psi.dim()];
        sz.matvec(psi.amplitudes(), &mut out);
        assert_eq!(out[psi.index(Atom::Ground, 3)], c(-1.0, 0.0));
    }

    #[test]
    fn tensor_sigma_plus_annihilate_maps_g1_to_e0() {
        let n_max = 4;
        let op = tensor(
            &build_atom_operator(AtomOp::SigmaPlus),
            &build_field_operator(FieldOp::Annihilate, n_max).unwrap(),
        )
        .unwrap();
        let psi = make_state(StateKind::Fock(Atom::Ground, 1), n_max).unwrap();
        let mut out = vec![c(0.0, 0.0); psi.dim()];
        op.matvec(psi.amplitudes(), &mut out);
        for (i, v) in out.iter().enumerate() {
            if i == psi.index(Atom::Excited, 0) {
                assert!((v - c(1.0, 0.0)).norm() < 1e-15);
            } else {
                assert_eq!(*v, c(0.0, 0.0));
            }
        }
    }

    #[test]
    fn tensor_dimension_check() {
        let bad = Operator::identity(3);
        let f = Operator::identity(4);
        assert!(tensor(&bad, &f).is_err());
    }

    #[test]
    fn field_operator_rejects_n_max_zero() {
        assert!(build_field_operator(FieldOp::Number, 0).is_err());
    }

    #[test]
    fn coherent_alpha_zero_is_vacuum() {
        let psi = make_state(StateKind::Coherent(Atom::Ground, c(0.0, 0.0)), 5).unwrap();
        assert!((psi.population(Atom::Ground, 0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn fock_state_unit_amplitude() {
        let psi = make_state(StateKind::Fock(Atom::Excited, 3), 5).unwrap();
        assert_eq!(psi.amplitude(Atom::Excited, 3), c(1.0, 0.0));
        assert!((psi.norm_sq() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fock_out_of_range() {
        assert!(make_state(StateKind::Fock(Atom::Ground, 6), 5).is_err());
    }

    #[test]
    fn coherent_mean_photon_number() {
        // <n> for |alpha = 1> on a generous truncation.
        let psi = make_state(StateKind::Coherent(Atom::Ground, c(1.0, 0.0)), 30).unwrap();
        assert!((psi.mean_photon_number() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn coherent_tail_guard() {
        let err = make_state(StateKind::Coherent(Atom::Ground, c(4.0, 0.0)), 10);
        assert!(matches!(err, Err(Error::TruncationTail { .. })));
    }
}
