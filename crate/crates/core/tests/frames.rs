//! Lab-frame vs interaction-picture equivalence: evolving with the full
//! Hamiltonian and rotating out the free phases must reproduce the
//! interaction-picture evolution.

use modqed_core::hilbert::{make_state, Atom, StateKind, StateVector};
use modqed_core::model::{
    free_frame_phases, FourierSeries, InteractionHamiltonian, ModulatedParameter, ModulationSpec,
    RabiHamiltonian, SystemParams,
};
use modqed_core::solver::{evolve, IntegratorConfig};
use modqed_core::C64;

fn to_interaction_picture(
    psi: &StateVector,
    t: f64,
    sys: &SystemParams,
    m: &ModulationSpec,
) -> Vec<C64> {
    let phases = free_frame_phases(t, sys, m, psi.n_max());
    psi.amplitudes()
        .iter()
        .zip(phases.iter())
        .map(|(a, p)| a * C64::new(0.0, *p).exp())
        .collect()
}

#[test]
fn lab_and_interaction_pictures_agree() {
    let sys = SystemParams {
        omega: 1.0,
        omega0_atom: 1.4,
        g0: 2e-2,
        modulated: ModulatedParameter::AtomFrequency,
    };
    let m = ModulationSpec::periodic(0.2, FourierSeries::harmonic(), 2.402);
    let n_max = 8;
    let psi0 = make_state(StateKind::Fock(Atom::Ground, 1), n_max).unwrap();
    let t_end = 100.0;
    let cfg = IntegratorConfig::rk4(2e-3).with_stride(usize::MAX);

    let lab = evolve(
        &RabiHamiltonian::new(sys, m.clone(), n_max).unwrap(),
        &psi0,
        (0.0, t_end),
        &cfg,
    )
    .unwrap();
    let int = evolve(
        &InteractionHamiltonian::new(sys, m.clone(), n_max).unwrap(),
        &psi0,
        (0.0, t_end),
        &cfg,
    )
    .unwrap();

    let rotated = to_interaction_picture(lab.final_state(), t_end, &sys, &m);
    let err: f64 = rotated
        .iter()
        .zip(int.final_state().amplitudes().iter())
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt();
    assert!(err < 1e-6, "frame mismatch: {err:.3e}");
}

#[test]
fn pictures_agree_for_coupling_modulation() {
    let sys = SystemParams {
        omega: 1.0,
        omega0_atom: 1.4,
        g0: 5e-2,
        modulated: ModulatedParameter::Coupling,
    };
    let m = ModulationSpec::periodic(5e-3, FourierSeries::harmonic(), 2.4);
    let n_max = 6;
    let psi0 = make_state(StateKind::Fock(Atom::Excited, 0), n_max).unwrap();
    let t_end = 60.0;
    let cfg = IntegratorConfig::rk4(2e-3).with_stride(usize::MAX);

    let lab = evolve(
        &RabiHamiltonian::new(sys, m.clone(), n_max).unwrap(),
        &psi0,
        (0.0, t_end),
        &cfg,
    )
    .unwrap();
    let int = evolve(
        &InteractionHamiltonian::new(sys, m.clone(), n_max).unwrap(),
        &psi0,
        (0.0, t_end),
        &cfg,
    )
    .unwrap();

    let rotated = to_interaction_picture(lab.final_state(), t_end, &sys, &m);
    let err: f64 = rotated
        .iter()
        .zip(int.final_state().amplitudes().iter())
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt();
    assert!(err < 1e-6, "frame mismatch: {err:.3e}");
}

#[test]
fn observables_are_frame_independent_for_diagonal_quantities() {
    // <n>, p_e and populations are invariant under the diagonal frame
    // rotation, so both pictures must report identical values.
    let sys = SystemParams {
        omega: 1.0,
        omega0_atom: 1.4,
        g0: 2e-2,
        modulated: ModulatedParameter::AtomFrequency,
    };
    let m = ModulationSpec::periodic(0.2, FourierSeries::harmonic(), 2.402);
    let n_max = 8;
    let psi0 = make_state(StateKind::Fock(Atom::Ground, 0), n_max).unwrap();
    let cfg = IntegratorConfig::rk4(2e-3).with_stride(usize::MAX);
    let t_end = 75.0;
    let lab = evolve(
        &RabiHamiltonian::new(sys, m.clone(), n_max).unwrap(),
        &psi0,
        (0.0, t_end),
        &cfg,
    )
    .unwrap();
    let int = evolve(
        &InteractionHamiltonian::new(sys, m, n_max).unwrap(),
        &psi0,
        (0.0, t_end),
        &cfg,
    )
    .unwrap();
    let (sl, si) = (lab.final_state(), int.final_state());
    assert!((sl.mean_photon_number() - si.mean_photon_number()).abs() < 1e-6);
    assert!((sl.excited_population() - si.excited_population()).abs() < 1e-6);
    for n in 0..=3 {
        assert!((sl.population(Atom::Ground, n) - si.population(Atom::Ground, n)).abs() < 1e-6);
    }
}
