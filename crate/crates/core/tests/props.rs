//! Property tests for the structural invariants: tensor bilinearity, the
//! pure-phase renormalized coupling, phase-function identities, probability
//! bounds and population conservation in the closed forms.

use modqed_core::hilbert::{make_state, tensor, Atom, Operator, StateKind};
use modqed_core::model::{
    derive_params, xi_phase, FourierSeries, ModulatedParameter, ModulationSpec, RabiHamiltonian,
    Sign, SystemParams,
};
use modqed_core::observables::{analytic_resonant_ajc, ResonantBranch};
use modqed_core::solver::{evolve, IntegratorConfig};
use modqed_core::C64;
use proptest::prelude::*;

fn small_matrix(dim: usize) -> impl Strategy<Value = Operator> {
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim * dim).prop_map(move |v| {
        Operator::from_fn(dim, |i, j| {
            let (re, im) = v[i * dim + j];
            C64::new(re, im)
        })
    })
}

fn max_abs_diff(a: &Operator, b: &Operator) -> f64 {
    let mut m = 0.0f64;
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            m = m.max((a.get(i, j) - b.get(i, j)).norm());
        }
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tensor_is_bilinear(
        a in small_matrix(2),
        b in small_matrix(2),
        f in small_matrix(4),
        re in -2.0f64..2.0,
        im in -2.0f64..2.0,
    ) {
        let s = C64::new(re, im);
        // (a + s b) (x) f == a (x) f + s (b (x) f)
        let mut lhs_in = a.clone();
        lhs_in.add_scaled(&b, s);
        let lhs = tensor(&lhs_in, &f).unwrap();
        let mut rhs = tensor(&a, &f).unwrap();
        rhs.add_scaled(&tensor(&b, &f).unwrap(), s);
        prop_assert!(max_abs_diff(&lhs, &rhs) < 1e-12);
    }

    #[test]
    fn renormalized_coupling_is_pure_phase(
        g0 in 1e-3f64..0.09,
        eps in 0.0f64..0.5,
        eta in 0.5f64..4.0,
        s1 in -1.0f64..1.0,
        c1 in -1.0f64..1.0,
        s2 in -1.0f64..1.0,
    ) {
        let sys = SystemParams {
            omega: 1.0,
            omega0_atom: 1.4,
            g0,
            modulated: ModulatedParameter::AtomFrequency,
        };
        let f = FourierSeries::new(vec![s1, s2], vec![c1]).unwrap();
        let m = ModulationSpec::periodic(eps, f, eta);
        let d = derive_params(&sys, &m).unwrap();
        prop_assert!((d.g_complex.norm() - g0).abs() < 1e-12 * g0.max(1.0));
    }

    #[test]
    fn phase_difference_is_cavity_phase(
        t in 0.0f64..500.0,
        eps in 0.0f64..0.4,
        eta in 0.5f64..4.0,
    ) {
        // Xi_+ - Xi_- = 2 omega t independent of the modulation.
        let sys = SystemParams {
            omega: 1.0,
            omega0_atom: 1.4,
            g0: 2e-2,
            modulated: ModulatedParameter::AtomFrequency,
        };
        let m = ModulationSpec::periodic(eps, FourierSeries::harmonic(), eta);
        let diff = xi_phase(t, &sys, &m, Sign::Plus) - xi_phase(t, &sys, &m, Sign::Minus);
        prop_assert!((diff - 2.0 * t).abs() < 1e-9 * (1.0 + t));
    }

    #[test]
    fn ajc_closed_form_populations_are_a_distribution(
        t in 0.0f64..20_000.0,
        g0 in 1e-2f64..0.08,
        detuning in -0.05f64..0.05,
    ) {
        let sys = SystemParams {
            omega: 1.0,
            omega0_atom: 1.0 + detuning,
            g0,
            modulated: ModulatedParameter::AtomFrequency,
        };
        prop_assume!(2.0 * 2f64.sqrt() * g0 > detuning.abs() + 1e-4);
        let m = ModulationSpec::periodic(0.2, FourierSeries::harmonic(), 2.0 + detuning);
        let d = derive_params(&sys, &m).unwrap();
        for branch in [ResonantBranch::XiMinus, ResonantBranch::XiPlus] {
            let p = analytic_resonant_ajc(t, &d, branch).unwrap();
            prop_assert!(p.p_g0 >= -1e-12 && p.p_g0 <= 1.0 + 1e-12);
            prop_assert!(p.p_e1 >= -1e-12 && p.p_e1 <= 1.0 + 1e-12);
            prop_assert!(p.p_g2 >= -1e-12 && p.p_g2 <= 1.0 + 1e-12);
            prop_assert!((p.p_g0 + p.p_e1 + p.p_g2 - 1.0).abs() < 1e-10);
        }
    }
}

proptest! {
    // Evolution runs are costly; keep the case count modest.
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn evolved_probabilities_stay_bounded(
        eta in 1.8f64..2.6,
        n0 in 0usize..3,
    ) {
        let sys = SystemParams {
            omega: 1.0,
            omega0_atom: 1.4,
            g0: 2e-2,
            modulated: ModulatedParameter::AtomFrequency,
        };
        let m = ModulationSpec::periodic(0.2, FourierSeries::harmonic(), eta);
        let n_max = 10;
        let h = RabiHamiltonian::new(sys, m, n_max).unwrap();
        let psi0 = make_state(StateKind::Fock(Atom::Ground, n0), n_max).unwrap();
        let traj = evolve(&h, &psi0, (0.0, 40.0), &IntegratorConfig::rk4(5e-3).with_stride(100))
            .unwrap();
        for s in &traj.states {
            let pe = s.excited_population();
            prop_assert!(pe >= -1e-10 && pe <= 1.0 + 1e-10);
            let n = s.mean_photon_number();
            prop_assert!(n >= -1e-10 && n <= n_max as f64 + 1e-10);
            for nn in 0..=n_max {
                let p = s.population(Atom::Ground, nn) + s.population(Atom::Excited, nn);
                prop_assert!(p >= -1e-12 && p <= 1.0 + 1e-10);
            }
        }
    }
}
