use std::sync::Arc;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use zakharov_core::problem::{ProfileSet, Zero};
use zakharov_core::scheme::{cayley_update, recover_n, run, stencil_residual, step_count};
use zakharov_core::{
    CaseKind, ComplexField, FdSolver, Grid1D, PhysicalCase, RealField, StepConfig, ZakharovError,
};

const DOMAIN: (f64, f64) = (-32.0, 32.0);

fn builtin(kind: CaseKind, eps: f64, t: f64) -> PhysicalCase {
    PhysicalCase::builtin(kind, eps, DOMAIN, t).unwrap()
}

fn grid(h: f64) -> Grid1D {
    Grid1D::with_spacing(DOMAIN.0, DOMAIN.1, h).unwrap()
}

#[test]
fn zero_data_is_a_fixed_point() {
    let profiles = ProfileSet::new(Arc::new(Zero), Arc::new(Zero), Arc::new(Zero));
    let case = PhysicalCase::new(0.5, 0.0, 0.0, DOMAIN, 0.1, profiles).unwrap();
    let solver = FdSolver::new(&case, &grid(0.5), 0.01, StepConfig::default()).unwrap();
    let state = solver.initial_state().unwrap();
    let (next, report) = solver.step(&state).unwrap();
    assert_eq!(report.iterations, 1);
    assert_eq!(next.e_curr.max_abs(), 0.0);
    assert_eq!(next.f_curr.max_abs(), 0.0);
}

#[test]
fn accepted_steps_satisfy_the_raw_stencils() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(11);
    for (kind, eps, h, tau) in [
        (CaseKind::CaseII, 0.25, 0.1, 1e-3),
        (CaseKind::CaseI, 1.0, 0.2, 1e-2),
        (CaseKind::CaseII, 1.0 / 16.0, 0.1, 1e-3),
    ] {
        let case = builtin(kind, eps, 1.0);
        let solver = FdSolver::new(&case, &grid(h), tau, StepConfig::default()).unwrap();
        let mut state = solver.initial_state().unwrap();
        let checked: Vec<usize> = (0..5).map(|_| rng.gen_range(1..60)).collect();
        for k in 1..60 {
            let hk = solver.averaged_potential(&state);
            let (next, _) = solver.step_with_potential(&state, &hk).unwrap();
            if checked.contains(&k) {
                let (re, rf) = stencil_residual(
                    eps,
                    tau,
                    &hk,
                    &state.e_prev,
                    &state.e_curr,
                    &next.e_curr,
                    &state.f_prev,
                    &state.f_curr,
                    &next.f_curr,
                );
                assert!(
                    re <= 1e-9 && rf <= 1e-9,
                    "{kind} eps {eps} k {k}: {re:e} {rf:e}"
                );
            }
            state = next;
        }
    }
}

#[test]
fn parity_mass_is_conserved() {
    for kind in [CaseKind::CaseI, CaseKind::CaseII] {
        let case = builtin(kind, 1.0 / 8.0, 0.5);
        let report = run(&case, &grid(0.1), 5e-3, StepConfig::default(), &[0.5]).unwrap();
        assert!(
            report.max_parity_defect <= 1e-10,
            "{kind}: {:e}",
            report.max_parity_defect
        );
    }
}

#[test]
fn fixed_point_converges_quickly_for_moderate_steps() {
    let case = builtin(CaseKind::CaseII, 1.0 / 4.0, 0.2);
    let report = run(&case, &grid(0.1), 1e-2, StepConfig::default(), &[0.2]).unwrap();
    assert!(report.max_iterations <= 5, "{}", report.max_iterations);
}

#[test]
fn fixed_point_cap_is_reported() {
    let case = builtin(CaseKind::CaseII, 1.0, 0.2);
    let cfg = StepConfig {
        fp_tol: 1e-15,
        fp_max_iter: 1,
        nan_guard: true,
    };
    let err = run(&case, &grid(0.1), 1e-2, cfg, &[0.2]).unwrap_err();
    assert!(
        matches!(err, ZakharovError::FixedPoint { step: 2, .. }),
        "{err}"
    );
}

#[test]
fn shortest_run_and_snapshots() {
    let case = builtin(CaseKind::CaseI, 1.0, 0.02);
    let report = run(
        &case,
        &grid(0.2),
        0.01,
        StepConfig::default(),
        &[0.0, 0.01, 0.02],
    )
    .unwrap();
    assert_eq!(report.steps, 2);
    let ks: Vec<usize> = report.snapshots.iter().map(|s| s.k).collect();
    assert_eq!(ks, vec![0, 1, 2]);
    let e0 = &report.snapshots[0].e;
    assert!((e0.get(160) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    assert!(run(&case, &grid(0.2), 0.03, StepConfig::default(), &[0.02]).is_err());
}

#[test]
fn step_count_rejects_non_multiples() {
    assert_eq!(step_count(1.0, 0.1).unwrap(), 10);
    assert_eq!(step_count(1.0, 0.1 / 128.0).unwrap(), 1280);
    assert!(step_count(1.0, 0.3).is_err());
}

#[test]
fn recovered_density_at_time_zero() {
    // N(0) = -|E_0|^2 + F(0) + G(0) = N_0
    let eps = 0.5;
    let case = builtin(CaseKind::CaseI, eps, 1.0);
    let g = grid(0.25);
    let solver = FdSolver::new(&case, &g, 0.01, StepConfig::default()).unwrap();
    let state = solver.initial_state().unwrap();
    let n = recover_n(&state.e_prev, &state.f_prev, solver.modes(), 0.0);
    for j in 1..g.cells() {
        let x = g.x(j);
        let expected = -(-x * x).exp() + eps * (-x * x / 4.0).exp();
        assert!((n.get(j) - expected).abs() < 1e-13);
    }
}

#[test]
fn temporal_self_convergence_is_second_order() {
    let case = builtin(CaseKind::CaseI, 1.0, 1.0);
    let g = grid(0.1);
    let e_at = |tau: f64| {
        run(&case, &g, tau, StepConfig::default(), &[1.0])
            .unwrap()
            .snapshots[0]
            .e
            .clone()
    };
    let (a, b, c) = (e_at(0.01), e_at(0.005), e_at(0.0025));
    let ratio = (&a - &b).norm_h1() / (&b - &c).norm_h1();
    assert!((ratio - 4.0).abs() < 0.4, "ratio {ratio}");
}

#[test]
fn spatial_self_convergence_is_second_order() {
    let case = builtin(CaseKind::CaseII, 0.5, 0.25);
    let e_at = |h: f64| {
        run(&case, &grid(h), 2.5e-3, StepConfig::default(), &[0.25])
            .unwrap()
            .snapshots[0]
            .e
            .clone()
    };
    let (fine, mid, coarse) = (e_at(0.05), e_at(0.1), e_at(0.2));
    let cg = *coarse.grid();
    let d1 = (&coarse - &mid.restrict_to(&cg).unwrap()).norm_h1();
    let d2 = (&mid.restrict_to(&cg).unwrap() - &fine.restrict_to(&cg).unwrap()).norm_h1();
    assert!((d1 / d2 - 4.0).abs() < 0.5, "ratio {}", d1 / d2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn cayley_update_is_unitary_and_reversible(
        re in prop::collection::vec(-1.0f64..1.0, 31),
        im in prop::collection::vec(-1.0f64..1.0, 31),
        c in prop::collection::vec(-3.0f64..3.0, 31),
        tau in 1e-4f64..0.5,
    ) {
        let g = Grid1D::new(-4.0, 4.0, 32).unwrap();
        let e: Vec<Complex64> = re.iter().zip(&im).map(|(&a, &b)| Complex64::new(a, b)).collect();
        let e = ComplexField::from_interior(g, &e);
        let c = RealField::from_interior(g, &c);
        let forward = cayley_update(tau, &c, &e).unwrap();
        prop_assert!((forward.norm_l2() - e.norm_l2()).abs() < 1e-11 * (1.0 + e.norm_l2()));
        let back = cayley_update(-tau, &c, &forward).unwrap();
        prop_assert!((&back - &e).max_abs() < 1e-10);
    }
}
