//! Quick invariant suite behind `--seed-check`.

use rand::{Rng, SeedableRng};
use zakharov_core::dst::SineTransform;
use zakharov_core::scheme::stencil_residual;
use zakharov_core::{CaseKind, FdSolver, Grid1D, PhysicalCase, RealField, StepConfig, WaveModes};

use crate::error::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct InvariantResult {
    pub name: &'static str,
    pub value: f64,
    pub tolerance: f64,
}

impl InvariantResult {
    pub fn passed(&self) -> bool {
        self.value <= self.tolerance
    }
}

const DOMAIN: (f64, f64) = (-32.0, 32.0);

pub fn run_invariant_suite(seed: u64) -> Result<Vec<InvariantResult>> {
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let mut out = Vec::new();

    let g = Grid1D::new(-1.0, 1.0, 32)?;
    let mut sbp: f64 = 0.0;
    for _ in 0..10 {
        let mut random = || {
            let interior: Vec<f64> = (1..g.cells()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            RealField::from_interior(g, &interior)
        };
        let (u, v) = (random(), random());
        let lhs = u.delta_x2().scale(-1.0).inner(&v);
        let rhs: f64 = u
            .delta_x_plus()
            .iter()
            .zip(v.delta_x_plus())
            .map(|(a, b)| a * b)
            .sum::<f64>()
            * g.h();
        sbp = sbp.max((lhs - rhs).abs() / (1.0 + lhs.abs()));
    }
    out.push(InvariantResult {
        name: "summation-by-parts",
        value: sbp,
        tolerance: 1e-10,
    });

    let t = SineTransform::new(64);
    let v: Vec<f64> = (0..63).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let back = t.inverse(&t.forward(&v));
    let dst = v
        .iter()
        .zip(&back)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    out.push(InvariantResult {
        name: "sine-transform-roundtrip",
        value: dst,
        tolerance: 1e-12,
    });

    let mut avg: f64 = 0.0;
    for _ in 0..3 {
        let eps = [1.0, 0.5, 0.25][rng.gen_range(0..3)];
        let case = PhysicalCase::builtin(CaseKind::CaseII, eps, DOMAIN, 1.0)?;
        let modes = WaveModes::decompose(&case, &Grid1D::with_spacing(DOMAIN.0, DOMAIN.1, 0.5)?)?;
        let tau = rng.gen_range(1e-3..0.05);
        let t_k = rng.gen_range(1..20) as f64 * tau;
        let h = modes.averaged_potential(t_k, tau);
        let f = |t: f64| modes.evaluate_g(t / eps).interior().to_vec();
        let q = adaptive_simpson(&f, t_k - tau, t_k + tau, 1e-13);
        let d = h
            .interior()
            .iter()
            .zip(&q)
            .map(|(a, b)| (a - b / (2.0 * tau)).abs())
            .fold(0.0, f64::max);
        avg = avg.max(d);
    }
    out.push(InvariantResult {
        name: "averaged-potential-quadrature",
        value: avg,
        tolerance: 1e-10,
    });

    let (eps, tau) = (0.25, 1e-3);
    let case = PhysicalCase::builtin(CaseKind::CaseII, eps, DOMAIN, 1.0)?;
    let solver = FdSolver::new(
        &case,
        &Grid1D::with_spacing(DOMAIN.0, DOMAIN.1, 0.1)?,
        tau,
        StepConfig::default(),
    )?;
    let mut state = solver.initial_state()?;
    let mass0 = state.e_prev.norm_l2_sq();
    let (mut stencil, mut parity): (f64, f64) = (0.0, 0.0);
    for _ in 0..40 {
        let hk = solver.averaged_potential(&state);
        let (next, report) = solver.step_with_potential(&state, &hk)?;
        parity = parity.max(report.parity_defect / mass0);
        if rng.gen_bool(0.25) {
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
            stencil = stencil.max(re).max(rf);
        }
        state = next;
    }
    out.push(InvariantResult {
        name: "stencil-residual",
        value: stencil,
        tolerance: 1e-9,
    });
    out.push(InvariantResult {
        name: "mass-parity",
        value: parity,
        tolerance: 1e-10,
    });
    Ok(out)
}

/// Componentwise adaptive Simpson quadrature.
fn adaptive_simpson(f: &dyn Fn(f64) -> Vec<f64>, a: f64, b: f64, tol: f64) -> Vec<f64> {
    fn simpson(fa: &[f64], fm: &[f64], fb: &[f64], w: f64) -> Vec<f64> {
        fa.iter()
            .zip(fm)
            .zip(fb)
            .map(|((x, y), z)| w / 6.0 * (x + 4.0 * y + z))
            .collect()
    }
    #[allow(clippy::too_many_arguments)]
    fn rec(
        f: &dyn Fn(f64) -> Vec<f64>,
        a: f64,
        b: f64,
        fa: &[f64],
        fm: &[f64],
        fb: &[f64],
        whole: Vec<f64>,
        tol: f64,
        depth: usize,
    ) -> Vec<f64> {
        let m = 0.5 * (a + b);
        let (lm, rm) = (f(0.5 * (a + m)), f(0.5 * (m + b)));
        let left = simpson(fa, &lm, fm, m - a);
        let right = simpson(fm, &rm, fb, b - m);
        let err = left
            .iter()
            .zip(&right)
            .zip(&whole)
            .map(|((l, r), w)| (l + r - w).abs())
            .fold(0.0, f64::max);
        if err <= 15.0 * tol || depth > 50 {
            return left
                .iter()
                .zip(&right)
                .zip(&whole)
                .map(|((l, r), w)| l + r + (l + r - w) / 15.0)
                .collect();
        }
        let mut l = rec(f, a, m, fa, &lm, fm, left, 0.5 * tol, depth + 1);
        let r = rec(f, m, b, fm, &rm, fb, right, 0.5 * tol, depth + 1);
        l.iter_mut().zip(r).for_each(|(x, y)| *x += y);
        l
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = simpson(&fa, &fm, &fb, b - a);
    rec(f, a, b, &fa, &fm, &fb, whole, tol, 0)
}
