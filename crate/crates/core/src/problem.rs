//! Physical test cases, initial-data decomposition and the Taylor first step.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use log::warn;
use num_complex::Complex64;

use crate::error::{Result, ZakharovError};
use crate::grid::{ComplexField, Grid1D, RealField};

/// Boundary magnitude above which a truncation warning is logged.
pub const TRUNCATION_WARN: f64 = 1e-8;
/// Boundary magnitude above which the case is rejected.
pub const TRUNCATION_ERROR: f64 = 1e-4;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Complex initial envelope `E_0`.
pub trait ComplexProfile: Send + Sync {
    fn value(&self, x: f64) -> Complex64;

    /// `[f, f', f'', f''', f'''']` at `x`, when known in closed form.
    fn derivatives(&self, _x: f64) -> Option<[Complex64; 5]> {
        None
    }
}

/// Real perturbation profile (`omega_0`, `omega_1`).
pub trait RealProfile: Send + Sync {
    fn value(&self, x: f64) -> f64;

    /// `[f, f', f'']` at `x`, when known in closed form.
    fn derivatives(&self, _x: f64) -> Option<[f64; 3]> {
        None
    }
}

/// `exp(-x^2 / (2 s^2))`, real-valued.
#[derive(Debug, Clone, Copy)]
pub struct Gaussian {
    pub width: f64,
}

impl Gaussian {
    fn derivs(&self, x: f64) -> [f64; 5] {
        let s2 = self.width * self.width;
        let g = (-x * x / (2.0 * s2)).exp();
        let y = x / s2;
        let k = 1.0 / s2;
        // Hermite-type recurrences for derivatives of exp(-x^2 / (2 s^2))
        [
            g,
            -y * g,
            (y * y - k) * g,
            (-y * y * y + 3.0 * k * y) * g,
            (y.powi(4) - 6.0 * k * y * y + 3.0 * k * k) * g,
        ]
    }
}

impl ComplexProfile for Gaussian {
    fn value(&self, x: f64) -> Complex64 {
        Complex64::new(self.derivs(x)[0], 0.0)
    }

    fn derivatives(&self, x: f64) -> Option<[Complex64; 5]> {
        Some(self.derivs(x).map(|v| Complex64::new(v, 0.0)))
    }
}

impl RealProfile for Gaussian {
    fn value(&self, x: f64) -> f64 {
        self.derivs(x)[0]
    }

    fn derivatives(&self, x: f64) -> Option<[f64; 3]> {
        let d = self.derivs(x);
        Some([d[0], d[1], d[2]])
    }
}

/// `exp(-x^2 / 3) sin(x)`, the builtin `omega_1`.
#[derive(Debug, Clone, Copy)]
pub struct GaussianSine;

impl RealProfile for GaussianSine {
    fn value(&self, x: f64) -> f64 {
        (-x * x / 3.0).exp() * x.sin()
    }

    fn derivatives(&self, x: f64) -> Option<[f64; 3]> {
        let g = (-x * x / 3.0).exp();
        let (s, c) = x.sin_cos();
        let gp = -2.0 * x / 3.0 * g;
        let gpp = (4.0 * x * x / 9.0 - 2.0 / 3.0) * g;
        Some([g * s, gp * s + g * c, gpp * s + 2.0 * gp * c - g * s])
    }
}

/// Identically zero profile.
#[derive(Debug, Clone, Copy)]
pub struct Zero;

impl ComplexProfile for Zero {
    fn value(&self, _x: f64) -> Complex64 {
        Complex64::new(0.0, 0.0)
    }
    fn derivatives(&self, _x: f64) -> Option<[Complex64; 5]> {
        Some([Complex64::new(0.0, 0.0); 5])
    }
}

impl RealProfile for Zero {
    fn value(&self, _x: f64) -> f64 {
        0.0
    }
    fn derivatives(&self, _x: f64) -> Option<[f64; 3]> {
        Some([0.0; 3])
    }
}

/// `amplitude * sqrt(2) * a * sech(a x)`, the bright soliton profile of the cubic NLSE.
#[derive(Debug, Clone, Copy)]
pub struct Sech {
    pub a: f64,
}

impl ComplexProfile for Sech {
    fn value(&self, x: f64) -> Complex64 {
        Complex64::new(2f64.sqrt() * self.a / (self.a * x).cosh(), 0.0)
    }
}

/// Profile given by a closure without closed-form derivatives; the setup
/// falls back to second differences on the grid.
pub struct SampledComplex<F>(pub F);

impl<F: Fn(f64) -> Complex64 + Send + Sync> ComplexProfile for SampledComplex<F> {
    fn value(&self, x: f64) -> Complex64 {
        (self.0)(x)
    }
}

pub struct SampledReal<F>(pub F);

impl<F: Fn(f64) -> f64 + Send + Sync> RealProfile for SampledReal<F> {
    fn value(&self, x: f64) -> f64 {
        (self.0)(x)
    }
}

/// The three profiles defining a case: `E_0`, `omega_0`, `omega_1`.
#[derive(Clone)]
pub struct ProfileSet {
    pub e0: Arc<dyn ComplexProfile>,
    pub omega0: Arc<dyn RealProfile>,
    pub omega1: Arc<dyn RealProfile>,
}

impl ProfileSet {
    /// `E_0 = exp(-x^2/2)`, `omega_0 = exp(-x^2/4)`, `omega_1 = exp(-x^2/3) sin x`.
    pub fn builtin() -> Self {
        Self {
            e0: Arc::new(Gaussian { width: 1.0 }),
            omega0: Arc::new(Gaussian { width: 2f64.sqrt() }),
            omega1: Arc::new(GaussianSine),
        }
    }

    pub fn new(
        e0: Arc<dyn ComplexProfile>,
        omega0: Arc<dyn RealProfile>,
        omega1: Arc<dyn RealProfile>,
    ) -> Self {
        Self { e0, omega0, omega1 }
    }
}

impl fmt::Debug for ProfileSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ProfileSet { .. }")
    }
}

/// The two named initial-data regimes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseKind {
    /// Well-prepared data, `alpha = 1`, `beta = 0`.
    CaseI,
    /// Ill-prepared data, `alpha = beta = 0`.
    CaseII,
}

impl CaseKind {
    pub fn alpha(self) -> f64 {
        match self {
            CaseKind::CaseI => 1.0,
            CaseKind::CaseII => 0.0,
        }
    }

    pub fn beta(self) -> f64 {
        0.0
    }

    pub fn name(self) -> &'static str {
        match self {
            CaseKind::CaseI => "case-I",
            CaseKind::CaseII => "case-II",
        }
    }
}

impl fmt::Display for CaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CaseKind {
    type Err = ZakharovError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "case-i" | "i" | "1" => Ok(CaseKind::CaseI),
            "case-ii" | "ii" | "2" => Ok(CaseKind::CaseII),
            other => Err(ZakharovError::Config(format!(
                "unknown case '{other}' (expected case-I or case-II)"
            ))),
        }
    }
}

/// Parameters and profiles of one Zakharov problem.
#[derive(Debug, Clone)]
pub struct PhysicalCase {
    pub epsilon: f64,
    pub alpha: f64,
    pub beta: f64,
    pub domain: (f64, f64),
    pub final_time: f64,
    pub profiles: ProfileSet,
}

impl PhysicalCase {
    pub fn new(
        epsilon: f64,
        alpha: f64,
        beta: f64,
        domain: (f64, f64),
        final_time: f64,
        profiles: ProfileSet,
    ) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(ZakharovError::Config(format!(
                "epsilon must lie in (0, 1], got {epsilon}"
            )));
        }
        if !(alpha >= 0.0 && beta >= 0.0) {
            return Err(ZakharovError::Config(format!(
                "alpha and beta must be nonnegative, got ({alpha}, {beta})"
            )));
        }
        if !(final_time > 0.0) {
            return Err(ZakharovError::Config(format!(
                "final time must be positive, got {final_time}"
            )));
        }
        if !(domain.1 > domain.0) {
            return Err(ZakharovError::Config(format!(
                "domain must satisfy a < b, got {domain:?}"
            )));
        }
        Ok(Self {
            epsilon,
            alpha,
            beta,
            domain,
            final_time,
            profiles,
        })
    }

    /// Builtin profiles with the parameters of `kind`.
    pub fn builtin(
        kind: CaseKind,
        epsilon: f64,
        domain: (f64, f64),
        final_time: f64,
    ) -> Result<Self> {
        Self::new(
            epsilon,
            kind.alpha(),
            kind.beta(),
            domain,
            final_time,
            ProfileSet::builtin(),
        )
    }

    pub fn alpha_star(&self) -> f64 {
        self.alpha.min(1.0)
    }

    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self> {
        Self::new(
            epsilon,
            self.alpha,
            self.beta,
            self.domain,
            self.final_time,
            self.profiles.clone(),
        )
    }

    /// Checks that every profile has decayed at both endpoints. Returns the
    /// largest boundary magnitude found.
    pub fn check_truncation(&self) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for x in [self.domain.0, self.domain.1] {
            worst = worst
                .max(self.profiles.e0.value(x).norm())
                .max(self.profiles.omega0.value(x).abs())
                .max(self.profiles.omega1.value(x).abs());
        }
        if worst > TRUNCATION_ERROR {
            return Err(ZakharovError::Truncation {
                magnitude: worst,
                limit: TRUNCATION_ERROR,
            });
        }
        if worst > TRUNCATION_WARN {
            warn!(
                "profiles reach {worst:.3e} at the domain boundary; Dirichlet truncation may pollute results"
            );
        }
        Ok(worst)
    }

    /// Trapezoidal integral of `omega_1` over the domain; logs a warning when
    /// it is not numerically zero.
    pub fn omega1_mean_diagnostic(&self, grid: &Grid1D) -> f64 {
        let w = &self.profiles.omega1;
        let m = grid.cells();
        let inner: f64 = (1..m).map(|j| w.value(grid.x(j))).sum();
        let integral = grid.h() * (inner + 0.5 * (w.value(grid.a()) + w.value(grid.b())));
        if integral.abs() > TRUNCATION_WARN {
            warn!("integral of omega_1 is {integral:.3e}, not zero");
        }
        integral
    }
}

/// How second derivatives of the profiles are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DerivativeMode {
    /// Closed-form derivatives when every profile provides them, else finite differences.
    #[default]
    Auto,
    /// Always use `delta_x^2` on the sampled profiles.
    FiniteDifference,
}

/// `(N_0^eps, N_1^eps)` sampled on the grid.
pub fn build_perturbed_density(
    case: &PhysicalCase,
    grid: &Grid1D,
    mode: DerivativeMode,
) -> Result<(RealField, RealField)> {
    case.check_truncation()?;
    let e0 = sample_e0(case, grid);
    let e0_xx = e0_second_derivative(case, grid, &e0, mode);
    let pert0 = case.epsilon.powf(case.alpha);
    let pert1 = case.epsilon.powf(case.beta);
    let omega0 = RealField::from_fn(*grid, |x| case.profiles.omega0.value(x));
    let omega1 = RealField::from_fn(*grid, |x| case.profiles.omega1.value(x));

    let n0 = e0.zip_map(&omega0, |e, w| -e.norm_sqr() + pert0 * w);
    let phi1 = e0_xx.zip_map(&e0, |exx, e| 2.0 * (exx * e.conj()).im);
    let n1 = phi1.zip_map(&omega1, |p, w| p + pert1 * w);
    Ok((n0, n1))
}

/// The time derivatives `phi_1..phi_4` of the solution at `t = 0`.
#[derive(Debug, Clone)]
pub struct PhiFunctions {
    pub phi1: RealField,
    pub phi2: ComplexField,
    pub phi3: ComplexField,
    pub phi4: RealField,
}

pub fn compute_phi_functions(
    case: &PhysicalCase,
    grid: &Grid1D,
    n0: &RealField,
    n1: &RealField,
    mode: DerivativeMode,
) -> PhiFunctions {
    if mode == DerivativeMode::Auto && has_analytic_derivatives(case) {
        analytic_phis(case, grid, n0, n1)
    } else {
        finite_difference_phis(case, grid, n0, n1)
    }
}

fn has_analytic_derivatives(case: &PhysicalCase) -> bool {
    let p = &case.profiles;
    p.e0.derivatives(0.0).is_some()
        && p.omega0.derivatives(0.0).is_some()
        && p.omega1.derivatives(0.0).is_some()
}

fn sample_e0(case: &PhysicalCase, grid: &Grid1D) -> ComplexField {
    ComplexField::from_fn(*grid, |x| case.profiles.e0.value(x))
}

fn e0_second_derivative(
    case: &PhysicalCase,
    grid: &Grid1D,
    e0: &ComplexField,
    mode: DerivativeMode,
) -> ComplexField {
    if mode == DerivativeMode::Auto {
        if case.profiles.e0.derivatives(0.0).is_some() {
            return ComplexField::from_fn(*grid, |x| {
                case.profiles
                    .e0
                    .derivatives(x)
                    .map_or(Complex64::new(0.0, 0.0), |d| d[2])
            });
        }
    }
    e0.delta_x2()
}

fn analytic_phis(
    case: &PhysicalCase,
    grid: &Grid1D,
    n0: &RealField,
    n1: &RealField,
) -> PhiFunctions {
    let p = &case.profiles;
    let pert0 = case.epsilon.powf(case.alpha);
    let m = grid.cells();
    let mut phi1 = RealField::zeros(*grid);
    let mut phi2 = ComplexField::zeros(*grid);
    let mut phi3 = ComplexField::zeros(*grid);
    let mut phi4 = RealField::zeros(*grid);
    for j in 1..m {
        let x = grid.x(j);
        let e = p.e0.derivatives(x).expect("analytic E0");
        let w = p.omega0.derivatives(x).expect("analytic omega0");
        // N_0 = -|E_0|^2 + eps^alpha omega_0 and its first two derivatives
        let rho1 = 2.0 * (e[1] * e[0].conj()).re;
        let rho2 = 2.0 * (e[2] * e[0].conj()).re + 2.0 * e[1].norm_sqr();
        let nn0 = n0.get(j);
        let nn0_x = -rho1 + pert0 * w[1];
        let nn0_xx = -rho2 + pert0 * w[2];

        let p2 = I * (e[2] - nn0 * e[0]);
        let p2_xx = I * (e[4] - nn0_xx * e[0] - 2.0 * nn0_x * e[1] - nn0 * e[2]);
        phi1.interior_mut()[j - 1] = 2.0 * (e[2] * e[0].conj()).im;
        phi2.interior_mut()[j - 1] = p2;
        phi3.interior_mut()[j - 1] = I * (p2_xx - n1.get(j) * e[0] - nn0 * p2);
        phi4.interior_mut()[j - 1] = 2.0 * (p2 * e[2].conj() + e[0] * p2_xx.conj()).im;
    }
    PhiFunctions {
        phi1,
        phi2,
        phi3,
        phi4,
    }
}

fn finite_difference_phis(
    case: &PhysicalCase,
    grid: &Grid1D,
    n0: &RealField,
    n1: &RealField,
) -> PhiFunctions {
    let e0 = sample_e0(case, grid);
    let e0_xx = e0.delta_x2();
    let phi1 = e0_xx.zip_map(&e0, |exx, e| 2.0 * (exx * e.conj()).im);
    let n0e0 = n0.zip_map(&e0, |n, e| e * n);
    let phi2 = (&e0_xx - &n0e0).map(|v| I * v);
    let phi2_xx = phi2.delta_x2();
    let n1e0 = n1.zip_map(&e0, |n, e| e * n);
    let n0phi2 = n0.zip_map(&phi2, |n, v| v * n);
    let phi3 = (&(&phi2_xx - &n1e0) - &n0phi2).map(|v| I * v);
    let a = phi2.zip_map(&e0_xx, |p, exx| p * exx.conj());
    let b = e0.zip_map(&phi2_xx, |e, pxx| e * pxx.conj());
    let phi4 = (&a + &b).map(|v| 2.0 * v.im);
    PhiFunctions {
        phi1,
        phi2,
        phi3,
        phi4,
    }
}

/// Starting levels `(E^0, E^1, F^0, F^1)` of the three-level scheme plus the
/// data they were built from.
#[derive(Debug, Clone)]
pub struct InitialState {
    pub e0: ComplexField,
    pub e1: ComplexField,
    pub f0: RealField,
    pub f1: RealField,
    pub phis: PhiFunctions,
    pub n0: RealField,
    pub n1: RealField,
}

pub fn build_first_steps(case: &PhysicalCase, grid: &Grid1D, tau: f64) -> Result<InitialState> {
    build_first_steps_with(case, grid, tau, DerivativeMode::Auto)
}

pub fn build_first_steps_with(
    case: &PhysicalCase,
    grid: &Grid1D,
    tau: f64,
    mode: DerivativeMode,
) -> Result<InitialState> {
    if !(tau > 0.0) {
        return Err(ZakharovError::Config(format!(
            "time step must be positive, got {tau}"
        )));
    }
    let (n0, n1) = build_perturbed_density(case, grid, mode)?;
    let phis = compute_phi_functions(case, grid, &n0, &n1, mode);
    let e0 = sample_e0(case, grid);
    let half_tau2 = 0.5 * tau * tau;
    let e1 = e0
        .zip_map(&phis.phi2, |e, p| e + p * tau)
        .zip_map(&phis.phi3, |e, p| e + p * half_tau2);
    let f1 = phis.phi4.scale(half_tau2);
    Ok(InitialState {
        e0,
        e1,
        f0: RealField::zeros(*grid),
        f1,
        phis,
        n0,
        n1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Grid1D {
        Grid1D::with_spacing(-32.0, 32.0, 0.1).unwrap()
    }

    fn node_of(grid: &Grid1D, x: f64) -> usize {
        ((x - grid.a()) / grid.h()).round() as usize
    }

    #[test]
    fn gaussian_derivatives_match_finite_differences() {
        let g = Gaussian { width: 1.3 };
        let d = g.derivs(0.7);
        let eps = 1e-3;
        let v = |x: f64| g.derivs(x);
        for k in 1..5 {
            let fd = (v(0.7 + eps)[k - 1] - v(0.7 - eps)[k - 1]) / (2.0 * eps);
            assert!((fd - d[k]).abs() < 1e-5, "derivative {k}");
        }
        let s = GaussianSine;
        let ds = s.derivatives(0.4).unwrap();
        let fd1 = (s.value(0.4 + eps) - s.value(0.4 - eps)) / (2.0 * eps);
        let fd2 = (s.value(0.4 + eps) - 2.0 * s.value(0.4) + s.value(0.4 - eps)) / (eps * eps);
        assert!((fd1 - ds[1]).abs() < 1e-6);
        assert!((fd2 - ds[2]).abs() < 1e-5);
    }

    #[test]
    fn real_e0_without_perturbation_has_vanishing_phi1() {
        let g = grid();
        let profiles = ProfileSet::new(
            Arc::new(Gaussian { width: 1.0 }),
            Arc::new(Zero),
            Arc::new(Zero),
        );
        let case = PhysicalCase::new(0.5, 1.0, 0.0, (-32.0, 32.0), 1.0, profiles).unwrap();
        let (n0, n1) = build_perturbed_density(&case, &g, DerivativeMode::Auto).unwrap();
        for j in 1..g.cells() {
            let e = (-g.x(j).powi(2) / 2.0).exp();
            assert!((n0.get(j) + e * e).abs() < 1e-15);
            assert_eq!(n1.get(j), 0.0);
        }
    }

    #[test]
    fn unit_epsilon_ignores_alpha() {
        let g = grid();
        let a = PhysicalCase::builtin(CaseKind::CaseI, 1.0, (-32.0, 32.0), 1.0).unwrap();
        let b = PhysicalCase::builtin(CaseKind::CaseII, 1.0, (-32.0, 32.0), 1.0).unwrap();
        let (na, _) = build_perturbed_density(&a, &g, DerivativeMode::Auto).unwrap();
        let (nb, _) = build_perturbed_density(&b, &g, DerivativeMode::Auto).unwrap();
        assert_eq!(na, nb);
    }

    #[test]
    fn builtin_density_at_origin() {
        let g = grid();
        let case = PhysicalCase::builtin(CaseKind::CaseI, 0.5, (-32.0, 32.0), 1.0).unwrap();
        let (n0, _) = build_perturbed_density(&case, &g, DerivativeMode::Auto).unwrap();
        assert!((n0.get(node_of(&g, 0.0)) - (-1.0 + 0.5)).abs() < 1e-15);
    }

    #[test]
    fn zero_envelope_gives_zero_phis_and_first_step() {
        let g = grid();
        let profiles = ProfileSet::new(
            Arc::new(Zero),
            Arc::new(Gaussian { width: 2.0 }),
            Arc::new(GaussianSine),
        );
        let case = PhysicalCase::new(0.25, 0.0, 0.0, (-32.0, 32.0), 1.0, profiles).unwrap();
        let init = build_first_steps(&case, &g, 0.01).unwrap();
        assert_eq!(init.phis.phi2.max_abs(), 0.0);
        assert_eq!(init.phis.phi3.max_abs(), 0.0);
        assert_eq!(init.phis.phi4.max_abs(), 0.0);
        assert_eq!(init.e1.max_abs(), 0.0);
        assert_eq!(init.f1.max_abs(), 0.0);
    }

    #[test]
    fn phi2_is_imaginary_for_real_data() {
        let g = grid();
        let case = PhysicalCase::builtin(CaseKind::CaseII, 0.25, (-32.0, 32.0), 1.0).unwrap();
        let init = build_first_steps(&case, &g, 0.01).unwrap();
        assert!(init.phis.phi2.values().iter().all(|v| v.re == 0.0));
        assert!(init.phis.phi1.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn phi2_at_origin_for_case_two_unit_epsilon() {
        let g = grid();
        let case = PhysicalCase::builtin(CaseKind::CaseII, 1.0, (-32.0, 32.0), 1.0).unwrap();
        let init = build_first_steps(&case, &g, 0.01).unwrap();
        let v = init.phis.phi2.get(node_of(&g, 0.0));
        assert!((v - Complex64::new(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn first_step_tends_to_initial_data() {
        let g = grid();
        let case = PhysicalCase::builtin(CaseKind::CaseII, 0.5, (-32.0, 32.0), 1.0).unwrap();
        let mut prev = f64::INFINITY;
        for tau in [1e-2, 1e-3, 1e-4] {
            let init = build_first_steps(&case, &g, tau).unwrap();
            let d = (&init.e1 - &init.e0).max_abs();
            assert!(d < prev);
            prev = d;
            assert!(init.f1.max_abs() < tau * tau * 10.0);
        }
        assert!(prev < 1e-3);
    }

    #[test]
    fn finite_difference_fallback_is_second_order() {
        let case = PhysicalCase::builtin(CaseKind::CaseII, 0.5, (-32.0, 32.0), 1.0).unwrap();
        let diff = |h: f64| {
            let g = Grid1D::with_spacing(-32.0, 32.0, h).unwrap();
            let (n0, n1) = build_perturbed_density(&case, &g, DerivativeMode::Auto).unwrap();
            let a = compute_phi_functions(&case, &g, &n0, &n1, DerivativeMode::Auto);
            let f = compute_phi_functions(&case, &g, &n0, &n1, DerivativeMode::FiniteDifference);
            (&a.phi2 - &f.phi2).max_abs()
        };
        let ratio = diff(0.2) / diff(0.1);
        assert!((ratio - 4.0).abs() < 0.8, "ratio {ratio}");
    }

    #[test]
    fn sampled_profiles_use_fallback() {
        let g = grid();
        let profiles = ProfileSet::new(
            Arc::new(SampledComplex(|x: f64| {
                Complex64::new((-x * x / 2.0).exp(), 0.0)
            })),
            Arc::new(SampledReal(|x: f64| (-x * x / 4.0).exp())),
            Arc::new(Zero),
        );
        let case = PhysicalCase::new(0.5, 0.0, 0.0, (-32.0, 32.0), 1.0, profiles).unwrap();
        let builtin = PhysicalCase::builtin(CaseKind::CaseII, 0.5, (-32.0, 32.0), 1.0).unwrap();
        let (n0, n1) = build_perturbed_density(&case, &g, DerivativeMode::Auto).unwrap();
        let sampled = compute_phi_functions(&case, &g, &n0, &n1, DerivativeMode::Auto);
        let (n0b, n1b) = build_perturbed_density(&builtin, &g, DerivativeMode::Auto).unwrap();
        let fd = compute_phi_functions(&builtin, &g, &n0b, &n1b, DerivativeMode::FiniteDifference);
        assert!((&sampled.phi2 - &fd.phi2).max_abs() < 1e-12);
    }

    #[test]
    fn truncation_is_checked() {
        let small = PhysicalCase::builtin(CaseKind::CaseII, 1.0, (-3.0, 3.0), 1.0).unwrap();
        assert!(matches!(
            small.check_truncation(),
            Err(ZakharovError::Truncation { .. })
        ));
        let ok = PhysicalCase::builtin(CaseKind::CaseII, 1.0, (-200.0, 200.0), 1.0).unwrap();
        assert!(ok.check_truncation().unwrap() < 1e-100);
        let g = Grid1D::with_spacing(-200.0, 200.0, 0.1).unwrap();
        assert!(ok.omega1_mean_diagnostic(&g).abs() < 1e-12);
    }

    #[test]
    fn case_names_parse() {
        assert_eq!("case-I".parse::<CaseKind>().unwrap(), CaseKind::CaseI);
        assert_eq!("case-II".parse::<CaseKind>().unwrap(), CaseKind::CaseII);
        assert!("case-III".parse::<CaseKind>().is_err());
        assert!(PhysicalCase::builtin(CaseKind::CaseI, 0.0, (-1.0, 1.0), 1.0).is_err());
        assert!(PhysicalCase::builtin(CaseKind::CaseI, 1.5, (-1.0, 1.0), 1.0).is_err());
    }
}
