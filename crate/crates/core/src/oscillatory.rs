//! Sine-series representation of the free waves `G_1`, `G_2` and the
//! oscillatory potential `G^eps(x, s) = eps^alpha G_1 + eps^(1+beta) G_2`.
//!
//! Each sine mode solves the wave equation exactly in time, so point values,
//! time integrals and window averages of `G^eps` are all closed-form.

use num_complex::Complex64;

use crate::dst::SineTransform;
use crate::error::{Result, ZakharovError};
use crate::grid::{Grid1D, RealField};
use crate::problem::PhysicalCase;

#[derive(Debug, Clone)]
pub struct WaveModes {
    grid: Grid1D,
    transform: SineTransform,
    /// `mu_l = l pi / (b - a)`, `l = 1..M-1`.
    mu: Vec<f64>,
    w0_hat: Vec<f64>,
    w1_hat: Vec<f64>,
    epsilon: f64,
    alpha: f64,
    beta: f64,
    /// `eps^alpha * w0_hat_l`
    amp_cos: Vec<f64>,
    /// `eps^(1+beta) * w1_hat_l / mu_l`
    amp_sin: Vec<f64>,
}

impl WaveModes {
    /// Sine-decomposes `omega_0`, `omega_1` of `case` on `grid`.
    pub fn decompose(case: &PhysicalCase, grid: &Grid1D) -> Result<Self> {
        let (a, b) = case.domain;
        if (grid.a() - a).abs() > 1e-12 * grid.length()
            || (grid.b() - b).abs() > 1e-12 * grid.length()
        {
            return Err(ZakharovError::Config(format!(
                "grid {grid} does not cover the case domain {:?}",
                case.domain
            )));
        }
        let w0: Vec<f64> = (1..grid.cells())
            .map(|j| case.profiles.omega0.value(grid.x(j)))
            .collect();
        let w1: Vec<f64> = (1..grid.cells())
            .map(|j| case.profiles.omega1.value(grid.x(j)))
            .collect();
        Ok(Self::from_samples(
            grid,
            &w0,
            &w1,
            case.epsilon,
            case.alpha,
            case.beta,
        ))
    }

    /// Builds the modes from interior samples of `omega_0` and `omega_1`.
    pub fn from_samples(
        grid: &Grid1D,
        omega0: &[f64],
        omega1: &[f64],
        epsilon: f64,
        alpha: f64,
        beta: f64,
    ) -> Self {
        let transform = SineTransform::new(grid.cells());
        let w0_hat = transform.forward(omega0);
        let w1_hat = transform.forward(omega1);
        Self::from_coefficients(grid, transform, w0_hat, w1_hat, epsilon, alpha, beta)
    }

    fn from_coefficients(
        grid: &Grid1D,
        transform: SineTransform,
        w0_hat: Vec<f64>,
        w1_hat: Vec<f64>,
        epsilon: f64,
        alpha: f64,
        beta: f64,
    ) -> Self {
        let base = std::f64::consts::PI / grid.length();
        let mu: Vec<f64> = (1..grid.cells()).map(|l| l as f64 * base).collect();
        let c0 = epsilon.powf(alpha);
        let c1 = epsilon.powf(1.0 + beta);
        let amp_cos = w0_hat.iter().map(|w| c0 * w).collect();
        let amp_sin = w1_hat.iter().zip(&mu).map(|(w, m)| c1 * w / m).collect();
        Self {
            grid: *grid,
            transform,
            mu,
            w0_hat,
            w1_hat,
            epsilon,
            alpha,
            beta,
            amp_cos,
            amp_sin,
        }
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn transform(&self) -> &SineTransform {
        &self.transform
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn w0_hat(&self) -> &[f64] {
        &self.w0_hat
    }

    pub fn w1_hat(&self) -> &[f64] {
        &self.w1_hat
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    fn synthesize(&self, coeffs: &[f64]) -> RealField {
        RealField::from_interior(self.grid, &self.transform.inverse(coeffs))
    }

    /// `G^eps(x_j, s)` in fast time `s`.
    pub fn evaluate_g(&self, s: f64) -> RealField {
        let coeffs: Vec<f64> = self
            .phases(s)
            .zip(self.amp_cos.iter().zip(&self.amp_sin))
            .map(|(z, (&ac, &as_))| ac * z.re + as_ * z.im)
            .collect();
        self.synthesize(&coeffs)
    }

    /// `exp(i mu_l s)` for `l = 1..M-1`.
    fn phases(&self, s: f64) -> ModePhases {
        ModePhases::new(self.mu.first().copied().unwrap_or(0.0) * s, self.mu.len())
    }

    /// `int_{t0}^{t1} G^eps(x_j, t / eps) dt` from the per-mode antiderivatives.
    pub fn integral_of_g(&self, t0: f64, t1: f64) -> RealField {
        let eps = self.epsilon;
        let coeffs: Vec<f64> = self
            .phases(t1 / eps)
            .zip(self.phases(t0 / eps))
            .zip(self.mu.iter().zip(self.amp_cos.iter().zip(&self.amp_sin)))
            .map(|((z1, z0), (&m, (&ac, &as_)))| {
                let k = eps / m;
                ac * k * (z1.im - z0.im) + as_ * k * (z0.re - z1.re)
            })
            .collect();
        self.synthesize(&coeffs)
    }

    /// The window average `H^{eps,k}` of `G^eps` over `[t_k - tau, t_k + tau]`.
    pub fn averaged_potential(&self, t_k: f64, tau: f64) -> RealField {
        self.averager(tau).at(t_k)
    }

    /// Caches the `tau`-dependent mode factors for repeated averages.
    pub fn averager(&self, tau: f64) -> PotentialAverager {
        self.clone().into_averager(tau)
    }

    pub fn into_averager(self, tau: f64) -> PotentialAverager {
        let eps = self.epsilon;
        let window = self
            .mu
            .iter()
            .map(|&m| eps / (tau * m) * (tau * m / eps).sin())
            .collect();
        PotentialAverager {
            modes: self,
            tau,
            window,
        }
    }
}

/// Evaluates `H^{eps,k}` for a fixed `tau` at successive `t_k`.
#[derive(Debug, Clone)]
pub struct PotentialAverager {
    modes: WaveModes,
    tau: f64,
    /// `sin(tau mu_l / eps) * eps / (tau mu_l)`
    window: Vec<f64>,
}

impl PotentialAverager {
    pub fn modes(&self) -> &WaveModes {
        &self.modes
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn at(&self, t_k: f64) -> RealField {
        let m = &self.modes;
        let eps = m.epsilon;
        let coeffs: Vec<f64> = m
            .phases(t_k / eps)
            .zip(&self.window)
            .zip(m.amp_cos.iter().zip(&m.amp_sin))
            .map(|((z, &w), (&ac, &as_))| w * (ac * z.re + as_ * z.im))
            .collect();
        m.synthesize(&coeffs)
    }
}

/// Iterates `exp(i l theta)`, `l = 1..=count`, by complex rotation with an
/// exact resynchronisation every `RESYNC` terms to bound rounding drift.
struct ModePhases {
    theta: f64,
    step: Complex64,
    current: Complex64,
    l: usize,
    count: usize,
}

const RESYNC: usize = 32;

impl ModePhases {
    fn new(theta: f64, count: usize) -> Self {
        Self {
            theta,
            step: Complex64::from_polar(1.0, theta),
            current: Complex64::new(1.0, 0.0),
            l: 0,
            count,
        }
    }
}

impl Iterator for ModePhases {
    type Item = Complex64;

    fn next(&mut self) -> Option<Complex64> {
        if self.l >= self.count {
            return None;
        }
        self.l += 1;
        self.current = if self.l.is_multiple_of(RESYNC) {
            Complex64::from_polar(1.0, self.l as f64 * self.theta)
        } else {
            self.current * self.step
        };
        Some(self.current)
    }
}
