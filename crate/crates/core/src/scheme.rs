//! The uniformly accurate three-level finite difference scheme for the
//! reformulated Zakharov system
//!
//! ```text
//! i dt E^k = (-dxx - |E^k|^2 + H^k + (F^{k+1} + F^{k-1})/2) (E^{k+1} + E^{k-1})/2
//! eps^2 dtt F^k = (1/2) dxx (F^{k+1} + F^{k-1}) + eps^2 dtt |E^k|^2
//! ```
//!
//! with `H^k` the window average of the oscillatory potential. The coupled
//! implicit system is solved by Picard iteration: an `F` solve driven by the
//! current guess of `|E^{k+1}|^2` followed by an `E` solve with the updated
//! real potential.

use num_complex::Complex64;

use crate::error::{Result, ZakharovError};
use crate::grid::{ComplexField, Grid1D, RealField};
use crate::linsolve::{complex_tridiagonal_into, solve_complex_tridiagonal, HelmholtzFactor};
use crate::oscillatory::{PotentialAverager, WaveModes};
use crate::problem::{build_first_steps, PhysicalCase};

/// Fixed-point controls for the implicit coupling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepConfig {
    pub fp_tol: f64,
    pub fp_max_iter: usize,
    pub nan_guard: bool,
}

impl Default for StepConfig {
    fn default() -> Self {
        Self {
            fp_tol: 1e-12,
            fp_max_iter: 100,
            nan_guard: true,
        }
    }
}

impl StepConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.fp_tol > 0.0) || self.fp_max_iter == 0 {
            return Err(ZakharovError::Config(format!(
                "fixed-point tolerance must be positive and the iteration cap at least 1, got {:?}",
                self
            )));
        }
        Ok(())
    }
}

/// Two consecutive time levels of the scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverState {
    /// Index of the current level `E^k`.
    pub k: usize,
    pub tau: f64,
    pub e_prev: ComplexField,
    pub e_curr: ComplexField,
    pub f_prev: RealField,
    pub f_curr: RealField,
}

impl SolverState {
    pub fn time(&self) -> f64 {
        self.k as f64 * self.tau
    }
}

/// Per-step diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepReport {
    pub iterations: usize,
    pub residual: f64,
    /// `| ||E^{k+1}||^2 - ||E^{k-1}||^2 |`
    pub parity_defect: f64,
}

/// Solver for one `(case, grid, tau)` configuration.
#[derive(Debug, Clone)]
pub struct FdSolver {
    case: PhysicalCase,
    grid: Grid1D,
    tau: f64,
    cfg: StepConfig,
    averager: PotentialAverager,
    helmholtz: HelmholtzFactor,
}

impl FdSolver {
    pub fn new(case: &PhysicalCase, grid: &Grid1D, tau: f64, cfg: StepConfig) -> Result<Self> {
        cfg.validate()?;
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(ZakharovError::Config(format!(
                "time step must be positive, got {tau}"
            )));
        }
        let modes = WaveModes::decompose(case, grid)?;
        let sigma = case.epsilon * case.epsilon / (tau * tau);
        Ok(Self {
            case: case.clone(),
            grid: *grid,
            tau,
            cfg,
            averager: modes.into_averager(tau),
            helmholtz: HelmholtzFactor::new(sigma, grid)?,
        })
    }

    pub fn case(&self) -> &PhysicalCase {
        &self.case
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn config(&self) -> &StepConfig {
        &self.cfg
    }

    pub fn modes(&self) -> &WaveModes {
        self.averager.modes()
    }

    /// Levels `k = 0, 1` from the initial data and the Taylor first step.
    pub fn initial_state(&self) -> Result<SolverState> {
        let init = build_first_steps(&self.case, &self.grid, self.tau)?;
        Ok(SolverState {
            k: 1,
            tau: self.tau,
            e_prev: init.e0,
            e_curr: init.e1,
            f_prev: init.f0,
            f_curr: init.f1,
        })
    }

    /// `H^{eps,k}` at the current level of `state`.
    pub fn averaged_potential(&self, state: &SolverState) -> RealField {
        self.averager.at(state.time())
    }

    /// Advances `state` by one time step.
    pub fn step(&self, state: &SolverState) -> Result<(SolverState, StepReport)> {
        let h = self.averaged_potential(state);
        self.step_with_potential(state, &h)
    }

    /// Advances `state` with a given averaged potential `h`.
    pub fn step_with_potential(
        &self,
        state: &SolverState,
        h: &RealField,
    ) -> Result<(SolverState, StepReport)> {
        let mut ws = Workspace::new(&self.grid);
        let (e_next, f_next, report) = self.solve_level(state, h, &mut ws)?;
        let next = SolverState {
            k: state.k + 1,
            tau: self.tau,
            e_prev: state.e_curr.clone(),
            e_curr: e_next,
            f_prev: state.f_curr.clone(),
            f_curr: f_next,
        };
        Ok((next, report))
    }

    /// Consuming variant of [`FdSolver::step`] that reuses `ws` between calls.
    fn advance(&self, state: SolverState, ws: &mut Workspace) -> Result<(SolverState, StepReport)> {
        let h = self.averaged_potential(&state);
        let (e_next, f_next, report) = self.solve_level(&state, &h, ws)?;
        let next = SolverState {
            k: state.k + 1,
            tau: self.tau,
            e_prev: state.e_curr,
            e_curr: e_next,
            f_prev: state.f_curr,
            f_curr: f_next,
        };
        Ok((next, report))
    }

    /// Picard iteration for `(E^{k+1}, F^{k+1})`.
    fn solve_level(
        &self,
        state: &SolverState,
        h: &RealField,
        ws: &mut Workspace,
    ) -> Result<(ComplexField, RealField, StepReport)> {
        let grid = self.grid;
        let tau = self.tau;
        let eps = self.case.epsilon;
        let sigma = eps * eps / (tau * tau);
        let inv_h2 = 1.0 / (grid.h() * grid.h());
        let m = grid.cells();
        let lambda = Complex64::new(0.0, 1.0 / tau);

        let (ep, ec) = (state.e_prev.values(), state.e_curr.values());
        let (fp, fc) = (state.f_prev.values(), state.f_curr.values());
        let hv = h.values();
        for j in 1..m {
            let i = j - 1;
            let rho_c = ec[j].norm_sqr();
            let lap_f = (fp[j + 1] - 2.0 * fp[j] + fp[j - 1]) * inv_h2;
            // F right-hand side without the |E^{k+1}|^2 term
            ws.f_base[i] = sigma * (2.0 * fc[j] - fp[j])
                + 0.5 * lap_f
                + sigma * (ep[j].norm_sqr() - 2.0 * rho_c);
            // E potential without the F^{k+1} term
            ws.c_base[i] = -rho_c + hv[j] + 0.5 * fp[j];
            let lap_e = (ep[j + 1] - ep[j] * 2.0 + ep[j - 1]) * inv_h2;
            ws.e_rhs_base[i] = lambda * ep[j] - lap_e;
            ws.e_guess[i] = ec[j] * 2.0 - ep[j];
        }

        let norm_scale = grid.h().sqrt();
        let scale = state.e_curr.norm_l2() + state.f_curr.norm_l2() + self.cfg.fp_tol;
        let threshold = self.cfg.fp_tol * scale;

        ws.f_solve(sigma, &self.helmholtz, false);
        let mut residual = f64::INFINITY;
        for it in 1..=self.cfg.fp_max_iter {
            ws.e_solve(lambda, inv_h2, state.e_prev.interior())?;
            ws.f_solve(sigma, &self.helmholtz, true);
            let de: f64 = ws
                .e_new
                .iter()
                .zip(&ws.e_guess)
                .map(|(a, b)| (a - b).norm_sqr())
                .sum();
            let df: f64 = ws
                .f_new
                .iter()
                .zip(&ws.f_next)
                .map(|(a, b)| (a - b).powi(2))
                .sum();
            residual = norm_scale * (de.sqrt() + df.sqrt());
            std::mem::swap(&mut ws.e_guess, &mut ws.e_new);
            std::mem::swap(&mut ws.f_next, &mut ws.f_new);
            if self.cfg.nan_guard
                && !(residual.is_finite() && ws.e_guess.iter().all(|v| v.is_finite()))
            {
                return Err(ZakharovError::BlowUp {
                    step: state.k + 1,
                    time: (state.k + 1) as f64 * tau,
                });
            }
            if residual <= threshold {
                let e_next = ComplexField::from_interior(grid, &ws.e_guess);
                let f_next = RealField::from_interior(grid, &ws.f_next);
                let parity_defect = (e_next.norm_l2_sq() - state.e_prev.norm_l2_sq()).abs();
                return Ok((
                    e_next,
                    f_next,
                    StepReport {
                        iterations: it,
                        residual,
                        parity_defect,
                    },
                ));
            }
        }
        Err(ZakharovError::FixedPoint {
            step: state.k + 1,
            residual,
        })
    }

    /// Density `N = -|E|^2 + F + G^eps(x, t/eps)`.
    pub fn recover_n(&self, e: &ComplexField, f: &RealField, t: f64) -> RealField {
        recover_n(e, f, self.modes(), t)
    }
}

/// Interior-value buffers for one level solve.
struct Workspace {
    f_base: Vec<f64>,
    f_next: Vec<f64>,
    f_new: Vec<f64>,
    c_base: Vec<f64>,
    c: Vec<f64>,
    e_rhs_base: Vec<Complex64>,
    e_rhs: Vec<Complex64>,
    e_guess: Vec<Complex64>,
    e_new: Vec<Complex64>,
    upper: Vec<Complex64>,
}

impl Workspace {
    fn new(grid: &Grid1D) -> Self {
        let n = grid.cells() - 1;
        let zc = Complex64::new(0.0, 0.0);
        Self {
            f_base: vec![0.0; n],
            f_next: vec![0.0; n],
            f_new: vec![0.0; n],
            c_base: vec![0.0; n],
            c: vec![0.0; n],
            e_rhs_base: vec![zc; n],
            e_rhs: vec![zc; n],
            e_guess: vec![zc; n],
            e_new: vec![zc; n],
            upper: vec![zc; n],
        }
    }

    /// `F` solve driven by `e_new` (when `from_new`) or `e_guess`; writes
    /// `f_new` or `f_next` respectively.
    fn f_solve(&mut self, sigma: f64, helmholtz: &HelmholtzFactor, from_new: bool) {
        let (e, out) = if from_new {
            (&self.e_new, &mut self.f_new)
        } else {
            (&self.e_guess, &mut self.f_next)
        };
        for ((o, &b), v) in out.iter_mut().zip(&self.f_base).zip(e) {
            *o = b + sigma * v.norm_sqr();
        }
        helmholtz.solve_in_place(out);
    }

    /// `E` solve with potential `c = -|E^k|^2 + H^k + (F^{k+1} + F^{k-1})/2`.
    fn e_solve(&mut self, lambda: Complex64, inv_h2: f64, e_prev: &[Complex64]) -> Result<()> {
        for (j, &ep) in e_prev.iter().enumerate() {
            let c = self.c_base[j] + 0.5 * self.f_next[j];
            self.c[j] = c;
            self.e_rhs[j] = self.e_rhs_base[j] + ep * c;
        }
        complex_tridiagonal_into(
            lambda,
            inv_h2,
            &self.c,
            &self.e_rhs,
            &mut self.e_new,
            &mut self.upper,
        )
    }
}

/// One Crank–Nicolson-type `E` update with frozen real potential `c`:
/// solves `i (E^+ - E^-)/(2 tau) = (-dxx + c)(E^+ + E^-)/2` for `E^+`.
pub fn cayley_update(tau: f64, c: &RealField, e_prev: &ComplexField) -> Result<ComplexField> {
    let lambda = Complex64::new(0.0, 1.0 / tau);
    let lap = e_prev.delta_x2();
    let mut rhs = ComplexField::zeros(*e_prev.grid());
    for (((r, &e), &l), &cv) in rhs
        .interior_mut()
        .iter_mut()
        .zip(e_prev.interior())
        .zip(lap.interior())
        .zip(c.interior())
    {
        *r = lambda * e - l + e * cv;
    }
    solve_complex_tridiagonal(lambda, c, &rhs)
}

/// `N = -|E|^2 + F + G^eps(x, t/eps)`.
pub fn recover_n(e: &ComplexField, f: &RealField, modes: &WaveModes, t: f64) -> RealField {
    let g = modes.evaluate_g(t / modes.epsilon());
    let mut n = e.abs_sq().scale(-1.0);
    for ((o, &fv), &gv) in n
        .interior_mut()
        .iter_mut()
        .zip(f.interior())
        .zip(g.interior())
    {
        *o += fv + gv;
    }
    n
}

/// Max-norm residuals of the two raw stencils for a triple of levels.
///
/// Evaluated directly from the difference equations, independently of how
/// the implicit system was solved. Returns `(e_residual, f_residual)`.
#[allow(clippy::too_many_arguments)]
pub fn stencil_residual(
    epsilon: f64,
    tau: f64,
    h: &RealField,
    e_prev: &ComplexField,
    e_curr: &ComplexField,
    e_next: &ComplexField,
    f_prev: &RealField,
    f_curr: &RealField,
    f_next: &RealField,
) -> (f64, f64) {
    let grid = e_curr.grid();
    let dx = grid.h();
    let i = Complex64::new(0.0, 1.0);
    let mut e_res: f64 = 0.0;
    let mut f_res: f64 = 0.0;
    let (ep, ec, en) = (e_prev.values(), e_curr.values(), e_next.values());
    let (fp, fc, fn_) = (f_prev.values(), f_curr.values(), f_next.values());
    let hv = h.values();
    let eps2 = epsilon * epsilon;
    for j in 1..grid.cells() {
        let avg_e = |k: usize| (en[k] + ep[k]) * 0.5;
        let lap_avg = (avg_e(j + 1) - avg_e(j) * 2.0 + avg_e(j - 1)) / (dx * dx);
        let pot = -ec[j].norm_sqr() + hv[j] + 0.5 * (fn_[j] + fp[j]);
        let lhs = i * (en[j] - ep[j]) / (2.0 * tau);
        let rhs = -lap_avg + avg_e(j) * pot;
        e_res = e_res.max((lhs - rhs).norm());

        let dtt_f = (fn_[j] - 2.0 * fc[j] + fp[j]) / (tau * tau);
        let sum_f = |k: usize| fn_[k] + fp[k];
        let lap_f = (sum_f(j + 1) - 2.0 * sum_f(j) + sum_f(j - 1)) / (dx * dx);
        let dtt_rho = (en[j].norm_sqr() - 2.0 * ec[j].norm_sqr() + ep[j].norm_sqr()) / (tau * tau);
        f_res = f_res.max((eps2 * dtt_f - 0.5 * lap_f - eps2 * dtt_rho).abs());
    }
    (e_res, f_res)
}

/// A state snapshot with the recovered density.
#[derive(Debug, Clone)]
pub struct Snapshot {
    pub k: usize,
    pub t: f64,
    pub e: ComplexField,
    pub f: RealField,
    pub n: RealField,
}

/// Result of a full run.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub snapshots: Vec<Snapshot>,
    pub steps: usize,
    pub max_iterations: usize,
    pub total_iterations: usize,
    /// Largest `| ||E^{k+1}||^2 - ||E^{k-1}||^2 |` divided by `||E^0||^2`.
    pub max_parity_defect: f64,
    pub initial_mass: f64,
}

/// Number of steps to reach `final_time` with step `tau`.
pub fn step_count(final_time: f64, tau: f64) -> Result<usize> {
    let n = (final_time / tau).round();
    if n < 1.0 || ((n * tau - final_time).abs() > 1e-9 * final_time.max(tau)) {
        return Err(ZakharovError::Config(format!(
            "final time {final_time} is not an integer multiple of tau = {tau}"
        )));
    }
    Ok(n as usize)
}

/// Runs the scheme from `t = 0` to `case.final_time`, recording snapshots at
/// the steps nearest to `sample_times`.
pub fn run(
    case: &PhysicalCase,
    grid: &Grid1D,
    tau: f64,
    cfg: StepConfig,
    sample_times: &[f64],
) -> Result<RunReport> {
    let solver = FdSolver::new(case, grid, tau, cfg)?;
    solver.run(sample_times)
}

impl FdSolver {
    pub fn run(&self, sample_times: &[f64]) -> Result<RunReport> {
        let tau = self.tau;
        let steps = step_count(self.case.final_time, tau)?;
        let mut targets: Vec<usize> = Vec::with_capacity(sample_times.len());
        for &t in sample_times {
            if !(t >= 0.0 && t <= self.case.final_time + 0.5 * tau) {
                return Err(ZakharovError::Config(format!(
                    "sample time {t} outside [0, {}]",
                    self.case.final_time
                )));
            }
            targets.push(((t / tau).round() as usize).min(steps));
        }
        let mut snapshots: Vec<Option<Snapshot>> = vec![None; targets.len()];
        let mut record = |k: usize, e: &ComplexField, f: &RealField| {
            for (slot, &target) in snapshots.iter_mut().zip(&targets) {
                if target == k && slot.is_none() {
                    let t = k as f64 * tau;
                    *slot = Some(Snapshot {
                        k,
                        t,
                        e: e.clone(),
                        f: f.clone(),
                        n: self.recover_n(e, f, t),
                    });
                }
            }
        };

        let mut state = self.initial_state()?;
        let initial_mass = state.e_prev.norm_l2_sq();
        record(0, &state.e_prev, &state.f_prev);
        record(1, &state.e_curr, &state.f_curr);
        let mut max_iterations = 0;
        let mut total_iterations = 0;
        let mut max_parity: f64 = 0.0;
        let mut ws = Workspace::new(&self.grid);
        while state.k < steps {
            let (next, report) = self.advance(state, &mut ws)?;
            state = next;
            max_iterations = max_iterations.max(report.iterations);
            total_iterations += report.iterations;
            max_parity = max_parity.max(report.parity_defect);
            record(state.k, &state.e_curr, &state.f_curr);
        }
        Ok(RunReport {
            snapshots: snapshots
                .into_iter()
                .map(|s| s.expect("snapshot recorded"))
                .collect(),
            steps,
            max_iterations,
            total_iterations,
            max_parity_defect: if initial_mass > 0.0 {
                max_parity / initial_mass
            } else {
                max_parity
            },
            initial_mass,
        })
    }
}
