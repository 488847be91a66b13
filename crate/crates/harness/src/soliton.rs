//! Bright-soliton benchmark for the splitting solver.

use std::sync::Arc;

use num_complex::Complex64;
use zakharov_core::problem::{ProfileSet, Sech, Zero};
use zakharov_core::splitting::solve_nlse_op;
use zakharov_core::{ComplexField, Grid1D, PhysicalCase};

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolitonSpec {
    pub amplitude: f64,
    pub cells: usize,
    pub dt: f64,
    pub final_time: f64,
    pub domain: (f64, f64),
}

impl Default for SolitonSpec {
    fn default() -> Self {
        Self {
            amplitude: 1.0,
            cells: 1024,
            dt: 1e-3,
            final_time: 1.0,
            domain: (-32.0, 32.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolitonReport {
    pub l2_error: f64,
    pub max_mass_drift: f64,
    pub steps: usize,
}

/// Propagates `sqrt(2) a sech(a x)` under `i E_t + E_xx + |E|^2 E = 0` and
/// compares with `sqrt(2) a sech(a x) exp(i a^2 t)`.
pub fn soliton_benchmark(spec: &SolitonSpec) -> Result<SolitonReport> {
    let a = spec.amplitude;
    let profiles = ProfileSet::new(Arc::new(Sech { a }), Arc::new(Zero), Arc::new(Zero));
    let case = PhysicalCase::new(1.0, 0.0, 0.0, spec.domain, spec.final_time, profiles)?;
    let grid = Grid1D::new(spec.domain.0, spec.domain.1, spec.cells)?;
    let report = solve_nlse_op(&case, &grid, spec.dt, &[spec.final_time])?;
    let t = spec.final_time;
    let exact = ComplexField::from_fn(grid, |x| {
        Complex64::from_polar(2f64.sqrt() * a / (a * x).cosh(), a * a * t)
    });
    Ok(SolitonReport {
        l2_error: (&report.snapshots[0].e - &exact).norm_l2(),
        max_mass_drift: report.max_mass_drift,
        steps: report.steps,
    })
}
