//! Cross-check of the Zakharov solution against the limiting Schrödinger
//! equation with oscillatory potential.

use rayon::prelude::*;
use zakharov_core::scheme;
use zakharov_core::splitting::solve_nlse_op;
use zakharov_core::{CaseKind, Grid1D, PhysicalCase, StepConfig};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone)]
pub struct LimitSpec {
    pub case: CaseKind,
    pub epsilons: Vec<f64>,
    pub domain: (f64, f64),
    pub final_time: f64,
    pub h: f64,
    /// Step of the Zakharov scheme.
    pub tau: f64,
    /// Splitting step is `min(tau, eps / split_ratio)` rounded to divide `T`.
    pub split_ratio: f64,
    pub step: StepConfig,
}

impl LimitSpec {
    pub fn new(case: CaseKind, epsilons: Vec<f64>) -> Self {
        Self {
            case,
            epsilons,
            domain: (-200.0, 200.0),
            final_time: 1.0,
            h: 0.0125,
            tau: 1e-3,
            split_ratio: 40.0,
            step: StepConfig::default(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.epsilons.is_empty() {
            return Err(HarnessError::Config(
                "limit check needs at least one epsilon".into(),
            ));
        }
        if let Some(e) = self.epsilons.iter().find(|&&e| !(e > 0.0 && e <= 0.25)) {
            return Err(HarnessError::Config(format!(
                "limit check needs eps <= 1/4, got {e}"
            )));
        }
        for w in self.epsilons.windows(2) {
            if ((w[0] / w[1]) - 2.0).abs() > 1e-9 {
                return Err(HarnessError::Config(format!(
                    "limit check epsilons must halve, got {} then {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(())
    }

    fn split_step(&self, eps: f64) -> f64 {
        let target = self.tau.min(eps / self.split_ratio);
        let n = (self.final_time / target).ceil();
        self.final_time / n
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitRow {
    pub epsilon: f64,
    pub split_dt: f64,
    /// `||E - E~|| + ||delta_x^+ (E - E~)||` at the final time.
    pub difference: f64,
    /// Previous difference divided by this one.
    pub ratio: Option<f64>,
    /// Relative parity defect of the Zakharov run.
    pub max_parity_defect: f64,
}

pub fn limit_consistency_check(spec: &LimitSpec, workers: usize) -> Result<Vec<LimitRow>> {
    spec.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| HarnessError::Config(format!("cannot build worker pool: {e}")))?;
    let grid = Grid1D::with_spacing(spec.domain.0, spec.domain.1, spec.h)?;
    let diffs: Vec<Result<(f64, f64, f64)>> = pool.install(|| {
        spec.epsilons
            .par_iter()
            .map(|&eps| {
                let case = PhysicalCase::builtin(spec.case, eps, spec.domain, spec.final_time)?;
                let t = [spec.final_time];
                let zs = scheme::run(&case, &grid, spec.tau, spec.step, &t)?;
                let dt = spec.split_step(eps);
                let nls = solve_nlse_op(&case, &grid, dt, &t)?;
                let diff = (&zs.snapshots[0].e - &nls.snapshots[0].e).norm_h1();
                Ok((dt, diff, zs.max_parity_defect))
            })
            .collect()
    });
    let mut rows = Vec::with_capacity(diffs.len());
    let mut prev: Option<f64> = None;
    for (&epsilon, d) in spec.epsilons.iter().zip(diffs) {
        let (split_dt, difference, max_parity_defect) = d?;
        rows.push(LimitRow {
            epsilon,
            split_dt,
            difference,
            ratio: prev.map(|p| p / difference),
            max_parity_defect,
        });
        prev = Some(difference);
    }
    Ok(rows)
}
