//! Error functionals between a run and a finer reference.

use zakharov_core::scheme::Snapshot;
use zakharov_core::{ComplexField, Grid1D, RealField};

use crate::error::{HarnessError, Result};

/// `e = ||E_ref - E|| + ||delta_x^+ (E_ref - E)||`, `n = ||N_ref - N||`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorPair {
    pub e_err: f64,
    pub n_err: f64,
}

pub fn compare(reference: &Snapshot, coarse: &Snapshot) -> Result<ErrorPair> {
    let grid: &Grid1D = coarse.e.grid();
    let e_ref: ComplexField = reference.e.restrict_to(grid).map_err(misaligned)?;
    let n_ref: RealField = reference.n.restrict_to(grid).map_err(misaligned)?;
    Ok(ErrorPair {
        e_err: (&e_ref - &coarse.e).norm_h1(),
        n_err: (&n_ref - &coarse.n).norm_l2(),
    })
}

fn misaligned(err: zakharov_core::ZakharovError) -> HarnessError {
    HarnessError::Config(format!("reference grid not aligned: {err}"))
}

/// `ln(err_coarse / err_fine) / ln(param_coarse / param_fine)`.
pub fn observed_order(
    err_coarse: f64,
    err_fine: f64,
    param_coarse: f64,
    param_fine: f64,
) -> Option<f64> {
    let value = (err_coarse / err_fine).ln() / (param_coarse / param_fine).ln();
    value.is_finite().then_some(value)
}
