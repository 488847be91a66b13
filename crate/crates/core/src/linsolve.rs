//! Tridiagonal solves behind the implicit `F` and `E` updates.

use num_complex::Complex64;

use crate::error::{Result, ZakharovError};
use crate::grid::{ComplexField, RealField, Scalar};

const PIVOT_FLOOR: f64 = 1e-300;

/// Thomas elimination for a tridiagonal system with a constant off-diagonal.
///
/// Row `j` reads `off * x_{j-1} + diag(j) * x_j + off * x_{j+1} = rhs_j`.
pub fn thomas_constant_offdiag<T: Scalar>(
    off: f64,
    diag: impl Fn(usize) -> T,
    rhs: &[T],
    out: &mut [T],
) -> Result<()> {
    let n = rhs.len();
    assert_eq!(out.len(), n);
    if n == 0 {
        return Ok(());
    }
    // `out` holds the modified right-hand side, `upper` the modified superdiagonal.
    let mut upper = vec![T::zero(); n];
    let one = T::from_real(1.0);
    let mut pivot = diag(0);
    check_pivot(pivot, 0)?;
    let mut inv = one / pivot;
    upper[0] = inv * off;
    out[0] = rhs[0] * inv;
    for j in 1..n {
        pivot = diag(j) - upper[j - 1] * off;
        check_pivot(pivot, j)?;
        inv = one / pivot;
        upper[j] = inv * off;
        out[j] = (rhs[j] - out[j - 1] * off) * inv;
    }
    for j in (0..n - 1).rev() {
        let next = out[j + 1];
        out[j] = out[j] - upper[j] * next;
    }
    Ok(())
}

fn check_pivot<T: Scalar>(pivot: T, row: usize) -> Result<()> {
    let mag = pivot.abs_sq().sqrt();
    if !(mag >= PIVOT_FLOOR) {
        return Err(ZakharovError::PivotBreakdown { row, pivot: mag });
    }
    Ok(())
}

/// Solves `sigma u - (1/2) delta_x^2 u = rhs` for `u` in `X_M`.
pub fn solve_real_helmholtz(sigma: f64, rhs: &RealField) -> Result<RealField> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(ZakharovError::Config(format!(
            "Helmholtz shift must be positive and finite, got {sigma}"
        )));
    }
    let grid = *rhs.grid();
    let inv_h2 = 1.0 / (grid.h() * grid.h());
    let d = sigma + inv_h2;
    let mut out = RealField::zeros(grid);
    thomas_constant_offdiag(-0.5 * inv_h2, |_| d, rhs.interior(), out.interior_mut())?;
    Ok(out)
}

/// Factored form of `sigma - (1/2) delta_x^2` for repeated solves.
#[derive(Debug, Clone)]
pub struct HelmholtzFactor {
    sigma: f64,
    off: f64,
    upper: Vec<f64>,
    inv_pivot: Vec<f64>,
}

impl HelmholtzFactor {
    pub fn new(sigma: f64, grid: &crate::grid::Grid1D) -> Result<Self> {
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(ZakharovError::Config(format!(
                "Helmholtz shift must be positive and finite, got {sigma}"
            )));
        }
        let inv_h2 = 1.0 / (grid.h() * grid.h());
        let off = -0.5 * inv_h2;
        let d = sigma + inv_h2;
        let n = grid.cells() - 1;
        let mut upper = vec![0.0; n];
        let mut inv_pivot = vec![0.0; n];
        let mut prev_upper = 0.0;
        for j in 0..n {
            let pivot = d - prev_upper * off;
            check_pivot(pivot, j)?;
            inv_pivot[j] = 1.0 / pivot;
            upper[j] = off * inv_pivot[j];
            prev_upper = upper[j];
        }
        Ok(Self {
            sigma,
            off,
            upper,
            inv_pivot,
        })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Overwrites `x` (interior values) with the solution for right-hand side `x`.
    pub fn solve_in_place(&self, x: &mut [f64]) {
        let n = x.len();
        assert_eq!(n, self.upper.len(), "Helmholtz factor size mismatch");
        if n == 0 {
            return;
        }
        x[0] *= self.inv_pivot[0];
        for j in 1..n {
            x[j] = (x[j] - x[j - 1] * self.off) * self.inv_pivot[j];
        }
        for j in (0..n - 1).rev() {
            x[j] -= self.upper[j] * x[j + 1];
        }
    }
}

/// Solves `lambda u - (-delta_x^2 u + c u) = rhs` for `u` in `X_M`.
pub fn solve_complex_tridiagonal(
    lambda: Complex64,
    c: &RealField,
    rhs: &ComplexField,
) -> Result<ComplexField> {
    assert!(
        c.grid() == rhs.grid(),
        "potential and rhs on different grids"
    );
    let grid = *rhs.grid();
    let mut out = ComplexField::zeros(grid);
    let mut upper = vec![Complex64::new(0.0, 0.0); grid.cells() - 1];
    complex_tridiagonal_into(
        lambda,
        1.0 / (grid.h() * grid.h()),
        c.interior(),
        rhs.interior(),
        out.interior_mut(),
        &mut upper,
    )?;
    Ok(out)
}

/// Slice form of [`solve_complex_tridiagonal`] on interior values, with
/// caller-provided elimination storage `upper`.
pub fn complex_tridiagonal_into(
    lambda: Complex64,
    inv_h2: f64,
    pot: &[f64],
    rhs: &[Complex64],
    out: &mut [Complex64],
    upper: &mut [Complex64],
) -> Result<()> {
    let n = rhs.len();
    assert!(pot.len() == n && out.len() == n && upper.len() == n);
    let base = lambda - 2.0 * inv_h2;
    // Row j: inv_h2 x_{j-1} + (base - c_j) x_j + inv_h2 x_{j+1} = b_j.
    let mut prev_upper = Complex64::new(0.0, 0.0);
    let mut prev_x = Complex64::new(0.0, 0.0);
    for j in 0..n {
        let p = Complex64::new(base.re - pot[j], base.im) - prev_upper * inv_h2;
        let mag2 = p.norm_sqr();
        if !(mag2.sqrt() >= PIVOT_FLOOR) {
            return Err(ZakharovError::PivotBreakdown {
                row: j,
                pivot: mag2.sqrt(),
            });
        }
        let inv = p.conj() * (1.0 / mag2);
        prev_upper = inv * inv_h2;
        prev_x = (rhs[j] - prev_x * inv_h2) * inv;
        upper[j] = prev_upper;
        out[j] = prev_x;
    }
    for j in (0..n.saturating_sub(1)).rev() {
        let next = out[j + 1];
        out[j] -= upper[j] * next;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid1D;
    use std::f64::consts::PI;

    fn grid() -> Grid1D {
        Grid1D::new(-2.0, 3.0, 40).unwrap()
    }

    #[test]
    fn zero_rhs_gives_zero() {
        let g = grid();
        let u = solve_real_helmholtz(3.0, &RealField::zeros(g)).unwrap();
        assert!(u.values().iter().all(|&v| v == 0.0));
        let c = RealField::from_fn(g, |x| x.sin());
        let v = solve_complex_tridiagonal(Complex64::new(0.0, 10.0), &c, &ComplexField::zeros(g))
            .unwrap();
        assert!(v.values().iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn helmholtz_recovers_constructed_solution() {
        let g = grid();
        let sigma = 7.5;
        let exact = RealField::from_fn(g, |x| (3.0 * PI * (x - g.a()) / g.length()).sin());
        let rhs = &exact.scale(sigma) - &exact.delta_x2().scale(0.5);
        let u = solve_real_helmholtz(sigma, &rhs).unwrap();
        assert!((&u - &exact).max_abs() < 1e-12);
    }

    #[test]
    fn factored_helmholtz_matches_direct_solve() {
        let g = grid();
        let rhs = RealField::from_fn(g, |x| (x * 1.7).cos() * (-x * x).exp());
        let direct = solve_real_helmholtz(2.5, &rhs).unwrap();
        let factor = HelmholtzFactor::new(2.5, &g).unwrap();
        let mut u = rhs.clone();
        factor.solve_in_place(u.interior_mut());
        assert!((&u - &direct).max_abs() < 1e-14);
        assert!(HelmholtzFactor::new(0.0, &g).is_err());
    }

    #[test]
    fn complex_solve_on_sine_mode() {
        let g = grid();
        let h = g.h();
        let lambda = Complex64::new(0.0, 1.0 / 0.01);
        let l = 2.0;
        let mode = RealField::from_fn(g, |x| (l * PI * (x - g.a()) / g.length()).sin());
        // -delta_x^2 has eigenvalue (4/h^2) sin^2(l pi h / (2 (b - a)))
        let eig = 4.0 / (h * h) * (l * PI * h / (2.0 * g.length())).sin().powi(2);
        let rhs = mode.to_complex().map(|v| v * (lambda - eig));
        let u = solve_complex_tridiagonal(lambda, &RealField::zeros(g), &rhs).unwrap();
        assert!((&u - &mode.to_complex()).max_abs() < 1e-12);
    }

    #[test]
    fn nonpositive_shift_is_rejected() {
        assert!(solve_real_helmholtz(0.0, &RealField::zeros(grid())).is_err());
    }

    #[test]
    fn pivot_breakdown_is_reported() {
        let g = Grid1D::new(0.0, 1.0, 4).unwrap();
        // lambda chosen so the first pivot vanishes exactly
        let inv_h2 = 1.0 / (g.h() * g.h());
        let lambda = Complex64::new(2.0 * inv_h2, 0.0);
        let rhs = ComplexField::from_fn(g, |_| Complex64::new(1.0, 0.0));
        let err = solve_complex_tridiagonal(lambda, &RealField::zeros(g), &rhs).unwrap_err();
        assert!(matches!(err, ZakharovError::PivotBreakdown { row: 0, .. }));
    }
}
