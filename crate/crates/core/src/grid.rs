//! Uniform Dirichlet grid and grid functions in `X_M`.
//!
//! A [`Field`] always has `M + 1` entries with both boundary entries equal to
//! zero. Mutation is only possible through [`Field::interior_mut`], so the
//! homogeneous Dirichlet condition cannot be broken after construction.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Result, ZakharovError};

/// Uniform grid `x_j = a + j h`, `j = 0..=M`, on `[a, b]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    a: f64,
    b: f64,
    cells: usize,
    h: f64,
}

impl Grid1D {
    pub const MIN_CELLS: usize = 4;

    pub fn new(a: f64, b: f64, cells: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || b <= a {
            return Err(ZakharovError::Config(format!(
                "grid endpoints must satisfy a < b, got [{a}, {b}]"
            )));
        }
        if cells < Self::MIN_CELLS {
            return Err(ZakharovError::Config(format!(
                "grid needs at least {} cells, got {cells}",
                Self::MIN_CELLS
            )));
        }
        Ok(Self {
            a,
            b,
            cells,
            h: (b - a) / cells as f64,
        })
    }

    /// Grid with mesh size `h`; `(b - a) / h` must be an integer up to rounding.
    pub fn with_spacing(a: f64, b: f64, h: f64) -> Result<Self> {
        if !(h > 0.0) {
            return Err(ZakharovError::Config(format!(
                "mesh size must be positive, got {h}"
            )));
        }
        let ratio = (b - a) / h;
        let cells = ratio.round();
        if (ratio - cells).abs() > 1e-8 * ratio.max(1.0) {
            return Err(ZakharovError::Config(format!(
                "mesh size {h} does not divide the domain [{a}, {b}]"
            )));
        }
        Self::new(a, b, cells as usize)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Number of cells `M`.
    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    /// Number of nodes, `M + 1`.
    pub fn len(&self) -> usize {
        self.cells + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn x(&self, j: usize) -> f64 {
        if j == self.cells {
            self.b
        } else {
            self.a + j as f64 * self.h
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.cells).map(|j| self.x(j)).collect()
    }

    /// Same interval with `factor` times as many cells; node `j` of `self`
    /// is node `factor * j` of the result.
    pub fn refined(&self, factor: usize) -> Result<Self> {
        Self::new(self.a, self.b, self.cells * factor.max(1))
    }

    /// Integer `r` with `fine.cells() == r * self.cells()` on the same interval.
    pub fn subset_ratio(&self, fine: &Grid1D) -> Option<usize> {
        let same_interval = (self.a - fine.a).abs() <= 1e-12 * self.length()
            && (self.b - fine.b).abs() <= 1e-12 * self.length();
        if !same_interval || !fine.cells.is_multiple_of(self.cells) {
            return None;
        }
        Some(fine.cells / self.cells)
    }
}

impl fmt::Display for Grid1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}] M={} h={}", self.a, self.b, self.cells, self.h)
    }
}

/// Scalar types a grid function can hold.
pub trait Scalar:
    Copy
    + Default
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Mul<f64, Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self {
        Self::default()
    }
    fn from_real(x: f64) -> Self;
    fn abs_sq(self) -> f64;
    fn conj(self) -> Self;
    fn is_finite(self) -> bool;
    fn to_complex(self) -> Complex64;
}

impl Scalar for f64 {
    fn from_real(x: f64) -> Self {
        x
    }
    fn abs_sq(self) -> f64 {
        self * self
    }
    fn conj(self) -> Self {
        self
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
    fn to_complex(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
}

impl Scalar for Complex64 {
    fn from_real(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn abs_sq(self) -> f64 {
        self.norm_sqr()
    }
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    fn is_finite(self) -> bool {
        Complex64::is_finite(self)
    }
    fn to_complex(self) -> Complex64 {
        self
    }
}

/// Grid function in `X_M` (zero at both endpoints).
#[derive(Debug, Clone, PartialEq)]
pub struct Field<T> {
    grid: Grid1D,
    values: Vec<T>,
}

pub type ComplexField = Field<Complex64>;
pub type RealField = Field<f64>;

impl<T: Scalar> Field<T> {
    pub fn zeros(grid: Grid1D) -> Self {
        Self {
            grid,
            values: vec![T::zero(); grid.len()],
        }
    }

    /// Samples `f` at the interior nodes; boundary entries are zero.
    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> T) -> Self {
        let mut field = Self::zeros(grid);
        for j in 1..grid.cells() {
            field.values[j] = f(grid.x(j));
        }
        field
    }

    /// Builds a field from its `M - 1` interior values.
    pub fn from_interior(grid: Grid1D, interior: &[T]) -> Self {
        assert_eq!(
            interior.len(),
            grid.cells() - 1,
            "interior length does not match grid"
        );
        let mut field = Self::zeros(grid);
        field.values[1..grid.cells()].copy_from_slice(interior);
        field
    }

    /// Builds a field from all `M + 1` values, rejecting nonzero boundary entries.
    pub fn from_values(grid: Grid1D, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(ZakharovError::Config(format!(
                "expected {} values, got {}",
                grid.len(),
                values.len()
            )));
        }
        if values[0] != T::zero() || values[grid.cells()] != T::zero() {
            return Err(ZakharovError::Config(
                "grid function must vanish at both endpoints".into(),
            ));
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn interior(&self) -> &[T] {
        &self.values[1..self.grid.cells()]
    }

    pub fn interior_mut(&mut self) -> &mut [T] {
        let m = self.grid.cells();
        &mut self.values[1..m]
    }

    pub fn get(&self, j: usize) -> T {
        self.values[j]
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> Field<U> {
        let mut out = Field::<U>::zeros(self.grid);
        for (o, &v) in out.interior_mut().iter_mut().zip(self.interior()) {
            *o = f(v);
        }
        out
    }

    /// Pointwise combination of two fields on the same grid.
    pub fn zip_map<U: Scalar, V: Scalar>(
        &self,
        other: &Field<U>,
        f: impl Fn(T, U) -> V,
    ) -> Field<V> {
        self.check_grid(other);
        let mut out = Field::<V>::zeros(self.grid);
        for ((o, &u), &v) in out
            .interior_mut()
            .iter_mut()
            .zip(self.interior())
            .zip(other.interior())
        {
            *o = f(u, v);
        }
        out
    }

    pub fn abs_sq(&self) -> RealField {
        self.map(|v| v.abs_sq())
    }

    pub fn conj(&self) -> Self {
        self.map(|v| v.conj())
    }

    pub fn scale(&self, factor: f64) -> Self {
        self.map(|v| v * factor)
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.values
            .iter()
            .map(|v| v.abs_sq())
            .fold(0.0, f64::max)
            .sqrt()
    }

    /// Three-point second difference; boundary entries stay zero.
    pub fn delta_x2(&self) -> Self {
        let m = self.grid.cells();
        let inv_h2 = 1.0 / (self.grid.h() * self.grid.h());
        let u = &self.values;
        let mut out = Self::zeros(self.grid);
        for j in 1..m {
            out.values[j] = (u[j + 1] - u[j] * 2.0 + u[j - 1]) * inv_h2;
        }
        out
    }

    /// Forward difference `(u_{j+1} - u_j) / h` for `j = 0..M-1`.
    pub fn delta_x_plus(&self) -> Vec<T> {
        let inv_h = 1.0 / self.grid.h();
        self.values
            .windows(2)
            .map(|w| (w[1] - w[0]) * inv_h)
            .collect()
    }

    /// Discrete `L^2` norm `sqrt(h sum_{j=1}^{M-1} |u_j|^2)`.
    pub fn norm_l2(&self) -> f64 {
        self.norm_l2_sq().sqrt()
    }

    pub fn norm_l2_sq(&self) -> f64 {
        self.grid.h() * self.interior().iter().map(|v| v.abs_sq()).sum::<f64>()
    }

    /// `(u, v) = h sum u_j conj(v_j)`.
    pub fn inner(&self, other: &Self) -> T {
        self.check_grid(other);
        let sum = self
            .interior()
            .iter()
            .zip(other.interior())
            .fold(T::zero(), |acc, (&u, &v)| acc + u * v.conj());
        sum * self.grid.h()
    }

    /// `||delta_x^+ u|| = sqrt(h sum_{j=0}^{M-1} |delta_x^+ u_j|^2)`.
    pub fn norm_h1_semi(&self) -> f64 {
        let h = self.grid.h();
        let s: f64 = self.values.windows(2).map(|w| (w[1] - w[0]).abs_sq()).sum();
        (s / h).sqrt()
    }

    /// `||u|| + ||delta_x^+ u||`, the composite norm used for `E` errors.
    pub fn norm_h1(&self) -> f64 {
        self.norm_l2() + self.norm_h1_semi()
    }

    /// Node-subset restriction to a coarser grid on the same interval.
    pub fn restrict_to(&self, coarse: &Grid1D) -> Result<Self> {
        let ratio = coarse.subset_ratio(&self.grid).ok_or_else(|| {
            ZakharovError::Config(format!(
                "coarse grid {coarse} nodes are not a subset of fine grid {}",
                self.grid
            ))
        })?;
        let mut out = Self::zeros(*coarse);
        for j in 1..coarse.cells() {
            out.values[j] = self.values[ratio * j];
        }
        Ok(out)
    }

    fn check_grid<U>(&self, other: &Field<U>) {
        assert!(
            self.grid == other.grid,
            "fields live on different grids: {} vs {}",
            self.grid,
            other.grid
        );
    }
}

impl RealField {
    pub fn to_complex(&self) -> ComplexField {
        self.map(|v| Complex64::new(v, 0.0))
    }
}

impl ComplexField {
    pub fn re(&self) -> RealField {
        self.map(|v| v.re)
    }

    pub fn im(&self) -> RealField {
        self.map(|v| v.im)
    }
}

impl<T: Scalar> Add for &Field<T> {
    type Output = Field<T>;
    fn add(self, rhs: Self) -> Field<T> {
        self.zip_map(rhs, |u, v| u + v)
    }
}

impl<T: Scalar> Sub for &Field<T> {
    type Output = Field<T>;
    fn sub(self, rhs: Self) -> Field<T> {
        self.zip_map(rhs, |u, v| u - v)
    }
}

impl<T: Scalar> Mul<f64> for &Field<T> {
    type Output = Field<T>;
    fn mul(self, rhs: f64) -> Field<T> {
        self.scale(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid() -> Grid1D {
        Grid1D::new(-3.0, 5.0, 32).unwrap()
    }

    #[test]
    fn rejects_degenerate_grids() {
        assert!(Grid1D::new(1.0, 1.0, 10).is_err());
        assert!(Grid1D::new(0.0, 1.0, 3).is_err());
        assert!(Grid1D::with_spacing(0.0, 1.0, 0.3).is_err());
        let g = Grid1D::with_spacing(-200.0, 200.0, 0.025).unwrap();
        assert_eq!(g.cells(), 16000);
        assert_eq!(g.x(16000), 200.0);
    }

    #[test]
    fn second_difference_of_zero_is_zero() {
        let u = RealField::zeros(grid());
        assert!(u.delta_x2().values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn second_difference_exact_on_quadratic() {
        let g = grid();
        let u = RealField::from_fn(g, |x| (x - g.a()) * (g.b() - x));
        let d = u.delta_x2();
        for j in 1..g.cells() {
            assert!((d.get(j) + 2.0).abs() < 1e-10, "j={j}: {}", d.get(j));
        }
        assert_eq!(d.get(0), 0.0);
        assert_eq!(d.get(g.cells()), 0.0);
    }

    #[test]
    fn sine_mode_is_discrete_eigenfunction() {
        let g = grid();
        let l = g.length();
        let u = RealField::from_fn(g, |x| (PI * (x - g.a()) / l).sin());
        let d = u.delta_x2();
        let h = g.h();
        let eig = -(4.0 / (h * h)) * (PI * h / (2.0 * l)).sin().powi(2);
        for j in 1..g.cells() {
            assert!((d.get(j) - eig * u.get(j)).abs() < 1e-12);
        }
    }

    #[test]
    fn forward_difference_of_quadratic() {
        let g = grid();
        let u = RealField::from_fn(g, |x| (x - g.a()) * (g.b() - x));
        let dp = u.delta_x_plus();
        assert_eq!(dp.len(), g.cells());
        for (j, v) in dp.iter().enumerate() {
            let expected = g.b() + g.a() - g.x(j) - g.x(j + 1);
            assert!((v - expected).abs() < 1e-12, "j={j}");
        }
    }

    #[test]
    fn norms_of_simple_fields() {
        let g = grid();
        assert_eq!(RealField::zeros(g).norm_l2(), 0.0);
        let mut u = RealField::zeros(g);
        u.interior_mut()[4] = 1.0;
        assert!((u.norm_l2() - g.h().sqrt()).abs() < 1e-15);
        assert!((u.inner(&u) - u.norm_l2_sq()).abs() < 1e-15);
    }

    #[test]
    fn from_values_rejects_boundary_values() {
        let g = grid();
        let mut v = vec![0.0; g.len()];
        v[0] = 1.0;
        assert!(RealField::from_values(g, v).is_err());
    }

    #[test]
    fn restriction_picks_node_subset() {
        let coarse = Grid1D::new(0.0, 1.0, 8).unwrap();
        let fine = coarse.refined(4).unwrap();
        let u = RealField::from_fn(fine, |x| x * (1.0 - x));
        let r = u.restrict_to(&coarse).unwrap();
        for j in 1..8 {
            assert_eq!(r.get(j), u.get(4 * j));
        }
        let other = Grid1D::new(0.0, 1.0, 12).unwrap();
        assert!(u.restrict_to(&other).is_err());
    }
}
