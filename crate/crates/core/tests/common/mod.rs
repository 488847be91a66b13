//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use num_complex::Complex64;

/// Dense Gaussian elimination with partial pivoting.
pub fn dense_solve(mut a: Vec<Vec<Complex64>>, mut b: Vec<Complex64>) -> Vec<Complex64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].norm().partial_cmp(&a[j][col].norm()).unwrap())
            .unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                let v = a[col][k];
                a[row][k] -= f * v;
            }
            let v = b[col];
            b[row] -= f * v;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for row in (0..n).rev() {
        let mut s = b[row];
        for k in row + 1..n {
            s -= a[row][k] * x[k];
        }
        x[row] = s / a[row][row];
    }
    x
}

/// Tridiagonal matrix with constant off-diagonal `off` as a dense matrix.
pub fn dense_tridiagonal(diag: &[Complex64], off: f64) -> Vec<Vec<Complex64>> {
    let n = diag.len();
    let mut a = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        a[i][i] = diag[i];
        if i > 0 {
            a[i][i - 1] = Complex64::new(off, 0.0);
        }
        if i + 1 < n {
            a[i][i + 1] = Complex64::new(off, 0.0);
        }
    }
    a
}

const GK_NODES: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const K15_WEIGHTS: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const G7_WEIGHTS: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Componentwise Gauss-Kronrod 7/15 on `[a, b]`: `(kronrod, |kronrod - gauss|)`.
fn gk15(f: &dyn Fn(f64) -> Vec<f64>, a: f64, b: f64) -> (Vec<f64>, f64) {
    let c = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    let fc = f(c);
    let mut k: Vec<f64> = fc.iter().map(|v| v * K15_WEIGHTS[7]).collect();
    let mut g: Vec<f64> = fc.iter().map(|v| v * G7_WEIGHTS[3]).collect();
    for i in 0..7 {
        let f1 = f(c - r * GK_NODES[i]);
        let f2 = f(c + r * GK_NODES[i]);
        for n in 0..k.len() {
            let s = f1[n] + f2[n];
            k[n] += K15_WEIGHTS[i] * s;
            if i % 2 == 1 {
                g[n] += G7_WEIGHTS[i / 2] * s;
            }
        }
    }
    let err = k
        .iter()
        .zip(&g)
        .map(|(a, b)| (a - b).abs() * r)
        .fold(0.0, f64::max);
    (k.iter().map(|v| v * r).collect(), err)
}

/// Adaptive componentwise quadrature of a vector-valued integrand.
pub fn adaptive_quad(f: &dyn Fn(f64) -> Vec<f64>, a: f64, b: f64, tol: f64) -> Vec<f64> {
    fn recurse(f: &dyn Fn(f64) -> Vec<f64>, a: f64, b: f64, tol: f64, depth: usize) -> Vec<f64> {
        let (val, err) = gk15(f, a, b);
        if err <= tol || depth > 40 {
            return val;
        }
        let m = 0.5 * (a + b);
        let mut left = recurse(f, a, m, 0.5 * tol, depth + 1);
        let right = recurse(f, m, b, 0.5 * tol, depth + 1);
        for (l, r) in left.iter_mut().zip(right) {
            *l += r;
        }
        left
    }
    recurse(f, a, b, tol, 0)
}

/// Direct `O(M^2)` sums `sum_j v_j sin(l j pi / M)`, `l = 1..M-1`.
pub fn direct_sine_sums(v: &[f64]) -> Vec<f64> {
    let m = v.len() + 1;
    (1..m)
        .map(|l| {
            v.iter()
                .enumerate()
                .map(|(j, &x)| x * ((l * (j + 1)) as f64 * std::f64::consts::PI / m as f64).sin())
                .sum()
        })
        .collect()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// `G^eps(x_j, s)` by direct sine sums over the mode coefficients of the
/// sampled `omega_0`, `omega_1`.
pub struct DirectWave {
    pub cells: usize,
    sin_table: Vec<Vec<f64>>,
    mu: Vec<f64>,
    amp_cos: Vec<f64>,
    amp_sin: Vec<f64>,
    pub epsilon: f64,
}

impl DirectWave {
    pub fn new(
        a: f64,
        b: f64,
        cells: usize,
        omega0: impl Fn(f64) -> f64,
        omega1: impl Fn(f64) -> f64,
        epsilon: f64,
        alpha: f64,
        beta: f64,
    ) -> Self {
        let m = cells;
        let h = (b - a) / m as f64;
        let sin_table: Vec<Vec<f64>> = (1..m)
            .map(|l| {
                (1..m)
                    .map(|j| ((l * j) as f64 * std::f64::consts::PI / m as f64).sin())
                    .collect()
            })
            .collect();
        let w0: Vec<f64> = (1..m).map(|j| omega0(a + j as f64 * h)).collect();
        let w1: Vec<f64> = (1..m).map(|j| omega1(a + j as f64 * h)).collect();
        let coef = |w: &[f64], l: usize| -> f64 {
            2.0 / m as f64 * w.iter().zip(&sin_table[l]).map(|(x, s)| x * s).sum::<f64>()
        };
        let mu: Vec<f64> = (1..m)
            .map(|l| l as f64 * std::f64::consts::PI / (b - a))
            .collect();
        let amp_cos = (0..m - 1)
            .map(|l| epsilon.powf(alpha) * coef(&w0, l))
            .collect();
        let amp_sin = (0..m - 1)
            .map(|l| epsilon.powf(1.0 + beta) * coef(&w1, l) / mu[l])
            .collect();
        Self {
            cells,
            sin_table,
            mu,
            amp_cos,
            amp_sin,
            epsilon,
        }
    }

    /// Interior values of `G^eps(., s)`.
    pub fn at_fast_time(&self, s: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.cells - 1];
        for l in 0..self.cells - 1 {
            let c =
                self.amp_cos[l] * (self.mu[l] * s).cos() + self.amp_sin[l] * (self.mu[l] * s).sin();
            for (o, sv) in out.iter_mut().zip(&self.sin_table[l]) {
                *o += c * sv;
            }
        }
        out
    }

    /// `(1 / (2 tau)) int_{t_k - tau}^{t_k + tau} G^eps(., t / eps) dt` by quadrature.
    pub fn window_average(&self, t_k: f64, tau: f64, tol: f64) -> Vec<f64> {
        let f = |t: f64| self.at_fast_time(t / self.epsilon);
        let q = adaptive_quad(&f, t_k - tau, t_k + tau, tol * 2.0 * tau);
        q.iter().map(|v| v / (2.0 * tau)).collect()
    }
}
