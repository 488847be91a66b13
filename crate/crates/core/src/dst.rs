//! Discrete sine transform on the interior nodes of a Dirichlet grid.
//!
//! Forward: `c_l = (2/M) sum_{j=1}^{M-1} v_j sin(l j pi / M)`.
//! Inverse: `v_j = sum_{l=1}^{M-1} c_l sin(l j pi / M)`.
//!
//! Both are evaluated through an FFT of length `2M` applied to the odd
//! extension of the input.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use realfft::{RealFftPlanner, RealToComplex};
use rustfft::{Fft, FftPlanner};

#[derive(Clone)]
pub struct SineTransform {
    cells: usize,
    fft: Arc<dyn Fft<f64>>,
    rfft: Arc<dyn RealToComplex<f64>>,
}

impl fmt::Debug for SineTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SineTransform")
            .field("cells", &self.cells)
            .finish()
    }
}

impl SineTransform {
    /// Transform for a grid with `cells` cells (`cells - 1` interior nodes).
    pub fn new(cells: usize) -> Self {
        assert!(cells >= 2, "sine transform needs at least two cells");
        let fft = FftPlanner::new().plan_fft_forward(2 * cells);
        let rfft = RealFftPlanner::<f64>::new().plan_fft_forward(2 * cells);
        Self { cells, fft, rfft }
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    /// Raw sums `S_l = sum_j v_j sin(l j pi / M)` for complex input.
    pub fn sine_sums_complex(&self, input: &[Complex64]) -> Vec<Complex64> {
        let m = self.cells;
        assert_eq!(input.len(), m - 1, "sine transform input length");
        let mut buf = vec![Complex64::new(0.0, 0.0); 2 * m];
        for (j, &v) in input.iter().enumerate() {
            buf[j + 1] = v;
            buf[2 * m - j - 1] = -v;
        }
        self.run(&mut buf);
        // Y_l = -2i S_l
        buf[1..m]
            .iter()
            .map(|y| Complex64::new(-y.im * 0.5, y.re * 0.5))
            .collect()
    }

    /// Raw sums `S_l` for real input.
    pub fn sine_sums(&self, input: &[f64]) -> Vec<f64> {
        let m = self.cells;
        assert_eq!(input.len(), m - 1, "sine transform input length");
        let mut buf = self.rfft.make_input_vec();
        for (j, &v) in input.iter().enumerate() {
            buf[j + 1] = v;
            buf[2 * m - j - 1] = -v;
        }
        let mut spectrum = self.rfft.make_output_vec();
        let mut scratch = self.rfft.make_scratch_vec();
        self.rfft
            .process_with_scratch(&mut buf, &mut spectrum, &mut scratch)
            .expect("buffer sizes match the plan");
        spectrum[1..m].iter().map(|y| -0.5 * y.im).collect()
    }

    pub fn forward(&self, samples: &[f64]) -> Vec<f64> {
        let scale = 2.0 / self.cells as f64;
        let mut out = self.sine_sums(samples);
        out.iter_mut().for_each(|c| *c *= scale);
        out
    }

    pub fn inverse(&self, coeffs: &[f64]) -> Vec<f64> {
        self.sine_sums(coeffs)
    }

    pub fn forward_complex(&self, samples: &[Complex64]) -> Vec<Complex64> {
        let scale = 2.0 / self.cells as f64;
        let mut out = self.sine_sums_complex(samples);
        out.iter_mut().for_each(|c| *c *= scale);
        out
    }

    pub fn inverse_complex(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        self.sine_sums_complex(coeffs)
    }

    fn run(&self, buf: &mut [Complex64]) {
        let mut scratch = vec![Complex64::new(0.0, 0.0); self.fft.get_inplace_scratch_len()];
        self.fft.process_with_scratch(buf, &mut scratch);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn first_sine_mode_maps_to_unit_vector() {
        let m = 16;
        let t = SineTransform::new(m);
        let samples: Vec<f64> = (1..m).map(|j| (j as f64 * PI / m as f64).sin()).collect();
        let c = t.forward(&samples);
        assert!((c[0] - 1.0).abs() < 1e-14);
        assert!(c[1..].iter().all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn zero_in_zero_out() {
        let t = SineTransform::new(8);
        assert!(t.forward(&[0.0; 7]).iter().all(|&v| v == 0.0));
    }

    #[test]
    fn complex_transform_acts_componentwise() {
        let m = 12;
        let t = SineTransform::new(m);
        let re: Vec<f64> = (1..m).map(|j| (j as f64 * 0.37).cos()).collect();
        let im: Vec<f64> = (1..m).map(|j| (j as f64 * 1.3).sin()).collect();
        let z: Vec<Complex64> = re
            .iter()
            .zip(&im)
            .map(|(&a, &b)| Complex64::new(a, b))
            .collect();
        let cz = t.forward_complex(&z);
        let (cr, ci) = (t.forward(&re), t.forward(&im));
        for l in 0..m - 1 {
            assert!((cz[l].re - cr[l]).abs() < 1e-13);
            assert!((cz[l].im - ci[l]).abs() < 1e-13);
        }
    }
}
