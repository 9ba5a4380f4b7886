use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Result, VsaError};

thread_local! {
    static PLANNER: std::cell::RefCell<FftPlanner<f64>> =
        std::cell::RefCell::new(FftPlanner::new());
}

pub(crate) fn fft(v: &mut [Complex64], inverse: bool) {
    PLANNER.with(|p| {
        let mut planner = p.borrow_mut();
        let plan = if inverse {
            planner.plan_fft_inverse(v.len())
        } else {
            planner.plan_fft_forward(v.len())
        };
        plan.process(v);
    });
}

/// Circular convolution `(x * y)_k = sum_i x_(k-i mod N) y_i`, computed via
/// the FFT so the Fourier convolution theorem holds exactly.
pub fn circular_convolve(x: &[Complex64], y: &[Complex64]) -> Result<Vec<Complex64>> {
    if x.len() != y.len() {
        return Err(VsaError::DimensionMismatch { left: x.len(), right: y.len() });
    }
    let n = x.len();
    let mut fx = x.to_vec();
    let mut fy = y.to_vec();
    fft(&mut fx, false);
    fft(&mut fy, false);
    for (a, b) in fx.iter_mut().zip(&fy) {
        *a *= b;
    }
    fft(&mut fx, true);
    let scale = 1.0 / n as f64;
    for c in fx.iter_mut() {
        *c *= scale;
    }
    Ok(fx)
}

/// Circular correlation, the adjoint of convolution by `y`:
/// `(x ? y)_k = sum_i x_(k+i mod N) conj(y_i)`. Used as approximate
/// unbinding for convolution-bound vectors.
pub fn circular_correlate(x: &[Complex64], y: &[Complex64]) -> Result<Vec<Complex64>> {
    if x.len() != y.len() {
        return Err(VsaError::DimensionMismatch { left: x.len(), right: y.len() });
    }
    let n = x.len();
    let mut fx = x.to_vec();
    let mut fy = y.to_vec();
    fft(&mut fx, false);
    fft(&mut fy, false);
    for (a, b) in fx.iter_mut().zip(&fy) {
        *a *= b.conj();
    }
    fft(&mut fx, true);
    let scale = 1.0 / n as f64;
    for c in fx.iter_mut() {
        *c *= scale;
    }
    Ok(fx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(values: &[f64]) -> Vec<Complex64> {
        values.iter().map(|&r| Complex64::new(r, 0.0)).collect()
    }

    fn delta(n: usize, at: usize) -> Vec<Complex64> {
        let mut v = vec![Complex64::ZERO; n];
        v[at] = Complex64::new(1.0, 0.0);
        v
    }

    fn assert_close(a: &[Complex64], b: &[Complex64]) {
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).norm() < 1e-9, "{x} vs {y}");
        }
    }

    #[test]
    fn unit_impulse_is_identity() {
        let x = real(&[0.4, -1.5, 2.0, 3.25]);
        let out = circular_convolve(&x, &delta(4, 0)).unwrap();
        assert_close(&out, &x);
    }

    #[test]
    fn delta_one_cyclically_shifts() {
        let x = real(&[1.0, 2.0, 3.0]);
        let out = circular_convolve(&x, &delta(3, 1)).unwrap();
        assert_close(&out, &real(&[3.0, 1.0, 2.0]));
    }

    #[test]
    fn correlate_inverts_delta_shift() {
        let x = real(&[1.0, 2.0, 3.0, 4.0]);
        let shifted = circular_convolve(&x, &delta(4, 1)).unwrap();
        let back = circular_correlate(&shifted, &delta(4, 1)).unwrap();
        assert_close(&back, &x);
    }

    #[test]
    fn length_mismatch_rejected() {
        assert!(circular_convolve(&delta(4, 0), &delta(5, 0)).is_err());
        assert!(circular_correlate(&delta(4, 0), &delta(5, 0)).is_err());
    }
}
