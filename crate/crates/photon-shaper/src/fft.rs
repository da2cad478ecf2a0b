//! Centered discrete Fourier transforms shared by the time/frequency duals
//! and the FROG trace machinery.
//!
//! Both directions use the symmetric-index kernel: index k of a length-n
//! buffer stands for offset (k - n/2), so a transform of a centered array is
//! again centered. No normalization is applied here; callers carry the grid
//! measure factors.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::cell::RefCell;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Swap the two halves of an even-length buffer (fftshift == ifftshift).
pub(crate) fn half_rotate(buf: &mut [Complex64]) {
    let n = buf.len();
    debug_assert!(n.is_multiple_of(2));
    let (a, b) = buf.split_at_mut(n / 2);
    for (x, y) in a.iter_mut().zip(b.iter_mut()) {
        std::mem::swap(x, y);
    }
}

/// Centered transform with kernel exp(-2πi jk/n) over symmetric indices.
pub(crate) fn centered_forward(buf: &mut [Complex64]) {
    half_rotate(buf);
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(buf.len()).process(buf));
    half_rotate(buf);
}

/// Centered transform with kernel exp(+2πi jk/n) over symmetric indices.
pub(crate) fn centered_inverse(buf: &mut [Complex64]) {
    half_rotate(buf);
    PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(buf.len()).process(buf));
    half_rotate(buf);
}
