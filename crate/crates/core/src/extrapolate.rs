use faer::linalg::solvers::Solve;
use faer::Mat;

use crate::error::{AfmError, Result};

/// Richardson extrapolation in the number of grid points.
///
/// Fits `value(N) = E + Σ_k c_k·N^(−s_k)` through `(N, value)` samples and
/// returns `E`. Needs exactly one more sample than exponents.
pub fn richardson(samples: &[(usize, f64)], exponents: &[f64]) -> Result<f64> {
    let n = samples.len();
    if n != exponents.len() + 1 || n == 0 {
        return Err(AfmError::DomainError(format!(
            "{} samples cannot fit {} exponents",
            n,
            exponents.len()
        )));
    }
    let base = samples[0].0 as f64;
    let a = Mat::from_fn(n, n, |i, j| {
        if j == 0 {
            1.0
        } else {
            (samples[i].0 as f64 / base).powf(-exponents[j - 1])
        }
    });
    let b = Mat::from_fn(n, 1, |i, _| samples[i].1);
    let x = a.partial_piv_lu().solve(&b);
    let e = x[(0, 0)];
    if e.is_finite() {
        Ok(e)
    } else {
        Err(AfmError::LinearAlgebra("singular Richardson system".into()))
    }
}
