//! Airy function Ai on the non-positive axis and its zeros.
//!
//! Ai is propagated from the origin by a Taylor-series integrator of
//! `y'' = x·y`. On the negative axis both Airy solutions oscillate with
//! bounded amplitude, so forward propagation is stable.

/// Ai(0) = 1 / (3^(2/3) Γ(2/3))
const AI_0: f64 = 0.355_028_053_887_817_2;
/// Ai'(0) = −1 / (3^(1/3) Γ(1/3))
const AI_PRIME_0: f64 = -0.258_819_403_792_806_8;

const MAX_STEP: f64 = 0.25;
const TAYLOR_TERMS: usize = 60;

/// Advance `(y, y')` of `y'' = x·y` from `x0` by `h` using the local Taylor
/// series. The coefficients satisfy `c[k+2] = (x0·c[k] + c[k−1]) / ((k+2)(k+1))`.
fn taylor_step(x0: f64, y: f64, dy: f64, h: f64) -> (f64, f64) {
    let mut c = [0.0f64; TAYLOR_TERMS + 2];
    c[0] = y;
    c[1] = dy;
    c[2] = x0 * y / 2.0;
    for k in 1..TAYLOR_TERMS {
        c[k + 2] = (x0 * c[k] + c[k - 1]) / ((k + 2) as f64 * (k + 1) as f64);
    }
    let mut val = 0.0;
    let mut der = 0.0;
    for k in (0..TAYLOR_TERMS + 2).rev() {
        val = val * h + c[k];
        if k > 0 {
            der = der * h + k as f64 * c[k];
        }
    }
    (val, der)
}

/// `(Ai(x), Ai'(x))` for `x ≤ 0`.
pub fn airy_ai_with_derivative(x: f64) -> (f64, f64) {
    assert!(x <= 0.0, "airy_ai_with_derivative is only stable for x <= 0");
    let steps = (x.abs() / MAX_STEP).ceil().max(1.0) as usize;
    let h = x / steps as f64;
    let (mut y, mut dy) = (AI_0, AI_PRIME_0);
    let mut xc = 0.0;
    for _ in 0..steps {
        (y, dy) = taylor_step(xc, y, dy, h);
        xc += h;
    }
    (y, dy)
}

pub fn airy_ai(x: f64) -> f64 {
    airy_ai_with_derivative(x).0
}

/// Asymptotic estimate of the k-th zero (k ≥ 1) of Ai.
fn zero_estimate(k: usize) -> f64 {
    let t = 3.0 * std::f64::consts::PI * (4.0 * k as f64 - 1.0) / 8.0;
    let t2 = t.powi(-2);
    -t.powf(2.0 / 3.0) * (1.0 + 5.0 / 48.0 * t2 - 5.0 / 36.0 * t2 * t2)
}

/// The `(n+1)`-th zero of Ai, i.e. `airy_ai_zero(0) ≈ −2.338107`.
pub fn airy_ai_zero(n: u32) -> f64 {
    let mut x = zero_estimate(n as usize + 1);
    for _ in 0..50 {
        let (y, dy) = airy_ai_with_derivative(x);
        // Halley step, using Ai'' = x·Ai
        let step = y / dy / (1.0 - 0.5 * y * x * y / (dy * dy));
        x -= step;
        if step.abs() <= 4.0 * f64::EPSILON * x.abs() {
            break;
        }
    }
    x
}
