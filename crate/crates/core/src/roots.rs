//! Bracketing helpers for scalar equations.

/// Bisection on `[lo, hi]` with `f(lo)` and `f(hi)` of opposite sign. Stops
/// when the bracket is `rel_tol`-relative or no representable midpoint remains.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, rel_tol: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || (hi - lo) <= rel_tol * mid.abs() {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Sign changes of `f` on a logarithmic grid `[lo, hi]` with `per_decade`
/// samples per decade. Returns `(x_left, x_right, rising)` for each change.
pub fn scan_log<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    per_decade: usize,
) -> (Vec<(f64, f64, bool)>, f64, f64) {
    let decades = (hi / lo).log10();
    let n = (decades * per_decade as f64).ceil().max(2.0) as usize;
    let step = (hi / lo).ln() / n as f64;
    let mut brackets = Vec::new();
    let mut x_prev = lo;
    let mut f_prev = f(lo);
    let f_first = f_prev;
    for i in 1..=n {
        let x = lo * (step * i as f64).exp();
        let fx = f(x);
        if fx.is_finite() && f_prev.is_finite() && (fx > 0.0) != (f_prev > 0.0) {
            brackets.push((x_prev, x, fx > 0.0));
        }
        x_prev = x;
        f_prev = fx;
    }
    (brackets, f_first, f_prev)
}
