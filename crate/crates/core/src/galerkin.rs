//! Matrix elements of `r^p` in the hard-wall sine basis.
//!
//! With `φ_j(r) = √(2/R)·sin(jπr/R)`,
//!
//! ```text
//! ⟨φ_j| r^p |φ_k⟩ = R^p · [G(j+k) − G(|j−k|)],   G(m) = ∫₀¹ x^p (1 − cos mπx) dx
//! ```
//!
//! `G` is finite for every `p > −3`, which covers the centrifugal `1/r²` term.
//! It is split at `u = mπx = π` into a power series near the origin, an
//! elementary part and a cosine integral evaluated panel by panel.

use std::f64::consts::PI;

use faer::Mat;

use crate::grid::SpectralGrid;

const PANEL_NODES: usize = 20;

/// Gauss–Legendre nodes and weights on `[-1, 1]` by Newton iteration on the
/// three-term recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pm) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// `∫₀^π u^p (1 − cos u) du / π^(p+1)`.
fn origin_series(p: f64) -> f64 {
    let mut sum = 0.0;
    let mut term = 1.0; // π^(2k+2)/(2k+2)! with alternating sign
    for k in 0..60 {
        let kk = k as f64;
        term *= if k == 0 {
            PI * PI / 2.0
        } else {
            -PI * PI / ((2.0 * kk + 1.0) * (2.0 * kk + 2.0))
        };
        let add = term / (2.0 * kk + p + 3.0);
        sum += add;
        if add.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// `G(m)` for `m = 0..=m_max`.
pub fn g_table(p: f64, m_max: usize) -> Vec<f64> {
    let s = origin_series(p);
    let (nodes, weights) = gauss_legendre(PANEL_NODES);
    let mut out = Vec::with_capacity(m_max + 1);
    out.push(0.0);
    // cumulative ∫_π^{mπ} u^p cos u du
    let mut cos_integral = 0.0;
    for m in 1..=m_max {
        if m > 1 {
            let mid = (m as f64 - 0.5) * PI;
            let half = 0.5 * PI;
            cos_integral += nodes
                .iter()
                .zip(&weights)
                .map(|(&x, &w)| {
                    let u = mid + half * x;
                    w * u.powf(p) * u.cos()
                })
                .sum::<f64>()
                * half;
        }
        let mf = m as f64;
        let elementary = if p == -1.0 {
            mf.ln()
        } else {
            (1.0 - mf.powf(-(p + 1.0))) / (p + 1.0)
        };
        out.push(mf.powf(-(p + 1.0)) * s + elementary - (mf * PI).powf(-(p + 1.0)) * cos_integral);
    }
    out
}

/// Symmetric `N×N` matrix of `r^p` between the first `N` sine functions.
pub fn power_matrix(grid: &SpectralGrid, p: f64) -> Mat<f64> {
    let n = grid.points();
    let g = g_table(p, 2 * n + 2);
    let scale = grid.box_radius().powf(p);
    Mat::from_fn(n, n, |i, j| {
        let (a, b) = (i + 1, j + 1);
        scale * (g[a + b] - g[a.abs_diff(b)])
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Composite Simpson in `t` with `x = t²`, which removes the `x^p`
    /// endpoint behaviour for `p > −3`.
    fn g_oracle(p: f64, m: f64) -> f64 {
        let n = 40_000;
        let h = 1.0 / n as f64;
        let f = |t: f64| {
            if t == 0.0 {
                return 0.0;
            }
            let x = t * t;
            let s = (0.5 * m * PI * x).sin();
            4.0 * t * x.powf(p) * s * s
        };
        let mut s = f(0.0) + f(1.0);
        for i in 1..n {
            s += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    }

    #[test]
    fn legendre_rule_integrates_polynomials() {
        let (x, w) = gauss_legendre(PANEL_NODES);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        for k in 0..(2 * PANEL_NODES) {
            let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(k as i32)).sum();
            let want = if k % 2 == 0 { 2.0 / (k as f64 + 1.0) } else { 0.0 };
            assert!((got - want).abs() < 1e-14, "k={k}");
        }
    }

    #[test]
    fn table_matches_direct_quadrature() {
        for &p in &[-2.0, -1.5, -1.0, -0.5, 0.5, 1.0, 2.0, 3.0] {
            let g = g_table(p, 40);
            for &m in &[1usize, 2, 7, 23, 40] {
                let want = g_oracle(p, m as f64);
                assert!((g[m] - want).abs() < 1e-9 * want.abs().max(1.0), "p={p} m={m}: {} vs {want}", g[m]);
            }
        }
    }

    #[test]
    fn matrix_element_by_brute_force() {
        let grid = SpectralGrid::new(3.0, 64).unwrap();
        let w = power_matrix(&grid, -1.0);
        // ⟨φ_2|1/r|φ_5⟩ on (0, 3) via midpoint sums with a fine grid
        let n = 2_000_000;
        let h = 3.0 / n as f64;
        let mut s = 0.0;
        for i in 0..n {
            let r = (i as f64 + 0.5) * h;
            s += (2.0 / 3.0) * (2.0 * PI * r / 3.0).sin() * (5.0 * PI * r / 3.0).sin() / r;
        }
        s *= h;
        assert!((w[(1, 4)] - s).abs() < 1e-9, "{} vs {s}", w[(1, 4)]);
        assert_eq!(w[(1, 4)], w[(4, 1)]);
    }

    #[test]
    fn unit_power_is_identity() {
        // p = 0 is not a potential exponent but G still gives ⟨φ_j|φ_k⟩ = δ_jk
        let grid = SpectralGrid::new(5.0, 64).unwrap();
        let w = power_matrix(&grid, 0.0);
        for i in 0..64 {
            for j in 0..64 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((w[(i, j)] - want).abs() < 1e-12);
            }
        }
    }
}
