//! Reference values computed without the library's own special functions.
#![allow(dead_code)]

use std::f64::consts::FRAC_PI_2;

use nalgebra::{DMatrix, SymmetricEigen};

/// Exp-sinh quadrature of `f` over `(0, inf)`: trapezoid in `t` after
/// `s = exp(pi/2 sinh t)`, halving the step until two levels agree.
pub fn exp_sinh(f: impl Fn(f64) -> f64) -> f64 {
    let node = |t: f64| {
        let s = (FRAC_PI_2 * t.sinh()).exp();
        let w = FRAC_PI_2 * t.cosh() * s;
        let v = f(s);
        if v == 0.0 || !w.is_finite() {
            0.0
        } else {
            v * w
        }
    };
    let tmax = 5.0;
    let mut h = 0.5;
    let mut sum: f64 = (0..=20).map(|k| node(-tmax + k as f64 * h)).sum();
    let mut prev = sum * h;
    for _ in 0..8 {
        h /= 2.0;
        let n = (2.0 * tmax / h).round() as usize;
        sum += (1..n).step_by(2).map(|k| node(-tmax + k as f64 * h)).sum::<f64>();
        let cur = sum * h;
        if (cur - prev).abs() <= 1e-15 * cur.abs() {
            return cur;
        }
        prev = cur;
    }
    prev
}

/// `V_0(x) = 2 int_0^inf exp(-s^2 - 2|x| s) ds`.
pub fn v0_oracle(x: f64) -> f64 {
    let a = x.abs();
    2.0 * exp_sinh(|s| (-s * (s + 2.0 * a)).exp())
}

/// `V_m^1(x) = (1/m!) int_0^inf u^m e^{-u} / sqrt(x^2 + u) du`.
pub fn vm_oracle(m: u32, x: f64) -> f64 {
    let fact: f64 = (1..=m).map(f64::from).product();
    exp_sinh(|u| u.powi(m as i32) * (-u).exp() / (x * x + u).sqrt()) / fact
}

/// `k` lowest eigenvalues of a dense row-major symmetric matrix.
pub fn dense_lowest(a: Vec<f64>, n: usize, k: usize) -> Vec<f64> {
    let m = DMatrix::from_row_slice(n, n, &a);
    let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev.truncate(k);
    ev
}
