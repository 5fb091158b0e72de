//! `(K + sigma)^{-1}` for the Dirichlet kinetic stencil `K`, applied in the
//! sine basis via FFT.

use std::sync::Arc;

use rayon::prelude::*;

use crate::scalar::{Real, SineTransform};

/// Eigenvalue of the 1D stencil on the sine mode with frequency `theta`:
/// `c0 + 2 sum_d w_d cos(d theta)`. Exact for the 3-point stencil, and
/// correct up to boundary rows for wider ones.
pub(crate) fn stencil_symbol<T: Real>(center: T, offsets: &[T], theta: T) -> T {
    let mut s = center;
    for (d, &w) in offsets.iter().enumerate() {
        s = s + T::lit(2.0) * w * (T::lit((d + 1) as f64) * theta).cos();
    }
    s
}

#[derive(Clone)]
pub struct KineticPreconditioner<T> {
    n: usize,
    axes: usize,
    symbol: Vec<T>,
    shift: T,
    dst: Arc<dyn SineTransform<T>>,
}

impl<T: Real> std::fmt::Debug for KineticPreconditioner<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("KineticPreconditioner")
            .field("n", &self.n)
            .field("axes", &self.axes)
            .field("shift", &self.shift)
            .finish()
    }
}

impl<T: Real> KineticPreconditioner<T> {
    pub fn new(n: usize, axes: usize, center: T, offsets: &[T], shift: T) -> Self {
        let step = T::PI() / T::lit((n + 1) as f64);
        let symbol = (1..=n).map(|k| stencil_symbol(center, offsets, step * T::lit(k as f64))).collect();
        Self { n, axes, symbol, shift, dst: T::sine_transform(n) }
    }

    pub fn shift(&self) -> T {
        self.shift
    }

    /// In-place `r <- (K + shift)^{-1} r`.
    pub fn apply(&self, r: &mut [T]) {
        let n = self.n;
        // DST-I is its own inverse up to (n + 1) / 2 per axis
        let norm = T::lit(2.0 / (n + 1) as f64);
        match self.axes {
            1 => {
                self.dst.apply(r);
                for (v, &s) in r.iter_mut().zip(&self.symbol) {
                    *v = *v / (s + self.shift);
                }
                self.dst.apply(r);
                r.iter_mut().for_each(|v| *v = *v * norm);
            }
            _ => {
                self.rows(r);
                transpose_square(r, n);
                self.rows(r);
                r.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
                    for (j, v) in row.iter_mut().enumerate() {
                        *v = *v / (self.symbol[i] + self.symbol[j] + self.shift);
                    }
                });
                self.rows(r);
                transpose_square(r, n);
                self.rows(r);
                let norm2 = norm * norm;
                r.par_iter_mut().for_each(|v| *v = *v * norm2);
            }
        }
    }

    fn rows(&self, r: &mut [T]) {
        r.par_chunks_mut(self.n).for_each(|row| self.dst.apply(row));
    }
}

fn transpose_square<T: Copy + Send>(a: &mut [T], n: usize) {
    for i in 0..n {
        for j in i + 1..n {
            a.swap(i * n + j, j * n + i);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Dense `(K + s)` for the 3-point stencil along each axis.
    fn apply_shifted(n: usize, axes: usize, c: f64, s: f64, x: &[f64]) -> Vec<f64> {
        let at = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
        match axes {
            1 => (0..n)
                .map(|i| {
                    let left = if i > 0 { x[i - 1] } else { 0.0 };
                    (2.0 * c + s) * x[i] - c * (left + at(x, i + 1))
                })
                .collect(),
            _ => {
                let mut y = vec![0.0; n * n];
                for i in 0..n {
                    for j in 0..n {
                        let get = |a: isize, b: isize| {
                            if a < 0 || b < 0 || a >= n as isize || b >= n as isize {
                                0.0
                            } else {
                                x[a as usize * n + b as usize]
                            }
                        };
                        let (ii, jj) = (i as isize, j as isize);
                        let nb = get(ii - 1, jj) + get(ii + 1, jj) + get(ii, jj - 1) + get(ii, jj + 1);
                        y[i * n + j] = (4.0 * c + s) * x[i * n + j] - c * nb;
                    }
                }
                y
            }
        }
    }

    #[test]
    fn inverts_three_point_stencil_exactly() {
        for &axes in &[1usize, 2] {
            let n = 21;
            let (c, s) = (3.0, 0.7);
            let p = KineticPreconditioner::new(n, axes, 2.0 * c, &[-c], s);
            let dim = n.pow(axes as u32);
            let x: Vec<f64> = (0..dim).map(|i| ((i * 37) % 11) as f64 - 5.0).collect();
            let mut y = apply_shifted(n, axes, c, s, &x);
            p.apply(&mut y);
            let err = x.iter().zip(&y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(err < 1e-11, "axes={axes} err={err}");
        }
    }
}
