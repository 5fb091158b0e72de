//! Deterministic vector kernels: chunked parallel reductions whose partial
//! sums are combined in a fixed order.

use rayon::prelude::*;

use crate::scalar::Real;

const CHUNK: usize = 8192;

pub fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    if a.len() <= CHUNK {
        return a.iter().zip(b).map(|(&x, &y)| x * y).sum();
    }
    let parts: Vec<T> = a
        .par_chunks(CHUNK)
        .zip(b.par_chunks(CHUNK))
        .map(|(x, y)| x.iter().zip(y).map(|(&p, &q)| p * q).sum())
        .collect();
    parts.into_iter().sum()
}

pub fn norm<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

/// `y += alpha x`
pub fn axpy<T: Real>(alpha: T, x: &[T], y: &mut [T]) {
    if y.len() <= CHUNK {
        y.iter_mut().zip(x).for_each(|(yi, &xi)| *yi = *yi + alpha * xi);
    } else {
        y.par_chunks_mut(CHUNK)
            .zip(x.par_chunks(CHUNK))
            .for_each(|(yc, xc)| yc.iter_mut().zip(xc).for_each(|(yi, &xi)| *yi = *yi + alpha * xi));
    }
}

pub fn scale<T: Real>(alpha: T, x: &mut [T]) {
    if x.len() <= CHUNK {
        x.iter_mut().for_each(|v| *v = *v * alpha);
    } else {
        x.par_chunks_mut(CHUNK).for_each(|c| c.iter_mut().for_each(|v| *v = *v * alpha));
    }
}

/// `sum_j coeffs[j] * basis[j]`.
pub fn combine<T: Real>(basis: &[Vec<T>], coeffs: &[T]) -> Vec<T> {
    let dim = basis.first().map_or(0, |b| b.len());
    let mut out = vec![T::zero(); dim];
    let fill = |start: usize, chunk: &mut [T]| {
        for (b, &c) in basis.iter().zip(coeffs) {
            if c == T::zero() {
                continue;
            }
            for (o, &v) in chunk.iter_mut().zip(&b[start..]) {
                *o = *o + c * v;
            }
        }
    };
    if dim <= CHUNK {
        fill(0, &mut out);
    } else {
        out.par_chunks_mut(CHUNK).enumerate().for_each(|(k, chunk)| fill(k * CHUNK, chunk));
    }
    out
}

/// Two passes of classical Gram-Schmidt of `w` against the orthonormal
/// `basis`; returns the accumulated projection coefficients.
pub fn orthogonalize<T: Real>(basis: &[Vec<T>], w: &mut [T]) -> Vec<T> {
    let mut total = vec![T::zero(); basis.len()];
    for _ in 0..2 {
        let c: Vec<T> = basis.iter().map(|b| dot(b, w)).collect();
        let proj = combine(basis, &c);
        axpy(-T::one(), &proj, w);
        for (t, ci) in total.iter_mut().zip(c) {
            *t = *t + ci;
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunked_dot_matches_serial() {
        let n = 3 * CHUNK + 17;
        let a: Vec<f64> = (0..n).map(|i| ((i * 7919) % 1000) as f64 / 997.0).collect();
        let b: Vec<f64> = (0..n).map(|i| ((i * 104729) % 1000) as f64 / 991.0).collect();
        let serial: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
        assert!((dot(&a, &b) - serial).abs() < 1e-9 * serial);
        assert_eq!(dot(&a, &b).to_bits(), dot(&a, &b).to_bits());
    }

    #[test]
    fn gram_schmidt_leaves_orthogonal_remainder() {
        let e1 = vec![1.0_f64, 0.0, 0.0];
        let s = 0.5_f64.sqrt();
        let e2 = vec![0.0, s, s];
        let mut w = vec![3.0, 1.0, 2.0];
        let c = orthogonalize(&[e1.clone(), e2.clone()], &mut w);
        assert!((c[0] - 3.0).abs() < 1e-15 && (c[1] - 3.0 * s).abs() < 1e-15);
        assert!(dot(&w, &e1).abs() < 1e-15 && dot(&w, &e2).abs() < 1e-15);
    }
}
