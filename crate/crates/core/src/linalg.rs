//! Small dense symmetric eigenproblems (Householder tridiagonalization followed
//! by implicit QL), used for Gauss rules and for Rayleigh-Ritz projections.

use crate::scalar::Real;

/// Eigen-decomposition of a small symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymmetricEigen<T> {
    /// Ascending eigenvalues.
    pub values: Vec<T>,
    /// Row-major `rows x n`; column `j` holds (the first `rows` entries of) eigenvector `j`.
    pub vectors: Vec<T>,
    pub rows: usize,
}

impl<T: Real> SymmetricEigen<T> {
    #[inline]
    pub fn vector_entry(&self, row: usize, col: usize) -> T {
        self.vectors[row * self.values.len() + col]
    }

    pub fn vector(&self, col: usize) -> Vec<T> {
        (0..self.rows).map(|r| self.vector_entry(r, col)).collect()
    }
}

/// Full eigen-decomposition of the symmetric row-major `n x n` matrix `a`.
pub fn symmetric_eigen<T: Real>(a: &[T], n: usize) -> SymmetricEigen<T> {
    assert_eq!(a.len(), n * n);
    if n == 0 {
        return SymmetricEigen { values: vec![], vectors: vec![], rows: 0 };
    }
    let mut v = a.to_vec();
    // Symmetrize against round-off in the caller's assembly.
    for i in 0..n {
        for j in 0..i {
            let s = (v[i * n + j] + v[j * n + i]) * T::lit(0.5);
            v[i * n + j] = s;
            v[j * n + i] = s;
        }
    }
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    tred2(&mut v, &mut d, &mut e, n);
    tql2(&mut v, n, &mut d, &mut e, n);
    sort_pairs(&mut d, &mut v, n, n);
    SymmetricEigen { values: d, vectors: v, rows: n }
}

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `diag` and
/// off-diagonal `off` (`off[i]` couples `i` and `i + 1`), together with the
/// first `rows` components of each normalized eigenvector.
pub fn tridiagonal_eigen<T: Real>(diag: &[T], off: &[T], rows: usize) -> SymmetricEigen<T> {
    let n = diag.len();
    assert!(n == 0 || off.len() + 1 >= n);
    let rows = rows.min(n);
    let mut d = diag.to_vec();
    let mut e = vec![T::zero(); n];
    if n > 1 {
        e[1..n].copy_from_slice(&off[..n - 1]);
    }
    let mut v = vec![T::zero(); rows * n];
    for i in 0..rows {
        v[i * n + i] = T::one();
    }
    tql2(&mut v, rows, &mut d, &mut e, n);
    sort_pairs(&mut d, &mut v, rows, n);
    SymmetricEigen { values: d, vectors: v, rows }
}

fn sort_pairs<T: Real>(d: &mut [T], v: &mut [T], rows: usize, n: usize) {
    for i in 0..n.saturating_sub(1) {
        let mut k = i;
        let mut p = d[i];
        for (j, &dj) in d.iter().enumerate().skip(i + 1) {
            if dj < p {
                k = j;
                p = dj;
            }
        }
        if k != i {
            d.swap(i, k);
            for r in 0..rows {
                v.swap(r * n + i, r * n + k);
            }
        }
    }
}

fn tred2<T: Real>(v: &mut [T], d: &mut [T], e: &mut [T], n: usize) {
    let idx = |r: usize, c: usize| r * n + c;
    for j in 0..n {
        d[j] = v[idx(n - 1, j)];
    }
    for i in (1..n).rev() {
        let mut scale = T::zero();
        let mut h = T::zero();
        for dk in d.iter().take(i) {
            scale = scale + dk.abs();
        }
        if scale == T::zero() {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[idx(i - 1, j)];
                v[idx(i, j)] = T::zero();
                v[idx(j, i)] = T::zero();
            }
        } else {
            for dk in d.iter_mut().take(i) {
                *dk = *dk / scale;
                h = h + *dk * *dk;
            }
            let f = d[i - 1];
            let mut g = h.sqrt();
            if f > T::zero() {
                g = -g;
            }
            e[i] = scale * g;
            h = h - f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = T::zero();
            }
            for j in 0..i {
                let f = d[j];
                v[idx(j, i)] = f;
                let mut g = e[j] + v[idx(j, j)] * f;
                for k in (j + 1)..i {
                    g = g + v[idx(k, j)] * d[k];
                    e[k] = e[k] + v[idx(k, j)] * f;
                }
                e[j] = g;
            }
            let mut f = T::zero();
            for j in 0..i {
                e[j] = e[j] / h;
                f = f + e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] = e[j] - hh * d[j];
            }
            for j in 0..i {
                let f = d[j];
                let g = e[j];
                for k in j..i {
                    v[idx(k, j)] = v[idx(k, j)] - (f * e[k] + g * d[k]);
                }
                d[j] = v[idx(i - 1, j)];
                v[idx(i, j)] = T::zero();
            }
        }
        d[i] = h;
    }
    for i in 0..n - 1 {
        v[idx(n - 1, i)] = v[idx(i, i)];
        v[idx(i, i)] = T::one();
        let h = d[i + 1];
        if h != T::zero() {
            for k in 0..=i {
                d[k] = v[idx(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = T::zero();
                for k in 0..=i {
                    g = g + v[idx(k, i + 1)] * v[idx(k, j)];
                }
                for k in 0..=i {
                    v[idx(k, j)] = v[idx(k, j)] - g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[idx(k, i + 1)] = T::zero();
        }
    }
    for j in 0..n {
        d[j] = v[idx(n - 1, j)];
        v[idx(n - 1, j)] = T::zero();
    }
    v[idx(n - 1, n - 1)] = T::one();
    e[0] = T::zero();
}

/// Implicit QL on the tridiagonal `(d, e)` with `e[i]` coupling `i - 1` and `i`.
/// Rotations are accumulated into the first `rows` rows of `v` (`rows x n`).
fn tql2<T: Real>(v: &mut [T], rows: usize, d: &mut [T], e: &mut [T], n: usize) {
    if n == 0 {
        return;
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = T::zero();
    let mut f = T::zero();
    let mut tst1 = T::zero();
    let eps = T::epsilon();
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut sweeps = 0;
            loop {
                sweeps += 1;
                let g = d[l];
                let mut p = (d[l + 1] - g) / (T::lit(2.0) * e[l]);
                let mut r = p.hypot(T::one());
                if p < T::zero() {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().take(n).skip(l + 2) {
                    *di = *di - h;
                }
                f = f + h;

                p = d[m];
                let mut c = T::one();
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = T::zero();
                let mut s2 = T::zero();
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for k in 0..rows {
                        let hk = v[k * n + i + 1];
                        v[k * n + i + 1] = s * v[k * n + i] + c * hk;
                        v[k * n + i] = c * v[k * n + i] - s * hk;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 || sweeps > 60 {
                    break;
                }
            }
        }
        d[l] = d[l] + f;
        e[l] = T::zero();
    }
}
