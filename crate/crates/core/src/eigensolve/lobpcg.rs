//! Locally optimal block preconditioned conjugate gradient.
//!
//! Each step runs Rayleigh-Ritz on `[X, T R, P]` after explicit
//! orthonormalization, with `T = (K + sigma)^{-1}` the fast-sine kinetic
//! preconditioner when the operator provides one. The operator is applied to
//! the whole orthonormal trial basis on every step so that the residuals
//! checked for convergence are true residuals.

use super::vecops::{axpy, combine, dot, norm, orthogonalize, scale};
use super::{converged, Pairs, SolverOptions, SymmetricOperator};
use crate::error::{Error, Result};
use crate::linalg::symmetric_eigen;
use crate::scalar::Real;

/// Extra block vectors beyond the requested pairs.
const GUARD: usize = 2;

pub(crate) fn solve<T: Real, A: SymmetricOperator<T>>(op: &A, k: usize, opts: &SolverOptions<T>) -> Result<Pairs<T>> {
    let dim = op.dimension();
    let bs = (k + GUARD).min(dim);
    let cap = opts.matvec_cap(dim);

    let first = op.start_vector(opts.seed);
    let mut x: Vec<Vec<T>> = Vec::with_capacity(bs);
    for l in 0..bs {
        let v = if l == 0 {
            first.clone()
        } else {
            op.block_vector(opts.seed, l)
        };
        x.push(v);
    }
    let x_basis = orthonormal(x, T::zero())?;
    if x_basis.len() < bs {
        return Err(Error::InvalidParameter("start block is rank deficient".into()));
    }
    let mut x = x_basis;
    let mut ax: Vec<Vec<T>> = x.iter().map(|v| apply(op, v)).collect();
    let mut matvecs = bs;
    let mut theta: Vec<T> = x.iter().zip(&ax).map(|(v, av)| dot(v, av)).collect();
    let mut p: Vec<Vec<T>> = Vec::new();
    let mut best = T::infinity();

    loop {
        // residuals
        let mut r: Vec<Vec<T>> = Vec::with_capacity(bs);
        let mut res = Vec::with_capacity(bs);
        for l in 0..bs {
            let mut rl = ax[l].clone();
            axpy(-theta[l], &x[l], &mut rl);
            res.push(norm(&rl));
            r.push(rl);
        }
        let worst = (0..k).map(|l| res[l] / (T::one() + theta[l].abs())).fold(T::zero(), T::max);
        best = best.min(worst);
        if (0..k).all(|l| converged(opts.tol, theta[l], res[l])) {
            return Ok(Pairs { values: theta[..k].to_vec(), vectors: x[..k].to_vec(), residuals: res[..k].to_vec(), matvecs });
        }
        if matvecs >= cap {
            return Err(Error::NoConvergence { iterations: matvecs, best_residual: best.as_f64() });
        }

        // precondition the unconverged residuals
        let shift = op.kinetic_floor().max(T::lit(1.5) * theta[0].abs());
        let pre = op.preconditioner(shift);
        let mut w: Vec<Vec<T>> = Vec::new();
        for l in 0..bs {
            if l < k && converged(opts.tol, theta[l], res[l]) {
                continue;
            }
            let mut rl = std::mem::take(&mut r[l]);
            if let Some(pc) = &pre {
                pc.apply(&mut rl);
            }
            w.push(rl);
        }

        // orthonormal trial basis [X, W, P]
        let mut basis = x.clone();
        let mut abasis = ax.clone();
        let drop = T::epsilon().sqrt();
        for v in w.into_iter().chain(p.drain(..)) {
            if let Some(q) = orthonormal_against(&basis, v, drop) {
                abasis.push(apply(op, &q));
                matvecs += 1;
                basis.push(q);
            }
        }

        let sz = basis.len();
        let mut g = vec![T::zero(); sz * sz];
        for i in 0..sz {
            for j in i..sz {
                let v = dot(&basis[i], &abasis[j]);
                g[i * sz + j] = v;
                g[j * sz + i] = v;
            }
        }
        let eig = symmetric_eigen(&g, sz);
        let mut new_x = Vec::with_capacity(bs);
        let mut new_ax = Vec::with_capacity(bs);
        let mut new_p = Vec::with_capacity(bs);
        for l in 0..bs {
            let c = eig.vector(l);
            new_x.push(combine(&basis, &c));
            new_ax.push(combine(&abasis, &c));
            // search direction: the part of the new iterate outside span(X)
            let mut cp = c.clone();
            cp[..bs].iter_mut().for_each(|v| *v = T::zero());
            if sz > bs {
                new_p.push(combine(&basis[bs..], &cp[bs..]));
            }
        }
        theta = eig.values[..bs].to_vec();
        x = new_x;
        ax = new_ax;
        p = new_p;
        // keep X numerically orthonormal; if it drifted, recompute A X
        let drift = x.iter().map(|v| (norm(v) - T::one()).abs()).fold(T::zero(), T::max);
        if drift > T::epsilon().sqrt() {
            x = orthonormal(x, T::zero())?;
            ax = x.iter().map(|v| apply(op, v)).collect();
            matvecs += bs;
            theta = x.iter().zip(&ax).map(|(v, av)| dot(v, av)).collect();
        }
    }
}

fn apply<T: Real, A: SymmetricOperator<T>>(op: &A, v: &[T]) -> Vec<T> {
    let mut y = vec![T::zero(); v.len()];
    op.apply(v, &mut y);
    y
}

fn orthonormal_against<T: Real>(basis: &[Vec<T>], mut v: Vec<T>, drop: T) -> Option<Vec<T>> {
    let before = norm(&v);
    if !(before > T::zero()) {
        return None;
    }
    scale(before.recip(), &mut v);
    orthogonalize(basis, &mut v);
    let after = norm(&v);
    if !(after > drop) {
        return None;
    }
    scale(after.recip(), &mut v);
    Some(v)
}

fn orthonormal<T: Real>(vs: Vec<Vec<T>>, drop: T) -> Result<Vec<Vec<T>>> {
    let mut out: Vec<Vec<T>> = Vec::with_capacity(vs.len());
    for v in vs {
        if let Some(q) = orthonormal_against(&out, v, drop) {
            out.push(q);
        }
    }
    Ok(out)
}
