//! Thick-restart Lanczos with full reorthogonalization.
//!
//! Every new vector is orthogonalized (two classical Gram-Schmidt passes)
//! against the whole basis, and the projection coefficients fill the dense
//! Rayleigh matrix directly. On restart the lowest Ritz vectors are kept
//! together with the last residual direction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::vecops::{combine, norm, orthogonalize, scale};
use super::{converged, true_residuals, Pairs, SolverOptions, SymmetricOperator};
use crate::error::{Error, Result};
use crate::linalg::symmetric_eigen;
use crate::scalar::Real;

pub(crate) const DEFAULT_KRYLOV: usize = 600;

pub(crate) fn solve<T: Real, A: SymmetricOperator<T>>(op: &A, k: usize, opts: &SolverOptions<T>) -> Result<Pairs<T>> {
    let dim = op.dimension();
    let m = opts.krylov_dim.unwrap_or(DEFAULT_KRYLOV).max(2 * k + 8).min(dim);
    let keep = (m / 2).max(k + 2).min(m.saturating_sub(1)).max(k.min(m));
    let cap = opts.matvec_cap(dim);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x9e37_79b9);

    let mut v0 = op.start_vector(opts.seed);
    let n0 = norm(&v0);
    if !(n0 > T::zero()) {
        return Err(Error::InvalidParameter("start vector vanishes".into()));
    }
    scale(n0.recip(), &mut v0);

    let mut basis: Vec<Vec<T>> = vec![v0];
    // upper triangle of the projected matrix, row-major m x m
    let mut h = vec![T::zero(); m * m];
    let mut filled = 0usize;
    let mut matvecs = 0usize;
    let mut best = T::infinity();
    let mut w = vec![T::zero(); dim];

    loop {
        // extend the basis to m vectors (or until it spans an invariant subspace)
        let mut beta = T::zero();
        let mut residual_dir: Option<Vec<T>> = None;
        while filled < basis.len() {
            let j = filled;
            op.apply(&basis[j], &mut w);
            matvecs += 1;
            let c = orthogonalize(&basis, &mut w);
            for (i, &ci) in c.iter().enumerate() {
                h[i * m + j] = ci;
            }
            filled += 1;
            beta = norm(&w);
            let scale_ref = c[j].abs().max(T::one());
            let breakdown = beta <= T::epsilon() * T::lit(64.0) * scale_ref;
            if breakdown {
                beta = T::zero();
                if basis.len() < m && basis.len() < dim {
                    // invariant subspace found; continue with a fresh random direction
                    let mut r: Vec<T> = (0..dim).map(|_| T::lit(rng.gen_range(-1.0..1.0))).collect();
                    orthogonalize(&basis, &mut r);
                    let nr = norm(&r);
                    scale(nr.recip(), &mut r);
                    basis.push(r);
                }
                continue;
            }
            let mut next = w.clone();
            scale(beta.recip(), &mut next);
            if basis.len() < m {
                basis.push(next);
            } else {
                residual_dir = Some(next);
            }
            if matvecs >= cap {
                break;
            }
        }

        let size = filled;
        let mut proj = vec![T::zero(); size * size];
        for i in 0..size {
            for j in i..size {
                proj[i * size + j] = h[i * m + j];
                proj[j * size + i] = h[i * m + j];
            }
        }
        let eig = symmetric_eigen(&proj, size);
        let want = k.min(size);

        // estimated residual of Ritz pair l is beta * |s_{last, l}|
        let estimates: Vec<T> = (0..want).map(|l| beta * eig.vector_entry(size - 1, l).abs()).collect();
        let est_ok = (0..want).all(|l| converged(opts.tol, eig.values[l], estimates[l]));
        let exhausted = matvecs >= cap || (residual_dir.is_none() && size >= dim.min(m) && beta == T::zero());

        if (est_ok && want == k) || exhausted || size == dim {
            let vectors: Vec<Vec<T>> = (0..want)
                .map(|l| {
                    let mut y = combine(&basis[..size], &eig.vector(l));
                    let ny = norm(&y);
                    scale(ny.recip(), &mut y);
                    y
                })
                .collect();
            let values: Vec<T> = (0..want).map(|l| eig.values[l]).collect();
            let residuals = true_residuals(op, &values, &vectors);
            matvecs += want;
            let ok = want == k && values.iter().zip(&residuals).all(|(&l, &r)| converged(opts.tol, l, r));
            let worst = residuals.iter().copied().fold(T::zero(), T::max);
            best = best.min(worst);
            if ok {
                return Ok(Pairs { values, vectors, residuals, matvecs });
            }
            // a full basis that misses the target is restarted from its
            // Ritz vectors, which often recovers the last digits
            if matvecs >= cap {
                return Err(Error::NoConvergence { iterations: matvecs, best_residual: best.as_f64() });
            }
        }

        // thick restart
        let p = keep.min(size - 1).max(1);
        let mut fresh: Vec<Vec<T>> = (0..p)
            .map(|l| {
                let mut y = combine(&basis[..size], &eig.vector(l));
                let ny = norm(&y);
                scale(ny.recip(), &mut y);
                y
            })
            .collect();
        h.iter_mut().for_each(|x| *x = T::zero());
        for l in 0..p {
            h[l * m + l] = eig.values[l];
        }
        let mut next = match residual_dir {
            Some(r) => r,
            None => (0..dim).map(|_| T::lit(rng.gen_range(-1.0..1.0))).collect(),
        };
        orthogonalize(&fresh, &mut next);
        let nn = norm(&next);
        scale(nn.recip(), &mut next);
        fresh.push(next);
        basis = fresh;
        filled = p;
    }
}
