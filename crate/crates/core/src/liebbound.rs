//! Ionization bound for the model and numerical checks of the inequalities
//! behind it.
//!
//! The bound says no `N`-electron state is bound once
//! `N >= 2Z + 1 + 2 omega sqrt(B)`, where `omega = sup |nu'|^2 / (4 nu)` is
//! the localization penalty of the potential. It rests on the pair
//! inequality
//!
//! ```text
//! 2^{-1/2} V(|x - y| / sqrt 2) (1/V(x) + 1/V(y)) > 1
//! ```
//!
//! which for `V_0` follows from convexity of `nu_0 = 1/V_0`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::binding::{binding_report, BindingVerdict};
use crate::eigensolve::GridPolicy;
use crate::error::Result;
use crate::model::{ModelParams, ModelPotential};
use crate::quasirandom::R2;
use crate::scalar::Real;
use crate::specfun::{nu, omega, PotentialKind};

pub const DEFAULT_SCAN_SEED: u64 = 7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundReport<T> {
    pub z: T,
    pub b: T,
    pub omega_used: T,
    /// `2Z + 1 + 2 omega sqrt(B)`: no bound state for `N` at or above it.
    pub n_threshold: T,
    /// Largest electron number the bound still allows.
    pub n_max_bound: i64,
    pub potential: PotentialKind<T>,
}

/// Threshold of the ionization bound for `V_0` or the cut-off potential.
pub fn ionization_bound<T: Real>(z: T, b: T, kind: PotentialKind<T>) -> Result<BoundReport<T>> {
    let w = omega(&kind)?;
    let n_threshold = T::lit(2.0) * z + T::one() + T::lit(2.0) * w * b.sqrt();
    let n_max_bound = n_threshold.ceil().as_f64() as i64 - 1;
    Ok(BoundReport { z, b, omega_used: w, n_threshold, n_max_bound, potential: kind })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairInequalitySample<T> {
    pub x: T,
    pub y: T,
    pub lhs: T,
    pub pass: bool,
}

/// `2^{-1/2} V(|x - y| / sqrt 2) (1/V(x) + 1/V(y))`.
pub fn pair_inequality_lhs<T: Real>(kind: &PotentialKind<T>, x: T, y: T) -> Result<T> {
    let v = ModelPotential::new(kind)?;
    Ok(pair_lhs(&v, x, y))
}

fn pair_lhs<T: Real>(v: &ModelPotential<T>, x: T, y: T) -> T {
    v.pair(x - y) * (v.eval(x).recip() + v.eval(y).recip())
}

/// Evaluates the pair inequality on `n` quasi-random points of
/// `[-range, range]^2`. Failing samples come first, then the rest in
/// sequence order.
pub fn pair_inequality_scan<T: Real>(
    kind: &PotentialKind<T>,
    n: usize,
    range: T,
    seed: u64,
) -> Result<Vec<PairInequalitySample<T>>> {
    let v = ModelPotential::new(kind)?;
    let points = square_points(n, range.as_f64(), seed);
    let samples: Vec<_> = points
        .par_iter()
        .map(|&[x, y]| {
            let (x, y) = (T::lit(x), T::lit(y));
            let lhs = pair_lhs(&v, x, y);
            PairInequalitySample { x, y, lhs, pass: lhs > T::one() }
        })
        .collect();
    Ok(failures_first(samples, |s| s.pass))
}

/// The chain `nu(w) + nu(x) >= 2 nu(|w - x| / 2) >= sqrt 2 nu(|w - x| / sqrt 2)`
/// for `nu = 1/V_0`, returned as `(lhs, mid, rhs)`.
pub fn midpoint_convexity_chain<T: Real>(x: T, w: T) -> (T, T, T) {
    let s = (w - x).abs();
    let lhs = nu(w) + nu(x);
    let mid = T::lit(2.0) * nu(s / T::lit(2.0));
    let rhs = T::SQRT_2() * nu(s * T::FRAC_1_SQRT_2());
    (lhs, mid, rhs)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvexitySample<T> {
    pub x: T,
    pub w: T,
    pub lhs: T,
    pub mid: T,
    pub rhs: T,
    pub pass: bool,
}

/// Both steps of the chain up to rounding; the first is an equality on
/// `w = -x`.
fn chain_holds<T: Real>(lhs: T, mid: T, rhs: T) -> bool {
    let slack = T::lit(8.0) * T::epsilon();
    lhs >= mid * (T::one() - slack) && mid >= rhs * (T::one() - slack)
}

pub fn convexity_chain_scan<T: Real>(n: usize, range: T, seed: u64) -> Vec<ConvexitySample<T>> {
    let samples: Vec<_> = square_points(n, range.as_f64(), seed)
        .par_iter()
        .map(|&[x, w]| {
            let (x, w) = (T::lit(x), T::lit(w));
            let (lhs, mid, rhs) = midpoint_convexity_chain(x, w);
            ConvexitySample { x, w, lhs, mid, rhs, pass: chain_holds(lhs, mid, rhs) }
        })
        .collect();
    failures_first(samples, |s| s.pass)
}

fn square_points(n: usize, range: f64, seed: u64) -> Vec<[f64; 2]> {
    let mut seq = R2::new(seed);
    (0..n).map(|_| seq.next_in_square(range)).collect()
}

fn failures_first<S>(samples: Vec<S>, pass: impl Fn(&S) -> bool) -> Vec<S> {
    let (mut bad, good): (Vec<S>, Vec<S>) = samples.into_iter().partition(|s| !pass(s));
    bad.extend(good);
    bad
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyRecord<T> {
    pub z: T,
    pub b: T,
    pub n_threshold: T,
    /// The bound forbids two bound electrons (`threshold <= 2`).
    pub constrained: bool,
    /// Verdict of the two-electron solve; absent when unconstrained.
    pub verdict: Option<BindingVerdict>,
    pub margin: Option<T>,
    pub margin_error: Option<T>,
    /// No numerically bound state where the bound excludes one.
    pub consistent: bool,
}

/// Confronts the ionization bound with a two-electron solve at `(z, b)`.
/// Only a `Bound` verdict contradicts the bound; an inconclusive margin
/// does not.
pub fn consistency_record<T: Real>(z: T, b: T, policy: &GridPolicy<T>) -> Result<ConsistencyRecord<T>> {
    let params = ModelParams::new(2, z, b);
    let bound = ionization_bound(z, b, params.attraction)?;
    let constrained = bound.n_threshold <= T::lit(2.0);
    let mut rec = ConsistencyRecord {
        z,
        b,
        n_threshold: bound.n_threshold,
        constrained,
        verdict: None,
        margin: None,
        margin_error: None,
        consistent: true,
    };
    if constrained {
        let r = binding_report(&params, policy)?;
        rec.verdict = Some(r.bound_state);
        rec.margin = Some(r.margin);
        rec.margin_error = Some(r.margin_error());
        rec.consistent = r.bound_state != BindingVerdict::Bound;
    }
    Ok(rec)
}

pub fn consistency_check<T: Real>(z: T, b: T, policy: &GridPolicy<T>) -> Result<bool> {
    Ok(consistency_record(z, b, policy)?.consistent)
}

/// `Z in {0.1, 0.2, 0.3}` by `B in {0.01, 0.04}`.
pub fn default_lattice<T: Real>() -> Vec<(T, T)> {
    let mut out = Vec::new();
    for z in [0.1, 0.2, 0.3] {
        for b in [0.01, 0.04] {
            out.push((T::lit(z), T::lit(b)));
        }
    }
    out
}

pub fn consistency_lattice<T: Real>(lattice: &[(T, T)], policy: &GridPolicy<T>) -> Result<Vec<ConsistencyRecord<T>>> {
    lattice.iter().map(|&(z, b)| consistency_record(z, b, policy)).collect()
}
