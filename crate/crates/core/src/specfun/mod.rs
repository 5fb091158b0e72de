//! Regularized one-dimensional potentials and the inequalities they satisfy.
//!
//! The lowest-Landau-level average of the Coulomb potential over the orbital
//! with angular momentum `-m` in a field `B` is
//!
//! ```text
//! V_m^B(x) = (1/m!) ∫_0^∞ u^m e^{-u} / sqrt(x^2 + u/B) du,   V_m^B(x) = sqrt(B) V_m^1(sqrt(B) x)
//! ```
//!
//! and for `m = 0`, `B = 1` it has the closed form `V_0(x) = sqrt(pi) erfcx(|x|)`.
//! Its reciprocal `nu = 1/V_0` is convex and sandwiched between the
//! reciprocals of the `g_k` envelopes for `k = 4` (below) and `k = 3` (above).

mod erfcx;
pub mod quadrature;

pub use erfcx::{erfcx, SERIES_LIMIT as ERFCX_SERIES_LIMIT};

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;
use quadrature::{gauss_laguerre, integrate_adaptive, GaussRule};

/// Distances below this are treated as the origin when comparing against `1/|x|`.
pub const COULOMB_GUARD: f64 = 1e-12;

/// Which one-dimensional potential family is in play.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PotentialKind<T> {
    /// `V_m^B` for the Landau orbital with angular momentum `-m`.
    Regularized { m: u32, b: T },
    /// `1 / (|x| + 1)`.
    Cutoff,
    /// Bare `1/|x|`, for comparisons only.
    Coulomb,
    /// `g_k(|x|)`, a lower envelope of `V_0` (e.g. `k = 3` or `k = pi`).
    LowerBoundG { k: T },
    /// `g_k(|x|)`, an upper envelope of `V_0` (`k = 4`).
    UpperBoundG { k: T },
}

impl<T: Real> PotentialKind<T> {
    /// `V_0` at unit field.
    pub fn v0() -> Self {
        PotentialKind::Regularized { m: 0, b: T::one() }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            PotentialKind::Regularized { b, .. } if !(b > T::zero() && b.is_finite()) => {
                Err(Error::InvalidParameter(format!("field strength must be positive, got {b}")))
            }
            PotentialKind::LowerBoundG { k } | PotentialKind::UpperBoundG { k } if !(k > T::lit(2.0)) => {
                Err(Error::InvalidParameter(format!("envelope index must exceed 2, got {k}")))
            }
            _ => Ok(()),
        }
    }

    /// Prepares an evaluator with the given accuracy budget.
    pub fn prepare(&self, budget: AccuracyBudget<T>) -> Result<Potential<T>> {
        self.validate()?;
        budget.validate()?;
        let regularized = match *self {
            PotentialKind::Regularized { m, b } if m > 0 => Some(RegularizedPotential::new(m, b, budget)?),
            _ => None,
        };
        Ok(Potential { kind: *self, regularized })
    }

    /// One-off evaluation; prefer [`PotentialKind::prepare`] in loops.
    pub fn eval(&self, x: T) -> Result<T> {
        self.prepare(AccuracyBudget::default())?.eval(x)
    }
}

impl<T: Real> std::fmt::Display for PotentialKind<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PotentialKind::Regularized { m, b } => write!(f, "regularized(m={m}, B={b})"),
            PotentialKind::Cutoff => write!(f, "cutoff"),
            PotentialKind::Coulomb => write!(f, "coulomb"),
            PotentialKind::LowerBoundG { k } => write!(f, "lower-g(k={k})"),
            PotentialKind::UpperBoundG { k } => write!(f, "upper-g(k={k})"),
        }
    }
}

/// Tolerances for the quadrature-backed potentials.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AccuracyBudget<T> {
    pub rel_tol: T,
    pub abs_tol: T,
    pub max_quadrature_nodes: usize,
}

impl<T: Real> Default for AccuracyBudget<T> {
    fn default() -> Self {
        // f32 cannot honour 1e-12; clamp to its own floor.
        let floor = T::epsilon() * T::lit(8.0);
        Self {
            rel_tol: T::lit(1e-12).max(floor),
            abs_tol: T::min_positive_value().sqrt(),
            max_quadrature_nodes: 1024,
        }
    }
}

impl<T: Real> AccuracyBudget<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol >= T::epsilon() * T::lit(8.0)) {
            return Err(Error::InvalidParameter(format!(
                "rel_tol {} is below 8 machine epsilons",
                self.rel_tol
            )));
        }
        if !(self.abs_tol > T::zero()) {
            return Err(Error::InvalidParameter("abs_tol must be positive".into()));
        }
        if self.max_quadrature_nodes < 16 {
            return Err(Error::InvalidParameter("max_quadrature_nodes must be at least 16".into()));
        }
        Ok(())
    }
}

/// A prepared potential, cheap to evaluate repeatedly.
#[derive(Debug, Clone)]
pub struct Potential<T> {
    kind: PotentialKind<T>,
    regularized: Option<RegularizedPotential<T>>,
}

impl<T: Real> Potential<T> {
    pub fn kind(&self) -> PotentialKind<T> {
        self.kind
    }

    pub fn eval(&self, x: T) -> Result<T> {
        match self.kind {
            PotentialKind::Regularized { m: 0, b } => {
                let sb = b.sqrt();
                Ok(sb * v0(sb * x))
            }
            PotentialKind::Regularized { .. } => self.regularized.as_ref().expect("prepared").eval(x),
            PotentialKind::Cutoff => Ok(v_cut(x)),
            PotentialKind::Coulomb => Ok(coulomb(x)),
            PotentialKind::LowerBoundG { k } | PotentialKind::UpperBoundG { k } => Ok(g_bound(k, x.abs())),
        }
    }

    /// Value at the origin, `+inf` for the bare Coulomb potential.
    pub fn at_origin(&self) -> Result<T> {
        self.eval(T::zero())
    }
}

/// `V_m^B` for `m >= 1`, backed by a ladder of Gauss-Laguerre rules.
#[derive(Debug, Clone)]
pub struct RegularizedPotential<T> {
    m: u32,
    b: T,
    budget: AccuracyBudget<T>,
    /// Rules of 16, 32, ... nodes, built on first use.
    rules: Vec<OnceLock<GaussRule<T>>>,
}

impl<T: Real> RegularizedPotential<T> {
    pub fn new(m: u32, b: T, budget: AccuracyBudget<T>) -> Result<Self> {
        PotentialKind::Regularized { m, b }.validate()?;
        budget.validate()?;
        let mut rules = Vec::new();
        if m > 0 {
            let mut n = 16;
            while n <= budget.max_quadrature_nodes {
                rules.push(OnceLock::new());
                n *= 2;
            }
        }
        Ok(Self { m, b, budget, rules })
    }

    pub fn eval(&self, x: T) -> Result<T> {
        let sb = self.b.sqrt();
        let y = sb * x.abs();
        if self.m == 0 {
            return Ok(sb * v0(y));
        }
        Ok(sb * self.unit_field(y)?)
    }

    /// `V_m^1(y)` for `y >= 0`.
    fn unit_field(&self, y: T) -> Result<T> {
        if y >= T::one() {
            if let Some(v) = self.laguerre_doubling(y) {
                return Ok(v);
            }
        }
        self.adaptive(y)
    }

    fn laguerre_doubling(&self, y: T) -> Option<T> {
        let y2 = y * y;
        let mut prev: Option<T> = None;
        for (level, cell) in self.rules.iter().enumerate() {
            let rule = cell.get_or_init(|| gauss_laguerre(16 << level, self.m as f64));
            let q = rule.apply(|u| (y2 + u).sqrt().recip());
            if let Some(p) = prev {
                if (q - p).abs() <= self.budget.abs_tol.max(self.budget.rel_tol * q.abs()) {
                    return Some(q);
                }
            }
            prev = Some(q);
        }
        None
    }

    /// Integrates in `s = sqrt(u)`, which removes the square-root kink at `u = 0`.
    fn adaptive(&self, y: T) -> Result<T> {
        let m = self.m as f64;
        let ln_fact: f64 = (1..=self.m).map(|k| (k as f64).ln()).sum();
        let upper = T::lit((2.0 * m + 60.0).sqrt());
        let peak = T::lit((m + 0.5).sqrt());
        let y2 = y * y;
        let power = T::lit(2.0 * m + 1.0);
        let shift = T::lit(ln_fact);
        let integrand = |s: T| {
            if s <= T::zero() {
                return T::zero();
            }
            let log_w = power * s.ln() - s * s - shift;
            T::lit(2.0) * log_w.exp() / (y2 + s * s).sqrt()
        };
        let mut breaks = vec![T::zero()];
        for p in [y, peak] {
            if p > T::zero() && p < upper && !breaks.contains(&p) {
                breaks.push(p);
            }
        }
        breaks.push(upper);
        breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let max_panels = (self.budget.max_quadrature_nodes / 15).max(4);
        integrate_adaptive(integrand, &breaks, self.budget.rel_tol, self.budget.abs_tol, max_panels)
    }
}

/// `V_0(x) = sqrt(pi) exp(x^2) erfc(|x|)`.
pub fn v0<T: Real>(x: T) -> T {
    T::PI().sqrt() * erfcx(x.abs())
}

/// `V_m^B(x)` with the default accuracy budget.
pub fn vm<T: Real>(m: u32, b: T, x: T) -> Result<T> {
    vm_with(m, b, x, AccuracyBudget::default())
}

pub fn vm_with<T: Real>(m: u32, b: T, x: T, budget: AccuracyBudget<T>) -> Result<T> {
    RegularizedPotential::new(m, b, budget)?.eval(x)
}

/// Pair interaction of two `m = 0` orbitals: `2^{-1/2} V_0^B(|s| / sqrt 2)`.
pub fn w_pair<T: Real>(b: T, s: T) -> T {
    let sb = b.sqrt();
    T::FRAC_1_SQRT_2() * sb * v0(sb * s.abs() * T::FRAC_1_SQRT_2())
}

/// `1 / (|x| + 1)`.
pub fn v_cut<T: Real>(x: T) -> T {
    (x.abs() + T::one()).recip()
}

/// `1/|x|`, infinite inside the guard band around the origin.
pub fn coulomb<T: Real>(x: T) -> T {
    if x.abs() < T::lit(COULOMB_GUARD) {
        T::infinity()
    } else {
        x.abs().recip()
    }
}

/// `nu(x) = 1 / V_0(x)`.
pub fn nu<T: Real>(x: T) -> T {
    v0(x).recip()
}

/// `nu'(x)`: `2 nu (nu - x)` for `x >= 0`, extended to `x < 0` as an odd function.
pub fn nu_prime<T: Real>(x: T) -> T {
    let ax = x.abs();
    let n = nu(ax);
    let d = T::lit(2.0) * n * (n - ax);
    if x < T::zero() {
        -d
    } else {
        d
    }
}

/// Envelope `g_k(x) = k / ((k - 1) x + sqrt(x^2 + k))`, meant for `k > 2`, `x >= 0`.
pub fn g_bound<T: Real>(k: T, x: T) -> T {
    k / ((k - T::one()) * x + (x * x + k).sqrt())
}

/// `|nu'|^2 / (4 nu) = nu (nu - |x|)^2`, non-increasing in `|x|`.
pub fn localization_error<T: Real>(x: T) -> T {
    let ax = x.abs();
    let n = nu(ax);
    let gap = n - ax;
    n * gap * gap
}

/// `sup_x |nu'|^2 / (4 nu)` for the potentials where it is known in closed form.
pub fn omega<T: Real>(kind: &PotentialKind<T>) -> Result<T> {
    match *kind {
        PotentialKind::Regularized { m: 0, b } if b == T::one() => {
            // attained at the origin: nu(0)^3
            Ok(T::PI().powf(T::lit(-1.5)))
        }
        PotentialKind::Cutoff => Ok(T::lit(0.25)),
        other => Err(Error::UnsupportedKind(format!("omega is not available for {other}"))),
    }
}
