//! Binding of the second electron, the critical charge, and closed-form
//! comparison energies.

use serde::{Deserialize, Serialize};

use crate::eigensolve::{converged_ground_energy, ConvergenceEstimate, GridPolicy};
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BindingVerdict {
    Bound,
    Unbound,
    /// The margin is within the combined error bars.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BindingReport<T> {
    pub params: ModelParams<T>,
    pub e_n: ConvergenceEstimate<T>,
    pub e_n_minus_1: ConvergenceEstimate<T>,
    /// `E_0(N - 1) - E_0(N)`; positive means the last electron is bound.
    pub margin: T,
    pub bound_state: BindingVerdict,
}

impl<T: Real> BindingReport<T> {
    pub fn margin_error(&self) -> T {
        self.e_n.error_bar + self.e_n_minus_1.error_bar
    }
}

pub fn classify<T: Real>(margin: T, error: T) -> BindingVerdict {
    if margin > error {
        BindingVerdict::Bound
    } else if margin < -error {
        BindingVerdict::Unbound
    } else {
        BindingVerdict::Inconclusive
    }
}

/// Bottom of the continuum: `E_0(N - 1)`, exactly 0 for one electron.
pub fn continuum_threshold<T: Real>(params: &ModelParams<T>, policy: &GridPolicy<T>) -> Result<ConvergenceEstimate<T>> {
    params.validate()?;
    match params.n_electrons {
        1 => Ok(ConvergenceEstimate::exact(T::zero())),
        n => converged_ground_energy(&params.with_electrons(n - 1), policy),
    }
}

/// Compares extrapolated `E_0(2)` with `E_0(1)`.
pub fn binding_report<T: Real>(params: &ModelParams<T>, policy: &GridPolicy<T>) -> Result<BindingReport<T>> {
    params.validate()?;
    if params.n_electrons != 2 {
        return Err(Error::InvalidParameter(format!(
            "binding reports need two electrons, got {}",
            params.n_electrons
        )));
    }
    let e_n_minus_1 = continuum_threshold(params, policy)?;
    let e_n = converged_ground_energy(params, policy)?;
    let margin = e_n_minus_1.extrapolated_energy - e_n.extrapolated_energy;
    let bound_state = classify(margin, e_n.error_bar + e_n_minus_1.error_bar);
    Ok(BindingReport { params: *params, e_n, e_n_minus_1, margin, bound_state })
}

/// Closed-form asymptotic one-electron energy for large field,
/// `-(Z^2 / sqrt B) (ln(Z^2 / sqrt B))^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticEnergy<T> {
    pub energy: T,
    /// `Z^2 / sqrt B < 1`; outside it the formula is an extrapolation.
    pub in_regime: bool,
}

pub fn ahs_energy<T: Real>(z: T, b: T) -> AsymptoticEnergy<T> {
    let r = z * z / b.sqrt();
    let l = r.ln();
    AsymptoticEnergy { energy: -r * l * l, in_regime: r < T::one() }
}

/// Separated-electron trial estimate: the minimizer `a_min` of
/// `2 sqrt(B)/a^2 - 2Z/a + 1/(2a)` and the minimum value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialBound<T> {
    pub a_min: T,
    pub energy_bound: T,
    /// `(Z - 1/4)^2 > 2 Z^2 (ln(Z / sqrt B))^2`: the trial energy would
    /// undercut the asymptotic one-electron energy.
    pub binding_predicate: bool,
}

pub fn separated_trial_bound<T: Real>(z: T, b: T) -> Result<TrialBound<T>> {
    let quarter = T::lit(0.25);
    if !(z > quarter) {
        return Err(Error::DomainError(format!(
            "the separated configuration escapes classically for Z <= 1/4, got {z}"
        )));
    }
    if !(b > T::zero()) {
        return Err(Error::InvalidParameter(format!("field strength must be positive, got {b}")));
    }
    let ex = z - quarter;
    let sb = b.sqrt();
    let l = (z / sb).ln();
    Ok(TrialBound {
        a_min: T::lit(2.0) * sb / ex,
        energy_bound: -ex * ex / (T::lit(2.0) * sb),
        binding_predicate: ex * ex > T::lit(2.0) * z * z * l * l,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint<T> {
    pub z: T,
    pub margin: T,
    pub error: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalChargeResult<T> {
    pub b: T,
    pub z_lo: T,
    pub z_hi: T,
    pub tolerance: T,
    /// Every evaluated charge, in evaluation order.
    pub trace: Vec<TracePoint<T>>,
}

impl<T: Real> CriticalChargeResult<T> {
    pub fn midpoint(&self) -> T {
        (self.z_lo + self.z_hi) / T::lit(2.0)
    }

    /// Largest margin error among the trace points at the bracket ends.
    pub fn bracket_error(&self) -> T {
        self.trace
            .iter()
            .filter(|p| p.z == self.z_lo || p.z == self.z_hi)
            .map(|p| p.error)
            .fold(T::zero(), T::max)
    }

    /// Trace points sorted by charge.
    pub fn sorted_trace(&self) -> Vec<TracePoint<T>> {
        let mut t = self.trace.clone();
        t.sort_by(|a, b| a.z.partial_cmp(&b.z).unwrap());
        t
    }
}

/// Charges probed before bisection.
pub fn default_scan<T: Real>() -> Vec<T> {
    [0.3, 0.6, 0.9, 1.2, 1.5].iter().map(|&z| T::lit(z)).collect()
}

/// Critical charge at field `b`: the binding margin is scanned on
/// `[0.3, 1.5]` and the first sign change is bisected to width `tol`.
pub fn critical_charge<T: Real>(b: T, tol: T, policy: &GridPolicy<T>) -> Result<CriticalChargeResult<T>> {
    critical_charge_with(b, tol, &default_scan(), |z| {
        let r = binding_report(&ModelParams::new(2, z, b), policy)?;
        Ok((r.margin, r.margin_error()))
    })
}

/// Bracketing harness over an arbitrary margin function returning
/// `(margin, error)`.
pub fn critical_charge_with<T: Real>(
    b: T,
    tol: T,
    scan: &[T],
    mut margin: impl FnMut(T) -> Result<(T, T)>,
) -> Result<CriticalChargeResult<T>> {
    if !(tol >= T::lit(1e-3)) {
        return Err(Error::InvalidParameter(format!("tolerance must be at least 1e-3, got {tol}")));
    }
    if scan.len() < 2 || scan.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidParameter("scan charges must be increasing".into()));
    }
    let mut trace = Vec::new();
    let mut eval = |z: T, trace: &mut Vec<TracePoint<T>>| -> Result<T> {
        let (m, e) = margin(z)?;
        trace.push(TracePoint { z, margin: m, error: e });
        Ok(m)
    };
    let mut prev = (scan[0], eval(scan[0], &mut trace)?);
    let mut bracket = None;
    for &z in &scan[1..] {
        let m = eval(z, &mut trace)?;
        if prev.1 <= T::zero() && m > T::zero() {
            bracket = Some((prev.0, z));
            break;
        }
        prev = (z, m);
    }
    let (mut lo, mut hi) =
        bracket.ok_or(Error::BracketNotFound { lo: scan[0].as_f64(), hi: scan[scan.len() - 1].as_f64() })?;
    while hi - lo > tol {
        let mid = (lo + hi) / T::lit(2.0);
        if eval(mid, &mut trace)? > T::zero() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(CriticalChargeResult { b, z_lo: lo, z_hi: hi, tolerance: tol, trace })
}
