//! Richardson extrapolation over an `(h, L)` ladder of ground-state energies.

use serde::{Deserialize, Serialize};

use super::{ground_state_with, SolverOptions};
use crate::error::{Error, Result};
use crate::model::{assemble, default_half_width, max_spacing, GridSpec, ModelParams, PotentialSampling, StencilOrder};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LadderPoint<T> {
    pub h: T,
    pub half_width: T,
    pub points: usize,
    pub energy: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceEstimate<T> {
    pub extrapolated_energy: T,
    /// At least `|extrapolated - finest|`.
    pub error_bar: T,
    /// Convergence order used for the Richardson step.
    pub order: u32,
    pub ladder: Vec<LadderPoint<T>>,
}

impl<T: Real> ConvergenceEstimate<T> {
    /// An exactly known value, e.g. the free continuum edge.
    pub fn exact(value: T) -> Self {
        Self { extrapolated_energy: value, error_bar: T::min_positive_value(), order: 0, ladder: Vec::new() }
    }

    pub fn finest(&self) -> Option<&LadderPoint<T>> {
        self.ladder.iter().min_by(|a, b| a.h.partial_cmp(&b.h).unwrap())
    }
}

/// Observed convergence order of ground energies on `grid`. Cell-averaged
/// potentials carry an `O(h^2)` smoothing error whatever the stencil.
pub fn convergence_order<T: Real>(grid: &GridSpec<T>) -> u32 {
    match (grid.stencil, grid.sampling) {
        (StencilOrder::Fourth, PotentialSampling::Nodal) => 4,
        _ => 2,
    }
}

fn close<T: Real>(a: T, b: T) -> bool {
    (a - b).abs() <= T::lit(1e-9) * a.abs().max(b.abs())
}

/// Extrapolated energy from at least three spacings halving at one `L`
/// plus at least one more `L` sharing one of those spacings.
///
/// `error_bar = |E*_last - E*_prev| + max |E(L', h) - E(L, h)|`, raised if
/// necessary to `|E*_last - E_finest|`.
pub fn extrapolate<T: Real>(ladder: &[(GridSpec<T>, T)]) -> Result<ConvergenceEstimate<T>> {
    if ladder.is_empty() {
        return Err(Error::LadderInsufficient("empty ladder".into()));
    }
    let points: Vec<LadderPoint<T>> = ladder
        .iter()
        .map(|(g, e)| LadderPoint { h: g.spacing(), half_width: g.half_width, points: g.points, energy: *e })
        .collect();

    // group by half width
    let mut widths: Vec<T> = Vec::new();
    for p in &points {
        if !widths.iter().any(|&w| close(w, p.half_width)) {
            widths.push(p.half_width);
        }
    }
    if widths.len() < 2 {
        return Err(Error::LadderInsufficient("need at least two half widths".into()));
    }
    let group = |w: T| -> Vec<LadderPoint<T>> {
        let mut g: Vec<_> = points.iter().copied().filter(|p| close(p.half_width, w)).collect();
        g.sort_by(|a, b| b.h.partial_cmp(&a.h).unwrap());
        g
    };
    // primary: the width with the longest halving chain
    let mut primary: Option<(T, Vec<LadderPoint<T>>)> = None;
    for &w in &widths {
        let chain = halving_chain(&group(w));
        if chain.len() >= 3 && primary.as_ref().is_none_or(|(_, c)| chain.len() > c.len()) {
            primary = Some((w, chain));
        }
    }
    let (l1, chain) = primary
        .ok_or_else(|| Error::LadderInsufficient("need three spacings halving at a fixed half width".into()))?;

    let order = convergence_order(&ladder[0].0);
    let f = T::lit(2f64.powi(order as i32));
    let extrap: Vec<T> = chain.windows(2).map(|w| (f * w[1].energy - w[0].energy) / (f - T::one())).collect();
    let last = extrap[extrap.len() - 1];
    let prev = extrap[extrap.len() - 2];

    let mut spread: Option<T> = None;
    for p in points.iter().filter(|p| !close(p.half_width, l1)) {
        if let Some(q) = chain.iter().find(|q| close(q.h, p.h)) {
            let d = (p.energy - q.energy).abs();
            spread = Some(spread.map_or(d, |s: T| s.max(d)));
        }
    }
    let spread = spread.ok_or_else(|| {
        Error::LadderInsufficient("no other half width shares a spacing with the halving chain".into())
    })?;

    let finest = chain[chain.len() - 1].energy;
    let floor = T::epsilon() * T::lit(16.0) * last.abs().max(T::one());
    let error_bar = ((last - prev).abs() + spread).max((last - finest).abs()).max(floor);
    Ok(ConvergenceEstimate { extrapolated_energy: last, error_bar, order, ladder: points })
}

/// Longest run of successive exact halvings, coarsest first.
fn halving_chain<T: Real>(sorted: &[LadderPoint<T>]) -> Vec<LadderPoint<T>> {
    let mut best: Vec<LadderPoint<T>> = Vec::new();
    for start in 0..sorted.len() {
        let mut run = vec![sorted[start]];
        for p in &sorted[start + 1..] {
            if close(run[run.len() - 1].h, T::lit(2.0) * p.h) {
                run.push(*p);
            }
        }
        if run.len() > best.len() {
            best = run;
        }
    }
    best
}

/// How to build an extrapolation ladder for one set of model parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPolicy<T> {
    /// Primary half width; `None` uses [`default_half_width`].
    pub half_width: Option<T>,
    /// Coarsest spacing; `None` uses [`max_spacing`].
    pub base_spacing: Option<T>,
    /// Number of spacings (each half the previous) at the primary width.
    pub levels: usize,
    /// Second half width as a multiple of the first, at the coarsest spacing.
    pub outer_factor: T,
    pub stencil: StencilOrder,
    pub sampling: PotentialSampling,
    pub solver: SolverOptions<T>,
}

impl<T: Real> Default for GridPolicy<T> {
    fn default() -> Self {
        Self {
            half_width: None,
            base_spacing: None,
            levels: 3,
            outer_factor: T::lit(1.5),
            stencil: StencilOrder::Second,
            sampling: PotentialSampling::CellAveraged,
            solver: SolverOptions::default().without_vectors(),
        }
    }
}

impl<T: Real> GridPolicy<T> {
    /// Grids of the ladder, primary chain first.
    pub fn grids(&self, params: &ModelParams<T>) -> Result<Vec<GridSpec<T>>> {
        if self.levels < 3 {
            return Err(Error::LadderInsufficient(format!("{} levels requested, need 3", self.levels)));
        }
        if !(self.outer_factor > T::one()) {
            return Err(Error::InvalidParameter("outer_factor must exceed 1".into()));
        }
        let l1 = self.half_width.unwrap_or_else(|| default_half_width(params));
        let h0 = match self.base_spacing {
            Some(h) => h,
            None => max_spacing(params, self.sampling)?,
        };
        let mut g0 = GridSpec::with_max_spacing(l1, h0).with_stencil(self.stencil).with_sampling(self.sampling);
        // odd point count puts a node on the nucleus
        if g0.points % 2 == 0 {
            g0.points += 1;
        }
        g0.points = g0.points.max(crate::model::MIN_POINTS + 1);
        let mut grids = vec![g0];
        for _ in 1..self.levels {
            let next = grids[grids.len() - 1].refined();
            grids.push(next);
        }
        let h = g0.spacing();
        let mut cells = (self.outer_factor * T::lit((g0.points + 1) as f64)).round().to_usize().unwrap_or(0);
        if cells % 2 == 1 {
            cells += 1;
        }
        let l2 = h * T::lit(cells as f64) / T::lit(2.0);
        grids.push(GridSpec { half_width: l2, points: cells - 1, ..g0 });
        Ok(grids)
    }
}

/// Solves on every grid of `policy` and extrapolates.
pub fn converged_ground_energy<T: Real>(params: &ModelParams<T>, policy: &GridPolicy<T>) -> Result<ConvergenceEstimate<T>> {
    let grids = policy.grids(params)?;
    let mut ladder = Vec::with_capacity(grids.len());
    for g in grids {
        let op = assemble(params, &g)?;
        let res = ground_state_with(&op, 1, &policy.solver)?;
        ladder.push((g, res.energies[0]));
    }
    extrapolate(&ladder)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ladder(f: impl Fn(f64, f64) -> f64) -> Vec<(GridSpec<f64>, f64)> {
        let mut out = Vec::new();
        let mut g = GridSpec::new(10.0, 39);
        for _ in 0..4 {
            out.push((g, f(g.spacing(), g.half_width)));
            g = g.refined();
        }
        let outer = GridSpec::new(15.0, 59);
        out.push((outer, f(outer.spacing(), outer.half_width)));
        out
    }

    #[test]
    fn exact_quadratic_is_reproduced() {
        let lad = ladder(|h, _| -0.75 + 0.3 * h * h);
        let est = extrapolate(&lad).unwrap();
        assert!((est.extrapolated_energy + 0.75).abs() < 1e-12);
        // the bar never claims more than the distance to the finest grid
        let gap = (est.extrapolated_energy - est.finest().unwrap().energy).abs();
        assert!((est.error_bar - gap).abs() < 1e-15);
    }

    #[test]
    fn boundary_contamination_dominates() {
        let lad = ladder(|h, l| -0.75 + 0.3 * h * h + 0.1 * (-l / 5.0).exp());
        let est = extrapolate(&lad).unwrap();
        let spread = 0.1 * ((-2.0_f64).exp() - (-3.0_f64).exp());
        assert!((est.error_bar - spread).abs() < 1e-12, "{}", est.error_bar);
    }

    #[test]
    fn rejects_short_ladders() {
        let lad = ladder(|h, _| h);
        assert!(matches!(extrapolate(&lad[..2]), Err(Error::LadderInsufficient(_))));
        assert!(matches!(extrapolate(&lad[..4]), Err(Error::LadderInsufficient(_))));
        // the outer point no longer shares a spacing with the chain
        assert!(matches!(extrapolate(&lad[1..]), Err(Error::LadderInsufficient(_))));
        assert!(extrapolate(&lad).is_ok());
    }

    #[test]
    fn policy_grids_share_spacing() {
        let p = ModelParams::new(1, 1.0_f64, 1.0);
        let grids = GridPolicy::default().grids(&p).unwrap();
        assert_eq!(grids.len(), 4);
        assert!(grids.iter().take(3).all(|g| g.points % 2 == 1));
        assert!(close(grids[0].spacing(), grids[3].spacing()));
        assert!(grids[3].half_width > 1.4 * grids[0].half_width);
        assert!(grids[0].spacing() <= 0.5);
    }
}
