//! Lowest eigenpairs of the discretized Hamiltonians, with true residuals and
//! grid extrapolation.

mod extrapolate;
mod lanczos;
mod lobpcg;
mod precond;
pub mod vecops;

pub use extrapolate::{converged_ground_energy, extrapolate, ConvergenceEstimate, GridPolicy, LadderPoint};
pub use precond::KineticPreconditioner;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{DiscreteOperator, GridSpec};
use crate::scalar::Real;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_SEED: u64 = 0x005e_ed1d;
pub const MAX_PAIRS: usize = 8;
/// Above this dimension `SolverKind::Auto` picks the preconditioned block
/// solver when the operator offers a preconditioner.
pub const AUTO_BLOCK_THRESHOLD: usize = 600;

/// A real symmetric operator known through its action.
pub trait SymmetricOperator<T: Real>: Sync {
    fn dimension(&self) -> usize;

    fn apply(&self, x: &[T], y: &mut [T]);

    /// Deterministic start vector.
    fn start_vector(&self, seed: u64) -> Vec<T> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..self.dimension()).map(|_| T::lit(1.0 + rng.gen_range(-0.5..0.5))).collect()
    }

    /// Further start vectors for block solvers.
    fn block_vector(&self, seed: u64, index: usize) -> Vec<T> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(index as u64));
        (0..self.dimension()).map(|_| T::lit(rng.gen_range(-1.0..1.0))).collect()
    }

    /// Approximate inverse of the operator shifted by `shift`, if available.
    fn preconditioner(&self, _shift: T) -> Option<KineticPreconditioner<T>> {
        None
    }

    /// Lower bound of the kinetic part, used to pick a preconditioner shift.
    fn kinetic_floor(&self) -> T {
        T::one()
    }
}

impl<T: Real> SymmetricOperator<T> for DiscreteOperator<T> {
    fn dimension(&self) -> usize {
        DiscreteOperator::dimension(self)
    }

    fn apply(&self, x: &[T], y: &mut [T]) {
        DiscreteOperator::apply(self, x, y)
    }

    /// Gaussian centred at the nucleus (width `L/6`) plus the lowest box
    /// mode, so that states localized away from the nucleus also have an
    /// O(1) overlap, plus a small seeded perturbation against symmetry traps.
    fn start_vector(&self, seed: u64) -> Vec<T> {
        let profile = start_profile(self.grid());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let eps = T::lit(1e-3);
        let mut jitter = |base: T| base + eps * T::lit(rng.gen_range(-1.0..1.0)) * base.sqrt();
        match self.axes() {
            1 => profile.iter().map(|&p| jitter(p)).collect(),
            _ => {
                let n = profile.len();
                let mut v = Vec::with_capacity(n * n);
                for &pi in &profile {
                    for &pj in &profile {
                        v.push(jitter(pi * pj));
                    }
                }
                v
            }
        }
    }

    fn block_vector(&self, seed: u64, index: usize) -> Vec<T> {
        let box_mode = start_profile(self.grid());
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(index as u64));
        let n = box_mode.len();
        match self.axes() {
            1 => box_mode.iter().map(|&p| p * T::lit(rng.gen_range(-1.0..1.0))).collect(),
            _ => {
                let mut v = Vec::with_capacity(n * n);
                for &pi in &box_mode {
                    for &pj in &box_mode {
                        v.push(pi * pj * T::lit(rng.gen_range(-1.0..1.0)));
                    }
                }
                v
            }
        }
    }

    fn preconditioner(&self, shift: T) -> Option<KineticPreconditioner<T>> {
        let (center, offsets) = self.kinetic_stencil();
        Some(KineticPreconditioner::new(self.points_per_axis(), self.axes(), center, offsets, shift))
    }

    fn kinetic_floor(&self) -> T {
        let (center, offsets) = self.kinetic_stencil();
        let theta = T::PI() / T::lit((self.points_per_axis() + 1) as f64);
        let one_axis = precond::stencil_symbol(center, offsets, theta);
        one_axis * T::lit(self.axes() as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverKind {
    #[default]
    Auto,
    /// Restarted Lanczos with full reorthogonalization.
    Lanczos,
    /// Block preconditioned conjugate gradient (LOBPCG) with a fast-sine
    /// preconditioner for the kinetic term.
    Lobpcg,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions<T> {
    /// Residual target, relative to `1 + |lambda|`.
    pub tol: T,
    pub kind: SolverKind,
    /// Cap on operator applications; `None` means `max(10 sqrt(dim), 1000)`.
    pub max_matvecs: Option<usize>,
    /// Lanczos basis size before a thick restart.
    pub krylov_dim: Option<usize>,
    pub seed: u64,
    pub keep_vectors: bool,
}

impl<T: Real> Default for SolverOptions<T> {
    fn default() -> Self {
        Self {
            tol: T::lit(DEFAULT_TOL),
            kind: SolverKind::Auto,
            max_matvecs: None,
            krylov_dim: None,
            seed: DEFAULT_SEED,
            keep_vectors: true,
        }
    }
}

impl<T: Real> SolverOptions<T> {
    pub fn with_tol(mut self, tol: T) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_kind(mut self, kind: SolverKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn without_vectors(mut self) -> Self {
        self.keep_vectors = false;
        self
    }

    fn matvec_cap(&self, dim: usize) -> usize {
        self.max_matvecs.unwrap_or_else(|| ((10.0 * (dim as f64).sqrt()) as usize).max(1000))
    }
}

/// Lowest eigenpairs with their true residual norms `||A v - lambda v||`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult<T> {
    pub energies: Vec<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vectors: Option<Vec<Vec<T>>>,
    pub residual_norms: Vec<T>,
    pub matvecs: usize,
    pub grid: Option<GridSpec<T>>,
}

/// Raw output of an iterative solver before packaging.
pub(crate) struct Pairs<T> {
    pub values: Vec<T>,
    pub vectors: Vec<Vec<T>>,
    pub residuals: Vec<T>,
    pub matvecs: usize,
}

/// `k` lowest eigenpairs of a model operator with the default options.
pub fn ground_state<T: Real>(op: &DiscreteOperator<T>, k: usize, tol: T) -> Result<SpectrumResult<T>> {
    let mut res = lowest_eigenpairs(op, k, &SolverOptions::default().with_tol(tol))?;
    res.grid = Some(*op.grid());
    Ok(res)
}

pub fn ground_state_with<T: Real>(
    op: &DiscreteOperator<T>,
    k: usize,
    opts: &SolverOptions<T>,
) -> Result<SpectrumResult<T>> {
    let mut res = lowest_eigenpairs(op, k, opts)?;
    res.grid = Some(*op.grid());
    Ok(res)
}

/// `k` lowest eigenpairs of any symmetric operator.
pub fn lowest_eigenpairs<T: Real, A: SymmetricOperator<T>>(
    op: &A,
    k: usize,
    opts: &SolverOptions<T>,
) -> Result<SpectrumResult<T>> {
    let dim = op.dimension();
    if k == 0 || k > MAX_PAIRS {
        return Err(Error::InvalidParameter(format!("can compute 1 to {MAX_PAIRS} pairs, asked for {k}")));
    }
    if k > dim {
        return Err(Error::InvalidParameter(format!("{k} pairs requested from a {dim}-dimensional operator")));
    }
    if !(opts.tol > T::zero()) {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    let kind = match opts.kind {
        SolverKind::Auto if dim > AUTO_BLOCK_THRESHOLD && op.preconditioner(T::one()).is_some() => SolverKind::Lobpcg,
        SolverKind::Auto => SolverKind::Lanczos,
        other => other,
    };
    let pairs = match kind {
        SolverKind::Lobpcg => lobpcg::solve(op, k, opts)?,
        _ => lanczos::solve(op, k, opts)?,
    };
    Ok(SpectrumResult {
        energies: pairs.values,
        vectors: opts.keep_vectors.then_some(pairs.vectors),
        residual_norms: pairs.residuals,
        matvecs: pairs.matvecs,
        grid: None,
    })
}

/// True residuals `||A v - lambda v||` for normalized `v`.
pub(crate) fn true_residuals<T: Real, A: SymmetricOperator<T>>(op: &A, values: &[T], vectors: &[Vec<T>]) -> Vec<T> {
    let mut av = vec![T::zero(); op.dimension()];
    values
        .iter()
        .zip(vectors)
        .map(|(&lam, v)| {
            op.apply(v, &mut av);
            vecops::axpy(-lam, v, &mut av);
            vecops::norm(&av)
        })
        .collect()
}

/// Per-axis start profile: Gaussian of width `L/6` plus the lowest box mode.
fn start_profile<T: Real>(grid: &GridSpec<T>) -> Vec<T> {
    let l = grid.half_width;
    let sigma = l / T::lit(6.0);
    let half_pi = T::FRAC_PI_2();
    grid.nodes()
        .iter()
        .map(|&x| (-(x * x) / (T::lit(2.0) * sigma * sigma)).exp() + (half_pi * x / l).cos())
        .collect()
}

pub(crate) fn converged<T: Real>(tol: T, lam: T, res: T) -> bool {
    res <= tol * (T::one() + lam.abs())
}
