//! Finite-difference discretizations of the one- and two-electron model
//! Hamiltonians
//!
//! ```text
//! h(N, Z, M) = sum_j [ -(1/M) d^2/dx_j^2 - Z V(x_j) ] + alpha sum_{j<k} 2^{-1/2} V(|x_j - x_k| / sqrt 2)
//! ```
//!
//! with `1/M = sqrt(B)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::specfun::quadrature::{gauss_legendre, GaussRule};
use crate::specfun::{v0, v_cut, PotentialKind};

/// Parameters of one instance of `h(N, Z, B^{-1/2})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams<T> {
    pub n_electrons: usize,
    pub z: T,
    /// Field strength; only the kinetic prefactor `sqrt(B)` depends on it.
    pub b: T,
    pub alpha: T,
    /// Shape of both the nuclear attraction and the pair interaction.
    pub attraction: PotentialKind<T>,
}

impl<T: Real> ModelParams<T> {
    /// `V_0` model with unit coupling.
    pub fn new(n_electrons: usize, z: T, b: T) -> Self {
        Self { n_electrons, z, b, alpha: T::one(), attraction: PotentialKind::v0() }
    }

    pub fn with_alpha(mut self, alpha: T) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_attraction(mut self, kind: PotentialKind<T>) -> Self {
        self.attraction = kind;
        self
    }

    pub fn with_electrons(mut self, n: usize) -> Self {
        self.n_electrons = n;
        self
    }

    /// `M = B^{-1/2}`.
    pub fn mass(&self) -> T {
        self.b.sqrt().recip()
    }

    pub fn kinetic_prefactor(&self) -> T {
        self.b.sqrt()
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=2).contains(&self.n_electrons) {
            return Err(Error::InvalidParameter(format!(
                "only 1 or 2 electrons can be discretized, got {}",
                self.n_electrons
            )));
        }
        if !(self.z >= T::zero() && self.z.is_finite()) {
            return Err(Error::InvalidParameter(format!("nuclear charge must be nonnegative, got {}", self.z)));
        }
        if !(self.b > T::zero() && self.b.is_finite()) {
            return Err(Error::InvalidParameter(format!("field strength must be positive, got {}", self.b)));
        }
        if !(self.alpha >= T::zero() && self.alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!("coupling must be nonnegative, got {}", self.alpha)));
        }
        ModelPotential::new(&self.attraction).map(|_| ())
    }
}

/// Closed-form potentials the model accepts.
#[derive(Debug, Clone, Copy)]
pub(crate) enum ModelPotential<T> {
    Regularized { sb: T },
    Cutoff,
}

impl<T: Real> ModelPotential<T> {
    pub(crate) fn new(kind: &PotentialKind<T>) -> Result<Self> {
        kind.validate()?;
        match *kind {
            PotentialKind::Regularized { m: 0, b } => Ok(Self::Regularized { sb: b.sqrt() }),
            PotentialKind::Cutoff => Ok(Self::Cutoff),
            other => Err(Error::UnsupportedKind(format!(
                "the model needs V_0 or the cut-off potential, got {other}"
            ))),
        }
    }

    #[inline]
    pub(crate) fn eval(&self, x: T) -> T {
        match *self {
            Self::Regularized { sb } => sb * v0(sb * x),
            Self::Cutoff => v_cut(x),
        }
    }

    /// `2^{-1/2} V(|s| / sqrt 2)`.
    #[inline]
    pub(crate) fn pair(&self, s: T) -> T {
        T::FRAC_1_SQRT_2() * self.eval(s.abs() * T::FRAC_1_SQRT_2())
    }

    /// Length over which the potential varies.
    fn length_scale(&self) -> T {
        match *self {
            Self::Regularized { sb } => sb.recip(),
            Self::Cutoff => T::one(),
        }
    }
}

/// `W(x, y) = -Z V(x) - Z V(y) + alpha 2^{-1/2} V(|x - y| / sqrt 2)`.
///
/// Meaningful for two-electron parameters; `n_electrons` is not consulted.
pub fn w_surface<T: Real>(params: &ModelParams<T>, x: T, y: T) -> Result<T> {
    let v = ModelPotential::new(&params.attraction)?;
    Ok(surface(&v, params.z, params.alpha, x, y))
}

#[inline]
pub(crate) fn surface<T: Real>(v: &ModelPotential<T>, z: T, alpha: T, x: T, y: T) -> T {
    -z * (v.eval(x) + v.eval(y)) + alpha * v.pair(x - y)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum StencilOrder {
    #[default]
    Second,
    Fourth,
}

impl StencilOrder {
    pub fn order(self) -> u32 {
        match self {
            StencilOrder::Second => 2,
            StencilOrder::Fourth => 4,
        }
    }

    /// Centre and off-diagonal weights of `-d^2/dx^2` in units of `1/h^2`.
    fn weights(self) -> (f64, &'static [f64]) {
        match self {
            StencilOrder::Second => (2.0, &[-1.0]),
            StencilOrder::Fourth => (30.0 / 12.0, &[-16.0 / 12.0, 1.0 / 12.0]),
        }
    }
}

/// How potentials are turned into diagonal entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialSampling {
    /// Point values at the nodes.
    Nodal,
    /// Averages against the piecewise-linear hat of each node (and its
    /// self-convolution for the pair term). Stays accurate when `h` is
    /// large compared with the width of the potential well.
    #[default]
    CellAveraged,
}

/// Uniform Dirichlet grid on `[-L, L]` with `n` interior nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec<T> {
    pub half_width: T,
    pub points: usize,
    #[serde(default)]
    pub stencil: StencilOrder,
    #[serde(default)]
    pub sampling: PotentialSampling,
}

pub const MIN_POINTS: usize = 16;

impl<T: Real> GridSpec<T> {
    pub fn new(half_width: T, points: usize) -> Self {
        Self { half_width, points, stencil: StencilOrder::Second, sampling: PotentialSampling::CellAveraged }
    }

    /// Grid whose spacing is as close as possible to `h` without exceeding it.
    pub fn with_max_spacing(half_width: T, h: T) -> Self {
        let cells = (T::lit(2.0) * half_width / h).ceil().to_usize().unwrap_or(usize::MAX);
        Self::new(half_width, cells.saturating_sub(1).max(1))
    }

    pub fn with_stencil(mut self, stencil: StencilOrder) -> Self {
        self.stencil = stencil;
        self
    }

    pub fn with_sampling(mut self, sampling: PotentialSampling) -> Self {
        self.sampling = sampling;
        self
    }

    /// `h = 2L / (n + 1)`.
    pub fn spacing(&self) -> T {
        T::lit(2.0) * self.half_width / T::lit((self.points + 1) as f64)
    }

    pub fn node(&self, i: usize) -> T {
        -self.half_width + T::lit((i + 1) as f64) * self.spacing()
    }

    pub fn nodes(&self) -> Vec<T> {
        (0..self.points).map(|i| self.node(i)).collect()
    }

    /// Same `L`, spacing halved.
    pub fn refined(&self) -> Self {
        Self { points: 2 * self.points + 1, ..*self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.half_width > T::zero() && self.half_width.is_finite()) {
            return Err(Error::InvalidParameter(format!("half width must be positive, got {}", self.half_width)));
        }
        if self.points < MIN_POINTS {
            return Err(Error::InvalidParameter(format!(
                "need at least {MIN_POINTS} points per axis, got {}",
                self.points
            )));
        }
        Ok(())
    }
}

/// Largest spacing [`assemble`] accepts. Nodal sampling must resolve the
/// potential, so `h <= 1/2` in units of its width. Cell averages resolve
/// the potential by construction and only the wavefunction scale matters,
/// which grows like `B^{1/4}` for strong fields: `h <= max(1, B)^{1/4} / 2`.
pub fn max_spacing<T: Real>(params: &ModelParams<T>, sampling: PotentialSampling) -> Result<T> {
    let v = ModelPotential::new(&params.attraction)?;
    let half = T::lit(0.5);
    Ok(match sampling {
        PotentialSampling::CellAveraged => half * params.b.max(T::one()).sqrt().sqrt(),
        PotentialSampling::Nodal => half * v.length_scale().min(T::one()),
    })
}

/// Default half width: 25 decay lengths of the estimated one-electron
/// ground state, and never below 10.
pub fn default_half_width<T: Real>(params: &ModelParams<T>) -> T {
    let sb = params.kinetic_prefactor();
    let z = params.z;
    let floor = T::lit(10.0);
    if !(z > T::zero()) {
        return floor;
    }
    let ratio = z * z / sb;
    let log = T::one() + (T::one() + ratio.recip()).ln();
    let depth = (z * T::PI().sqrt()).min(ratio * log * log);
    let kappa = (depth / sb).sqrt();
    floor.max(T::lit(25.0) / kappa)
}

/// Sparse symmetric discretization: explicit diagonal plus the constant
/// kinetic stencil along each axis.
#[derive(Debug, Clone)]
pub struct DiscreteOperator<T> {
    params: ModelParams<T>,
    grid: GridSpec<T>,
    diagonal: Vec<T>,
    offsets: Vec<T>,
    center: T,
}

impl<T: Real> DiscreteOperator<T> {
    pub fn params(&self) -> &ModelParams<T> {
        &self.params
    }

    pub fn grid(&self) -> &GridSpec<T> {
        &self.grid
    }

    pub fn dimension(&self) -> usize {
        self.diagonal.len()
    }

    pub fn axes(&self) -> usize {
        self.params.n_electrons
    }

    pub fn points_per_axis(&self) -> usize {
        self.grid.points
    }

    pub fn diagonal(&self) -> &[T] {
        &self.diagonal
    }

    /// Kinetic stencil along one axis: centre weight and off-diagonal
    /// weights at distance 1, 2, ...
    pub fn kinetic_stencil(&self) -> (T, &[T]) {
        (self.center, &self.offsets)
    }

    /// `y = A x`. Every entry is summed in a fixed order, so results do not
    /// depend on the thread count.
    pub fn apply(&self, x: &[T], y: &mut [T]) {
        assert_eq!(x.len(), self.dimension());
        assert_eq!(y.len(), self.dimension());
        let n = self.grid.points;
        match self.axes() {
            1 => {
                for (i, yi) in y.iter_mut().enumerate() {
                    *yi = self.diagonal[i] * x[i] + self.line_sum(x, i, n, 1, 0);
                }
            }
            _ => {
                y.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
                    let base = i * n;
                    for (j, yij) in row.iter_mut().enumerate() {
                        let k = base + j;
                        let along_y = self.line_sum(x, j, n, 1, base);
                        let along_x = self.line_sum(x, i, n, n, j);
                        *yij = self.diagonal[k] * x[k] + along_x + along_y;
                    }
                });
            }
        }
    }

    pub fn matvec(&self, x: &[T]) -> Vec<T> {
        let mut y = vec![T::zero(); x.len()];
        self.apply(x, &mut y);
        y
    }

    /// Off-diagonal stencil contribution along one line `start + stride * idx`.
    #[inline]
    fn line_sum(&self, x: &[T], idx: usize, n: usize, stride: usize, start: usize) -> T {
        let mut acc = T::zero();
        for (d, &w) in self.offsets.iter().enumerate() {
            let d = d + 1;
            let mut s = T::zero();
            if idx >= d {
                s = s + x[start + (idx - d) * stride];
            }
            if idx + d < n {
                s = s + x[start + (idx + d) * stride];
            }
            acc = acc + w * s;
        }
        acc
    }

    /// Dense row-major copy, for small test problems.
    pub fn to_dense(&self) -> Vec<T> {
        let dim = self.dimension();
        let mut a = vec![T::zero(); dim * dim];
        let mut e = vec![T::zero(); dim];
        let mut col = vec![T::zero(); dim];
        for j in 0..dim {
            e[j] = T::one();
            self.apply(&e, &mut col);
            for i in 0..dim {
                a[i * dim + j] = col[i];
            }
            e[j] = T::zero();
        }
        a
    }
}

/// Discretizes `h(N, Z, B^{-1/2})` on `grid` (tensor square of it for `N = 2`).
pub fn assemble<T: Real>(params: &ModelParams<T>, grid: &GridSpec<T>) -> Result<DiscreteOperator<T>> {
    params.validate()?;
    grid.validate()?;
    let v = ModelPotential::new(&params.attraction)?;
    let h = grid.spacing();
    let limit = max_spacing(params, grid.sampling)?;
    if h > limit {
        return Err(Error::GridTooCoarse { spacing: h.as_f64(), limit: limit.as_f64() });
    }
    let n = grid.points;
    let c = params.kinetic_prefactor() / (h * h);
    let (w0, ws) = grid.stencil.weights();
    let center = c * T::lit(w0);
    let offsets: Vec<T> = ws.iter().map(|&w| c * T::lit(w)).collect();
    let nodes = grid.nodes();
    // Wide stencils reach one node past the wall; take that ghost value as
    // the odd reflection of the first interior node.
    let ghost = offsets.get(1).copied().unwrap_or(T::zero());
    let edge = |i: usize| if i == 0 || i + 1 == n { -ghost } else { T::zero() };

    let rule = gauss_legendre::<T>(16);
    let attraction: Vec<T> = match grid.sampling {
        PotentialSampling::Nodal => nodes.iter().map(|&x| v.eval(x)).collect(),
        PotentialSampling::CellAveraged => nodes.iter().map(|&x| hat_average(&rule, &v, x, h)).collect(),
    };

    let diagonal = match params.n_electrons {
        1 => attraction.iter().enumerate().map(|(i, &a)| center + edge(i) - params.z * a).collect(),
        _ => {
            // pair term depends on i - j only; index by i - j + n - 1
            let pair: Vec<T> = (0..2 * n - 1)
                .map(|k| {
                    let d = T::lit(k as f64) - T::lit((n - 1) as f64);
                    params.alpha
                        * match grid.sampling {
                            PotentialSampling::Nodal => v.pair(d * h),
                            PotentialSampling::CellAveraged => spline_average(&rule, &v, d, h),
                        }
                })
                .collect();
            let two_center = center + center;
            let mut diag = vec![T::zero(); n * n];
            diag.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
                for (j, d) in row.iter_mut().enumerate() {
                    *d = two_center + edge(i) + edge(j) - params.z * (attraction[i] + attraction[j])
                        + pair[i + n - 1 - j];
                }
            });
            diag
        }
    };

    Ok(DiscreteOperator { params: *params, grid: *grid, diagonal, offsets, center })
}

/// `(1/h) ∫ V(x + s) (1 - |s|/h) ds` over `|s| <= h`.
fn hat_average<T: Real>(rule: &GaussRule<T>, v: &ModelPotential<T>, x: T, h: T) -> T {
    let mut breaks = vec![-h, T::zero(), h];
    if x.abs() < h && x != T::zero() {
        breaks.push(-x);
    }
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    integrate_pieces(rule, &breaks, |s| v.eval(x + s) * (T::one() - s.abs() / h)) / h
}

/// Average of the pair term at separation `d h` against the cubic B-spline,
/// the distribution of the difference of two independent hat offsets.
fn spline_average<T: Real>(rule: &GaussRule<T>, v: &ModelPotential<T>, d: T, h: T) -> T {
    let two = T::lit(2.0);
    let mut breaks: Vec<T> = [-2.0, -1.0, 0.0, 1.0, 2.0].iter().map(|&u| T::lit(u)).collect();
    if d.abs() < two && d != T::zero() && d.abs() != T::one() {
        breaks.push(-d);
    }
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    integrate_pieces(rule, &breaks, |u| v.pair((d + u) * h) * cubic_bspline(u))
}

fn cubic_bspline<T: Real>(u: T) -> T {
    let a = u.abs();
    let six = T::lit(6.0);
    if a <= T::one() {
        T::lit(2.0 / 3.0) - a * a + a * a * a / T::lit(2.0)
    } else if a <= T::lit(2.0) {
        let t = T::lit(2.0) - a;
        t * t * t / six
    } else {
        T::zero()
    }
}

fn integrate_pieces<T: Real>(rule: &GaussRule<T>, breaks: &[T], f: impl Fn(T) -> T) -> T {
    let half = T::lit(0.5);
    breaks
        .windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            let mid = half * (a + b);
            let rad = half * (b - a);
            rad * rule.apply(|t| f(mid + rad * t))
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bspline_is_a_density() {
        let rule = gauss_legendre::<f64>(16);
        let breaks = [-2.0, -1.0, 0.0, 1.0, 2.0];
        let mass = integrate_pieces(&rule, &breaks, cubic_bspline);
        let second = integrate_pieces(&rule, &breaks, |u| u * u * cubic_bspline(u));
        assert!((mass - 1.0).abs() < 1e-14);
        // variance of the sum of two hats, each 1/6
        assert!((second - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn hat_average_of_linear_is_exact() {
        let v = ModelPotential::Cutoff;
        let rule = gauss_legendre::<f64>(16);
        // 1/(x+1) is smooth away from 0; compare with a fine trapezoid
        let (x, h) = (3.0, 0.5);
        let got = hat_average(&rule, &v, x, h);
        let m = 20000;
        let mut acc = 0.0;
        for k in 0..=m {
            let s = -h + 2.0 * h * k as f64 / m as f64;
            let w = if k == 0 || k == m { 0.5 } else { 1.0 };
            acc += w * v_cut(x + s) * (1.0 - s.abs() / h);
        }
        acc *= 2.0 * h / m as f64 / h;
        assert!((got - acc).abs() < 1e-8);
    }

    #[test]
    fn half_width_defaults() {
        let p = ModelParams::new(1, 1.0_f64, 1.0);
        assert_eq!(default_half_width(&p), 25.0 / 1.772_453_850_905_516_f64.sqrt());
        assert_eq!(default_half_width(&ModelParams::new(1, 0.0_f64, 1.0)), 10.0);
        let strong = default_half_width(&ModelParams::new(2, 1.0_f64, 1e4));
        assert!(strong > 400.0 && strong < 500.0, "{strong}");
    }

    #[test]
    fn refinement_halves_spacing() {
        let g = GridSpec::new(10.0_f64, 39);
        assert_eq!(g.spacing(), 0.5);
        assert_eq!(g.refined().spacing(), 0.25);
        assert_eq!(g.node(19), 0.0);
        let g = GridSpec::<f64>::with_max_spacing(10.0, 0.3);
        assert!(g.spacing() <= 0.3 && g.spacing() > 0.28);
    }

    #[test]
    fn rejects_unsupported_potentials() {
        let p = ModelParams::new(1, 1.0_f64, 1.0).with_attraction(PotentialKind::Coulomb);
        assert!(matches!(p.validate(), Err(Error::UnsupportedKind(_))));
        let p = ModelParams::new(1, 1.0_f64, 1.0).with_attraction(PotentialKind::Regularized { m: 1, b: 1.0 });
        assert!(p.validate().is_err());
        assert!(ModelParams::new(3, 1.0_f64, 1.0).validate().is_err());
        assert!(ModelParams::new(2, 1.0_f64, 0.0).validate().is_err());
    }

    #[test]
    fn coarse_grid_is_rejected() {
        let p = ModelParams::new(1, 1.0_f64, 1.0);
        let g = GridSpec::new(20.0, 30);
        assert!(matches!(assemble(&p, &g), Err(Error::GridTooCoarse { .. })));
    }
}
