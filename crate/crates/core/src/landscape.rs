//! Critical points and regime classification of the two-electron surface
//! `W(x, y) = -Z V(x) - Z V(y) + 2^{-1/2} V(|x - y| / sqrt 2)` with
//! `V = V_0^B`.
//!
//! `W` is smooth except on the lines `x = 0`, `y = 0` and `x = y`, where
//! `|.|` enters. The origin sits on all three, so it is classified by its
//! one-sided directional slopes instead of a Hessian; elsewhere critical
//! points come from a sign-change scan of the gradient followed by damped
//! Newton iterations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{surface, ModelPotential};
use crate::scalar::Real;
use crate::specfun::PotentialKind;

/// Central-difference step for gradients, in units of `1/sqrt(B)`.
pub const GRADIENT_STEP: f64 = 1e-5;
pub const HESSIAN_STEP: f64 = 1e-4;
pub const MAX_NEWTON: usize = 50;
pub const DEDUP_RADIUS: f64 = 1e-6;
pub const GRADIENT_TOL: f64 = 1e-9;
pub const CURVATURE_TOL: f64 = 1e-8;
/// Charges within this distance of a regime boundary are not classified.
pub const BOUNDARY_GUARD: f64 = 1e-9;
/// One-sided step for the directional slopes at the origin.
const SLOPE_STEP: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointKind {
    Minimum,
    Saddle,
    Maximum,
    /// A curvature (or slope) too close to zero to call.
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint<T> {
    pub x: T,
    pub y: T,
    pub value: T,
    /// For smooth points, `|grad W|` from a five-point stencil independent
    /// of the one used by Newton. Zero for the origin.
    pub gradient_norm: T,
    /// Ascending; absent for the nonsmooth origin.
    pub hessian_eigenvalues: Option<[T; 2]>,
    /// Smallest and largest one-sided slope over unit directions; only for
    /// the origin.
    pub directional_slopes: Option<[T; 2]>,
    pub kind: PointKind,
    pub smooth: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// Repulsive origin without off-axis saddles (`Z <= 1/4`).
    Repulsive,
    /// Repulsive origin; saddles on `y = -x`.
    I,
    /// Attractive origin that is not yet a 2D minimum.
    II,
    /// Origin is a minimum lying above the one-electron valley, `W(0,0) > W(0,inf)`.
    III,
    /// Origin is the global minimum, `W(0,0) <= W(0,inf)`.
    IV,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport<T> {
    pub z: T,
    pub b: T,
    pub origin_value: T,
    pub origin_attractive: bool,
    /// `W(0,0) - W(0, inf)`.
    pub origin_minus_infinity: T,
    /// Sign of `W(0,0) - W(0, inf)`: -1, 0 or 1.
    pub origin_vs_infinity: i8,
    pub origin_kind: PointKind,
    pub origin_slopes: [T; 2],
    pub off_axis_points: Vec<CriticalPoint<T>>,
    pub regime: Regime,
}

/// Rectangle `[x0, x1] x [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Region<T> {
    pub x0: T,
    pub x1: T,
    pub y0: T,
    pub y1: T,
}

impl<T: Real> Region<T> {
    pub fn square(r: T) -> Self {
        Self { x0: -r, x1: r, y0: -r, y1: r }
    }

    pub fn contains(&self, x: T, y: T) -> bool {
        x >= self.x0 && x <= self.x1 && y >= self.y0 && y <= self.y1
    }

    /// Default search window, large enough to hold the saddles down to
    /// `Z` just above 1/4.
    pub fn default_for(b: T) -> Self {
        Self::square(T::lit(20.0) / b.sqrt())
    }

    fn validate(&self) -> Result<()> {
        let ok = [self.x0, self.x1, self.y0, self.y1].iter().all(|v| v.is_finite())
            && self.x0 < self.x1
            && self.y0 < self.y1;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter("region must be a bounded, nonempty rectangle".into()))
        }
    }
}

/// The surface for one `(Z, B)`, unit coupling.
#[derive(Debug, Clone, Copy)]
pub struct Surface<T> {
    z: T,
    b: T,
    v: ModelPotential<T>,
}

impl<T: Real> Surface<T> {
    pub fn new(z: T, b: T) -> Result<Self> {
        if !(z > T::zero() && z.is_finite()) {
            return Err(Error::InvalidParameter(format!("nuclear charge must be positive, got {z}")));
        }
        let v = ModelPotential::new(&PotentialKind::Regularized { m: 0, b })?;
        Ok(Self { z, b, v })
    }

    pub fn z(&self) -> T {
        self.z
    }

    pub fn b(&self) -> T {
        self.b
    }

    #[inline]
    pub fn eval(&self, x: T, y: T) -> T {
        surface(&self.v, self.z, T::one(), x, y)
    }

    /// `W(0, 0) = (1/sqrt 2 - 2Z) sqrt(pi B)`.
    pub fn origin_value(&self) -> T {
        self.eval(T::zero(), T::zero())
    }

    /// Exact limit of `W(0, y)` as `y -> inf`: `-Z V(0)`.
    pub fn origin_at_infinity(&self) -> T {
        -self.z * self.v.eval(T::zero())
    }

    fn length(&self) -> T {
        self.b.sqrt().recip()
    }

    /// Central-difference gradient.
    pub fn gradient(&self, x: T, y: T) -> [T; 2] {
        let h = T::lit(GRADIENT_STEP) * self.length();
        let two_h = h + h;
        [
            (self.eval(x + h, y) - self.eval(x - h, y)) / two_h,
            (self.eval(x, y + h) - self.eval(x, y - h)) / two_h,
        ]
    }

    /// Five-point gradient with a different step, for verification.
    pub fn gradient_check(&self, x: T, y: T) -> [T; 2] {
        let h = T::lit(1e-3) * self.length();
        let d = |f: &dyn Fn(T) -> T| {
            (f(-T::lit(2.0) * h) - T::lit(8.0) * f(-h) + T::lit(8.0) * f(h) - f(T::lit(2.0) * h)) / (T::lit(12.0) * h)
        };
        [d(&|s| self.eval(x + s, y)), d(&|s| self.eval(x, y + s))]
    }

    pub fn hessian(&self, x: T, y: T) -> [[T; 2]; 2] {
        let h = T::lit(HESSIAN_STEP) * self.length();
        let f0 = self.eval(x, y);
        let hh = h * h;
        let fxx = (self.eval(x + h, y) - T::lit(2.0) * f0 + self.eval(x - h, y)) / hh;
        let fyy = (self.eval(x, y + h) - T::lit(2.0) * f0 + self.eval(x, y - h)) / hh;
        let fxy = (self.eval(x + h, y + h) - self.eval(x + h, y - h) - self.eval(x - h, y + h)
            + self.eval(x - h, y - h))
            / (T::lit(4.0) * hh);
        [[fxx, fxy], [fxy, fyy]]
    }

    /// One-sided slope of `W` at the origin along angle `phi`, by a
    /// second-order forward difference.
    pub fn origin_slope(&self, phi: T) -> T {
        let h = T::lit(SLOPE_STEP) * self.length();
        let (s, c) = phi.sin_cos();
        let f = |t: T| self.eval(t * c, t * s);
        (-T::lit(3.0) * f(T::zero()) + T::lit(4.0) * f(h) - f(h + h)) / (h + h)
    }

    /// `[min, max]` of [`Self::origin_slope`] over the unit circle.
    pub fn origin_slope_range(&self) -> [T; 2] {
        let samples = 720;
        let step = T::lit(std::f64::consts::TAU / samples as f64);
        let vals: Vec<T> = (0..samples).map(|k| self.origin_slope(step * T::lit(k as f64))).collect();
        let refine = |sign: T| {
            let (k, _) = vals
                .iter()
                .enumerate()
                .min_by(|a, b| (sign * *a.1).partial_cmp(&(sign * *b.1)).unwrap())
                .unwrap();
            let centre = step * T::lit(k as f64);
            golden_min(|p| sign * self.origin_slope(p), centre - step, centre + step) * sign
        };
        [refine(T::one()), refine(-T::one())]
    }

    /// Newton with Armijo backtracking on `|grad W|^2`.
    fn newton(&self, x0: T, y0: T) -> Option<(T, T)> {
        let (mut x, mut y) = (x0, y0);
        let target = T::lit(GRADIENT_TOL) * T::lit(0.1) * self.b;
        for _ in 0..MAX_NEWTON {
            let g = self.gradient(x, y);
            let gn2 = g[0] * g[0] + g[1] * g[1];
            if gn2.sqrt() <= target {
                return Some((x, y));
            }
            let hm = self.hessian(x, y);
            let det = hm[0][0] * hm[1][1] - hm[0][1] * hm[1][0];
            if det.abs() < T::lit(1e-300) {
                return None;
            }
            let dx = -(hm[1][1] * g[0] - hm[0][1] * g[1]) / det;
            let dy = -(-hm[1][0] * g[0] + hm[0][0] * g[1]) / det;
            let mut t = T::one();
            let mut accepted = false;
            for _ in 0..30 {
                let (nx, ny) = (x + t * dx, y + t * dy);
                let ng = self.gradient(nx, ny);
                let ngn2 = ng[0] * ng[0] + ng[1] * ng[1];
                if ngn2 <= (T::one() - T::lit(1e-4) * t) * gn2 {
                    x = nx;
                    y = ny;
                    accepted = true;
                    break;
                }
                t = t * T::lit(0.5);
            }
            if !accepted {
                let g = self.gradient(x, y);
                return ((g[0] * g[0] + g[1] * g[1]).sqrt() <= target).then_some((x, y));
            }
        }
        let g = self.gradient(x, y);
        ((g[0] * g[0] + g[1] * g[1]).sqrt() <= target * T::lit(10.0)).then_some((x, y))
    }

    fn near_kink(&self, x: T, y: T) -> bool {
        let guard = T::lit(1e-6) * self.length();
        x.abs() < guard || y.abs() < guard || (x - y).abs() < guard
    }

    fn smooth_point(&self, x: T, y: T) -> CriticalPoint<T> {
        let g = self.gradient_check(x, y);
        let hm = self.hessian(x, y);
        let ev = sym2_eigenvalues(hm);
        let tol = T::lit(CURVATURE_TOL);
        let kind = if ev[0].abs() <= tol || ev[1].abs() <= tol {
            PointKind::Degenerate
        } else if ev[0] > T::zero() {
            PointKind::Minimum
        } else if ev[1] < T::zero() {
            PointKind::Maximum
        } else {
            PointKind::Saddle
        };
        CriticalPoint {
            x,
            y,
            value: self.eval(x, y),
            gradient_norm: (g[0] * g[0] + g[1] * g[1]).sqrt(),
            hessian_eigenvalues: Some(ev),
            directional_slopes: None,
            kind,
            smooth: true,
        }
    }

    /// The origin as a nonsmooth point, classified by its slopes.
    pub fn origin_point(&self) -> CriticalPoint<T> {
        let slopes = self.origin_slope_range();
        let tol = T::lit(CURVATURE_TOL);
        let kind = if slopes[0] > tol {
            PointKind::Minimum
        } else if slopes[1] < -tol {
            PointKind::Maximum
        } else if slopes[0] < -tol && slopes[1] > tol {
            PointKind::Saddle
        } else {
            PointKind::Degenerate
        };
        CriticalPoint {
            x: T::zero(),
            y: T::zero(),
            value: self.origin_value(),
            gradient_norm: T::zero(),
            hessian_eigenvalues: None,
            directional_slopes: Some(slopes),
            kind,
            smooth: false,
        }
    }
}

fn sym2_eigenvalues<T: Real>(h: [[T; 2]; 2]) -> [T; 2] {
    let tr = (h[0][0] + h[1][1]) / T::lit(2.0);
    let d = (h[0][0] - h[1][1]) / T::lit(2.0);
    let r = (d * d + h[0][1] * h[0][1]).sqrt();
    [tr - r, tr + r]
}

fn golden_min<T: Real>(f: impl Fn(T) -> T, mut a: T, mut b: T) -> T {
    let g = T::lit(0.618_033_988_749_894_9);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..80 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    f((a + b) / T::lit(2.0))
}

/// Scan nodes on `[lo, hi]` clustered around 0 by a sinh map.
fn scan_axis<T: Real>(lo: T, hi: T, count: usize) -> Vec<T> {
    let r = lo.abs().max(hi.abs());
    let a = T::lit(6.0);
    let sa = a.sinh();
    let mut out: Vec<T> = (0..count)
        .map(|k| {
            let t = T::lit(-1.0 + 2.0 * k as f64 / (count - 1) as f64);
            r * (a * t).sinh() / sa
        })
        .filter(|&v| v >= lo && v <= hi)
        .collect();
    if out.first() != Some(&lo) {
        out.insert(0, lo);
    }
    if out.last() != Some(&hi) {
        out.push(hi);
    }
    out
}

pub const SCAN_POINTS: usize = 241;

/// Critical points of `W` in `region`: smooth ones from a gradient
/// sign-change scan refined by Newton, plus the origin when it lies inside.
pub fn find_critical_points<T: Real>(z: T, b: T, region: &Region<T>) -> Result<Vec<CriticalPoint<T>>> {
    region.validate()?;
    let s = Surface::new(z, b)?;
    let xs = scan_axis(region.x0, region.x1, SCAN_POINTS);
    let ys = scan_axis(region.y0, region.y1, SCAN_POINTS);
    let grads: Vec<Vec<[T; 2]>> = xs.iter().map(|&x| ys.iter().map(|&y| s.gradient(x, y)).collect()).collect();

    let mut found: Vec<CriticalPoint<T>> = Vec::new();
    let radius = T::lit(DEDUP_RADIUS) * s.length();
    for i in 0..xs.len() - 1 {
        for j in 0..ys.len() - 1 {
            let corners = [grads[i][j], grads[i + 1][j], grads[i][j + 1], grads[i + 1][j + 1]];
            let changes = |c: usize| {
                let pos = corners.iter().any(|g| g[c] > T::zero());
                let neg = corners.iter().any(|g| g[c] < T::zero());
                pos && neg
            };
            if !(changes(0) && changes(1)) {
                continue;
            }
            let cx = (xs[i] + xs[i + 1]) / T::lit(2.0);
            let cy = (ys[j] + ys[j + 1]) / T::lit(2.0);
            let Some((x, y)) = s.newton(cx, cy) else { continue };
            if !region.contains(x, y) || s.near_kink(x, y) {
                continue;
            }
            if found.iter().any(|p| (p.x - x).hypot(p.y - y) < radius) {
                continue;
            }
            let p = s.smooth_point(x, y);
            if p.gradient_norm <= T::lit(GRADIENT_TOL) {
                found.push(p);
            }
        }
    }
    found.sort_by(|a, b| a.x.partial_cmp(&b.x).unwrap().then(a.y.partial_cmp(&b.y).unwrap()));
    if region.contains(T::zero(), T::zero()) {
        found.insert(0, s.origin_point());
    }
    Ok(found)
}

/// Boundary charges between the regimes, independent of `B`.
pub fn origin_sign_charge<T: Real>() -> T {
    T::FRAC_1_SQRT_2() / T::lit(2.0)
}

pub fn origin_infinity_charge<T: Real>() -> T {
    T::FRAC_1_SQRT_2()
}

pub fn coalescence_charge<T: Real>() -> T {
    T::lit(0.5)
}

/// Assigns a regime to `(Z, B)`.
pub fn classify_regime<T: Real>(z: T, b: T) -> Result<RegimeReport<T>> {
    classify_regime_in(z, b, &Region::default_for(b))
}

pub fn classify_regime_in<T: Real>(z: T, b: T, region: &Region<T>) -> Result<RegimeReport<T>> {
    let s = Surface::new(z, b)?;
    let origin_value = s.origin_value();
    let guard = T::lit(BOUNDARY_GUARD);
    for boundary in [origin_sign_charge::<T>(), coalescence_charge(), origin_infinity_charge()] {
        if (z - boundary).abs() <= guard {
            return Err(Error::DegenerateAtBoundary {
                z: z.as_f64(),
                boundary: boundary.as_f64(),
                origin_value: origin_value.as_f64(),
            });
        }
    }
    let points = find_critical_points(z, b, region)?;
    let origin = s.origin_point();
    let off_axis: Vec<CriticalPoint<T>> = points.into_iter().filter(|p| p.smooth).collect();
    let diff = origin_value - s.origin_at_infinity();
    let sign = if diff > T::zero() {
        1
    } else if diff < T::zero() {
        -1
    } else {
        0
    };
    let origin_min = origin.kind == PointKind::Minimum;
    let saddles = off_axis.iter().any(|p| p.kind == PointKind::Saddle && (p.x + p.y).abs() <= radius_on_antidiagonal(&s));
    let regime = if origin_value > T::zero() {
        if saddles {
            Regime::I
        } else {
            Regime::Repulsive
        }
    } else if !origin_min {
        Regime::II
    } else if sign > 0 {
        Regime::III
    } else {
        Regime::IV
    };
    Ok(RegimeReport {
        z,
        b,
        origin_value,
        origin_attractive: origin_value < T::zero(),
        origin_minus_infinity: diff,
        origin_vs_infinity: sign,
        origin_kind: origin.kind,
        origin_slopes: origin.directional_slopes.unwrap_or([T::zero(); 2]),
        off_axis_points: off_axis,
        regime,
    })
}

fn radius_on_antidiagonal<T: Real>(s: &Surface<T>) -> T {
    T::lit(1e-6) * s.length()
}

/// Charges at which the regime indicators flip, each located by bisection
/// on the computed quantity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeBoundaries<T> {
    /// Sign change of `W(0,0)`.
    pub origin_sign: T,
    /// Sign change of the smallest origin slope (the saddles merge into the origin).
    pub coalescence: T,
    /// Sign change of `W(0,0) - W(0, inf)`.
    pub origin_vs_infinity: T,
}

pub fn locate_boundaries<T: Real>(b: T) -> Result<RegimeBoundaries<T>> {
    let tol = T::lit(1e-12);
    let origin = |z: T| Surface::new(z, b).map(|s| s.origin_value());
    let slope = |z: T| Surface::new(z, b).map(|s| s.origin_slope_range()[0]);
    let vs_inf = |z: T| Surface::new(z, b).map(|s| s.origin_value() - s.origin_at_infinity());
    Ok(RegimeBoundaries {
        origin_sign: bisect(origin, T::lit(0.2), T::lit(0.5), tol)?,
        coalescence: bisect(slope, T::lit(0.4), T::lit(0.6), tol)?,
        origin_vs_infinity: bisect(vs_inf, T::lit(0.6), T::lit(0.9), tol)?,
    })
}

fn bisect<T: Real>(f: impl Fn(T) -> Result<T>, mut lo: T, mut hi: T, tol: T) -> Result<T> {
    let flo = f(lo)?;
    let fhi = f(hi)?;
    if flo.signum() == fhi.signum() {
        return Err(Error::BracketNotFound { lo: lo.as_f64(), hi: hi.as_f64() });
    }
    while hi - lo > tol {
        let mid = (lo + hi) / T::lit(2.0);
        if f(mid)?.signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) / T::lit(2.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow<T> {
    pub z: T,
    pub x: T,
    /// `W(x, -x)`: electrons on opposite sides.
    pub opposite: T,
    /// `W(x, 0)`: one electron at the nucleus.
    pub one_at_nucleus: T,
}

pub fn default_profile_charges<T: Real>() -> Vec<T> {
    [0.25, 0.3, 0.35, 0.4, 0.5, 0.6, 0.7, 0.8].iter().map(|&z| T::lit(z)).collect()
}

/// Sections `W(x, -x)` and `W(x, 0)` for each charge in `zs`.
pub fn section_profiles<T: Real>(zs: &[T], b: T, xs: &[T]) -> Result<Vec<ProfileRow<T>>> {
    let mut rows = Vec::with_capacity(zs.len() * xs.len());
    for &z in zs {
        let s = Surface::new(z, b)?;
        for &x in xs {
            if !x.is_finite() {
                return Err(Error::InvalidParameter("profile abscissae must be finite".into()));
            }
            rows.push(ProfileRow { z, x, opposite: s.eval(x, -x), one_at_nucleus: s.eval(x, T::zero()) });
        }
    }
    Ok(rows)
}
