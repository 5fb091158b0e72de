//! Gauss rules (Golub-Welsch) and adaptive Gauss-Kronrod integration.

use crate::error::{Error, Result};
use crate::linalg::tridiagonal_eigen;
use crate::scalar::Real;

/// Nodes and weights of an interpolatory rule.
#[derive(Debug, Clone)]
pub struct GaussRule<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Real> GaussRule<T> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn apply(&self, mut f: impl FnMut(T) -> T) -> T {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre<T: Real>(n: usize) -> GaussRule<T> {
    let diag = vec![0.0_f64; n];
    let off: Vec<f64> = (1..n)
        .map(|k| {
            let k = k as f64;
            k / (4.0 * k * k - 1.0).sqrt()
        })
        .collect();
    let eig = tridiagonal_eigen(&diag, &off, 1);
    let mut nodes: Vec<f64> = eig.values.clone();
    let mut weights: Vec<f64> = (0..n).map(|j| 2.0 * eig.vector_entry(0, j).powi(2)).collect();
    // Enforce exact symmetry of the rule.
    for i in 0..n / 2 {
        let j = n - 1 - i;
        let x = 0.5 * (nodes[j] - nodes[i]);
        nodes[i] = -x;
        nodes[j] = x;
        let w = 0.5 * (weights[i] + weights[j]);
        weights[i] = w;
        weights[j] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    GaussRule {
        nodes: nodes.into_iter().map(T::lit).collect(),
        weights: weights.into_iter().map(T::lit).collect(),
    }
}

/// `n`-point generalized Gauss-Laguerre rule for the weight `u^alpha e^{-u}`,
/// with weights normalized to sum to one (divided by `Gamma(alpha + 1)`).
pub fn gauss_laguerre<T: Real>(n: usize, alpha: f64) -> GaussRule<T> {
    let diag: Vec<f64> = (0..n).map(|k| 2.0 * k as f64 + alpha + 1.0).collect();
    let off: Vec<f64> = (1..n)
        .map(|k| {
            let k = k as f64;
            (k * (k + alpha)).sqrt()
        })
        .collect();
    let eig = tridiagonal_eigen(&diag, &off, 1);
    GaussRule {
        nodes: eig.values.iter().map(|&x| T::lit(x)).collect(),
        weights: (0..n).map(|j| T::lit(eig.vector_entry(0, j).powi(2))).collect(),
    }
}

// Kronrod 15-point abscissae on [0, 1) (symmetric); every odd index is a Gauss 7-point node.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// One G7/K15 panel on `[a, b]`: returns (Kronrod estimate, |K15 - G7|).
pub fn gauss_kronrod_15<T: Real>(f: &mut impl FnMut(T) -> T, a: T, b: T) -> (T, T) {
    let half = T::lit(0.5);
    let center = (a + b) * half;
    let radius = (b - a) * half;
    let fc = f(center);
    let mut kronrod = fc * T::lit(WGK[7]);
    let mut gauss = fc * T::lit(WG[3]);
    for j in 0..7 {
        let dx = radius * T::lit(XGK[j]);
        let pair = f(center - dx) + f(center + dx);
        kronrod = kronrod + pair * T::lit(WGK[j]);
        if j % 2 == 1 {
            gauss = gauss + pair * T::lit(WG[j / 2]);
        }
    }
    (kronrod * radius, ((kronrod - gauss) * radius).abs())
}

/// Globally adaptive G7/K15 integration of `f` over the consecutive panels
/// defined by `breaks` (at least two ascending points).
pub fn integrate_adaptive<T: Real>(
    mut f: impl FnMut(T) -> T,
    breaks: &[T],
    rel_tol: T,
    abs_tol: T,
    max_panels: usize,
) -> Result<T> {
    assert!(breaks.len() >= 2, "need at least one panel");
    let mut panels: Vec<(T, T, T, T)> = breaks
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| {
            let (v, e) = gauss_kronrod_15(&mut f, w[0], w[1]);
            (w[0], w[1], v, e)
        })
        .collect();
    loop {
        let total: T = panels.iter().map(|p| p.2).sum();
        let err: T = panels.iter().map(|p| p.3).sum();
        if err <= abs_tol.max(rel_tol * total.abs()) {
            return Ok(total);
        }
        if panels.len() >= max_panels {
            return Err(Error::QuadratureNotConverged {
                nodes: panels.len() * 15,
                estimate: total.as_f64(),
                error: err.as_f64(),
            });
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .fold((0, T::neg_infinity()), |acc, (i, p)| if p.3 > acc.1 { (i, p.3) } else { acc });
        let (a, b, _, _) = panels.swap_remove(worst);
        let mid = (a + b) * T::lit(0.5);
        if !(mid > a && mid < b) {
            return Err(Error::QuadratureNotConverged {
                nodes: panels.len() * 15,
                estimate: total.as_f64(),
                error: err.as_f64(),
            });
        }
        let (v1, e1) = gauss_kronrod_15(&mut f, a, mid);
        let (v2, e2) = gauss_kronrod_15(&mut f, mid, b);
        panels.push((a, mid, v1, e1));
        panels.push((mid, b, v2, e2));
    }
}
