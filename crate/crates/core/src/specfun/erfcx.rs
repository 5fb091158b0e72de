//! Scaled complementary error function `erfcx(x) = exp(x^2) erfc(x)`.
//!
//! For `0 <= x <= 4` the function is expanded in a Taylor series around the
//! nearest node of a quarter-spaced table. The coefficients follow from the
//! ODE `y' = 2xy - 2/sqrt(pi)`, so only the node values are tabulated.
//! Above 4 the Laplace continued fraction is evaluated with the modified Lentz
//! algorithm; it needs about 30 terms at the switchover and fewer beyond.
//! No intermediate `exp(x^2)` is ever formed for `x >= 0`.

use crate::scalar::Real;

/// Upper end of the Taylor-table region.
pub const SERIES_LIMIT: f64 = 4.0;

const NODE_STEP: f64 = 0.25;

/// `erfcx(k / 4)` for `k = 0..=16`.
const NODE_VALUES: [f64; 17] = [
    1.0,
    0.770_346_547_730_996_743_9,
    0.615_690_344_192_925_874_9,
    0.506_937_650_293_144_805_8,
    0.427_583_576_155_807_004_4,
    0.367_822_916_452_361_092_9,
    0.321_585_416_454_317_502_4,
    0.284_972_234_737_436_389_2,
    0.255_395_676_310_505_743_9,
    0.231_087_258_730_391_870_0,
    0.210_806_364_061_143_580_6,
    0.193_662_096_279_068_678_6,
    0.179_001_151_181_389_950_4,
    0.166_335_348_426_821_876_8,
    0.155_293_655_608_894_297_4,
    0.145_589_721_275_038_539_0,
    0.136_999_457_625_061_389_9,
];

const MAX_TERMS: usize = 400;

/// `exp(x^2) erfc(x)` for any finite `x`.
///
/// Negative arguments use `erfcx(-x) = 2 exp(x^2) - erfcx(x)` and overflow to
/// infinity below about `-26.6`, as the true value does.
pub fn erfcx<T: Real>(x: T) -> T {
    if x.is_nan() {
        return x;
    }
    if x < T::zero() {
        let ax = -x;
        return T::lit(2.0) * (ax * ax).exp() - erfcx_nonneg(ax);
    }
    erfcx_nonneg(x)
}

fn erfcx_nonneg<T: Real>(x: T) -> T {
    if x <= T::lit(SERIES_LIMIT) {
        taylor_from_node(x)
    } else if x.is_infinite() {
        T::zero()
    } else {
        continued_fraction(x)
    }
}

fn taylor_from_node<T: Real>(x: T) -> T {
    let idx = (x.as_f64() / NODE_STEP + 0.5).floor() as usize;
    let idx = idx.min(NODE_VALUES.len() - 1);
    let c = T::lit(idx as f64 * NODE_STEP);
    let t = x - c;
    let two = T::lit(2.0);
    let two_over_sqrt_pi = T::FRAC_2_SQRT_PI();

    let mut prev = T::lit(NODE_VALUES[idx]);
    let mut cur = two * c * prev - two_over_sqrt_pi;
    let mut sum = prev + cur * t;
    let mut tpow = t;
    let eps = T::epsilon();
    for k in 1..MAX_TERMS {
        // (k+1) a_{k+1} = 2c a_k + 2 a_{k-1}
        let next = (two * c * cur + two * prev) / T::lit((k + 1) as f64);
        tpow = tpow * t;
        let term = next * tpow;
        sum = sum + term;
        prev = cur;
        cur = next;
        if term.abs() <= eps * sum.abs() * T::lit(0.25) && (cur * tpow * t).abs() <= eps * sum.abs()
        {
            break;
        }
    }
    sum
}

/// `erfcx(x) = 1 / (sqrt(pi) (x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))))`.
fn continued_fraction<T: Real>(x: T) -> T {
    let tiny = T::min_positive_value().sqrt();
    let eps = T::epsilon();
    let mut f = x;
    let mut c = f;
    let mut d = T::zero();
    for j in 1..MAX_TERMS {
        let a = T::lit(0.5 * j as f64);
        d = x + a * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = x + a / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = d.recip();
        let delta = c * d;
        f = f * delta;
        if (delta - T::one()).abs() <= eps {
            break;
        }
    }
    (T::PI().sqrt() * f).recip()
}
