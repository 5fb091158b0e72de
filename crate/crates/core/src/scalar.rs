//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;
use std::sync::Arc;

use num_traits::{Float, FloatConst, FromPrimitive};
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftNum, FftPlanner};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Real floating-point scalar (implemented for `f32` and `f64`).
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + Default
    + Debug
    + Display
    + LowerExp
    + Sum
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Converts an `f64` literal into the scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Plans an unnormalized type-I discrete sine transform of length `len`.
    fn sine_transform(len: usize) -> Arc<dyn SineTransform<Self>>;
}

impl Real for f32 {
    fn sine_transform(len: usize) -> Arc<dyn SineTransform<Self>> {
        Arc::new(FftSine::<f32>::new(len))
    }
}

impl Real for f64 {
    fn sine_transform(len: usize) -> Arc<dyn SineTransform<Self>> {
        Arc::new(FftSine::<f64>::new(len))
    }
}

/// In-place DST-I: `y_k = sum_j x_j sin(pi j k / (n + 1))` for `j, k = 1..=n`.
///
/// Applying it twice multiplies the input by `(n + 1) / 2`.
pub trait SineTransform<T>: Send + Sync {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn apply(&self, data: &mut [T]);
}

/// DST-I through a complex FFT of the odd extension (length `2(n + 1)`).
struct FftSine<T: FftNum> {
    len: usize,
    fft: Arc<dyn Fft<T>>,
}

impl<T: FftNum> FftSine<T> {
    fn new(len: usize) -> Self {
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(2 * (len + 1));
        Self { len, fft }
    }
}

impl<T: FftNum + Float> SineTransform<T> for FftSine<T> {
    fn len(&self) -> usize {
        self.len
    }

    fn apply(&self, data: &mut [T]) {
        let n = self.len;
        assert_eq!(data.len(), n, "sine transform length mismatch");
        let m = 2 * (n + 1);
        let zero = <T as num_traits::Zero>::zero();
        let mut buf = vec![Complex::new(zero, zero); m];
        for (j, &x) in data.iter().enumerate() {
            buf[j + 1].re = x;
            buf[m - 1 - j].re = -x;
        }
        let mut scratch = vec![Complex::new(zero, zero); self.fft.get_inplace_scratch_len()];
        self.fft.process_with_scratch(&mut buf, &mut scratch);
        // FFT of the odd extension is -2i * DST-I.
        let half = <T as FromPrimitive>::from_f64(-0.5).unwrap();
        for (k, y) in data.iter_mut().enumerate() {
            *y = buf[k + 1].im * half;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dst_matches_direct_sum() {
        let n = 13;
        let x: Vec<f64> = (0..n).map(|i| ((i * 7 + 3) % 5) as f64 - 1.7).collect();
        let mut y = x.clone();
        f64::sine_transform(n).apply(&mut y);
        for k in 1..=n {
            let direct: f64 = (1..=n)
                .map(|j| x[j - 1] * (std::f64::consts::PI * (j * k) as f64 / (n + 1) as f64).sin())
                .sum();
            assert!((direct - y[k - 1]).abs() < 1e-12, "k={k}");
        }
    }

    #[test]
    fn dst_is_self_inverse_up_to_scale() {
        let n = 9;
        let x: Vec<f32> = (0..n).map(|i| (i as f32).sin()).collect();
        let t = f32::sine_transform(n);
        let mut y = x.clone();
        t.apply(&mut y);
        t.apply(&mut y);
        let scale = (n + 1) as f32 / 2.0;
        for (a, b) in x.iter().zip(&y) {
            assert!((a * scale - b).abs() < 1e-4);
        }
    }
}
