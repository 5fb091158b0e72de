//! Additive-recurrence (Kronecker) low-discrepancy sequences.

/// Unit-square points `frac(offset + i * (1/g, 1/g^2))` with `g` the plastic
/// number, the two-dimensional analogue of golden-ratio sampling.
#[derive(Debug, Clone)]
pub struct R2 {
    index: u64,
    alpha: [f64; 2],
    offset: [f64; 2],
}

const PLASTIC: f64 = 1.324_717_957_244_746;

impl R2 {
    /// `seed` shifts the whole sequence; equal seeds give equal sequences.
    pub fn new(seed: u64) -> Self {
        let alpha = [1.0 / PLASTIC, 1.0 / (PLASTIC * PLASTIC)];
        let s = seed as f64;
        let offset = [frac(0.5 + s * alpha[0]), frac(0.5 + s * alpha[1])];
        Self { index: 0, alpha, offset }
    }

    pub fn next_point(&mut self) -> [f64; 2] {
        let i = self.index as f64;
        self.index += 1;
        [frac(self.offset[0] + i * self.alpha[0]), frac(self.offset[1] + i * self.alpha[1])]
    }

    /// Next point mapped to `[-r, r]^2`.
    pub fn next_in_square(&mut self, r: f64) -> [f64; 2] {
        let [u, v] = self.next_point();
        [r * (2.0 * u - 1.0), r * (2.0 * v - 1.0)]
    }
}

/// One-dimensional golden-ratio sequence on `[a, b)`.
pub fn golden_points(n: usize, a: f64, b: f64, seed: u64) -> Vec<f64> {
    let g = 0.618_033_988_749_894_9;
    let off = frac(0.5 + seed as f64 * g);
    (0..n).map(|i| a + (b - a) * frac(off + i as f64 * g)).collect()
}

fn frac(x: f64) -> f64 {
    x - x.floor()
}
