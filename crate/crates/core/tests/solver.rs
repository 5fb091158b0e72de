use landau1d::eigensolve::{
    ground_state, ground_state_with, lowest_eigenpairs, SolverKind, SolverOptions, SymmetricOperator,
};
use landau1d::model::{assemble, GridSpec, ModelParams, PotentialSampling, StencilOrder};

mod common;
use common::dense_lowest;

/// `-d^2/dx^2 + x^2` on a uniform Dirichlet grid.
struct Harmonic {
    n: usize,
    h: f64,
    l: f64,
}

impl SymmetricOperator<f64> for Harmonic {
    fn dimension(&self) -> usize {
        self.n
    }
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let c = 1.0 / (self.h * self.h);
        for i in 0..self.n {
            let xi = -self.l + (i + 1) as f64 * self.h;
            let left = if i > 0 { x[i - 1] } else { 0.0 };
            let right = if i + 1 < self.n { x[i + 1] } else { 0.0 };
            y[i] = (2.0 * c + xi * xi) * x[i] - c * (left + right);
        }
    }
}

#[test]
fn one_electron_matches_dense_oracle() {
    let p = ModelParams::new(1, 1.0, 1.0);
    let g = GridSpec::new(14.0, 400).with_sampling(PotentialSampling::Nodal);
    let op = assemble(&p, &g).unwrap();
    let want = dense_lowest(op.to_dense(), 400, 3);
    let got = ground_state(&op, 3, 1e-10).unwrap();
    for (a, b) in got.energies.iter().zip(&want) {
        assert!((a - b).abs() < 1e-10, "{a} vs {b}");
    }
    for (r, e) in got.residual_norms.iter().zip(&got.energies) {
        assert!(*r <= 1e-10 * (1.0 + e.abs()));
    }
}

#[test]
fn two_electron_matches_dense_oracle() {
    let p = ModelParams::new(2, 1.0, 1.0);
    let g = GridSpec::new(10.0, 48);
    let op = assemble(&p, &g).unwrap();
    let want = dense_lowest(op.to_dense(), 48 * 48, 2);
    for kind in [SolverKind::Lanczos, SolverKind::Lobpcg] {
        let got = ground_state_with(&op, 2, &SolverOptions::default().with_kind(kind)).unwrap();
        for (a, b) in got.energies.iter().zip(&want) {
            assert!((a - b).abs() < 1e-8, "{kind:?}: {a} vs {b}");
        }
    }
}

#[test]
fn free_box_levels() {
    let l = 5.0;
    let g = GridSpec::new(l, 799);
    let op = assemble(&ModelParams::new(1, 0.0, 1.0), &g).unwrap();
    let got = ground_state(&op, 3, 1e-10).unwrap();
    let h = g.spacing();
    for (j, e) in got.energies.iter().enumerate() {
        let exact = ((j + 1) as f64 * std::f64::consts::PI / (2.0 * l)).powi(2);
        // second-order stencil error is exact^2 h^2 / 12
        assert!((e - exact).abs() <= exact * exact * h * h / 12.0 * 1.01 + 1e-12, "{j}: {e} vs {exact}");
    }
}

#[test]
fn fourth_order_box_is_more_accurate() {
    let l = 5.0;
    let exact = (std::f64::consts::PI / (2.0 * l)).powi(2);
    let errs: Vec<f64> = [StencilOrder::Second, StencilOrder::Fourth]
        .iter()
        .map(|&s| {
            let g = GridSpec::new(l, 99).with_stencil(s);
            let op = assemble(&ModelParams::new(1, 0.0, 1.0), &g).unwrap();
            (ground_state(&op, 1, 1e-11).unwrap().energies[0] - exact).abs()
        })
        .collect();
    assert!(errs[1] < errs[0] / 100.0, "{errs:?}");
}

#[test]
fn harmonic_ground_state() {
    let (l, n) = (8.0, 599);
    let h = 2.0 * l / (n + 1) as f64;
    let op = Harmonic { n, h, l };
    let got = lowest_eigenpairs(&op, 2, &SolverOptions::default()).unwrap();
    assert!((got.energies[0] - 1.0).abs() < h * h / 4.0, "{}", got.energies[0]);
    assert!((got.energies[1] - 3.0).abs() < h * h, "{}", got.energies[1]);
}

#[test]
fn vectors_are_orthonormal_and_consistent() {
    let p = ModelParams::new(2, 0.8, 1.0);
    let op = assemble(&p, &GridSpec::new(12.0, 71)).unwrap();
    for kind in [SolverKind::Lanczos, SolverKind::Lobpcg] {
        let res = ground_state_with(&op, 3, &SolverOptions::default().with_kind(kind)).unwrap();
        let vs = res.vectors.as_ref().unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let d: f64 = vs[i].iter().zip(&vs[j]).map(|(a, b)| a * b).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((d - want).abs() < 1e-10, "{kind:?} <{i},{j}> = {d}");
            }
            let av = op.matvec(&vs[i]);
            let rq: f64 = vs[i].iter().zip(&av).map(|(a, b)| a * b).sum();
            assert!((rq - res.energies[i]).abs() <= res.residual_norms[i] + 1e-14);
        }
        assert!(res.energies.windows(2).all(|w| w[0] <= w[1]));
    }
}

#[test]
fn refinement_converges_monotonically_at_fixed_width() {
    // the 3-point stencil underestimates kinetic energy, so levels rise
    // towards the limit as h shrinks
    let p = ModelParams::new(1, 1.0, 1.0);
    let mut g = GridSpec::new(12.0, 47).with_sampling(PotentialSampling::Nodal);
    let mut es = Vec::new();
    for _ in 0..4 {
        es.push(ground_state(&assemble(&p, &g).unwrap(), 1, 1e-11).unwrap().energies[0]);
        g = g.refined();
    }
    for w in es.windows(3) {
        assert!(w[0] < w[1] && w[1] < w[2], "{es:?}");
        let ratio = (w[1] - w[0]) / (w[2] - w[1]);
        assert!(ratio > 3.0 && ratio < 5.0, "{es:?}");
    }
}

#[test]
fn solves_are_bitwise_deterministic() {
    let p = ModelParams::new(2, 1.0, 1.0);
    let op = assemble(&p, &GridSpec::<f64>::new(15.0, 101)).unwrap();
    let a = ground_state(&op, 1, 1e-10).unwrap();
    let b = ground_state(&op, 1, 1e-10).unwrap();
    assert_eq!(a.energies[0].to_bits(), b.energies[0].to_bits());
}

#[test]
fn bad_requests_are_rejected() {
    let op = assemble(&ModelParams::new(1, 1.0, 1.0), &GridSpec::new(10.0, 63)).unwrap();
    assert!(ground_state(&op, 0, 1e-10).is_err());
    assert!(ground_state(&op, 9, 1e-10).is_err());
    assert!(ground_state(&op, 1, 0.0).is_err());
    let capped = SolverOptions { max_matvecs: Some(3), ..SolverOptions::default() };
    assert!(matches!(
        ground_state_with(&op, 1, &capped),
        Err(landau1d::Error::NoConvergence { .. })
    ));
}

#[test]
fn single_precision_ground_state() {
    let g32 = GridSpec::new(12.0_f32, 191);
    let g64 = GridSpec::new(12.0_f64, 191);
    let a = ground_state(&assemble(&ModelParams::new(1, 1.0_f32, 1.0), &g32).unwrap(), 1, 1e-4).unwrap();
    let b = ground_state(&assemble(&ModelParams::new(1, 1.0_f64, 1.0), &g64).unwrap(), 1, 1e-10).unwrap();
    assert!((a.energies[0] as f64 - b.energies[0]).abs() < 1e-4, "{} vs {}", a.energies[0], b.energies[0]);
}
