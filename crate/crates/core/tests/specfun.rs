use std::f64::consts::PI;

use landau1d::specfun::{
    coulomb, erfcx, g_bound, localization_error, nu, nu_prime, omega, v0, v_cut, vm, w_pair, PotentialKind,
};
use proptest::prelude::*;

mod common;
use common::{v0_oracle, vm_oracle};

#[test]
fn oracle_reproduces_closed_forms() {
    assert!((v0_oracle(0.0) - PI.sqrt()).abs() < 1e-14);
    // V_1(0) = Gamma(3/2) = sqrt(pi)/2
    assert!((vm_oracle(1, 0.0) - PI.sqrt() / 2.0).abs() < 1e-13);
}

#[test]
fn v0_on_a_dense_grid() {
    for i in 0..=2000 {
        let x = -50.0 + 0.05 * i as f64;
        let want = v0_oracle(x);
        assert!(((v0(x) - want) / want).abs() < 1e-12, "x = {x}");
    }
}

#[test]
fn higher_orbitals_match_quadrature() {
    for m in 1..=4 {
        for &x in &[0.0, 0.3, 1.0, 2.5, 7.0, 30.0] {
            let want = vm_oracle(m, x);
            let got = vm(m, 1.0, x).unwrap();
            assert!(((got - want) / want).abs() < 1e-10, "m = {m}, x = {x}: {got} vs {want}");
        }
    }
}

#[test]
fn single_precision_tracks_double() {
    for i in 0..200 {
        let x = -9.0 + 0.095 * i as f64;
        let a = erfcx(x as f32) as f64;
        let b = erfcx(x);
        assert!(((a - b) / b).abs() < 1e-5, "x = {x}");
    }
}

#[test]
fn omega_ordering() {
    let r = omega(&PotentialKind::<f64>::v0()).unwrap();
    let c = omega(&PotentialKind::<f64>::Cutoff).unwrap();
    assert!(r < c);
    assert!((localization_error(0.0_f64) - r).abs() < 1e-15);
}

proptest! {
    #[test]
    fn v0_is_even_and_sandwiched(x in 0.0f64..60.0) {
        prop_assert_eq!(v0(x), v0(-x));
        prop_assert!(v_cut(x) <= v0(x));
        if x > 0.0 {
            prop_assert!(v0(x) < coulomb(x));
        }
    }

    #[test]
    fn envelopes_hold(x in 1e-6f64..50.0) {
        let v = v0(x);
        prop_assert!(g_bound(3.0, x) < v);
        prop_assert!(v < g_bound(4.0, x));
        prop_assert!(g_bound(PI, x) < v);
    }

    #[test]
    fn v0_decreases_away_from_origin(x in 0.0f64..40.0, dx in 1e-3f64..5.0) {
        prop_assert!(v0(x + dx) < v0(x));
    }

    #[test]
    fn orbitals_are_ordered(x in 0.05f64..20.0, m in 0u32..4) {
        let a = vm(m + 1, 1.0, x).unwrap();
        let b = vm(m, 1.0, x).unwrap();
        prop_assert!(a <= b * (1.0 + 1e-12));
        prop_assert!(b <= v0(x) * (1.0 + 1e-12));
    }

    #[test]
    fn field_scaling(x in -10.0f64..10.0, b in 0.1f64..100.0, m in 0u32..3) {
        let lhs = vm(m, b, x).unwrap();
        let rhs = b.sqrt() * vm(m, 1.0, b.sqrt() * x).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-11 * rhs);
    }

    #[test]
    fn pair_term_is_rescaled_v0(b in 0.1f64..1e4, s in -30.0f64..30.0) {
        let got = w_pair(b, s);
        let want = b.sqrt() * v0(b.sqrt() * s.abs() / 2f64.sqrt()) / 2f64.sqrt();
        prop_assert!((got - want).abs() <= 4e-15 * want);
    }

    #[test]
    fn nu_solves_its_ode(x in 0.0f64..30.0) {
        let h = 1e-5;
        let fd = (nu(x + h) - nu(x - h)) / (2.0 * h);
        prop_assert!((fd - nu_prime(x)).abs() < 1e-7);
        let v = v0(x);
        let fd = (v0(x + h) - v0(x - h)) / (2.0 * h);
        if x > h {
            prop_assert!((fd - 2.0 * (x * v - 1.0)).abs() < 1e-7);
        }
    }

    #[test]
    fn nu_is_convex(x in -30.0f64..30.0) {
        let h = 1e-3;
        prop_assert!(nu(x + h) - 2.0 * nu(x) + nu(x - h) >= -1e-9 * h * h);
    }

    #[test]
    fn localization_error_decreases(x in 0.0f64..30.0, dx in 1e-2f64..3.0) {
        prop_assert!(localization_error(x + dx) < localization_error(x));
        prop_assert!(localization_error(x) <= PI.powf(-1.5) + 1e-15);
    }

    #[test]
    fn tails(x in 1.0f64..1e3) {
        prop_assert!((nu(x) - x).abs() < 1.0 / (2.0 * x));
        prop_assert!((v0(x) - 1.0 / x).abs() < 1.0 / (2.0 * x * x * x));
    }
}
