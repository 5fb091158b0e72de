use landau1d::binding::{binding_report, continuum_threshold, BindingVerdict};
use landau1d::eigensolve::GridPolicy;
use landau1d::liebbound::{
    consistency_record, convexity_chain_scan, ionization_bound, midpoint_convexity_chain, pair_inequality_lhs,
    pair_inequality_scan, DEFAULT_SCAN_SEED,
};
use landau1d::model::ModelParams;
use landau1d::specfun::{localization_error, omega, PotentialKind};

#[test]
fn omega_is_the_supremum_of_the_localization_error() {
    let sup = (0..=20000).map(|i| localization_error(i as f64 * 1e-3)).fold(0.0, f64::max);
    assert!((sup - omega(&PotentialKind::<f64>::v0()).unwrap()).abs() < 1e-15);
    // for V = 1/(|x| + 1), nu = |x| + 1 and |nu'|^2 / 4 nu = 1 / (4 (|x| + 1))
    assert_eq!(omega(&PotentialKind::<f64>::Cutoff).unwrap(), 0.25);
}

#[test]
fn thresholds_follow_the_closed_form() {
    for &(z, b) in &[(0.5, 0.01), (1.0, 1.0), (2.0, 64.0), (3.0, 1e4)] {
        let c = ionization_bound(z, b, PotentialKind::Cutoff).unwrap();
        assert_eq!(c.n_threshold, 2.0 * z + 1.0 + 0.5 * f64::sqrt(b));
        let r = ionization_bound(z, b, PotentialKind::v0()).unwrap();
        let want = 2.0 * z + 1.0 + 2.0 * std::f64::consts::PI.powf(-1.5) * b.sqrt();
        assert!((r.n_threshold - want).abs() < 1e-13 * want);
        assert!(r.n_threshold < c.n_threshold);
        assert!((r.n_max_bound as f64) < r.n_threshold && r.n_threshold <= r.n_max_bound as f64 + 1.0);
    }
}

#[test]
fn pair_inequality_holds_for_both_potentials() {
    for kind in [PotentialKind::<f64>::v0(), PotentialKind::Cutoff, PotentialKind::Regularized { m: 0, b: 9.0 }] {
        let s = pair_inequality_scan(&kind, 20_000, 50.0, DEFAULT_SCAN_SEED).unwrap();
        assert_eq!(s.len(), 20_000);
        assert!(s[0].pass, "{kind}: {:?}", s[0]);
        assert!(s.iter().all(|p| p.lhs > 1.0));
    }
}

#[test]
fn pair_inequality_is_scale_free_for_v0() {
    let one = PotentialKind::<f64>::v0();
    let four = PotentialKind::Regularized { m: 0, b: 4.0 };
    for &(x, y) in &[(0.3, -2.0), (5.0, 1.0), (-7.0, 7.5)] {
        let a = pair_inequality_lhs(&four, x, y).unwrap();
        let b = pair_inequality_lhs(&one, 2.0 * x, 2.0 * y).unwrap();
        assert!((a - b).abs() < 1e-14);
    }
}

#[test]
fn inadmissible_potentials_are_refused() {
    assert!(pair_inequality_scan(&PotentialKind::<f64>::Coulomb, 10, 1.0, 0).is_err());
    assert!(ionization_bound(1.0, 1.0, PotentialKind::<f64>::Regularized { m: 1, b: 1.0 }).is_err());
}

#[test]
fn convexity_chain_holds() {
    let s = convexity_chain_scan::<f64>(20_000, 50.0, DEFAULT_SCAN_SEED);
    assert!(s.iter().all(|p| p.pass && p.lhs >= p.mid * (1.0 - 1e-15) && p.mid > p.rhs));
    let (l, m, r) = midpoint_convexity_chain(-3.0_f64, 3.0);
    assert!((l - m).abs() < 1e-14 && m > r);
}

#[test]
fn unconstrained_points_skip_the_solve() {
    let r = consistency_record(1.0_f64, 1.0, &GridPolicy::default()).unwrap();
    assert!(!r.constrained && r.consistent && r.verdict.is_none());
}

#[test]
fn hydrogen_ion_binds_at_unit_field() {
    let p = ModelParams::new(2, 1.0_f64, 1.0);
    let r = binding_report(&p, &GridPolicy::default()).unwrap();
    assert_eq!(r.bound_state, BindingVerdict::Bound);
    assert!(r.margin > 0.1 && r.margin_error() < 1e-2, "{r:?}");
    assert!((r.e_n_minus_1.extrapolated_energy + 0.7676).abs() < 1e-3);
    assert_eq!(continuum_threshold(&p.with_electrons(1), &GridPolicy::default()).unwrap().extrapolated_energy, 0.0);
    assert!(binding_report(&p.with_electrons(1), &GridPolicy::default()).is_err());
}
