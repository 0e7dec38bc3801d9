use proptest::prelude::*;

use revival_core::commensurability::{
    classical_beat, enumerate_fractimes, rationalize, revival_triple, ReducedFraction,
};
use revival_core::models::TimeScales;
use revival_core::revival::oracle::{
    brute_force_periods, check_point, is_cyclic, nonzero_norms, one_dimensional_coefficients,
    product_law_deviation,
};
use revival_core::revival::{classify, minimal_periods, verify_expansion, RevivalPoint, ThetaSpec};

fn rf(n: i64, d: i64) -> ReducedFraction {
    ReducedFraction::new(n, d).unwrap()
}

/// Reduced fractions in (0, 1] with denominator at most `qmax`.
fn unit_fractions(qmax: i64) -> Vec<ReducedFraction> {
    let mut out = Vec::new();
    for q in 1..=qmax {
        for p in 1..=q {
            let f = rf(p, q);
            if f.den() == q {
                out.push(f);
            }
        }
    }
    out
}

fn fraction() -> impl Strategy<Value = ReducedFraction> {
    (-30i64..=30, 1i64..=12).prop_map(|(p, q)| rf(p, q))
}

proptest! {
    #[test]
    fn rationalize_is_idempotent_on_exact_rationals(p in -200i64..200, q in 1i64..=64) {
        let f = rf(p, q);
        prop_assert_eq!(rationalize(f.to_f64(), 64, 1e-9), Some(f));
    }

    #[test]
    fn equal_periods_beat_trivially(t in 1e-6f64..1e6) {
        let beat = classical_beat(t, t, 64, 1e-9).unwrap();
        prop_assert_eq!((beat.a, beat.b), (1, 1));
        prop_assert!((beat.period - t).abs() <= 1e-15 * t);
    }

    #[test]
    fn minimal_periods_match_brute_force(a in fraction(), b in fraction(), c in proptest::option::of(fraction())) {
        let spec = ThetaSpec::new(a, b, c);
        let cross = spec.cross_ratios();
        let (l1, l2) = minimal_periods(&spec, cross.as_ref());
        prop_assert_eq!((l1, l2), brute_force_periods(&spec));
        prop_assert!(is_cyclic(&spec, l1, l2, l1.max(l2) + 1));
        if let Some(r) = cross {
            if let Some(r1) = r.r1s1 { prop_assert!(l1 <= a.den() * r1.den()); }
            if let Some(r2) = r.r2s2 { prop_assert!(l2 <= b.den() * r2.den()); }
        } else {
            prop_assert!(l1 <= a.den() && l2 <= b.den());
        }
    }

    #[test]
    fn expansion_is_unitary_and_exact(a in fraction(), b in fraction(), c in proptest::option::of(fraction())) {
        let point = RevivalPoint::from_theta(ThetaSpec::new(a, b, c));
        prop_assert!((point.coeffs.total_weight() - 1.0).abs() <= 1e-12);
        prop_assert!(verify_expansion(&point) <= 1e-12);
    }

    #[test]
    fn enumerated_points_satisfy_their_identity(
        r2 in 1i64..8, d2 in 1i64..8, r12 in proptest::option::of((-6i64..=6, 1i64..6)),
        qmax in 1i64..=12,
    ) {
        prop_assume!(r12.is_none_or(|(n, _)| n != 0));
        let trev1 = 0.37;
        let f2 = rf(r2, d2);
        let f12 = r12.map(|(n, d)| rf(n, d));
        let ts = TimeScales {
            tcl1: Some(0.01),
            tcl2: Some(0.02),
            trev1: Some(trev1),
            trev2: Some(f2.to_f64() * trev1),
            trev12: f12.map(|f| f.to_f64() * trev1),
        };
        let triple = revival_triple(&ts, 64, 1e-9).unwrap();
        let points = enumerate_fractimes(&triple, &ts, qmax, 5.0);
        for p in &points {
            // t/trev1 · trev1 = t/trev2 · trev2, checked via trev2 = f2 trev1
            prop_assert_eq!(p.p1q1, p.p2q2 * f2);
            if let Some(f) = f12 {
                prop_assert_eq!(p.p1q1, p.p12q12.unwrap() * f);
            }
            prop_assert!(p.p1q1.den() <= qmax && p.p2q2.den() <= qmax);
            prop_assert!((p.t - p.p1q1.to_f64() * trev1).abs() <= 1e-12);
        }
        // the full revival appears whenever it falls inside the window
        let full = points.iter().find(|p| p.is_full_revival());
        let lcm_t = {
            let mut m = 1i64;
            while !(rf(m, 1) / f2).is_integer() || f12.is_some_and(|f| !(rf(m, 1) / f).is_integer()) {
                m += 1;
            }
            m as f64 * trev1
        };
        if lcm_t <= 5.0 {
            prop_assert!(full.is_some());
            prop_assert!((full.unwrap().t - lcm_t).abs() <= 1e-12);
        }
    }
}

#[test]
fn separable_laws_for_all_pairs_up_to_twelve() {
    let fracs = unit_fractions(12);
    for &a in &fracs {
        let (l1, _) = minimal_periods(&ThetaSpec::new(a, ReducedFraction::ZERO, None), None);
        let a1 = one_dimensional_coefficients(a, l1);
        let n1 = nonzero_norms(&a1).len();
        for &b in &fracs {
            let point = RevivalPoint::from_theta(ThetaSpec::new(a, b, None));
            let dev = product_law_deviation(&point).unwrap();
            assert!(dev <= 1e-12, "{a} {b}: product deviation {dev}");
            let (_, l2) = minimal_periods(&ThetaSpec::new(ReducedFraction::ZERO, b, None), None);
            let n2 = nonzero_norms(&one_dimensional_coefficients(b, l2)).len();
            let class = classify(&point);
            assert_eq!(class.n_waves, n1 * n2, "{a} {b}");
            assert!(class.separable && class.equal_norm, "{a} {b}");
            assert_eq!(class.component_waves, Some((n1, n2)));
        }
    }
}

#[test]
fn one_dimensional_counts_follow_denominator_class() {
    // odd q: all q coefficients; even q: half of them
    for f in unit_fractions(12) {
        let (l, _) = minimal_periods(&ThetaSpec::new(f, ReducedFraction::ZERO, None), None);
        let coeffs = one_dimensional_coefficients(f, l);
        let norms = nonzero_norms(&coeffs);
        let q = f.den();
        let expected = if q % 2 == 1 { q } else { q / 2 } as usize;
        assert_eq!(norms.len(), expected, "{f}");
        let first = norms[0];
        assert!(norms.iter().all(|n| (n - first).abs() <= 1e-12), "{f}");
    }
}

/// Cross-term specs with all denominators at most 12.
pub fn cross_catalog() -> Vec<ThetaSpec> {
    let pool = [
        rf(1, 2),
        rf(1, 3),
        rf(2, 3),
        rf(1, 4),
        rf(3, 4),
        rf(1, 6),
        rf(5, 12),
        rf(7, 8),
        ReducedFraction::ZERO,
        ReducedFraction::ONE,
    ];
    let cross = [rf(1, 2), rf(1, 3), rf(1, 4), rf(-1, 6), rf(5, 12), rf(3, 2)];
    let mut out = Vec::new();
    for &a in &pool {
        for &b in &pool {
            for &c in &cross {
                out.push(ThetaSpec::new(a, b, Some(c)));
            }
        }
    }
    out
}

#[test]
fn cross_catalog_passes_every_check() {
    let catalog = cross_catalog();
    assert!(catalog.len() >= 20);
    for spec in catalog {
        let point = RevivalPoint::from_theta(spec);
        let check = check_point(&point);
        assert!(check.passes(), "{spec:?}: {check:?}");
    }
}

#[test]
fn cross_term_breaks_factorization_but_not_norms() {
    // θ = κ1²/2 + κ2²/2 + κ1κ2/3: the coefficients no longer factorize
    let spec = ThetaSpec::new(rf(1, 2), rf(1, 2), Some(rf(1, 3)));
    let point = RevivalPoint::from_theta(spec);
    let class = classify(&point);
    assert!(!class.separable);
    assert_eq!((point.l1, point.l2), (6, 6));
    assert_eq!(class.n_waves, 9);

    // The transform of a quadratic phase has constant modulus on its
    // support, so nonvanishing norms stay equal even with a cross term.
    for spec in cross_catalog() {
        let class = classify(&RevivalPoint::from_theta(spec));
        assert!(class.equal_norm, "{spec:?}");
    }
}
