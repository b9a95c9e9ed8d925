use num_complex::Complex64;
use oshima_core::haar::{from_iwasawa, iwasawa};
use oshima_core::lie_structure::{cartan_involution, killing_form, theta_form, trace_form};
use oshima_core::sphere::{act, chi, Chart, Orbit, SpherePoint};
use oshima_core::{AlgebraElement, GroupElement};
use proptest::prelude::*;

fn algebra(n: usize) -> impl Strategy<Value = AlgebraElement> {
    prop::collection::vec(-2.0..2.0f64, n * n).prop_map(move |mut entries| {
        let tr: f64 = (0..n).map(|i| entries[i * n + i]).sum();
        entries[n * n - 1] -= tr;
        let rows: Vec<Vec<f64>> = entries.chunks(n).map(<[f64]>::to_vec).collect();
        AlgebraElement::from_rows(&rows).unwrap()
    })
}

fn pair(n: usize) -> impl Strategy<Value = (AlgebraElement, AlgebraElement)> {
    (algebra(n), algebra(n))
}

fn sl2() -> impl Strategy<Value = GroupElement> {
    (-3.1..3.1f64, -1.5..1.5f64, -1.5..1.5f64).prop_map(|(t, s, u)| from_iwasawa(t, s, u))
}

fn point() -> impl Strategy<Value = SpherePoint> {
    (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(x, y)| SpherePoint::from_z(Complex64::new(x, y)))
}

proptest! {
    #[test]
    fn cartan_involution_is_an_involution(x in algebra(3)) {
        let back = cartan_involution(&cartan_involution(&x));
        prop_assert!((back.as_mat() - x.as_mat()).amax() == 0.0);
    }

    #[test]
    fn killing_form_is_theta_invariant_and_proportional_to_trace((x, y) in pair(3)) {
        let b = killing_form(&x, &y).unwrap();
        let bt = killing_form(&cartan_involution(&x), &cartan_involution(&y)).unwrap();
        let scale = 1.0 + b.abs();
        prop_assert!((b - bt).abs() <= 1e-10 * scale);
        prop_assert!((b - 6.0 * trace_form(&x, &y).unwrap()).abs() <= 1e-10 * scale);
        prop_assert!(theta_form(&x, &x).unwrap() >= -1e-10);
    }

    #[test]
    fn killing_form_is_ad_invariant((x, y) in pair(2), g in sl2()) {
        let b = killing_form(&x, &y).unwrap();
        let moved = killing_form(&g.adjoint(&x), &g.adjoint(&y)).unwrap();
        prop_assert!((b - moved).abs() <= 1e-9 * (1.0 + b.abs()));
    }

    #[test]
    fn iwasawa_coordinates_round_trip(g in sl2()) {
        let [t, s, u] = iwasawa(&g);
        prop_assert!(from_iwasawa(t, s, u).distance(&g) <= 1e-12);
    }

    #[test]
    fn action_is_a_group_action(g in sl2(), h in sl2(), p in point()) {
        let gh = &g * &h;
        prop_assert!(act(&gh, &p).chordal_distance(&act(&g, &act(&h, &p))) <= 1e-12);
        prop_assert!(act(&g.inverse(), &act(&g, &p)).chordal_distance(&p) <= 1e-12);
    }

    #[test]
    fn action_preserves_orbits(g in sl2(), p in point(), x in -3.0..3.0f64) {
        prop_assume!(p.z().unwrap().im.abs() > 1e-9);
        prop_assert_eq!(act(&g, &p).orbit(), p.orbit());
        let boundary = SpherePoint::from_z(Complex64::new(x, 0.0));
        prop_assert_eq!(act(&g, &boundary).orbit(), Orbit::Boundary);
    }

    #[test]
    fn chi_is_a_cocycle(g in sl2(), h in sl2(), p in point()) {
        let hp = act(&h, &p);
        let (Ok(whole), Ok(outer), Ok(inner)) =
            (chi(&(&g * &h), &p, Chart::Z), chi(&g, &hp, Chart::Z), chi(&h, &p, Chart::Z))
        else {
            return Ok(());
        };
        prop_assert!((whole - outer * inner).abs() <= 1e-9 * whole.abs().max(1.0));
    }
}
