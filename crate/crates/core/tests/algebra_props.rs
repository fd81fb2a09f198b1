use cliffspec::module::realify_right_mult;
use cliffspec::mult::{pencil_modulus, sector_eps};
use cliffspec::{CliffordMatrix, CliffordNum, ModuleVector, Paravector};
use proptest::prelude::*;

fn clifford(d: usize) -> impl Strategy<Value = CliffordNum> {
    prop::collection::vec(-2.0f64..2.0, 1 << d).prop_map(move |c| CliffordNum::from_coeffs(d, c).unwrap())
}

fn paravector(d: usize) -> impl Strategy<Value = Paravector> {
    (-2.0f64..2.0, prop::collection::vec(-2.0f64..2.0, d)).prop_map(|(s0, v)| Paravector::new(s0, v))
}

fn matrix(n: usize, d: usize) -> impl Strategy<Value = CliffordMatrix> {
    prop::collection::vec(clifford(d), n * n).prop_map(move |e| CliffordMatrix::from_entries(n, d, &e).unwrap())
}

fn triple() -> impl Strategy<Value = (CliffordNum, CliffordNum, CliffordNum)> {
    (0usize..=5).prop_flat_map(|d| (clifford(d), clifford(d), clifford(d)))
}

proptest! {
    #[test]
    fn product_is_associative((a, b, c) in triple()) {
        let lhs = &(&a * &b) * &c;
        let rhs = &a * &(&b * &c);
        prop_assert!(lhs.distance(&rhs) <= 1e-12 * (1.0 + a.abs() * b.abs() * c.abs()) * 32.0);
    }

    #[test]
    fn conjugation_reverses_products((a, b, _) in triple()) {
        let lhs = (&a * &b).conjugate();
        let rhs = &b.conjugate() * &a.conjugate();
        prop_assert!(lhs.distance(&rhs) <= 1e-12 * (1.0 + a.abs() * b.abs()) * 32.0);
        prop_assert_eq!(a.conjugate().conjugate(), a);
    }

    #[test]
    fn norm_bounds((a, b, _) in triple()) {
        let d = a.d() as f64;
        prop_assert!((&a * &b).abs() <= 2f64.powf(d / 2.0) * a.abs() * b.abs() * (1.0 + 1e-12) + 1e-300);
    }

    #[test]
    fn paravectors_are_multiplicative(p in paravector(3), a in clifford(3)) {
        let pa = &p.to_clifford() * &a;
        prop_assert!((pa.abs() - p.abs() * a.abs()).abs() <= 1e-12 * (1.0 + p.abs() * a.abs()));
        let inv = p.inverse();
        if p.abs() > 1e-6 {
            let one = &p.to_clifford() * &inv.unwrap().to_clifford();
            prop_assert!(one.distance(&CliffordNum::one(3)) <= 1e-10);
        }
    }

    #[test]
    fn realify_is_a_homomorphism(a in matrix(2, 2), b in matrix(2, 2)) {
        let lhs = a.mul(&b).realify_left().matrix;
        let rhs = a.realify_left().matrix * b.realify_left().matrix;
        prop_assert!((lhs - rhs).abs().max() <= 1e-12);
        let adj = a.adjoint().realify_left().matrix;
        prop_assert_eq!(adj, a.realify_left().matrix.transpose());
    }

    #[test]
    fn left_actions_commute_with_right_multiplication(a in matrix(2, 3), s in clifford(3)) {
        let l = a.realify_left().matrix;
        let r = realify_right_mult(&s, 2).matrix;
        prop_assert!((&l * &r - &r * &l).abs().max() <= 1e-12);
    }

    #[test]
    fn right_multiplication_scales_norms(v in prop::collection::vec(-2.0f64..2.0, 24), s in paravector(3)) {
        let v = ModuleVector::from_coords(3, 3, v).unwrap();
        let vs = v.mul_right(&s.to_clifford()).unwrap();
        prop_assert!((vs.norm() - s.abs() * v.norm()).abs() <= 1e-12 * (1.0 + s.abs() * v.norm()));
    }

    #[test]
    fn sector_eps_solves_its_quadratic(s in paravector(2), eps in 1e-3f64..5.0) {
        let e = sector_eps(&s, eps).unwrap();
        let y = s.imag_abs();
        prop_assert!((e * (e + 2.0 * y) - eps * eps).abs() <= 1e-12 * eps * eps);
        prop_assert!(e <= eps * (1.0 + 1e-15));
    }
}

#[test]
fn radial_step_past_sector_eps_leaves_the_set() {
    // just outside [s] + U_{ε_s} along the slice the pencil modulus exceeds ε^2,
    // so the inner inclusion is sharp
    let s = Paravector::new(0.5, vec![0.0, 1.5]);
    let eps = 0.4;
    let e = sector_eps(&s, eps).unwrap();
    let unit = s.imag_unit().unwrap();
    let inside = Paravector::on_slice(0.5, 1.5 + 0.999 * e, &unit);
    let outside = Paravector::on_slice(0.5, 1.5 + 1.001 * e, &unit);
    assert!(pencil_modulus(&s, &inside) < eps * eps);
    assert!(pencil_modulus(&s, &outside) > eps * eps);
}
