//! Expected values worked out by hand from the Clifford relations.

use cliffspec::calculus::{bounded_calc, hinf_calc, omega_calc, unbounded_calc, QuadOptions, Side};
use cliffspec::clifford::BladeIndex;
use cliffspec::slice::{regularizer, Rational, SliceFunction};
use cliffspec::spectral::{s_resolvent_left, s_resolvent_right, spectrum_exact, SpectralSet};
use cliffspec::{CliffordMatrix, CliffordNum, Paravector};

fn e(d: usize, gens: &[usize]) -> CliffordNum {
    CliffordNum::blade(d, BladeIndex::from_generators(gens), 1.0)
}

fn c(d: usize, x: f64) -> CliffordNum {
    CliffordNum::scalar(d, x)
}

#[test]
fn non_paravector_entry_has_a_sphere_spectrum() {
    // (e1 + e12)^2 = -1 - e2 + e2 - 1 = -2
    let a = &e(2, &[1]) + &e(2, &[1, 2]);
    let t = CliffordMatrix::diag(&[a]).unwrap();
    let spec = spectrum_exact(&t).unwrap();
    assert_eq!(spec.spheres.len(), 1);
    let s = &spec.spheres[0];
    assert!(s.x.abs() < 1e-12 && (s.r - 2f64.sqrt()).abs() < 1e-12);
    assert_eq!(s.multiplicity, 2);
}

#[test]
fn triangular_operator() {
    let d = 1;
    let t = CliffordMatrix::from_entries(2, d, &[c(d, 1.0), e(d, &[1]), c(d, 0.0), c(d, 2.0)]).unwrap();
    let spec = spectrum_exact(&t).unwrap();
    let pts: Vec<(f64, f64, usize)> = spec.spheres.iter().map(|s| (s.x, s.r, s.multiplicity)).collect();
    assert_eq!(pts.len(), 2);
    assert!((pts[0].0 - 1.0).abs() < 1e-12 && pts[0].1 == 0.0 && pts[0].2 == 1);
    assert!((pts[1].0 - 2.0).abs() < 1e-12 && pts[1].1 == 0.0 && pts[1].2 == 1);
    // T^2 = [[1, 3 e1], [0, 4]]
    let sq = CliffordMatrix::from_entries(2, d, &[c(d, 1.0), e(d, &[1]).scale(3.0), c(d, 0.0), c(d, 4.0)]).unwrap();
    let f = SliceFunction::intrinsic(d, Rational::power(2));
    for side in [Side::Left, Side::Right] {
        let r = bounded_calc(&f, &t, side, &QuadOptions::default()).unwrap();
        assert!(r.operator.distance(&sq) < 1e-10);
    }
}

#[test]
fn regularizer_of_real_diagonal() {
    let d = 2;
    let t = CliffordMatrix::diag(&[c(d, 1.0), c(d, -2.0)]).unwrap();
    let r = omega_calc(&regularizer(d, 1).unwrap(), &t, Side::Right, &QuadOptions::default()).unwrap();
    let expect = CliffordMatrix::diag(&[c(d, 0.5), c(d, -0.4)]).unwrap();
    assert!(r.operator.distance(&expect) < 1e-7);
}

#[test]
fn unbounded_calculus_at_a_real_multiple_of_identity() {
    let d = 1;
    let t = CliffordMatrix::scalar_identity(1, d, 3.0);
    let f = SliceFunction::intrinsic(d, Rational::new(vec![1.0], vec![1.0, 0.0, 1.0]).unwrap());
    let k = SpectralSet::from_points(&[(0.0, 1.0, 2)], 1e-12);
    let r = unbounded_calc(&f, &t, &k, Side::Left, &QuadOptions::default()).unwrap();
    assert!(r.operator.distance(&CliffordMatrix::scalar_identity(1, d, 0.1)) < 1e-10);
}

#[test]
fn resolvents_collapse_at_real_points() {
    let d = 2;
    let t = CliffordMatrix::diag(&[e(d, &[1])]).unwrap();
    let s = Paravector::real(d, 3.0);
    // (3 - e1)^{-1} = (3 + e1) / 10
    let expect = CliffordMatrix::diag(&[(&c(d, 3.0) + &e(d, &[1])).scale(0.1)]).unwrap();
    assert!(s_resolvent_left(&t, &s).unwrap().distance(&expect) < 1e-14);
    assert!(s_resolvent_right(&t, &s).unwrap().distance(&expect) < 1e-14);
}

#[test]
fn one_sided_constants_land_on_their_side() {
    let d = 2;
    let t = CliffordMatrix::diag(&[e(d, &[1])]).unwrap();
    // left: v -> T(e2 v) has entry e1 e2 = e12; right: e2 T has entry e2 e1 = -e12
    let left = SliceFunction::left(Rational::power(1), e(d, &[2]));
    let r = bounded_calc(&left, &t, Side::Left, &QuadOptions::default()).unwrap();
    assert!(r.operator.entry(0, 0).distance(&e(d, &[1, 2])) < 1e-10);
    let right = SliceFunction::right(e(d, &[2]), Rational::power(1));
    let r = bounded_calc(&right, &t, Side::Right, &QuadOptions::default()).unwrap();
    assert!(r.operator.entry(0, 0).distance(&e(d, &[1, 2]).scale(-1.0)) < 1e-10);
}

#[test]
fn hinf_reproduces_the_operator() {
    let d = 1;
    let t = CliffordMatrix::diag(&[c(d, 2.0), &c(d, -0.5) + &e(d, &[1]).scale(0.5)]).unwrap();
    let f = SliceFunction::intrinsic(d, Rational::power(1));
    let r = hinf_calc(&f, &t, Side::Left, &QuadOptions::default()).unwrap();
    assert!(r.operator.distance(&t) < 1e-7);
}

#[test]
fn adjoint_conjugates_and_transposes() {
    let d = 2;
    let t = CliffordMatrix::from_entries(2, d, &[e(d, &[1]), c(d, 1.0), c(d, 0.0), e(d, &[2])]).unwrap();
    let expect =
        CliffordMatrix::from_entries(2, d, &[e(d, &[1]).scale(-1.0), c(d, 0.0), c(d, 1.0), e(d, &[2]).scale(-1.0)])
            .unwrap();
    assert_eq!(t.adjoint(), expect);
}
