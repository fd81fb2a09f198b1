//! S-spectrum and S-resolvents of Clifford matrices.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use crate::clifford::{CliffordNum, ImaginaryUnit, Paravector, SpectralSphere};
use crate::error::{Error, Result};
use crate::module::{realify_right_mult, CliffordMatrix, Provenance, RealifiedMatrix};

/// Relative merge tolerance for eigenvalue clusters.
pub const MERGE_REL_TOL: f64 = 1e-8;

/// Relative threshold on the smallest singular value of the pencil.
pub const MEMBERSHIP_REL_TOL: f64 = 1e-10;

/// `Q_s[T] = T^2 - 2 s0 T + |s|^2` with its smallest singular value.
#[derive(Clone, Debug)]
pub struct PencilEvaluation {
    pub s: Paravector,
    pub q: CliffordMatrix,
    pub sigma_min: f64,
    pub sigma_max: f64,
}

fn check_param(t: &CliffordMatrix, s: &Paravector) -> Result<()> {
    if s.d() != t.d() {
        return Err(Error::DimensionMismatch { left: t.d(), right: s.d() });
    }
    Ok(())
}

fn pencil_matrix(t: &CliffordMatrix, t2: &CliffordMatrix, s: &Paravector) -> CliffordMatrix {
    let mut q = t2.clone();
    q.axpy(-2.0 * s.s0, t);
    q.axpy(1.0, &CliffordMatrix::scalar_identity(t.n(), t.d(), s.norm_sqr()));
    q
}

pub fn q_pencil(t: &CliffordMatrix, s: &Paravector) -> Result<PencilEvaluation> {
    check_param(t, s)?;
    let q = pencil_matrix(t, &t.mul(t), s);
    let sv = q.realify_left().matrix.singular_values();
    Ok(PencilEvaluation { s: s.clone(), sigma_min: sv.min(), sigma_max: sv.max(), q })
}

/// `true` iff the smallest singular value of the realified pencil exceeds `tol`.
pub fn in_resolvent_svd(t: &CliffordMatrix, s: &Paravector, tol: f64) -> Result<bool> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("membership tolerance must be positive".into()));
    }
    Ok(q_pencil(t, s)?.sigma_min > tol)
}

/// Membership with the scale-invariant default `1e-10 ‖Q‖`.
pub fn in_resolvent(t: &CliffordMatrix, s: &Paravector) -> Result<bool> {
    let p = q_pencil(t, s)?;
    Ok(p.sigma_min > MEMBERSHIP_REL_TOL * p.sigma_max.max(f64::MIN_POSITIVE))
}

/// `realify(T) - realify(v ↦ v s)`.
pub fn first_order_realified(t: &CliffordMatrix, s: &Paravector) -> Result<RealifiedMatrix> {
    check_param(t, s)?;
    let left = t.realify_left();
    let right = realify_right_mult(&s.to_clifford(), t.n());
    Ok(RealifiedMatrix {
        n: t.n(),
        d: t.d(),
        matrix: left.matrix - right.matrix,
        provenance: Provenance::Derived,
    })
}

/// Outcome of comparing `Q_s[T]^{-1}` with `(T - I^R s̄)^{-1}(T - I^R s)^{-1}`.
#[derive(Clone, Copy, Debug)]
pub struct FactorizationCheck {
    /// Spectral norm of the difference.
    pub residual: f64,
    /// `‖Q^{-1}‖`.
    pub inverse_norm: f64,
    /// Condition number of the realified pencil.
    pub condition: f64,
}

fn invert(m: DMatrix<f64>, what: &'static str) -> Result<DMatrix<f64>> {
    m.try_inverse().ok_or(Error::NotInvertible(what))
}

pub fn resolvent_factorization_check(t: &CliffordMatrix, s: &Paravector) -> Result<FactorizationCheck> {
    let p = q_pencil(t, s)?;
    if !(p.sigma_min > MEMBERSHIP_REL_TOL * p.sigma_max) {
        return Err(Error::InSpectrum { s0: s.s0, y: s.imag_abs() });
    }
    let q_inv = invert(p.q.realify_left().matrix, "Q_s[T]")?;
    let a = invert(first_order_realified(t, &s.conjugate())?.matrix, "T - I^R s̄")?;
    let b = invert(first_order_realified(t, s)?.matrix, "T - I^R s")?;
    let diff = &q_inv - a * b;
    Ok(FactorizationCheck {
        residual: diff.singular_values().max(),
        inverse_norm: 1.0 / p.sigma_min,
        condition: p.sigma_max / p.sigma_min,
    })
}

/// A finite union of spheres `[s]`, sorted by `(x, r)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralSet {
    pub spheres: Vec<SpectralSphere>,
    pub tol: f64,
}

impl SpectralSet {
    /// Clusters weighted `(x, r)` points by single linkage within `tol`.
    ///
    /// Each weight counts eigenvalues of the realified matrix; a sphere's
    /// multiplicity is half its count, rounded up.
    pub fn from_points(points: &[(f64, f64, usize)], tol: f64) -> SpectralSet {
        let m = points.len();
        let mut parent: Vec<usize> = (0..m).collect();
        fn find(p: &mut [usize], mut i: usize) -> usize {
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        let snapped: Vec<(f64, f64)> = points
            .iter()
            .map(|&(x, r, _)| (x, if r.abs() <= tol { 0.0 } else { r.abs() }))
            .collect();
        for i in 0..m {
            for j in i + 1..m {
                let (a, b) = (snapped[i], snapped[j]);
                if ((a.0 - b.0) * (a.0 - b.0) + (a.1 - b.1) * (a.1 - b.1)).sqrt() <= tol {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    if ri != rj {
                        parent[ri.max(rj)] = ri.min(rj);
                    }
                }
            }
        }
        let mut spheres = Vec::new();
        let mut done = vec![false; m];
        for i in 0..m {
            let root = find(&mut parent, i);
            if done[root] {
                continue;
            }
            done[root] = true;
            let (mut sx, mut sr, mut w) = (0.0, 0.0, 0usize);
            for j in 0..m {
                if find(&mut parent, j) == root {
                    sx += snapped[j].0 * points[j].2 as f64;
                    sr += snapped[j].1 * points[j].2 as f64;
                    w += points[j].2;
                }
            }
            let mut x = sx / w as f64;
            let mut r = sr / w as f64;
            if x.abs() <= tol {
                x = 0.0;
            }
            if r <= tol {
                r = 0.0;
            }
            spheres.push(SpectralSphere::new(x, r, w.div_ceil(2)));
        }
        spheres.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.r.total_cmp(&b.r)));
        SpectralSet { spheres, tol }
    }

    pub fn total_multiplicity(&self) -> usize {
        self.spheres.iter().map(|s| s.multiplicity).sum()
    }

    /// Distance from the point `(x, r)` to the nearest sphere.
    pub fn distance_to(&self, x: f64, r: f64) -> f64 {
        self.spheres.iter().map(|s| s.distance_to(x, r.abs())).fold(f64::INFINITY, f64::min)
    }

    /// Hausdorff distance between the two sphere sets in the `(x, r)` plane.
    pub fn hausdorff(&self, other: &SpectralSet) -> f64 {
        let one_way = |a: &SpectralSet, b: &SpectralSet| {
            a.spheres.iter().map(|s| b.distance_to(s.x, s.r)).fold(0.0, f64::max)
        };
        match (self.spheres.is_empty(), other.spheres.is_empty()) {
            (true, true) => 0.0,
            (false, false) => one_way(self, other).max(one_way(other, self)),
            _ => f64::INFINITY,
        }
    }

    pub fn max_modulus(&self) -> f64 {
        self.spheres.iter().map(|s| s.x.hypot(s.r)).fold(0.0, f64::max)
    }
}

/// Complex eigenvalues of a real square matrix as `(re, im)` pairs.
pub fn real_matrix_eigenvalues(m: &DMatrix<f64>) -> Result<Vec<(f64, f64)>> {
    crate::eigen::eigenvalues(m)
}

/// Default merge tolerance `1e-8 max(1, ‖T‖)`.
pub fn default_merge_tol(t: &CliffordMatrix) -> f64 {
    MERGE_REL_TOL * t.operator_norm().max(1.0)
}

/// Exact S-spectrum from the complex eigenvalues of `realify(T)`.
///
/// `realify(T)` commutes with right multiplication by `e_1`, a complex
/// structure on the real coordinate space, so `x + J y` lies in the
/// S-spectrum iff `x + i y` is an eigenvalue.
pub fn spectrum_exact(t: &CliffordMatrix) -> Result<SpectralSet> {
    spectrum_exact_with_tol(t, default_merge_tol(t))
}

pub fn spectrum_exact_with_tol(t: &CliffordMatrix, tol: f64) -> Result<SpectralSet> {
    let eig = real_matrix_eigenvalues(&t.realify_left().matrix)?;
    let points: Vec<(f64, f64, usize)> = eig.into_iter().map(|(x, y)| (x, y.abs(), 1)).collect();
    Ok(SpectralSet::from_points(&points, tol))
}

/// Precomputed data for repeated S-resolvent evaluation of one operator.
#[derive(Clone, Debug)]
pub struct ResolventKernel {
    t: CliffordMatrix,
    t_real: DMatrix<f64>,
    t2_real: DMatrix<f64>,
}

impl ResolventKernel {
    pub fn new(t: &CliffordMatrix) -> Self {
        let t_real = t.realify_left().matrix;
        let t2_real = &t_real * &t_real;
        ResolventKernel { t: t.clone(), t_real, t2_real }
    }

    pub fn operator(&self) -> &CliffordMatrix {
        &self.t
    }

    /// `Q_s[T]^{-1}` as a Clifford matrix, from `n` realified solves.
    pub fn q_inverse(&self, s: &Paravector) -> Result<CliffordMatrix> {
        check_param(&self.t, s)?;
        let (n, d) = (self.t.n(), self.t.d());
        let size = n << d;
        let mut q = &self.t2_real - &self.t_real * (2.0 * s.s0);
        let m2 = s.norm_sqr();
        for i in 0..size {
            q[(i, i)] += m2;
        }
        let mut rhs = DMatrix::<f64>::zeros(size, n);
        for j in 0..n {
            rhs[(j << d, j)] = 1.0;
        }
        let sol = q
            .lu()
            .solve(&rhs)
            .filter(|x| x.iter().all(|v| v.is_finite()))
            .ok_or(Error::InSpectrum { s0: s.s0, y: s.imag_abs() })?;
        Ok(CliffordMatrix::from_basis_images(n, d, &sol))
    }

    /// `S_L^{-1}(s, T) = Q^{-1} s̄ - T Q^{-1}`.
    pub fn left(&self, s: &Paravector) -> Result<CliffordMatrix> {
        let qi = self.q_inverse(s)?;
        Ok(qi.mul_scalar_right(&s.conjugate().to_clifford()).sub(&self.t.mul(&qi)))
    }

    /// `S_R^{-1}(s, T) = (s̄ - T) Q^{-1}`.
    pub fn right(&self, s: &Paravector) -> Result<CliffordMatrix> {
        let qi = self.q_inverse(s)?;
        Ok(qi.mul_scalar_left(&s.conjugate().to_clifford()).sub(&self.t.mul(&qi)))
    }
}

pub fn s_resolvent_left(t: &CliffordMatrix, s: &Paravector) -> Result<CliffordMatrix> {
    ResolventKernel::new(t).left(s)
}

pub fn s_resolvent_right(t: &CliffordMatrix, s: &Paravector) -> Result<CliffordMatrix> {
    ResolventKernel::new(t).right(s)
}

/// Uniformly distributed imaginary unit in `R^d`.
pub fn random_unit<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ImaginaryUnit {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
        let n2: f64 = v.iter().map(|x| x * x).sum();
        if n2 > 1e-4 && n2 <= 1.0 {
            return ImaginaryUnit::normalized(v).expect("nonzero vector");
        }
    }
}

/// Outcome of comparing `T` and `T*` spectrally.
#[derive(Clone, Debug)]
pub struct AdjointSpectrumReport {
    pub hausdorff: f64,
    pub multiplicities_match: bool,
    /// Worst `‖S_L^{-1}(s,T*) - S_R^{-1}(s̄,T)*‖ / max(1, ‖S_L^{-1}(s,T*)‖)`.
    pub left_identity: f64,
    /// Worst `‖S_R^{-1}(s,T*) - S_L^{-1}(s̄,T)*‖ / max(1, ‖S_R^{-1}(s,T*)‖)`.
    pub right_identity: f64,
    pub points: usize,
}

/// Draws a paravector whose sphere keeps relative distance `margin` from the spectrum.
pub fn random_resolvent_point<R: Rng + ?Sized>(
    spec: &SpectralSet,
    d: usize,
    scale: f64,
    margin: f64,
    rng: &mut R,
) -> Paravector {
    loop {
        let x = rng.random_range(-1.5..1.5) * scale;
        let y = rng.random_range(0.0..1.5) * scale;
        if spec.distance_to(x, y) > margin * scale {
            let unit = random_unit(d, rng);
            return Paravector::on_slice(x, y, &unit);
        }
    }
}

pub fn adjoint_spectrum_check<R: Rng + ?Sized>(
    t: &CliffordMatrix,
    points: usize,
    rng: &mut R,
) -> Result<AdjointSpectrumReport> {
    let ta = t.adjoint();
    let spec = spectrum_exact(t)?;
    let spec_adj = spectrum_exact(&ta)?;
    let hausdorff = spec.hausdorff(&spec_adj);
    let multiplicities_match = spec.spheres.len() == spec_adj.spheres.len()
        && spec.spheres.iter().zip(&spec_adj.spheres).all(|(a, b)| a.multiplicity == b.multiplicity);

    let scale = t.operator_norm().max(1.0);
    let k = ResolventKernel::new(t);
    let ka = ResolventKernel::new(&ta);
    let (mut left_identity, mut right_identity) = (0.0f64, 0.0f64);
    for _ in 0..points {
        let s = random_resolvent_point(&spec, t.d(), scale, 0.05, rng);
        let sb = s.conjugate();
        let a = ka.left(&s)?;
        let b = k.right(&sb)?.adjoint();
        left_identity = left_identity.max(a.distance(&b) / a.operator_norm().max(1.0));
        let a = ka.right(&s)?;
        let b = k.left(&sb)?.adjoint();
        right_identity = right_identity.max(a.distance(&b) / a.operator_norm().max(1.0));
    }
    Ok(AdjointSpectrumReport { hausdorff, multiplicities_match, left_identity, right_identity, points })
}

/// Smallest singular value of `Q_{x + e_1 y}[T]` on a grid of the slice plane.
pub fn slice_scan(
    t: &CliffordMatrix,
    x_range: (f64, f64),
    y_range: (f64, f64),
    steps: usize,
) -> Result<Vec<(f64, f64, f64)>> {
    if t.d() == 0 {
        return Err(Error::InvalidArgument("slice scan needs d >= 1".into()));
    }
    if steps < 2 {
        return Err(Error::InvalidArgument("scan needs at least 2 steps per axis".into()));
    }
    let unit = ImaginaryUnit::generator(t.d(), 1);
    let t2 = t.mul(t);
    let mut out = Vec::with_capacity(steps * steps);
    for iy in 0..steps {
        let y = y_range.0 + (y_range.1 - y_range.0) * iy as f64 / (steps - 1) as f64;
        for ix in 0..steps {
            let x = x_range.0 + (x_range.1 - x_range.0) * ix as f64 / (steps - 1) as f64;
            let s = Paravector::on_slice(x, y, &unit);
            let q = pencil_matrix(t, &t2, &s);
            out.push((x, y, q.realify_left().matrix.singular_values().min()));
        }
    }
    Ok(out)
}

/// Classical resolvent check helper: `(x - T)^{-1}` for real `x`.
pub fn classical_resolvent(t: &CliffordMatrix, x: f64) -> Result<CliffordMatrix> {
    let m = CliffordMatrix::scalar_identity(t.n(), t.d(), x).sub(t);
    let inv = invert(m.realify_left().matrix, "x - T")?;
    Ok(RealifiedMatrix { n: t.n(), d: t.d(), matrix: inv, provenance: Provenance::Derived }
        .to_clifford())
}

/// `c · Id` embedded as a Clifford matrix.
pub fn clifford_identity(n: usize, c: &CliffordNum) -> CliffordMatrix {
    CliffordMatrix::identity(n, c.d()).mul_scalar_right(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::BladeIndex;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn e(d: usize, gens: &[usize]) -> CliffordNum {
        CliffordNum::blade(d, BladeIndex::from_generators(gens), 1.0)
    }

    fn random_matrix(n: usize, d: usize, rng: &mut ChaCha8Rng) -> CliffordMatrix {
        let entries: Vec<CliffordNum> = (0..n * n)
            .map(|_| {
                CliffordNum::from_coeffs(d, (0..1 << d).map(|_| rng.random_range(-1.0..1.0)).collect())
                    .unwrap()
            })
            .collect();
        CliffordMatrix::from_entries(n, d, &entries).unwrap()
    }

    #[test]
    fn pencil_examples() {
        let p = q_pencil(&CliffordMatrix::zero(2, 2), &Paravector::real(2, 1.0)).unwrap();
        assert_eq!(p.q, CliffordMatrix::identity(2, 2));
        assert!((p.sigma_min - 1.0).abs() < 1e-14);

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let t = random_matrix(3, 2, &mut rng);
        let p = q_pencil(&t, &Paravector::real(2, 0.7)).unwrap();
        let shifted = t.sub(&CliffordMatrix::scalar_identity(3, 2, 0.7));
        assert!(p.q.max_abs_diff(&shifted.mul(&shifted)) < 1e-13);

        let s = Paravector::new(0.3, vec![0.2, -1.1]);
        let q = q_pencil(&t, &s).unwrap().q;
        assert!(q.mul(&t).max_abs_diff(&t.mul(&q)) < 1e-12);
    }

    #[test]
    fn membership_examples() {
        let zero = CliffordMatrix::zero(1, 2);
        assert!(in_resolvent_svd(&zero, &Paravector::real(2, 1.0), 1e-10).unwrap());
        let t = CliffordMatrix::diag(&[e(2, &[1])]).unwrap();
        let s = Paravector::new(0.0, vec![0.0, 1.0]);
        assert!(!in_resolvent(&t, &s).unwrap());

        let fo = first_order_realified(&zero, &Paravector::real(2, 1.0)).unwrap();
        assert_eq!(fo.matrix, -DMatrix::<f64>::identity(4, 4));
        let fo = first_order_realified(&t, &Paravector::new(0.0, vec![1.0, 0.0])).unwrap();
        assert!(!fo.is_invertible(1e-12));
    }

    #[test]
    fn spectrum_examples() {
        let spec = spectrum_exact(&CliffordMatrix::zero(2, 2)).unwrap();
        assert_eq!(spec.spheres, vec![SpectralSphere::new(0.0, 0.0, 4)]);

        let t = CliffordMatrix::diag(&[e(2, &[1])]).unwrap();
        let spec = spectrum_exact(&t).unwrap();
        assert_eq!(spec.spheres.len(), 1);
        assert!(spec.spheres[0].x.abs() < 1e-14 && (spec.spheres[0].r - 1.0).abs() < 1e-14);
        assert_eq!(spec.total_multiplicity(), 2);
    }

    #[test]
    fn factorization_examples() {
        let c = resolvent_factorization_check(&CliffordMatrix::zero(1, 1), &Paravector::real(1, 1.0))
            .unwrap();
        assert!(c.residual < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let t = random_matrix(3, 3, &mut rng);
        let s = Paravector::new(2.5, vec![0.3, -0.2, 0.9]);
        let c = resolvent_factorization_check(&t, &s).unwrap();
        assert!(c.residual <= 1e-10 * c.inverse_norm);
        let k = ResolventKernel::new(&t);
        assert!(k.q_inverse(&s).unwrap().max_abs_diff(&k.q_inverse(&s.conjugate()).unwrap()) < 1e-14);
    }

    #[test]
    fn q_inverse_from_basis_solves_matches_full_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let t = random_matrix(3, 2, &mut rng);
        let s = Paravector::new(0.4, vec![1.7, -0.3]);
        let full = q_pencil(&t, &s).unwrap().q.realify_left().matrix.try_inverse().unwrap();
        let qi = ResolventKernel::new(&t).q_inverse(&s).unwrap();
        assert!((qi.realify_left().matrix - full).amax() < 1e-12);
    }

    #[test]
    fn resolvent_examples() {
        let s = Paravector::new(3.0, vec![0.0, 4.0]);
        let sl = s_resolvent_left(&CliffordMatrix::zero(1, 2), &s).unwrap();
        let inv = s.inverse().unwrap().to_clifford();
        assert!(sl.entry(0, 0).distance(&inv) < 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let t = random_matrix(2, 2, &mut rng);
        let x = Paravector::real(2, 4.0);
        let classical = classical_resolvent(&t, 4.0).unwrap();
        assert!(s_resolvent_left(&t, &x).unwrap().max_abs_diff(&classical) < 1e-12);
        assert!(s_resolvent_right(&t, &x).unwrap().max_abs_diff(&classical) < 1e-12);
    }

    #[test]
    fn adjoint_spectrum_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let t = random_matrix(3, 2, &mut rng);
        let sym = t.add(&t.adjoint());
        let r = adjoint_spectrum_check(&sym, 5, &mut rng).unwrap();
        assert_eq!(r.hausdorff, 0.0);
        let r = adjoint_spectrum_check(&t, 20, &mut rng).unwrap();
        assert!(r.hausdorff <= 1e-9, "{r:?}");
        assert!(r.multiplicities_match);
        assert!(r.left_identity <= 1e-10 && r.right_identity <= 1e-10, "{r:?}");
    }

    #[test]
    fn scan_shape() {
        let t = CliffordMatrix::diag(&[e(1, &[1])]).unwrap();
        let grid = slice_scan(&t, (-1.0, 1.0), (0.0, 2.0), 3).unwrap();
        assert_eq!(grid.len(), 9);
        // (0, 1) is on the spectrum
        assert!(grid[4].2 < 1e-14);
    }
}
