//! Multiplication operators `M_h` over finite measure spaces with positive
//! weights. The essential range is then the value set of `h`, and every
//! statement about `M_h` reduces to pointwise Clifford arithmetic.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use nalgebra::{DMatrix, DVector};
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use crate::calculus::{run_calculus, CalculusKind, QuadOptions};
use crate::clifford::{CliffordNum, ImaginaryUnit, Paravector};
use crate::error::{Error, Result};
use crate::module::CliffordMatrix;
use crate::slice::SliceFunction;
use crate::spectral::{default_merge_tol, random_unit, spectrum_exact, ResolventKernel, SpectralSet};

/// Values closer than this are one point of the essential range.
pub const ESSRAN_DEDUP_TOL: f64 = 1e-12;
pub const RANGE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteMeasureSpace {
    pub labels: Vec<String>,
    pub weights: Vec<f64>,
}

impl DiscreteMeasureSpace {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        let labels = (1..=weights.len()).map(|i| format!("x{i}")).collect();
        Self::with_labels(labels, weights)
    }

    pub fn with_labels(labels: Vec<String>, weights: Vec<f64>) -> Result<Self> {
        if labels.len() != weights.len() {
            return Err(Error::ShapeMismatch { expected: weights.len(), found: labels.len() });
        }
        if weights.is_empty() {
            return Err(Error::InvalidArgument("measure space has no points".into()));
        }
        if let Some(w) = weights.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
            return Err(Error::InvalidArgument(format!("weight {w} is not positive and finite")));
        }
        Ok(DiscreteMeasureSpace { labels, weights })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RangeType {
    Paravector,
    Nrd,
    General,
}

impl RangeType {
    pub fn name(self) -> &'static str {
        match self {
            RangeType::Paravector => "paravector",
            RangeType::Nrd => "nrd",
            RangeType::General => "general",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeasurableFn {
    pub values: Vec<CliffordNum>,
    pub range: RangeType,
}

fn fits(v: &CliffordNum, range: RangeType) -> bool {
    match range {
        RangeType::Paravector => v.is_paravector(RANGE_TOL),
        RangeType::Nrd => v.in_nrd(RANGE_TOL * v.norm_sqr().max(1.0)),
        RangeType::General => true,
    }
}

impl MeasurableFn {
    /// Checks the declared range against the values.
    pub fn new(values: Vec<CliffordNum>, range: RangeType) -> Result<Self> {
        let d = values.first().map(|v| v.d()).ok_or(Error::InvalidArgument("function has no values".into()))?;
        for v in &values {
            if v.d() != d {
                return Err(Error::DimensionMismatch { left: d, right: v.d() });
            }
            if !fits(v, range) {
                return Err(Error::InvalidArgument(format!("value {v:?} is not of range type {}", range.name())));
            }
        }
        Ok(MeasurableFn { values, range })
    }

    /// Uses the narrowest range type the values satisfy.
    pub fn infer(values: Vec<CliffordNum>) -> Result<Self> {
        let range = [RangeType::Paravector, RangeType::Nrd]
            .into_iter()
            .find(|r| values.iter().all(|v| fits(v, *r)))
            .unwrap_or(RangeType::General);
        Self::new(values, range)
    }

    pub fn d(&self) -> usize {
        self.values[0].d()
    }

    pub fn map(&self, f: impl Fn(&CliffordNum) -> Result<CliffordNum>) -> Result<MeasurableFn> {
        let values = self.values.iter().map(f).collect::<Result<Vec<_>>>()?;
        MeasurableFn::infer(values)
    }

    pub fn conjugate(&self) -> MeasurableFn {
        MeasurableFn { values: self.values.iter().map(|v| v.conjugate()).collect(), range: self.range }
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    fn paravectors(&self) -> Result<Vec<Paravector>> {
        if self.range != RangeType::Paravector {
            return Err(Error::NotParavector);
        }
        self.values.iter().map(|v| Paravector::from_clifford(v, RANGE_TOL)).collect()
    }
}

fn check_space(space: &DiscreteMeasureSpace, h: &MeasurableFn) -> Result<()> {
    if space.len() != h.values.len() {
        return Err(Error::ShapeMismatch { expected: space.len(), found: h.values.len() });
    }
    Ok(())
}

/// `diag(h(x_1), ..., h(x_N))`.
pub fn build_mult(space: &DiscreteMeasureSpace, h: &MeasurableFn) -> Result<CliffordMatrix> {
    check_space(space, h)?;
    CliffordMatrix::diag(&h.values)
}

/// Distinct values of `h`, in order of first appearance.
pub fn essran(space: &DiscreteMeasureSpace, h: &MeasurableFn) -> Result<Vec<CliffordNum>> {
    check_space(space, h)?;
    let mut out: Vec<CliffordNum> = Vec::new();
    for v in &h.values {
        if !out.iter().any(|u| u.distance(v) <= ESSRAN_DEDUP_TOL) {
            out.push(v.clone());
        }
    }
    Ok(out)
}

/// Spheres `[v]` of the essential range, merged like the eigenvalue oracle.
pub fn spectrum_mult(space: &DiscreteMeasureSpace, h: &MeasurableFn) -> Result<SpectralSet> {
    check_space(space, h)?;
    let values = h.paravectors()?;
    let weight = 1usize << h.d();
    let points: Vec<(f64, f64, usize)> =
        values.iter().map(|p| (p.s0, p.imag_abs(), weight)).collect();
    let tol = default_merge_tol(&build_mult(space, h)?);
    Ok(SpectralSet::from_points(&points, tol))
}

#[derive(Clone, Debug)]
pub struct MultSpectrumReport {
    pub hausdorff: f64,
    pub same_shape: bool,
    pub passed: bool,
}

/// Compares `spectrum_mult` with the eigenvalue oracle on `M_h`.
pub fn mult_spectrum_check(space: &DiscreteMeasureSpace, h: &MeasurableFn) -> Result<MultSpectrumReport> {
    let a = spectrum_mult(space, h)?;
    let b = spectrum_exact(&build_mult(space, h)?)?;
    let hausdorff = a.hausdorff(&b);
    let same_shape = a.spheres.len() == b.spheres.len()
        && a.spheres.iter().zip(&b.spheres).all(|(p, q)| p.multiplicity == q.multiplicity);
    Ok(MultSpectrumReport { hausdorff, same_shape, passed: same_shape && hausdorff <= a.tol })
}

#[derive(Clone, Debug)]
pub struct MultAdjointReport {
    pub max_abs_diff: f64,
    pub passed: bool,
}

/// `(M_h)* = M_{h̄}`, compared exactly.
pub fn mult_adjoint_check(space: &DiscreteMeasureSpace, h: &MeasurableFn) -> Result<MultAdjointReport> {
    let a = build_mult(space, h)?.adjoint();
    let b = build_mult(space, &h.conjugate())?;
    let max_abs_diff = a.max_abs_diff(&b);
    Ok(MultAdjointReport { max_abs_diff, passed: max_abs_diff == 0.0 })
}

/// Inverse of a Clifford number from its left-multiplication matrix.
pub fn clifford_inverse(q: &CliffordNum) -> Result<CliffordNum> {
    let d = q.d();
    let dim = 1usize << d;
    let m = CliffordMatrix::diag(core::slice::from_ref(q))?.realify_left().matrix;
    let mut rhs = DVector::<f64>::zeros(dim);
    rhs[0] = 1.0;
    let sv = m.clone().singular_values();
    if !(sv.min() > 1e-14 * sv.max()) {
        return Err(Error::NotInvertible("Clifford number"));
    }
    let x = m.lu().solve(&rhs).ok_or(Error::NotInvertible("Clifford number"))?;
    CliffordNum::from_coeffs(d, x.iter().copied().collect())
}

/// Pointwise `(S_L^{-1}(s, v), S_R^{-1}(s, v))`.
pub fn pointwise_resolvents(s: &Paravector, v: &CliffordNum) -> Result<(CliffordNum, CliffordNum)> {
    let d = v.d();
    let q = &(&(v * v) - &v.scale(2.0 * s.s0)) + &CliffordNum::scalar(d, s.norm_sqr());
    let qi = clifford_inverse(&q)?;
    let sbar = s.conjugate().to_clifford();
    let left = &(&qi * &sbar) - &(v * &qi);
    let right = &(&sbar - v) * &qi;
    Ok((left, right))
}

#[derive(Clone, Debug)]
pub struct MultResolventReport {
    pub left_residual: f64,
    pub right_residual: f64,
    pub passed: bool,
}

pub const MULT_RESOLVENT_TOL: f64 = 1e-10;

/// Largest coefficient difference relative to `max(1, largest coefficient)`.
fn entrywise(a: &CliffordMatrix, b: &CliffordMatrix) -> f64 {
    let scale = a.raw().iter().fold(1.0f64, |m, x| m.max(x.abs()));
    a.max_abs_diff(b) / scale
}

/// S-resolvents of `M_h` against the diagonal of pointwise resolvents.
pub fn mult_resolvent_check(space: &DiscreteMeasureSpace, h: &MeasurableFn, s: &Paravector) -> Result<MultResolventReport> {
    let m = build_mult(space, h)?;
    if h.range == RangeType::Paravector {
        let spec = spectrum_mult(space, h)?;
        if spec.distance_to(s.s0, s.imag_abs()) <= spec.tol {
            return Err(Error::InSpectrum { s0: s.s0, y: s.imag_abs() });
        }
    }
    let kernel = ResolventKernel::new(&m);
    let (mut lefts, mut rights) = (Vec::new(), Vec::new());
    for v in &h.values {
        let (l, r) = pointwise_resolvents(s, v)?;
        lefts.push(l);
        rights.push(r);
    }
    let left_residual = entrywise(&kernel.left(s)?, &CliffordMatrix::diag(&lefts)?);
    let right_residual = entrywise(&kernel.right(s)?, &CliffordMatrix::diag(&rights)?);
    Ok(MultResolventReport {
        left_residual,
        right_residual,
        passed: left_residual <= MULT_RESOLVENT_TOL && right_residual <= MULT_RESOLVENT_TOL,
    })
}

#[derive(Clone, Debug)]
pub struct MultInverseReport {
    pub invertible: bool,
    pub min_abs: f64,
    /// `‖M_h^{-1} - M_{h^{-1}}‖` when invertible.
    pub residual: f64,
    pub passed: bool,
}

/// `M_h` is invertible iff `min |h| > 0`, with inverse `M_{h^{-1}}`; needs values in `N(R_d)`.
pub fn mult_inverse_check(space: &DiscreteMeasureSpace, h: &MeasurableFn) -> Result<MultInverseReport> {
    if h.range == RangeType::General {
        return Err(Error::InvalidArgument("inverse check needs values in N(R_d)".into()));
    }
    let m = build_mult(space, h)?;
    let min_abs = h.values.iter().map(|v| v.abs()).fold(f64::INFINITY, f64::min);
    let real = m.realify_left();
    let realified_invertible = real.is_invertible(1e-13);
    if min_abs == 0.0 {
        return Ok(MultInverseReport { invertible: false, min_abs, residual: 0.0, passed: !realified_invertible });
    }
    let inv: Vec<CliffordNum> = h.values.iter().map(|v| v.nrd_inverse(RANGE_TOL)).collect::<Result<_>>()?;
    let expected = CliffordMatrix::diag(&inv)?;
    let n = real.size();
    let direct = real.matrix.lu().solve(&DMatrix::<f64>::identity(n, n)).ok_or(Error::NotInvertible("M_h"))?;
    let direct = crate::module::RealifiedMatrix {
        n: m.n(),
        d: m.d(),
        matrix: direct,
        provenance: crate::module::Provenance::Derived,
    }
    .to_clifford();
    let residual = direct.distance(&expected) / expected.operator_norm().max(1.0);
    Ok(MultInverseReport { invertible: true, min_abs, residual, passed: realified_invertible && residual <= 1e-10 })
}

#[derive(Clone, Debug)]
pub struct MultNormReport {
    pub sup_norm: f64,
    pub operator_norm: f64,
    pub upper: f64,
    pub passed: bool,
}

pub const NORM_SLACK: f64 = 1e-12;

/// `‖h‖_∞ ≤ ‖M_h‖ ≤ 2^{d/2} ‖h‖_∞`.
pub fn mult_norm_check(space: &DiscreteMeasureSpace, h: &MeasurableFn) -> Result<MultNormReport> {
    let m = build_mult(space, h)?;
    let sup_norm = h.sup_norm();
    let operator_norm = m.operator_norm();
    let upper = 2f64.powf(h.d() as f64 / 2.0) * sup_norm;
    let slack = NORM_SLACK * sup_norm.max(1.0);
    let passed = sup_norm <= operator_norm + slack && operator_norm <= upper + slack;
    Ok(MultNormReport { sup_norm, operator_norm, upper, passed })
}

/// `ε_s = sqrt(|Im s|^2 + ε^2) - |Im s|`, the root of `ε_s (ε_s + 2|Im s|) = ε^2`.
pub fn sector_eps(s: &Paravector, eps: f64) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("ε must be positive, got {eps}")));
    }
    let y = s.imag_abs();
    // stable form of sqrt(y^2 + ε^2) - y
    Ok(eps * eps / (y.hypot(eps) + y))
}

/// `|q^2 - 2 s_0 q + |s|^2|` for paravector `q`.
pub fn pencil_modulus(s: &Paravector, q: &Paravector) -> f64 {
    let qc = q.to_clifford();
    let val = &(&(&qc * &qc) - &qc.scale(2.0 * s.s0)) + &CliffordNum::scalar(s.d(), s.norm_sqr());
    val.abs()
}

/// Distance from `q` to the sphere `[s]`.
pub fn sphere_distance(s: &Paravector, q: &Paravector) -> f64 {
    (q.s0 - s.s0).hypot(q.imag_abs() - s.imag_abs())
}

#[derive(Clone, Debug)]
pub struct SectorReport {
    pub eps: f64,
    pub eps_s: f64,
    pub inner_samples: usize,
    pub inner_violations: usize,
    pub outer_samples: usize,
    pub outer_violations: usize,
    pub passed: bool,
}

pub const SECTOR_SLACK: f64 = 1e-12;

fn random_ball<R: Rng + ?Sized>(dim: usize, radius: f64, rng: &mut R) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        let n2: f64 = v.iter().map(|x| x * x).sum();
        if n2 < 1.0 {
            return v.into_iter().map(|x| x * radius).collect();
        }
    }
}

/// Samples both inclusions `[s] + U_{ε_s} ⊂ {|Q_s| < ε^2} ⊂ [s] + U_ε`.
pub fn sector_geometry_check<R: Rng + ?Sized>(
    s: &Paravector,
    eps: f64,
    samples: usize,
    rng: &mut R,
) -> Result<SectorReport> {
    let d = s.d();
    if d == 0 {
        return Err(Error::InvalidArgument("sector geometry needs d >= 1".into()));
    }
    let eps_s = sector_eps(s, eps)?;
    let y = s.imag_abs();
    let bound = eps * eps * (1.0 + SECTOR_SLACK);
    let mut inner_violations = 0;
    for _ in 0..samples {
        let unit = random_unit(d, rng);
        let p = Paravector::on_slice(s.s0, y, &unit);
        let delta = random_ball(d + 1, eps_s, rng);
        let q = Paravector::new(p.s0 + delta[0], p.vec.iter().zip(&delta[1..]).map(|(a, b)| a + b).collect());
        if pencil_modulus(s, &q) >= bound {
            inner_violations += 1;
        }
    }
    // rejection sampling around the sphere from nested boxes, the widest of
    // half-width 2ε, so the thin set {|Q_s| < ε^2} is hit at every scale
    let finest = (eps * eps / (2.0 * y + eps)).min(eps);
    let levels = ((2.0 * eps / finest).log2().ceil() as usize).max(1);
    let (mut outer_samples, mut outer_violations, mut tries) = (0, 0, 0usize);
    while outer_samples < samples && tries < 1000 * samples {
        tries += 1;
        let w = 2.0 * eps * 0.5f64.powi(rng.random_range(0..=levels) as i32);
        let x = s.s0 + rng.random_range(-w..w);
        let r = (y + rng.random_range(-w..w)).abs();
        let q = Paravector::on_slice(x, r, &random_unit(d, rng));
        if pencil_modulus(s, &q) < eps * eps {
            outer_samples += 1;
            if sphere_distance(s, &q) >= eps * (1.0 + SECTOR_SLACK) {
                outer_violations += 1;
            }
        }
    }
    Ok(SectorReport {
        eps,
        eps_s,
        inner_samples: samples,
        inner_violations,
        outer_samples,
        outer_violations,
        passed: inner_violations == 0 && outer_violations == 0 && outer_samples == samples,
    })
}

/// The closed-form bound `C(s)` on `‖S_L^{-1}(s, M_h)‖` outside `D_φ`.
pub fn mult_bisectorial_constant(d: usize, omega: f64, phi: f64, modulus: f64) -> f64 {
    let c = (1.0 + (phi - omega).cos()).sqrt();
    2f64.powf(d as f64 / 2.0 - 1.0) / (modulus * c * (SQRT_2 - c))
}

#[derive(Clone, Debug)]
pub struct MultBisectorialReport {
    pub omega: f64,
    pub phi: f64,
    pub samples: usize,
    /// Largest `‖S_L^{-1}‖ / C(s)`.
    pub max_ratio: f64,
    /// Sampled `sup ‖S_L^{-1}‖|s|`.
    pub c_left: f64,
    /// Sampled `sup ‖S_R^{-1}‖|s|`.
    pub c_right: f64,
    pub passed: bool,
}

pub const BISECTORIAL_RADII: usize = 200;
pub const BISECTORIAL_ANGLES: usize = 8;

/// Samples `‖S_L^{-1}(s, M_h)‖` against the closed-form constant outside `D_φ`.
pub fn mult_bisectorial_bound(
    space: &DiscreteMeasureSpace,
    h: &MeasurableFn,
    omega: f64,
    phi: f64,
) -> Result<MultBisectorialReport> {
    let values = h.paravectors()?;
    let d = h.d();
    if d == 0 {
        return Err(Error::InvalidArgument("bisectorial sampling needs d >= 1".into()));
    }
    if !(0.0 <= omega && omega < phi && phi < FRAC_PI_2) {
        return Err(Error::InvalidArgument(format!("need 0 <= ω < φ < π/2, got ω = {omega}, φ = {phi}")));
    }
    for v in &values {
        let angle = v.imag_abs().atan2(v.s0.abs());
        if v.abs() > 0.0 && angle > omega + 1e-12 {
            return Err(Error::NotBisectorial(format!("value at angle {angle} lies outside the sector of angle {omega}")));
        }
    }
    let m = build_mult(space, h)?;
    let kernel = ResolventKernel::new(&m);
    let mut units = vec![ImaginaryUnit::generator(d, 1)];
    if d > 1 {
        units.push(ImaginaryUnit::normalized(vec![1.0; d])?);
    }
    let (mut max_ratio, mut c_left, mut c_right, mut samples) = (0.0f64, 0.0f64, 0.0f64, 0usize);
    for unit in &units {
        for a in 0..BISECTORIAL_ANGLES {
            let alpha = phi + (PI - 2.0 * phi) * a as f64 / (BISECTORIAL_ANGLES - 1) as f64;
            for i in 0..BISECTORIAL_RADII {
                let rho = 10f64.powf(-3.0 + 6.0 * i as f64 / (BISECTORIAL_RADII - 1) as f64);
                let s = Paravector::on_slice(rho * alpha.cos(), rho * alpha.sin(), unit);
                let left = kernel.left(&s)?.operator_norm();
                let right = kernel.right(&s)?.operator_norm();
                max_ratio = max_ratio.max(left / mult_bisectorial_constant(d, omega, phi, rho));
                c_left = c_left.max(left * rho);
                c_right = c_right.max(right * rho);
                samples += 1;
            }
        }
    }
    let passed = max_ratio <= 1.0 && c_right <= 2.0 * c_left * (1.0 + crate::calculus::BISECTORIAL_SLACK);
    Ok(MultBisectorialReport { omega, phi, samples, max_ratio, c_left, c_right, passed })
}

#[derive(Clone, Debug)]
pub struct MultCalculusReport {
    pub kind: CalculusKind,
    /// `‖f(M_h) - M_{f∘h}‖`.
    pub residual: f64,
    /// `‖f(M_h)* - M_{f̄∘h}‖`.
    pub adjoint_residual: f64,
    pub estimate: f64,
    pub passed: bool,
}

/// Compares a contour calculus on `M_h` with pointwise evaluation of `f`.
pub fn mult_calculus_oracle(
    space: &DiscreteMeasureSpace,
    h: &MeasurableFn,
    f: &SliceFunction,
    kind: CalculusKind,
    k: Option<&SpectralSet>,
    opts: &QuadOptions,
) -> Result<MultCalculusReport> {
    let values = h.paravectors()?;
    let m = build_mult(space, h)?;
    let result = run_calculus(kind, f, &m, k, opts)?;
    let fh: Vec<CliffordNum> = values.iter().map(|v| f.eval(v)).collect::<Result<_>>()?;
    let expected = CliffordMatrix::diag(&fh)?;
    let conj: Vec<CliffordNum> = fh.iter().map(|v| v.conjugate()).collect();
    let expected_adj = CliffordMatrix::diag(&conj)?;
    let residual = result.operator.distance(&expected);
    let adjoint_residual = result.operator.adjoint().distance(&expected_adj);
    let passed = residual <= result.estimate && adjoint_residual <= result.estimate;
    Ok(MultCalculusReport { kind, residual, adjoint_residual, estimate: result.estimate, passed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{Calculus, Side};
    use crate::slice::{regularizer, Rational};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gen(d: usize, i: usize) -> CliffordNum {
        CliffordNum::generator(d, i)
    }

    #[test]
    fn spectrum_of_two_point_space() {
        let space = DiscreteMeasureSpace::new(vec![1.0, 0.5]).unwrap();
        let h = MeasurableFn::infer(vec![gen(2, 1), gen(2, 2).scale(2.0)]).unwrap();
        assert_eq!(h.range, RangeType::Paravector);
        let spec = spectrum_mult(&space, &h).unwrap();
        let pts: Vec<(f64, f64)> = spec.spheres.iter().map(|s| (s.x, s.r)).collect();
        assert_eq!(pts, vec![(0.0, 1.0), (0.0, 2.0)]);
        assert!(mult_spectrum_check(&space, &h).unwrap().passed);
        let m = build_mult(&space, &h).unwrap();
        assert_eq!(m.entry(1, 1), gen(2, 2).scale(2.0));
    }

    #[test]
    fn essential_range_dedups() {
        let space = DiscreteMeasureSpace::new(vec![1.0; 3]).unwrap();
        let h = MeasurableFn::infer(vec![gen(1, 1), gen(1, 1), CliffordNum::scalar(1, 3.0)]).unwrap();
        assert_eq!(essran(&space, &h).unwrap(), vec![gen(1, 1), CliffordNum::scalar(1, 3.0)]);
        assert!(DiscreteMeasureSpace::new(vec![1.0, 0.0]).is_err());
    }

    #[test]
    fn adjoint_is_conjugate() {
        let space = DiscreteMeasureSpace::new(vec![1.0]).unwrap();
        let h = MeasurableFn::infer(vec![gen(2, 1)]).unwrap();
        let r = mult_adjoint_check(&space, &h).unwrap();
        assert!(r.passed);
        assert_eq!(build_mult(&space, &h).unwrap().adjoint().entry(0, 0), gen(2, 1).scale(-1.0));
    }

    #[test]
    fn resolvent_example() {
        let space = DiscreteMeasureSpace::new(vec![1.0]).unwrap();
        let h = MeasurableFn::infer(vec![gen(2, 1)]).unwrap();
        let s = Paravector::real(2, 3.0);
        let (l, _) = pointwise_resolvents(&s, &gen(2, 1)).unwrap();
        // Q = 8 - 6 e1, and at a real point S_L^{-1} is the inverse of 3 - e1
        let expect = (&CliffordNum::scalar(2, 3.0) + &gen(2, 1)).scale(0.1);
        assert!(l.distance(&expect) < 1e-14, "{}", l.distance(&expect));
        assert!(mult_resolvent_check(&space, &h, &s).unwrap().passed);
        assert!(mult_resolvent_check(&space, &h, &Paravector::new(0.0, vec![0.0, 1.0])).is_err());
    }

    #[test]
    fn sector_eps_values() {
        assert_eq!(sector_eps(&Paravector::real(2, 1.0), 0.3).unwrap(), 0.3);
        let s = Paravector::new(0.0, vec![1.0, 0.0]);
        assert!((sector_eps(&s, 1.0).unwrap() - (SQRT_2 - 1.0)).abs() < 1e-15);
        assert!(sector_eps(&s, 0.0).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let r = sector_geometry_check(&Paravector::new(0.5, vec![0.3, -0.4]), 0.2, 2000, &mut rng).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn bisectorial_bound_holds() {
        for d in 1..=3 {
            let space = DiscreteMeasureSpace::new(vec![1.0; 3]).unwrap();
            let unit = ImaginaryUnit::generator(d, 1);
            let omega = 0.4f64;
            let h = MeasurableFn::infer(vec![
                Paravector::on_slice(2.0 * omega.cos(), 2.0 * omega.sin(), &unit).to_clifford(),
                CliffordNum::scalar(d, 0.5),
                CliffordNum::scalar(d, -1.0),
            ])
            .unwrap();
            let r = mult_bisectorial_bound(&space, &h, omega, 0.8).unwrap();
            assert!(r.passed && r.samples >= 1600, "{r:?}");
        }
    }

    #[test]
    fn calculus_on_multiplication_operator() {
        let d = 2;
        let space = DiscreteMeasureSpace::new(vec![1.0, 2.0, 1.0]).unwrap();
        let h = MeasurableFn::infer(vec![
            Paravector::new(1.0, vec![0.2, 0.1]).to_clifford(),
            Paravector::new(-0.6, vec![0.0, 0.3]).to_clifford(),
            CliffordNum::scalar(d, 2.0),
        ])
        .unwrap();
        let cases = [
            (SliceFunction::intrinsic(d, Rational::power(2)), Calculus::Bounded),
            (regularizer(d, 1).unwrap(), Calculus::Omega),
            (SliceFunction::intrinsic(d, Rational::power(1)), Calculus::Hinf),
        ];
        for (f, c) in cases {
            for side in [Side::Left, Side::Right] {
                let kind = CalculusKind { calculus: c, side };
                let r = mult_calculus_oracle(&space, &h, &f, kind, None, &QuadOptions::default()).unwrap();
                assert!(r.passed, "{r:?}");
            }
        }
    }

    #[test]
    fn inverse_and_norms() {
        let space = DiscreteMeasureSpace::new(vec![1.0, 1.0]).unwrap();
        let h = MeasurableFn::infer(vec![Paravector::new(1.0, vec![2.0, 0.0, 1.0]).to_clifford(), gen(3, 2)]).unwrap();
        assert!(mult_inverse_check(&space, &h).unwrap().passed);
        assert!(mult_norm_check(&space, &h).unwrap().passed);
        let z = MeasurableFn::infer(vec![CliffordNum::zero(3), gen(3, 2)]).unwrap();
        let r = mult_inverse_check(&space, &z).unwrap();
        assert!(r.passed && !r.invertible);
    }
}
