//! Arithmetic in the real Clifford algebra `R_d` with generators `e_1..e_d`,
//! `e_i^2 = -1` and `e_i e_j = -e_j e_i` for `i != j`.
//!
//! Elements are stored as dense coefficient arrays of length `2^d`; the
//! coefficient of the basis blade `e_A` sits at the position given by the
//! bitmask of `A` (bit `i - 1` set when `e_i` is a factor).

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Default cap on the algebra dimension. Callers that need more may raise it
/// up to [`HARD_DIM_LIMIT`].
pub const DEFAULT_DIM_LIMIT: usize = 6;

/// Largest dimension the bitmask representation supports.
pub const HARD_DIM_LIMIT: usize = 16;

const TABLE_DIM: usize = 6;
const TABLE_SIZE: usize = 1 << TABLE_DIM;

/// Sign of `e_A e_B` relative to `e_{A xor B}`.
const fn blade_sign(a: u32, b: u32) -> i8 {
    let mut swaps = 0u32;
    let mut rest = b;
    let mut j = 0;
    while rest != 0 {
        if rest & 1 == 1 {
            swaps += (a >> (j + 1)).count_ones();
        }
        rest >>= 1;
        j += 1;
    }
    // each shared generator contracts to e_i^2 = -1
    swaps += (a & b).count_ones();
    if swaps.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

const fn build_sign_table() -> [[i8; TABLE_SIZE]; TABLE_SIZE] {
    let mut table = [[0i8; TABLE_SIZE]; TABLE_SIZE];
    let mut a = 0;
    while a < TABLE_SIZE {
        let mut b = 0;
        while b < TABLE_SIZE {
            table[a][b] = blade_sign(a as u32, b as u32);
            b += 1;
        }
        a += 1;
    }
    table
}

static SIGN_TABLE: [[i8; TABLE_SIZE]; TABLE_SIZE] = build_sign_table();

#[inline]
pub(crate) fn sign_of(a: usize, b: usize) -> f64 {
    let s = if a < TABLE_SIZE && b < TABLE_SIZE {
        SIGN_TABLE[a][b]
    } else {
        blade_sign(a as u32, b as u32)
    };
    s as f64
}

/// `out += a * b` on raw coefficient slices of one algebra.
#[inline]
pub(crate) fn mul_acc(a: &[f64], b: &[f64], out: &mut [f64]) {
    let dim = a.len();
    debug_assert_eq!(dim, b.len());
    debug_assert_eq!(dim, out.len());
    if dim <= TABLE_SIZE {
        for (ia, &ca) in a.iter().enumerate() {
            if ca == 0.0 {
                continue;
            }
            let row = &SIGN_TABLE[ia];
            for (ib, &cb) in b.iter().enumerate() {
                out[ia ^ ib] += row[ib] as f64 * ca * cb;
            }
        }
    } else {
        for (ia, &ca) in a.iter().enumerate() {
            if ca == 0.0 {
                continue;
            }
            for (ib, &cb) in b.iter().enumerate() {
                out[ia ^ ib] += sign_of(ia, ib) * ca * cb;
            }
        }
    }
}

/// Sign of the conjugation `(-1)^{|A|(|A|+1)/2}` for a blade of grade `|A|`.
#[inline]
pub(crate) fn conjugation_sign(bits: usize) -> f64 {
    let g = bits.count_ones();
    if (g * (g + 1) / 2).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

pub(crate) fn check_dim(d: usize) -> Result<()> {
    if d > HARD_DIM_LIMIT {
        Err(Error::DimensionTooLarge { d, limit: HARD_DIM_LIMIT })
    } else {
        Ok(())
    }
}

/// Basis blade `e_A` identified by its generator bitmask.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BladeIndex(pub u32);

impl BladeIndex {
    pub const SCALAR: BladeIndex = BladeIndex(0);

    /// Blade from 1-based generator indices, e.g. `[1, 2]` for `e_12`.
    pub fn from_generators(indices: &[usize]) -> Self {
        BladeIndex(indices.iter().fold(0u32, |acc, &i| acc | (1 << (i - 1))))
    }

    /// The blade of the single generator `e_i` (1-based).
    pub fn generator(i: usize) -> Self {
        BladeIndex(1 << (i - 1))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn grade(self) -> u32 {
        self.0.count_ones()
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// `e_A e_B = sign * e_C` with `C = A xor B`.
pub fn blade_product(a: BladeIndex, b: BladeIndex) -> (i8, BladeIndex) {
    let sign = if (a.0 as usize) < TABLE_SIZE && (b.0 as usize) < TABLE_SIZE {
        SIGN_TABLE[a.0 as usize][b.0 as usize]
    } else {
        blade_sign(a.0, b.0)
    };
    (sign, BladeIndex(a.0 ^ b.0))
}

/// An element of `R_d`.
#[derive(Clone, PartialEq)]
pub struct CliffordNum {
    d: usize,
    coeffs: Vec<f64>,
}

impl fmt::Debug for CliffordNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CliffordNum(d={}; ", self.d)?;
        let mut first = true;
        for (bits, c) in self.coeffs.iter().enumerate() {
            if *c != 0.0 {
                if !first {
                    write!(f, " + ")?;
                }
                write!(f, "{c}e[{bits:b}]")?;
                first = false;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, ")")
    }
}

impl CliffordNum {
    pub fn zero(d: usize) -> Self {
        assert!(d <= HARD_DIM_LIMIT, "d = {d} exceeds {HARD_DIM_LIMIT}");
        CliffordNum { d, coeffs: vec![0.0; 1 << d] }
    }

    pub fn scalar(d: usize, x: f64) -> Self {
        let mut z = Self::zero(d);
        z.coeffs[0] = x;
        z
    }

    pub fn one(d: usize) -> Self {
        Self::scalar(d, 1.0)
    }

    pub fn blade(d: usize, blade: BladeIndex, value: f64) -> Self {
        let mut z = Self::zero(d);
        z.coeffs[blade.index()] = value;
        z
    }

    /// The generator `e_i` (1-based).
    pub fn generator(d: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= d, "generator e_{i} does not exist in R_{d}");
        Self::blade(d, BladeIndex::generator(i), 1.0)
    }

    pub fn from_coeffs(d: usize, coeffs: Vec<f64>) -> Result<Self> {
        check_dim(d)?;
        if coeffs.len() != 1 << d {
            return Err(Error::CoefficientLength { expected: 1 << d, found: coeffs.len() });
        }
        Ok(CliffordNum { d, coeffs })
    }

    /// Builds an element from `(bitmask, value)` pairs; repeated blades add up.
    pub fn from_pairs(d: usize, pairs: &[(u32, f64)]) -> Result<Self> {
        check_dim(d)?;
        let mut z = Self::zero(d);
        for &(bits, v) in pairs {
            if bits as usize >= 1 << d {
                return Err(Error::InvalidArgument(alloc::format!(
                    "blade bitmask {bits} out of range for d = {d}"
                )));
            }
            z.coeffs[bits as usize] += v;
        }
        Ok(z)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    pub fn coeff(&self, blade: BladeIndex) -> f64 {
        self.coeffs[blade.index()]
    }

    pub fn scalar_part(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == 0.0)
    }

    /// Clifford product, failing on mismatched dimensions.
    pub fn try_mul(&self, other: &CliffordNum) -> Result<CliffordNum> {
        if self.d != other.d {
            return Err(Error::DimensionMismatch { left: self.d, right: other.d });
        }
        let mut out = CliffordNum::zero(self.d);
        mul_acc(&self.coeffs, &other.coeffs, &mut out.coeffs);
        Ok(out)
    }

    pub fn conjugate(&self) -> CliffordNum {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(bits, c)| conjugation_sign(bits) * c)
            .collect();
        CliffordNum { d: self.d, coeffs }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// `|s|`, the Euclidean norm of the coefficient array.
    pub fn abs(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, k: f64) -> CliffordNum {
        CliffordNum { d: self.d, coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    /// Euclidean distance between coefficient arrays.
    pub fn distance(&self, other: &CliffordNum) -> f64 {
        assert_eq!(self.d, other.d);
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// True when all coefficients outside grades 0 and 1 vanish within `tol`.
    pub fn is_paravector(&self, tol: f64) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(bits, c)| bits.count_ones() <= 1 || c.abs() <= tol)
    }

    /// Membership in `N(R_d) = { s : s s̄ = s̄ s = |s|^2 }`.
    pub fn in_nrd(&self, tol: f64) -> bool {
        let conj = self.conjugate();
        let modulus = CliffordNum::scalar(self.d, self.norm_sqr());
        let left = self * &conj;
        let right = &conj * self;
        left.distance(&modulus) <= tol && right.distance(&modulus) <= tol
    }

    /// Inverse `s̄ / |s|^2`, valid for nonzero elements of `N(R_d)`.
    pub fn nrd_inverse(&self, tol: f64) -> Result<CliffordNum> {
        let n2 = self.norm_sqr();
        if n2 == 0.0 {
            return Err(Error::NotInvertible("zero Clifford number"));
        }
        if !self.in_nrd(tol * n2.max(1.0)) {
            return Err(Error::InvalidArgument("element is not in N(R_d)".into()));
        }
        Ok(self.conjugate().scale(1.0 / n2))
    }
}

impl<'a> Mul<&'a CliffordNum> for &'a CliffordNum {
    type Output = CliffordNum;
    fn mul(self, rhs: &'a CliffordNum) -> CliffordNum {
        self.try_mul(rhs).expect("Clifford product of mismatched dimensions")
    }
}

impl Mul<CliffordNum> for CliffordNum {
    type Output = CliffordNum;
    fn mul(self, rhs: CliffordNum) -> CliffordNum {
        &self * &rhs
    }
}

impl Mul<f64> for &CliffordNum {
    type Output = CliffordNum;
    fn mul(self, rhs: f64) -> CliffordNum {
        self.scale(rhs)
    }
}

impl AddAssign<&CliffordNum> for CliffordNum {
    fn add_assign(&mut self, rhs: &CliffordNum) {
        assert_eq!(self.d, rhs.d, "Clifford sum of mismatched dimensions");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl SubAssign<&CliffordNum> for CliffordNum {
    fn sub_assign(&mut self, rhs: &CliffordNum) {
        assert_eq!(self.d, rhs.d, "Clifford difference of mismatched dimensions");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
    }
}

impl<'a> Add<&'a CliffordNum> for &'a CliffordNum {
    type Output = CliffordNum;
    fn add(self, rhs: &'a CliffordNum) -> CliffordNum {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a> Sub<&'a CliffordNum> for &'a CliffordNum {
    type Output = CliffordNum;
    fn sub(self, rhs: &'a CliffordNum) -> CliffordNum {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Add for CliffordNum {
    type Output = CliffordNum;
    fn add(mut self, rhs: CliffordNum) -> CliffordNum {
        self += &rhs;
        self
    }
}

impl Sub for CliffordNum {
    type Output = CliffordNum;
    fn sub(mut self, rhs: CliffordNum) -> CliffordNum {
        self -= &rhs;
        self
    }
}

impl Neg for &CliffordNum {
    type Output = CliffordNum;
    fn neg(self) -> CliffordNum {
        self.scale(-1.0)
    }
}

impl Neg for CliffordNum {
    type Output = CliffordNum;
    fn neg(self) -> CliffordNum {
        self.scale(-1.0)
    }
}

/// A paravector `s0 + s1 e_1 + ... + sd e_d`.
#[derive(Clone, Debug, PartialEq)]
pub struct Paravector {
    pub s0: f64,
    pub vec: Vec<f64>,
}

impl Paravector {
    pub fn new(s0: f64, vec: Vec<f64>) -> Self {
        Paravector { s0, vec }
    }

    pub fn real(d: usize, x: f64) -> Self {
        Paravector { s0: x, vec: vec![0.0; d] }
    }

    /// The point `x + J y` of the slice plane `C_J`.
    pub fn on_slice(x: f64, y: f64, unit: &ImaginaryUnit) -> Self {
        Paravector { s0: x, vec: unit.0.vec.iter().map(|j| j * y).collect() }
    }

    pub fn d(&self) -> usize {
        self.vec.len()
    }

    pub fn from_clifford(s: &CliffordNum, tol: f64) -> Result<Self> {
        if !s.is_paravector(tol) {
            return Err(Error::NotParavector);
        }
        let vec = (0..s.d()).map(|i| s.coeffs()[1 << i]).collect();
        Ok(Paravector { s0: s.scalar_part(), vec })
    }

    pub fn to_clifford(&self) -> CliffordNum {
        let mut z = CliffordNum::scalar(self.d(), self.s0);
        for (i, v) in self.vec.iter().enumerate() {
            z.coeffs[1 << i] = *v;
        }
        z
    }

    pub fn conjugate(&self) -> Paravector {
        Paravector { s0: self.s0, vec: self.vec.iter().map(|v| -v).collect() }
    }

    /// `|Im(s)|`.
    pub fn imag_abs(&self) -> f64 {
        self.vec.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.s0 * self.s0 + self.vec.iter().map(|v| v * v).sum::<f64>()
    }

    pub fn abs(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `s^{-1} = s̄ / |s|^2`.
    pub fn inverse(&self) -> Result<Paravector> {
        let n2 = self.norm_sqr();
        if n2 == 0.0 {
            return Err(Error::NotInvertible("zero paravector"));
        }
        let c = self.conjugate();
        Ok(Paravector { s0: c.s0 / n2, vec: c.vec.iter().map(|v| v / n2).collect() })
    }

    /// The unit `J = Im(s) / |Im(s)|`, or `None` for real `s`.
    pub fn imag_unit(&self) -> Option<ImaginaryUnit> {
        let y = self.imag_abs();
        if y == 0.0 {
            None
        } else {
            Some(ImaginaryUnit(Paravector::new(0.0, self.vec.iter().map(|v| v / y).collect())))
        }
    }

    /// Coordinates `(s0, |Im s|)` of the sphere `[s]`.
    pub fn sphere_coords(&self) -> (f64, f64) {
        (self.s0, self.imag_abs())
    }
}

/// A unit imaginary paravector `J` (`J0 = 0`, `|J| = 1`), so `J^2 = -1`.
#[derive(Clone, Debug, PartialEq)]
pub struct ImaginaryUnit(Paravector);

impl ImaginaryUnit {
    /// Validates that `vec` has unit length within `1e-12`.
    pub fn new(vec: Vec<f64>) -> Result<Self> {
        let p = Paravector::new(0.0, vec);
        let norm = p.imag_abs();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NotImaginaryUnit { norm, real: 0.0 });
        }
        Ok(ImaginaryUnit(p))
    }

    /// Normalizes any nonzero vector.
    pub fn normalized(vec: Vec<f64>) -> Result<Self> {
        let p = Paravector::new(0.0, vec);
        let norm = p.imag_abs();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotImaginaryUnit { norm, real: 0.0 });
        }
        Ok(ImaginaryUnit(Paravector::new(0.0, p.vec.iter().map(|v| v / norm).collect())))
    }

    /// The generator `e_i` as an imaginary unit (1-based).
    pub fn generator(d: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= d);
        let mut v = vec![0.0; d];
        v[i - 1] = 1.0;
        ImaginaryUnit(Paravector::new(0.0, v))
    }

    pub fn d(&self) -> usize {
        self.0.d()
    }

    pub fn components(&self) -> &[f64] {
        &self.0.vec
    }

    pub fn as_paravector(&self) -> &Paravector {
        &self.0
    }

    pub fn to_clifford(&self) -> CliffordNum {
        self.0.to_clifford()
    }

    pub fn negated(&self) -> ImaginaryUnit {
        ImaginaryUnit(Paravector::new(0.0, self.0.vec.iter().map(|v| -v).collect()))
    }

    /// A unit `I` with `I J = -J I`.
    ///
    /// With `k` the first index where `J_k != 0` and `m` the first other
    /// index, `I` is the normalization of `J_k e_m - J_m e_k`, which is
    /// orthogonal to `J` as a 1-vector and hence anticommutes with it.
    pub fn anticommuting_unit(&self) -> Result<ImaginaryUnit> {
        let d = self.d();
        if d < 2 {
            return Err(Error::NoAnticommutingUnit);
        }
        let j = &self.0.vec;
        let k = j.iter().position(|c| *c != 0.0).expect("unit vector has a nonzero entry");
        let m = if k == 0 { 1 } else { 0 };
        let mut v = vec![0.0; d];
        v[m] = j[k];
        v[k] = -j[m];
        let unit = ImaginaryUnit::normalized(v)?;

        let a = unit.to_clifford();
        let b = self.to_clifford();
        let anti = &(&a * &b) + &(&b * &a);
        assert!(anti.abs() <= 1e-12, "constructed unit fails to anticommute: {anti:?}");
        Ok(unit)
    }
}

/// The sphere `[s] = { x + J r : J in S }`, with a multiplicity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralSphere {
    pub x: f64,
    pub r: f64,
    pub multiplicity: usize,
}

impl SpectralSphere {
    pub fn new(x: f64, r: f64, multiplicity: usize) -> Self {
        SpectralSphere { x, r: r.abs(), multiplicity }
    }

    pub fn of(s: &Paravector) -> Self {
        let (x, r) = s.sphere_coords();
        SpectralSphere::new(x, r, 1)
    }

    /// Distance in the `(x, r)` half-plane.
    pub fn distance_to(&self, x: f64, r: f64) -> f64 {
        ((self.x - x) * (self.x - x) + (self.r - r) * (self.r - r)).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(d: usize, gens: &[usize]) -> CliffordNum {
        CliffordNum::blade(d, BladeIndex::from_generators(gens), 1.0)
    }

    #[test]
    fn blade_product_examples() {
        assert_eq!(blade_product(BladeIndex(0), BladeIndex(0)), (1, BladeIndex(0)));
        let e1 = BladeIndex::from_generators(&[1]);
        assert_eq!(blade_product(e1, e1), (-1, BladeIndex(0)));
        let e12 = BladeIndex::from_generators(&[1, 2]);
        assert_eq!(blade_product(e12, e1), (1, BladeIndex::from_generators(&[2])));
    }

    #[test]
    fn product_examples() {
        assert_eq!(&e(2, &[1]) * &e(2, &[2]), e(2, &[1, 2]));
        assert_eq!(&e(2, &[2]) * &e(2, &[1]), -e(2, &[1, 2]));
        let a = &CliffordNum::one(1) + &e(1, &[1]);
        let b = &CliffordNum::one(1) - &e(1, &[1]);
        assert_eq!(&a * &b, CliffordNum::scalar(1, 2.0));
    }

    #[test]
    fn mismatched_dimensions_are_rejected() {
        let err = CliffordNum::one(2).try_mul(&CliffordNum::one(3)).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { left: 2, right: 3 });
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(CliffordNum::scalar(3, 2.5).conjugate(), CliffordNum::scalar(3, 2.5));
        assert_eq!(e(2, &[1]).conjugate(), -e(2, &[1]));
        assert_eq!(e(2, &[1, 2]).conjugate(), -e(2, &[1, 2]));
        // grade 3: (-1)^6 = +1
        assert_eq!(e(3, &[1, 2, 3]).conjugate(), e(3, &[1, 2, 3]));
    }

    #[test]
    fn abs_examples() {
        assert_eq!(e(2, &[1, 2]).abs(), 1.0);
        let s = &CliffordNum::one(1) + &e(1, &[1]);
        assert!((s.abs() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(CliffordNum::zero(3).abs(), 0.0);
    }

    #[test]
    fn paravector_inverse_examples() {
        let one = Paravector::real(2, 1.0);
        assert_eq!(one.inverse().unwrap(), one);
        let e1 = Paravector::new(0.0, vec![1.0, 0.0]);
        assert_eq!(e1.inverse().unwrap(), Paravector::new(0.0, vec![-1.0, 0.0]));
        let s = Paravector::new(3.0, vec![0.0, 4.0]);
        let inv = s.inverse().unwrap();
        assert_eq!(inv, Paravector::new(3.0 / 25.0, vec![0.0, -4.0 / 25.0]));
        let prod = &s.to_clifford() * &inv.to_clifford();
        assert!(prod.distance(&CliffordNum::one(2)) < 1e-13);
        let prod = &inv.to_clifford() * &s.to_clifford();
        assert!(prod.distance(&CliffordNum::one(2)) < 1e-13);
        assert!(Paravector::real(2, 0.0).inverse().is_err());
    }

    #[test]
    fn anticommuting_unit_examples() {
        let j = ImaginaryUnit::generator(3, 1);
        let i = j.anticommuting_unit().unwrap();
        assert_eq!(i.to_clifford(), e(3, &[2]));

        let j = ImaginaryUnit::generator(3, 2);
        let i = j.anticommuting_unit().unwrap();
        let (a, b) = (i.to_clifford(), j.to_clifford());
        assert!((&(&a * &b) + &(&b * &a)).abs() < 1e-12);
        assert!((i.as_paravector().abs() - 1.0).abs() < 1e-15);

        let h = 0.5f64.sqrt();
        let j = ImaginaryUnit::new(vec![h, h, 0.0]).unwrap();
        let i = j.anticommuting_unit().unwrap();
        let (a, b) = (i.to_clifford(), j.to_clifford());
        assert!((&(&a * &b) + &(&b * &a)).abs() < 1e-12);
        assert!((&a * &a).distance(&CliffordNum::scalar(3, -1.0)) < 1e-12);

        assert_eq!(
            ImaginaryUnit::generator(1, 1).anticommuting_unit(),
            Err(Error::NoAnticommutingUnit)
        );
    }

    #[test]
    fn nrd_membership_examples() {
        let p = Paravector::new(0.3, vec![1.0, -2.0, 0.5]).to_clifford();
        assert!(p.in_nrd(1e-12));
        assert!(e(2, &[1, 2]).in_nrd(1e-12));
        // (1 + e123)(1 + e123)‾ = (1 + e123)(1 + e123) = 2 + 2 e123, not real
        let s = &CliffordNum::one(3) + &e(3, &[1, 2, 3]);
        let prod = &s * &s.conjugate();
        assert!((prod.coeff(BladeIndex(0b111)) - 2.0).abs() < 1e-15);
        assert!(!s.in_nrd(1e-12));
    }
}
