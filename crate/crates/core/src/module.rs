//! The Clifford module `V = R^n ⊗ R_d`, its right-linear operators and
//! their real matrix representations.
//!
//! Real coordinates of a vector are laid out as `j * 2^d + A` for component
//! `j` and blade bitmask `A`.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
#[allow(unused_imports)]
use num_traits::Float;

use crate::clifford::{check_dim, conjugation_sign, mul_acc, sign_of, CliffordNum};
use crate::error::{Error, Result};

/// An element of `V`, stored in realified coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleVector {
    n: usize,
    d: usize,
    coords: Vec<f64>,
}

impl ModuleVector {
    pub fn zero(n: usize, d: usize) -> Self {
        ModuleVector { n, d, coords: vec![0.0; n << d] }
    }

    pub fn from_entries(entries: &[CliffordNum]) -> Result<Self> {
        let d = entries.first().map(|e| e.d()).unwrap_or(0);
        let mut coords = Vec::with_capacity(entries.len() << d);
        for e in entries {
            if e.d() != d {
                return Err(Error::DimensionMismatch { left: d, right: e.d() });
            }
            coords.extend_from_slice(e.coeffs());
        }
        Ok(ModuleVector { n: entries.len(), d, coords })
    }

    pub fn from_coords(n: usize, d: usize, coords: Vec<f64>) -> Result<Self> {
        check_dim(d)?;
        if coords.len() != n << d {
            return Err(Error::CoefficientLength { expected: n << d, found: coords.len() });
        }
        Ok(ModuleVector { n, d, coords })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn entry(&self, j: usize) -> CliffordNum {
        let dim = 1 << self.d;
        CliffordNum::from_coeffs(self.d, self.coords[j * dim..(j + 1) * dim].to_vec())
            .expect("entry length matches 2^d")
    }

    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    fn check_same(&self, other: &ModuleVector) -> Result<()> {
        if self.d != other.d {
            return Err(Error::DimensionMismatch { left: self.d, right: other.d });
        }
        if self.n != other.n {
            return Err(Error::ShapeMismatch { expected: self.n, found: other.n });
        }
        Ok(())
    }

    /// `v ↦ v s`, componentwise right multiplication.
    pub fn mul_right(&self, s: &CliffordNum) -> Result<ModuleVector> {
        if s.d() != self.d {
            return Err(Error::DimensionMismatch { left: self.d, right: s.d() });
        }
        let dim = 1 << self.d;
        let mut out = ModuleVector::zero(self.n, self.d);
        for j in 0..self.n {
            let r = j * dim..(j + 1) * dim;
            mul_acc(&self.coords[r.clone()], s.coeffs(), &mut out.coords[r]);
        }
        Ok(out)
    }

    /// `v ↦ s v`, componentwise left multiplication.
    pub fn mul_left(&self, s: &CliffordNum) -> Result<ModuleVector> {
        if s.d() != self.d {
            return Err(Error::DimensionMismatch { left: self.d, right: s.d() });
        }
        let dim = 1 << self.d;
        let mut out = ModuleVector::zero(self.n, self.d);
        for j in 0..self.n {
            let r = j * dim..(j + 1) * dim;
            mul_acc(s.coeffs(), &self.coords[r.clone()], &mut out.coords[r]);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &ModuleVector) -> Result<ModuleVector> {
        self.check_same(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect();
        Ok(ModuleVector { n: self.n, d: self.d, coords })
    }
}

/// Clifford-valued inner product `<v, w> = Σ_j conj(v_j) w_j`.
pub fn inner_product(v: &ModuleVector, w: &ModuleVector) -> Result<CliffordNum> {
    v.check_same(w)?;
    let dim = 1 << v.d;
    let mut out = CliffordNum::zero(v.d);
    let mut conj = vec![0.0; dim];
    for j in 0..v.n {
        let r = j * dim..(j + 1) * dim;
        for (a, c) in conj.iter_mut().enumerate() {
            *c = conjugation_sign(a) * v.coords[j * dim + a];
        }
        mul_acc(&conj, &w.coords[r], out.coeffs_mut());
    }
    Ok(out)
}

/// Scalar part of the inner product, the Euclidean dot product of coordinates.
pub fn sc_inner(v: &ModuleVector, w: &ModuleVector) -> Result<f64> {
    v.check_same(w)?;
    Ok(v.coords.iter().zip(&w.coords).map(|(a, b)| a * b).sum())
}

/// Where a realified matrix came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    LeftAction,
    RightMultiplication,
    Derived,
}

/// A real `N x N` matrix, `N = n 2^d`, acting on realified coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct RealifiedMatrix {
    pub n: usize,
    pub d: usize,
    pub matrix: DMatrix<f64>,
    pub provenance: Provenance,
}

impl RealifiedMatrix {
    pub fn size(&self) -> usize {
        self.n << self.d
    }

    pub fn is_invertible(&self, rel_tol: f64) -> bool {
        let sv = self.matrix.clone().singular_values();
        if sv.is_empty() {
            return true;
        }
        let max = sv.max();
        max > 0.0 && sv.min() > rel_tol * max
    }

    pub fn smallest_singular_value(&self) -> f64 {
        self.matrix.clone().singular_values().min()
    }

    /// Reads back a Clifford matrix; valid when the matrix commutes with all
    /// right multiplications, which every left action does.
    pub fn to_clifford(&self) -> CliffordMatrix {
        CliffordMatrix::from_realified_columns(self.n, self.d, &self.matrix)
    }
}

/// An `n x n` matrix over `R_d`, acting on `V` by `(Tv)_i = Σ_j T_ij v_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct CliffordMatrix {
    n: usize,
    d: usize,
    data: Vec<f64>,
}

impl CliffordMatrix {
    pub fn zero(n: usize, d: usize) -> Self {
        assert!(check_dim(d).is_ok(), "d = {d} too large");
        CliffordMatrix { n, d, data: vec![0.0; (n * n) << d] }
    }

    pub fn identity(n: usize, d: usize) -> Self {
        Self::scalar_identity(n, d, 1.0)
    }

    /// `c · Id` for a real `c`.
    pub fn scalar_identity(n: usize, d: usize, c: f64) -> Self {
        let mut m = Self::zero(n, d);
        for i in 0..n {
            m.data[(i * n + i) << d] = c;
        }
        m
    }

    /// Row-major entries.
    pub fn from_entries(n: usize, d: usize, entries: &[CliffordNum]) -> Result<Self> {
        check_dim(d)?;
        if entries.len() != n * n {
            return Err(Error::ShapeMismatch { expected: n * n, found: entries.len() });
        }
        let mut data = Vec::with_capacity((n * n) << d);
        for e in entries {
            if e.d() != d {
                return Err(Error::DimensionMismatch { left: d, right: e.d() });
            }
            data.extend_from_slice(e.coeffs());
        }
        Ok(CliffordMatrix { n, d, data })
    }

    pub fn diag(values: &[CliffordNum]) -> Result<Self> {
        let n = values.len();
        let d = values.first().map(|v| v.d()).unwrap_or(0);
        let mut m = Self::zero(n, d);
        for (i, v) in values.iter().enumerate() {
            m.set_entry(i, i, v)?;
        }
        Ok(m)
    }

    /// Reads entries from the columns at blade 0 of a realified left action.
    fn from_realified_columns(n: usize, d: usize, mat: &DMatrix<f64>) -> Self {
        let dim = 1 << d;
        let mut m = Self::zero(n, d);
        for i in 0..n {
            for j in 0..n {
                let off = (i * n + j) << d;
                for a in 0..dim {
                    m.data[off + a] = mat[(i * dim + a, j * dim)];
                }
            }
        }
        m
    }

    /// Builds from the `n` columns `X e_j` (module basis at the scalar blade)
    /// of a right-linear operator, given as an `N x n` real matrix.
    pub(crate) fn from_basis_images(n: usize, d: usize, cols: &DMatrix<f64>) -> Self {
        let dim = 1 << d;
        let mut m = Self::zero(n, d);
        for i in 0..n {
            for j in 0..n {
                let off = (i * n + j) << d;
                for a in 0..dim {
                    m.data[off + a] = cols[(i * dim + a, j)];
                }
            }
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn raw(&self) -> &[f64] {
        &self.data
    }

    pub fn entry_coeffs(&self, i: usize, j: usize) -> &[f64] {
        let off = (i * self.n + j) << self.d;
        &self.data[off..off + (1 << self.d)]
    }

    pub fn entry(&self, i: usize, j: usize) -> CliffordNum {
        CliffordNum::from_coeffs(self.d, self.entry_coeffs(i, j).to_vec())
            .expect("entry length matches 2^d")
    }

    pub fn set_entry(&mut self, i: usize, j: usize, v: &CliffordNum) -> Result<()> {
        if v.d() != self.d {
            return Err(Error::DimensionMismatch { left: self.d, right: v.d() });
        }
        let off = (i * self.n + j) << self.d;
        self.data[off..off + (1 << self.d)].copy_from_slice(v.coeffs());
        Ok(())
    }

    fn check_same(&self, other: &CliffordMatrix) -> Result<()> {
        if self.d != other.d {
            return Err(Error::DimensionMismatch { left: self.d, right: other.d });
        }
        if self.n != other.n {
            return Err(Error::ShapeMismatch { expected: self.n, found: other.n });
        }
        Ok(())
    }

    pub fn try_mul(&self, other: &CliffordMatrix) -> Result<CliffordMatrix> {
        self.check_same(other)?;
        let (n, d) = (self.n, self.d);
        let dim = 1 << d;
        let mut out = Self::zero(n, d);
        for i in 0..n {
            for j in 0..n {
                let o = (i * n + j) << d;
                let (_, tail) = out.data.split_at_mut(o);
                let dst = &mut tail[..dim];
                for k in 0..n {
                    mul_acc(self.entry_coeffs(i, k), other.entry_coeffs(k, j), dst);
                }
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &CliffordMatrix) -> CliffordMatrix {
        self.try_mul(other).expect("matrix shapes agree")
    }

    pub fn add(&self, other: &CliffordMatrix) -> CliffordMatrix {
        self.check_same(other).expect("matrix shapes agree");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        CliffordMatrix { n: self.n, d: self.d, data }
    }

    pub fn sub(&self, other: &CliffordMatrix) -> CliffordMatrix {
        self.check_same(other).expect("matrix shapes agree");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        CliffordMatrix { n: self.n, d: self.d, data }
    }

    /// `self += k * other`.
    pub fn axpy(&mut self, k: f64, other: &CliffordMatrix) {
        self.check_same(other).expect("matrix shapes agree");
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += k * b;
        }
    }

    pub fn scale(&self, k: f64) -> CliffordMatrix {
        CliffordMatrix { n: self.n, d: self.d, data: self.data.iter().map(|a| a * k).collect() }
    }

    /// The operator `v ↦ A(s v)`: every entry right-multiplied by `s`.
    pub fn mul_scalar_right(&self, s: &CliffordNum) -> CliffordMatrix {
        assert_eq!(s.d(), self.d);
        let dim = 1 << self.d;
        let mut out = Self::zero(self.n, self.d);
        for (src, dst) in self.data.chunks_exact(dim).zip(out.data.chunks_exact_mut(dim)) {
            mul_acc(src, s.coeffs(), dst);
        }
        out
    }

    /// The operator `v ↦ s (A v)`: every entry left-multiplied by `s`.
    pub fn mul_scalar_left(&self, s: &CliffordNum) -> CliffordMatrix {
        assert_eq!(s.d(), self.d);
        let dim = 1 << self.d;
        let mut out = Self::zero(self.n, self.d);
        for (src, dst) in self.data.chunks_exact(dim).zip(out.data.chunks_exact_mut(dim)) {
            mul_acc(s.coeffs(), src, dst);
        }
        out
    }

    pub fn apply(&self, v: &ModuleVector) -> Result<ModuleVector> {
        if v.d != self.d {
            return Err(Error::DimensionMismatch { left: self.d, right: v.d });
        }
        if v.n != self.n {
            return Err(Error::ShapeMismatch { expected: self.n, found: v.n });
        }
        let dim = 1 << self.d;
        let mut out = ModuleVector::zero(self.n, self.d);
        for i in 0..self.n {
            for j in 0..self.n {
                mul_acc(
                    self.entry_coeffs(i, j),
                    &v.coords[j * dim..(j + 1) * dim],
                    &mut out.coords[i * dim..(i + 1) * dim],
                );
            }
        }
        Ok(out)
    }

    /// `(T*)_ij = conj(T_ji)`.
    pub fn adjoint(&self) -> CliffordMatrix {
        let dim = 1 << self.d;
        let mut out = Self::zero(self.n, self.d);
        for i in 0..self.n {
            for j in 0..self.n {
                let src = self.entry_coeffs(j, i);
                let off = (i * self.n + j) << self.d;
                for (a, (dst, c)) in out.data[off..off + dim].iter_mut().zip(src).enumerate() {
                    *dst = conjugation_sign(a) * c;
                }
            }
        }
        out
    }

    /// Real matrix of `v ↦ T v`.
    pub fn realify_left(&self) -> RealifiedMatrix {
        let (n, d) = (self.n, self.d);
        let dim = 1 << d;
        let size = n << d;
        let mut m = DMatrix::<f64>::zeros(size, size);
        for i in 0..n {
            for j in 0..n {
                let t = self.entry_coeffs(i, j);
                for (a, &ta) in t.iter().enumerate() {
                    if ta == 0.0 {
                        continue;
                    }
                    for b in 0..dim {
                        m[(i * dim + (a ^ b), j * dim + b)] += sign_of(a, b) * ta;
                    }
                }
            }
        }
        RealifiedMatrix { n, d, matrix: m, provenance: Provenance::LeftAction }
    }

    /// Largest singular value of the realified matrix.
    pub fn operator_norm(&self) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        self.realify_left().matrix.singular_values().max()
    }

    /// Frobenius norm of the coefficient array.
    pub fn coeff_norm(&self) -> f64 {
        self.data.iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    /// Largest coefficient distance, useful for exact comparisons.
    pub fn max_abs_diff(&self, other: &CliffordMatrix) -> f64 {
        self.check_same(other).expect("matrix shapes agree");
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// Operator norm of `self - other`.
    pub fn distance(&self, other: &CliffordMatrix) -> f64 {
        self.sub(other).operator_norm()
    }
}

/// Real matrix of `v ↦ v s` on `V` with `n` components.
pub fn realify_right_mult(s: &CliffordNum, n: usize) -> RealifiedMatrix {
    let d = s.d();
    let dim = 1 << d;
    let size = n << d;
    let mut m = DMatrix::<f64>::zeros(size, size);
    for j in 0..n {
        for (a, &sa) in s.coeffs().iter().enumerate() {
            if sa == 0.0 {
                continue;
            }
            for b in 0..dim {
                m[(j * dim + (b ^ a), j * dim + b)] += sign_of(b, a) * sa;
            }
        }
    }
    RealifiedMatrix { n, d, matrix: m, provenance: Provenance::RightMultiplication }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::BladeIndex;

    fn e(d: usize, gens: &[usize]) -> CliffordNum {
        CliffordNum::blade(d, BladeIndex::from_generators(gens), 1.0)
    }

    fn sample(n: usize, d: usize, seed: u64) -> CliffordMatrix {
        let mut x = seed;
        let mut next = || {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((x >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let data = (0..(n * n) << d).map(|_| next()).collect();
        CliffordMatrix { n, d, data }
    }

    #[test]
    fn inner_product_examples() {
        let one = ModuleVector::from_entries(&[CliffordNum::one(2)]).unwrap();
        assert_eq!(inner_product(&one, &one).unwrap(), CliffordNum::one(2));
        let v = ModuleVector::from_entries(&[e(2, &[1])]).unwrap();
        let w = ModuleVector::from_entries(&[e(2, &[2])]).unwrap();
        assert_eq!(inner_product(&v, &w).unwrap(), -e(2, &[1, 2]));
        assert_eq!(sc_inner(&v, &w).unwrap(), 0.0);
    }

    #[test]
    fn adjoint_examples() {
        assert_eq!(CliffordMatrix::identity(3, 2).adjoint(), CliffordMatrix::identity(3, 2));
        let t = CliffordMatrix::diag(&[e(2, &[1])]).unwrap();
        assert_eq!(t.adjoint(), CliffordMatrix::diag(&[-e(2, &[1])]).unwrap());
        let t = sample(3, 2, 7);
        assert_eq!(t.adjoint().adjoint(), t);
    }

    #[test]
    fn realify_is_transpose_compatible_and_multiplicative() {
        let a = sample(3, 2, 1);
        let b = sample(3, 2, 2);
        let ra = a.realify_left().matrix;
        let rb = b.realify_left().matrix;
        assert!((a.adjoint().realify_left().matrix - ra.transpose()).amax() < 1e-13);
        assert!((a.mul(&b).realify_left().matrix - &ra * &rb).amax() < 1e-12);
        assert_eq!(CliffordMatrix::identity(2, 3).realify_left().matrix, DMatrix::identity(16, 16));
        assert_eq!(a.realify_left().to_clifford(), a);
    }

    #[test]
    fn right_multiplication_commutes_with_left_action() {
        let t = sample(2, 3, 5).realify_left().matrix;
        let j = e(3, &[2]);
        let m = realify_right_mult(&j, 2).matrix;
        assert!((&m * &m + DMatrix::<f64>::identity(16, 16)).amax() < 1e-14);
        assert!((&t * &m - &m * &t).amax() < 1e-12);
        let s = CliffordNum::from_coeffs(3, (0..8).map(|k| k as f64 - 3.5).collect()).unwrap();
        let m = realify_right_mult(&s, 2).matrix;
        assert!((&t * &m - &m * &t).amax() < 1e-12);
        assert_eq!(realify_right_mult(&CliffordNum::one(3), 2).matrix, DMatrix::identity(16, 16));
    }

    #[test]
    fn operator_norm_examples() {
        assert!((CliffordMatrix::identity(3, 2).operator_norm() - 1.0).abs() < 1e-14);
        let t = sample(3, 3, 11);
        assert!((t.operator_norm() - t.adjoint().operator_norm()).abs() < 1e-12);
    }
}
