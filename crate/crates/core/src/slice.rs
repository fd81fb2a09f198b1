//! Slice hyperholomorphic functions given by stem components `(f0, f1)`.
//!
//! A left function evaluates as `f(x + J y) = f0(x, y) + J f1(x, y)`, a right
//! one as `f0 + f1 J`. The concrete universe is finite sums of real rational
//! functions `g_k` with one Clifford constant per term: `Σ g_k(s) b_k` for
//! left functions and `Σ a_k g_k(s)` for right ones.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use nalgebra::{Complex, DMatrix};
#[allow(unused_imports)]
use num_traits::Float;

use crate::clifford::{CliffordNum, ImaginaryUnit, Paravector};
use crate::error::{Error, Result};
use crate::spectral::real_matrix_eigenvalues;

type C64 = Complex<f64>;

fn trim(mut p: Vec<f64>) -> Vec<f64> {
    while p.len() > 1 && *p.last().unwrap() == 0.0 {
        p.pop();
    }
    if p.is_empty() {
        p.push(0.0);
    }
    p
}

fn horner(p: &[f64], z: C64) -> C64 {
    p.iter().rev().fold(C64::new(0.0, 0.0), |acc, &c| acc * z + C64::new(c, 0.0))
}

fn horner_abs(p: &[f64], r: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, &c| acc * r + c.abs())
}

fn convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn lowest_power(p: &[f64]) -> Option<usize> {
    p.iter().position(|c| *c != 0.0)
}

/// A real rational function `num(z) / den(z)`, coefficients in ascending powers.
#[derive(Clone, Debug, PartialEq)]
pub struct Rational {
    num: Vec<f64>,
    den: Vec<f64>,
}

impl Rational {
    pub fn new(num: Vec<f64>, den: Vec<f64>) -> Result<Self> {
        let num = trim(num);
        let den = trim(den);
        if den.iter().all(|c| *c == 0.0) {
            return Err(Error::InvalidArgument("zero denominator polynomial".into()));
        }
        if num.iter().chain(&den).any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument("non-finite polynomial coefficient".into()));
        }
        Ok(Rational { num, den })
    }

    pub fn polynomial(coeffs: Vec<f64>) -> Self {
        Rational::new(coeffs, vec![1.0]).expect("unit denominator")
    }

    pub fn constant(c: f64) -> Self {
        Self::polynomial(vec![c])
    }

    /// `z^k`.
    pub fn power(k: usize) -> Self {
        let mut c = vec![0.0; k + 1];
        c[k] = 1.0;
        Self::polynomial(c)
    }

    pub fn numerator(&self) -> &[f64] {
        &self.num
    }

    pub fn denominator(&self) -> &[f64] {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| *c == 0.0)
    }

    pub fn mul(&self, other: &Rational) -> Rational {
        Rational { num: convolve(&self.num, &other.num), den: convolve(&self.den, &other.den) }
    }

    pub fn eval_complex(&self, z: C64) -> Result<C64> {
        let den = horner(&self.den, z);
        let scale = horner_abs(&self.den, z.re.hypot(z.im));
        if den.re.hypot(den.im) <= 1e-14 * scale {
            return Err(Error::DomainViolation(alloc::format!(
                "pole of rational function at {} + {}i",
                z.re,
                z.im
            )));
        }
        Ok(horner(&self.num, z) / den)
    }

    /// Poles as points `(x, y)` with `y >= 0`, one per conjugate pair.
    pub fn poles(&self) -> Vec<(f64, f64)> {
        let lo = lowest_power(&self.den).unwrap_or(0);
        let den = &self.den[lo..];
        let deg = den.len() - 1;
        let mut out: Vec<(f64, f64)> = Vec::new();
        if lo > 0 {
            out.push((0.0, 0.0));
        }
        if deg == 0 {
            return out;
        }
        let lead = den[deg];
        let mut comp = DMatrix::<f64>::zeros(deg, deg);
        for i in 1..deg {
            comp[(i, i - 1)] = 1.0;
        }
        for i in 0..deg {
            comp[(i, deg - 1)] = -den[i] / lead;
        }
        let roots = real_matrix_eigenvalues(&comp).unwrap_or_default();
        // multiple roots come out perturbed by O(eps^{1/k}); average each cluster
        let mut clusters: Vec<(f64, f64, usize)> = Vec::new();
        for (x, y) in roots {
            let near = clusters.iter_mut().find(|c| {
                let (cx, cy) = (c.0 / c.2 as f64, c.1 / c.2 as f64);
                (cx - x).hypot(cy - y) <= 1e-4 * (1.0 + x.hypot(y))
            });
            match near {
                Some(c) => {
                    c.0 += x;
                    c.1 += y;
                    c.2 += 1;
                }
                None => clusters.push((x, y, 1)),
            }
        }
        for (sx, sy, k) in clusters {
            let (x, y) = (sx / k as f64, sy / k as f64);
            if y < 0.0 && y.abs() > 1e-10 * (1.0 + x.abs()) {
                continue;
            }
            let y = if y.abs() <= 1e-10 * (1.0 + x.abs()) { 0.0 } else { y };
            let x = if x.abs() <= 1e-14 * (1.0 + y) { 0.0 } else { x };
            if !out.iter().any(|p| (p.0 - x).abs() + (p.1 - y).abs() <= 1e-9 * (1.0 + x.abs())) {
                out.push((x, y));
            }
        }
        out
    }

    /// Order of vanishing at the origin (negative for a pole).
    pub fn order_at_zero(&self) -> i32 {
        match lowest_power(&self.num) {
            None => i32::MAX,
            Some(k) => k as i32 - lowest_power(&self.den).unwrap_or(0) as i32,
        }
    }

    /// Growth order at infinity, `deg num - deg den`.
    pub fn order_at_infinity(&self) -> i32 {
        if self.is_zero() {
            return i32::MIN;
        }
        (self.num.len() as i32 - 1) - (self.den.len() as i32 - 1)
    }

    /// `lim_{|z|→∞}`, or `None` when the function grows.
    pub fn limit_at_infinity(&self) -> Option<f64> {
        match self.order_at_infinity() {
            k if k < 0 => Some(0.0),
            0 => Some(self.num[self.num.len() - 1] / self.den[self.den.len() - 1]),
            _ => None,
        }
    }
}

/// The regularizer `s^m / (1 + s^2)^m`.
pub fn regularizer_rational(m: usize) -> Result<Rational> {
    if m < 1 {
        return Err(Error::InvalidArgument("regularizer needs m >= 1".into()));
    }
    let mut den = vec![1.0];
    for _ in 0..m {
        den = convolve(&den, &[1.0, 0.0, 1.0]);
    }
    Rational::new(Rational::power(m).num, den)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chirality {
    Left,
    Right,
    Intrinsic,
}

impl Chirality {
    pub fn flipped(self) -> Chirality {
        match self {
            Chirality::Left => Chirality::Right,
            Chirality::Right => Chirality::Left,
            Chirality::Intrinsic => Chirality::Intrinsic,
        }
    }
}

/// One summand `g(s) b` (left) or `a g(s)` (right).
#[derive(Clone, Debug, PartialEq)]
pub struct SliceTerm {
    pub g: Rational,
    pub coef: CliffordNum,
}

pub type StemFn = dyn Fn(f64, f64) -> (CliffordNum, CliffordNum) + Send + Sync;

#[derive(Clone)]
pub enum Stem {
    Terms(Vec<SliceTerm>),
    Custom(Arc<StemFn>),
}

impl fmt::Debug for Stem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stem::Terms(t) => f.debug_tuple("Terms").field(t).finish(),
            Stem::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// Where a function is declared holomorphic.
#[derive(Clone, Debug, PartialEq)]
pub enum Domain {
    Full,
    /// Everything except the closed double sector of half-angle `omega_f` around the poles.
    PuncturedSector(f64),
    /// The complement of finitely many spheres `(x, r)`.
    ComplementOf(Vec<(f64, f64)>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GrowthClass {
    /// Integrable against `dt/t` on sector rays.
    Sh0,
    /// Bounded by `C (|s|^α + |s|^{-α})`.
    ShPoly,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Growth {
    pub class: GrowthClass,
    pub c: f64,
    pub alpha: f64,
}

/// Orders, poles and limit read off a rational-term function.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalProfile {
    pub order_at_zero: i32,
    pub order_at_infinity: i32,
    pub poles: Vec<(f64, f64)>,
    pub limit_at_infinity: Option<CliffordNum>,
}

impl RationalProfile {
    /// Smallest angle `atan2(y, |x|)` of a pole, `π/2` without poles.
    /// Poles at the origin are ignored; they are handled by the order at zero.
    pub fn pole_angle(&self) -> f64 {
        self.poles
            .iter()
            .filter(|(x, y)| x.hypot(*y) > 0.0)
            .map(|(x, y)| y.atan2(x.abs()))
            .fold(core::f64::consts::FRAC_PI_2, f64::min)
    }

    /// Declared growth class of the rational form on sectors avoiding its poles.
    pub fn growth(&self) -> GrowthClass {
        if self.order_at_zero >= 1 && self.order_at_infinity <= -1 {
            GrowthClass::Sh0
        } else {
            GrowthClass::ShPoly
        }
    }

    /// Smallest `α` with `|f| <= C (|s|^α + |s|^{-α})`.
    pub fn poly_alpha(&self) -> f64 {
        let at_zero = if self.order_at_zero == i32::MAX { 0 } else { -self.order_at_zero };
        let at_inf = if self.order_at_infinity == i32::MIN { 0 } else { self.order_at_infinity };
        at_zero.max(at_inf).max(0) as f64
    }
}

#[derive(Clone, Debug)]
pub struct SliceFunction {
    pub chirality: Chirality,
    pub d: usize,
    pub stem: Stem,
    pub domain: Domain,
    pub growth: Option<Growth>,
}

/// Compatibility tolerance for `f1(x, 0)`.
pub const COMPATIBILITY_TOL: f64 = 1e-10;

impl SliceFunction {
    /// Intrinsic function `g(s)` for a real rational `g`.
    pub fn intrinsic(d: usize, g: Rational) -> Self {
        Self::from_terms(Chirality::Intrinsic, d, vec![SliceTerm { g, coef: CliffordNum::one(d) }])
            .expect("scalar coefficient is consistent")
    }

    /// Left function `g(s) b`.
    pub fn left(g: Rational, b: CliffordNum) -> Self {
        let d = b.d();
        Self::from_terms(Chirality::Left, d, vec![SliceTerm { g, coef: b }]).expect("single term")
    }

    /// Right function `a g(s)`.
    pub fn right(a: CliffordNum, g: Rational) -> Self {
        let d = a.d();
        Self::from_terms(Chirality::Right, d, vec![SliceTerm { g, coef: a }]).expect("single term")
    }

    pub fn from_terms(chirality: Chirality, d: usize, terms: Vec<SliceTerm>) -> Result<Self> {
        for t in &terms {
            if t.coef.d() != d {
                return Err(Error::DimensionMismatch { left: d, right: t.coef.d() });
            }
            if chirality == Chirality::Intrinsic && !t.coef.coeffs()[1..].iter().all(|c| *c == 0.0) {
                return Err(Error::ChiralityMismatch("intrinsic terms need real coefficients"));
            }
        }
        let poles: Vec<(f64, f64)> = {
            let mut all: Vec<(f64, f64)> = Vec::new();
            for t in &terms {
                for p in t.g.poles() {
                    if !all.contains(&p) {
                        all.push(p);
                    }
                }
            }
            all
        };
        let domain = if poles.is_empty() { Domain::Full } else { Domain::ComplementOf(poles) };
        let mut f = SliceFunction { chirality, d, stem: Stem::Terms(terms), domain, growth: None };
        if let Some(p) = f.rational_profile() {
            let class = p.growth();
            f.growth = Some(Growth { class, c: f64::NAN, alpha: p.poly_alpha() });
        }
        Ok(f)
    }

    pub fn custom(chirality: Chirality, d: usize, stem: Arc<StemFn>) -> Self {
        SliceFunction { chirality, d, stem: Stem::Custom(stem), domain: Domain::Full, growth: None }
    }

    pub fn terms(&self) -> Option<&[SliceTerm]> {
        match &self.stem {
            Stem::Terms(t) => Some(t),
            Stem::Custom(_) => None,
        }
    }

    /// Stem components at `(x, y)`.
    pub fn stem_at(&self, x: f64, y: f64) -> Result<(CliffordNum, CliffordNum)> {
        match &self.stem {
            Stem::Custom(f) => Ok(f(x, y)),
            Stem::Terms(terms) => {
                let mut f0 = CliffordNum::zero(self.d);
                let mut f1 = CliffordNum::zero(self.d);
                let z = C64::new(x, y);
                for t in terms {
                    let w = t.g.eval_complex(z)?;
                    for (k, c) in t.coef.coeffs().iter().enumerate() {
                        f0.coeffs_mut()[k] += w.re * c;
                        f1.coeffs_mut()[k] += w.im * c;
                    }
                }
                Ok((f0, f1))
            }
        }
    }

    fn check_domain(&self, x: f64, y: f64) -> Result<()> {
        match &self.domain {
            Domain::Full => Ok(()),
            Domain::ComplementOf(spheres) => {
                for &(px, pr) in spheres {
                    if (px - x).hypot(pr - y.abs()) <= 1e-12 * (1.0 + px.hypot(pr)) {
                        return Err(Error::DomainViolation(alloc::format!(
                            "({x}, {}) lies on an excluded sphere",
                            y.abs()
                        )));
                    }
                }
                Ok(())
            }
            Domain::PuncturedSector(omega) => {
                let r = x.hypot(y);
                if r == 0.0 || y.abs().atan2(x.abs()) <= *omega {
                    Err(Error::DomainViolation(alloc::format!(
                        "({x}, {}) lies in the excluded sector",
                        y.abs()
                    )))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// `f(x + J y)` for a unit `J` and real `y` of either sign.
    pub fn eval_slice(&self, x: f64, y: f64, unit: &ImaginaryUnit) -> Result<CliffordNum> {
        self.check_domain(x, y)?;
        let (f0, f1) = self.stem_at(x, y)?;
        let j = unit.to_clifford();
        Ok(match self.chirality {
            Chirality::Right => &f0 + &(&f1 * &j),
            _ => &f0 + &(&j * &f1),
        })
    }

    /// `f(s)`; at real points `f1(x, 0)` must vanish.
    pub fn eval(&self, s: &Paravector) -> Result<CliffordNum> {
        if s.d() != self.d {
            return Err(Error::DimensionMismatch { left: self.d, right: s.d() });
        }
        match s.imag_unit() {
            Some(unit) => self.eval_slice(s.s0, s.imag_abs(), &unit),
            None => {
                self.check_domain(s.s0, 0.0)?;
                let (f0, f1) = self.stem_at(s.s0, 0.0)?;
                let bad = f1.abs();
                if bad > COMPATIBILITY_TOL {
                    return Err(Error::CompatibilityFailure(bad));
                }
                Ok(f0)
            }
        }
    }

    /// `f♯(s) = conj(f(s̄))`.
    pub fn sharp(&self) -> SliceFunction {
        let stem = match &self.stem {
            Stem::Terms(terms) => Stem::Terms(
                terms.iter().map(|t| SliceTerm { g: t.g.clone(), coef: t.coef.conjugate() }).collect(),
            ),
            Stem::Custom(f) => {
                let f = f.clone();
                Stem::Custom(Arc::new(move |x, y| {
                    let (a, b) = f(x, y);
                    (a.conjugate(), b.conjugate())
                }))
            }
        };
        SliceFunction {
            chirality: self.chirality.flipped(),
            d: self.d,
            stem,
            domain: self.domain.clone(),
            growth: self.growth,
        }
    }

    pub fn rational_profile(&self) -> Option<RationalProfile> {
        let terms = self.terms()?;
        let live: Vec<&SliceTerm> = terms.iter().filter(|t| !t.g.is_zero() && !t.coef.is_zero()).collect();
        let order_at_zero = live.iter().map(|t| t.g.order_at_zero()).min().unwrap_or(i32::MAX);
        let order_at_infinity = live.iter().map(|t| t.g.order_at_infinity()).max().unwrap_or(i32::MIN);
        let mut poles: Vec<(f64, f64)> = Vec::new();
        for t in &live {
            for p in t.g.poles() {
                if !poles.contains(&p) {
                    poles.push(p);
                }
            }
        }
        let mut limit = Some(CliffordNum::zero(self.d));
        for t in &live {
            limit = match (limit, t.g.limit_at_infinity()) {
                (Some(acc), Some(l)) => Some(&acc + &t.coef.scale(l)),
                _ => None,
            };
        }
        Some(RationalProfile { order_at_zero, order_at_infinity, poles, limit_at_infinity: limit })
    }

    /// Slice product with an intrinsic factor on either side.
    pub fn product(&self, other: &SliceFunction) -> Result<SliceFunction> {
        if self.d != other.d {
            return Err(Error::DimensionMismatch { left: self.d, right: other.d });
        }
        let (a, b) = match (self.terms(), other.terms()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::InvalidArgument("products need rational-term functions".into())),
        };
        let (chirality, scalar_first) = match (self.chirality, other.chirality) {
            (Chirality::Intrinsic, c) => (c, true),
            (c, Chirality::Intrinsic) => (c, false),
            _ => {
                return Err(Error::ChiralityMismatch(
                    "products need at least one intrinsic factor",
                ))
            }
        };
        let mut terms = Vec::new();
        for ta in a {
            for tb in b {
                let (scal, other_t) = if scalar_first { (ta, tb) } else { (tb, ta) };
                let c = other_t.coef.scale(scal.coef.scalar_part());
                terms.push(SliceTerm { g: ta.g.mul(&tb.g), coef: c });
            }
        }
        SliceFunction::from_terms(chirality, self.d, terms)
    }

    /// Pointwise sum; left and right functions cannot be mixed.
    pub fn sum(parts: &[SliceFunction]) -> Result<SliceFunction> {
        let first = parts.first().ok_or(Error::InvalidArgument("empty sum".into()))?;
        let d = first.d;
        let mut chirality = Chirality::Intrinsic;
        let mut terms = Vec::new();
        for p in parts {
            if p.d != d {
                return Err(Error::DimensionMismatch { left: d, right: p.d });
            }
            chirality = match (chirality, p.chirality) {
                (Chirality::Intrinsic, c) => c,
                (c, Chirality::Intrinsic) => c,
                (a, b) if a == b => a,
                _ => return Err(Error::ChiralityMismatch("cannot add left and right functions")),
            };
            terms.extend_from_slice(
                p.terms().ok_or(Error::InvalidArgument("sums need rational-term functions".into()))?,
            );
        }
        SliceFunction::from_terms(chirality, d, terms)
    }

    /// Pointwise Clifford conjugate `s ↦ conj(f(s))` evaluated at `s`.
    pub fn eval_conjugate(&self, s: &Paravector) -> Result<CliffordNum> {
        Ok(self.eval(s)?.conjugate())
    }
}

/// Residuals of the stem conditions on a sample grid.
#[derive(Clone, Debug, PartialEq)]
pub struct HolomorphyReport {
    pub symmetry: f64,
    pub cauchy_riemann: f64,
    /// Largest non-scalar stem part; only meaningful for intrinsic functions.
    pub non_real: f64,
    pub passed: bool,
}

pub const SYMMETRY_TOL: f64 = 1e-10;
pub const CAUCHY_RIEMANN_TOL: f64 = 1e-6;
pub const FD_STEP: f64 = 1e-5;

pub fn check_holomorphic(f: &SliceFunction, grid: &[(f64, f64)]) -> Result<HolomorphyReport> {
    let h = FD_STEP;
    let (mut symmetry, mut cr, mut non_real) = (0.0f64, 0.0f64, 0.0f64);
    for &(x, y) in grid {
        let (a0, a1) = f.stem_at(x, y)?;
        let (b0, b1) = f.stem_at(x, -y)?;
        symmetry = symmetry.max((&a0 - &b0).abs()).max((&a1 + &b1).abs());
        let (xp0, xp1) = f.stem_at(x + h, y)?;
        let (xm0, xm1) = f.stem_at(x - h, y)?;
        let (yp0, yp1) = f.stem_at(x, y + h)?;
        let (ym0, ym1) = f.stem_at(x, y - h)?;
        let dx0 = (&xp0 - &xm0).scale(0.5 / h);
        let dx1 = (&xp1 - &xm1).scale(0.5 / h);
        let dy0 = (&yp0 - &ym0).scale(0.5 / h);
        let dy1 = (&yp1 - &ym1).scale(0.5 / h);
        cr = cr.max((&dx0 - &dy1).abs()).max((&dy0 + &dx1).abs());
        if f.chirality == Chirality::Intrinsic {
            let nr = a0.coeffs()[1..].iter().chain(&a1.coeffs()[1..]).fold(0.0f64, |m, c| m.max(c.abs()));
            non_real = non_real.max(nr);
        }
    }
    let passed = symmetry <= SYMMETRY_TOL
        && cr <= CAUCHY_RIEMANN_TOL
        && (f.chirality != Chirality::Intrinsic || non_real <= SYMMETRY_TOL);
    Ok(HolomorphyReport { symmetry, cauchy_riemann: cr, non_real, passed })
}

/// The regularizer `e(s) = s^m / (1 + s^2)^m` as an intrinsic function on `R_d`.
pub fn regularizer(d: usize, m: usize) -> Result<SliceFunction> {
    Ok(SliceFunction::intrinsic(d, regularizer_rational(m)?))
}

/// Heuristic growth classification from log-log slopes along sector rays.
pub fn classify_growth(f: &SliceFunction, theta: f64) -> Result<Growth> {
    let delta = 1e-3;
    let a = (theta - delta).max(0.0);
    let unit = if f.d >= 1 {
        ImaginaryUnit::generator(f.d, 1)
    } else {
        return Err(Error::InvalidArgument("growth classification needs d >= 1".into()));
    };
    let radii: Vec<f64> = (0..=120).map(|k| 10f64.powf(-6.0 + 12.0 * k as f64 / 120.0)).collect();
    let (mut slope0, mut slope_inf) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut samples: Vec<(f64, f64)> = Vec::new();
    for phi in [a, -a, core::f64::consts::PI - a, core::f64::consts::PI + a] {
        let (c, s) = (phi.cos(), phi.sin());
        let mut vals = Vec::with_capacity(radii.len());
        for &t in &radii {
            let v = f.eval_slice(t * c, t * s, &unit)?.abs();
            vals.push(v);
            samples.push((t, v));
        }
        let slope = |i: usize, j: usize| {
            (vals[j].max(1e-300).ln() - vals[i].max(1e-300).ln()) / (radii[j].ln() - radii[i].ln())
        };
        slope0 = slope0.min(slope(0, 10));
        slope_inf = slope_inf.max(slope(110, 120));
    }
    let (class, alpha) = if slope0 > 0.5 && slope_inf < -0.5 {
        (GrowthClass::Sh0, 0.0)
    } else {
        let alpha = (-slope0).max(slope_inf).max(0.0);
        ((GrowthClass::ShPoly), (alpha * 1e3).round() / 1e3)
    };
    let c = samples
        .iter()
        .map(|&(t, v)| if alpha == 0.0 { v / 2.0 } else { v / (t.powf(alpha) + t.powf(-alpha)) })
        .fold(0.0, f64::max);
    Ok(Growth { class, c, alpha })
}

impl fmt::Display for Chirality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Chirality::Left => "left",
            Chirality::Right => "right",
            Chirality::Intrinsic => "intrinsic",
        })
    }
}

impl Chirality {
    pub fn parse(s: &str) -> Option<Chirality> {
        match s {
            "left" => Some(Chirality::Left),
            "right" => Some(Chirality::Right),
            "intrinsic" => Some(Chirality::Intrinsic),
            _ => None,
        }
    }
}

impl GrowthClass {
    pub fn name(self) -> String {
        match self {
            GrowthClass::Sh0 => "SH0".to_string(),
            GrowthClass::ShPoly => "SHpoly".to_string(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::BladeIndex;

    fn e(d: usize, gens: &[usize]) -> CliffordNum {
        CliffordNum::blade(d, BladeIndex::from_generators(gens), 1.0)
    }

    fn square(d: usize) -> SliceFunction {
        SliceFunction::intrinsic(d, Rational::power(2))
    }

    #[test]
    fn eval_examples() {
        let s = Paravector::new(0.0, vec![1.0, 0.0]);
        assert!(square(2).eval(&s).unwrap().distance(&CliffordNum::scalar(2, -1.0)) < 1e-15);
        let one = SliceFunction::intrinsic(3, Rational::constant(1.0));
        let s = Paravector::new(0.3, vec![1.0, -2.0, 0.1]);
        assert_eq!(one.eval(&s).unwrap(), CliffordNum::one(3));

        let a = e(2, &[2]);
        let f = SliceFunction::left(Rational::power(1), a.clone());
        let s = Paravector::new(0.7, vec![0.6, -0.8]);
        let direct = &s.to_clifford() * &a;
        assert!(f.eval(&s).unwrap().distance(&direct) < 1e-15);
        let f = SliceFunction::right(a.clone(), Rational::power(1));
        let direct = &a * &s.to_clifford();
        assert!(f.eval(&s).unwrap().distance(&direct) < 1e-15);
    }

    #[test]
    fn real_points_need_vanishing_odd_component() {
        let bad = SliceFunction::custom(
            Chirality::Left,
            1,
            Arc::new(|x, _y| (CliffordNum::scalar(1, x), CliffordNum::scalar(1, 1.0))),
        );
        assert!(matches!(bad.eval(&Paravector::real(1, 2.0)), Err(Error::CompatibilityFailure(_))));
    }

    #[test]
    fn sharp_examples() {
        let a = e(2, &[2]);
        let f = SliceFunction::left(Rational::power(1), a.clone());
        let fs = f.sharp();
        assert_eq!(fs.chirality, Chirality::Right);
        let s = Paravector::new(0.7, vec![0.6, -0.8]);
        let expect = &a.conjugate() * &s.to_clifford();
        assert!(fs.eval(&s).unwrap().distance(&expect) < 1e-15);
        let via_def = f.eval(&s.conjugate()).unwrap().conjugate();
        assert!(fs.eval(&s).unwrap().distance(&via_def) < 1e-15);
        let back = fs.sharp();
        assert!(back.eval(&s).unwrap().distance(&f.eval(&s).unwrap()) < 1e-15);

        let g = regularizer(2, 1).unwrap();
        assert!(g.sharp().eval(&s).unwrap().distance(&g.eval(&s).unwrap()) < 1e-15);
    }

    #[test]
    fn holomorphy_examples() {
        let grid: Vec<(f64, f64)> =
            (0..5).flat_map(|i| (0..5).map(move |j| (0.3 * i as f64 - 0.6, 0.25 * j as f64 + 0.1))).collect();
        let r = check_holomorphic(&square(2), &grid).unwrap();
        assert!(r.passed && r.cauchy_riemann <= 1e-8, "{r:?}");

        let bad = SliceFunction::custom(
            Chirality::Intrinsic,
            1,
            Arc::new(|x, y| (CliffordNum::scalar(1, x), CliffordNum::scalar(1, -y))),
        );
        assert!(!check_holomorphic(&bad, &grid).unwrap().passed);

        let sector: Vec<(f64, f64)> = (1..8)
            .flat_map(|k| {
                let t = 0.2 * k as f64;
                [(t * 0.3f64.cos(), t * 0.3f64.sin()), (-t * 0.2f64.cos(), t * 0.2f64.sin())]
            })
            .collect();
        assert!(check_holomorphic(&regularizer(1, 1).unwrap(), &sector).unwrap().passed);
    }

    #[test]
    fn regularizer_examples() {
        let e1 = regularizer(2, 1).unwrap();
        assert!((e1.eval(&Paravector::real(2, 1.0)).unwrap().scalar_part() - 0.5).abs() < 1e-15);
        let small = 1e-6;
        let v = e1.eval(&Paravector::real(2, small)).unwrap().scalar_part();
        assert!((v / small - 1.0).abs() < 1e-11);
        let e2 = regularizer(2, 2).unwrap();
        assert!(matches!(
            e2.eval(&Paravector::new(0.0, vec![1.0, 0.0])),
            Err(Error::DomainViolation(_))
        ));
        assert!(regularizer(2, 0).is_err());
        let p = e2.rational_profile().unwrap();
        assert_eq!(p.poles.len(), 1, "{:?}", p.poles);
        assert!(p.poles[0].0.abs() < 1e-12 && (p.poles[0].1 - 1.0).abs() < 1e-12);
        assert_eq!((p.order_at_zero, p.order_at_infinity), (2, -2));
    }

    #[test]
    fn growth_examples() {
        let g = classify_growth(&regularizer(1, 1).unwrap(), 1.2).unwrap();
        assert_eq!(g.class, GrowthClass::Sh0);
        let g = classify_growth(&SliceFunction::intrinsic(1, Rational::power(1)), 1.2).unwrap();
        assert_eq!((g.class, g.alpha), (GrowthClass::ShPoly, 1.0));
        let g = classify_growth(&SliceFunction::intrinsic(1, Rational::constant(1.0)), 1.2).unwrap();
        assert_eq!((g.class, g.alpha), (GrowthClass::ShPoly, 0.0));
    }

    #[test]
    fn products_and_sums() {
        let e1 = regularizer(2, 1).unwrap();
        let f = SliceFunction::left(Rational::power(1), e(2, &[1]));
        let ef = e1.product(&f).unwrap();
        assert_eq!(ef.chirality, Chirality::Left);
        let s = Paravector::new(0.4, vec![0.3, 0.9]);
        let direct = &e1.eval(&s).unwrap() * &f.eval(&s).unwrap();
        assert!(ef.eval(&s).unwrap().distance(&direct) < 1e-14);

        let g = SliceFunction::sum(&[f.clone(), square(2)]).unwrap();
        let direct = &f.eval(&s).unwrap() + &square(2).eval(&s).unwrap();
        assert!(g.eval(&s).unwrap().distance(&direct) < 1e-14);
        let r = SliceFunction::right(e(2, &[1]), Rational::power(1));
        assert!(SliceFunction::sum(&[f, r]).is_err());
    }
}
