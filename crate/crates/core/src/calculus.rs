//! S-functional calculi by contour quadrature on a slice plane `C_J`.
//!
//! The kernel is `S_L^{-1}(s,T) ds_J f(s)` (left) or `f(s) ds_J S_R^{-1}(s,T)`
//! (right) with `ds_J = s'(t) (-J) dt`, scaled by `1/(2π)`. Constants multiply
//! operators entrywise on the written side.
//!
//! Reported results use the requested resolution (`N` circle nodes, `P`
//! panels per ray); the error estimate is the operator-norm difference to the
//! doubled resolution, floored by a roundoff bound, plus the ray truncation
//! estimate.
//!
//! In finite dimension every operator is closed, so the closure in the right
//! H∞ formula is the plain product `(fe)(T) e(T)^{-1}`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use nalgebra::DMatrix;
#[allow(unused_imports)]
use num_traits::Float;

use crate::clifford::{CliffordNum, ImaginaryUnit, Paravector};
use crate::error::{Error, Result};
use crate::module::{CliffordMatrix, Provenance, RealifiedMatrix};
use crate::quadrature::composite_gauss;
use crate::slice::{Chirality, GrowthClass, Rational, SliceFunction};
use crate::spectral::{spectrum_exact, ResolventKernel, SpectralSet};

pub const DEFAULT_CIRCLE_NODES: usize = 512;
pub const DEFAULT_PANELS: usize = 64;
pub const DEFAULT_ORDER: usize = 8;
pub const DEFAULT_MAX_ERROR: f64 = 1e-4;
/// Relative size of the neglected ray tails.
pub const TAIL_TOL: f64 = 1e-9;
/// Required relative clearance between a circle and the spectrum.
pub const CIRCLE_MARGIN: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Calculus {
    Bounded,
    Unbounded,
    Omega,
    Hinf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CalculusKind {
    pub calculus: Calculus,
    pub side: Side,
}

impl CalculusKind {
    pub const ALL: [CalculusKind; 8] = [
        CalculusKind { calculus: Calculus::Bounded, side: Side::Left },
        CalculusKind { calculus: Calculus::Bounded, side: Side::Right },
        CalculusKind { calculus: Calculus::Unbounded, side: Side::Left },
        CalculusKind { calculus: Calculus::Unbounded, side: Side::Right },
        CalculusKind { calculus: Calculus::Omega, side: Side::Left },
        CalculusKind { calculus: Calculus::Omega, side: Side::Right },
        CalculusKind { calculus: Calculus::Hinf, side: Side::Left },
        CalculusKind { calculus: Calculus::Hinf, side: Side::Right },
    ];

    pub fn name(self) -> &'static str {
        match (self.calculus, self.side) {
            (Calculus::Bounded, Side::Left) => "bounded-L",
            (Calculus::Bounded, Side::Right) => "bounded-R",
            (Calculus::Unbounded, Side::Left) => "unbounded-L",
            (Calculus::Unbounded, Side::Right) => "unbounded-R",
            (Calculus::Omega, Side::Left) => "omega-L",
            (Calculus::Omega, Side::Right) => "omega-R",
            (Calculus::Hinf, Side::Left) => "hinf-L",
            (Calculus::Hinf, Side::Right) => "hinf-R",
        }
    }

    pub fn parse(s: &str) -> Option<CalculusKind> {
        Self::ALL.iter().copied().find(|k| k.name() == s)
    }

    pub fn flipped(self) -> CalculusKind {
        let side = match self.side {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        };
        CalculusKind { calculus: self.calculus, side }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ContourKind {
    Circle { center: f64, radius: f64 },
    SectorRays { phi: f64, r_in: f64, r_out: f64 },
}

/// A conjugation-symmetric path on the slice plane `C_J`.
#[derive(Clone, Debug)]
pub struct Contour {
    pub kind: ContourKind,
    pub unit: ImaginaryUnit,
    /// Trapezoid nodes on a circle.
    pub nodes: usize,
    /// Gauss–Legendre panels per ray.
    pub panels: usize,
    /// Nodes per panel.
    pub order: usize,
}

#[derive(Clone, Debug)]
pub struct QuadOptions {
    pub nodes: usize,
    pub panels: usize,
    pub order: usize,
    pub max_error: f64,
    pub unit: Option<ImaginaryUnit>,
    /// `(center, radius)` overriding the automatic circle.
    pub circle: Option<(f64, f64)>,
    pub phi: Option<f64>,
    /// `(r_in, r_out)` overriding the truncation radii.
    pub radii: Option<(f64, f64)>,
    pub regularizer_order: Option<usize>,
    /// Fault injection: negate `ds_J`.
    pub flip_ds_sign: bool,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            nodes: DEFAULT_CIRCLE_NODES,
            panels: DEFAULT_PANELS,
            order: DEFAULT_ORDER,
            max_error: DEFAULT_MAX_ERROR,
            unit: None,
            circle: None,
            phi: None,
            radii: None,
            regularizer_order: None,
            flip_ds_sign: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CalculusResult {
    pub operator: CliffordMatrix,
    pub kind: CalculusKind,
    /// Total error estimate, truncation included.
    pub estimate: f64,
    pub truncation: f64,
    pub contour: ContourKind,
    pub nodes_used: usize,
    /// H∞ only: `‖e(T) - T^m (1 + T^2)^{-m}‖ / max(1, ‖e(T)‖)`.
    pub regularizer_check: Option<f64>,
    pub regularizer_order: Option<usize>,
}

struct Node {
    s: Paravector,
    /// `w s'(t) (-J) / (2π)` in the reported rule.
    reported: Option<CliffordNum>,
    /// The same in the refined rule.
    refined: Option<CliffordNum>,
}

fn side_for(f: &SliceFunction, side: Side) -> Result<Side> {
    match (f.chirality, side) {
        (Chirality::Left, Side::Right) => {
            Err(Error::ChiralityMismatch("left function with the right calculus"))
        }
        (Chirality::Right, Side::Left) => {
            Err(Error::ChiralityMismatch("right function with the left calculus"))
        }
        _ => Ok(side),
    }
}

fn default_unit(d: usize, opts: &QuadOptions) -> Result<ImaginaryUnit> {
    match &opts.unit {
        Some(u) if u.d() != d => Err(Error::DimensionMismatch { left: d, right: u.d() }),
        Some(u) => Ok(u.clone()),
        None if d == 0 => Err(Error::InvalidArgument("contour quadrature needs d >= 1".into())),
        None => Ok(ImaginaryUnit::generator(d, 1)),
    }
}

/// `a + J b` as a Clifford number.
fn slice_number(a: f64, b: f64, unit: &ImaginaryUnit) -> CliffordNum {
    let mut z = unit.to_clifford().scale(b);
    z.coeffs_mut()[0] = a;
    z
}

fn circle_nodes(center: f64, radius: f64, n: usize, unit: &ImaginaryUnit, sign: f64) -> Vec<Node> {
    // the reported rule takes every other node of the 2n-point rule
    let fine = 2 * n;
    (0..fine)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / fine as f64;
            let (c, s) = (t.cos(), t.sin());
            // s'(t)(-J) = r e^{Jt}
            let dir = slice_number(c, s, unit);
            let refined = dir.scale(sign * radius / fine as f64);
            let reported = if k % 2 == 0 { Some(dir.scale(sign * radius / n as f64)) } else { None };
            Node {
                s: Paravector::on_slice(center + radius * c, radius * s, unit),
                reported,
                refined: Some(refined),
            }
        })
        .collect()
}

/// Rays of the double sector boundary, each with its orientation sign.
fn rays(phi: f64) -> [(f64, f64); 4] {
    [(-phi, 1.0), (phi, -1.0), (PI - phi, 1.0), (PI + phi, -1.0)]
}

fn ray_nodes(
    phi: f64,
    r_in: f64,
    r_out: f64,
    panels: usize,
    order: usize,
    unit: &ImaginaryUnit,
    sign: f64,
) -> Vec<Node> {
    let (a, b) = (r_in.ln(), r_out.ln());
    let coarse = composite_gauss(a, b, panels, order);
    let fine = composite_gauss(a, b, 2 * panels, order);
    let mut out = Vec::with_capacity(4 * (coarse.len() + fine.len()));
    for (alpha, orient) in rays(phi) {
        let (ca, sa) = (alpha.cos(), alpha.sin());
        // e^{J alpha}(-J) = sin(alpha) - J cos(alpha)
        let dir = slice_number(sa, -ca, unit);
        for (rule, is_fine) in [(&coarse, false), (&fine, true)] {
            for &(u, w) in rule.iter() {
                let t = u.exp();
                let c = dir.scale(sign * orient * w * t / (2.0 * PI));
                let (reported, refined) = if is_fine { (None, Some(c)) } else { (Some(c), None) };
                out.push(Node { s: Paravector::on_slice(t * ca, t * sa, unit), reported, refined });
            }
        }
    }
    out
}

struct Accumulated {
    reported: CliffordMatrix,
    refined: CliffordMatrix,
    roundoff: f64,
    evaluations: usize,
}

/// Sums the kernel over the nodes for both rules at once.
fn accumulate(kernel: &ResolventKernel, f: &SliceFunction, side: Side, nodes: &[Node]) -> Result<Accumulated> {
    let t = kernel.operator();
    let (n, d) = (t.n(), t.d());
    let t_norm = t.coeff_norm();
    let growth = (1u64 << d) as f64;
    let mut acc_a = [CliffordMatrix::zero(n, d), CliffordMatrix::zero(n, d)];
    let mut acc_b = [CliffordMatrix::zero(n, d), CliffordMatrix::zero(n, d)];
    let mut magnitude = 0.0;
    for node in nodes {
        let q_inv = kernel.q_inverse(&node.s)?;
        let fs = f.eval(&node.s)?;
        let sbar = node.s.conjugate().to_clifford();
        let q_norm = q_inv.coeff_norm();
        for (slot, weight) in [&node.reported, &node.refined].into_iter().enumerate() {
            let Some(c) = weight else { continue };
            match side {
                Side::Left => {
                    let cf = c * &fs;
                    acc_a[slot].axpy(1.0, &q_inv.mul_scalar_right(&(&sbar * &cf)));
                    acc_b[slot].axpy(1.0, &q_inv.mul_scalar_right(&cf));
                    if slot == 0 {
                        magnitude += q_norm * (node.s.abs() + t_norm) * cf.abs();
                    }
                }
                Side::Right => {
                    let fc = &fs * c;
                    acc_a[slot].axpy(1.0, &q_inv.mul_scalar_left(&(&fc * &sbar)));
                    acc_b[slot].axpy(1.0, &q_inv.mul_scalar_left(&fc));
                    if slot == 0 {
                        magnitude += q_norm * (node.s.abs() + t_norm) * fc.abs();
                    }
                }
            }
        }
    }
    let [a0, a1] = acc_a;
    let [b0, b1] = acc_b;
    let (reported, refined) = match side {
        Side::Left => (a0.sub(&t.mul(&b0)), a1.sub(&t.mul(&b1))),
        Side::Right => (a0.sub(&b0.mul(t)), a1.sub(&b1.mul(t))),
    };
    Ok(Accumulated { reported, refined, roundoff: 64.0 * f64::EPSILON * growth * magnitude, evaluations: nodes.len() })
}

#[allow(clippy::too_many_arguments)]
fn finish(
    operator: CliffordMatrix,
    diff: f64,
    roundoff: f64,
    truncation: f64,
    kind: CalculusKind,
    contour: ContourKind,
    nodes_used: usize,
    max_error: f64,
) -> Result<CalculusResult> {
    let estimate = diff.max(roundoff) + truncation;
    if !(estimate <= max_error) {
        return Err(Error::QuadratureTolerance { estimate, max: max_error });
    }
    Ok(CalculusResult {
        operator,
        kind,
        estimate,
        truncation,
        contour,
        nodes_used,
        regularizer_check: None,
        regularizer_order: None,
    })
}

fn point_modulus(x: f64, r: f64, center: f64) -> f64 {
    (x - center).hypot(r)
}

/// Picks a circle around the spectrum that keeps the poles of `f` outside.
fn bounded_circle(t: &CliffordMatrix, spec: &SpectralSet, f: &SliceFunction, opts: &QuadOptions) -> Result<(f64, f64)> {
    if let Some(c) = opts.circle {
        return Ok(c);
    }
    let poles = f.rational_profile().map(|p| p.poles).unwrap_or_default();
    let inner = spec.spheres.iter().map(|s| point_modulus(s.x, s.r, 0.0)).fold(0.0, f64::max);
    let outer = poles.iter().map(|p| point_modulus(p.0, p.1, 0.0)).fold(f64::INFINITY, f64::min);
    let preferred = 1.25 * t.operator_norm().max(1e-3);
    if preferred * 1.05 < outer {
        return Ok((0.0, preferred));
    }
    let r = (inner.max(1e-3) * outer).sqrt();
    if inner < r * (1.0 - CIRCLE_MARGIN) && r * 1.05 < outer {
        Ok((0.0, r))
    } else {
        Err(Error::Contour("no circle centered at 0 separates the spectrum from the poles of f".into()))
    }
}

fn check_circle_encloses(spec: &SpectralSet, center: f64, radius: f64) -> Result<()> {
    if !(radius > 0.0) {
        return Err(Error::Contour("circle radius must be positive".into()));
    }
    for s in &spec.spheres {
        if point_modulus(s.x, s.r, center) > (1.0 - CIRCLE_MARGIN) * radius {
            return Err(Error::Contour(format!(
                "spectral sphere ({}, {}) is not inside the circle with margin",
                s.x, s.r
            )));
        }
    }
    Ok(())
}

/// Bounded S-functional calculus on a circle.
pub fn bounded_calc(f: &SliceFunction, t: &CliffordMatrix, side: Side, opts: &QuadOptions) -> Result<CalculusResult> {
    let side = side_for(f, side)?;
    check_dims(f, t)?;
    let spec = spectrum_exact(t)?;
    let (center, radius) = bounded_circle(t, &spec, f, opts)?;
    check_circle_encloses(&spec, center, radius)?;
    if let Some(p) = f.rational_profile() {
        for (x, y) in p.poles {
            if point_modulus(x, y, center) <= radius {
                return Err(Error::Contour(format!("pole ({x}, {y}) of f lies inside the circle")));
            }
        }
    }
    let unit = default_unit(t.d(), opts)?;
    let sign = if opts.flip_ds_sign { -1.0 } else { 1.0 };
    let nodes = circle_nodes(center, radius, opts.nodes.max(2), &unit, sign);
    let kernel = ResolventKernel::new(t);
    let acc = accumulate(&kernel, f, side, &nodes)?;
    let diff = acc.reported.distance(&acc.refined);
    finish(
        acc.reported,
        diff,
        acc.roundoff,
        0.0,
        CalculusKind { calculus: Calculus::Bounded, side },
        ContourKind::Circle { center, radius },
        acc.evaluations,
        opts.max_error,
    )
}

fn check_dims(f: &SliceFunction, t: &CliffordMatrix) -> Result<()> {
    if f.d != t.d() {
        return Err(Error::DimensionMismatch { left: t.d(), right: f.d });
    }
    Ok(())
}

/// Unbounded S-functional calculus: `f_∞ Id - (1/2π) ∮ ...` on a circle
/// around the compact set `K` that keeps the spectrum outside.
pub fn unbounded_calc(
    f: &SliceFunction,
    t: &CliffordMatrix,
    k: &SpectralSet,
    side: Side,
    opts: &QuadOptions,
) -> Result<CalculusResult> {
    let side = side_for(f, side)?;
    check_dims(f, t)?;
    if k.spheres.is_empty() {
        return Err(Error::InvalidArgument("the excluded set K is empty".into()));
    }
    let profile = f
        .rational_profile()
        .ok_or_else(|| Error::ClassViolation("unbounded calculus needs a rational-term function".into()))?;
    let f_inf = profile
        .limit_at_infinity
        .clone()
        .ok_or_else(|| Error::ClassViolation("f has no finite limit at infinity".into()))?;
    let spec = spectrum_exact(t)?;
    let scale = t.operator_norm().max(1.0);
    for s in &k.spheres {
        if spec.distance_to(s.x, s.r) <= 1e-8 * scale {
            return Err(Error::DomainViolation(format!("K sphere ({}, {}) meets the spectrum", s.x, s.r)));
        }
    }
    let (center, radius) = match opts.circle {
        Some(c) => c,
        None => {
            let center = k.spheres.iter().map(|s| s.x).sum::<f64>() / k.spheres.len() as f64;
            let inner = k.spheres.iter().map(|s| point_modulus(s.x, s.r, center)).fold(0.0, f64::max);
            let outer = spec.spheres.iter().map(|s| point_modulus(s.x, s.r, center)).fold(f64::INFINITY, f64::min);
            if !(inner < 0.85 * outer) {
                return Err(Error::Contour("no circle separates K from the spectrum".into()));
            }
            let radius = if inner == 0.0 { 0.5 * outer } else { (inner * outer).sqrt() };
            (center, radius)
        }
    };
    for s in &spec.spheres {
        if point_modulus(s.x, s.r, center) < (1.0 + CIRCLE_MARGIN) * radius {
            return Err(Error::Contour(format!("spectral sphere ({}, {}) is inside the circle", s.x, s.r)));
        }
    }
    for &(x, y) in &profile.poles {
        if point_modulus(x, y, center) >= radius {
            return Err(Error::DomainViolation(format!("pole ({x}, {y}) of f lies outside the circle around K")));
        }
    }
    let unit = default_unit(t.d(), opts)?;
    let sign = if opts.flip_ds_sign { -1.0 } else { 1.0 };
    let nodes = circle_nodes(center, radius, opts.nodes.max(2), &unit, sign);
    let kernel = ResolventKernel::new(t);
    let acc = accumulate(&kernel, f, side, &nodes)?;
    let diff = acc.reported.distance(&acc.refined);
    let base = CliffordMatrix::identity(t.n(), t.d()).mul_scalar_right(&f_inf);
    finish(
        base.sub(&acc.reported),
        diff,
        acc.roundoff,
        0.0,
        CalculusKind { calculus: Calculus::Unbounded, side },
        ContourKind::Circle { center, radius },
        acc.evaluations,
        opts.max_error,
    )
}

/// Largest argument `atan2(r, |x|)` over the spectrum; spheres at the origin are skipped.
pub fn spectral_angle(spec: &SpectralSet) -> f64 {
    spec.spheres.iter().filter(|s| s.x.hypot(s.r) > 0.0).map(|s| s.r.atan2(s.x.abs())).fold(0.0, f64::max)
}

/// The ω-calculus on the boundary of the double sector `D_φ`.
pub fn omega_calc(f: &SliceFunction, t: &CliffordMatrix, side: Side, opts: &QuadOptions) -> Result<CalculusResult> {
    let side = side_for(f, side)?;
    check_dims(f, t)?;
    let profile = f
        .rational_profile()
        .ok_or_else(|| Error::ClassViolation("ω-calculus needs a rational-term function".into()))?;
    if profile.growth() != GrowthClass::Sh0 {
        return Err(Error::ClassViolation(format!(
            "f is not in SH0: order {} at 0 and {} at infinity",
            profile.order_at_zero, profile.order_at_infinity
        )));
    }
    let spec = spectrum_exact(t)?;
    let omega = spectral_angle(&spec);
    if omega >= FRAC_PI_2 - 1e-9 {
        return Err(Error::NotBisectorial(format!("spectral angle {omega} reaches the imaginary axis")));
    }
    let theta = profile.pole_angle();
    let phi = opts.phi.unwrap_or(0.5 * (omega + theta));
    if !(omega < phi && phi < theta) {
        return Err(Error::Contour(format!("φ = {phi} is outside (ω, θ) = ({omega}, {theta})")));
    }
    let moduli = spec
        .spheres
        .iter()
        .map(|s| s.x.hypot(s.r))
        .chain(profile.poles.iter().map(|p| p.0.hypot(p.1)))
        .filter(|m| *m > 0.0);
    let (lo, hi) = moduli.fold((1.0f64, 1.0f64), |(lo, hi), m| (lo.min(0.5 * m), hi.max(2.0 * m)));
    let (r_in, r_out) = opts.radii.unwrap_or_else(|| {
        let k0 = profile.order_at_zero.max(1) as f64;
        let kinf = profile.order_at_infinity.min(-1).unsigned_abs() as f64;
        (lo * TAIL_TOL.powf(1.0 / k0), hi * TAIL_TOL.powf(-1.0 / kinf))
    });
    if !(0.0 < r_in && r_in < r_out) {
        return Err(Error::Contour("truncation radii must satisfy 0 < r_in < r_out".into()));
    }
    let unit = default_unit(t.d(), opts)?;
    let sign = if opts.flip_ds_sign { -1.0 } else { 1.0 };
    let nodes = ray_nodes(phi, r_in, r_out, opts.panels.max(1), opts.order.max(1), &unit, sign);
    let kernel = ResolventKernel::new(t);
    let acc = accumulate(&kernel, f, side, &nodes)?;
    let diff = acc.reported.distance(&acc.refined);

    // tails beyond the truncation radii, from the integrand size at the ends
    let mut truncation = 0.0;
    for (alpha, _) in rays(phi) {
        for end in [r_in, r_out] {
            let s = Paravector::on_slice(end * alpha.cos(), end * alpha.sin(), &unit);
            let size = match side {
                Side::Left => kernel.left(&s)?.operator_norm(),
                Side::Right => kernel.right(&s)?.operator_norm(),
            };
            truncation += size * f.eval(&s)?.abs() * end / (2.0 * PI);
        }
    }
    finish(
        acc.reported,
        diff,
        acc.roundoff,
        truncation,
        CalculusKind { calculus: Calculus::Omega, side },
        ContourKind::SectorRays { phi, r_in, r_out },
        acc.evaluations,
        opts.max_error,
    )
}

fn realified(t: &CliffordMatrix) -> DMatrix<f64> {
    t.realify_left().matrix
}

fn from_real(n: usize, d: usize, m: DMatrix<f64>) -> CliffordMatrix {
    RealifiedMatrix { n, d, matrix: m, provenance: Provenance::Derived }.to_clifford()
}

/// `p(T) q(T)^{-1}` for a real rational `p/q`.
pub fn rational_of_operator(t: &CliffordMatrix, g: &Rational) -> Result<CliffordMatrix> {
    let r = realified(t);
    let size = r.nrows();
    let horner = |p: &[f64]| {
        p.iter().rev().fold(DMatrix::<f64>::zeros(size, size), |acc, &c| {
            &acc * &r + DMatrix::<f64>::identity(size, size) * c
        })
    };
    let num = horner(g.numerator());
    let den = horner(g.denominator());
    let sv = den.clone().singular_values();
    if !(sv.min() > 1e-13 * sv.max()) {
        return Err(Error::NotInvertible("denominator q(T)"));
    }
    let x = den.lu().solve(&num).ok_or(Error::NotInvertible("denominator q(T)"))?;
    Ok(from_real(t.n(), t.d(), x))
}

/// `f(T)` from the rational form: `Σ g_k(T) b_k` (left) or `Σ a_k g_k(T)` (right).
pub fn direct_function(f: &SliceFunction, t: &CliffordMatrix, side: Side) -> Result<CliffordMatrix> {
    let side = side_for(f, side)?;
    check_dims(f, t)?;
    let terms = f
        .terms()
        .ok_or_else(|| Error::InvalidArgument("direct evaluation needs a rational-term function".into()))?;
    let mut out = CliffordMatrix::zero(t.n(), t.d());
    for term in terms {
        let g = rational_of_operator(t, &term.g)?;
        let part = match side {
            Side::Left => g.mul_scalar_right(&term.coef),
            Side::Right => g.mul_scalar_left(&term.coef),
        };
        out.axpy(1.0, &part);
    }
    Ok(out)
}

/// Smallest singular value of `realify(T)` relative to the largest.
pub fn injectivity_margin(t: &CliffordMatrix) -> f64 {
    let sv = realified(t).singular_values();
    if sv.max() == 0.0 {
        0.0
    } else {
        sv.min() / sv.max()
    }
}

/// H∞ calculus: `e(T)^{-1} (ef)(T)` (left) or `(fe)(T) e(T)^{-1}` (right) with
/// `e(s) = s^m / (1 + s^2)^m`.
pub fn hinf_calc(f: &SliceFunction, t: &CliffordMatrix, side: Side, opts: &QuadOptions) -> Result<CalculusResult> {
    let side = side_for(f, side)?;
    check_dims(f, t)?;
    if injectivity_margin(t) <= 1e-10 {
        return Err(Error::DomainViolation("H∞ calculus needs an injective operator".into()));
    }
    let profile = f
        .rational_profile()
        .ok_or_else(|| Error::ClassViolation("H∞ calculus needs a rational-term function".into()))?;
    let alpha = profile.poly_alpha();
    let m = opts.regularizer_order.unwrap_or(alpha.floor() as usize + 1);
    if !(m as f64 > alpha) {
        return Err(Error::ClassViolation(format!("regularizer order m = {m} must exceed α = {alpha}")));
    }
    let e = crate::slice::regularizer(t.d(), m)?;
    let ef = match side {
        Side::Left => e.product(f)?,
        Side::Right => f.product(&e)?,
    };
    let et = omega_calc(&e, t, Side::Left, opts)?;
    let eft = omega_calc(&ef, t, side, opts)?;

    let direct = rational_of_operator(t, &crate::slice::regularizer_rational(m)?)?;
    let e_norm = et.operator.operator_norm();
    let regularizer_check = et.operator.distance(&direct) / e_norm.max(1.0);

    let (n, d) = (t.n(), t.d());
    let e_real = realified(&et.operator);
    let sv = e_real.clone().singular_values();
    if !(sv.min() > 1e-12 * sv.max()) {
        return Err(Error::NotInvertible("e(T)"));
    }
    let e_inv_norm = 1.0 / sv.min();
    let ef_real = realified(&eft.operator);
    let x = match side {
        Side::Left => e_real.lu().solve(&ef_real),
        Side::Right => e_real.transpose().lu().solve(&ef_real.transpose()).map(|y| y.transpose()),
    }
    .ok_or(Error::NotInvertible("e(T)"))?;
    let operator = from_real(n, d, x);
    let estimate = e_inv_norm * (eft.estimate + operator.operator_norm() * et.estimate);
    let truncation = e_inv_norm * (eft.truncation + operator.operator_norm() * et.truncation);
    if !(estimate <= opts.max_error) {
        return Err(Error::QuadratureTolerance { estimate, max: opts.max_error });
    }
    Ok(CalculusResult {
        operator,
        kind: CalculusKind { calculus: Calculus::Hinf, side },
        estimate,
        truncation,
        contour: eft.contour,
        nodes_used: et.nodes_used + eft.nodes_used,
        regularizer_check: Some(regularizer_check),
        regularizer_order: Some(m),
    })
}

/// Runs the calculus selected by `kind`; `k` is required for the unbounded one.
pub fn run_calculus(
    kind: CalculusKind,
    f: &SliceFunction,
    t: &CliffordMatrix,
    k: Option<&SpectralSet>,
    opts: &QuadOptions,
) -> Result<CalculusResult> {
    match kind.calculus {
        Calculus::Bounded => bounded_calc(f, t, kind.side, opts),
        Calculus::Unbounded => {
            let k = k.ok_or_else(|| Error::InvalidArgument("unbounded calculus needs the set K".into()))?;
            unbounded_calc(f, t, k, kind.side, opts)
        }
        Calculus::Omega => omega_calc(f, t, kind.side, opts),
        Calculus::Hinf => hinf_calc(f, t, kind.side, opts),
    }
}

#[derive(Clone, Debug)]
pub struct TransportReport {
    pub kind: CalculusKind,
    /// `‖f(T*) - f♯(T)*‖ / max(1, ‖f(T*)‖)`.
    pub residual: f64,
    /// Sum of both quadrature estimates, relative like the residual.
    pub estimate: f64,
    /// For intrinsic `f`: `‖f(T*) - f(T)*‖ / max(1, ‖f(T*)‖)`.
    pub intrinsic_residual: Option<f64>,
    pub bound: f64,
    pub passed: bool,
}

/// Compares `f(T*)` with `f♯(T)*`.
pub fn adjoint_transport(
    f: &SliceFunction,
    t: &CliffordMatrix,
    kind: CalculusKind,
    k: Option<&SpectralSet>,
    opts: &QuadOptions,
) -> Result<TransportReport> {
    let ta = t.adjoint();
    let a = run_calculus(kind, f, &ta, k, opts)?;
    let b = run_calculus(kind.flipped(), &f.sharp(), t, k, opts)?;
    let scale = a.operator.operator_norm().max(1.0);
    let residual = a.operator.distance(&b.operator.adjoint()) / scale;
    let estimate = (a.estimate + b.estimate) / scale;
    let intrinsic_residual = if f.chirality == Chirality::Intrinsic {
        let c = run_calculus(kind, f, t, k, opts)?;
        Some(a.operator.distance(&c.operator.adjoint()) / scale)
    } else {
        None
    };
    let bound = (2.0 * estimate).max(1e-6);
    let passed = residual <= bound && intrinsic_residual.is_none_or(|r| r <= bound);
    Ok(TransportReport { kind, residual, estimate, intrinsic_residual, bound, passed })
}

#[derive(Clone, Debug)]
pub struct BisectorialReport {
    pub omega: f64,
    pub spectral_angle: f64,
    pub in_sector: bool,
    /// `(φ, sup ‖S_L^{-1}‖|s|, sup ‖S_R^{-1}‖|s|)` over the samples.
    pub table: Vec<(f64, f64, f64)>,
    pub right_bound_holds: bool,
    pub passed: bool,
}

pub const BISECTORIAL_SLACK: f64 = 1e-9;

/// Checks `σ_S(T) ⊂ closure(D_ω)` and samples the resolvent bounds outside `D_φ`.
pub fn bisectorial_check(t: &CliffordMatrix, omega: f64) -> Result<BisectorialReport> {
    let spec = spectrum_exact(t)?;
    let angle = spectral_angle(&spec);
    let in_sector = angle <= omega + 1e-12 && omega < FRAC_PI_2;
    let mut table = Vec::new();
    let mut right_ok = true;
    if in_sector && t.d() >= 1 {
        let kernel = ResolventKernel::new(t);
        let d = t.d();
        let mut units = vec![ImaginaryUnit::generator(d, 1)];
        if d > 1 {
            units.push(ImaginaryUnit::normalized(vec![1.0; d])?);
        }
        let scale = t.operator_norm().max(1.0);
        let steps = 4;
        for k in 1..=steps {
            let phi = omega + (FRAC_PI_2 - omega) * k as f64 / (steps + 1) as f64;
            let (mut cl, mut cr) = (0.0f64, 0.0f64);
            for unit in &units {
                for (alpha, _) in rays(phi) {
                    for i in 0..30 {
                        let rho = scale * 10f64.powf(-3.0 + 6.0 * i as f64 / 29.0);
                        let s = Paravector::on_slice(rho * alpha.cos(), rho * alpha.sin(), unit);
                        cl = cl.max(kernel.left(&s)?.operator_norm() * rho);
                        cr = cr.max(kernel.right(&s)?.operator_norm() * rho);
                    }
                }
            }
            right_ok &= cr <= 2.0 * cl * (1.0 + BISECTORIAL_SLACK);
            table.push((phi, cl, cr));
        }
    }
    Ok(BisectorialReport {
        omega,
        spectral_angle: angle,
        in_sector,
        table,
        right_bound_holds: right_ok,
        passed: in_sector && right_ok,
    })
}

/// Human-readable description of a contour.
pub fn describe(kind: &ContourKind) -> String {
    match kind {
        ContourKind::Circle { center, radius } => format!("circle(center={center}, radius={radius})"),
        ContourKind::SectorRays { phi, r_in, r_out } => format!("sector(phi={phi}, r_in={r_in}, r_out={r_out})"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::BladeIndex;
    use crate::slice::{regularizer, Rational};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn e(d: usize, gens: &[usize]) -> CliffordNum {
        CliffordNum::blade(d, BladeIndex::from_generators(gens), 1.0)
    }

    fn random_matrix(n: usize, d: usize, rng: &mut ChaCha8Rng) -> CliffordMatrix {
        let entries: Vec<CliffordNum> = (0..n * n)
            .map(|_| {
                CliffordNum::from_coeffs(d, (0..1 << d).map(|_| rng.random_range(-0.5..0.5)).collect()).unwrap()
            })
            .collect();
        CliffordMatrix::from_entries(n, d, &entries).unwrap()
    }

    #[test]
    fn cauchy_normalization() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let t = random_matrix(3, 2, &mut rng);
        let one = SliceFunction::intrinsic(2, Rational::constant(1.0));
        let r = bounded_calc(&one, &t, Side::Left, &QuadOptions::default()).unwrap();
        assert!(r.operator.distance(&CliffordMatrix::identity(3, 2)) < 1e-8);
        assert!(r.estimate < 1e-10, "{}", r.estimate);
        let flipped = QuadOptions { flip_ds_sign: true, ..QuadOptions::default() };
        let r = bounded_calc(&one, &t, Side::Left, &flipped).unwrap();
        assert!(r.operator.distance(&CliffordMatrix::identity(3, 2).scale(-1.0)) < 1e-8);
    }

    #[test]
    fn polynomials_and_constants() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let t = random_matrix(2, 3, &mut rng);
        let sq = SliceFunction::intrinsic(3, Rational::power(2));
        for side in [Side::Left, Side::Right] {
            let r = bounded_calc(&sq, &t, side, &QuadOptions::default()).unwrap();
            assert!(r.operator.distance(&t.mul(&t)) < 1e-6);
        }
        let f = SliceFunction::left(Rational::power(1), e(3, &[2]));
        let r = bounded_calc(&f, &t, Side::Left, &QuadOptions::default()).unwrap();
        assert!(r.operator.distance(&t.mul_scalar_right(&e(3, &[2]))) < 1e-8);
        let f = SliceFunction::right(e(3, &[2]), Rational::power(1));
        let r = bounded_calc(&f, &t, Side::Right, &QuadOptions::default()).unwrap();
        assert!(r.operator.distance(&t.mul_scalar_left(&e(3, &[2]))) < 1e-8);
        assert!(bounded_calc(&f, &t, Side::Left, &QuadOptions::default()).is_err());
    }

    #[test]
    fn unbounded_matches_direct_inverse() {
        let d = 2;
        let t = CliffordMatrix::diag(&[CliffordNum::scalar(d, 3.0), &CliffordNum::scalar(d, 2.5) + &e(d, &[1])])
            .unwrap();
        // (1 + s^2)^{-1} with K the unit sphere
        let g = Rational::new(vec![1.0], vec![1.0, 0.0, 1.0]).unwrap();
        let f = SliceFunction::intrinsic(d, g.clone());
        let k = SpectralSet::from_points(&[(0.0, 1.0, 2)], 1e-8);
        let r = unbounded_calc(&f, &t, &k, Side::Left, &QuadOptions::default()).unwrap();
        let direct = rational_of_operator(&t, &g).unwrap();
        assert!(r.operator.distance(&direct) < 1e-8, "{}", r.operator.distance(&direct));

        let c = SliceFunction::intrinsic(d, Rational::constant(2.0));
        let r = unbounded_calc(&c, &t, &k, Side::Left, &QuadOptions::default()).unwrap();
        assert!(r.operator.distance(&CliffordMatrix::scalar_identity(2, d, 2.0)) < 1e-10);
    }

    #[test]
    fn omega_regularizer_on_real_diagonal() {
        let d = 1;
        let t = CliffordMatrix::diag(&[CliffordNum::scalar(d, 1.0), CliffordNum::scalar(d, -2.0)]).unwrap();
        let e1 = regularizer(d, 1).unwrap();
        let r = omega_calc(&e1, &t, Side::Left, &QuadOptions::default()).unwrap();
        let expect = CliffordMatrix::diag(&[CliffordNum::scalar(d, 0.5), CliffordNum::scalar(d, -0.4)]).unwrap();
        let err = r.operator.distance(&expect);
        assert!(err < 1e-7 && err <= r.estimate.max(1e-12), "err {err} est {}", r.estimate);
    }

    #[test]
    fn omega_is_independent_of_the_unit() {
        let d = 3;
        let t = CliffordMatrix::diag(&[
            Paravector::new(1.0, vec![0.3, 0.0, 0.2]).to_clifford(),
            Paravector::new(-2.0, vec![0.0, 0.5, 0.0]).to_clifford(),
        ])
        .unwrap();
        let e1 = regularizer(d, 1).unwrap();
        let a = omega_calc(&e1, &t, Side::Left, &QuadOptions::default()).unwrap();
        let opts = QuadOptions { unit: Some(ImaginaryUnit::generator(d, 2)), ..QuadOptions::default() };
        let b = omega_calc(&e1, &t, Side::Left, &opts).unwrap();
        assert!(a.operator.distance(&b.operator) <= a.estimate + b.estimate);
    }

    #[test]
    fn hinf_identity_function() {
        let d = 2;
        let t = CliffordMatrix::diag(&[
            Paravector::new(1.5, vec![0.2, 0.1]).to_clifford(),
            Paravector::new(-0.7, vec![0.0, 0.1]).to_clifford(),
        ])
        .unwrap();
        let id = SliceFunction::intrinsic(d, Rational::power(1));
        for side in [Side::Left, Side::Right] {
            let r = hinf_calc(&id, &t, side, &QuadOptions::default()).unwrap();
            assert!(r.operator.distance(&t) < 1e-6, "{}", r.operator.distance(&t));
            assert_eq!(r.regularizer_order, Some(2));
            assert!(r.regularizer_check.unwrap() < 1e-6);
        }
        let e1 = regularizer(d, 1).unwrap();
        let a = hinf_calc(&e1, &t, Side::Left, &QuadOptions::default()).unwrap();
        let b = omega_calc(&e1, &t, Side::Left, &QuadOptions::default()).unwrap();
        assert!(a.operator.distance(&b.operator) <= 1e-6);
    }

    #[test]
    fn transport_on_random_operator() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let t = random_matrix(2, 2, &mut rng);
        let f = SliceFunction::left(Rational::power(1), e(2, &[2]));
        let kind = CalculusKind { calculus: Calculus::Bounded, side: Side::Left };
        let r = adjoint_transport(&f, &t, kind, None, &QuadOptions::default()).unwrap();
        assert!(r.passed && r.residual < 1e-6, "{r:?}");
        let sq = SliceFunction::intrinsic(2, Rational::power(2));
        let r = adjoint_transport(&sq, &t, kind, None, &QuadOptions::default()).unwrap();
        assert!(r.passed && r.intrinsic_residual.unwrap() < 1e-6, "{r:?}");
    }

    #[test]
    fn bisectorial_examples() {
        let d = 2;
        let t = CliffordMatrix::diag(&[CliffordNum::scalar(d, 1.0), CliffordNum::scalar(d, -1.0)]).unwrap();
        let r = bisectorial_check(&t, 0.1).unwrap();
        assert!(r.passed && r.table.iter().all(|row| row.1.is_finite()));
        let t = CliffordMatrix::diag(&[e(d, &[1])]).unwrap();
        let r = bisectorial_check(&t, 1.5).unwrap();
        assert!(!r.passed && !r.in_sector);
    }
}
