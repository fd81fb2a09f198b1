//! Seeded verification battery. Each group checks one family of identities
//! on random operators and reports metrics against pinned bounds. Groups draw
//! from their own generator, so filtering groups does not change results.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::calculus::{
    adjoint_transport, bisectorial_check, bounded_calc, Calculus, CalculusKind, QuadOptions, Side,
};
use crate::clifford::{CliffordNum, Paravector};
use crate::error::{Error, Result};
use crate::module::{inner_product, CliffordMatrix, ModuleVector, Provenance, RealifiedMatrix};
use crate::mult::{
    build_mult, essran, mult_adjoint_check, mult_bisectorial_bound, mult_calculus_oracle, mult_inverse_check,
    mult_norm_check, mult_resolvent_check, mult_spectrum_check, sector_geometry_check, spectrum_mult,
    DiscreteMeasureSpace, MeasurableFn,
};
use crate::slice::{check_holomorphic, regularizer, regularizer_rational, Chirality, Rational, SliceFunction, SliceTerm};
use crate::spectral::{
    adjoint_spectrum_check, first_order_realified, in_resolvent, random_resolvent_point, random_unit,
    resolvent_factorization_check, spectrum_exact, SpectralSet, MEMBERSHIP_REL_TOL,
};

/// Group names with the acceptance criterion each one covers.
pub const GROUPS: [(&str, Option<u8>); 14] = [
    ("clifford-algebra", None),
    ("slice-functions", None),
    ("first-order", Some(1)),
    ("resolvent-factorization", Some(2)),
    ("adjoint-spectrum", Some(3)),
    ("resolvent-adjoint", Some(4)),
    ("cauchy-normalization", Some(5)),
    ("polynomial-compatibility", Some(6)),
    ("bisectorial-operators", None),
    ("adjoint-transport", Some(7)),
    ("mult-model", Some(8)),
    ("norm-inequalities", Some(9)),
    ("mult-bisectorial", Some(10)),
    ("sector-geometry", Some(11)),
];

pub const FIRST_ORDER_SAMPLES: usize = 1000;
pub const FIRST_ORDER_BAND: f64 = 1e-6;
pub const FACTORIZATION_POINTS: usize = 20;
pub const FACTORIZATION_TOL: f64 = 1e-10;
pub const ADJOINT_SPECTRUM_TOL: f64 = 1e-9;
pub const RESOLVENT_ADJOINT_POINTS: usize = 5;
pub const RESOLVENT_ADJOINT_TOL: f64 = 1e-10;
pub const CAUCHY_NODES: usize = 512;
pub const CAUCHY_TOL: f64 = 1e-8;
pub const POLYNOMIAL_TOL: f64 = 1e-6;
/// Circle nodes for the transport checks; the circle radius is `1.25‖T‖`, so
/// the trapezoid error is far below roundoff already.
pub const TRANSPORT_CIRCLE_NODES: usize = 256;
pub const POLYNOMIAL_COARSE_NODES: usize = 8;
pub const POLYNOMIAL_MIN_REDUCTION: f64 = 4.0;
/// Coarse residuals below this are already at roundoff and cannot show a rate.
pub const POLYNOMIAL_ROUNDOFF: f64 = 1e-12;
pub const MULT_RESOLVENT_POINTS: usize = 20;
pub const NORM_SAMPLES: usize = 1000;
pub const NORM_SLACK: f64 = 1e-12;
pub const MULT_BISECTORIAL_MIN_SAMPLES: usize = 1600;
pub const SECTOR_SAMPLES: usize = 10_000;
/// Sector angle of the bisectorial operator battery.
pub const BISECTORIAL_OMEGA: f64 = 0.6;
const MAX_LISTED_FAILURES: usize = 10;

#[derive(Clone, Debug)]
pub struct BatteryConfig {
    pub seed: u64,
    /// `(d, n)` pairs.
    pub sizes: Vec<(usize, usize)>,
    pub per_size: usize,
    /// Bisectorial injective operators per size, used by the ω and H∞ checks.
    pub bisectorial_per_size: usize,
    pub groups: Option<Vec<String>>,
    /// Fault injection: negate `ds_J` in every contour integral.
    pub flip_ds_sign: bool,
}

impl Default for BatteryConfig {
    fn default() -> Self {
        let sizes = (1..=3).flat_map(|d| (1..=4).map(move |n| (d, n))).collect();
        BatteryConfig {
            seed: 42,
            sizes,
            per_size: 50,
            bisectorial_per_size: 2,
            groups: None,
            flip_ds_sign: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Metric {
    pub name: String,
    pub value: f64,
    /// `None` for informational metrics.
    pub bound: Option<f64>,
    /// `true` when the value must be at least the bound.
    pub lower: bool,
    pub passed: bool,
}

impl Metric {
    pub fn at_most(name: &str, value: f64, bound: f64) -> Metric {
        Metric { name: name.to_string(), value, bound: Some(bound), lower: false, passed: value <= bound }
    }

    pub fn at_least(name: &str, value: f64, bound: f64) -> Metric {
        Metric { name: name.to_string(), value, bound: Some(bound), lower: true, passed: value >= bound }
    }

    pub fn info(name: &str, value: f64) -> Metric {
        Metric { name: name.to_string(), value, bound: None, lower: false, passed: true }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroupReport {
    pub name: String,
    pub criterion: Option<u8>,
    pub cases: usize,
    pub metrics: Vec<Metric>,
    pub errors: usize,
    /// The first few failing cases.
    pub failures: Vec<String>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BatteryReport {
    pub seed: u64,
    pub sizes: Vec<(usize, usize)>,
    pub per_size: usize,
    pub flip_ds_sign: bool,
    pub groups: Vec<GroupReport>,
    pub passed: bool,
}

/// One random operator with its spectrum.
#[derive(Clone, Debug)]
pub struct Case {
    pub label: String,
    pub d: usize,
    pub n: usize,
    pub t: CliffordMatrix,
    pub spec: SpectralSet,
    /// `max(1, ‖T‖)`.
    pub scale: f64,
}

impl Case {
    fn new(label: String, t: CliffordMatrix) -> Result<Case> {
        let spec = spectrum_exact(&t)?;
        Ok(Case { label, d: t.d(), n: t.n(), scale: t.operator_norm().max(1.0), spec, t })
    }
}

pub fn random_clifford<R: Rng + ?Sized>(d: usize, scale: f64, rng: &mut R) -> CliffordNum {
    let coeffs = (0..1usize << d).map(|_| rng.random_range(-1.0..1.0) * scale).collect();
    CliffordNum::from_coeffs(d, coeffs).expect("coefficient count matches")
}

/// Entries with coefficients uniform in `±sqrt(3 / (n 2^d))`, so `E‖T‖_F^2 = n`.
pub fn random_operator<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> CliffordMatrix {
    let scale = (3.0 / (n << d) as f64).sqrt();
    let entries: Vec<CliffordNum> = (0..n * n).map(|_| random_clifford(d, scale, rng)).collect();
    CliffordMatrix::from_entries(n, d, &entries).expect("entry count matches")
}

/// A paravector with modulus in `[lo, hi]` (log-uniform), angle at most
/// `max_angle` to the real axis and a random sign of the real part.
pub fn random_sector_value<R: Rng + ?Sized>(d: usize, lo: f64, hi: f64, max_angle: f64, rng: &mut R) -> Paravector {
    let rho = (rng.random_range(lo.ln()..=hi.ln())).exp();
    let theta = rng.random_range(0.0..=max_angle);
    let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    let unit = random_unit(d, rng);
    Paravector::on_slice(sign * rho * theta.cos(), rho * theta.sin(), &unit)
}

/// `S D S^{-1}` with `D` a diagonal of sector values and `S = I + 0.3 R`.
pub fn random_bisectorial<R: Rng + ?Sized>(n: usize, d: usize, omega: f64, rng: &mut R) -> Result<CliffordMatrix> {
    loop {
        let values: Vec<CliffordNum> =
            (0..n).map(|_| random_sector_value(d, 0.3, 3.0, omega, rng).to_clifford()).collect();
        let diag = CliffordMatrix::diag(&values)?;
        let mut s = CliffordMatrix::identity(n, d);
        s.axpy(0.3, &random_operator(n, d, rng));
        let real = s.realify_left();
        if !real.is_invertible(1e-3) {
            continue;
        }
        let size = real.size();
        let inv = real.matrix.lu().solve(&nalgebra::DMatrix::<f64>::identity(size, size));
        let Some(inv) = inv else { continue };
        let s_inv = RealifiedMatrix { n, d, matrix: inv, provenance: Provenance::Derived }.to_clifford();
        return Ok(s.mul(&diag).mul(&s_inv));
    }
}

fn group_seed(seed: u64, name: &str) -> u64 {
    // FNV-1a of the group name mixed into the seed
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    seed ^ h
}

struct Group {
    report: GroupReport,
}

impl Group {
    fn new(name: &str, criterion: Option<u8>) -> Group {
        Group {
            report: GroupReport {
                name: name.to_string(),
                criterion,
                cases: 0,
                metrics: Vec::new(),
                errors: 0,
                failures: Vec::new(),
                passed: true,
            },
        }
    }

    fn fail(&mut self, msg: String) {
        self.report.errors += 1;
        if self.report.failures.len() < MAX_LISTED_FAILURES {
            self.report.failures.push(msg);
        }
    }

    /// Records a case error instead of aborting the group.
    fn attempt<T>(&mut self, label: &str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.fail(format!("{label}: {e}"));
                None
            }
        }
    }

    fn metric(&mut self, m: Metric) {
        self.report.metrics.push(m);
    }

    fn finish(mut self) -> GroupReport {
        self.report.passed = self.report.errors == 0 && self.report.metrics.iter().all(|m| m.passed);
        self.report
    }
}

/// Operators shared by the groups.
pub struct Battery {
    pub config: BatteryConfig,
    pub cases: Vec<Case>,
    pub bisectorial: Vec<Case>,
}

impl Battery {
    pub fn new(config: BatteryConfig) -> Result<Battery> {
        if let Some(&(d, n)) = config.sizes.iter().find(|&&(d, n)| d == 0 || n == 0 || d > 6) {
            return Err(Error::InvalidArgument(format!("battery size d={d} n={n} is outside 1 <= d <= 6, n >= 1")));
        }
        if let Some(groups) = &config.groups {
            if let Some(g) = groups.iter().find(|g| !GROUPS.iter().any(|(name, _)| name == g)) {
                return Err(Error::InvalidArgument(format!("unknown group {g}")));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let mut cases = Vec::new();
        for &(d, n) in &config.sizes {
            for i in 0..config.per_size {
                cases.push(Case::new(format!("d{d}n{n}#{i}"), random_operator(n, d, &mut rng))?);
            }
        }
        let mut bisectorial = Vec::new();
        for &(d, n) in &config.sizes {
            for i in 0..config.bisectorial_per_size {
                let t = random_bisectorial(n, d, BISECTORIAL_OMEGA, &mut rng)?;
                bisectorial.push(Case::new(format!("bisectorial-d{d}n{n}#{i}"), t)?);
            }
        }
        Ok(Battery { config, cases, bisectorial })
    }

    fn opts(&self) -> QuadOptions {
        QuadOptions { flip_ds_sign: self.config.flip_ds_sign, ..QuadOptions::default() }
    }

    pub fn run(&self) -> BatteryReport {
        let mut groups = Vec::new();
        for (name, criterion) in GROUPS {
            if let Some(sel) = &self.config.groups {
                if !sel.iter().any(|g| g == name) {
                    continue;
                }
            }
            let mut rng = ChaCha8Rng::seed_from_u64(group_seed(self.config.seed, name));
            let mut g = Group::new(name, criterion);
            match name {
                "clifford-algebra" => self.clifford_algebra(&mut g, &mut rng),
                "slice-functions" => self.slice_functions(&mut g, &mut rng),
                "first-order" => self.first_order(&mut g, &mut rng),
                "resolvent-factorization" => self.resolvent_factorization(&mut g, &mut rng),
                "adjoint-spectrum" => self.adjoint_spectrum(&mut g, &mut rng),
                "resolvent-adjoint" => self.resolvent_adjoint(&mut g, &mut rng),
                "cauchy-normalization" => self.cauchy_normalization(&mut g, &mut rng),
                "polynomial-compatibility" => self.polynomial_compatibility(&mut g),
                "bisectorial-operators" => self.bisectorial_operators(&mut g),
                "adjoint-transport" => self.adjoint_transport(&mut g),
                "mult-model" => self.mult_model(&mut g, &mut rng),
                "norm-inequalities" => self.norm_inequalities(&mut g, &mut rng),
                "mult-bisectorial" => self.mult_bisectorial(&mut g, &mut rng),
                "sector-geometry" => self.sector_geometry(&mut g, &mut rng),
                _ => unreachable!("group list and dispatch agree"),
            }
            groups.push(g.finish());
        }
        let passed = groups.iter().all(|g| g.passed);
        BatteryReport {
            seed: self.config.seed,
            sizes: self.config.sizes.clone(),
            per_size: self.config.per_size,
            flip_ds_sign: self.config.flip_ds_sign,
            groups,
            passed,
        }
    }

    fn dims(&self) -> Vec<usize> {
        let mut ds: Vec<usize> = self.config.sizes.iter().map(|s| s.0).collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    fn clifford_algebra(&self, g: &mut Group, rng: &mut ChaCha8Rng) {
        let (mut assoc, mut anti, mut involution, mut submult, mut para, mut realify, mut adjoint) =
            (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for d in 0..=4 {
            for _ in 0..100 {
                g.report.cases += 1;
                let (a, b, c) = (random_clifford(d, 1.0, rng), random_clifford(d, 1.0, rng), random_clifford(d, 1.0, rng));
                let scale = a.abs() * b.abs() * c.abs() * (1u64 << d) as f64;
                assoc = assoc.max((&(&a * &b) * &c).distance(&(&a * &(&b * &c))) / scale);
                anti = anti.max((&a * &b).conjugate().distance(&(&b.conjugate() * &a.conjugate())) / scale);
                involution = involution.max(a.conjugate().conjugate().distance(&a));
                submult = submult.max((&a * &b).abs() / (2f64.powf(d as f64 / 2.0) * a.abs() * b.abs()));
                let p = Paravector::new(rng.random_range(-1.0..1.0), (0..d).map(|_| rng.random_range(-1.0..1.0)).collect());
                let pa = &p.to_clifford() * &a;
                para = para.max((pa.abs() - p.abs() * a.abs()).abs() / (p.abs() * a.abs()));
            }
            if d == 0 {
                continue;
            }
            for _ in 0..20 {
                let n = rng.random_range(1..=3);
                let (ta, tb) = (random_operator(n, d, rng), random_operator(n, d, rng));
                let lhs = ta.mul(&tb).realify_left().matrix;
                let rhs = ta.realify_left().matrix * tb.realify_left().matrix;
                realify = realify.max((lhs - rhs).abs().max());
                let v = ModuleVector::from_coords(n, d, (0..n << d).map(|_| rng.random_range(-1.0..1.0)).collect())
                    .expect("coordinate count matches");
                let w = ModuleVector::from_coords(n, d, (0..n << d).map(|_| rng.random_range(-1.0..1.0)).collect())
                    .expect("coordinate count matches");
                let l = inner_product(&ta.apply(&v).expect("sizes agree"), &w).expect("sizes agree");
                let r = inner_product(&v, &ta.adjoint().apply(&w).expect("sizes agree")).expect("sizes agree");
                adjoint = adjoint.max(l.distance(&r));
            }
        }
        g.metric(Metric::at_most("associativity", assoc, 1e-14));
        g.metric(Metric::at_most("conjugation anti-automorphism", anti, 1e-14));
        g.metric(Metric::at_most("conjugation involution", involution, 0.0));
        g.metric(Metric::at_most("|ab| / (2^(d/2) |a||b|)", submult, 1.0 + 1e-12));
        g.metric(Metric::at_most("paravector multiplicativity", para, 1e-13));
        g.metric(Metric::at_most("realify homomorphism", realify, 1e-13));
        g.metric(Metric::at_most("adjoint inner product", adjoint, 1e-13));
    }

    fn slice_functions(&self, g: &mut Group, rng: &mut ChaCha8Rng) {
        let grid: Vec<(f64, f64)> = (0..5).flat_map(|i| (1..3).map(move |j| (-1.1 + 0.55 * i as f64, 0.3 * j as f64))).collect();
        let (mut holo_fail, mut sharp_err, mut sharp_sharp) = (0usize, 0.0f64, 0.0f64);
        for d in self.dims() {
            for f in sample_functions(d) {
                g.report.cases += 1;
                if let Some(r) = g.attempt("holomorphy", check_holomorphic(&f, &grid)) {
                    if !r.passed {
                        holo_fail += 1;
                    }
                }
                let ff = f.sharp().sharp();
                for _ in 0..10 {
                    let s = Paravector::new(rng.random_range(-2.0..2.0), (0..d).map(|_| rng.random_range(-2.0..2.0)).collect());
                    let (Some(a), Some(b), Some(c), Some(e)) = (
                        g.attempt("eval", f.sharp().eval(&s)),
                        g.attempt("eval", f.eval(&s.conjugate())),
                        g.attempt("eval", ff.eval(&s)),
                        g.attempt("eval", f.eval(&s)),
                    ) else {
                        continue;
                    };
                    let scale = e.abs().max(1.0);
                    sharp_err = sharp_err.max(a.distance(&b.conjugate()) / scale);
                    sharp_sharp = sharp_sharp.max(c.distance(&e) / scale);
                }
            }
        }
        g.metric(Metric::at_most("holomorphy failures", holo_fail as f64, 0.0));
        g.metric(Metric::at_most("f#(s) vs conj(f(conj s))", sharp_err, 1e-13));
        g.metric(Metric::at_most("f## vs f", sharp_sharp, 0.0));
    }

    fn first_order(&self, g: &mut Group, rng: &mut ChaCha8Rng) {
        let (mut disagreements, mut in_band, mut on_spectrum, mut detected) = (0usize, 0usize, 0usize, 0usize);
        for i in 0..FIRST_ORDER_SAMPLES {
            let case = &self.cases[i % self.cases.len()];
            g.report.cases += 1;
            let (x, y) = if i % 2 == 0 || case.spec.spheres.is_empty() {
                (rng.random_range(-1.5..1.5) * case.scale, rng.random_range(0.0..1.5) * case.scale)
            } else {
                let sphere = &case.spec.spheres[rng.random_range(0..case.spec.spheres.len())];
                let offset = [0.0, 1e-9, 1e-3, 0.1][rng.random_range(0..4)] * case.scale;
                let angle: f64 = rng.random_range(0.0..core::f64::consts::TAU);
                (sphere.x + offset * angle.cos(), (sphere.r + offset * angle.sin()).abs())
            };
            let s = Paravector::on_slice(x, y, &random_unit(case.d, rng));
            let dist = case.spec.distance_to(x, y);
            let (Some(a), Some(fo)) = (
                g.attempt(&case.label, in_resolvent(&case.t, &s)),
                g.attempt(&case.label, first_order_realified(&case.t, &s)),
            ) else {
                continue;
            };
            let b = fo.is_invertible(MEMBERSHIP_REL_TOL);
            if dist > FIRST_ORDER_BAND * case.scale {
                if !(a && b) {
                    disagreements += 1;
                    g.fail(format!("{}: s=({x:.6e},{y:.6e}) dist {dist:.3e}: pencil {a}, first-order {b}", case.label));
                }
            } else {
                in_band += 1;
                if dist == 0.0 {
                    on_spectrum += 1;
                    if !a && !b {
                        detected += 1;
                    }
                }
            }
        }
        g.metric(Metric::at_most("disagreements outside band", disagreements as f64, 0.0));
        g.metric(Metric::info("samples inside band", in_band as f64));
        g.metric(Metric::info("on-spectrum samples", on_spectrum as f64));
        g.metric(Metric::info("on-spectrum samples flagged by both tests", detected as f64));
    }

    fn resolvent_factorization(&self, g: &mut Group, rng: &mut ChaCha8Rng) {
        let mut worst = 0.0f64;
        for case in &self.cases {
            for _ in 0..FACTORIZATION_POINTS {
                g.report.cases += 1;
                let s = random_resolvent_point(&case.spec, case.d, case.scale, 0.05, rng);
                if let Some(r) = g.attempt(&case.label, resolvent_factorization_check(&case.t, &s)) {
                    worst = worst.max(r.residual / r.condition);
                }
            }
        }
        g.metric(Metric::at_most("residual / condition", worst, FACTORIZATION_TOL));
    }

    fn adjoint_spectrum(&self, g: &mut Group, rng: &mut ChaCha8Rng) {
        let (mut worst, mut mismatched) = (0.0f64, 0usize);
        for case in &self.cases {
            g.report.cases += 1;
            if let Some(r) = g.attempt(&case.label, adjoint_spectrum_check(&case.t, 0, rng)) {
                worst = worst.max(r.hausdorff);
                if !r.multiplicities_match {
                    mismatched += 1;
                    g.fail(format!("{}: multiplicities differ", case.label));
                }
            }
        }
        g.metric(Metric::at_most("hausdorff distance", worst, ADJOINT_SPECTRUM_TOL));
        g.metric(Metric::at_most("multiplicity mismatches", mismatched as f64, 0.0));
    }

    fn resolvent_adjoint(&self, g: &mut Group, rng: &mut ChaCha8Rng) {
        let (mut left, mut right) = (0.0f64, 0.0f64);
        for case in &self.cases {
            g.report.cases += RESOLVENT_ADJOINT_POINTS;
            if let Some(r) = g.attempt(&case.label, adjoint_spectrum_check(&case.t, RESOLVENT_ADJOINT_POINTS, rng)) {
                left = left.max(r.left_identity);
                right = right.max(r.right_identity);
            }
        }
        g.metric(Metric::at_most("S_L(s,T*) vs S_R(conj s,T)*", left, RESOLVENT_ADJOINT_TOL));
        g.metric(Metric::at_most("S_R(s,T*) vs S_L(conj s,T)*", right, RESOLVENT_ADJOINT_TOL));
    }

    fn cauchy_normalization(&self, g: &mut Group, rng: &mut ChaCha8Rng) {
        let (mut worst, mut estimate) = (0.0f64, 0.0f64);
        for (i, case) in self.cases.iter().enumerate() {
            g.report.cases += 1;
            let one = SliceFunction::intrinsic(case.d, Rational::constant(1.0));
            let side = if i % 2 == 0 { Side::Left } else { Side::Right };
            let opts = QuadOptions { nodes: CAUCHY_NODES, unit: Some(random_unit(case.d, rng)), ..self.opts() };
            if let Some(r) = g.attempt(&case.label, bounded_calc(&one, &case.t, side, &opts)) {
                let res = r.operator.distance(&CliffordMatrix::identity(case.n, case.d));
                worst = worst.max(res);
                estimate = estimate.max(r.estimate);
            }
        }
        g.metric(Metric::at_most("|1(T) - Id|", worst, CAUCHY_TOL));
        g.metric(Metric::info("largest quadrature estimate", estimate));
    }

    fn polynomial_compatibility(&self, g: &mut Group) {
        let (mut worst, mut min_reduction, mut converged) = (0.0f64, f64::INFINITY, 0usize);
        for case in &self.cases {
            let t2 = case.t.mul(&case.t);
            for (k, tk) in [(2usize, t2.clone()), (3, t2.mul(&case.t))] {
                g.report.cases += 1;
                let f = SliceFunction::intrinsic(case.d, Rational::power(k));
                let fine = QuadOptions { nodes: CAUCHY_NODES, ..self.opts() };
                if let Some(r) = g.attempt(&case.label, bounded_calc(&f, &case.t, Side::Left, &fine)) {
                    worst = worst.max(r.operator.distance(&tk));
                }
                let residual = |nodes: usize| {
                    let o = QuadOptions { nodes, max_error: f64::INFINITY, ..self.opts() };
                    bounded_calc(&f, &case.t, Side::Left, &o).map(|r| r.operator.distance(&tk))
                };
                let (Some(coarse), Some(doubled)) = (
                    g.attempt(&case.label, residual(POLYNOMIAL_COARSE_NODES)),
                    g.attempt(&case.label, residual(2 * POLYNOMIAL_COARSE_NODES)),
                ) else {
                    continue;
                };
                if coarse <= POLYNOMIAL_ROUNDOFF * case.scale.powi(k as i32) {
                    converged += 1;
                } else {
                    min_reduction = min_reduction.min(coarse / doubled.max(f64::MIN_POSITIVE));
                }
            }
        }
        g.metric(Metric::at_most("|s^k(T) - T^k| at 512 nodes", worst, POLYNOMIAL_TOL));
        g.metric(Metric::at_least("residual reduction 8 -> 16 nodes", min_reduction, POLYNOMIAL_MIN_REDUCTION));
        g.metric(Metric::info("cases already at roundoff with 8 nodes", converged as f64));
    }

    fn bisectorial_operators(&self, g: &mut Group) {
        let mut failures = 0usize;
        for case in &self.bisectorial {
            g.report.cases += 1;
            if let Some(r) = g.attempt(&case.label, bisectorial_check(&case.t, BISECTORIAL_OMEGA)) {
                if !r.passed {
                    failures += 1;
                    g.fail(format!("{}: spectral angle {:.6}", case.label, r.spectral_angle));
                }
            }
        }
        g.metric(Metric::at_most("bisectorial check failures", failures as f64, 0.0));
        // negative control: spectrum on the imaginary axis
        let d = self.dims()[0];
        let t = CliffordMatrix::diag(&[CliffordNum::generator(d, 1)]).expect("one entry");
        let rejected = bisectorial_check(&t, 1.5).map(|r| !r.passed).unwrap_or(false);
        g.metric(Metric::at_least("imaginary-axis control rejected", rejected as u8 as f64, 1.0));
    }

    fn adjoint_transport(&self, g: &mut Group) {
        let mut worst = [0.0f64; 4];
        let mut intrinsic = [0.0f64; 4];
        let mut counts = [0usize; 4];
        let jobs = self
            .cases
            .iter()
            .enumerate()
            .flat_map(|(i, c)| [(i, c, Calculus::Bounded), (i, c, Calculus::Unbounded)])
            .chain(
                self.bisectorial
                    .iter()
                    .enumerate()
                    .flat_map(|(i, c)| [(i, c, Calculus::Omega), (i, c, Calculus::Hinf)]),
            );
        for (i, case, calculus) in jobs {
            g.report.cases += 1;
            let variant = i % 3;
            let (f, side) = transport_function(calculus, case, variant, (i / 3) % 2);
            let mut opts = QuadOptions { nodes: TRANSPORT_CIRCLE_NODES, ..self.opts() };
            let k = if calculus == Calculus::Unbounded {
                let (x0, y0) = unbounded_pole(case);
                opts.circle = Some((x0, 1.0));
                Some(SpectralSet::from_points(&[(x0, y0, 2)], 1e-12))
            } else {
                None
            };
            let kind = CalculusKind { calculus, side };
            let slot = calculus as usize;
            if let Some(r) = g.attempt(&case.label, adjoint_transport(&f, &case.t, kind, k.as_ref(), &opts)) {
                counts[slot] += 1;
                worst[slot] = worst[slot].max(r.residual / r.bound);
                if let Some(ir) = r.intrinsic_residual {
                    intrinsic[slot] = intrinsic[slot].max(ir / r.bound);
                }
                if !r.passed {
                    g.fail(format!(
                        "{} {}: residual {:.3e}, bound {:.3e}",
                        case.label,
                        kind.name(),
                        r.residual,
                        r.bound
                    ));
                }
            }
        }
        for (slot, name) in ["bounded", "unbounded", "omega", "hinf"].iter().enumerate() {
            g.metric(Metric::at_most(&format!("{name}: residual / bound"), worst[slot], 1.0));
            g.metric(Metric::at_most(&format!("{name}: intrinsic residual / bound"), intrinsic[slot], 1.0));
            g.metric(Metric::info(&format!("{name}: operators"), counts[slot] as f64));
        }
    }

    fn mult_model(&self, g: &mut Group, rng: &mut ChaCha8Rng) {
        let mut spectrum_fail = 0usize;
        let (mut adjoint, mut resolvent, mut product, mut image) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        let mut inverse_fail = 0usize;
        let mut calc = [0.0f64; 3];
        let mut calc_adj = [0.0f64; 3];
        for d in self.dims() {
            for npts in 1..=4 {
                g.report.cases += 1;
                let label = format!("mult-d{d}N{npts}");
                let (space, h) = random_mult_fixture(d, npts, rng);
                match mult_spectrum_check(&space, &h) {
                    Ok(r) if r.passed => {}
                    Ok(r) => {
                        spectrum_fail += 1;
                        g.fail(format!("{label}: spectrum hausdorff {:.3e}", r.hausdorff));
                    }
                    Err(e) => g.fail(format!("{label}: {e}")),
                }
                if let Some(r) = g.attempt(&label, mult_adjoint_check(&space, &h)) {
                    adjoint = adjoint.max(r.max_abs_diff);
                }
                let spec = spectrum_mult(&space, &h).unwrap_or_else(|_| SpectralSet::from_points(&[], 0.0));
                let scale = h.sup_norm().max(1.0);
                for _ in 0..MULT_RESOLVENT_POINTS {
                    let s = random_resolvent_point(&spec, d, scale, 0.05, rng);
                    if let Some(r) = g.attempt(&label, mult_resolvent_check(&space, &h, &s)) {
                        resolvent = resolvent.max(r.left_residual).max(r.right_residual);
                    }
                }
                let (_, other) = random_mult_fixture(d, npts, rng);
                let gh = MeasurableFn::infer(h.values.iter().zip(&other.values).map(|(a, b)| b * a).collect());
                if let (Ok(mg), Ok(mh), Some(gh)) = (build_mult(&space, &other), build_mult(&space, &h), g.attempt(&label, gh)) {
                    if let Some(mgh) = g.attempt(&label, build_mult(&space, &gh)) {
                        product = product.max(mg.mul(&mh).max_abs_diff(&mgh));
                    }
                }
                match mult_inverse_check(&space, &h) {
                    Ok(r) if r.passed => {}
                    Ok(r) => {
                        inverse_fail += 1;
                        g.fail(format!("{label}: inverse residual {:.3e}", r.residual));
                    }
                    Err(e) => g.fail(format!("{label}: {e}")),
                }
                // essran(f∘h) = f(essran(h)) for f(s) = s^2
                let sq = |v: &CliffordNum| Ok(v * v);
                if let (Some(fh), Some(ess)) = (g.attempt(&label, h.map(sq)), g.attempt(&label, essran(&space, &h))) {
                    if let Some(lhs) = g.attempt(&label, essran(&space, &fh)) {
                        let rhs: Vec<CliffordNum> = ess.iter().map(|v| v * v).collect();
                        image = image.max(set_distance(&lhs, &rhs));
                    }
                }
                let fns = [
                    (SliceFunction::intrinsic(d, Rational::power(2)), Calculus::Bounded),
                    (regularizer(d, 1).expect("m = 1 is valid"), Calculus::Omega),
                    (SliceFunction::intrinsic(d, Rational::power(1)), Calculus::Hinf),
                ];
                for (slot, (f, calculus)) in fns.iter().enumerate() {
                    for side in [Side::Left, Side::Right] {
                        let kind = CalculusKind { calculus: *calculus, side };
                        if let Some(r) = g.attempt(&label, mult_calculus_oracle(&space, &h, f, kind, None, &self.opts())) {
                            calc[slot] = calc[slot].max(r.residual / r.estimate);
                            calc_adj[slot] = calc_adj[slot].max(r.adjoint_residual / r.estimate);
                        }
                    }
                }
            }
        }
        g.metric(Metric::at_most("spectrum mismatches", spectrum_fail as f64, 0.0));
        g.metric(Metric::at_most("adjoint vs conjugate function", adjoint, 0.0));
        g.metric(Metric::at_most("resolvent vs pointwise formula", resolvent, crate::mult::MULT_RESOLVENT_TOL));
        g.metric(Metric::at_most("M_g M_h vs M_gh", product, 0.0));
        g.metric(Metric::at_most("inverse failures", inverse_fail as f64, 0.0));
        g.metric(Metric::at_most("essran(f∘h) vs f(essran h)", image, 1e-12));
        for (slot, name) in ["s^2 bounded", "e omega", "s hinf"].iter().enumerate() {
            g.metric(Metric::at_most(&format!("{name}: |f(M_h) - M_f∘h| / estimate"), calc[slot], 1.0));
            g.metric(Metric::at_most(&format!("{name}: |f(M_h)* - M_conj f∘h| / estimate"), calc_adj[slot], 1.0));
        }
    }

    fn norm_inequalities(&self, g: &mut Group, rng: &mut ChaCha8Rng) {
        let dims = self.dims();
        let (mut mult_violations, mut right_violations) = (0usize, 0usize);
        for _ in 0..NORM_SAMPLES {
            g.report.cases += 1;
            let d = dims[rng.random_range(0..dims.len())];
            let npts = rng.random_range(1..=4);
            let magnitude = 10f64.powf(rng.random_range(-3.0..3.0));
            let values = (0..npts).map(|_| random_clifford(d, magnitude, rng)).collect();
            let space = DiscreteMeasureSpace::new(vec![1.0; npts]).expect("positive weights");
            let h = MeasurableFn::infer(values).expect("values share d");
            if let Some(r) = g.attempt("norm", mult_norm_check(&space, &h)) {
                if !r.passed {
                    mult_violations += 1;
                    g.fail(format!("d={d}: |h| {:.6e}, |M_h| {:.6e}, upper {:.6e}", r.sup_norm, r.operator_norm, r.upper));
                }
            }
        }
        for _ in 0..NORM_SAMPLES {
            g.report.cases += 1;
            let d = dims[rng.random_range(0..dims.len())];
            let n = rng.random_range(1..=4);
            let v = ModuleVector::from_coords(n, d, (0..n << d).map(|_| rng.random_range(-1.0..1.0)).collect())
                .expect("coordinate count matches");
            let s = Paravector::new(rng.random_range(-2.0..2.0), (0..d).map(|_| rng.random_range(-2.0..2.0)).collect());
            if let Some(vs) = g.attempt("right multiplication", v.mul_right(&s.to_clifford())) {
                let expect = s.abs() * v.norm();
                if (vs.norm() - expect).abs() > NORM_SLACK * expect.max(f64::MIN_POSITIVE) {
                    right_violations += 1;
                    g.fail(format!("d={d}: |vs| {:.17e} vs |s||v| {:.17e}", vs.norm(), expect));
                }
            }
        }
        g.metric(Metric::at_most("|h| <= |M_h| <= 2^(d/2)|h| violations", mult_violations as f64, 0.0));
        g.metric(Metric::at_most("|vs| = |s||v| violations", right_violations as f64, 0.0));
    }

    fn mult_bisectorial(&self, g: &mut Group, rng: &mut ChaCha8Rng) {
        let (mut ratio, mut right_fail, mut min_samples) = (0.0f64, 0usize, usize::MAX);
        for d in self.dims() {
            let fixtures: [(f64, f64, Vec<CliffordNum>); 3] = [
                (0.05, 0.5, (0..3).map(|_| CliffordNum::scalar(d, rng.random_range(0.2..3.0))).collect()),
                (0.5, 0.9, (0..3).map(|_| extremal_value(d, 0.5, rng)).collect()),
                (0.3, 0.35, {
                    let mut v: Vec<CliffordNum> =
                        (0..2).map(|_| random_sector_value(d, 0.2, 3.0, 0.3, rng).to_clifford()).collect();
                    v.push(extremal_value(d, 0.3, rng));
                    v
                }),
            ];
            for (omega, phi, values) in fixtures {
                g.report.cases += 1;
                let label = format!("d{d} ω={omega} φ={phi}");
                let space = DiscreteMeasureSpace::new(vec![1.0; values.len()]).expect("positive weights");
                let Some(h) = g.attempt(&label, MeasurableFn::infer(values)) else { continue };
                if let Some(r) = g.attempt(&label, mult_bisectorial_bound(&space, &h, omega, phi)) {
                    ratio = ratio.max(r.max_ratio);
                    min_samples = min_samples.min(r.samples);
                    if r.c_right > 2.0 * r.c_left * (1.0 + crate::calculus::BISECTORIAL_SLACK) {
                        right_fail += 1;
                        g.fail(format!("{label}: C_R {:.6e} > 2 C_L {:.6e}", r.c_right, 2.0 * r.c_left));
                    }
                }
            }
        }
        g.metric(Metric::at_most("|S_L(s,M_h)| / closed-form bound", ratio, 1.0));
        g.metric(Metric::at_most("right bound violations", right_fail as f64, 0.0));
        g.metric(Metric::at_least("samples per fixture", min_samples as f64, MULT_BISECTORIAL_MIN_SAMPLES as f64));
    }

    fn sector_geometry(&self, g: &mut Group, rng: &mut ChaCha8Rng) {
        let (mut inner, mut outer, mut short) = (0usize, 0usize, 0usize);
        for d in self.dims() {
            for (s0, y, eps) in [(0.7, 0.0, 0.2), (0.0, 1.0, 1.0), (-0.3, 0.5, 3.0), (2.0, 2.0, 0.01)] {
                g.report.cases += 1;
                let s = Paravector::on_slice(s0, y, &random_unit(d, rng));
                if let Some(r) = g.attempt("sector", sector_geometry_check(&s, eps, SECTOR_SAMPLES, rng)) {
                    inner += r.inner_violations;
                    outer += r.outer_violations;
                    if r.outer_samples < SECTOR_SAMPLES {
                        short += 1;
                    }
                }
            }
        }
        g.metric(Metric::at_most("inner inclusion violations", inner as f64, 0.0));
        g.metric(Metric::at_most("outer inclusion violations", outer as f64, 0.0));
        g.metric(Metric::at_most("cases with too few outer samples", short as f64, 0.0));
    }
}

/// Largest distance from an element of either set to the other set.
fn set_distance(a: &[CliffordNum], b: &[CliffordNum]) -> f64 {
    let one = |x: &[CliffordNum], y: &[CliffordNum]| {
        x.iter().map(|p| y.iter().map(|q| p.distance(q)).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max)
    };
    one(a, b).max(one(b, a))
}

/// A value at angle exactly `omega` on a random slice.
fn extremal_value<R: Rng + ?Sized>(d: usize, omega: f64, rng: &mut R) -> CliffordNum {
    let rho = rng.random_range(0.2..3.0);
    let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    Paravector::on_slice(sign * rho * omega.cos(), rho * omega.sin(), &random_unit(d, rng)).to_clifford()
}

/// Random weights and sector values, with repeated values now and then.
fn random_mult_fixture<R: Rng + ?Sized>(d: usize, npts: usize, rng: &mut R) -> (DiscreteMeasureSpace, MeasurableFn) {
    let weights = (0..npts).map(|_| rng.random_range(0.1..2.0)).collect();
    let mut values: Vec<CliffordNum> = Vec::new();
    for _ in 0..npts {
        if !values.is_empty() && rng.random_bool(0.25) {
            let k = rng.random_range(0..values.len());
            values.push(values[k].clone());
        } else {
            values.push(random_sector_value(d, 0.3, 3.0, BISECTORIAL_OMEGA, rng).to_clifford());
        }
    }
    (
        DiscreteMeasureSpace::new(weights).expect("positive weights"),
        MeasurableFn::infer(values).expect("paravector values"),
    )
}

/// Functions exercising all three chiralities.
pub fn sample_functions(d: usize) -> Vec<SliceFunction> {
    let b = &CliffordNum::one(d) + &CliffordNum::generator(d, d);
    let c = CliffordNum::generator(d, 1).scale(0.5);
    let inv = Rational::new(vec![1.0], vec![2.0, 1.0, 1.0]).expect("nonzero denominator");
    let terms = |chirality| {
        SliceFunction::from_terms(
            chirality,
            d,
            vec![
                SliceTerm { g: Rational::power(2), coef: b.clone() },
                SliceTerm { g: inv.clone(), coef: c.clone() },
            ],
        )
        .expect("valid terms")
    };
    vec![
        SliceFunction::intrinsic(d, Rational::polynomial(vec![1.0, -1.0, 0.0, 2.0])),
        regularizer(d, 2).expect("m = 2 is valid"),
        terms(Chirality::Left),
        terms(Chirality::Right),
    ]
}

/// Pole of the unbounded-calculus test functions, well to the right of the spectrum.
fn unbounded_pole(case: &Case) -> (f64, f64) {
    (case.spec.max_modulus() + 2.0, 0.5)
}

/// Test function for the adjoint-transport group: variant 0 left, 1 right,
/// 2 intrinsic (on the side given by `parity`).
fn transport_function(calculus: Calculus, case: &Case, variant: usize, parity: usize) -> (SliceFunction, Side) {
    let d = case.d;
    let b = &CliffordNum::one(d) + &CliffordNum::generator(d, d);
    let c = CliffordNum::generator(d, 1).scale(0.5);
    let (g1, g2, w) = match calculus {
        Calculus::Bounded => (Rational::power(2), Rational::power(1), -1.0),
        Calculus::Unbounded => {
            let (x0, y0) = unbounded_pole(case);
            let g = Rational::new(vec![1.0], vec![x0 * x0 + y0 * y0, -2.0 * x0, 1.0]).expect("nonzero denominator");
            (g, Rational::constant(1.0), 2.0)
        }
        Calculus::Omega => {
            let e = regularizer_rational(1).expect("m = 1 is valid");
            let e2 = e.mul(&e);
            (e, e2, -0.5)
        }
        Calculus::Hinf => {
            (Rational::power(1), Rational::new(vec![1.0], vec![1.0, 0.0, 1.0]).expect("nonzero denominator"), 1.0)
        }
    };
    let (chirality, side, coefs) = match variant {
        0 => (Chirality::Left, Side::Left, (b, c)),
        1 => (Chirality::Right, Side::Right, (b, c)),
        _ => {
            let side = if parity == 0 { Side::Left } else { Side::Right };
            (Chirality::Intrinsic, side, (CliffordNum::one(d), CliffordNum::scalar(d, w)))
        }
    };
    let f = SliceFunction::from_terms(
        chirality,
        d,
        vec![SliceTerm { g: g1, coef: coefs.0 }, SliceTerm { g: g2, coef: coefs.1 }],
    )
    .expect("valid terms");
    (f, side)
}

/// Whether a name refers to a battery group.
pub fn is_group(name: &str) -> bool {
    GROUPS.iter().any(|(g, _)| *g == name)
}

