use std::f64::consts::FRAC_PI_2;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cliffspec::battery::{Battery, BatteryConfig};
use cliffspec::calculus::{
    adjoint_transport, run_calculus, spectral_angle, Calculus, CalculusKind, QuadOptions, Side,
};
use cliffspec::clifford::{DEFAULT_DIM_LIMIT, HARD_DIM_LIMIT};
use cliffspec::mult::{
    build_mult, mult_adjoint_check, mult_bisectorial_bound, mult_calculus_oracle, mult_inverse_check,
    mult_norm_check, mult_resolvent_check, mult_spectrum_check, spectrum_mult, RangeType,
};
use cliffspec::slice::{regularizer, Rational, SliceFunction};
use cliffspec::spectral::{slice_scan, spectrum_exact, spectrum_exact_with_tol, SpectralSet};
use cliffspec::{CliffordMatrix, ImaginaryUnit, Paravector};

use crate::dsl::parse_function;
use crate::error::{CliError, CliResult};
use crate::formats::{
    battery_to_json, calculus_to_json, matrix_from_json, paravector_to_json, render, scan_to_csv,
    space_from_json, spectrum_from_json, spectrum_to_json, transport_to_json, SpaceFile,
};
use crate::io::{read_json, write_atomic};

pub const DLIMIT_VAR: &str = "CLIFFSPEC_DLIMIT";

#[derive(Parser, Debug)]
#[command(name = "cliffspec", version, about = "S-spectra and S-functional calculi of Clifford operators")]
pub struct Cli {
    /// Write the main result here instead of stdout.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// S-spectrum of an operator file.
    Spectrum(SpectrumArgs),
    /// Apply a functional calculus to an operator.
    Apply(ApplyArgs),
    /// Compare f(T*) with f#(T)* for one calculus.
    AdjointCheck(ApplyArgs),
    /// Multiplication operators on a discrete measure space.
    #[command(subcommand)]
    Mult(MultCommand),
    /// Run the randomized verification battery.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    pub operator: PathBuf,
    /// Merge tolerance for clustering eigenvalues into spheres.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Slice-plane grid `x0:x1:y0:y1:steps` of the smallest singular value of Q_s[T].
    #[arg(long, allow_hyphen_values = true)]
    pub scan: Option<String>,
    /// Where to write the scan CSV when the main output is JSON.
    #[arg(long)]
    pub scan_output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct CalcArgs {
    /// bounded-L, bounded-R, unbounded-L, unbounded-R, omega-L, omega-R, hinf-L, hinf-R.
    #[arg(long, default_value = "bounded-L")]
    pub kind: String,
    /// Circle nodes of the reported rule.
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Gauss panels per ray of the reported rule.
    #[arg(long)]
    pub panels: Option<usize>,
    /// Gauss order per panel.
    #[arg(long)]
    pub order: Option<usize>,
    /// Largest accepted quadrature estimate.
    #[arg(long)]
    pub max_err: Option<f64>,
    /// Imaginary unit as comma-separated components `J_1,...,J_d`.
    #[arg(long, allow_hyphen_values = true)]
    pub unit: Option<String>,
    /// Circle contour `center:radius`.
    #[arg(long, allow_hyphen_values = true)]
    pub circle: Option<String>,
    /// Opening angle of the double-sector contour.
    #[arg(long)]
    pub phi: Option<f64>,
    /// Ray radii `r_in:r_out`.
    #[arg(long, allow_hyphen_values = true)]
    pub radii: Option<String>,
    /// Order m of the H∞ regularizer.
    #[arg(long)]
    pub reg_order: Option<usize>,
    /// SpectralSet file with the set K of the unbounded calculus; defaults to the poles of f.
    #[arg(long)]
    pub k_set: Option<PathBuf>,
    /// Fault injection: reverse the sign of ds_J.
    #[arg(long, hide = true)]
    pub flip_ds_sign: bool,
}

#[derive(Args, Debug)]
pub struct ApplyArgs {
    pub operator: PathBuf,
    /// Function in the text syntax, e.g. `poly:[0,0,1]` or `reg:1`.
    pub function: String,
    #[command(flatten)]
    pub calc: CalcArgs,
}

#[derive(Subcommand, Debug)]
pub enum MultCommand {
    /// S-spectrum of M_h from the essential range of h.
    Spectrum { space: PathBuf },
    /// Apply a functional calculus to M_h.
    Apply(Box<MultApplyArgs>),
    /// Check the closed-form multiplication-operator identities.
    Verify(MultVerifyArgs),
}

#[derive(Args, Debug)]
pub struct MultApplyArgs {
    pub space: PathBuf,
    pub function: String,
    #[command(flatten)]
    pub calc: CalcArgs,
}

#[derive(Args, Debug)]
pub struct MultVerifyArgs {
    pub space: PathBuf,
    /// Resolvent test point `s0,s1,...,sd`.
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<String>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Run only these groups (repeatable).
    #[arg(long)]
    pub group: Vec<String>,
    /// Comma-separated `DxN` sizes, e.g. `1x1,2x3`.
    #[arg(long)]
    pub sizes: Option<String>,
    /// Random operators per size.
    #[arg(long)]
    pub per_size: Option<usize>,
    /// Random bisectorial operators per size.
    #[arg(long)]
    pub bisectorial_per_size: Option<usize>,
    /// Fault injection: reverse the sign of ds_J in every contour integral.
    #[arg(long, hide = true)]
    pub flip_ds_sign: bool,
}

/// What a command produced: the main output and whether its checks passed.
pub struct Outcome {
    pub contents: String,
    pub passed: bool,
}

fn parse_err(msg: impl Into<String>) -> CliError {
    CliError::Parse(msg.into())
}

/// Dimension cap from the environment.
pub fn dim_limit() -> CliResult<usize> {
    match std::env::var(DLIMIT_VAR) {
        Err(_) => Ok(DEFAULT_DIM_LIMIT),
        Ok(v) => {
            let d: usize = v.trim().parse().map_err(|_| parse_err(format!("{DLIMIT_VAR}=\"{v}\" is not an integer")))?;
            if d > HARD_DIM_LIMIT {
                return Err(parse_err(format!("{DLIMIT_VAR} = {d} exceeds the supported maximum {HARD_DIM_LIMIT}")));
            }
            Ok(d)
        }
    }
}

fn floats(s: &str, sep: char, count: Option<usize>, what: &str) -> CliResult<Vec<f64>> {
    let v = s
        .split(sep)
        .map(|t| t.trim().parse::<f64>().map_err(|_| parse_err(format!("{what}: bad number \"{t}\""))))
        .collect::<CliResult<Vec<f64>>>()?;
    if let Some(c) = count {
        if v.len() != c {
            return Err(parse_err(format!("{what}: expected {c} values, got {}", v.len())));
        }
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(parse_err(format!("{what}: values must be finite")));
    }
    Ok(v)
}

fn pair(s: &str, what: &str) -> CliResult<(f64, f64)> {
    let v = floats(s, ':', Some(2), what)?;
    Ok((v[0], v[1]))
}

fn load_operator(path: &Path, limit: usize) -> CliResult<CliffordMatrix> {
    matrix_from_json(&read_json(path)?, limit)
}

fn load_space(path: &Path, limit: usize) -> CliResult<SpaceFile> {
    space_from_json(&read_json(path)?, limit)
}

pub fn run(cli: &Cli) -> CliResult<Outcome> {
    let limit = dim_limit()?;
    match &cli.command {
        Command::Spectrum(a) => spectrum(a, limit),
        Command::Apply(a) => {
            let t = load_operator(&a.operator, limit)?;
            apply(&t, &a.function, &a.calc, limit)
        }
        Command::AdjointCheck(a) => {
            let t = load_operator(&a.operator, limit)?;
            adjoint_check(&t, &a.function, &a.calc, limit)
        }
        Command::Mult(MultCommand::Spectrum { space }) => {
            let s = load_space(space, limit)?;
            let spec = spectrum_mult(&s.space, &s.h)?;
            Ok(Outcome { contents: render(&spectrum_to_json(&spec)), passed: true })
        }
        Command::Mult(MultCommand::Apply(a)) => {
            let s = load_space(&a.space, limit)?;
            let m = build_mult(&s.space, &s.h)?;
            apply(&m, &a.function, &a.calc, limit)
        }
        Command::Mult(MultCommand::Verify(a)) => mult_verify(a, limit),
        Command::Verify(a) => verify(a),
    }
}

fn spectrum(a: &SpectrumArgs, limit: usize) -> CliResult<Outcome> {
    let t = load_operator(&a.operator, limit)?;
    let scan = match &a.scan {
        Some(spec) => {
            let v = floats(spec, ':', Some(5), "--scan")?;
            if v[4] < 2.0 || v[4].fract() != 0.0 {
                return Err(parse_err("--scan: steps must be an integer >= 2"));
            }
            Some(scan_to_csv(&slice_scan(&t, (v[0], v[1]), (v[2], v[3]), v[4] as usize)?))
        }
        None => None,
    };
    if a.format == Format::Csv {
        let csv = scan.ok_or_else(|| parse_err("--format csv needs --scan"))?;
        return Ok(Outcome { contents: csv, passed: true });
    }
    if let Some(csv) = &scan {
        let path = a.scan_output.as_deref().ok_or_else(|| parse_err("--scan with JSON output needs --scan-output"))?;
        write_atomic(Some(path), csv)?;
    }
    let spec = match a.tol {
        Some(tol) => spectrum_exact_with_tol(&t, tol)?,
        None => spectrum_exact(&t)?,
    };
    Ok(Outcome { contents: render(&spectrum_to_json(&spec)), passed: true })
}

struct Prepared {
    kind: CalculusKind,
    opts: QuadOptions,
    k: Option<SpectralSet>,
}

fn prepare(calc: &CalcArgs, f: &SliceFunction, d: usize) -> CliResult<Prepared> {
    let kind = CalculusKind::parse(&calc.kind).ok_or_else(|| parse_err(format!("unknown calculus kind \"{}\"", calc.kind)))?;
    let mut opts = QuadOptions::default();
    if let Some(n) = calc.nodes {
        opts.nodes = n;
    }
    if let Some(p) = calc.panels {
        opts.panels = p;
    }
    if let Some(o) = calc.order {
        opts.order = o;
    }
    if let Some(m) = calc.max_err {
        opts.max_error = m;
    }
    if let Some(u) = &calc.unit {
        let v = floats(u, ',', Some(d), "--unit")?;
        opts.unit = Some(ImaginaryUnit::new(v)?);
    }
    if let Some(c) = &calc.circle {
        opts.circle = Some(pair(c, "--circle")?);
    }
    opts.phi = calc.phi;
    if let Some(r) = &calc.radii {
        opts.radii = Some(pair(r, "--radii")?);
    }
    opts.regularizer_order = calc.reg_order;
    opts.flip_ds_sign = calc.flip_ds_sign;
    let k = if kind.calculus == Calculus::Unbounded {
        Some(match &calc.k_set {
            Some(p) => spectrum_from_json(&read_json(p)?)?,
            None => pole_set(f)?,
        })
    } else {
        None
    };
    Ok(Prepared { kind, opts, k })
}

fn pole_set(f: &SliceFunction) -> CliResult<SpectralSet> {
    let poles = f.rational_profile().map(|p| p.poles).unwrap_or_default();
    if poles.is_empty() {
        return Err(CliError::Precondition {
            reason: "missing-k-set",
            message: "f has no poles; pass --k-set for the unbounded calculus".into(),
        });
    }
    let points: Vec<(f64, f64, usize)> = poles.iter().map(|&(x, y)| (x, y.abs(), 1)).collect();
    Ok(SpectralSet::from_points(&points, 1e-12))
}

fn apply(t: &CliffordMatrix, function: &str, calc: &CalcArgs, limit: usize) -> CliResult<Outcome> {
    let f = parse_function(function, t.d(), limit)?;
    let p = prepare(calc, &f, t.d())?;
    let r = run_calculus(p.kind, &f, t, p.k.as_ref(), &p.opts)?;
    Ok(Outcome { contents: render(&calculus_to_json(&r, function)), passed: true })
}

fn adjoint_check(t: &CliffordMatrix, function: &str, calc: &CalcArgs, limit: usize) -> CliResult<Outcome> {
    let f = parse_function(function, t.d(), limit)?;
    let p = prepare(calc, &f, t.d())?;
    let r = adjoint_transport(&f, t, p.kind, p.k.as_ref(), &p.opts)?;
    Ok(Outcome { contents: render(&transport_to_json(&r, function)), passed: r.passed })
}

fn check_entry(name: &str, r: Result<(bool, Value), CliError>) -> (bool, Value) {
    match r {
        Ok((passed, mut v)) => {
            let status = if passed { "passed" } else { "failed" };
            let obj = v.as_object_mut().expect("check details are objects");
            obj.insert("name".into(), json!(name));
            obj.insert("status".into(), json!(status));
            obj.sort_keys();
            (passed, v)
        }
        Err(e) => (false, json!({ "name": name, "status": "error", "reason": e.reason(), "message": e.to_string() })),
    }
}

fn skipped(name: &str, why: &str) -> (bool, Value) {
    (true, json!({ "name": name, "status": "skipped", "reason": why }))
}

fn mult_verify(a: &MultVerifyArgs, limit: usize) -> CliResult<Outcome> {
    let SpaceFile { space, h } = load_space(&a.space, limit)?;
    let d = h.d();
    let mut checks = Vec::new();

    checks.push(check_entry(
        "spectrum",
        mult_spectrum_check(&space, &h)
            .map(|r| (r.passed, json!({ "hausdorff": r.hausdorff, "same_shape": r.same_shape })))
            .map_err(CliError::from),
    ));
    checks.push(check_entry(
        "adjoint",
        mult_adjoint_check(&space, &h)
            .map(|r| (r.passed, json!({ "max_abs_diff": r.max_abs_diff })))
            .map_err(CliError::from),
    ));
    let sup = h.sup_norm();
    let s = match &a.s {
        Some(text) => {
            let v = floats(text, ',', Some(d + 1), "--s")?;
            Paravector::new(v[0], v[1..].to_vec())
        }
        // |s| > sup|h| keeps s off every sphere of the essential range
        None if d == 0 => Paravector::real(0, 2.0 * (1.0 + sup)),
        None => {
            let mut vec = vec![0.0; d];
            vec[0] = 1.7 * (1.0 + sup);
            Paravector::new(0.3, vec)
        }
    };
    checks.push(check_entry(
        "resolvent",
        mult_resolvent_check(&space, &h, &s)
            .map(|r| {
                let details = json!({
                    "s": paravector_to_json(&s),
                    "left_residual": r.left_residual,
                    "right_residual": r.right_residual,
                });
                (r.passed, details)
            })
            .map_err(CliError::from),
    ));
    checks.push(if h.range == RangeType::General {
        skipped("inverse", "values outside N(R_d)")
    } else {
        check_entry(
            "inverse",
            mult_inverse_check(&space, &h)
                .map(|r| (r.passed, json!({ "invertible": r.invertible, "min_abs": r.min_abs, "residual": r.residual })))
                .map_err(CliError::from),
        )
    });
    checks.push(check_entry(
        "norm",
        mult_norm_check(&space, &h)
            .map(|r| {
                let details = json!({ "sup_norm": r.sup_norm, "operator_norm": r.operator_norm, "upper": r.upper });
                (r.passed, details)
            })
            .map_err(CliError::from),
    ));

    let sector = if h.range == RangeType::Paravector && d >= 1 {
        let omega = spectral_angle(&spectrum_mult(&space, &h)?);
        (omega < FRAC_PI_2 - 1e-9).then_some(omega)
    } else {
        None
    };
    match sector {
        Some(omega) => {
            let phi = 0.5 * (omega + FRAC_PI_2);
            checks.push(check_entry(
                "bisectorial-bound",
                mult_bisectorial_bound(&space, &h, omega, phi)
                    .map(|r| {
                        let details = json!({
                            "omega": r.omega,
                            "phi": r.phi,
                            "samples": r.samples,
                            "max_ratio": r.max_ratio,
                            "c_left": r.c_left,
                            "c_right": r.c_right,
                        });
                        (r.passed, details)
                    })
                    .map_err(CliError::from),
            ));
        }
        None => checks.push(skipped("bisectorial-bound", "h is not valued in a double sector")),
    }

    if h.range == RangeType::Paravector {
        let opts = QuadOptions::default();
        let injective = h.values.iter().all(|v| v.abs() > 0.0);
        let square = SliceFunction::intrinsic(d, Rational::power(2));
        let identity = SliceFunction::intrinsic(d, Rational::power(1));
        let reg = regularizer(d, 1)?;
        let cases: [(&str, &SliceFunction, Calculus, Option<&str>); 3] = [
            ("s^2", &square, Calculus::Bounded, None),
            ("reg:1", &reg, Calculus::Omega, sector.is_none().then_some("h is not bisectorial")),
            (
                "s",
                &identity,
                Calculus::Hinf,
                if sector.is_none() {
                    Some("h is not bisectorial")
                } else if !injective {
                    Some("M_h is not injective")
                } else {
                    None
                },
            ),
        ];
        for (label, f, calculus, skip) in cases {
            for side in [Side::Left, Side::Right] {
                let kind = CalculusKind { calculus, side };
                let name = format!("calculus {label} {}", kind.name());
                checks.push(match skip {
                    Some(why) => skipped(&name, why),
                    None => check_entry(
                        &name,
                        mult_calculus_oracle(&space, &h, f, kind, None, &opts)
                            .map(|r| {
                                let details = json!({
                                    "residual": r.residual,
                                    "adjoint_residual": r.adjoint_residual,
                                    "estimate": r.estimate,
                                });
                                (r.passed, details)
                            })
                            .map_err(CliError::from),
                    ),
                });
            }
        }
    } else {
        checks.push(skipped("calculus", "h is not paravector-valued"));
    }

    let passed = checks.iter().all(|(p, _)| *p);
    let report = json!({
        "range": h.range.name(),
        "d": d,
        "points": space.len(),
        "passed": passed,
        "checks": checks.into_iter().map(|(_, v)| v).collect::<Vec<_>>(),
    });
    Ok(Outcome { contents: render(&report), passed })
}

fn parse_sizes(s: &str) -> CliResult<Vec<(usize, usize)>> {
    s.split(',')
        .map(|item| {
            let (d, n) = item.trim().split_once('x').ok_or_else(|| parse_err(format!("--sizes: \"{item}\" is not DxN")))?;
            let d = d.parse().map_err(|_| parse_err(format!("--sizes: bad d in \"{item}\"")))?;
            let n = n.parse().map_err(|_| parse_err(format!("--sizes: bad n in \"{item}\"")))?;
            Ok((d, n))
        })
        .collect()
}

fn verify(a: &VerifyArgs) -> CliResult<Outcome> {
    let mut config = BatteryConfig { seed: a.seed, flip_ds_sign: a.flip_ds_sign, ..BatteryConfig::default() };
    if let Some(s) = &a.sizes {
        config.sizes = parse_sizes(s)?;
    }
    if let Some(p) = a.per_size {
        config.per_size = p;
    }
    if let Some(b) = a.bisectorial_per_size {
        config.bisectorial_per_size = b;
    }
    if !a.group.is_empty() {
        config.groups = Some(a.group.clone());
    }
    let battery = Battery::new(config).map_err(|e| parse_err(e.to_string()))?;
    let report = battery.run();
    for g in &report.groups {
        let tag = match g.criterion {
            Some(c) => format!(" [criterion {c}]"),
            None => String::new(),
        };
        eprintln!("{} {}{tag}", if g.passed { "PASS" } else { "FAIL" }, g.name);
    }
    Ok(Outcome { contents: render(&battery_to_json(&report)), passed: report.passed })
}
