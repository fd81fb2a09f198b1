//! JSON and CSV encodings of the core types.

use serde_json::{json, Map, Value};

use cliffspec::battery::{BatteryReport, GroupReport, Metric};
use cliffspec::calculus::{CalculusResult, ContourKind, TransportReport};
use cliffspec::clifford::HARD_DIM_LIMIT;
use cliffspec::mult::{DiscreteMeasureSpace, MeasurableFn};
use cliffspec::spectral::SpectralSet;
use cliffspec::{CliffordMatrix, CliffordNum, Paravector, SpectralSphere};

use crate::error::{CliError, CliResult};

/// Significant digits kept when writing spectral data.
pub const SPECTRUM_DIGITS: usize = 11;

fn parse_err(msg: impl Into<String>) -> CliError {
    CliError::Parse(msg.into())
}

/// Rounds to [`SPECTRUM_DIGITS`] significant digits and clears the sign of zero.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    let r: f64 = format!("{:.*e}", SPECTRUM_DIGITS - 1, x).parse().unwrap_or(x);
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn as_f64(v: &Value, what: &str) -> CliResult<f64> {
    v.as_f64().ok_or_else(|| parse_err(format!("{what}: expected a number, got {v}")))
}

fn as_usize(v: &Value, what: &str) -> CliResult<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| parse_err(format!("{what}: expected a non-negative integer, got {v}")))
}

fn field<'a>(obj: &'a Value, key: &str, what: &str) -> CliResult<&'a Value> {
    obj.get(key).ok_or_else(|| parse_err(format!("{what}: missing field \"{key}\"")))
}

/// Checks `d` against the dimension cap.
pub fn check_dim(d: usize, limit: usize) -> CliResult<()> {
    if d > limit {
        Err(CliError::DimLimit { d, limit })
    } else {
        Ok(())
    }
}

pub fn num_to_json(a: &CliffordNum) -> Value {
    let mut coeffs = Map::new();
    for (mask, c) in a.coeffs().iter().enumerate() {
        if *c != 0.0 {
            coeffs.insert(mask.to_string(), json!(c));
        }
    }
    json!({ "d": a.d(), "coeffs": coeffs })
}

pub fn num_from_json(v: &Value, limit: usize) -> CliResult<CliffordNum> {
    let d = as_usize(field(v, "d", "Clifford number")?, "d")?;
    check_dim(d, limit.min(HARD_DIM_LIMIT))?;
    let coeffs = field(v, "coeffs", "Clifford number")?
        .as_object()
        .ok_or_else(|| parse_err("Clifford number: \"coeffs\" must be an object"))?;
    let mut pairs = Vec::with_capacity(coeffs.len());
    for (k, c) in coeffs {
        let mask: u32 = k.parse().map_err(|_| parse_err(format!("blade key \"{k}\" is not a decimal bitmask")))?;
        if (mask as usize) >= 1 << d {
            return Err(parse_err(format!("blade {mask} does not exist for d = {d}")));
        }
        pairs.push((mask, as_f64(c, "coefficient")?));
    }
    CliffordNum::from_pairs(d, &pairs).map_err(|e| parse_err(e.to_string()))
}

pub fn matrix_to_json(t: &CliffordMatrix) -> Value {
    let rows: Vec<Value> =
        (0..t.n()).map(|i| Value::Array((0..t.n()).map(|j| num_to_json(&t.entry(i, j))).collect())).collect();
    json!({ "d": t.d(), "n": t.n(), "rows": rows })
}

pub fn matrix_from_json(v: &Value, limit: usize) -> CliResult<CliffordMatrix> {
    let d = as_usize(field(v, "d", "operator")?, "d")?;
    check_dim(d, limit)?;
    let n = as_usize(field(v, "n", "operator")?, "n")?;
    let rows = field(v, "rows", "operator")?.as_array().ok_or_else(|| parse_err("operator: \"rows\" must be an array"))?;
    if rows.len() != n {
        return Err(parse_err(format!("operator: expected {n} rows, found {}", rows.len())));
    }
    let mut entries = Vec::with_capacity(n * n);
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_array().ok_or_else(|| parse_err(format!("operator: row {i} must be an array")))?;
        if row.len() != n {
            return Err(parse_err(format!("operator: row {i} has {} entries, expected {n}", row.len())));
        }
        for e in row {
            let a = num_from_json(e, limit)?;
            if a.d() != d {
                return Err(parse_err(format!("operator: entry with d = {} in a d = {d} operator", a.d())));
            }
            entries.push(a);
        }
    }
    CliffordMatrix::from_entries(n, d, &entries).map_err(|e| parse_err(e.to_string()))
}

pub fn spectrum_to_json(s: &SpectralSet) -> Value {
    let spheres: Vec<Value> = s
        .spheres
        .iter()
        .map(|p| json!({ "x": round_sig(p.x), "r": round_sig(p.r), "mult": p.multiplicity }))
        .collect();
    json!({ "spheres": spheres, "tol": round_sig(s.tol) })
}

pub fn spectrum_from_json(v: &Value) -> CliResult<SpectralSet> {
    let spheres = field(v, "spheres", "spectral set")?
        .as_array()
        .ok_or_else(|| parse_err("spectral set: \"spheres\" must be an array"))?;
    let mut out = Vec::with_capacity(spheres.len());
    for s in spheres {
        let x = as_f64(field(s, "x", "sphere")?, "x")?;
        let r = as_f64(field(s, "r", "sphere")?, "r")?;
        if r < 0.0 {
            return Err(parse_err("sphere radius must be non-negative"));
        }
        let mult = match s.get("mult") {
            Some(m) => as_usize(m, "mult")?,
            None => 1,
        };
        out.push(SpectralSphere::new(x, r, mult));
    }
    let tol = match v.get("tol") {
        Some(t) => as_f64(t, "tol")?,
        None => 0.0,
    };
    Ok(SpectralSet { spheres: out, tol })
}

/// `x,y,sigma_min` rows with a header line.
pub fn scan_to_csv(rows: &[(f64, f64, f64)]) -> String {
    let mut out = String::from("x,y,sigma_min\n");
    for (x, y, s) in rows {
        out.push_str(&format!("{x},{y},{s:e}\n"));
    }
    out
}

pub struct SpaceFile {
    pub space: DiscreteMeasureSpace,
    pub h: MeasurableFn,
}

pub fn space_from_json(v: &Value, limit: usize) -> CliResult<SpaceFile> {
    let weights = field(v, "weights", "space")?
        .as_array()
        .ok_or_else(|| parse_err("space: \"weights\" must be an array"))?
        .iter()
        .map(|w| as_f64(w, "weight"))
        .collect::<CliResult<Vec<f64>>>()?;
    let values = field(v, "h", "space")?
        .as_array()
        .ok_or_else(|| parse_err("space: \"h\" must be an array"))?
        .iter()
        .map(|e| num_from_json(e, limit))
        .collect::<CliResult<Vec<CliffordNum>>>()?;
    if values.is_empty() {
        return Err(parse_err("space: \"h\" is empty"));
    }
    if values.len() != weights.len() {
        return Err(parse_err(format!("space: {} weights but {} values", weights.len(), values.len())));
    }
    let d = values[0].d();
    if values.iter().any(|x| x.d() != d) {
        return Err(parse_err("space: values of mixed dimension"));
    }
    let space = match v.get("labels") {
        Some(l) => {
            let labels = l
                .as_array()
                .ok_or_else(|| parse_err("space: \"labels\" must be an array"))?
                .iter()
                .map(|s| s.as_str().map(String::from).ok_or_else(|| parse_err("space: labels must be strings")))
                .collect::<CliResult<Vec<String>>>()?;
            DiscreteMeasureSpace::with_labels(labels, weights)
        }
        None => DiscreteMeasureSpace::new(weights),
    }
    .map_err(|e| parse_err(e.to_string()))?;
    let h = MeasurableFn::infer(values).map_err(|e| parse_err(e.to_string()))?;
    Ok(SpaceFile { space, h })
}

pub fn paravector_to_json(s: &Paravector) -> Value {
    json!({ "s0": s.s0, "vec": s.vec })
}

fn contour_to_json(c: &ContourKind) -> Value {
    match c {
        ContourKind::Circle { center, radius } => json!({ "type": "circle", "center": center, "radius": radius }),
        ContourKind::SectorRays { phi, r_in, r_out } => {
            json!({ "type": "sector-rays", "phi": phi, "r_in": r_in, "r_out": r_out })
        }
    }
}

pub fn calculus_to_json(r: &CalculusResult, function: &str) -> Value {
    let mut out = Map::new();
    out.insert("kind".into(), json!(r.kind.name()));
    out.insert("function".into(), json!(function));
    out.insert("estimate".into(), json!(r.estimate));
    out.insert("truncation".into(), json!(r.truncation));
    out.insert("nodes_used".into(), json!(r.nodes_used));
    out.insert("contour".into(), contour_to_json(&r.contour));
    if let Some(m) = r.regularizer_order {
        out.insert("regularizer_order".into(), json!(m));
    }
    if let Some(c) = r.regularizer_check {
        out.insert("regularizer_check".into(), json!(c));
    }
    out.insert("operator".into(), matrix_to_json(&r.operator));
    Value::Object(out)
}

pub fn transport_to_json(r: &TransportReport, function: &str) -> Value {
    json!({
        "kind": r.kind.name(),
        "function": function,
        "residual": r.residual,
        "estimate": r.estimate,
        "intrinsic_residual": r.intrinsic_residual,
        "bound": r.bound,
        "passed": r.passed,
    })
}

fn metric_to_json(m: &Metric) -> Value {
    let kind = match (m.bound, m.lower) {
        (None, _) => "info",
        (Some(_), true) => "at-least",
        (Some(_), false) => "at-most",
    };
    json!({ "name": m.name, "kind": kind, "value": m.value, "bound": m.bound, "passed": m.passed })
}

fn group_to_json(g: &GroupReport) -> Value {
    json!({
        "name": g.name,
        "criterion": g.criterion,
        "passed": g.passed,
        "cases": g.cases,
        "errors": g.errors,
        "metrics": g.metrics.iter().map(metric_to_json).collect::<Vec<_>>(),
        "failures": g.failures,
    })
}

pub fn battery_to_json(r: &BatteryReport) -> Value {
    json!({
        "seed": r.seed,
        "sizes": r.sizes.iter().map(|(d, n)| json!([d, n])).collect::<Vec<_>>(),
        "per_size": r.per_size,
        "flip_ds_sign": r.flip_ds_sign,
        "passed": r.passed,
        "groups": r.groups.iter().map(group_to_json).collect::<Vec<_>>(),
    })
}

/// Pretty JSON with a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}
