//! Acceptance battery: one line per criterion, tolerances pinned here and
//! compared against the values reported by `cliffspec verify --seed 42`.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_cliffspec");

#[derive(Clone, Copy)]
enum Bound {
    AtMost(f64),
    AtLeast(f64),
}

struct Pin {
    group: &'static str,
    metric: String,
    bound: Bound,
}

fn at_most(group: &'static str, metric: impl Into<String>, v: f64) -> Pin {
    Pin { group, metric: metric.into(), bound: Bound::AtMost(v) }
}

fn at_least(group: &'static str, metric: impl Into<String>, v: f64) -> Pin {
    Pin { group, metric: metric.into(), bound: Bound::AtLeast(v) }
}

fn pins(criterion: u8) -> Vec<Pin> {
    match criterion {
        1 => vec![
            at_most("first-order", "disagreements outside band", 0.0),
            at_least("first-order", "on-spectrum samples", 1.0),
        ],
        2 => vec![at_most("resolvent-factorization", "residual / condition", 1e-10)],
        3 => vec![
            at_most("adjoint-spectrum", "hausdorff distance", 1e-9),
            at_most("adjoint-spectrum", "multiplicity mismatches", 0.0),
        ],
        4 => vec![
            at_most("resolvent-adjoint", "S_L(s,T*) vs S_R(conj s,T)*", 1e-10),
            at_most("resolvent-adjoint", "S_R(s,T*) vs S_L(conj s,T)*", 1e-10),
        ],
        5 => vec![at_most("cauchy-normalization", "|1(T) - Id|", 1e-8)],
        6 => vec![
            at_most("polynomial-compatibility", "|s^k(T) - T^k| at 512 nodes", 1e-6),
            at_least("polynomial-compatibility", "residual reduction 8 -> 16 nodes", 4.0),
        ],
        7 => ["bounded", "unbounded", "omega", "hinf"]
            .iter()
            .flat_map(|c| {
                [
                    at_most("adjoint-transport", format!("{c}: residual / bound"), 1.0),
                    at_most("adjoint-transport", format!("{c}: intrinsic residual / bound"), 1.0),
                    at_least("adjoint-transport", format!("{c}: operators"), 1.0),
                ]
            })
            .collect(),
        8 => vec![
            at_most("mult-model", "spectrum mismatches", 0.0),
            at_most("mult-model", "adjoint vs conjugate function", 0.0),
            at_most("mult-model", "resolvent vs pointwise formula", 1e-10),
            at_most("mult-model", "s^2 bounded: |f(M_h) - M_f∘h| / estimate", 1.0),
            at_most("mult-model", "s^2 bounded: |f(M_h)* - M_conj f∘h| / estimate", 1.0),
            at_most("mult-model", "e omega: |f(M_h) - M_f∘h| / estimate", 1.0),
            at_most("mult-model", "e omega: |f(M_h)* - M_conj f∘h| / estimate", 1.0),
            at_most("mult-model", "s hinf: |f(M_h) - M_f∘h| / estimate", 1.0),
            at_most("mult-model", "s hinf: |f(M_h)* - M_conj f∘h| / estimate", 1.0),
        ],
        9 => vec![
            at_most("norm-inequalities", "|h| <= |M_h| <= 2^(d/2)|h| violations", 0.0),
            at_most("norm-inequalities", "|vs| = |s||v| violations", 0.0),
        ],
        10 => vec![
            at_most("mult-bisectorial", "|S_L(s,M_h)| / closed-form bound", 1.0),
            at_most("mult-bisectorial", "right bound violations", 0.0),
            at_least("mult-bisectorial", "samples per fixture", 1600.0),
        ],
        11 => vec![
            at_most("sector-geometry", "inner inclusion violations", 0.0),
            at_most("sector-geometry", "outer inclusion violations", 0.0),
            at_most("sector-geometry", "cases with too few outer samples", 0.0),
        ],
        _ => unreachable!(),
    }
}

fn run_verify(out: &Path, extra: &[&str]) -> (Option<i32>, f64) {
    let start = Instant::now();
    let status = Command::new(BIN)
        .args(["verify", "--seed", "42", "-o"])
        .arg(out)
        .args(extra)
        .output()
        .expect("cliffspec runs");
    (status.status.code(), start.elapsed().as_secs_f64())
}

fn group<'a>(report: &'a Value, name: &str) -> Option<&'a Value> {
    report["groups"].as_array()?.iter().find(|g| g["name"] == name)
}

fn metric(g: &Value, name: &str) -> Option<f64> {
    g["metrics"].as_array()?.iter().find(|m| m["name"] == name)?["value"].as_f64()
}

/// Checks the pins of one criterion; returns the pass flag and a summary.
fn check(report: &Value, criterion: u8) -> (bool, String) {
    let mut ok = true;
    let mut notes = Vec::new();
    for pin in pins(criterion) {
        let Some(g) = group(report, pin.group) else {
            return (false, format!("group {} missing", pin.group));
        };
        let healthy = g["passed"] == true && g["errors"] == 0 && g["cases"].as_u64().unwrap_or(0) > 0;
        ok &= healthy;
        match (metric(g, &pin.metric), pin.bound) {
            (Some(v), Bound::AtMost(b)) => {
                ok &= v <= b;
                notes.push(format!("{} = {v:.3e} <= {b:e}", pin.metric));
            }
            (Some(v), Bound::AtLeast(b)) => {
                ok &= v >= b;
                notes.push(format!("{} = {v:.3e} >= {b:e}", pin.metric));
            }
            (None, _) => {
                ok = false;
                notes.push(format!("{} missing", pin.metric));
            }
        }
    }
    (ok, notes.join("; "))
}

#[test]
fn acceptance() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first.json");
    let second = dir.path().join("second.json");
    let (code, secs) = run_verify(&first, &[]);
    println!("verify --seed 42: exit {code:?} in {secs:.1} s");
    let (code2, _) = run_verify(&second, &[]);

    let text = std::fs::read(&first).unwrap();
    let report: Value = serde_json::from_slice(&text).unwrap();
    let sizes: Vec<(u64, u64)> = report["sizes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| (p[0].as_u64().unwrap(), p[1].as_u64().unwrap()))
        .collect();
    let expected_sizes: Vec<(u64, u64)> = (1..=3).flat_map(|d| (1..=4).map(move |n| (d, n))).collect();
    assert_eq!(sizes, expected_sizes, "battery must cover d in 1..=3, n in 1..=4");
    assert_eq!(report["per_size"], 50);

    let mut all = true;
    for criterion in 1..=11u8 {
        let (ok, notes) = check(&report, criterion);
        all &= ok;
        println!("criterion {criterion:2}: {} ({notes})", if ok { "PASS" } else { "FAIL" });
    }
    let identical = text == std::fs::read(&second).unwrap() && code == code2;
    all &= identical;
    println!(
        "criterion 12: {} (two runs with seed 42 byte-identical: {identical})",
        if identical { "PASS" } else { "FAIL" }
    );
    all &= code == Some(0) && report["passed"] == true;
    assert!(all, "acceptance criteria failed");
}

/// The tests must be able to fail: a reversed ds_J breaks normalization.
#[test]
fn fault_injection_is_detected() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("flipped.json");
    let (code, _) = run_verify(&out, &["--group", "cauchy-normalization", "--flip-ds-sign"]);
    let report: Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    let failed = code == Some(1) && group(&report, "cauchy-normalization").is_some_and(|g| g["passed"] == false);
    println!("fault injection: {}", if failed { "PASS (cauchy-normalization fails)" } else { "FAIL" });
    assert!(failed);
}
