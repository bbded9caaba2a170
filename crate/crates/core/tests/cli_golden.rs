//! Reports are a stable contract: each case is compared with a checked-in
//! JSON file after zeroing timings. Set `UPDATE_GOLDEN=1` to rewrite them.

use serde_json::Value;
use univdef::cli::{execute, Report, Verdict};

fn zero_timings(v: &mut Value) {
    match v {
        Value::Object(map) => {
            for (k, x) in map.iter_mut() {
                if k == "elapsed_ms" {
                    *x = Value::from(0);
                } else {
                    zero_timings(x);
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(zero_timings),
        _ => {}
    }
}

fn golden(name: &str, args: &[&str], code: i32) {
    let out = execute(std::iter::once("univdef").chain(args.iter().copied()));
    assert_eq!(out.code, code, "{name}: {}", out.stderr);
    let report: Report = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(report.verdict.exit_code(), code);
    let mut value: Value = serde_json::from_str(&out.stdout).unwrap();
    zero_timings(&mut value);
    let text = serde_json::to_string_pretty(&value).unwrap() + "\n";
    let path = format!("{}/tests/golden/{name}.json", env!("CARGO_MANIFEST_DIR"));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &text).unwrap();
        return;
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {path}"));
    assert_eq!(text, want, "{name} differs from {path}");
}

#[test]
fn order_of_sigma() {
    golden("order", &["order", "--ring", "F5", "--prec", "16"], 0);
}

#[test]
fn conductor_of_sigma() {
    golden("conductor", &["conductor", "--ring", "F5", "--prec", "8"], 0);
}

#[test]
fn normal_form_of_a_conjugate() {
    golden("normal_form", &["normal-form", "--series", "sigma", "--conjugate-by", "t + t^2", "--prec", "8"], 0);
}

#[test]
fn versal_check_cyclo2() {
    golden("versal_check", &["versal-check", "--ring", "cyclo(2)", "--prec", "8"], 0);
}

#[test]
fn iterates_cyclo3() {
    golden("iterates", &["iterates", "--ring", "cyclo(3)", "--k", "5", "--prec", "12"], 0);
}

#[test]
fn tangent_sweep() {
    golden("tangent", &["tangent", "--prec-sweep", "8,12"], 0);
}

#[test]
fn universality_dual_numbers() {
    golden("universality", &["universality", "--ring", "F5[e]/(e^2)", "--prec", "4"], 0);
}

#[test]
fn proof_chain_with_sign_counterexample() {
    golden("proof_chain", &["proof-chain", "--ring", "F5[e1]/(e1^4)"], 1);
}

#[test]
fn obstruction_z25() {
    golden("obstruction", &["obstruction", "--n", "2", "--prec", "8"], 0);
}

#[test]
fn coefficient_equations() {
    golden("coeff_eqs", &["coeff-eqs", "--samples", "8", "--oracle-max-cardinality", "25"], 0);
}

#[test]
fn usage_and_size_errors_exit_2() {
    assert_eq!(execute(["univdef", "order", "--prec"]).code, 2);
    assert_eq!(execute(["univdef", "bogus"]).code, 2);
    assert_eq!(execute(["univdef", "order", "--ring", "F7", "--prec", "8"]).code, 2);
    let big = execute(["univdef", "universality", "--ring", "F5[e]/(e^6)", "--prec", "4"]);
    assert_eq!(big.code, 2);
    assert!(big.stderr.contains("exceeds"), "{}", big.stderr);
    assert_eq!(execute(["univdef", "--version"]).code, 0);
}

#[test]
fn indeterminate_and_failing_verdicts() {
    let out = execute(["univdef", "order", "--ring", "F5", "--prec", "8", "--series", "t + t^2", "--cap", "10"]);
    let r: Report = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(r.verdict, Verdict::Indeterminate);
    assert_eq!(out.code, 1);
    let out = execute(["univdef", "order", "--ring", "F5", "--prec", "8", "--expect", "4"]);
    let r: Report = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(r.verdict, Verdict::Fail);
    let out = execute(["univdef", "conductor", "--ring", "F5", "--prec", "8", "--series", "t"]);
    let r: Report = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(r.verdict, Verdict::Indeterminate);
}

#[test]
fn jobs_do_not_change_reports() {
    let run = |jobs: &str| {
        let out = execute(["univdef", "--jobs", jobs, "universality", "--ring", "F5[e]/(e^2)", "--prec", "4"]);
        let mut v: Value = serde_json::from_str(&out.stdout).unwrap();
        zero_timings(&mut v);
        v
    };
    assert_eq!(run("1"), run("3"));
}

#[test]
fn text_rendering() {
    let out = execute(["univdef", "--format", "text", "conductor", "--ring", "F5", "--prec", "8"]);
    assert!(out.stdout.starts_with("conductor: pass"), "{}", out.stdout);
}
