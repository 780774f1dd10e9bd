use super::*;
use crate::par::Exec;

fn cfg(text: &str) -> ExperimentConfig {
    ExperimentConfig::parse(text).unwrap()
}

#[test]
fn e1_default_battery() {
    let r = run_experiment(&cfg("experiment = E1"), Exec::Sequential).unwrap();
    let Rows::E1(rows) = &r.rows else { panic!() };
    let labels: Vec<&str> = rows.iter().map(|r| r.classification.as_str()).collect();
    assert_eq!(labels.iter().filter(|l| **l == "not-special").count(), 1);
    assert_eq!(labels[4], "not-special");
    assert!(rows[..4].iter().all(|r| r.numerator_terms == 0));
    let csv = String::from_utf8(emit_report(&r, Format::Csv).unwrap()).unwrap();
    assert!(csv.starts_with("polynomial,classification,reason,numerator_terms\n"));
    assert_eq!(csv.lines().count(), 6);
}

#[test]
fn empty_battery_is_header_only() {
    let r = run_experiment(&cfg("experiment = E1\npolynomials = "), Exec::Sequential).unwrap();
    let csv = emit_report(&r, Format::Csv).unwrap();
    assert_eq!(String::from_utf8(csv).unwrap(), "polynomial,classification,reason,numerator_terms\n");
}

#[test]
fn e2_small_run() {
    let c = cfg("experiment = E2\nscale_k = 8\nset = elekes-ap:16\nladder = false");
    let r = run_experiment(&c, Exec::Parallel).unwrap();
    let Rows::E2(rows) = &r.rows else { panic!() };
    assert_eq!(rows.len(), 6);
    assert_eq!(rows[0].triangle_area, 0.0);
    assert_eq!(rows[3].triangle_area, 0.25);
    assert!(rows.iter().all(|r| r.inner_count <= r.outer_count));
    let csv = String::from_utf8(emit_report(&r, Format::Csv).unwrap()).unwrap();
    assert_eq!(csv.lines().next().unwrap(), E2_COLUMNS.join(","));
    assert!(r.audits.iter().any(|a| a.name == "triangle_pins_area" && a.passed));
}

#[test]
fn e3_e4_e5_small_runs() {
    let r = run_experiment(&cfg("experiment = E3\nscale_k = 8"), Exec::Parallel).unwrap();
    assert_eq!(r.rows.len(), 4);
    assert!(r.metric("drift_max_linear_exponent", 10).is_some());

    let r = run_experiment(&cfg("experiment = E4\nscale_k = 8"), Exec::Parallel).unwrap();
    let Rows::E4(rows) = &r.rows else { panic!() };
    assert_eq!(rows.len(), 4);
    assert_eq!((rows[0].scale_k, rows[2].scale_k), (8, 10));
    assert!(r.audits_passed());

    let c = cfg("experiment = E5\nscale_k = 8\nsamples = 5000\nladder = false\nk_sets = line:128; grid-ap:16");
    let r = run_experiment(&c, Exec::Parallel).unwrap();
    let Rows::E5(rows) = &r.rows else { panic!() };
    assert_eq!(rows.len(), 2 * 25);
    assert_eq!(r.metric("flat[line:128]", 8), Some(1.0));
    assert_eq!(r.metric("flat[grid-ap:16]", 8), Some(0.0));
}

#[test]
fn json_round_trip_and_determinism() {
    let c = cfg("experiment = E4\nscale_k = 6\npolynomials = x^2 + x*y + y^2; random-product");
    let a = run_experiment(&c, Exec::Parallel).unwrap();
    let b = run_experiment(&c, Exec::Sequential).unwrap();
    let ja = emit_report(&a, Format::Json).unwrap();
    assert_eq!(ja, emit_report(&b, Format::Json).unwrap());
    assert_eq!(parse_report_json(&ja).unwrap(), a);
    assert_eq!(emit_report(&a, Format::Csv).unwrap(), emit_report(&b, Format::Csv).unwrap());
}

#[test]
fn audit_failures_are_reported() {
    let c = cfg("experiment = E4\nscale_k = 8\naudit_threshold = 0.5\nladder = false");
    let r = run_experiment(&c, Exec::Sequential).unwrap();
    assert!(!r.audits_passed());
    assert_eq!(r.rows.len(), 2);
}

#[test]
fn seeded_instances_are_special() {
    for seed in 0..5 {
        for prod in [false, true] {
            let p = random_composed(seed, prod);
            assert!(crate::web::is_special_form(&p).is_special(), "{p}");
        }
    }
}
