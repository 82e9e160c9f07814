use lgha::config::{parse_count, SuiteConfig, DEFAULT_TOLERANCES};
use lgha::report::{write_atomic, Check, Compare, Quantity};
use lgha::{suites, CliError, EXIT_BUDGET, EXIT_CONFIG};
use num_complex::Complex64;
use proptest::prelude::*;

#[test]
fn pass_rules() {
    assert!(Check::rel("a", "x", 1.0 + 1e-9, 1.0, 1e-8).pass);
    assert!(!Check::rel("a", "x", 1.0 + 1e-7, 1.0, 1e-8).pass);
    assert!(Check::max_abs("a", "x", 1e-13, 5.0, 1e-12).pass);
    assert!(!Check::max_abs("a", "x", 2e-12, 5.0, 1e-12).pass);
    assert!(Check::stderrs("a", "x", 1.02, 1.0, 0.01, 3.0).pass);
    assert!(!Check::stderrs("a", "x", 1.04, 1.0, 0.01, 3.0).pass);
    assert!(!Check::stderrs("a", "x", 1.0, 1.0, f64::NAN, 3.0).pass);
    assert!(Check::exceeds("a", "x", 0.5, 1.0, 1e-9).pass);
    assert!(!Check::exceeds("a", "x", 1e-12, 1.0, 1e-9).pass);
    assert!(Check::exact("a", "x", true).pass);
    assert!(!Check::exact("a", "x", false).pass);
    let c = Check::rel(
        "a",
        "x",
        Complex64::new(0.0, 2.0),
        Complex64::new(0.0, 1.0),
        1.0,
    );
    assert_eq!((c.abs_err, c.rel_err), (1.0, 1.0));
    assert!(Check::rel("a", "x", 1.0, 0.0, 1.0).rel_err.is_infinite());
}

#[test]
fn check_json_shape() {
    let c = Check::stderrs("n", "anchor", Complex64::new(1.0, -2.0), 1.0, 0.5, 3.0).with_note("mc");
    let v = serde_json::to_value(&c).unwrap();
    assert_eq!(v["lhs"], serde_json::json!([1.0, -2.0]));
    assert_eq!(v["rhs"], 1.0);
    assert_eq!(v["compare"], "std-errs");
    assert_eq!(v["note"], "mc");
    let back: Check = serde_json::from_value(v).unwrap();
    assert_eq!(back, c);
    let plain = serde_json::to_value(Check::exact("n", "a", true)).unwrap();
    assert!(plain.get("stderr").is_none() && plain.get("note").is_none());
    assert_eq!(
        Compare::Exceeds,
        serde_json::from_str("\"exceeds\"").unwrap()
    );
    assert_eq!(Quantity::from(2.5).to_string(), "2.5e0");
}

#[test]
fn config_defaults_and_round_trip() {
    let cfg = SuiteConfig::default();
    cfg.validate().unwrap();
    assert_eq!(SuiteConfig::from_json("{}").unwrap(), cfg);
    let text = serde_json::to_string(&cfg).unwrap();
    assert_eq!(SuiteConfig::from_json(&text).unwrap(), cfg);
    for (k, v) in DEFAULT_TOLERANCES {
        assert_eq!(cfg.tol(k), *v);
    }
    let over = SuiteConfig::from_json(r#"{"tolerances": {"schur": 1e-9}}"#).unwrap();
    assert_eq!(over.tol("schur"), 1e-9);
    assert_eq!(over.so4_bandlimit_twice(), 4);
}

#[test]
fn config_rejections() {
    for text in [
        r#"{"extra": 1}"#,
        r#"{"tolerances": {"schur": -1}}"#,
        r#"{"budgets": {"max_mc_samples": 0}}"#,
        r#"{"budgets": {"max_so4_bandlimit": 1.25}}"#,
        r#"{"suite": "everything"}"#,
    ] {
        let e = SuiteConfig::from_json(text).unwrap_err();
        assert_eq!(e.exit_code(), EXIT_CONFIG, "{text}: {e}");
    }
}

#[test]
fn suite_budget_error_surfaces() {
    let mut cfg = SuiteConfig::default();
    cfg.budgets.max_so4_bandlimit = 1.0;
    let e = suites::run("so4", &cfg).unwrap_err();
    assert!(matches!(e, CliError::Budget(_)));
    assert_eq!(e.exit_code(), EXIT_BUDGET);
    assert!(matches!(
        suites::run("bogus", &cfg),
        Err(CliError::Config(_))
    ));
}

#[test]
fn timings_cover_tagged_criteria() {
    let r = suites::run("hormander", &SuiteConfig::default()).unwrap();
    assert_eq!(r.timings.keys().copied().collect::<Vec<_>>(), [12]);
    assert!(r.checks.iter().any(|c| c.criterion.is_none()));
    let csv = r.to_csv().unwrap();
    assert_eq!(csv.lines().count(), r.checks.len() + 1);
}

#[test]
fn atomic_write_replaces_contents() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("r.json");
    write_atomic(&p, "first").unwrap();
    write_atomic(&p, "second").unwrap();
    assert_eq!(std::fs::read_to_string(&p).unwrap(), "second");
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

proptest! {
    #[test]
    fn parse_count_accepts_both_notations(n in 0u64..1_000_000_000) {
        prop_assert_eq!(parse_count(&n.to_string()), Ok(n as usize));
        prop_assert_eq!(parse_count(&format!("{:e}", n as f64)), Ok(n as usize));
    }

    #[test]
    fn parse_count_rejects_fractions(n in 0u32..1000, frac in 1u32..1000) {
        let s = format!("{n}.{frac:03}");
        prop_assume!(frac % 1000 != 0);
        prop_assert!(parse_count(&s).is_err());
    }
}
