use pencil_monodromy::pipeline::{run_pipeline, selftest, write_strand_csv, RunConfig, Stages, Status, SCHEMA};

fn numeric_only(p: usize, q: usize) -> RunConfig {
    let mut c = RunConfig::new(p, q);
    c.stages = Stages {
        symbolic: false,
        battery: false,
        alexander: false,
        exact: false,
        flex: false,
    };
    c
}

#[test]
fn full_run_passes_every_verdict() {
    let mut cfg = RunConfig::new(3, 2);
    cfg.alphas = Some(vec![2.0, 1.0]);
    let r = run_pipeline(&cfg).unwrap();
    assert_eq!(r.schema, SCHEMA);
    for v in &r.verdicts {
        assert_eq!(v.status, Status::Pass, "{}: {}", v.name, v.reason);
    }
    assert_eq!(r.alexander.as_ref().unwrap().numeric.to_string(), "t^5 - t^4 + t^3 - t^2 + t - 1");
    assert_eq!(r.curve.degree, 6);
    assert_eq!(r.monodromy.braids.len(), 5);
}

#[test]
fn identical_configs_give_identical_json() {
    let cfg = RunConfig::new(4, 2);
    let a = run_pipeline(&cfg).unwrap().comparable_json().unwrap();
    let b = run_pipeline(&cfg).unwrap().comparable_json().unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    assert!(a.get("timings").is_none());
}

#[test]
fn disabled_stages_are_skipped_with_reason() {
    let r = run_pipeline(&numeric_only(2, 2)).unwrap();
    assert!(r.passed());
    let skipped: Vec<_> = r.verdicts.iter().filter(|v| v.status == Status::Skipped).collect();
    assert!(skipped.len() >= 8);
    assert!(skipped.iter().all(|v| v.reason.contains("disabled")));
    assert_eq!(r.verdict("infinity-check").unwrap().status, Status::Pass);
}

#[test]
fn invalid_config_is_attributed_to_config_stage() {
    let mut c = RunConfig::new(3, 2);
    c.alphas = Some(vec![1.0, 1.0]);
    let e = run_pipeline(&c).unwrap_err();
    assert!(e.to_string().contains("stage `config`"), "{e}");
    let mut c = RunConfig::new(3, 2);
    c.tracker.residual_tol = 0.5;
    assert!(run_pipeline(&c).is_err());
}

#[test]
fn selftest_quick_and_injected_order() {
    let ok = selftest(true, false).unwrap();
    let cases: Vec<_> = ok.runs.iter().map(|r| (r.config.p, r.config.q)).collect();
    assert_eq!(cases, vec![(2, 2), (3, 2)]);
    assert!(ok.passed());
    assert!(ok.summary_table().contains("all pass"));

    let bad = selftest(true, true).unwrap();
    assert!(!bad.passed());
    for r in &bad.runs {
        assert_eq!(r.verdict("infinity-check").unwrap().status, Status::Fail);
    }
}

#[test]
fn strand_csv_has_one_column_pair_per_strand() {
    let cfg = RunConfig::new(2, 2);
    let spec = cfg.validate().unwrap();
    let mut buf = Vec::new();
    write_strand_csv(&spec, &cfg.tracker, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert_eq!(header.split(',').count(), 4 + 2 * 4);
    let rows: Vec<&str> = lines.collect();
    assert!(rows.len() > 100);
    assert!(rows.iter().all(|r| r.split(',').count() == 12));
    let loops: std::collections::BTreeSet<&str> = rows.iter().map(|r| r.split(',').next().unwrap()).collect();
    assert_eq!(loops.len(), 3);
}
