use icg::verify::{verify_order, verify_range, verify_transitivity, Status, TSpec, VerifyOptions};
use icg::DEFAULT_ORACLE_BOUND;

#[test]
fn sweep_is_clean_and_deterministic() {
    let opts = VerifyOptions::default();
    let first = verify_range(2, 150, &opts).unwrap();
    assert!(first.passed(), "mismatches: {:?}", first.mismatches);
    assert_eq!(first.mismatch_count, 0);
    for order in &first.orders {
        assert!(order.exhaustive, "n = {}", order.n);
        assert!(order.reduction_holds, "n = {}", order.n);
        assert!(order.monotone_violations.is_empty(), "n = {}", order.n);
        assert!(order.eq1_violations.is_empty(), "n = {}", order.n);
        assert!(order.tight_above_k.is_empty(), "n = {}", order.n);
    }
    let second = verify_range(2, 150, &opts).unwrap();
    assert_eq!(
        serde_json::to_vec(&first).unwrap(),
        serde_json::to_vec(&second).unwrap()
    );
}

#[test]
fn order_540_attains_r_at_t_equals_k() {
    let report = verify_order(540, &VerifyOptions::default()).unwrap();
    let rec = report
        .records
        .iter()
        .find(|r| r.t == TSpec::Exactly(3))
        .unwrap();
    assert_eq!((rec.observed_max, rec.status), (5, Status::Match));
    assert!(report.is_clean());
}

#[test]
fn fail_fast_stops_early_only_on_failure() {
    let opts = VerifyOptions {
        fail_fast: true,
        ..VerifyOptions::default()
    };
    let report = verify_range(2, 60, &opts).unwrap();
    assert_eq!(report.orders_checked, 59);
}

#[test]
fn transitivity_holds() {
    let report = verify_transitivity(100, DEFAULT_ORACLE_BOUND).unwrap();
    assert!(report.passed(), "{:?}", report.failures);
}

#[test]
fn json_report_round_trips() {
    let report = verify_range(2, 20, &VerifyOptions::default()).unwrap();
    let json = serde_json::to_string(&report).unwrap();
    let back: icg::verify::RangeReport = serde_json::from_str(&json).unwrap();
    assert_eq!(back, report);
    assert!(json.contains("\"schema_version\":1"));
}
