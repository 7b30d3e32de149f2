use harness_cli::selftest::{run_selftest, sov_checks, Level, SelftestOptions};
use harness_cli::Outcome;

#[test]
fn separated_variable_checks_pass() {
    let recs = sov_checks(1.0);
    assert!(recs.iter().all(|r| r.outcome == Outcome::Pass), "{recs:#?}");
}

#[test]
fn one_percent_sigma_perturbation_is_caught() {
    let recs = sov_checks(1.01);
    let tint = &recs[0];
    assert_eq!(tint.outcome, Outcome::Fail, "{tint:#?}");
    assert!(tint.detail.as_deref().unwrap().contains("1.01"));
}

#[test]
fn fast_level_names_every_property() {
    let doc = run_selftest(SelftestOptions::new(Level::Fast), 1);
    assert_eq!(doc.exit_code(), 0);
    let labels: Vec<&str> = doc.records.iter().map(|r| r.label.as_str()).collect();
    assert_eq!(labels.len(), 11, "{labels:?}");
    assert!(labels.iter().any(|l| l.starts_with("barnes")) && labels.iter().any(|l| l.starts_with("dbw")));
    assert_eq!(doc.config.level.as_deref(), Some("fast"));
}
