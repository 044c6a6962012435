use entropic_energy::laws::{run_suite, LawId, SuiteConfig};

#[test]
fn random_suite_has_no_theorem_failures() {
    for seed in [0, 1, 2] {
        let config = SuiteConfig { seed, trials: 300, ..Default::default() };
        let report = run_suite(&config).unwrap();
        for law in &report.laws {
            if law.theorem {
                assert_eq!(law.failures, 0, "{} failed: {}", law.id, serde_json::to_string_pretty(&law.witnesses).unwrap());
            }
            assert_eq!(law.trials, 300);
        }
        assert!(report.passed());
    }
}

#[test]
fn probe_is_flagged_on_the_battery() {
    let config = SuiteConfig { seed: 5, trials: 20, laws: vec![LawId::CsProbe], ..Default::default() };
    let report = run_suite(&config).unwrap();
    let cs = report.law(LawId::CsProbe).unwrap();
    assert!(cs.failures >= 1);
    assert!(cs.min_slack.unwrap() < 0.0);
    assert!(report.passed());
}
