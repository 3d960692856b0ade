use fracwave::selftest::{run, suites, Faults};

#[test]
fn all_suites_pass() {
    let report = run(&[], &Faults::default()).unwrap();
    print!("{}", report.to_text());
    assert!(report.passed(), "{}", report.to_text());
    for s in suites() {
        assert!(report.checks.iter().any(|c| c.suite == s.name), "{} ran no checks", s.name);
    }
}
