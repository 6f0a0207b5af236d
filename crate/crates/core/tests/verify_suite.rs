//! The packaged verification panels must pass end to end at the small
//! preset (the CLI `verify` path).

use powersum_core::budget::Budget;
use powersum_core::report::Summary;
use powersum_core::verify::{run_suite, Suite};

#[test]
fn all_suites_pass_at_small_budget() {
    let budget = Budget::small();
    let reports = run_suite(Suite::All, &budget).unwrap();
    assert!(reports.len() >= 15);
    for r in &reports {
        println!("{} [{}] {}", r.check, if r.pass { "ok" } else { "FAIL" }, r.instance);
    }
    let summary = Summary::of(&reports);
    assert!(summary.all_pass(), "{} of {} checks failed", summary.failed, summary.total);
}
