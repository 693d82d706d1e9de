use cilab_core::report::Verdict;
use cilab_core::sampling::Exec;
use cilab_core::selftest::*;

#[test]
fn selftest_passes_small() {
    let rep = selftest(1, 1000, Exec::Parallel).unwrap();
    assert_eq!(rep.verdict, Verdict::Pass, "{:#?}", rep.failed_checks());
}
