//! The built-in identity checks as a whole: everything passes at default
//! tolerances, filtering works, and an impossible tolerance fails in a
//! controlled way (a failed row, not a panic).

use hilbert_mu::run_all;

#[test]
fn every_check_passes_at_default_tolerances() {
    let rows = run_all(None, None);
    assert_eq!(rows.len(), 8, "expected the full checklist");
    for row in &rows {
        assert!(
            row.passed,
            "check {} failed: residual {} at {}",
            row.name, row.worst_residual, row.worst_input
        );
        assert!(row.samples > 0, "check {} sampled nothing", row.name);
        assert!(!row.worst_input.is_empty());
    }
    // names are unique and stable
    let mut names: Vec<&str> = rows.iter().map(|r| r.name.as_str()).collect();
    names.sort_unstable();
    names.dedup();
    assert_eq!(names.len(), 8);
}

#[test]
fn substring_filter_selects_matching_checks() {
    let rows = run_all(None, Some("kernel"));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].name, "kernel_forms");

    let rows = run_all(None, Some("generating"));
    assert_eq!(rows.len(), 2);

    let rows = run_all(None, Some("no such check"));
    assert!(rows.is_empty());
}

#[test]
fn impossible_tolerances_fail_without_panicking() {
    let rows = run_all(Some(1e-30), Some("classical_norm"));
    assert_eq!(rows.len(), 1);
    let row = &rows[0];
    assert!(!row.passed);
    assert!(row.worst_residual > 1e-30);
    assert!(
        !row.worst_input.is_empty(),
        "a failing check must say where it failed"
    );
}

#[test]
fn looser_tolerances_still_pass() {
    let rows = run_all(Some(1e-3), Some("exp_lower_bound"));
    assert_eq!(rows.len(), 1);
    assert!(rows[0].passed);
}
