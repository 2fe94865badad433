use syzlab_core::acceptance::{run_all, DEFAULT_SEED};

#[test]
fn acceptance_criteria() {
    let reports = run_all(DEFAULT_SEED);
    for r in &reports {
        println!("{}", r.line());
    }
    let failed: Vec<_> = reports.iter().filter(|r| !r.acceptable()).map(|r| r.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
