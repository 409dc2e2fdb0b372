use quiverlab::fixtures::{run_fixture, FIXTURE_IDS};

#[test]
fn every_fixture_table_replays() {
    for id in FIXTURE_IDS {
        let report = run_fixture(id).unwrap();
        print!("{id}\n{}", report.table());
        assert!(report.passed(), "fixture {id} failed");
    }
}
