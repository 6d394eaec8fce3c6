use abshift::sweep::{self, Quantity, SweepSpec, Variable};
use abshift::Error;

fn small() -> sweep::SweepResult {
    let spec = SweepSpec::new(Variable::Flux, -0.5, 0.5, 5, vec![Quantity::SEven, Quantity::SOdd]);
    sweep::run_sweep(&spec).unwrap()
}

#[test]
fn csv_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig.csv");
    let r = small();
    sweep::emit_csv(&r, &path).unwrap();
    let back = sweep::read_csv(&path).unwrap();
    assert_eq!(sweep::to_csv(&back).unwrap(), sweep::to_csv(&r).unwrap());
}

#[test]
fn unwritable_path_reports_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("plain");
    std::fs::write(&blocker, "x").unwrap();
    let target = blocker.join("fig.csv");
    let err = sweep::emit_csv(&small(), &target).unwrap_err();
    assert!(matches!(err, Error::Io { .. }));
    assert!(err.to_string().contains("fig.csv"), "{err}");
    assert!(matches!(sweep::read_csv(&target), Err(Error::Io { .. })));
}
