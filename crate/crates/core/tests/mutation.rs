use amcf::evolution::{evolve, Scheme, StepController};
use amcf::geometry::with_flipped_source;
use amcf::verify::{run_criterion, VerifyOptions};
use amcf::ProfileFunction;

fn drift() -> f64 {
    let r0 = ProfileFunction::from_fn(128, |x| 1.0 + 0.2 * (2.0 * x).cos()).unwrap();
    let ctrl = StepController::new(Scheme::SemiImplicitEuler, 1e-3, 0.5);
    evolve(&r0, &ctrl).unwrap().max_volume_drift()
}

#[test]
fn flipped_source_changes_volume_drift() {
    let base = drift();
    let mutated = with_flipped_source(drift);
    println!("volume drift: baseline {base:.3e}, flipped source {mutated:.3e}");
    assert!(mutated > 1e-8);
    assert!((mutated - base).abs() > 0.1 * base);
    assert_eq!(drift(), base);
}

#[test]
fn volume_criterion_fails_under_mutation() {
    let opts = VerifyOptions {
        flip_source: true,
        ..VerifyOptions::default()
    };
    let outcome = run_criterion(1, &opts);
    println!("{outcome}");
    assert!(!outcome.passed);
}
