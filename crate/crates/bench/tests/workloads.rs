use liftkit::psi;
use liftkit_bench::{covers, factor_workload, long_word};

#[test]
fn long_words_have_the_requested_length() {
    let x = long_word(50);
    assert!(psi(&x).is_symplectic());
    // exponent 0 letters drop out
    let zeros = (0..50).filter(|i| i % 7 == 3).count();
    assert_eq!(x.letters().len() + zeros, 50);
}

#[test]
fn factor_workloads_refactor() {
    for cover in covers() {
        let curve = if cover.kind == liftkit::cover::CoverKind::Klein { 'a' } else { 'e' };
        let (engine, samples) = factor_workload(curve, &cover, 5);
        for a in samples {
            assert_eq!(psi(&engine.factor(&a).unwrap().word), a);
        }
    }
}
