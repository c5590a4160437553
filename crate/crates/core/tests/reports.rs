//! Pipeline reports: verdicts, serialization and replay.

use liftkit::cover::CoverSpec;
use liftkit::pipeline::run_pipeline;
use liftkit::report::{recheck, verify_genset, GeneratingSetReport, Status};
use liftkit::words::w;
use liftkit::EnumerationBound;

fn covers() -> Vec<CoverSpec> {
    vec![CoverSpec::cyclic(2).unwrap(), CoverSpec::cyclic(3).unwrap(), CoverSpec::klein()]
}

#[test]
fn pipelines_verify_and_replay() {
    let b = EnumerationBound::default();
    for cover in covers() {
        let r = run_pipeline(&cover, &b).unwrap();
        assert_eq!(r.status, Status::Verified, "{}: {:?}", cover.kind, r.reasons);
        let d = r.pipeline.as_ref().unwrap();
        assert!(d.all_positive());
        assert!(d.uncovered.is_empty());
        assert_eq!(d.quotient.vertex_sizes.len(), 3);
        assert!(!r.scope.is_empty());
        let back: GeneratingSetReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert!(recheck(&back, &b).ok());
    }
}

#[test]
fn tampered_loop_element_is_caught() {
    let b = EnumerationBound::default();
    let mut r = run_pipeline(&CoverSpec::cyclic(3).unwrap(), &b).unwrap();
    let d = r.pipeline.as_mut().unwrap();
    d.loops[0].element = w("b");
    let out = recheck(&r, &b);
    assert!(!out.ok());
    assert!(out.mismatches.iter().any(|m| m.contains("loop element")));
}

#[test]
fn tampered_status_is_caught() {
    let b = EnumerationBound::default();
    let mut r = verify_genset(&CoverSpec::cyclic(2).unwrap(), &[w("a"), w("c")], &b).unwrap();
    assert_eq!(r.status, Status::Failed);
    r.status = Status::Verified;
    assert!(!recheck(&r, &b).ok());
}

#[test]
fn heavy_modulus_needs_opt_in() {
    let cover = CoverSpec::cyclic(5).unwrap();
    assert!(run_pipeline(&cover, &EnumerationBound::default()).is_err());
}
