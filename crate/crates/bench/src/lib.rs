//! Inputs shared by the benchmarks in `benches/`.

use liftkit::cover::CoverSpec;
use liftkit::stabilizers::FactorEngine;
use liftkit::{SymplecticMatrix, TwistWord};

/// A long word cycling through the chain twists with varying exponents.
pub fn long_word(len: usize) -> TwistWord {
    let text: Vec<String> = (0..len).map(|i| format!("{}^{}", ['a', 'b', 'c', 'd', 'e'][i % 5], (i % 7) as i64 - 3)).collect();
    TwistWord::parse(&text.join(" ")).expect("generated word parses")
}

pub fn covers() -> Vec<CoverSpec> {
    vec![CoverSpec::cyclic(2).expect("cover"), CoverSpec::cyclic(3).expect("cover"), CoverSpec::klein()]
}

/// An engine with a batch of seeded stabilizer elements to factor.
pub fn factor_workload(curve: char, cover: &CoverSpec, count: u64) -> (FactorEngine, Vec<SymplecticMatrix>) {
    let engine = FactorEngine::new(curve, cover).expect("engine");
    let samples = (0..count).map(|s| engine.sample_seeded(s, 12)).collect();
    (engine, samples)
}
