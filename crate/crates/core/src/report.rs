//! Verification reports: braid certificates, generating-set checks and the
//! independent re-check of a saved report.

use serde::{Deserialize, Serialize};

use crate::bound::EnumerationBound;
use crate::cover::{make_cover, CoverFile, CoverKind, CoverSpec};
use crate::graph::{subgroup_elements, GraphError};
use crate::stabilizers::gamma0_words;
use crate::symplectic::{MatrixGroup, SymplecticMatrix};
use crate::words::{braid_equal, psi, psi_mod, w, BraidVerdict, TwistWord};

pub const TOOL: &str = "liftkit";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Verified,
    Partial,
    Failed,
}

/// Equality of two twist words, decided in the braid group and compared under `Ψ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BraidCertificate {
    pub name: String,
    pub lhs: TwistWord,
    pub rhs: TwistWord,
    /// `EQUAL`, `NOT-EQUAL-IN-ARTIN` or `UNSUPPORTED`.
    pub verdict: String,
    pub psi_agree: bool,
    /// `certified`, `psi-consistent, braid-undecided`, or `refuted`.
    pub outcome: String,
}

pub fn verdict_str(v: BraidVerdict) -> &'static str {
    match v {
        BraidVerdict::Equal => "EQUAL",
        BraidVerdict::NotEqualInArtin => "NOT-EQUAL-IN-ARTIN",
        BraidVerdict::Unsupported => "UNSUPPORTED",
    }
}

pub fn certify(name: &str, lhs: &TwistWord, rhs: &TwistWord) -> BraidCertificate {
    let v = braid_equal(lhs, rhs);
    let psi_agree = psi(lhs) == psi(rhs);
    let outcome = match (v, psi_agree) {
        (BraidVerdict::Equal, true) => "certified",
        (_, true) => "psi-consistent, braid-undecided",
        _ => "refuted",
    };
    BraidCertificate {
        name: name.to_string(),
        lhs: lhs.clone(),
        rhs: rhs.clone(),
        verdict: verdict_str(v).to_string(),
        psi_agree,
        outcome: outcome.to_string(),
    }
}

impl BraidCertificate {
    pub fn certified(&self) -> bool {
        self.outcome == "certified"
    }
}

/// Word identities used when simplifying the assembled generating sets.
pub fn standard_identities() -> Vec<(&'static str, TwistWord, TwistWord)> {
    let x = w("b^3 c b^3 d c b^3 c d");
    vec![
        ("(bc)^6 = (b^2 c)^4", w("(b c)^6"), w("(b^2 c)^4")),
        ("(b^2 c)^4 = (b^3 c)^3", w("(b^2 c)^4"), w("(b^3 c)^3")),
        ("bcd (bc)^6 (bcd)^-1 = (cd)^6", w("b c d (b c)^6 d^-1 c^-1 b^-1"), w("(c d)^6")),
        ("b a^2 b^-1 = a^-1 b^2 a", w("b a^2 b^-1"), w("a^-1 b^2 a")),
        ("(ab)^3 = b^-1 a b^-1 b^3 a b^3", w("(a b)^3"), w("b^-1 a b^-1 b^3 a b^3")),
        ("c^-1 (ab)^6 c = (a b c^2 b^-1)^4", w("c^-1 (a b)^6 c"), w("(a b c^2 b^-1)^4")),
        ("b^-1 c (ab)^6 c^-1 b = c b c^-1 (ab)^6 c b^-1 c^-1", w("b^-1 c (a b)^6 c^-1 b"), w("c b c^-1 (a b)^6 c b^-1 c^-1")),
        (
            "b^2 c^2 d (bc)^6 (b^2 c^2 d)^-1 = X (b^3 c)^3 X^-1",
            w("b^2 c^2 d (b c)^6 d^-1 c^-2 b^-2"),
            w("(b^3 c)^3").conjugate_by(&x),
        ),
        ("b^2 c d (bc)^6 (b^2 c d)^-1 = b (cd)^6 b^-1", w("b^2 c d (b c)^6 d^-1 c^-1 b^-2"), w("b (c d)^6 b^-1")),
    ]
}

pub fn standard_certificates() -> Vec<BraidCertificate> {
    standard_identities().iter().map(|(n, l, r)| certify(n, l, r)).collect()
}

/// Per-generator liftability verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorVerdict {
    pub word: TwistWord,
    pub liftable: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureVerdict {
    pub k: u32,
    pub generated_order: usize,
    pub subgroup_order: usize,
    pub equal: bool,
}

/// `⟨Ψ_k(gens)⟩` against `G_k`.
pub fn closure_verdict(cover: &CoverSpec, gens: &[TwistWord], bound: &EnumerationBound) -> Result<ClosureVerdict, GraphError> {
    Ok(closure_verdict_in(&subgroup_elements(cover, bound)?, gens))
}

/// As [`closure_verdict`], with `G_k` already enumerated.
pub fn closure_verdict_in(group: &MatrixGroup, gens: &[TwistWord]) -> ClosureVerdict {
    let k = group.modulus();
    let images: Vec<SymplecticMatrix> = gens.iter().map(|g| psi_mod(g, k)).collect();
    let generated = MatrixGroup::generated_by(&images, k);
    ClosureVerdict { k, generated_order: generated.order(), subgroup_order: group.order(), equal: generated == *group }
}

/// The built-in generating set for a cover.
pub fn default_generators(cover: &CoverSpec) -> Vec<TwistWord> {
    match cover.kind {
        CoverKind::Cyclic { k: 2 } => ["a", "b^2", "c", "d", "e"].iter().map(|s| w(s)).collect(),
        CoverKind::Cyclic { k: 3 } => ["a", "b^3", "c", "d", "e", "I"].iter().map(|s| w(s)).collect(),
        CoverKind::Cyclic { k } => main_theorem_set(k, SecondaryIndexSet::Positive),
        CoverKind::Klein => ["a", "b", "c^2", "d", "e"].iter().map(|s| w(s)).collect(),
        CoverKind::Elementary { .. } => vec![],
    }
}

/// Index range for the conjugates of `(bc)^6` in the main generating set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SecondaryIndexSet {
    /// `1 ≤ i, j < k`.
    Positive,
    /// `-k < i, j ≤ 0`.
    NonPositive,
}

/// `𝕊 ∪ {a, b^k, c, d, e, I} ∪ 𝕊′ ∪ 𝕊″` for the `k`-fold cyclic cover.
pub fn main_theorem_set(k: u32, variant: SecondaryIndexSet) -> Vec<TwistWord> {
    let ki = k as i64;
    let mut out: Vec<TwistWord> = Vec::new();
    let mut push = |g: TwistWord| {
        if !out.contains(&g) {
            out.push(g);
        }
    };
    for g in gamma0_words(k) {
        push(g);
    }
    for s in ["a", &format!("b^{k}"), "c", "d", "e", "I"] {
        push(w(s));
    }
    for j in 1..ki {
        let jb = crate::arith::mod_inverse(j, k).unwrap_or(1);
        push(w(&format!("b^{} a b^{}", 1 - j, 1 - jb)));
    }
    push(w("(b c)^6"));
    let range: Vec<i64> = match variant {
        SecondaryIndexSet::Positive => (1..ki).collect(),
        SecondaryIndexSet::NonPositive => (-ki + 1..=0).collect(),
    };
    for &i in &range {
        for &j in &range {
            push(w("(b c)^6").conjugate_by(&w(&format!("b^{i} c^{j} d"))));
        }
    }
    out
}

/// Limits of the evidence, carried in every report.
pub fn scope_notes() -> Vec<String> {
    vec![
        "generation is verified modulo k only; equality of the integral liftable groups is not machine-checked".into(),
        "Torelli-level generation of stabilizers is assumed, not verified".into(),
    ]
}

/// Report for a generating-set check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratingSetReport {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub cover: CoverFile,
    pub status: Status,
    pub reasons: Vec<String>,
    /// What the evidence does not establish.
    #[serde(default)]
    pub scope: Vec<String>,
    pub generators: Vec<GeneratorVerdict>,
    pub closure: ClosureVerdict,
    pub braid_certificates: Vec<BraidCertificate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pipeline: Option<crate::pipeline::PipelineDetail>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<Timestamp>,
}

/// Wall-clock data, excluded from reproducibility comparisons.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timestamp {
    pub unix_seconds: u64,
    pub elapsed_ms: u64,
}

impl Timestamp {
    pub fn since(start: std::time::Instant) -> Self {
        let unix_seconds =
            std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        Timestamp { unix_seconds, elapsed_ms: start.elapsed().as_millis() as u64 }
    }
}

impl GeneratingSetReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }
}

/// Checks liftability of each generator and compares the closure mod `k` with `G_k`.
pub fn verify_genset(cover: &CoverSpec, gens: &[TwistWord], bound: &EnumerationBound) -> Result<GeneratingSetReport, GraphError> {
    let generators: Vec<GeneratorVerdict> = gens
        .iter()
        .map(|g| GeneratorVerdict { word: g.clone(), liftable: cover.is_liftable(&psi(g)).unwrap_or(false) })
        .collect();
    let closure = closure_verdict(cover, gens, bound)?;
    let mut reasons = Vec::new();
    for g in generators.iter().filter(|g| !g.liftable) {
        reasons.push(format!("generator {} is not liftable", g.word));
    }
    if !closure.equal {
        reasons.push(format!(
            "closure mod {} has order {}, the liftable image has order {}",
            closure.k, closure.generated_order, closure.subgroup_order
        ));
    }
    let status = if reasons.is_empty() { Status::Verified } else { Status::Failed };
    Ok(GeneratingSetReport {
        tool: TOOL.into(),
        version: VERSION.into(),
        command: "verify-genset".into(),
        cover: CoverFile::from_kind(&cover.kind),
        status,
        reasons,
        scope: scope_notes(),
        generators,
        closure,
        braid_certificates: vec![],
        pipeline: None,
        timestamp: None,
    })
}

/// Outcome of replaying a saved report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecheckOutcome {
    pub checks: usize,
    pub mismatches: Vec<String>,
}

impl RecheckOutcome {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Recomputes every verdict in `report` from its words alone.
pub fn recheck(report: &GeneratingSetReport, bound: &EnumerationBound) -> RecheckOutcome {
    let mut out = RecheckOutcome { checks: 0, mismatches: vec![] };
    let mut check = |ok: bool, what: String| {
        out.checks += 1;
        if !ok {
            out.mismatches.push(what);
        }
    };
    let cover = match report.cover.to_kind().and_then(make_cover) {
        Ok(c) => c,
        Err(e) => {
            check(false, format!("cover: {e}"));
            return out;
        }
    };
    for g in &report.generators {
        let lift = cover.is_liftable(&psi(&g.word)).unwrap_or(false);
        check(lift == g.liftable, format!("liftability of {}", g.word));
    }
    let words: Vec<TwistWord> = report.generators.iter().map(|g| g.word.clone()).collect();
    match closure_verdict(&cover, &words, bound) {
        Ok(c) => check(c == report.closure, format!("closure: recorded {:?}, recomputed {:?}", report.closure, c)),
        Err(e) => check(false, format!("closure: {e}")),
    }
    for c in &report.braid_certificates {
        let again = certify(&c.name, &c.lhs, &c.rhs);
        check(again == *c, format!("braid certificate {}", c.name));
    }
    if let Some(p) = &report.pipeline {
        for m in crate::pipeline::recheck_detail(&cover, p, bound) {
            check(false, m);
        }
        check(true, "pipeline detail".into());
    }
    let all_ok = report.generators.iter().all(|g| g.liftable)
        && report.closure.equal
        && report.braid_certificates.iter().all(|c| c.outcome != "refuted")
        && report.pipeline.as_ref().map_or(true, |p| p.all_positive());
    let expected = match (all_ok, report.command.as_str()) {
        (true, _) => Status::Verified,
        (false, "pipeline") => Status::Partial,
        (false, _) => Status::Failed,
    };
    check(report.status == expected, format!("status {:?} but verdicts give {:?}", report.status, expected));
    out
}
