//! The end-to-end computation for a cover: liftable image, quotient graph,
//! lifted tree, stabilizers, loop elements, assembly, and checks mod `k`.

use std::collections::{BTreeSet, HashSet};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::assembly::{assemble, AssemblyInput, EdgeDatum, GroupAction, LoopDatum};
use crate::bound::EnumerationBound;
use crate::cover::{CoverFile, CoverKind, CoverSpec};
use crate::graph::{edge_orbits, quotient_from_orbits, subgroup_elements, vertex_orbits, GraphError, Vec4};
use crate::report::{
    closure_verdict_in, default_generators, main_theorem_set, standard_certificates, ClosureVerdict,
    GeneratingSetReport, GeneratorVerdict, scope_notes, SecondaryIndexSet, Status, Timestamp, TOOL, VERSION,
};
use crate::stabilizers::{curve_class, stab_claim, verify_stab_modk_in, StabError, StabModkReport};
use crate::symplectic::{HVector, MatrixGroup};
use crate::words::{psi, w, TwistWord};

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Stab(#[from] StabError),
    #[error("{0}")]
    Unsupported(String),
}

/// Curve classes up to sign: the first nonzero entry is made positive.
pub fn normalize(v: &HVector) -> HVector {
    match v.entries().iter().find(|&&x| x != 0) {
        Some(&x) if x < 0 => v.neg(),
        _ => *v,
    }
}

/// The mapping class group acting on nonseparating curves through `Ψ`.
pub struct CurveAction;

impl GroupAction for CurveAction {
    type Elem = TwistWord;
    type Vertex = HVector;

    fn act(&self, g: &TwistWord, v: &HVector) -> HVector {
        normalize(&psi(g).apply(v))
    }

    fn is_edge(&self, u: &HVector, v: &HVector) -> bool {
        u.pair(v).abs() == 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexLift {
    pub curve: char,
    pub class: [i64; 4],
    pub orbit: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopLift {
    pub at: char,
    pub other: [i64; 4],
    pub element: TwistWord,
}

/// Edge `{from, free_end}` with `element · free_end = to`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonTreeLift {
    pub from: char,
    pub to: char,
    pub free_end: [i64; 4],
    pub element: TwistWord,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizerSet {
    pub curve: char,
    /// Claim curve and conjugating word when the set is transported.
    pub from_curve: char,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conjugator: Option<TwistWord>,
    pub generators: Vec<TwistWord>,
    pub torelli_members: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientSummary {
    pub vertex_sizes: Vec<usize>,
    pub loops_per_vertex: Vec<usize>,
    pub edges: Vec<[usize; 2]>,
    pub tree: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariantClosure {
    pub variant: SecondaryIndexSet,
    pub closure: ClosureVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabCheck {
    pub curve: char,
    pub stabilizer_order: usize,
    pub generated_order: usize,
    pub orbit_size: usize,
    pub verified: bool,
}

impl From<StabModkReport> for StabCheck {
    fn from(r: StabModkReport) -> Self {
        StabCheck {
            curve: r.curve,
            stabilizer_order: r.stabilizer_order,
            generated_order: r.generated_order,
            orbit_size: r.orbit_size,
            verified: r.verified,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineDetail {
    pub k: u32,
    pub quotient: QuotientSummary,
    pub vertex_lifts: Vec<VertexLift>,
    pub tree_edges: Vec<[char; 2]>,
    pub loops: Vec<LoopLift>,
    pub non_tree: Vec<NonTreeLift>,
    /// Quotient loops and edges not met by any lifted edge (up to orientation).
    pub uncovered: Vec<String>,
    pub assembly_ok: bool,
    pub stabilizers: Vec<StabilizerSet>,
    pub assembled: Vec<TwistWord>,
    pub assembled_closure: ClosureVerdict,
    pub secondary_variants: Vec<VariantClosure>,
    pub stab_modk: Vec<StabCheck>,
}

impl PipelineDetail {
    pub fn all_positive(&self) -> bool {
        self.uncovered.is_empty()
            && self.assembly_ok
            && self.assembled_closure.equal
            && self.secondary_variants.iter().all(|v| v.closure.equal)
            && self.stab_modk.iter().all(|s| s.verified)
    }
}

struct Plan {
    /// `(curve, claim curve, conjugator)` per quotient vertex lift.
    vertices: Vec<(char, char, Option<TwistWord>)>,
    tree: Vec<[char; 2]>,
    /// `(base curve, other endpoint, preferred elements)`.
    loops: Vec<(char, HVector, Vec<TwistWord>)>,
}

fn class(c: char) -> HVector {
    curve_class(c).expect("chain curve")
}

fn plan(cover: &CoverSpec) -> Result<Plan, PipelineError> {
    match cover.kind {
        CoverKind::Cyclic { k } => {
            let ki = k as i64;
            let mut loops = vec![('c', class('d'), vec![w("c d")])];
            let b = psi(&w("b"));
            for i in 1..ki {
                let ib = crate::arith::mod_inverse(i, k).unwrap_or(1);
                let pref = |x: &str| vec![w(&format!("b^{} {x} b^{}", 1 - i, 1 - ib))];
                loops.push(('b', b.pow(-i).apply(&class('a')), pref("a")));
                loops.push(('b', b.pow(-i).apply(&class('c')), pref("c")));
            }
            Ok(Plan {
                vertices: vec![('a', 'a', None), ('b', 'b', None), ('c', 'c', None)],
                tree: vec![['a', 'b'], ['b', 'c']],
                loops,
            })
        }
        CoverKind::Klein => Ok(Plan {
            vertices: vec![('b', 'a', Some(w("a b"))), ('c', 'c', None), ('d', 'e', Some(w("e d")))],
            tree: vec![['b', 'c'], ['c', 'd']],
            loops: vec![
                ('b', class('a'), vec![w("a b"), w("b^-1 a^-1")]),
                ('c', psi(&w("b")).apply(&class('c')), vec![w("b")]),
                ('c', psi(&w("d")).apply(&class('c')), vec![w("d")]),
                ('d', class('e'), vec![w("d e"), w("e^-1 d^-1")]),
            ],
        }),
        CoverKind::Elementary { .. } => Err(PipelineError::Unsupported("the pipeline covers the cyclic and Klein covers".into())),
    }
}

const LOOP_SEARCH_NODES: usize = 200_000;

/// Liftable letters used to search for loop elements.
fn search_letters(cover: &CoverSpec) -> Vec<TwistWord> {
    let mut base = default_generators(cover);
    if let CoverKind::Cyclic { k } = cover.kind {
        for g in ["a", "c", "d", "e"].into_iter().map(w).chain([w(&format!("b^{k}"))]) {
            if !base.contains(&g) {
                base.push(g);
            }
        }
    }
    base.iter().flat_map(|g| [g.clone(), g.inverse()]).collect()
}

/// Breadth-first images of `v` under words in `letters`, each with a word
/// reaching it, in discovery order.
fn orbit_search(action: &CurveAction, letters: &[TwistWord], v: &HVector, max_nodes: usize) -> Vec<(HVector, TwistWord)> {
    let mats: Vec<_> = letters.iter().map(psi).collect();
    let mut seen: HashSet<HVector> = HashSet::from([*v]);
    let mut out = vec![(*v, TwistWord::identity())];
    let mut head = 0;
    while head < out.len() && out.len() < max_nodes {
        let (x, f) = out[head].clone();
        head += 1;
        for (l, m) in letters.iter().zip(&mats) {
            let y = normalize(&m.apply(&x));
            if seen.insert(y) {
                out.push((y, l.mul(&f)));
            }
        }
    }
    let _ = action;
    out
}

fn lift_of(c: &HVector, k: u32) -> Vec4 {
    c.reduce_mod(k).entries().map(|x| x as u8)
}

fn arr(v: &HVector) -> [i64; 4] {
    *v.entries()
}

/// Everything except the final theorem-set check.
pub fn run_detail(cover: &CoverSpec, group: &MatrixGroup, bound: &EnumerationBound) -> Result<PipelineDetail, PipelineError> {
    let k = cover.k;
    let plan = plan(cover)?;
    let vo = vertex_orbits(cover, bound)?;
    let eo = edge_orbits(cover, bound)?;
    let q = quotient_from_orbits(cover, &vo, &eo)?;
    let quotient = QuotientSummary {
        vertex_sizes: q.vertices.iter().map(|v| v.size).collect(),
        loops_per_vertex: (0..q.vertices.len()).map(|i| q.loops_at(i)).collect(),
        edges: q.edges.iter().map(|e| e.ends).collect(),
        tree: q.tree.clone(),
    };

    let vertex_lifts: Vec<VertexLift> = plan
        .vertices
        .iter()
        .map(|&(c, _, _)| VertexLift { curve: c, class: arr(&class(c)), orbit: q.order[vo.orbit_of(&lift_of(&class(c), k)).expect("primitive")] })
        .collect();
    let mut seen = BTreeSet::new();
    for v in &vertex_lifts {
        if !seen.insert(v.orbit) {
            return Err(PipelineError::Unsupported(format!("two tree lifts in orbit {}", v.orbit)));
        }
    }

    let mut stabilizers = Vec::new();
    for &(c, from, ref conj) in &plan.vertices {
        let claim = stab_claim(from, cover)?;
        let transport = |g: &TwistWord| conj.as_ref().map_or_else(|| g.clone(), |h| g.conjugate_by(h));
        stabilizers.push(StabilizerSet {
            curve: c,
            from_curve: from,
            conjugator: conj.clone(),
            generators: claim.generators.iter().map(|g| transport(&g.word)).collect(),
            torelli_members: claim.torelli.len(),
        });
    }

    let action = CurveAction;
    let lift_index = |c: char| plan.vertices.iter().position(|v| v.0 == c).expect("tree curve");
    let edge_orbit = |x: &HVector, y: &HVector| {
        [1, -1].into_iter().find_map(|s| eo.orbit_of_edge(&lift_of(x, k), &lift_of(&y.scale(s), k)))
    };
    let mut hit: BTreeSet<usize> = plan.tree.iter().filter_map(|[x, y]| edge_orbit(&class(*x), &class(*y))).collect();
    let mut loops = Vec::new();
    let mut loop_data = Vec::new();
    let mut push_loop = |at: char, other: HVector, element: TwistWord, hit: &mut BTreeSet<usize>| {
        if let Some(o) = edge_orbit(&class(at), &other) {
            hit.insert(o);
        }
        loops.push(LoopLift { at, other: arr(&other), element: element.clone() });
        loop_data.push(LoopDatum { vertex: lift_index(at), other: normalize(&other), element });
    };
    for (at, other, preferred) in &plan.loops {
        let base = normalize(&class(*at));
        let target = normalize(other);
        let found = preferred
            .iter()
            .find(|f| action.act(f, &base) == target && cover.is_liftable(&psi(f)).unwrap_or(false));
        if let Some(f) = found {
            push_loop(*at, *other, f.clone(), &mut hit);
        }
    }

    // remaining loop orbits: search images of each lift under liftable words
    let loop_orbits: BTreeSet<usize> = q.loops.iter().map(|l| l.orbit).collect();
    let letters = search_letters(cover);
    for &(at, _, _) in &plan.vertices {
        if loop_orbits.iter().all(|o| hit.contains(o)) {
            break;
        }
        let base = normalize(&class(at));
        for (t, f) in orbit_search(&action, &letters, &base, LOOP_SEARCH_NODES) {
            if !action.is_edge(&base, &t) {
                continue;
            }
            if let Some(o) = edge_orbit(&base, &t) {
                if loop_orbits.contains(&o) && !hit.contains(&o) {
                    push_loop(at, t, f, &mut hit);
                }
            }
        }
    }

    // non-tree edges between lifted vertices
    let edge_orbits_needed: BTreeSet<usize> = q.edges.iter().map(|e| e.orbit).collect();
    let mut non_tree = Vec::new();
    let mut non_tree_data = Vec::new();
    for &(to, _, _) in &plan.vertices {
        if edge_orbits_needed.iter().all(|o| hit.contains(o)) {
            break;
        }
        let target = normalize(&class(to));
        for (t, f) in orbit_search(&action, &letters, &target, LOOP_SEARCH_NODES) {
            for &(from, _, _) in &plan.vertices {
                let v = normalize(&class(from));
                if from == to || !action.is_edge(&v, &t) {
                    continue;
                }
                let Some(o) = edge_orbit(&v, &t) else { continue };
                if edge_orbits_needed.contains(&o) && !hit.contains(&o) {
                    hit.insert(o);
                    let element = f.inverse();
                    non_tree.push(NonTreeLift { from, to, free_end: arr(&t), element: element.clone() });
                    non_tree_data.push(EdgeDatum { from: lift_index(from), free_end: t, to: lift_index(to), element });
                }
            }
        }
    }

    let mut uncovered = Vec::new();
    for (i, l) in q.loops.iter().enumerate() {
        if !hit.contains(&l.orbit) {
            uncovered.push(format!("loop {i} at vertex {} ({:?})", l.at, l.rep_edge));
        }
    }
    for (i, e) in q.edges.iter().enumerate() {
        if !hit.contains(&e.orbit) {
            uncovered.push(format!("edge {i} between {:?} ({:?})", e.ends, e.rep_edge));
        }
    }

    let input = AssemblyInput {
        tree_lifts: plan.vertices.iter().map(|v| normalize(&class(v.0))).collect(),
        stabilizers: stabilizers.iter().map(|s| s.generators.clone()).collect(),
        loops: loop_data,
        non_tree: non_tree_data,
    };
    let (assembly_ok, assembled) = match assemble(&action, &input) {
        Ok(a) => (true, a),
        Err(_) => (false, vec![]),
    };
    let assembled_closure = closure_verdict_in(group, &assembled);

    let secondary_variants = match cover.kind {
        CoverKind::Cyclic { k } => [SecondaryIndexSet::Positive, SecondaryIndexSet::NonPositive]
            .into_iter()
            .map(|variant| VariantClosure { variant, closure: closure_verdict_in(group, &main_theorem_set(k, variant)) })
            .collect(),
        _ => vec![],
    };
    let stab_curves: &[char] = if matches!(cover.kind, CoverKind::Klein) { &['a', 'c', 'e'] } else { &['a', 'b', 'c', 'e'] };
    let stab_modk = stab_curves
        .iter()
        .map(|&c| verify_stab_modk_in(c, cover, group).map(StabCheck::from))
        .collect::<Result<Vec<_>, _>>()?;

    Ok(PipelineDetail {
        k,
        quotient,
        vertex_lifts,
        tree_edges: plan.tree.clone(),
        loops,
        non_tree,
        uncovered,
        assembly_ok,
        stabilizers,
        assembled,
        assembled_closure,
        secondary_variants,
        stab_modk,
    })
}

/// Runs the whole pipeline and returns the report for the built-in final set.
pub fn run_pipeline(cover: &CoverSpec, bound: &EnumerationBound) -> Result<GeneratingSetReport, PipelineError> {
    let start = Instant::now();
    let group = subgroup_elements(cover, bound)?;
    let detail = run_detail(cover, &group, bound)?;
    let gens = default_generators(cover);
    let generators: Vec<GeneratorVerdict> = gens
        .iter()
        .map(|g| GeneratorVerdict { word: g.clone(), liftable: cover.is_liftable(&psi(g)).unwrap_or(false) })
        .collect();
    let closure = closure_verdict_in(&group, &gens);
    let braid_certificates = standard_certificates();
    let mut reasons = Vec::new();
    for g in generators.iter().filter(|g| !g.liftable) {
        reasons.push(format!("generator {} is not liftable", g.word));
    }
    if !closure.equal {
        reasons.push(format!("final set generates {} of {} elements mod {}", closure.generated_order, closure.subgroup_order, closure.k));
    }
    if !detail.assembly_ok {
        reasons.push("assembly rejected a lift condition".into());
    }
    if !detail.assembled_closure.equal {
        reasons.push("assembled set does not generate the liftable image mod k".into());
    }
    reasons.extend(detail.uncovered.iter().map(|u| format!("not covered by lifts: {u}")));
    for s in detail.stab_modk.iter().filter(|s| !s.verified) {
        reasons.push(format!("stabilizer claim for {} fails mod k", s.curve));
    }
    for v in detail.secondary_variants.iter().filter(|v| !v.closure.equal) {
        reasons.push(format!("main set with {:?} indices does not generate mod k", v.variant));
    }
    for c in braid_certificates.iter().filter(|c| c.outcome == "refuted") {
        reasons.push(format!("identity {} refuted", c.name));
    }
    let status = if reasons.is_empty() { Status::Verified } else { Status::Partial };
    Ok(GeneratingSetReport {
        tool: TOOL.into(),
        version: VERSION.into(),
        command: "pipeline".into(),
        cover: CoverFile::from_kind(&cover.kind),
        status,
        reasons,
        scope: scope_notes(),
        generators,
        closure,
        braid_certificates,
        pipeline: Some(detail),
        timestamp: Some(Timestamp::since(start)),
    })
}

/// Replays the evidence in a pipeline detail; returns mismatch descriptions.
pub fn recheck_detail(cover: &CoverSpec, d: &PipelineDetail, bound: &EnumerationBound) -> Vec<String> {
    let mut bad = Vec::new();
    let group = match subgroup_elements(cover, bound) {
        Ok(g) => g,
        Err(e) => return vec![format!("enumeration: {e}")],
    };
    let action = CurveAction;
    for l in &d.loops {
        let Some(base) = curve_class(l.at) else {
            bad.push(format!("unknown curve {}", l.at));
            continue;
        };
        let other = normalize(&HVector::integral(l.other));
        if action.act(&l.element, &normalize(&base)) != other {
            bad.push(format!("loop element {} does not move {} to {:?}", l.element, l.at, l.other));
        }
        if !action.is_edge(&base, &other) {
            bad.push(format!("loop lift at {} is not an edge", l.at));
        }
        if !cover.is_liftable(&psi(&l.element)).unwrap_or(false) {
            bad.push(format!("loop element {} is not liftable", l.element));
        }
    }
    for e in &d.non_tree {
        let (Some(from), Some(to)) = (curve_class(e.from), curve_class(e.to)) else {
            bad.push(format!("unknown curve in edge {}-{}", e.from, e.to));
            continue;
        };
        let free = normalize(&HVector::integral(e.free_end));
        if !action.is_edge(&from, &free) {
            bad.push(format!("edge lift at {} is not an edge", e.from));
        }
        if action.act(&e.element, &free) != normalize(&to) {
            bad.push(format!("edge element {} does not reach {}", e.element, e.to));
        }
        if !cover.is_liftable(&psi(&e.element)).unwrap_or(false) {
            bad.push(format!("edge element {} is not liftable", e.element));
        }
    }
    for s in &d.stabilizers {
        let v = normalize(&class(s.curve));
        for g in &s.generators {
            if action.act(g, &v) != v {
                bad.push(format!("stabilizer generator {g} moves {}", s.curve));
            }
        }
    }
    let c = closure_verdict_in(&group, &d.assembled);
    if c != d.assembled_closure {
        bad.push("assembled closure differs".into());
    }
    for v in &d.secondary_variants {
        if let CoverKind::Cyclic { k } = cover.kind {
            if closure_verdict_in(&group, &main_theorem_set(k, v.variant)) != v.closure {
                bad.push(format!("closure of {:?} variant differs", v.variant));
            }
        }
    }
    for s in &d.stab_modk {
        match verify_stab_modk_in(s.curve, cover, &group) {
            Ok(r) if StabCheck::from(r.clone()) == *s => {}
            _ => bad.push(format!("stabilizer check for {} differs", s.curve)),
        }
    }
    bad
}
