//! Generating sets from a graph action: vertex stabilizers of a lifted
//! maximal tree, one element per loop of the quotient, and one per non-tree
//! edge. Includes a finite verifier working on permutation groups.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt::Debug;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// A group acting on the vertices of a graph.
pub trait GroupAction {
    type Elem: Clone + PartialEq + Debug;
    type Vertex: Clone + PartialEq + Debug;

    fn act(&self, g: &Self::Elem, v: &Self::Vertex) -> Self::Vertex;
    fn is_edge(&self, u: &Self::Vertex, v: &Self::Vertex) -> bool;
}

/// Loop of the quotient at tree vertex `vertex`, lifted to the edge
/// `{ṽ, other}`; `element · ṽ` must equal `other`.
#[derive(Clone, Debug)]
pub struct LoopDatum<V, E> {
    pub vertex: usize,
    pub other: V,
    pub element: E,
}

/// Non-loop edge outside the tree, lifted to `{ṽ_from, free_end}` with
/// `free_end` in the orbit of `ṽ_to`; `element · free_end` must equal `ṽ_to`.
#[derive(Clone, Debug)]
pub struct EdgeDatum<V, E> {
    pub from: usize,
    pub free_end: V,
    pub to: usize,
    pub element: E,
}

#[derive(Clone, Debug)]
pub struct AssemblyInput<V, E> {
    pub tree_lifts: Vec<V>,
    pub stabilizers: Vec<Vec<E>>,
    pub loops: Vec<LoopDatum<V, E>>,
    pub non_tree: Vec<EdgeDatum<V, E>>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AssemblyError {
    #[error("stabilizer list count {got} differs from the {want} tree vertices")]
    Shape { want: usize, got: usize },
    #[error("index {0} is not a tree vertex")]
    BadIndex(usize),
    #[error("lift of {what} is not an edge: {edge}")]
    NotAnEdge { what: String, edge: String },
    #[error("loop {index} violates condition (i): element sends the base vertex to {got}, expected {want}")]
    LoopCondition { index: usize, want: String, got: String },
    #[error("edge {index} violates condition (ii): element sends {free_end} to {got}, expected {want}")]
    EdgeCondition { index: usize, free_end: String, want: String, got: String },
    #[error("stabilizer element {element} of vertex {vertex} moves it")]
    NotStabilizing { vertex: usize, element: String },
}

/// Union of the stabilizer lists, loop elements and non-tree edge elements,
/// deduplicated in first-occurrence order. Both lift conditions are checked.
pub fn assemble<A: GroupAction>(
    action: &A,
    input: &AssemblyInput<A::Vertex, A::Elem>,
) -> Result<Vec<A::Elem>, AssemblyError> {
    let n = input.tree_lifts.len();
    if input.stabilizers.len() != n {
        return Err(AssemblyError::Shape { want: n, got: input.stabilizers.len() });
    }
    for (i, gens) in input.stabilizers.iter().enumerate() {
        for g in gens {
            if action.act(g, &input.tree_lifts[i]) != input.tree_lifts[i] {
                return Err(AssemblyError::NotStabilizing { vertex: i, element: format!("{g:?}") });
            }
        }
    }
    for (idx, l) in input.loops.iter().enumerate() {
        let base = input.tree_lifts.get(l.vertex).ok_or(AssemblyError::BadIndex(l.vertex))?;
        if !action.is_edge(base, &l.other) {
            return Err(AssemblyError::NotAnEdge { what: format!("loop {idx}"), edge: format!("{base:?} - {:?}", l.other) });
        }
        let got = action.act(&l.element, base);
        if got != l.other {
            return Err(AssemblyError::LoopCondition { index: idx, want: format!("{:?}", l.other), got: format!("{got:?}") });
        }
    }
    for (idx, e) in input.non_tree.iter().enumerate() {
        let from = input.tree_lifts.get(e.from).ok_or(AssemblyError::BadIndex(e.from))?;
        let to = input.tree_lifts.get(e.to).ok_or(AssemblyError::BadIndex(e.to))?;
        if !action.is_edge(from, &e.free_end) {
            return Err(AssemblyError::NotAnEdge { what: format!("edge {idx}"), edge: format!("{from:?} - {:?}", e.free_end) });
        }
        let got = action.act(&e.element, &e.free_end);
        if got != *to {
            return Err(AssemblyError::EdgeCondition {
                index: idx,
                free_end: format!("{:?}", e.free_end),
                want: format!("{to:?}"),
                got: format!("{got:?}"),
            });
        }
    }
    let mut out: Vec<A::Elem> = Vec::new();
    let all = input
        .stabilizers
        .iter()
        .flatten()
        .chain(input.loops.iter().map(|l| &l.element))
        .chain(input.non_tree.iter().map(|e| &e.element));
    for g in all {
        if !out.contains(g) {
            out.push(g.clone());
        }
    }
    Ok(out)
}

/// A permutation of `0..n`; `compose(p, q)[v] = p[q[v]]`.
pub type Perm = Vec<u32>;

pub fn identity_perm(n: usize) -> Perm {
    (0..n as u32).collect()
}

pub fn compose(p: &Perm, q: &Perm) -> Perm {
    q.iter().map(|&v| p[v as usize]).collect()
}

pub fn is_permutation(p: &Perm, n: usize) -> bool {
    let mut seen = vec![false; n];
    p.len() == n && p.iter().all(|&v| (v as usize) < n && !std::mem::replace(&mut seen[v as usize], true))
}

/// All products of `gens` (including the identity).
pub fn perm_closure(gens: &[Perm], n: usize) -> BTreeSet<Perm> {
    let id = identity_perm(n);
    let mut seen: HashSet<Perm> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q = compose(g, &p);
            if seen.insert(q.clone()) {
                queue.push_back(q);
            }
        }
    }
    seen.into_iter().collect()
}

/// A finite permutation group acting on a finite graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteActionInstance {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<usize>,
    /// Generators of the group; the closure is taken.
    pub permutations: Vec<Perm>,
    pub edges: Vec<[u32; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum InstanceError {
    #[error("permutation {0} is not a permutation of the vertex set")]
    BadPermutation(usize),
    #[error("edge {0} is invalid")]
    BadEdge(usize),
    #[error("the action does not preserve the edge set")]
    NotEdgePreserving,
    #[error("the graph is disconnected")]
    Disconnected,
    #[error("assembly rejected: {0}")]
    Assembly(#[from] AssemblyError),
}

struct PermAction {
    edges: HashSet<(u32, u32)>,
}

impl GroupAction for PermAction {
    type Elem = Perm;
    type Vertex = u32;

    fn act(&self, g: &Perm, v: &u32) -> u32 {
        g[*v as usize]
    }

    fn is_edge(&self, u: &u32, v: &u32) -> bool {
        self.edges.contains(&(*u.min(v), *u.max(v)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteVerification {
    pub verified: bool,
    pub group_order: usize,
    pub closure_order: usize,
    pub vertex_orbits: usize,
    pub edge_orbits: usize,
    pub tree_lifts: Vec<u32>,
    pub stabilizer_orders: Vec<usize>,
    pub loops: usize,
    pub non_tree_edges: usize,
    pub generators: Vec<Perm>,
}

impl FiniteActionInstance {
    pub fn vertex_count(&self) -> usize {
        self.vertices.unwrap_or_else(|| {
            let from_perm = self.permutations.first().map_or(0, |p| p.len());
            let from_edges = self.edges.iter().flatten().map(|&v| v as usize + 1).max().unwrap_or(0);
            from_perm.max(from_edges).max(1)
        })
    }

    fn edge_set(&self) -> HashSet<(u32, u32)> {
        self.edges.iter().map(|&[u, v]| (u.min(v), u.max(v))).collect()
    }

    pub fn validate(&self) -> Result<(), InstanceError> {
        let n = self.vertex_count();
        for (i, p) in self.permutations.iter().enumerate() {
            if !is_permutation(p, n) {
                return Err(InstanceError::BadPermutation(i));
            }
        }
        for (i, &[u, v]) in self.edges.iter().enumerate() {
            if u == v || u as usize >= n || v as usize >= n {
                return Err(InstanceError::BadEdge(i));
            }
        }
        let edges = self.edge_set();
        for p in &self.permutations {
            for &(u, v) in &edges {
                let (a, b) = (p[u as usize], p[v as usize]);
                if !edges.contains(&(a.min(b), a.max(b))) {
                    return Err(InstanceError::NotEdgePreserving);
                }
            }
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut stack = vec![0u32];
        while let Some(u) = stack.pop() {
            for &v in &adj[u as usize] {
                if !std::mem::replace(&mut seen[v as usize], true) {
                    stack.push(v);
                }
            }
        }
        if seen.iter().all(|&s| s) {
            Ok(())
        } else {
            Err(InstanceError::Disconnected)
        }
    }
}

/// Greedy generating subset of a finite group given by its element list.
fn small_generating_set(elements: &[Perm], n: usize) -> Vec<Perm> {
    let mut gens: Vec<Perm> = Vec::new();
    let mut closure = perm_closure(&gens, n);
    for g in elements {
        if !closure.contains(g) {
            gens.push(g.clone());
            closure = perm_closure(&gens, n);
        }
    }
    gens
}

/// Runs the whole construction on a finite instance and checks that the
/// assembled set generates the group.
pub fn verify_finite_instance(inst: &FiniteActionInstance) -> Result<FiniteVerification, InstanceError> {
    inst.validate()?;
    let n = inst.vertex_count();
    let group: Vec<Perm> = perm_closure(&inst.permutations, n).into_iter().collect();
    let edges = inst.edge_set();
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
    for &(u, v) in &edges {
        adj[u as usize].push(v);
        adj[v as usize].push(u);
    }
    adj.iter_mut().for_each(|a| a.sort_unstable());

    // vertex orbits, numbered by least member
    let mut vorbit = vec![usize::MAX; n];
    let mut nv = 0;
    for v in 0..n {
        if vorbit[v] == usize::MAX {
            for g in &group {
                vorbit[g[v] as usize] = nv;
            }
            nv += 1;
        }
    }
    let mut edge_list: Vec<(u32, u32)> = edges.iter().copied().collect();
    edge_list.sort_unstable();
    let mut eorbit: HashMap<(u32, u32), usize> = HashMap::new();
    let mut ne = 0;
    for &(u, v) in &edge_list {
        if !eorbit.contains_key(&(u, v)) {
            for g in &group {
                let (a, b) = (g[u as usize], g[v as usize]);
                eorbit.insert((a.min(b), a.max(b)), ne);
            }
            ne += 1;
        }
    }

    // lifted maximal tree by BFS from vertex 0, least neighbours first
    let mut lift: Vec<Option<u32>> = vec![None; nv];
    let mut tree_orbits: HashSet<usize> = HashSet::new();
    lift[0] = Some(0);
    let mut queue = VecDeque::from([0u32]);
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u as usize] {
            let o = vorbit[w as usize];
            if lift[o].is_none() {
                lift[o] = Some(w);
                tree_orbits.insert(eorbit[&(u.min(w), u.max(w))]);
                queue.push_back(w);
            }
        }
    }
    let tree_lifts: Vec<u32> = lift.into_iter().map(|l| l.expect("connected graph")).collect();

    let stabilizer_elems: Vec<Vec<Perm>> = tree_lifts
        .iter()
        .map(|&v| group.iter().filter(|g| g[v as usize] == v).cloned().collect())
        .collect();
    let stabilizers: Vec<Vec<Perm>> = stabilizer_elems.iter().map(|s| small_generating_set(s, n)).collect();

    let mut loops = Vec::new();
    let mut non_tree = Vec::new();
    for o in 0..ne {
        if tree_orbits.contains(&o) {
            continue;
        }
        // least lift with an endpoint on the lifted tree
        let (i, w) = (0..nv)
            .flat_map(|i| adj[tree_lifts[i] as usize].iter().map(move |&w| (i, w)))
            .find(|&(i, w)| {
                let u = tree_lifts[i];
                eorbit[&(u.min(w), u.max(w))] == o
            })
            .expect("every edge orbit meets the lifted tree");
        let j = vorbit[w as usize];
        if i == j {
            let base = tree_lifts[i];
            let element = group.iter().find(|g| g[base as usize] == w).expect("same orbit").clone();
            loops.push(LoopDatum { vertex: i, other: w, element });
        } else {
            let target = tree_lifts[j];
            let element = group.iter().find(|g| g[w as usize] == target).expect("same orbit").clone();
            non_tree.push(EdgeDatum { from: i, free_end: w, to: j, element });
        }
    }
    let input = AssemblyInput { tree_lifts: tree_lifts.clone(), stabilizers, loops, non_tree };
    let action = PermAction { edges };
    let generators = assemble(&action, &input)?;
    let closure_order = perm_closure(&generators, n).len();
    Ok(FiniteVerification {
        verified: closure_order == group.len(),
        group_order: group.len(),
        closure_order,
        vertex_orbits: nv,
        edge_orbits: ne,
        tree_lifts,
        stabilizer_orders: stabilizer_elems.iter().map(Vec::len).collect(),
        loops: input.loops.len(),
        non_tree_edges: input.non_tree.len(),
        generators,
    })
}

/// A pseudorandom connected instance: a subgroup of `S_n` (n in 3..=7) given
/// by one or two random generators, acting on a union of random edge orbits.
pub fn random_instance(seed: u64) -> FiniteActionInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n: usize = rng.gen_range(3..=7);
    let ngens = rng.gen_range(1..=2);
    let permutations: Vec<Perm> = (0..ngens)
        .map(|_| {
            let mut p = identity_perm(n);
            p.shuffle(&mut rng);
            p
        })
        .collect();
    let group: Vec<Perm> = perm_closure(&permutations, n).into_iter().collect();
    let mut edges: BTreeSet<(u32, u32)> = BTreeSet::new();
    let add_orbit = |edges: &mut BTreeSet<(u32, u32)>, u: u32, v: u32| {
        for g in &group {
            let (a, b) = (g[u as usize], g[v as usize]);
            edges.insert((a.min(b), a.max(b)));
        }
    };
    for _ in 0..rng.gen_range(0..3) {
        let u = rng.gen_range(0..n as u32);
        let v = rng.gen_range(0..n as u32);
        if u != v {
            add_orbit(&mut edges, u, v);
        }
    }
    loop {
        let mut comp = vec![false; n];
        comp[0] = true;
        let mut changed = true;
        while changed {
            changed = false;
            for &(u, v) in &edges {
                if comp[u as usize] != comp[v as usize] {
                    comp[u as usize] = true;
                    comp[v as usize] = true;
                    changed = true;
                }
            }
        }
        let inside: Vec<u32> = (0..n as u32).filter(|&v| comp[v as usize]).collect();
        let outside: Vec<u32> = (0..n as u32).filter(|&v| !comp[v as usize]).collect();
        if outside.is_empty() {
            break;
        }
        let u = *inside.choose(&mut rng).expect("nonempty");
        let v = *outside.choose(&mut rng).expect("nonempty");
        add_orbit(&mut edges, u, v);
    }
    FiniteActionInstance {
        vertices: Some(n),
        permutations,
        edges: edges.into_iter().map(|(u, v)| [u, v]).collect(),
        expected: Some(true),
    }
}

/// `S_3` acting on the triangle.
pub fn triangle_fixture() -> FiniteActionInstance {
    FiniteActionInstance {
        vertices: Some(3),
        permutations: vec![vec![1, 0, 2], vec![1, 2, 0]],
        edges: vec![[0, 1], [1, 2], [0, 2]],
        expected: Some(true),
    }
}

/// The trivial group acting on a path with two edges.
pub fn trivial_path_fixture() -> FiniteActionInstance {
    FiniteActionInstance { vertices: Some(3), permutations: vec![], edges: vec![[0, 1], [1, 2]], expected: Some(true) }
}

/// `Z/a × Z/b` acting on its Cayley graph for the generators (1,0), (0,1):
/// a single vertex orbit with two loops and trivial stabilizers.
pub fn cayley_torus_fixture(a: u32, b: u32) -> FiniteActionInstance {
    let n = a * b;
    let idx = |x: u32, y: u32| (x % a) * b + (y % b);
    let shift = |dx: u32, dy: u32| -> Perm { (0..n).map(|v| idx(v / b + dx, v % b + dy)).collect() };
    let mut edges = BTreeSet::new();
    for v in 0..n {
        for w in [idx(v / b + 1, v % b), idx(v / b, v % b + 1)] {
            if w != v {
                edges.insert([v.min(w), v.max(w)]);
            }
        }
    }
    FiniteActionInstance {
        vertices: Some(n as usize),
        permutations: vec![shift(1, 0), shift(0, 1)],
        edges: edges.into_iter().collect(),
        expected: Some(true),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle() {
        let r = verify_finite_instance(&triangle_fixture()).unwrap();
        assert!(r.verified);
        assert_eq!(r.group_order, 6);
        assert_eq!((r.vertex_orbits, r.edge_orbits), (1, 1));
        // a single loop; the stabilizer of 0 has order 2
        assert_eq!(r.loops, 1);
        assert_eq!(r.stabilizer_orders, vec![2]);
    }

    #[test]
    fn trivial_group() {
        let r = verify_finite_instance(&trivial_path_fixture()).unwrap();
        assert!(r.verified);
        assert!(r.generators.is_empty());
        assert_eq!(r.vertex_orbits, 3);
    }

    #[test]
    fn single_vertex_no_loops_gives_stabilizer() {
        struct Trivial;
        impl GroupAction for Trivial {
            type Elem = i32;
            type Vertex = i32;
            fn act(&self, _: &i32, v: &i32) -> i32 {
                *v
            }
            fn is_edge(&self, _: &i32, _: &i32) -> bool {
                false
            }
        }
        let input = AssemblyInput { tree_lifts: vec![0], stabilizers: vec![vec![1, 2, 1]], loops: vec![], non_tree: vec![] };
        assert_eq!(assemble(&Trivial, &input).unwrap(), vec![1, 2]);
    }

    #[test]
    fn translation_on_a_line() {
        struct Shift;
        impl GroupAction for Shift {
            type Elem = i64;
            type Vertex = i64;
            fn act(&self, g: &i64, v: &i64) -> i64 {
                g + v
            }
            fn is_edge(&self, u: &i64, v: &i64) -> bool {
                (u - v).abs() == 1
            }
        }
        let good = AssemblyInput {
            tree_lifts: vec![0],
            stabilizers: vec![vec![]],
            loops: vec![LoopDatum { vertex: 0, other: 1, element: 1 }],
            non_tree: vec![],
        };
        assert_eq!(assemble(&Shift, &good).unwrap(), vec![1]);
        let bad = AssemblyInput { loops: vec![LoopDatum { vertex: 0, other: 1, element: 2 }], ..good };
        assert!(matches!(assemble(&Shift, &bad), Err(AssemblyError::LoopCondition { index: 0, .. })));
    }

    #[test]
    fn loop_elements_are_needed() {
        let inst = cayley_torus_fixture(2, 3);
        let r = verify_finite_instance(&inst).unwrap();
        assert!(r.verified);
        assert_eq!(r.loops, 2);
        let n = inst.vertex_count();
        for skip in 0..r.generators.len() {
            let rest: Vec<Perm> = r.generators.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, g)| g.clone()).collect();
            assert!(perm_closure(&rest, n).len() < r.group_order);
        }
    }

    #[test]
    fn rejects_bad_instances() {
        let mut inst = triangle_fixture();
        inst.edges.pop();
        assert_eq!(verify_finite_instance(&inst), Err(InstanceError::NotEdgePreserving));
        let disconnected = FiniteActionInstance { vertices: Some(4), permutations: vec![], edges: vec![[0, 1], [2, 3]], expected: None };
        assert_eq!(verify_finite_instance(&disconnected), Err(InstanceError::Disconnected));
    }

    #[test]
    fn random_instances_verify_deterministically() {
        for seed in 0..20 {
            let a = random_instance(seed);
            assert_eq!(a, random_instance(seed));
            let r = verify_finite_instance(&a).unwrap();
            assert!(r.verified, "seed {seed}");
            assert_eq!(r, verify_finite_instance(&a).unwrap());
        }
    }

    #[test]
    fn instance_json_round_trip() {
        let inst = triangle_fixture();
        let s = serde_json::to_string(&inst).unwrap();
        assert_eq!(serde_json::from_str::<FiniteActionInstance>(&s).unwrap(), inst);
    }
}
