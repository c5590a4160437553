//! The mod-`k` nonseparating curve graph `N_k`: vertices are primitive vectors
//! of `(Z/k)⁴`, and `{x, y}` is an edge when `î(x, y) = ±1`. Orbits of the
//! image `G_k` of the liftable group, and the quotient multigraph.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;

use crate::arith::{is_prime, mod_inverse};
use crate::bound::{BoundError, EnumerationBound};
use crate::cover::{CoverError, CoverFile, CoverKind, CoverSpec};
use crate::symplectic::{enumerate_sp, transvection_power, HVector, MatrixGroup, PackedMat, SymplecticMatrix, MAX_PACKED_MODULUS};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error("vector {0} is not primitive")]
    NotPrimitive(String),
    #[error("{0}")]
    Unsupported(String),
    #[error("the quotient graph is disconnected")]
    Disconnected,
}

pub type Vec4 = [u8; 4];

/// Lexicographic code `x1 k³ + x2 k² + x3 k + x4`.
pub fn code(v: &Vec4, k: u32) -> u32 {
    v.iter().fold(0u32, |acc, &x| acc * k + x as u32)
}

pub fn decode(c: u32, k: u32) -> Vec4 {
    [(c / (k * k * k)) as u8, ((c / (k * k)) % k) as u8, ((c / k) % k) as u8, (c % k) as u8]
}

pub fn pair_mod(x: &Vec4, y: &Vec4, k: u32) -> u32 {
    let (x, y) = (x.map(|v| v as i64), y.map(|v| v as i64));
    (x[0] * y[1] - x[1] * y[0] + x[2] * y[3] - x[3] * y[2]).rem_euclid(k as i64) as u32
}

/// `{x, y}` is an edge of `N_k`.
pub fn is_edge(x: &Vec4, y: &Vec4, k: u32) -> bool {
    let p = pair_mod(x, y, k);
    x != y && (p == 1 || p == k - 1)
}

fn is_primitive(v: &Vec4, k: u32) -> bool {
    let all = [v[0] as i64, v[1] as i64, v[2] as i64, v[3] as i64, k as i64];
    crate::arith::gcd_all(&all) == 1
}

fn neg(v: &Vec4, k: u32) -> Vec4 {
    v.map(|x| ((k - x as u32) % k) as u8)
}

pub fn to_hvector(v: &Vec4, k: u32) -> HVector {
    HVector::modular(v.map(|x| x as i64), k)
}

pub fn from_hvector(v: &HVector) -> Vec4 {
    v.entries().map(|x| x as u8)
}

/// All primitive vectors, in lexicographic order.
pub fn primitive_vectors(k: u32) -> Vec<Vec4> {
    (0..k.pow(4)).map(|c| decode(c, k)).filter(|v| is_primitive(v, k)).collect()
}

fn check_cover(cover: &CoverSpec, bound: &EnumerationBound) -> Result<u32, GraphError> {
    let k = cover.k;
    if matches!(cover.kind, CoverKind::Klein) && k != 2 {
        return Err(GraphError::Unsupported("the Klein cover is defined for k = 2 only".into()));
    }
    bound.check(k)?;
    if k > MAX_PACKED_MODULUS {
        return Err(BoundError::Exceeded { k, max: MAX_PACKED_MODULUS }.into());
    }
    Ok(k)
}

/// The finite oracle `G_k = {A ∈ Sp(4, Z/k) : A preserves L mod k}`, by sweep.
pub fn subgroup_elements(cover: &CoverSpec, bound: &EnumerationBound) -> Result<MatrixGroup, GraphError> {
    let k = check_cover(cover, bound)?;
    let sp = enumerate_sp(k, bound)?;
    Ok(sp.filter(|m| cover.preserves_lattice_packed(m)))
}

/// A small generating set of `G_k`: transvections, torus elements, `-I`,
/// the handle swap and blockwise rotations that preserve `L` mod `k`.
pub fn subgroup_generators(cover: &CoverSpec) -> Vec<PackedMat> {
    let k = cover.k;
    let ki = k as i64;
    let mut cands: Vec<SymplecticMatrix> = Vec::new();
    for v in primitive_vectors(k) {
        cands.push(transvection_power(&to_hvector(&v, k), 1));
    }
    for u in 1..ki {
        if let Some(ui) = mod_inverse(u, k) {
            let d = |a: [i64; 4]| {
                SymplecticMatrix::from_rows_unchecked(
                    [[a[0], 0, 0, 0], [0, a[1], 0, 0], [0, 0, a[2], 0], [0, 0, 0, a[3]]],
                    k,
                )
            };
            cands.push(d([u, ui, 1, 1]));
            cands.push(d([1, 1, u, ui]));
        }
    }
    cands.push(SymplecticMatrix::identity(k).neg());
    cands.push(SymplecticMatrix::from_rows_unchecked([[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]], k));
    cands.push(SymplecticMatrix::from_rows_unchecked([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], k));
    cands.push(SymplecticMatrix::from_rows_unchecked([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]], k));
    let mut out: Vec<PackedMat> = cands
        .iter()
        .map(PackedMat::from_matrix)
        .filter(|m| *m != PackedMat::identity() && cover.preserves_lattice_packed(m))
        .collect();
    out.sort_by_key(|m| m.key(k));
    out.dedup();
    out
}

/// Orbit partition of a finite item set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    /// Orbit id of each item; orbits are numbered by their least item.
    pub orbit_of: Vec<usize>,
    /// Least item index of each orbit.
    pub reps: Vec<usize>,
    pub sizes: Vec<usize>,
}

impl Partition {
    fn from_labels(labels: &[usize]) -> Self {
        // renumber by first occurrence so orbit ids follow item order
        let mut map: HashMap<usize, usize> = HashMap::new();
        let mut orbit_of = Vec::with_capacity(labels.len());
        let mut reps = Vec::new();
        let mut sizes = Vec::new();
        for (i, &l) in labels.iter().enumerate() {
            let id = *map.entry(l).or_insert_with(|| {
                reps.push(i);
                sizes.push(0);
                reps.len() - 1
            });
            sizes[id] += 1;
            orbit_of.push(id);
        }
        Partition { orbit_of, reps, sizes }
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }
}

/// Vertex orbits with a witness `W` (mod `k`) for every vertex: `W · rep = x`.
#[derive(Clone, Debug)]
pub struct VertexOrbits {
    pub k: u32,
    pub vertices: Vec<Vec4>,
    pub partition: Partition,
    witnesses: Vec<PackedMat>,
    index: HashMap<u32, usize>,
}

impl VertexOrbits {
    pub fn index_of(&self, v: &Vec4) -> Option<usize> {
        self.index.get(&code(v, self.k)).copied()
    }

    pub fn orbit_of(&self, v: &Vec4) -> Option<usize> {
        self.index_of(v).map(|i| self.partition.orbit_of[i])
    }

    pub fn rep(&self, orbit: usize) -> Vec4 {
        self.vertices[self.partition.reps[orbit]]
    }

    pub fn witness(&self, v: &Vec4) -> Option<SymplecticMatrix> {
        self.index_of(v).map(|i| self.witnesses[i].to_matrix(self.k))
    }
}

/// Vertex orbits by breadth-first search under a generating set of `G_k`.
pub fn vertex_orbits(cover: &CoverSpec, bound: &EnumerationBound) -> Result<VertexOrbits, GraphError> {
    let k = check_cover(cover, bound)?;
    let gens = subgroup_generators(cover);
    let vertices = primitive_vectors(k);
    let index: HashMap<u32, usize> = vertices.iter().enumerate().map(|(i, v)| (code(v, k), i)).collect();
    let mut label = vec![usize::MAX; vertices.len()];
    let mut witnesses = vec![PackedMat::identity(); vertices.len()];
    for start in 0..vertices.len() {
        if label[start] != usize::MAX {
            continue;
        }
        label[start] = start;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            for g in &gens {
                let j = index[&code(&g.apply(vertices[i], k), k)];
                if label[j] == usize::MAX {
                    label[j] = start;
                    witnesses[j] = g.mul(&witnesses[i], k);
                    queue.push_back(j);
                }
            }
        }
    }
    let partition = Partition::from_labels(&label);
    for (i, v) in vertices.iter().enumerate() {
        let j = index[&code(&neg(v, k), k)];
        assert_eq!(partition.orbit_of[i], partition.orbit_of[j], "{v:?} and its negative lie in different orbits");
    }
    Ok(VertexOrbits { k, vertices, partition, witnesses, index })
}

/// Vertex orbits by sweeping the full group `G_k`.
pub fn vertex_orbits_sweep(cover: &CoverSpec, bound: &EnumerationBound) -> Result<Partition, GraphError> {
    let k = check_cover(cover, bound)?;
    let group = subgroup_elements(cover, bound)?;
    let vertices = primitive_vectors(k);
    let index: HashMap<u32, usize> = vertices.iter().enumerate().map(|(i, v)| (code(v, k), i)).collect();
    let mut uf = UnionFind::new(vertices.len());
    for g in group.iter_packed() {
        for (i, v) in vertices.iter().enumerate() {
            uf.union(i, index[&code(&g.apply(*v, k), k)]);
        }
    }
    Ok(Partition::from_labels(&uf.labels()))
}

/// All edges `(x, y)` with `code(x) < code(y)`, lexicographically ordered.
pub fn all_edges(k: u32) -> Vec<(Vec4, Vec4)> {
    let vs = primitive_vectors(k);
    let mut out = Vec::new();
    for (i, x) in vs.iter().enumerate() {
        for y in &vs[i + 1..] {
            if is_edge(x, y, k) {
                out.push((*x, *y));
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct EdgeOrbits {
    pub k: u32,
    pub edges: Vec<(Vec4, Vec4)>,
    pub partition: Partition,
    index: HashMap<(u32, u32), usize>,
}

impl EdgeOrbits {
    /// Orbit of the edge `{x, y}`, if it is one.
    pub fn orbit_of_edge(&self, x: &Vec4, y: &Vec4) -> Option<usize> {
        self.index.get(&edge_key(x, y, self.k)).map(|&i| self.partition.orbit_of[i])
    }
}

fn edge_key(x: &Vec4, y: &Vec4, k: u32) -> (u32, u32) {
    let (a, b) = (code(x, k), code(y, k));
    (a.min(b), a.max(b))
}

pub fn edge_orbits(cover: &CoverSpec, bound: &EnumerationBound) -> Result<EdgeOrbits, GraphError> {
    let k = check_cover(cover, bound)?;
    let gens = subgroup_generators(cover);
    let edges = all_edges(k);
    let index: HashMap<(u32, u32), usize> = edges.iter().enumerate().map(|(i, (x, y))| (edge_key(x, y, k), i)).collect();
    let mut label = vec![usize::MAX; edges.len()];
    for start in 0..edges.len() {
        if label[start] != usize::MAX {
            continue;
        }
        label[start] = start;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            let (x, y) = edges[i];
            for g in &gens {
                let j = index[&edge_key(&g.apply(x, k), &g.apply(y, k), k)];
                if label[j] == usize::MAX {
                    label[j] = start;
                    queue.push_back(j);
                }
            }
        }
    }
    Ok(EdgeOrbits { k, edges, partition: Partition::from_labels(&label), index })
}

pub fn edge_orbits_sweep(cover: &CoverSpec, bound: &EnumerationBound) -> Result<Partition, GraphError> {
    let k = check_cover(cover, bound)?;
    let group = subgroup_elements(cover, bound)?;
    let edges = all_edges(k);
    let index: HashMap<(u32, u32), usize> = edges.iter().enumerate().map(|(i, (x, y))| (edge_key(x, y, k), i)).collect();
    let mut uf = UnionFind::new(edges.len());
    for g in group.iter_packed() {
        for (i, (x, y)) in edges.iter().enumerate() {
            uf.union(i, index[&edge_key(&g.apply(*x, k), &g.apply(*y, k), k)]);
        }
    }
    Ok(Partition::from_labels(&uf.labels()))
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
        }
    }

    fn labels(&mut self) -> Vec<usize> {
        (0..self.parent.len()).map(|i| self.find(i)).collect()
    }
}

/// The three vertex orbits of the cyclic cover.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CyclicOrbit {
    E1,
    E2,
    E3,
}

impl CyclicOrbit {
    /// Least member of the orbit.
    pub fn rep(self) -> Vec4 {
        match self {
            CyclicOrbit::E1 => [1, 0, 0, 0],
            CyclicOrbit::E2 => [0, 1, 0, 0],
            CyclicOrbit::E3 => [0, 0, 0, 1],
        }
    }
}

/// Orbit of `x` under the cyclic-cover group by the coordinate case split,
/// with an explicit witness `A` (mod `k`) satisfying `A · rep = x`.
pub fn classify_vertex(cover: &CoverSpec, x: &HVector) -> Result<(CyclicOrbit, SymplecticMatrix), GraphError> {
    let k = match cover.kind {
        CoverKind::Cyclic { k } if is_prime(k) => k,
        _ => return Err(GraphError::Unsupported("classify_vertex needs a cyclic cover of prime degree".into())),
    };
    if x.modulus() != k {
        return Err(GraphError::Unsupported(format!("vector must be given mod {k}")));
    }
    if !x.is_primitive() {
        return Err(GraphError::NotPrimitive(x.to_string()));
    }
    let [i1, i2, i3, i4] = *x.entries();
    let inv = |v: i64| mod_inverse(v, k).expect("nonzero residue mod a prime");
    let m = |rows: [[i64; 4]; 4]| SymplecticMatrix::from_rows_unchecked(rows, k);
    // W e4 = e3, so A·W sends the least member e4 of the e3-orbit to A e3.
    let w = m([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]]);
    let (orbit, a) = if i2 != 0 {
        let j = inv(i2);
        (CyclicOrbit::E2, m([[j, i1, -j * i4, j * i3], [0, i2, 0, 0], [0, i3, 1, 0], [0, i4, 0, 1]]))
    } else if i3 != 0 {
        let j = inv(i3);
        (CyclicOrbit::E3, m([[1, 0, i1, 0], [0, 1, 0, 0], [0, 0, i3, 0], [0, -j * i1, i4, j]]) * w)
    } else if i4 != 0 {
        let j = inv(i4);
        (CyclicOrbit::E3, m([[1, 0, i1, 0], [0, 1, 0, 0], [0, j * i1, 0, -j], [0, 0, i4, 0]]) * w)
    } else {
        (CyclicOrbit::E1, m([[i1, 0, 0, 0], [0, inv(i1), 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]))
    };
    debug_assert!(a.is_symplectic());
    debug_assert!(cover.preserves_lattice_mod(&a));
    debug_assert_eq!(a.apply(&to_hvector(&orbit.rep(), k)), *x);
    Ok((orbit, a))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QVertex {
    pub rep: [i64; 4],
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QLoop {
    pub at: usize,
    pub rep_edge: [[i64; 4]; 2],
    #[serde(skip)]
    pub size: usize,
    /// Index of the orbit in the edge partition.
    #[serde(skip)]
    pub orbit: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QEdge {
    pub ends: [usize; 2],
    /// The endpoint in `ends[0]` comes first.
    pub rep_edge: [[i64; 4]; 2],
    #[serde(skip)]
    pub size: usize,
    #[serde(skip)]
    pub orbit: usize,
}

/// Quotient of `N_k` by `G_k`: vertex orbits ordered by least member, loops,
/// non-loop edge orbits, and a spanning tree given as indices into `edges`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientMultigraph {
    pub k: u32,
    pub cover: CoverFile,
    pub vertices: Vec<QVertex>,
    pub loops: Vec<QLoop>,
    pub edges: Vec<QEdge>,
    pub tree: Vec<usize>,
    /// Quotient vertex index of each vertex orbit of the underlying partition.
    #[serde(skip)]
    pub order: Vec<usize>,
}

fn widen(v: &Vec4) -> [i64; 4] {
    v.map(|x| x as i64)
}

pub fn quotient_graph(cover: &CoverSpec, bound: &EnumerationBound) -> Result<QuotientMultigraph, GraphError> {
    let vo = vertex_orbits(cover, bound)?;
    let eo = edge_orbits(cover, bound)?;
    quotient_from_orbits(cover, &vo, &eo)
}

/// Quotient from precomputed orbit partitions.
/// Vertex orbits in breadth-first order from the orbit of `e₁`, neighbours
/// taken by least representative.
fn vertex_order(vo: &VertexOrbits, eo: &EdgeOrbits) -> Vec<usize> {
    let n = vo.partition.len();
    let mut adj: Vec<BTreeSet<(Vec4, usize)>> = vec![BTreeSet::new(); n];
    for &(x, y) in &eo.edges {
        let (ox, oy) = (vo.orbit_of(&x).unwrap(), vo.orbit_of(&y).unwrap());
        if ox != oy {
            adj[ox].insert((vo.rep(oy), oy));
            adj[oy].insert((vo.rep(ox), ox));
        }
    }
    let mut starts: Vec<usize> = (0..n).collect();
    starts.sort_by_key(|&o| vo.rep(o));
    if let Some(o) = vo.orbit_of(&[1, 0, 0, 0]) {
        starts.retain(|&x| x != o);
        starts.insert(0, o);
    }
    let mut order = vec![usize::MAX; n];
    let mut next = 0;
    for s in starts {
        if order[s] != usize::MAX {
            continue;
        }
        order[s] = next;
        next += 1;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &(_, v) in &adj[u] {
                if order[v] == usize::MAX {
                    order[v] = next;
                    next += 1;
                    queue.push_back(v);
                }
            }
        }
    }
    order
}

pub fn quotient_from_orbits(cover: &CoverSpec, vo: &VertexOrbits, eo: &EdgeOrbits) -> Result<QuotientMultigraph, GraphError> {
    let k = vo.k;
    let order = vertex_order(vo, eo);
    let mut vertices = vec![QVertex { rep: [0; 4], size: 0 }; order.len()];
    for (o, &i) in order.iter().enumerate() {
        vertices[i] = QVertex { rep: widen(&vo.rep(o)), size: vo.partition.sizes[o] };
    }
    let mut loops = Vec::new();
    let mut edges = Vec::new();
    for o in 0..eo.partition.len() {
        let size = eo.partition.sizes[o];
        // least member in the orientation that lists the smaller vertex orbit first
        let mut best: Option<(usize, usize, [[i64; 4]; 2])> = None;
        for (i, &(x, y)) in eo.edges.iter().enumerate() {
            if eo.partition.orbit_of[i] != o {
                continue;
            }
            let (ox, oy) = (order[vo.orbit_of(&x).unwrap()], order[vo.orbit_of(&y).unwrap()]);
            let cand = if ox <= oy { (ox, oy, [widen(&x), widen(&y)]) } else { (oy, ox, [widen(&y), widen(&x)]) };
            if best.as_ref().map_or(true, |b| cand < *b) {
                best = Some(cand);
            }
        }
        let (a, b, rep_edge) = best.expect("nonempty orbit");
        if a == b {
            loops.push(QLoop { at: a, rep_edge, size, orbit: o });
        } else {
            edges.push(QEdge { ends: [a, b], rep_edge, size, orbit: o });
        }
    }
    loops.sort_by(|x, y| (x.at, x.rep_edge).cmp(&(y.at, y.rep_edge)));
    edges.sort_by(|x, y| (x.ends, x.rep_edge).cmp(&(y.ends, y.rep_edge)));
    let tree = spanning_tree(vertices.len(), &edges)?;
    Ok(QuotientMultigraph { k, cover: CoverFile::from_kind(&cover.kind), vertices, loops, edges, tree, order })
}

fn spanning_tree(n: usize, edges: &[QEdge]) -> Result<Vec<usize>, GraphError> {
    if n == 0 {
        return Ok(vec![]);
    }
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    let mut tree = Vec::new();
    while let Some(u) = queue.pop_front() {
        let mut incident: Vec<usize> = (0..edges.len()).filter(|&i| edges[i].ends.contains(&u)).collect();
        incident.sort_by_key(|&i| edges[i].rep_edge);
        for i in incident {
            let other = if edges[i].ends[0] == u { edges[i].ends[1] } else { edges[i].ends[0] };
            if !seen[other] {
                seen[other] = true;
                tree.push(i);
                queue.push_back(other);
            }
        }
    }
    if seen.iter().all(|&s| s) {
        tree.sort_unstable();
        Ok(tree)
    } else {
        Err(GraphError::Disconnected)
    }
}

impl QuotientMultigraph {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn to_dot(&self) -> String {
        let fmt_v = |v: &[i64; 4]| format!("({},{},{},{})", v[0], v[1], v[2], v[3]);
        let mut s = String::new();
        let _ = writeln!(s, "graph quotient {{");
        let _ = writeln!(s, "  label=\"{} k={}\";", self.cover.kind, self.k);
        for (i, v) in self.vertices.iter().enumerate() {
            let _ = writeln!(s, "  v{i} [label=\"{}\\nsize {}\"];", fmt_v(&v.rep), v.size);
        }
        for l in &self.loops {
            let _ = writeln!(s, "  v{0} -- v{0} [label=\"{1}-{2}\"];", l.at, fmt_v(&l.rep_edge[0]), fmt_v(&l.rep_edge[1]));
        }
        for (i, e) in self.edges.iter().enumerate() {
            let style = if self.tree.contains(&i) { ", style=bold" } else { "" };
            let _ = writeln!(
                s,
                "  v{} -- v{} [label=\"{}-{}\"{}];",
                e.ends[0],
                e.ends[1],
                fmt_v(&e.rep_edge[0]),
                fmt_v(&e.rep_edge[1]),
                style
            );
        }
        s.push_str("}\n");
        s
    }

    /// Index of the vertex orbit containing `v` (searching representatives only).
    pub fn vertex_with_rep(&self, v: [i64; 4]) -> Option<usize> {
        self.vertices.iter().position(|q| q.rep == v)
    }

    pub fn loops_at(&self, v: usize) -> usize {
        self.loops.iter().filter(|l| l.at == v).count()
    }

    pub fn edges_between(&self, a: usize, b: usize) -> usize {
        let key = [a.min(b), a.max(b)];
        self.edges.iter().filter(|e| e.ends == key).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b() -> EnumerationBound {
        EnumerationBound::default()
    }

    #[test]
    fn subgroup_orders() {
        assert_eq!(subgroup_elements(&CoverSpec::cyclic(2).unwrap(), &b()).unwrap().order(), 48);
        assert_eq!(subgroup_elements(&CoverSpec::cyclic(3).unwrap(), &b()).unwrap().order(), 1296);
        assert_eq!(subgroup_elements(&CoverSpec::klein(), &b()).unwrap().order(), 36);
    }

    #[test]
    fn generators_generate_the_sweep_group() {
        for c in [CoverSpec::cyclic(2).unwrap(), CoverSpec::cyclic(3).unwrap(), CoverSpec::klein()] {
            let gens: Vec<SymplecticMatrix> = subgroup_generators(&c).iter().map(|g| g.to_matrix(c.k)).collect();
            let closure = MatrixGroup::generated_by(&gens, c.k);
            assert_eq!(closure, subgroup_elements(&c, &b()).unwrap());
        }
    }

    #[test]
    fn vertex_orbit_sizes() {
        let vo = vertex_orbits(&CoverSpec::cyclic(2).unwrap(), &b()).unwrap();
        // ordered by least member: e4-orbit, e2-orbit, e1-orbit
        assert_eq!(vo.partition.sizes, vec![6, 8, 1]);
        let vo = vertex_orbits(&CoverSpec::cyclic(3).unwrap(), &b()).unwrap();
        assert_eq!(vo.partition.sizes, vec![3 * 8, 2 * 27, 2]);
        let vo = vertex_orbits(&CoverSpec::klein(), &b()).unwrap();
        assert_eq!(vo.partition.sizes, vec![3, 3, 9]);
    }

    #[test]
    fn witnesses_map_reps() {
        let c = CoverSpec::cyclic(3).unwrap();
        let vo = vertex_orbits(&c, &b()).unwrap();
        for v in &vo.vertices {
            let w = vo.witness(v).unwrap();
            assert!(c.preserves_lattice_mod(&w));
            let rep = vo.rep(vo.orbit_of(v).unwrap());
            assert_eq!(w.apply(&to_hvector(&rep, 3)), to_hvector(v, 3));
        }
    }

    #[test]
    fn classify_agrees_with_bfs() {
        for k in [2u32, 3, 5] {
            let c = CoverSpec::cyclic(k).unwrap();
            let vo = vertex_orbits(&c, &EnumerationBound::permissive()).unwrap();
            for v in &vo.vertices {
                let (label, a) = classify_vertex(&c, &to_hvector(v, k)).unwrap();
                assert_eq!(vo.orbit_of(&label.rep()), vo.orbit_of(v));
                assert!(a.is_symplectic());
                assert!(c.preserves_lattice_mod(&a));
                assert_eq!(a.apply(&to_hvector(&label.rep(), k)), to_hvector(v, k));
            }
        }
    }

    #[test]
    fn two_oracles_agree() {
        for c in [CoverSpec::cyclic(2).unwrap(), CoverSpec::cyclic(3).unwrap(), CoverSpec::klein()] {
            assert_eq!(vertex_orbits(&c, &b()).unwrap().partition, vertex_orbits_sweep(&c, &b()).unwrap());
            assert_eq!(edge_orbits(&c, &b()).unwrap().partition, edge_orbits_sweep(&c, &b()).unwrap());
        }
    }

    #[test]
    fn edge_counts_match_pair_scan() {
        for c in [CoverSpec::cyclic(2).unwrap(), CoverSpec::cyclic(3).unwrap()] {
            let k = c.k;
            let vs = primitive_vectors(k);
            let scan = vs.iter().enumerate().map(|(i, x)| vs[i + 1..].iter().filter(|y| is_edge(x, y, k)).count()).sum::<usize>();
            let eo = edge_orbits(&c, &b()).unwrap();
            assert_eq!(eo.partition.sizes.iter().sum::<usize>(), scan);
        }
    }

    #[test]
    #[ignore]
    fn print_quotients() {
        for c in [CoverSpec::cyclic(2).unwrap(), CoverSpec::cyclic(3).unwrap(), CoverSpec::cyclic(5).unwrap(), CoverSpec::klein()] {
            let q = quotient_graph(&c, &EnumerationBound::permissive()).unwrap();
            println!("{}", serde_json::to_string(&q).unwrap());
            println!("{:?}", q.loops.iter().map(|l| l.size).collect::<Vec<_>>());
            println!("{:?}", q.edges.iter().map(|l| l.size).collect::<Vec<_>>());
        }
    }

    #[test]
    fn quotient_vertex_order() {
        let sizes = |c: &CoverSpec| quotient_graph(c, &b()).unwrap().vertices.iter().map(|v| v.size).collect::<Vec<_>>();
        assert_eq!(sizes(&CoverSpec::cyclic(2).unwrap()), vec![1, 8, 6]);
        assert_eq!(sizes(&CoverSpec::cyclic(3).unwrap()), vec![2, 54, 24]);
        assert_eq!(sizes(&CoverSpec::klein()), vec![3, 9, 3]);
        let q = quotient_graph(&CoverSpec::klein(), &b()).unwrap();
        assert_eq!((0..3).map(|v| q.loops_at(v)).collect::<Vec<_>>(), vec![1, 2, 1]);
    }

    #[test]
    fn dot_output() {
        let q = quotient_graph(&CoverSpec::klein(), &b()).unwrap();
        let dot = q.to_dot();
        assert_eq!(dot.lines().filter(|l| l.contains("[label=") && !l.contains("--")).count(), 3);
        assert_eq!(dot.matches("style=bold").count(), 2);
    }
}
