//! `Γ₀(k) ⊂ SL(2, Z)`: cosets via the projective line over `Z/k`, Schreier
//! generators, `S`/`T` decompositions and Reidemeister–Schreier rewriting.

use std::collections::HashMap;

use serde::Serialize;

use crate::arith::{is_prime, round_div};
use crate::cover::CoverError;
use crate::symplectic::SymplecticMatrix;

pub type Mat2 = SymplecticMatrix<2>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum StLetter {
    S,
    T,
}

/// `S = [[0,-1],[1,0]]`.
pub fn s_mat() -> Mat2 {
    Mat2::from_rows_unchecked([[0, -1], [1, 0]], 0)
}

/// `T = [[1,1],[0,1]]`.
pub fn t_mat() -> Mat2 {
    Mat2::from_rows_unchecked([[1, 1], [0, 1]], 0)
}

fn letter_mat(l: StLetter) -> Mat2 {
    match l {
        StLetter::S => s_mat(),
        StLetter::T => t_mat(),
    }
}

pub fn st_eval(word: &[(StLetter, i64)]) -> Mat2 {
    word.iter().fold(Mat2::identity(0), |acc, &(l, e)| acc * letter_mat(l).pow(e))
}

/// A word in `S`, `T` whose product is `b` (continued-fraction reduction).
pub fn st_decompose(b: &Mat2) -> Vec<(StLetter, i64)> {
    assert_eq!(b.determinant(), 1, "not in SL(2,Z)");
    let mut m = *b;
    // ops applied on the left, in order
    let mut ops: Vec<(StLetter, i64)> = Vec::new();
    while m.get(1, 0) != 0 {
        let q = round_div(m.get(0, 0), m.get(1, 0));
        if q != 0 {
            m = t_mat().pow(-q) * m;
            ops.push((StLetter::T, -q));
        }
        m = s_mat() * m;
        ops.push((StLetter::S, 1));
    }
    // m = ±T^n
    let n = m.get(0, 1) * m.get(0, 0);
    let mut word: Vec<(StLetter, i64)> = ops.iter().map(|&(l, e)| (l, -e)).collect();
    if m.get(0, 0) == -1 {
        word.push((StLetter::S, 2));
    }
    if n != 0 {
        word.push((StLetter::T, n));
    }
    let word = merge(word);
    debug_assert_eq!(st_eval(&word), *b);
    word
}

fn merge(word: Vec<(StLetter, i64)>) -> Vec<(StLetter, i64)> {
    let mut out: Vec<(StLetter, i64)> = Vec::new();
    for (l, e) in word {
        match out.last_mut() {
            Some(last) if last.0 == l => {
                last.1 += e;
                if last.1 == 0 || (l == StLetter::S && last.1.rem_euclid(4) == 0) {
                    out.pop();
                }
            }
            _ if e != 0 => out.push((l, e)),
            _ => {}
        }
    }
    out
}

/// Coset data for `Γ₀(k)`.
#[derive(Clone, Debug, Serialize)]
pub struct Gamma0Data {
    pub k: u32,
    pub index: usize,
    /// Canonical points `(c : d)` of the projective line, one per coset.
    pub points: Vec<(i64, i64)>,
    pub coset_reps: Vec<Mat2>,
    pub rep_words: Vec<Vec<(StLetter, i64)>>,
    /// Distinct nontrivial Schreier generators.
    pub generators: Vec<Mat2>,
    /// `(coset, letter) ↦ ` index of `r_p s r_{p·s}⁻¹` among `generators` (None when trivial).
    #[serde(skip)]
    table: HashMap<(usize, StLetter), Option<usize>>,
    #[serde(skip)]
    next: HashMap<(usize, StLetter), usize>,
    #[serde(skip)]
    prev: HashMap<(usize, StLetter), usize>,
}

fn units(k: u32) -> Vec<i64> {
    (1..k as i64).filter(|&u| num_integer::Integer::gcd(&u, &(k as i64)) == 1).collect()
}

fn canon(c: i64, d: i64, k: u32, units: &[i64]) -> (i64, i64) {
    let km = k as i64;
    if k == 1 {
        return (0, 0);
    }
    units.iter().map(|&u| ((u * c).rem_euclid(km), (u * d).rem_euclid(km))).min().expect("units nonempty")
}

/// Cosets and Schreier generators of `Γ₀(k)` for prime `k`.
pub fn gamma0_data(k: u32) -> Result<Gamma0Data, CoverError> {
    if !is_prime(k) {
        return Err(CoverError::InvalidParameters(format!("Γ₀(k) data needs prime k, got {k}")));
    }
    Ok(build(k))
}

/// Any level `k >= 1` (level 1 is all of `SL(2,Z)`).
pub fn gamma0_data_any_level(k: u32) -> Gamma0Data {
    assert!(k >= 1);
    build(k)
}

fn build(k: u32) -> Gamma0Data {
    let us = units(k.max(2));
    let point_of = |m: &Mat2| canon(m.get(1, 0), m.get(1, 1), k, &us);
    let mut points = vec![point_of(&Mat2::identity(0))];
    let mut reps = vec![Mat2::identity(0)];
    let mut words: Vec<Vec<(StLetter, i64)>> = vec![vec![]];
    let mut index_of: HashMap<(i64, i64), usize> = HashMap::from([(points[0], 0)]);
    let mut next = HashMap::new();
    let mut i = 0;
    while i < reps.len() {
        for l in [StLetter::S, StLetter::T] {
            let m = reps[i] * letter_mat(l);
            let p = point_of(&m);
            let j = *index_of.entry(p).or_insert_with(|| {
                points.push(p);
                reps.push(m);
                let mut wd = words[i].clone();
                wd.push((l, 1));
                words.push(merge(wd));
                reps.len() - 1
            });
            next.insert((i, l), j);
        }
        i += 1;
    }
    let mut generators: Vec<Mat2> = Vec::new();
    let mut table = HashMap::new();
    let mut prev = HashMap::new();
    for i in 0..reps.len() {
        for l in [StLetter::S, StLetter::T] {
            let j = next[&(i, l)];
            prev.insert((j, l), i);
            let g = reps[i] * letter_mat(l) * reps[j].inverse();
            debug_assert_eq!(g.get(1, 0).rem_euclid(k as i64), 0);
            let idx = if g.is_identity() {
                None
            } else if let Some(pos) = generators.iter().position(|h| *h == g) {
                Some(pos)
            } else {
                generators.push(g);
                Some(generators.len() - 1)
            };
            table.insert((i, l), idx);
        }
    }
    Gamma0Data { k, index: reps.len(), points, coset_reps: reps, rep_words: words, generators, table, next, prev }
}

impl Gamma0Data {
    pub fn contains(&self, b: &Mat2) -> bool {
        b.determinant() == 1 && b.get(1, 0).rem_euclid(self.k as i64) == 0
    }

    /// Writes `b ∈ Γ₀(k)` as a product of Schreier generators, as
    /// `(generator index, ±1)` pairs. `None` when `b ∉ Γ₀(k)`.
    pub fn rewrite(&self, b: &Mat2) -> Option<Vec<(usize, i8)>> {
        if !self.contains(b) {
            return None;
        }
        let mut out = Vec::new();
        let mut p = 0usize;
        for (l, e) in st_decompose(b) {
            for _ in 0..e.unsigned_abs() {
                if e > 0 {
                    if let Some(g) = self.table[&(p, l)] {
                        out.push((g, 1));
                    }
                    p = self.next[&(p, l)];
                } else {
                    let q = self.prev[&(p, l)];
                    if let Some(g) = self.table[&(q, l)] {
                        out.push((g, -1));
                    }
                    p = q;
                }
            }
        }
        debug_assert_eq!(p, 0);
        debug_assert_eq!(self.evaluate(&out), *b);
        Some(out)
    }

    /// Coset reached from coset `p` by right multiplication with `l`.
    pub fn next_coset(&self, p: usize, l: StLetter) -> usize {
        self.next[&(p, l)]
    }

    pub fn evaluate(&self, word: &[(usize, i8)]) -> Mat2 {
        word.iter().fold(Mat2::identity(0), |acc, &(g, s)| acc * self.generators[g].pow(s as i64))
    }
}
