//! Finite symplectic groups over `Z/k`, stored as sorted packed keys.

use std::collections::HashSet;

use super::{transvection_power, HVector, SymplecticMatrix};
use crate::arith::prime_factors;
use crate::bound::{BoundError, EnumerationBound};

/// Largest modulus whose 4×4 matrices pack into a `u64` (15^16 < 2^64).
pub const MAX_PACKED_MODULUS: u32 = 15;

/// A 4×4 matrix over `Z/k` as sixteen row-major residues.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct PackedMat([u8; 16]);

impl PackedMat {
    pub fn from_matrix(m: &SymplecticMatrix) -> Self {
        let k = m.modulus();
        assert!(k >= 2 && k <= MAX_PACKED_MODULUS, "packed matrices need 2 <= k <= 15");
        let mut e = [0u8; 16];
        for i in 0..4 {
            for j in 0..4 {
                e[4 * i + j] = m.get(i, j) as u8;
            }
        }
        PackedMat(e)
    }

    pub fn to_matrix(&self, k: u32) -> SymplecticMatrix {
        let mut rows = [[0i64; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                rows[i][j] = self.0[4 * i + j] as i64;
            }
        }
        SymplecticMatrix::from_rows_unchecked(rows, k)
    }

    pub fn identity() -> Self {
        let mut e = [0u8; 16];
        for i in 0..4 {
            e[5 * i] = 1;
        }
        PackedMat(e)
    }

    /// Base-`k` integer with entry `(0,0)` least significant.
    pub fn key(&self, k: u32) -> u64 {
        let k = k as u64;
        self.0.iter().rev().fold(0u64, |acc, &x| acc * k + x as u64)
    }

    pub fn from_key(mut key: u64, k: u32) -> Self {
        let k = k as u64;
        let mut e = [0u8; 16];
        for x in e.iter_mut() {
            *x = (key % k) as u8;
            key /= k;
        }
        PackedMat(e)
    }

    pub fn mul(&self, other: &Self, k: u32) -> Self {
        let (a, b) = (&self.0, &other.0);
        let mut e = [0u8; 16];
        for i in 0..4 {
            for j in 0..4 {
                let s = a[4 * i] as u32 * b[j] as u32
                    + a[4 * i + 1] as u32 * b[4 + j] as u32
                    + a[4 * i + 2] as u32 * b[8 + j] as u32
                    + a[4 * i + 3] as u32 * b[12 + j] as u32;
                e[4 * i + j] = (s % k) as u8;
            }
        }
        PackedMat(e)
    }

    pub fn apply(&self, v: [u8; 4], k: u32) -> [u8; 4] {
        let a = &self.0;
        let mut out = [0u8; 4];
        for (i, o) in out.iter_mut().enumerate() {
            let s: u32 = (0..4).map(|j| a[4 * i + j] as u32 * v[j] as u32).sum();
            *o = (s % k) as u8;
        }
        out
    }

    pub fn entry(&self, i: usize, j: usize) -> u8 {
        self.0[4 * i + j]
    }
}

/// A finite group of 4×4 matrices mod `k`, as a sorted list of packed keys.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixGroup {
    modulus: u32,
    keys: Vec<u64>,
}

impl MatrixGroup {
    /// Closure of `gens` (reduced mod `k`) under multiplication.
    pub fn generated_by(gens: &[SymplecticMatrix], k: u32) -> Self {
        let packed: Vec<PackedMat> = gens.iter().map(|g| PackedMat::from_matrix(&reduce_to(g, k))).collect();
        let id = PackedMat::identity();
        let mut seen: HashSet<u64> = HashSet::new();
        seen.insert(id.key(k));
        let mut frontier = vec![id];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for m in &frontier {
                for g in &packed {
                    let p = m.mul(g, k);
                    if seen.insert(p.key(k)) {
                        next.push(p);
                    }
                }
            }
            frontier = next;
        }
        let mut keys: Vec<u64> = seen.into_iter().collect();
        keys.sort_unstable();
        MatrixGroup { modulus: k, keys }
    }

    pub fn from_keys(k: u32, mut keys: Vec<u64>) -> Self {
        keys.sort_unstable();
        keys.dedup();
        MatrixGroup { modulus: k, keys }
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn order(&self) -> usize {
        self.keys.len()
    }

    pub fn keys(&self) -> &[u64] {
        &self.keys
    }

    pub fn contains(&self, m: &SymplecticMatrix) -> bool {
        let m = reduce_to(m, self.modulus);
        self.contains_packed(&PackedMat::from_matrix(&m))
    }

    pub fn contains_packed(&self, m: &PackedMat) -> bool {
        self.keys.binary_search(&m.key(self.modulus)).is_ok()
    }

    pub fn iter_packed(&self) -> impl Iterator<Item = PackedMat> + '_ {
        let k = self.modulus;
        self.keys.iter().map(move |&key| PackedMat::from_key(key, k))
    }

    pub fn iter(&self) -> impl Iterator<Item = SymplecticMatrix> + '_ {
        let k = self.modulus;
        self.iter_packed().map(move |p| p.to_matrix(k))
    }

    /// Elements satisfying `pred`.
    pub fn filter<F: Fn(&PackedMat) -> bool>(&self, pred: F) -> Self {
        let k = self.modulus;
        let keys = self.keys.iter().copied().filter(|&key| pred(&PackedMat::from_key(key, k))).collect();
        MatrixGroup { modulus: k, keys }
    }

    pub fn is_subset_of(&self, other: &MatrixGroup) -> bool {
        self.modulus == other.modulus && self.keys.iter().all(|k| other.keys.binary_search(k).is_ok())
    }
}

fn reduce_to(m: &SymplecticMatrix, k: u32) -> SymplecticMatrix {
    if m.modulus() == k {
        *m
    } else {
        m.reduce_mod(k)
    }
}

/// `|Sp(4, Z/k)|`, multiplicative over prime powers.
pub fn sp_order(k: u32) -> u64 {
    let mut n = k as u64;
    let mut order = 1u64;
    for p in prime_factors(n) {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        let base = p.pow(4) * (p * p - 1) * (p.pow(4) - 1);
        order *= base * p.pow(10 * (e - 1));
    }
    order
}

/// The full group `Sp(4, Z/k)`, generated by the five chain transvections
/// (`Sp(4,Z)` is generated by them and reduction is onto).
pub fn enumerate_sp(k: u32, bound: &EnumerationBound) -> Result<MatrixGroup, BoundError> {
    bound.check(k)?;
    if k > MAX_PACKED_MODULUS {
        return Err(BoundError::Exceeded { k, max: MAX_PACKED_MODULUS });
    }
    let chain: [[i64; 4]; 5] = [[1, 0, 0, 0], [0, 1, 0, 0], [-1, 0, 1, 0], [0, 0, 0, 1], [0, 0, 1, 0]];
    let gens: Vec<SymplecticMatrix> =
        chain.iter().map(|v| transvection_power(&HVector::modular(*v, k), 1)).collect();
    let g = MatrixGroup::generated_by(&gens, k);
    assert_eq!(g.order() as u64, sp_order(k), "closure of the chain transvections must be all of Sp(4,Z/{k})");
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_formula() {
        assert_eq!(sp_order(2), 720);
        assert_eq!(sp_order(3), 51840);
        assert_eq!(sp_order(5), 9_360_000);
        assert_eq!(sp_order(4), 720 * 1024);
        assert_eq!(sp_order(6), 720 * 51840);
    }

    #[test]
    fn packing_round_trip() {
        let k = 7;
        let m = transvection_power(&HVector::modular([1, 2, 3, 4], k), 3);
        let p = PackedMat::from_matrix(&m);
        assert_eq!(PackedMat::from_key(p.key(k), k), p);
        assert_eq!(p.to_matrix(k), m);
        let q = PackedMat::from_matrix(&(m * m));
        assert_eq!(p.mul(&p, k), q);
    }

    #[test]
    fn small_groups() {
        let b = EnumerationBound::default();
        let g2 = enumerate_sp(2, &b).unwrap();
        assert_eq!(g2.order(), 720);
        assert!(g2.iter().all(|m| m.is_symplectic()));
        let g3 = enumerate_sp(3, &b).unwrap();
        assert_eq!(g3.order(), 51840);
    }

    #[test]
    fn bound_is_enforced() {
        let b = EnumerationBound { max_k: 3, allow_heavy: false };
        assert!(enumerate_sp(5, &b).is_err());
    }
}
