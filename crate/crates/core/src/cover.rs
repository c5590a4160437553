//! Regular abelian covers of the genus-2 surface, described by the induced map
//! `η′ : H₁(S₂; Z) = Z⁴ → ⊕ Z/n_i` and its kernel lattice.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::is_prime;
use crate::lattice::Lattice;
use crate::symplectic::{PackedMat, SymplecticMatrix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoverError {
    #[error("invalid cover parameters: {0}")]
    InvalidParameters(String),
    #[error("matrix is not symplectic")]
    NotSymplectic,
    #[error("cover description: {0}")]
    Parse(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CoverKind {
    Cyclic { k: u32 },
    Klein,
    Elementary {
        k: u32,
        r: u32,
        #[serde(rename = "K")]
        big_k: u32,
    },
}

impl fmt::Display for CoverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoverKind::Cyclic { k } => write!(f, "cyclic({k})"),
            CoverKind::Klein => write!(f, "klein"),
            CoverKind::Elementary { k, r, big_k } => write!(f, "elementary({k},{r},{big_k})"),
        }
    }
}

/// The JSON form `{ "kind": ..., "k": ..., "r": ..., "K": ... }`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverFile {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<u32>,
    #[serde(default, rename = "K", skip_serializing_if = "Option::is_none")]
    pub big_k: Option<u32>,
}

impl CoverFile {
    pub fn to_kind(&self) -> Result<CoverKind, CoverError> {
        let need = |x: Option<u32>, name: &str| x.ok_or_else(|| CoverError::Parse(format!("missing field {name}")));
        match self.kind.as_str() {
            "cyclic" => Ok(CoverKind::Cyclic { k: need(self.k, "k")? }),
            "klein" => match self.k {
                None | Some(2) => Ok(CoverKind::Klein),
                Some(k) => Err(CoverError::InvalidParameters(format!("the Klein cover has k = 2, not {k}"))),
            },
            "elementary" => Ok(CoverKind::Elementary { k: need(self.k, "k")?, r: need(self.r, "r")?, big_k: need(self.big_k, "K")? }),
            other => Err(CoverError::Parse(format!("unknown cover kind {other:?}"))),
        }
    }

    pub fn from_kind(kind: &CoverKind) -> Self {
        match *kind {
            CoverKind::Cyclic { k } => CoverFile { kind: "cyclic".into(), k: Some(k), r: None, big_k: None },
            CoverKind::Klein => CoverFile { kind: "klein".into(), k: Some(2), r: None, big_k: None },
            CoverKind::Elementary { k, r, big_k } => {
                CoverFile { kind: "elementary".into(), k: Some(k), r: Some(r), big_k: Some(big_k) }
            }
        }
    }
}

/// A cover with its induced homology map and kernel lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverSpec {
    pub kind: CoverKind,
    pub name: String,
    /// Invariant factors of the deck group.
    pub invariants: Vec<u32>,
    /// Row `i` of `η′`, valued in `Z/invariants[i]`.
    pub eta: Vec<[i64; 4]>,
    /// Exponent of the deck group.
    pub k: u32,
    pub lattice: Lattice,
}

/// Builds a cover, checking parameter ranges.
pub fn make_cover(kind: CoverKind) -> Result<CoverSpec, CoverError> {
    let bad = |m: String| Err(CoverError::InvalidParameters(m));
    let (invariants, eta): (Vec<u32>, Vec<[i64; 4]>) = match kind {
        CoverKind::Cyclic { k } => {
            if k < 2 {
                return bad(format!("cyclic cover needs k >= 2, got {k}"));
            }
            (vec![k], vec![[0, 1, 0, 0]])
        }
        CoverKind::Klein => (vec![2, 2], vec![[1, 0, 0, 0], [0, 1, 0, 0]]),
        CoverKind::Elementary { k, r, big_k } => {
            if !is_prime(k) {
                return bad(format!("elementary cover needs prime k, got {k}"));
            }
            if r == 0 || big_k > r.min(2) || 2 * big_k < r {
                return bad(format!("elementary cover needs r/2 <= K <= min(2, r), got r={r}, K={big_k}"));
            }
            // a_i ↦ c_i for i <= K, b_i ↦ c_{K+i} for i <= r-K
            let mut rows = Vec::new();
            for i in 0..big_k as usize {
                let mut row = [0; 4];
                row[2 * i] = 1;
                rows.push(row);
            }
            for i in 0..(r - big_k) as usize {
                let mut row = [0; 4];
                row[2 * i + 1] = 1;
                rows.push(row);
            }
            (vec![k; r as usize], rows)
        }
    };
    let k = *invariants.iter().max().expect("nonempty");
    let lattice = kernel_lattice(&eta, &invariants, k);
    let image = image_size(&eta, &invariants, k);
    assert_eq!(lattice.index(), Some(image), "kernel index must equal the image size");
    Ok(CoverSpec { kind, name: kind.to_string(), invariants, eta, k, lattice })
}

fn eta_vanishes(eta: &[[i64; 4]], inv: &[u32], x: &[i64; 4]) -> bool {
    eta.iter().zip(inv).all(|(row, &n)| (0..4).map(|j| row[j] * x[j]).sum::<i64>().rem_euclid(n as i64) == 0)
}

fn box_points(k: u32) -> impl Iterator<Item = [i64; 4]> {
    let k = k as i64;
    (0..k.pow(4)).map(move |c| [c / (k * k * k), (c / (k * k)) % k, (c / k) % k, c % k])
}

fn kernel_lattice(eta: &[[i64; 4]], inv: &[u32], k: u32) -> Lattice {
    let mut gens: Vec<[i64; 4]> = box_points(k).filter(|x| eta_vanishes(eta, inv, x)).collect();
    for j in 0..4 {
        let mut e = [0; 4];
        e[j] = k as i64;
        gens.push(e);
    }
    Lattice::from_generators(&gens)
}

fn image_size(eta: &[[i64; 4]], inv: &[u32], k: u32) -> u64 {
    let mut seen = std::collections::HashSet::new();
    for x in box_points(k) {
        let img: Vec<i64> =
            eta.iter().zip(inv).map(|(row, &n)| (0..4).map(|j| row[j] * x[j]).sum::<i64>().rem_euclid(n as i64)).collect();
        seen.insert(img);
    }
    seen.len() as u64
}

impl CoverSpec {
    pub fn cyclic(k: u32) -> Result<Self, CoverError> {
        make_cover(CoverKind::Cyclic { k })
    }

    pub fn klein() -> Self {
        make_cover(CoverKind::Klein).expect("klein cover")
    }

    /// `F` lifts iff `Ψ(F)` maps the kernel lattice onto itself.
    pub fn is_liftable(&self, m: &SymplecticMatrix) -> Result<bool, CoverError> {
        if m.modulus() != 0 {
            return Ok(self.preserves_lattice_mod(m));
        }
        if !m.is_symplectic() {
            return Err(CoverError::NotSymplectic);
        }
        Ok(self.lattice.basis().iter().all(|l| self.lattice.contains(&apply_int(m, l))))
    }

    /// `A` maps `L` into `L` modulo `k` (well defined since `kZ⁴ ⊆ L`).
    /// `A` must be given modulo a multiple of the cover's exponent.
    pub fn preserves_lattice_mod(&self, m: &SymplecticMatrix) -> bool {
        let k = self.k;
        assert!(m.modulus() != 0 && m.modulus() % k == 0, "matrix modulus must be a multiple of {k}");
        self.lattice.basis().iter().all(|l| {
            let mut y = apply_int(m, l);
            for x in y.iter_mut() {
                *x = x.rem_euclid(k as i64);
            }
            self.lattice.contains(&y)
        })
    }

    /// Same predicate on a packed matrix modulo `k`.
    pub fn preserves_lattice_packed(&self, m: &PackedMat) -> bool {
        let k = self.k as i64;
        self.lattice.basis().iter().all(|l| {
            let mut y = [0i64; 4];
            for (i, out) in y.iter_mut().enumerate() {
                *out = (0..4).map(|j| m.entry(i, j) as i64 * l[j]).sum::<i64>().rem_euclid(k);
            }
            self.lattice.contains(&y)
        })
    }

    /// Entry-wise congruence conditions equivalent to liftability.
    pub fn congruence_pattern(&self) -> CongruencePattern {
        let k = self.k;
        match self.kind {
            CoverKind::Cyclic { .. } => CongruencePattern {
                modulus: k,
                zero: vec![(2, 1), (2, 3), (2, 4)],
                unit: vec![(2, 2)],
                implicit: false,
            },
            _ => match self.lattice.diagonal() {
                Some(d) => {
                    let sigma = |i: usize| [2, 1, 4, 3][i - 1];
                    let mut zero = Vec::new();
                    for i in 1..=4 {
                        for j in 1..=4 {
                            if d[i - 1] == k as i64 && d[j - 1] == 1 {
                                zero.push((i, j));
                                zero.push((sigma(j), sigma(i)));
                            }
                        }
                    }
                    zero.sort_unstable();
                    zero.dedup();
                    CongruencePattern { modulus: k, zero, unit: vec![], implicit: false }
                }
                None => CongruencePattern { modulus: k, zero: vec![], unit: vec![], implicit: true },
            },
        }
    }
}

fn apply_int(m: &SymplecticMatrix, l: &[i64; 4]) -> [i64; 4] {
    let mut y = [0i64; 4];
    for (i, out) in y.iter_mut().enumerate() {
        *out = (0..4).map(|j| m.get(i, j) * l[j]).sum();
    }
    y
}

/// Entry positions (1-based) required to vanish, or to be units, modulo `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CongruencePattern {
    pub modulus: u32,
    pub zero: Vec<(usize, usize)>,
    pub unit: Vec<(usize, usize)>,
    /// No explicit positions; only the lattice predicate applies.
    pub implicit: bool,
}

impl CongruencePattern {
    /// Positions violated by `m`, read modulo `modulus`.
    pub fn violations(&self, m: &SymplecticMatrix) -> Vec<(usize, usize)> {
        self.violations_mod(m, self.modulus)
    }

    /// Violations read modulo `q`, which should divide the pattern modulus.
    pub fn violations_mod(&self, m: &SymplecticMatrix, q: u32) -> Vec<(usize, usize)> {
        let q = q as i64;
        let mut out: Vec<(usize, usize)> =
            self.zero.iter().copied().filter(|&(i, j)| m.at(i, j).rem_euclid(q) != 0).collect();
        for &(i, j) in &self.unit {
            if num_integer::Integer::gcd(&m.at(i, j), &q).abs() != 1 {
                out.push((i, j));
            }
        }
        out
    }

    pub fn holds(&self, m: &SymplecticMatrix) -> bool {
        self.violations(m).is_empty()
    }
}
