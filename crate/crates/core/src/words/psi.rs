//! The symplectic representation on twist words.

use super::{Symbol, TwistWord};
use crate::symplectic::{transvection_power, HVector, SymplecticMatrix};

/// Homology classes of the chain curves `a, b, c, d, e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyAssignment {
    classes: [[i64; 4]; 5],
}

impl Default for HomologyAssignment {
    fn default() -> Self {
        Self::standard()
    }
}

impl HomologyAssignment {
    /// `[a]=e1, [b]=e2, [c]=e3-e1, [d]=e4, [e]=e3`.
    pub fn standard() -> Self {
        HomologyAssignment { classes: [[1, 0, 0, 0], [0, 1, 0, 0], [-1, 0, 1, 0], [0, 0, 0, 1], [0, 0, 1, 0]] }
    }

    pub fn class(&self, s: Symbol) -> Option<HVector> {
        s.chain_index().map(|i| HVector::integral(self.classes[i]))
    }

    /// Chain pattern: neighbours pair to ±1, everything else to 0, and every
    /// class is primitive.
    pub fn self_test(&self) -> Result<(), String> {
        for i in 0..5 {
            let x = HVector::integral(self.classes[i]);
            if !x.is_primitive() {
                return Err(format!("class {i} is not primitive"));
            }
            for j in 0..5 {
                let p = x.pair(&HVector::integral(self.classes[j]));
                let adjacent = i.abs_diff(j) == 1;
                if adjacent && p.abs() != 1 {
                    return Err(format!("chain neighbours {i},{j} pair to {p}"));
                }
                if !adjacent && p != 0 {
                    return Err(format!("disjoint curves {i},{j} pair to {p}"));
                }
            }
        }
        Ok(())
    }

    pub fn psi_with_modulus(&self, word: &TwistWord, k: u32) -> SymplecticMatrix {
        let mut acc = SymplecticMatrix::identity(k);
        for l in word.letters() {
            let m = match l.symbol.chain_index() {
                Some(i) => {
                    let v = if k == 0 {
                        HVector::integral(self.classes[i])
                    } else {
                        HVector::modular(self.classes[i], k)
                    };
                    transvection_power(&v, l.exp)
                }
                None => {
                    if l.exp.rem_euclid(2) == 1 {
                        SymplecticMatrix::identity(k).neg()
                    } else {
                        SymplecticMatrix::identity(k)
                    }
                }
            };
            acc = acc * m;
        }
        acc
    }
}

/// `Ψ(w)` over `Z`, with `Ψ(I) = -Id`.
pub fn psi(word: &TwistWord) -> SymplecticMatrix {
    HomologyAssignment::standard().psi_with_modulus(word, 0)
}

/// `Ψ(w)` reduced modulo `k`.
pub fn psi_mod(word: &TwistWord, k: u32) -> SymplecticMatrix {
    assert!(k >= 2, "modulus must be at least 2");
    HomologyAssignment::standard().psi_with_modulus(word, k)
}

/// True iff `Ψ(w)` is the identity.
pub fn is_torelli(word: &TwistWord) -> bool {
    psi(word).is_identity()
}
