//! Stabilizers of curves in the liftable group: claimed generators, exact
//! factorization of stabilizer matrices, Torelli word families, and
//! finite verification modulo `k`.

mod factor;
mod torelli;

pub use factor::{factor_stabilizer, FactorEngine, FactorError, FactorStatus, FactorizationWitness, WordLetter};
pub use torelli::{torelli_members, torelli_word, TorelliFamily};

use serde::Serialize;

use crate::bound::EnumerationBound;
use crate::cover::{CoverFile, CoverKind, CoverSpec};
use crate::gamma0::{gamma0_data_any_level, StLetter};
use crate::graph::{subgroup_elements, GraphError};
use crate::symplectic::{HVector, MatrixGroup, PackedMat, SymplecticMatrix};
use crate::words::named::{m_prime_word, m_word, n_prime_word, n_word};
use crate::words::{psi, psi_mod, w, HomologyAssignment, Symbol, TwistWord};

/// Default index range for Torelli family members listed in claims.
pub const TORELLI_RANGE: (i64, i64) = (-1, 1);

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum StabError {
    #[error("no claim available for curve {curve} on the {cover} cover")]
    NoClaim { curve: char, cover: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("{0}")]
    Unsupported(String),
}

/// A claimed generator: a twist word, with a display label for named matrices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimGenerator {
    pub label: String,
    pub word: TwistWord,
}

impl ClaimGenerator {
    fn plain(word: TwistWord) -> Self {
        ClaimGenerator { label: word.to_string(), word }
    }

    fn named(label: impl Into<String>, word: TwistWord) -> Self {
        ClaimGenerator { label: label.into(), word }
    }

    pub fn matrix(&self) -> SymplecticMatrix {
        psi(&self.word)
    }
}

/// Claimed generating set of the stabilizer of a curve in the liftable group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabClaim {
    pub curve: char,
    pub cover: CoverFile,
    /// Class of the curve in `H_1(S_2; Z)`.
    pub class: HVector,
    pub generators: Vec<ClaimGenerator>,
    /// Torelli family members (trivial under `Ψ`) listed with the claim.
    pub torelli: Vec<TwistWord>,
    pub torelli_range: (i64, i64),
    pub statement: String,
}

impl StabClaim {
    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.label == label)
    }

    pub fn matrices(&self) -> Vec<SymplecticMatrix> {
        self.generators.iter().map(ClaimGenerator::matrix).collect()
    }

    /// Every generator fixes `±class` and is liftable.
    pub fn check(&self, cover: &CoverSpec) -> Result<(), String> {
        for g in &self.generators {
            let m = g.matrix();
            let img = m.apply(&self.class);
            if img != self.class && img != self.class.neg() {
                return Err(format!("generator {} moves ±{}", g.label, self.class));
            }
            if !cover.is_liftable(&m).unwrap_or(false) {
                return Err(format!("generator {} is not liftable", g.label));
            }
        }
        for t in &self.torelli {
            if !psi(t).is_identity() {
                return Err(format!("Torelli member {t} is not Torelli"));
            }
        }
        Ok(())
    }
}

/// Class of a chain curve.
pub fn curve_class(curve: char) -> Option<HVector> {
    Symbol::from_char(curve).filter(|s| *s != Symbol::Iota).and_then(|s| HomologyAssignment::standard().class(s))
}

fn st_letter_word(l: StLetter) -> TwistWord {
    match l {
        StLetter::T => w("a"),
        StLetter::S => w("a^-1 b^-1 a^-1"),
    }
}

/// Words in `a, b` whose images generate `φ(Γ₀(k))`: `{a, b²}` for `k = 2`,
/// `{a, b³, (ab)³}` for `k = 3`, otherwise `{a, b^k}` together with the
/// Schreier generators of `Γ₀(k)` written in `a, b`.
pub fn gamma0_words(k: u32) -> Vec<TwistWord> {
    match k {
        2 => vec![w("a"), w("b^2")],
        3 => vec![w("a"), w("b^3"), w("(a b)^3")],
        _ => {
            let mut out = vec![w("a"), TwistWord::letter(Symbol::B, k as i64)];
            let data = gamma0_data_any_level(k);
            let to_word = |st: &[(StLetter, i64)]| {
                st.iter().fold(TwistWord::identity(), |acc, &(l, e)| acc.mul(&st_letter_word(l).pow(e)))
            };
            for p in 0..data.index {
                for l in [StLetter::S, StLetter::T] {
                    let g = to_word(&data.rep_words[p]).mul(&st_letter_word(l));
                    let q = data.next_coset(p, l);
                    let g = g.mul(&to_word(&data.rep_words[q]).inverse());
                    if !psi(&g).is_identity() && !out.contains(&g) {
                        out.push(g);
                    }
                }
            }
            out
        }
    }
}

fn cover_name(cover: &CoverSpec) -> String {
    cover.kind.to_string()
}

fn power_label(base: &str, k: u32) -> String {
    format!("{base}^{k}")
}

/// The claimed generating set for `Stab(curve)` in the liftable group.
pub fn stab_claim(curve: char, cover: &CoverSpec) -> Result<StabClaim, StabError> {
    let no_claim = || StabError::NoClaim { curve, cover: cover_name(cover) };
    let class = curve_class(curve).ok_or_else(no_claim)?;
    let iota = ClaimGenerator::named("I", w("I"));
    let (lo, hi) = TORELLI_RANGE;
    let (generators, torelli, statement) = match (&cover.kind, curve) {
        (CoverKind::Cyclic { .. }, 'a') => (
            ["a", "c", "d", "e"].iter().map(|s| ClaimGenerator::plain(w(s))).chain([iota]).collect(),
            vec![],
            "Stab(a) = <a, c, d, e, I>".to_string(),
        ),
        (CoverKind::Cyclic { k }, 'e') => {
            let k = *k;
            let mut gens: Vec<ClaimGenerator> = Vec::new();
            for g in gamma0_words(k) {
                gens.push(ClaimGenerator::plain(g));
            }
            for s in ["a", "c", "e"] {
                let g = ClaimGenerator::plain(w(s));
                if !gens.contains(&g) {
                    gens.push(g);
                }
            }
            gens.push(iota);
            gens.push(ClaimGenerator::named(power_label("M", k), m_word().pow(k as i64)));
            let mut torelli = torelli_members(TorelliFamily::CyclicE, lo, hi);
            for j in 0..k as i64 {
                torelli.push(w("c^-1 (a b)^6 c").conjugate_by(&TwistWord::letter(Symbol::B, j)));
            }
            (gens, torelli, format!("Stab(e) = <S, a, c, e, I, M^{k}> with S generating phi(Gamma0({k})), plus Torelli words"))
        }
        (CoverKind::Cyclic { k }, 'b') => {
            let k = *k as i64;
            let bk = TwistWord::letter(Symbol::B, k);
            let gens = vec![
                ClaimGenerator::plain(bk.clone()),
                ClaimGenerator::plain(w("d")),
                ClaimGenerator::plain(w("e")),
                iota,
                ClaimGenerator::named(power_label("M", k as u32), m_word().pow(k)),
                ClaimGenerator::named(power_label("N", k as u32), n_word().pow(k)),
                ClaimGenerator::plain(bk.conjugate_by(&w("a c^-1"))),
            ];
            (gens, torelli_members(TorelliFamily::CyclicB, lo, hi), format!("Stab(b) = <b^{k}, d, e, I, M^{k}, N^{k}, a c^-1 b^{k} c a^-1>, plus Torelli words"))
        }
        (CoverKind::Cyclic { .. }, 'c') => {
            let e_claim = stab_claim('e', cover)?;
            let f = w("d c e d");
            let gens = e_claim
                .generators
                .iter()
                .map(|g| {
                    if g.label == "I" {
                        g.clone()
                    } else {
                        ClaimGenerator::named(format!("F ({}) F^-1", g.label), g.word.conjugate_by(&f))
                    }
                })
                .collect();
            let torelli = e_claim.torelli.iter().map(|t| t.conjugate_by(&f)).collect();
            (gens, torelli, "Stab(c) = F Stab(e) F^-1 with F = d c e d".to_string())
        }
        (CoverKind::Klein, 'a') => (
            vec![
                ClaimGenerator::plain(w("a")),
                ClaimGenerator::plain(w("c^2")),
                ClaimGenerator::plain(w("d")),
                ClaimGenerator::plain(w("e")),
                iota,
                ClaimGenerator::named("M'^2", m_prime_word().pow(2)),
                ClaimGenerator::named("N'^2", n_prime_word().pow(2)),
            ],
            [w("c^-1 (e d)^6 c")].into_iter().chain(torelli_members(TorelliFamily::KleinA, lo, hi)).collect(),
            "Stab(a) = <a, c^2, d, e, I, c^-1 (e d)^6 c>; matrix level adds M'^2, N'^2".to_string(),
        ),
        (CoverKind::Klein, 'e') => (
            vec![
                ClaimGenerator::plain(w("a")),
                ClaimGenerator::plain(w("b")),
                ClaimGenerator::plain(w("c^2")),
                ClaimGenerator::plain(w("e")),
                iota,
                ClaimGenerator::named("M^2", m_word().pow(2)),
                ClaimGenerator::named("M'^2", m_prime_word().pow(2)),
            ],
            vec![w("c^-1 (a b)^6 c")],
            "Stab(e) = <a, b, c^2, e, I, c^-1 (a b)^6 c>; matrix level adds M^2, M'^2".to_string(),
        ),
        (CoverKind::Klein, 'c') => (
            vec![
                ClaimGenerator::plain(w("a")),
                ClaimGenerator::plain(w("e")),
                ClaimGenerator::plain(w("c^2")),
                iota,
                ClaimGenerator::named("M^2 N'^2", m_word().pow(2).mul(&n_prime_word().pow(2))),
                ClaimGenerator::named("M^2 (d e)^3", m_word().pow(2).mul(&w("(d e)^3"))),
                ClaimGenerator::plain(w("d c b^2 c^-1 d^-1")),
            ],
            torelli_members(TorelliFamily::KleinC, lo, hi),
            "Stab(c) = <a, e, c^2, I, M^2 N'^2, M^2 (d e)^3, d c b^2 c^-1 d^-1>, plus Torelli words".to_string(),
        ),
        _ => return Err(no_claim()),
    };
    let claim = StabClaim {
        curve,
        cover: CoverFile::from_kind(&cover.kind),
        class,
        generators,
        torelli,
        torelli_range: TORELLI_RANGE,
        statement,
    };
    claim.check(cover).map_err(StabError::Unsupported)?;
    Ok(claim)
}

/// Result of comparing the claim's image mod `k` with the true stabilizer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabModkReport {
    pub curve: char,
    pub cover: CoverFile,
    pub k: u32,
    pub subgroup_order: usize,
    pub orbit_size: usize,
    pub stabilizer_order: usize,
    pub generated_order: usize,
    pub verified: bool,
}

/// Sweeps `Stab_{G_k}(±[curve])` and compares it with the group generated by
/// the claim's images mod `k`. The modulus is the cover's own `k`.
pub fn verify_stab_modk(curve: char, cover: &CoverSpec, k: u32, bound: &EnumerationBound) -> Result<StabModkReport, StabError> {
    if k != cover.k {
        return Err(StabError::Unsupported(format!("the {} cover is checked modulo {}, not {k}", cover_name(cover), cover.k)));
    }
    let group = subgroup_elements(cover, bound)?;
    verify_stab_modk_in(curve, cover, &group)
}

/// As [`verify_stab_modk`], with `G_k` already enumerated.
pub fn verify_stab_modk_in(curve: char, cover: &CoverSpec, group: &MatrixGroup) -> Result<StabModkReport, StabError> {
    let k = group.modulus();
    let claim = stab_claim(curve, cover)?;
    let v = claim.class.reduce_mod(k);
    let rep = v.entries().map(|x| x as u8);
    let neg = v.neg().entries().map(|x| x as u8);
    let stab = group.filter(|g: &PackedMat| {
        let img = g.apply(rep, k);
        img == rep || img == neg
    });
    let gens: Vec<SymplecticMatrix> = claim.generators.iter().map(|g| psi_mod(&g.word, k)).collect();
    let generated = MatrixGroup::generated_by(&gens, k);
    let orbit_size = group.order() / stab.order();
    Ok(StabModkReport {
        curve,
        cover: claim.cover,
        k,
        subgroup_order: group.order(),
        orbit_size,
        stabilizer_order: stab.order(),
        generated_order: generated.order(),
        verified: generated == stab,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_claims() -> Vec<(char, CoverSpec)> {
        let mut v = vec![];
        for k in [2u32, 3, 5] {
            for c in ['a', 'b', 'c', 'e'] {
                v.push((c, CoverSpec::cyclic(k).unwrap()));
            }
        }
        for c in ['a', 'c', 'e'] {
            v.push((c, CoverSpec::klein()));
        }
        v
    }

    #[test]
    fn claims_are_valid() {
        for (c, cover) in all_claims() {
            stab_claim(c, &cover).unwrap_or_else(|e| panic!("{c} {}: {e}", cover.kind));
        }
        assert!(matches!(stab_claim('b', &CoverSpec::klein()), Err(StabError::NoClaim { .. })));
        assert!(matches!(stab_claim('d', &CoverSpec::cyclic(2).unwrap()), Err(StabError::NoClaim { .. })));
    }

    #[test]
    fn claim_examples() {
        let labels = |c: &StabClaim| c.generators.iter().map(|g| g.label.clone()).collect::<Vec<_>>();
        assert_eq!(labels(&stab_claim('a', &CoverSpec::cyclic(3).unwrap()).unwrap()), ["a", "c", "d", "e", "I"]);
        let ka = stab_claim('a', &CoverSpec::klein()).unwrap();
        assert_eq!(&labels(&ka)[..5], ["a", "c^2", "d", "e", "I"]);
        assert_eq!(ka.torelli[0], w("c^-1 (e d)^6 c"));
    }

    #[test]
    fn gamma0_words_land_in_gamma0() {
        for k in [2u32, 3, 5, 7] {
            for g in gamma0_words(k) {
                let m = psi(&g);
                assert_eq!(m.get(1, 0).rem_euclid(k as i64), 0, "{g}");
                assert!(m.apply(&HVector::basis(3, 0)) == HVector::basis(3, 0));
            }
        }
    }

    #[test]
    fn stabilizer_orders() {
        let b = EnumerationBound::default();
        let c2 = CoverSpec::cyclic(2).unwrap();
        let r = verify_stab_modk('e', &c2, 2, &b).unwrap();
        assert_eq!((r.stabilizer_order, r.verified), (8, true));
        let r = verify_stab_modk('b', &c2, 2, &b).unwrap();
        assert_eq!((r.stabilizer_order, r.verified), (6, true));
        let r = verify_stab_modk('a', &CoverSpec::klein(), 2, &b).unwrap();
        assert_eq!((r.stabilizer_order, r.verified), (12, true));
    }

    #[test]
    fn all_pairs_verify_mod_k() {
        let b = EnumerationBound::default();
        for (c, cover) in all_claims().into_iter().filter(|(_, cv)| cv.k <= 3) {
            let r = verify_stab_modk(c, &cover, cover.k, &b).unwrap();
            assert!(r.verified, "{c} {}: {r:?}", cover.kind);
            assert_eq!(r.orbit_size * r.stabilizer_order, r.subgroup_order);
        }
    }
}
