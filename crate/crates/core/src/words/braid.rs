//! Word problem in the Artin group of type `A5` (the braid group on six
//! strands), with `a..e` acting as `σ1..σ5`, via the left-greedy Garside
//! normal form.

use serde::Serialize;

use super::TwistWord;

const STRANDS: usize = 6;

/// A simple braid, stored as the permutation it induces (`p[x]` is the image of `x`).
type Perm = [u8; STRANDS];

const ID: Perm = [0, 1, 2, 3, 4, 5];
const DELTA: Perm = [5, 4, 3, 2, 1, 0];

fn compose(p: &Perm, q: &Perm) -> Perm {
    let mut r = [0u8; STRANDS];
    for x in 0..STRANDS {
        r[x] = p[q[x] as usize];
    }
    r
}

fn inverse(p: &Perm) -> Perm {
    let mut r = [0u8; STRANDS];
    for x in 0..STRANDS {
        r[p[x] as usize] = x as u8;
    }
    r
}

fn gen(i: usize) -> Perm {
    let mut p = ID;
    p.swap(i, i + 1);
    p
}

fn tau(p: &Perm) -> Perm {
    compose(&DELTA, &compose(p, &DELTA))
}

fn right_descent(p: &Perm, i: usize) -> bool {
    p[i] > p[i + 1]
}

fn left_descent(p: &Perm, i: usize) -> bool {
    let inv = inverse(p);
    inv[i] > inv[i + 1]
}

/// Makes the pair `(a, b)` left-weighted. Returns whether anything moved.
fn normalize_pair(a: &mut Perm, b: &mut Perm) -> bool {
    let mut moved = false;
    'outer: loop {
        for i in 0..STRANDS - 1 {
            if left_descent(b, i) && !right_descent(a, i) {
                *a = compose(a, &gen(i));
                *b = compose(&gen(i), b);
                moved = true;
                continue 'outer;
            }
        }
        return moved;
    }
}

/// `Δ^power · factors[0] · factors[1] ⋯`, left-weighted, with no `Δ` or
/// identity factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalForm {
    pub delta_power: i64,
    pub factors: Vec<Vec<u8>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BraidVerdict {
    Equal,
    NotEqualInArtin,
    /// One of the words contains `I`.
    Unsupported,
}

/// Garside normal form of an `I`-free word; `None` if the word contains `I`.
pub fn garside_normal_form(word: &TwistWord) -> Option<NormalForm> {
    if word.contains_iota() {
        return None;
    }
    let mut power: i64 = 0;
    let mut factors: Vec<Perm> = Vec::new();
    for (sym, sign) in word.expanded() {
        let i = sym.chain_index().expect("iota excluded above");
        if sign > 0 {
            factors.push(gen(i));
        } else {
            // σ_i⁻¹ = Δ⁻¹ (Δ σ_i⁻¹), and X Δ⁻¹ = Δ⁻¹ τ(X).
            power -= 1;
            for f in factors.iter_mut() {
                *f = tau(f);
            }
            factors.push(compose(&DELTA, &gen(i)));
        }
    }
    loop {
        let mut changed = false;
        for j in 0..factors.len().saturating_sub(1) {
            let (left, right) = factors.split_at_mut(j + 1);
            changed |= normalize_pair(&mut left[j], &mut right[0]);
        }
        if !changed {
            break;
        }
    }
    factors.retain(|f| *f != ID);
    let lead = factors.iter().take_while(|f| **f == DELTA).count();
    factors.drain(..lead);
    power += lead as i64;
    Some(NormalForm { delta_power: power, factors: factors.iter().map(|f| f.to_vec()).collect() })
}

/// Decides equality in the Artin group.
pub fn braid_equal(x: &TwistWord, y: &TwistWord) -> BraidVerdict {
    match (garside_normal_form(x), garside_normal_form(y)) {
        (Some(a), Some(b)) if a == b => BraidVerdict::Equal,
        (Some(_), Some(_)) => BraidVerdict::NotEqualInArtin,
        _ => BraidVerdict::Unsupported,
    }
}

#[cfg(test)]
mod tests {
    use super::super::{psi, w, Letter, Symbol};
    use super::*;
    use proptest::prelude::*;

    fn eq(x: &str, y: &str) -> BraidVerdict {
        braid_equal(&w(x), &w(y))
    }

    #[test]
    fn basic_relations() {
        assert_eq!(eq("a c", "c a"), BraidVerdict::Equal);
        assert_eq!(eq("a b a", "b a b"), BraidVerdict::Equal);
        assert_eq!(eq("a b", "b a"), BraidVerdict::NotEqualInArtin);
        assert_eq!(eq("a a^-1", ""), BraidVerdict::Equal);
        assert_eq!(eq("a^-1 b^-1", "(b a)^-1"), BraidVerdict::Equal);
        assert_eq!(eq("a I", "a"), BraidVerdict::Unsupported);
    }

    #[test]
    fn chain_identities() {
        assert_eq!(eq("(b c)^6", "(b^2 c)^4"), BraidVerdict::Equal);
        assert_eq!(eq("(b c)^6", "(b^3 c)^3"), BraidVerdict::Equal);
        assert_eq!(eq("b c d (b c)^6 d^-1 c^-1 b^-1", "(c d)^6"), BraidVerdict::Equal);
    }

    #[test]
    fn delta_is_central_squared() {
        let delta = w("a b a c b a d c b a e d c b a");
        let d2 = delta.pow(2);
        for s in ["a", "b", "c", "d", "e"] {
            assert_eq!(braid_equal(&w(s).mul(&d2), &d2.mul(&w(s))), BraidVerdict::Equal);
        }
        assert_eq!(garside_normal_form(&delta).unwrap(), NormalForm { delta_power: 1, factors: vec![] });
    }

    fn arb_word() -> impl Strategy<Value = TwistWord> {
        let sym = prop::sample::select(Symbol::TWISTS.to_vec());
        prop::collection::vec((sym, -2i64..3), 0..8)
            .prop_map(|v| TwistWord::new(v.into_iter().map(|(symbol, exp)| Letter { symbol, exp })))
    }

    proptest! {
        #[test]
        fn inverse_cancels(x in arb_word()) {
            prop_assert_eq!(braid_equal(&x.mul(&x.inverse()), &TwistWord::identity()), BraidVerdict::Equal);
        }

        #[test]
        fn equality_is_sound_for_psi(x in arb_word(), y in arb_word()) {
            // x y x⁻¹ vs itself rewritten through a commuting insertion.
            let lhs = x.mul(&y).mul(&x.inverse());
            let rhs = x.mul(&w("a c c^-1 a^-1")).mul(&y).mul(&x.inverse());
            prop_assert_eq!(braid_equal(&lhs, &rhs), BraidVerdict::Equal);
            if braid_equal(&x, &y) == BraidVerdict::Equal {
                prop_assert_eq!(psi(&x), psi(&y));
            }
        }

        #[test]
        fn equivalence_relation(x in arb_word(), y in arb_word(), z in arb_word()) {
            prop_assert_eq!(braid_equal(&x, &x), BraidVerdict::Equal);
            prop_assert_eq!(braid_equal(&x, &y), braid_equal(&y, &x));
            if braid_equal(&x, &y) == BraidVerdict::Equal && braid_equal(&y, &z) == BraidVerdict::Equal {
                prop_assert_eq!(braid_equal(&x, &z), BraidVerdict::Equal);
            }
        }
    }
}
