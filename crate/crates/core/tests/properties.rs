//! Cross-module invariants.

use std::sync::OnceLock;

use liftkit::assembly::{random_instance, verify_finite_instance};
use liftkit::cover::{CoverKind, CoverSpec};
use liftkit::pipeline::{normalize, CurveAction};
use liftkit::assembly::GroupAction;
use liftkit::stabilizers::{stab_claim, FactorEngine};
use liftkit::words::{braid_equal, BraidVerdict, Letter, Symbol};
use liftkit::{psi, psi_mod, HVector, TwistWord};
use proptest::prelude::*;

const LETTERS: [char; 5] = ['a', 'b', 'c', 'd', 'e'];

fn arb_word(max_len: usize) -> impl Strategy<Value = TwistWord> {
    prop::collection::vec((0..5usize, -3i64..=3), 0..max_len).prop_map(|v| {
        TwistWord::new(
            v.into_iter()
                .filter(|&(_, e)| e != 0)
                .map(|(i, e)| Letter { symbol: Symbol::from_char(LETTERS[i]).unwrap(), exp: e }),
        )
    })
}

fn arb_cover() -> impl Strategy<Value = CoverSpec> {
    prop_oneof![
        Just(CoverSpec::cyclic(2).unwrap()),
        Just(CoverSpec::cyclic(3).unwrap()),
        Just(CoverSpec::cyclic(5).unwrap()),
        Just(CoverSpec::klein()),
    ]
}

fn engines() -> &'static [FactorEngine] {
    static ENGINES: OnceLock<Vec<FactorEngine>> = OnceLock::new();
    ENGINES.get_or_init(|| {
        [('e', CoverSpec::cyclic(5).unwrap()), ('b', CoverSpec::cyclic(5).unwrap()), ('c', CoverSpec::cyclic(2).unwrap()), ('c', CoverSpec::klein())]
            .iter()
            .map(|(c, cover)| FactorEngine::new(*c, cover).unwrap())
            .collect()
    })
}

proptest! {
    #[test]
    fn psi_is_a_homomorphism(x in arb_word(8), y in arb_word(8)) {
        prop_assert_eq!(psi(&x.mul(&y)), psi(&x) * psi(&y));
        prop_assert_eq!(psi(&x.inverse()), psi(&x).inverse());
        prop_assert!(psi(&x).is_symplectic());
    }

    #[test]
    fn reduction_commutes_with_psi(x in arb_word(10), k in prop::sample::select(vec![2u32, 3, 5, 7])) {
        prop_assert_eq!(psi(&x).reduce_mod(k), psi_mod(&x, k));
    }

    #[test]
    fn liftable_words_form_a_group(x in arb_word(6), y in arb_word(6), cover in arb_cover()) {
        let lx = cover.is_liftable(&psi(&x)).unwrap();
        let ly = cover.is_liftable(&psi(&y)).unwrap();
        prop_assert_eq!(cover.is_liftable(&psi(&x.inverse())).unwrap(), lx);
        if lx && ly {
            prop_assert!(cover.is_liftable(&psi(&x.mul(&y))).unwrap());
        }
    }

    #[test]
    fn braid_equality_implies_psi_equality(x in arb_word(6), y in arb_word(6)) {
        let z = x.mul(&y).mul(&y.inverse());
        prop_assert_eq!(braid_equal(&x, &z), BraidVerdict::Equal);
        if braid_equal(&x, &y) == BraidVerdict::Equal {
            prop_assert_eq!(psi(&x), psi(&y));
        }
    }

    #[test]
    fn curve_action_preserves_adjacency(x in arb_word(6), i in 0..5usize, j in 0..5usize) {
        let act = CurveAction;
        let class = |c: char| liftkit::stabilizers::curve_class(c).unwrap();
        let (u, v) = (normalize(&class(LETTERS[i])), normalize(&class(LETTERS[j])));
        prop_assert_eq!(act.is_edge(&u, &v), act.is_edge(&act.act(&x, &u), &act.act(&x, &v)));
    }

    #[test]
    fn normalize_is_sign_invariant(e in prop::array::uniform4(-9i64..=9)) {
        let v = HVector::integral(e);
        prop_assert_eq!(normalize(&v), normalize(&v.neg()));
    }

    #[test]
    fn random_instances_verify(seed in any::<u64>()) {
        let inst = random_instance(seed);
        let v = verify_finite_instance(&inst).unwrap();
        prop_assert!(v.verified);
        prop_assert_eq!(v.group_order, v.closure_order);
    }

    #[test]
    fn factorization_round_trips(seed in any::<u64>(), case in 0..4usize) {
        let engine = &engines()[case];
        let a = engine.sample_seeded(seed, 10);
        let r = engine.factor(&a).unwrap();
        prop_assert!(r.residual.is_identity());
        prop_assert_eq!(psi(&r.word), a);
    }
}

#[test]
fn claim_generators_are_liftable_and_fix_the_curve() {
    for cover in [CoverSpec::cyclic(2).unwrap(), CoverSpec::cyclic(3).unwrap(), CoverSpec::cyclic(5).unwrap(), CoverSpec::klein()] {
        let curves: &[char] = if cover.kind == CoverKind::Klein { &['a', 'e', 'c'] } else { &['a', 'b', 'c', 'e'] };
        for &c in curves {
            let claim = stab_claim(c, &cover).unwrap();
            let v = normalize(&claim.class);
            for g in &claim.generators {
                let m = g.matrix();
                assert!(cover.is_liftable(&m).unwrap(), "{c} {}: {}", cover.kind, g.label);
                assert_eq!(normalize(&m.apply(&v)), v, "{c} {}: {}", cover.kind, g.label);
            }
        }
    }
}
