//! Constructive lifts of primitive vectors and symplectic bases from `Z/k` to `Z`.

use super::{HVector, SymplecticError};
use crate::arith::{bezout, gcd_all, prime_factors};
use crate::lattice::row_hnf;

/// A primitive integral vector congruent to `x` modulo `k`.
///
/// The canonical residues are used when already primitive. Otherwise only the
/// first coordinate is moved (by a multiple of `k`), unless every
/// other coordinate vanishes, in which case the second one becomes `k`.
pub fn primitive_lift<const N: usize>(x: &HVector<N>) -> Result<HVector<N>, SymplecticError> {
    let k = x.modulus();
    if k == 0 {
        return if x.is_primitive() { Ok(*x) } else { Err(SymplecticError::NotPrimitive(x.to_string())) };
    }
    if !x.is_primitive() {
        return Err(SymplecticError::NotPrimitive(x.to_string()));
    }
    let naive = x.lift_naive();
    if naive.is_primitive() {
        return Ok(naive);
    }
    let mut e = *x.entries();
    if e[1..].iter().all(|&v| v == 0) {
        e[1] = k as i64;
    }
    let g = gcd_all(&e[1..]).unsigned_abs();
    let t: i64 = prime_factors(g).into_iter().filter(|&p| e[0] % p as i64 != 0).map(|p| p as i64).product();
    e[0] += t * k as i64;
    let v = HVector::integral(e);
    debug_assert!(v.is_primitive());
    Ok(v)
}

/// Given primitive `u` over `Z` and `y` mod `k` with `î(u, y) ≡ 1`, returns a
/// primitive `v ≡ y (mod k)` with `î(u, v) = 1` over `Z`.
pub fn lift_partner<const N: usize>(u: &HVector<N>, y: &HVector<N>) -> Result<HVector<N>, SymplecticError> {
    let k = y.modulus();
    if u.modulus() != 0 || k == 0 {
        return Err(SymplecticError::Precondition("u must be integral and y modular".into()));
    }
    if !u.is_primitive() {
        return Err(SymplecticError::NotPrimitive(u.to_string()));
    }
    if !y.is_primitive() {
        return Err(SymplecticError::NotPrimitive(y.to_string()));
    }
    if u.reduce_mod(k).pair(y) != 1 % k as i64 {
        return Err(SymplecticError::Precondition(format!("pairing of {u} and {y} is not 1 mod {k}")));
    }
    let y0 = y.lift_naive();
    let p = u.pair(&y0);
    let t = (p - 1) / k as i64;
    // î(u, ·) is the row (î(u, e_j))_j; Bezout on it gives w with î(u, w) = 1.
    let row: Vec<i64> = (1..=N).map(|j| u.pair(&HVector::basis(j, 0))).collect();
    let (g, coeffs) = bezout(&row);
    debug_assert_eq!(g, 1);
    let mut w = [0i64; N];
    w.copy_from_slice(&coeffs);
    let v = y0.add(&HVector::integral(w).scale(-t * k as i64));
    debug_assert_eq!(u.pair(&v), 1);
    Ok(v)
}

/// Lifts a symplectic basis `(b1, b2, b3, b4)` of `(Z/k)^4` to one of `Z^4`.
pub fn lift_basis(basis: &[HVector; 4]) -> Result<[HVector; 4], SymplecticError> {
    let k = basis[0].modulus();
    if k < 2 || basis.iter().any(|b| b.modulus() != k) {
        return Err(SymplecticError::Precondition("basis must be given modulo a common k >= 2".into()));
    }
    for i in 0..4 {
        for j in 0..4 {
            let want = crate::arith::reduce(super::form_entry(4, i, j), k);
            if basis[i].pair(&basis[j]) != want {
                return Err(SymplecticError::Precondition("input is not a symplectic basis mod k".into()));
            }
        }
    }
    let v1 = primitive_lift(&basis[0])?;
    let v2 = lift_partner(&v1, &basis[1])?;
    // Projection onto the orthogonal complement of <v1, v2>.
    let proj = |x: &HVector| x.add(&v1.scale(-x.pair(&v2))).add(&v2.scale(x.pair(&v1)));
    let rows: Vec<Vec<i64>> = (1..=4).map(|j| proj(&HVector::basis(j, 0)).entries().to_vec()).collect();
    let h = row_hnf(&rows);
    assert_eq!(h.len(), 2, "complement of a hyperbolic pair has rank 2");
    let mut f1 = HVector::integral([h[0][0], h[0][1], h[0][2], h[0][3]]);
    let mut f2 = HVector::integral([h[1][0], h[1][1], h[1][2], h[1][3]]);
    match f1.pair(&f2) {
        1 => {}
        -1 => std::mem::swap(&mut f1, &mut f2),
        other => unreachable!("complement is unimodular, got pairing {other}"),
    }
    let coords = |x: &HVector| {
        let px = proj(&x.lift_naive());
        HVector::<2>::modular([px.pair(&f2), f1.pair(&px)], k)
    };
    let w3 = primitive_lift(&coords(&basis[2]))?;
    let w4 = lift_partner(&w3, &coords(&basis[3]))?;
    let embed = |w: &HVector<2>| f1.scale(w.entries()[0]).add(&f2.scale(w.entries()[1]));
    let out = [v1, v2, embed(&w3), embed(&w4)];
    for (o, b) in out.iter().zip(basis) {
        debug_assert_eq!(o.reduce_mod(k), *b);
    }
    Ok(out)
}
