//! Named matrices used in the stabilizer computations, with the words that
//! realize them and the identities tying them to the twist generators.

use serde::Serialize;

use super::{psi, w, TwistWord};
use crate::symplectic::SymplecticMatrix;

fn mat(rows: [[i64; 4]; 4]) -> SymplecticMatrix {
    SymplecticMatrix::from_rows(rows, 0).expect("named matrix is symplectic")
}

pub fn m() -> SymplecticMatrix {
    mat([[1, 0, 0, 0], [0, 1, 0, 1], [-1, 0, 1, 0], [0, 0, 0, 1]])
}

pub fn n() -> SymplecticMatrix {
    mat([[1, 0, 0, 0], [0, 1, 1, 0], [0, 0, 1, 0], [1, 0, 0, 1]])
}

pub fn m_prime() -> SymplecticMatrix {
    mat([[1, 0, 0, 1], [0, 1, 0, 0], [0, 1, 1, 0], [0, 0, 0, 1]])
}

pub fn n_prime() -> SymplecticMatrix {
    mat([[1, 0, 1, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, -1, 0, 1]])
}

/// The matrix `J` of the Klein `c`-stabilizer reduction (not the form matrix).
pub fn j_klein() -> SymplecticMatrix {
    mat([[3, 0, 2, 0], [0, -1, 0, 2], [-2, 0, -1, 0], [0, -2, 0, 3]])
}

pub fn p_klein() -> SymplecticMatrix {
    mat([[0, -1, 0, 0], [1, 0, 0, 1], [0, 1, 1, 0], [0, 0, 0, 1]])
}

/// `diag(1, 1, -1, -1)`.
pub fn i_klein() -> SymplecticMatrix {
    mat([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1]])
}

/// `M = Ψ(a b a⁻¹ c b⁻¹ a⁻¹ e⁻¹)`.
pub fn m_word() -> TwistWord {
    w("a b a^-1 c b^-1 a^-1 e^-1")
}

/// `N = Ψ(d e d) M Ψ(d e d)⁻¹`.
pub fn n_word() -> TwistWord {
    m_word().conjugate_by(&w("d e d"))
}

/// `M′ = Ψ(e) Ψ(a) Ψ(c)⁻¹`.
pub fn m_prime_word() -> TwistWord {
    w("e a c^-1")
}

/// `N′ = Ψ(e d e) M′ Ψ(e d e)⁻¹`.
pub fn n_prime_word() -> TwistWord {
    m_prime_word().conjugate_by(&w("e d e"))
}

/// The hyperelliptic involution as a twist word.
pub fn hyperelliptic_word() -> TwistWord {
    w("e d c b a^2 b c d e")
}

/// A checked matrix identity.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub lhs: Vec<i64>,
    pub rhs: Vec<i64>,
    pub holds: bool,
}

impl IdentityCheck {
    fn new(name: &str, lhs: SymplecticMatrix, rhs: SymplecticMatrix) -> Self {
        IdentityCheck { name: name.to_string(), lhs: lhs.row_major(), rhs: rhs.row_major(), holds: lhs == rhs }
    }
}

/// Reference identities between named matrices, each evaluated exactly over `Z`.
pub fn reference_identities() -> Vec<IdentityCheck> {
    let neg_id = SymplecticMatrix::identity(0).neg();
    let p = p_klein();
    vec![
        IdentityCheck::new("M = Psi(a b a^-1 c b^-1 a^-1 e^-1)", m(), psi(&m_word())),
        IdentityCheck::new("N = Psi(d e d) M Psi(d e d)^-1", n(), psi(&n_word())),
        IdentityCheck::new("M' = Psi(e) Psi(a) Psi(c)^-1", m_prime(), psi(&m_prime_word())),
        IdentityCheck::new("N' = Psi(e d e) M' Psi(e d e)^-1", n_prime(), psi(&n_prime_word())),
        IdentityCheck::new("J = (-I) N'^-2 M^-2", j_klein(), neg_id * n_prime().pow(-2) * m().pow(-2)),
        IdentityCheck::new("P I P^-1 = M^2 Psi(d e)^3", p * i_klein() * p.inverse(), m().pow(2) * psi(&w("(d e)^3"))),
        IdentityCheck::new("Psi(e d c b a^2 b c d e) = -I", psi(&hyperelliptic_word()), neg_id),
    ]
}

/// The two readings of the word for `P Ψ(d)² P⁻¹` with its two readings.
#[derive(Clone, Debug, Serialize)]
pub struct ConjugateReading {
    pub conjugate: Vec<i64>,
    pub literal_reading: TwistWord,
    pub literal_reading_matches: bool,
    pub inverse_reading: TwistWord,
    pub inverse_reading_matches: bool,
}

pub fn p_d_squared_readings() -> ConjugateReading {
    let p = p_klein();
    let conj = p * psi(&w("d^2")) * p.inverse();
    let g = w("e a^-1 d c");
    let literal = g.mul(&w("b^2")).mul(&g);
    let inverse = w("b^2").conjugate_by(&g);
    ConjugateReading {
        conjugate: conj.row_major(),
        literal_reading_matches: psi(&literal) == conj,
        literal_reading: literal,
        inverse_reading_matches: psi(&inverse) == conj,
        inverse_reading: inverse,
    }
}
