//! Exact symplectic linear algebra over `Z` and `Z/k`.
//!
//! Vectors and matrices carry a modulus (`0` means the integers). The form is
//! block diagonal with blocks `[[0,1],[-1,0]]`, so `î(e1,e2) = î(e3,e4) = 1`.
//! Dimension is a const parameter `N = 2h`; the genus-2 case `N = 4` is the
//! default and the only one the paper-specific code paths accept.

mod finite;
mod lifting;

pub use finite::{enumerate_sp, sp_order, MatrixGroup, PackedMat, MAX_PACKED_MODULUS};
pub use lifting::{lift_basis, lift_partner, primitive_lift};

use std::fmt;
use std::ops::Mul;

use crate::arith::{gcd_all, reduce};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymplecticError {
    #[error("modulus mismatch ({0} vs {1})")]
    ModulusMismatch(u32, u32),
    #[error("modulus 1 is not allowed")]
    InvalidModulus,
    #[error("vector {0} is not primitive")]
    NotPrimitive(String),
    #[error("matrix is not symplectic")]
    NotSymplectic,
    #[error("precondition violated: {0}")]
    Precondition(String),
}

fn check_modulus(k: u32) -> Result<(), SymplecticError> {
    if k == 1 {
        Err(SymplecticError::InvalidModulus)
    } else {
        Ok(())
    }
}

/// A vector of `Z^N` or `(Z/k)^N`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HVector<const N: usize = 4> {
    entries: [i64; N],
    modulus: u32,
}

impl<const N: usize> HVector<N> {
    pub fn new(entries: [i64; N], modulus: u32) -> Result<Self, SymplecticError> {
        check_modulus(modulus)?;
        Ok(Self::reduced(entries, modulus))
    }

    fn reduced(mut entries: [i64; N], modulus: u32) -> Self {
        for x in entries.iter_mut() {
            *x = reduce(*x, modulus);
        }
        HVector { entries, modulus }
    }

    pub fn integral(entries: [i64; N]) -> Self {
        HVector { entries, modulus: 0 }
    }

    pub fn modular(entries: [i64; N], k: u32) -> Self {
        assert!(k >= 2, "modulus must be at least 2");
        Self::reduced(entries, k)
    }

    /// Standard basis vector `e_i`, 1-based as in the literature.
    pub fn basis(i: usize, modulus: u32) -> Self {
        assert!((1..=N).contains(&i));
        let mut e = [0; N];
        e[i - 1] = 1;
        Self::reduced(e, modulus)
    }

    pub fn zero(modulus: u32) -> Self {
        HVector { entries: [0; N], modulus }
    }

    pub fn entries(&self) -> &[i64; N] {
        &self.entries
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    pub fn is_primitive(&self) -> bool {
        let mut all: Vec<i64> = self.entries.to_vec();
        all.push(self.modulus as i64);
        gcd_all(&all) == 1
    }

    /// Reduction modulo `k` (from `Z`, or from a multiple of `k`).
    pub fn reduce_mod(&self, k: u32) -> Self {
        assert!(k >= 2);
        assert!(self.modulus == 0 || self.modulus % k == 0, "cannot reduce mod {} from mod {}", k, self.modulus);
        Self::reduced(self.entries, k)
    }

    /// Reinterpret the canonical residues as integers.
    pub fn lift_naive(&self) -> Self {
        HVector { entries: self.entries, modulus: 0 }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.modulus, other.modulus);
        let mut e = self.entries;
        for (x, y) in e.iter_mut().zip(other.entries.iter()) {
            *x = x.checked_add(*y).expect("vector entry overflow");
        }
        Self::reduced(e, self.modulus)
    }

    pub fn scale(&self, c: i64) -> Self {
        let mut e = self.entries;
        for x in e.iter_mut() {
            *x = x.checked_mul(c).expect("vector entry overflow");
        }
        Self::reduced(e, self.modulus)
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    /// `î(self, other)`.
    pub fn pair(&self, other: &Self) -> i64 {
        pairing(self, other).expect("pairing of vectors with different moduli")
    }
}

impl<const N: usize> fmt::Debug for HVector<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)?;
        if self.modulus > 0 {
            write!(f, " mod {}", self.modulus)?;
        }
        Ok(())
    }
}

impl<const N: usize> fmt::Display for HVector<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", x)?;
        }
        write!(f, ")")
    }
}

/// The symplectic pairing `xᵀ J y`, reduced when modular.
pub fn pairing<const N: usize>(x: &HVector<N>, y: &HVector<N>) -> Result<i64, SymplecticError> {
    if x.modulus != y.modulus {
        return Err(SymplecticError::ModulusMismatch(x.modulus, y.modulus));
    }
    let mut s: i128 = 0;
    for i in 0..N / 2 {
        s += x.entries[2 * i] as i128 * y.entries[2 * i + 1] as i128;
        s -= x.entries[2 * i + 1] as i128 * y.entries[2 * i] as i128;
    }
    let s = i64::try_from(s).expect("pairing overflow");
    Ok(reduce(s, x.modulus))
}

/// Entry of the form matrix `J`.
pub fn form_entry(n: usize, i: usize, j: usize) -> i64 {
    debug_assert!(n % 2 == 0);
    if i / 2 != j / 2 {
        0
    } else if i % 2 == 0 && j == i + 1 {
        1
    } else if i % 2 == 1 && j + 1 == i {
        -1
    } else {
        0
    }
}

/// A square matrix over `Z` or `Z/k`; the name records its intended use.
/// Constructors that check membership in `Sp(N)` return `Result`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SymplecticMatrix<const N: usize = 4> {
    rows: [[i64; N]; N],
    modulus: u32,
}

impl<const N: usize> SymplecticMatrix<N> {
    pub fn identity(modulus: u32) -> Self {
        let mut rows = [[0; N]; N];
        for (i, r) in rows.iter_mut().enumerate() {
            r[i] = 1;
        }
        Self::from_rows_unchecked(rows, modulus)
    }

    /// The form matrix `J`.
    pub fn form(modulus: u32) -> Self {
        let mut rows = [[0; N]; N];
        for (i, r) in rows.iter_mut().enumerate() {
            for (j, x) in r.iter_mut().enumerate() {
                *x = form_entry(N, i, j);
            }
        }
        Self::from_rows_unchecked(rows, modulus)
    }

    pub fn from_rows(rows: [[i64; N]; N], modulus: u32) -> Result<Self, SymplecticError> {
        check_modulus(modulus)?;
        let m = Self::from_rows_unchecked(rows, modulus);
        if m.is_symplectic() {
            Ok(m)
        } else {
            Err(SymplecticError::NotSymplectic)
        }
    }

    pub fn from_rows_unchecked(mut rows: [[i64; N]; N], modulus: u32) -> Self {
        if modulus > 0 {
            for r in rows.iter_mut() {
                for x in r.iter_mut() {
                    *x = reduce(*x, modulus);
                }
            }
        }
        SymplecticMatrix { rows, modulus }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[HVector<N>; N]) -> Self {
        let modulus = cols[0].modulus;
        let mut rows = [[0; N]; N];
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.modulus, modulus);
            for i in 0..N {
                rows[i][j] = c.entries[i];
            }
        }
        SymplecticMatrix { rows, modulus }
    }

    pub fn rows(&self) -> &[[i64; N]; N] {
        &self.rows
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Entry `(i, j)`, 0-based.
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.rows[i][j]
    }

    /// Entry `(i, j)`, 1-based.
    pub fn at(&self, i: usize, j: usize) -> i64 {
        self.rows[i - 1][j - 1]
    }

    pub fn column(&self, j: usize) -> HVector<N> {
        let mut e = [0; N];
        for i in 0..N {
            e[i] = self.rows[i][j];
        }
        HVector { entries: e, modulus: self.modulus }
    }

    pub fn row_major(&self) -> Vec<i64> {
        self.rows.iter().flat_map(|r| r.iter().copied()).collect()
    }

    pub fn row_arrays(&self) -> Vec<Vec<i64>> {
        self.rows.iter().map(|r| r.to_vec()).collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.modulus)
    }

    pub fn transpose(&self) -> Self {
        let mut rows = [[0; N]; N];
        for i in 0..N {
            for j in 0..N {
                rows[i][j] = self.rows[j][i];
            }
        }
        SymplecticMatrix { rows, modulus: self.modulus }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, SymplecticError> {
        if self.modulus != other.modulus {
            return Err(SymplecticError::ModulusMismatch(self.modulus, other.modulus));
        }
        let k = self.modulus;
        let mut rows = [[0i64; N]; N];
        for i in 0..N {
            for j in 0..N {
                let mut s: i128 = 0;
                for l in 0..N {
                    s += self.rows[i][l] as i128 * other.rows[l][j] as i128;
                }
                if k > 0 {
                    s = s.rem_euclid(k as i128);
                }
                rows[i][j] = i64::try_from(s).expect("matrix entry overflow");
            }
        }
        Ok(SymplecticMatrix { rows, modulus: k })
    }

    pub fn neg(&self) -> Self {
        let mut rows = self.rows;
        for r in rows.iter_mut() {
            for x in r.iter_mut() {
                *x = -*x;
            }
        }
        Self::from_rows_unchecked(rows, self.modulus)
    }

    /// `AᵀJA == J`.
    pub fn is_symplectic(&self) -> bool {
        let j = Self::form(self.modulus);
        self.transpose() * j * *self == j
    }

    /// Inverse of a symplectic matrix, `J⁻¹AᵀJ`.
    pub fn inverse(&self) -> Self {
        let j = Self::form(self.modulus);
        j.neg() * self.transpose() * j
    }

    pub fn pow(&self, n: i64) -> Self {
        let mut base = if n < 0 { self.inverse() } else { *self };
        let mut e = n.unsigned_abs();
        let mut acc = Self::identity(self.modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            e >>= 1;
            if e > 0 {
                base = base * base;
            }
        }
        acc
    }

    /// Reduction modulo `k`.
    pub fn reduce_mod(&self, k: u32) -> Self {
        assert!(k >= 2);
        assert!(self.modulus == 0 || self.modulus % k == 0);
        Self::from_rows_unchecked(self.rows, k)
    }

    pub fn apply(&self, v: &HVector<N>) -> HVector<N> {
        assert_eq!(self.modulus, v.modulus, "modulus mismatch");
        let mut e = [0i64; N];
        for (i, out) in e.iter_mut().enumerate() {
            let mut s: i128 = 0;
            for j in 0..N {
                s += self.rows[i][j] as i128 * v.entries[j] as i128;
            }
            if self.modulus > 0 {
                s = s.rem_euclid(self.modulus as i128);
            }
            *out = i64::try_from(s).expect("vector entry overflow");
        }
        HVector { entries: e, modulus: self.modulus }
    }

    /// Determinant by fraction-free elimination.
    pub fn determinant(&self) -> i64 {
        let mut a: Vec<Vec<i128>> = self.rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for c in 0..N {
            if a[c][c] == 0 {
                match (c + 1..N).find(|&r| a[r][c] != 0) {
                    Some(r) => {
                        a.swap(c, r);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for r in c + 1..N {
                for j in c + 1..N {
                    a[r][j] = (a[r][j] * a[c][c] - a[r][c] * a[c][j]) / prev;
                }
                a[r][c] = 0;
            }
            prev = a[c][c];
        }
        let d = sign * a[N - 1][N - 1];
        let d = if self.modulus > 0 { d.rem_euclid(self.modulus as i128) } else { d };
        i64::try_from(d).expect("determinant overflow")
    }

    /// Largest absolute entry.
    pub fn height(&self) -> i64 {
        self.rows.iter().flat_map(|r| r.iter()).map(|x| x.abs()).max().unwrap_or(0)
    }
}

impl<const N: usize> Mul for SymplecticMatrix<N> {
    type Output = SymplecticMatrix<N>;
    fn mul(self, rhs: Self) -> Self {
        self.try_mul(&rhs).expect("matrix product")
    }
}

impl<'a, const N: usize> Mul<&'a SymplecticMatrix<N>> for &'a SymplecticMatrix<N> {
    type Output = SymplecticMatrix<N>;
    fn mul(self, rhs: &SymplecticMatrix<N>) -> SymplecticMatrix<N> {
        self.try_mul(rhs).expect("matrix product")
    }
}

impl<const N: usize> fmt::Debug for SymplecticMatrix<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)?;
        if self.modulus > 0 {
            write!(f, " mod {}", self.modulus)?;
        }
        Ok(())
    }
}

impl<const N: usize> fmt::Display for SymplecticMatrix<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in r.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", x)?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// `x ↦ x - î(x,v)·v`, the image of a Dehn twist about a curve of class `v`.
///
/// The negative sign is the one that reproduces the named matrices
/// `M`, `M′` from the chain twists.
pub fn transvection<const N: usize>(v: &HVector<N>) -> Result<SymplecticMatrix<N>, SymplecticError> {
    if !v.is_primitive() {
        return Err(SymplecticError::NotPrimitive(v.to_string()));
    }
    Ok(transvection_power(v, 1))
}

/// `transvection(v)^n`, which equals `I - n·v(Jv)ᵀ` because `v(Jv)ᵀ` squares to zero.
/// No primitivity requirement.
pub fn transvection_power<const N: usize>(v: &HVector<N>, n: i64) -> SymplecticMatrix<N> {
    let k = v.modulus;
    let e = &v.entries;
    // (Jv)_j = î(e_j, v)
    let mut jv = [0i64; N];
    for j in 0..N {
        jv[j] = (0..N).map(|l| form_entry(N, j, l) * e[l]).sum();
    }
    let mut rows = [[0i64; N]; N];
    for i in 0..N {
        for j in 0..N {
            let t = (n as i128) * (e[i] as i128) * (jv[j] as i128);
            let t = if k > 0 { t.rem_euclid(k as i128) } else { t };
            let d = if i == j { 1 } else { 0 };
            rows[i][j] = i64::try_from(d as i128 - t).expect("transvection overflow");
        }
    }
    SymplecticMatrix::from_rows_unchecked(rows, k)
}

/// Block-diagonal embedding `[[a,b],[c,d]] ↦ diag([[a,b],[c,d]], I₂)`.
pub fn phi(m: &SymplecticMatrix<2>) -> SymplecticMatrix<4> {
    let r = m.rows();
    SymplecticMatrix::from_rows_unchecked(
        [[r[0][0], r[0][1], 0, 0], [r[1][0], r[1][1], 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
        m.modulus(),
    )
}


/// Serialized as the nested row arrays (row-major); the modulus is not recorded.
impl<const N: usize> serde::Serialize for SymplecticMatrix<N> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.row_arrays().serialize(s)
    }
}

/// Serialized as the entry array.
impl<const N: usize> serde::Serialize for HVector<N> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.entries.to_vec().serialize(s)
    }
}
