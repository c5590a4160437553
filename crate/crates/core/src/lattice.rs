//! Integer lattices in `Z^4` in row Hermite normal form.

use serde::{Deserialize, Serialize};

/// Row Hermite normal form of the row span of `rows`.
///
/// Returns the nonzero rows; pivots are positive with strictly increasing
/// columns, and entries above a pivot lie in `[0, pivot)`.
pub fn row_hnf(rows: &[Vec<i64>]) -> Vec<Vec<i64>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let ncols = rows[0].len();
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        loop {
            let pivot = (r..m.len()).filter(|&i| m[i][c] != 0).min_by_key(|&i| m[i][c].abs());
            let Some(p) = pivot else { break };
            m.swap(r, p);
            let mut done = true;
            for i in r + 1..m.len() {
                if m[i][c] != 0 {
                    let q = m[i][c].div_euclid(m[r][c]);
                    for j in 0..ncols {
                        m[i][j] -= q * m[r][j];
                    }
                    if m[i][c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if m[r][c] == 0 {
            continue;
        }
        if m[r][c] < 0 {
            for x in m[r].iter_mut() {
                *x = -*x;
            }
        }
        let p = m[r][c];
        for i in 0..r {
            let q = m[i][c].div_euclid(p);
            if q != 0 {
                for j in 0..ncols {
                    m[i][j] -= q * m[r][j];
                }
            }
        }
        r += 1;
    }
    m.truncate(r);
    m.into_iter()
        .map(|row| row.into_iter().map(|x| i64::try_from(x).expect("lattice entry overflow")).collect())
        .collect()
}

/// A sublattice of `Z^4`, stored by its canonical HNF basis (as rows).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lattice {
    basis: Vec<[i64; 4]>,
}

impl Lattice {
    pub fn from_generators(gens: &[[i64; 4]]) -> Self {
        let rows: Vec<Vec<i64>> = gens.iter().map(|g| g.to_vec()).collect();
        let basis = row_hnf(&rows).into_iter().map(|r| [r[0], r[1], r[2], r[3]]).collect();
        Lattice { basis }
    }

    pub fn basis(&self) -> &[[i64; 4]] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, x: &[i64; 4]) -> bool {
        let mut x = *x;
        for row in &self.basis {
            let c = row.iter().position(|&v| v != 0).expect("zero row in HNF");
            if x[c] % row[c] != 0 {
                return false;
            }
            let q = x[c] / row[c];
            for j in 0..4 {
                x[j] -= q * row[j];
            }
        }
        x.iter().all(|&v| v == 0)
    }

    /// `[Z^4 : L]` for a full-rank lattice.
    pub fn index(&self) -> Option<u64> {
        if self.rank() != 4 {
            return None;
        }
        Some(self.basis.iter().enumerate().map(|(i, r)| r[i] as u64).product())
    }

    /// Diagonal entries when the HNF basis is diagonal.
    pub fn diagonal(&self) -> Option<[i64; 4]> {
        if self.rank() != 4 {
            return None;
        }
        let mut d = [0; 4];
        for (i, r) in self.basis.iter().enumerate() {
            for (j, &v) in r.iter().enumerate() {
                if i != j && v != 0 {
                    return None;
                }
            }
            d[i] = r[i];
        }
        Some(d)
    }

    /// `L + m·Z^4`.
    pub fn plus_multiple_of_z4(&self, m: i64) -> Self {
        let mut gens: Vec<[i64; 4]> = self.basis.clone();
        for i in 0..4 {
            let mut e = [0; 4];
            e[i] = m;
            gens.push(e);
        }
        Lattice::from_generators(&gens)
    }
}
