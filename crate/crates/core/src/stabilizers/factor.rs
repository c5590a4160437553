//! Exact factorization of stabilizer matrices over claim generators.
//!
//! After conjugating by a frame `Q` with `Q e3 = ±[curve]`, an element fixing
//! `e3` splits as a Levi part (its action on `e3^⊥ / e3`, an element of
//! `Γ₀(level)`) times a Heisenberg element
//! `u(α, β, γ) = [[1,0,0,β],[0,1,0,-α],[α,β,1,γ],[0,0,0,1]]`.
//! The Levi part is rewritten through Schreier generators, the Heisenberg
//! part by solving for powers of three fixed letters.

use serde::Serialize;

use super::{stab_claim, StabClaim, StabError};
use crate::cover::{CoverKind, CoverSpec};
use crate::gamma0::{gamma0_data_any_level, Gamma0Data, Mat2};
use crate::search::Expresser;
use crate::symplectic::{HVector, SymplecticMatrix};
use crate::words::named::p_klein;
use crate::words::{psi, w, TwistWord};

/// A word over claim generators: `(generator index, exponent)`.
type ClaimWord = Vec<(usize, i64)>;

const LEVI_SEARCH_LEN: usize = 14;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FactorError {
    #[error(transparent)]
    Claim(#[from] StabError),
    #[error("no factorization engine for curve {0} on this cover")]
    Unsupported(char),
    #[error("matrix is not an integral symplectic matrix")]
    NotSymplectic,
    #[error("matrix does not stabilize ±{0}")]
    NotInStabilizer(String),
    #[error("matrix is not liftable for the cover")]
    NotLiftable,
    #[error("engine construction failed: {0}")]
    Engine(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FactorStatus {
    Complete,
    /// The Levi rewriting needed a Schreier generator the bounded search did
    /// not express.
    Incomplete,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WordLetter {
    pub generator: usize,
    pub label: String,
    pub exp: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorizationWitness {
    pub input: SymplecticMatrix,
    pub letters: Vec<WordLetter>,
    pub word: TwistWord,
    /// `Ψ(word)⁻¹ · input`.
    pub residual: SymplecticMatrix,
    pub status: FactorStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Heisenberg parameters of a matrix in frame coordinates.
fn heis_params(h: &SymplecticMatrix) -> Option<(i64, i64, i64)> {
    let (a, b, g) = (h.get(2, 0), h.get(2, 1), h.get(2, 3));
    let u = SymplecticMatrix::from_rows_unchecked([[1, 0, 0, b], [0, 1, 0, -a], [a, b, 1, g], [0, 0, 0, 1]], 0);
    (u == *h).then_some((a, b, g))
}

fn levi_block(m: &SymplecticMatrix) -> Mat2 {
    SymplecticMatrix::from_rows_unchecked([[m.get(0, 0), m.get(0, 1)], [m.get(1, 0), m.get(1, 1)]], 0)
}

/// Precomputed data for one `(curve, cover)` pair.
pub struct FactorEngine {
    pub claim: StabClaim,
    cover: CoverSpec,
    gens: Vec<SymplecticMatrix>,
    frame: SymplecticMatrix,
    frame_inv: SymplecticMatrix,
    gamma0: Gamma0Data,
    /// Each Schreier generator of `Γ₀(level)` as a claim word, if found.
    schreier: Vec<Option<ClaimWord>>,
    heis: [ClaimWord; 3],
    heis_mats: [SymplecticMatrix; 3],
    iota: usize,
}

struct CaseData {
    frame: SymplecticMatrix,
    level: u32,
    levi: Vec<ClaimWord>,
    heis: [ClaimWord; 3],
}

fn frame_b() -> SymplecticMatrix {
    // columns: e1 -> e3, e2 -> e4, e3 -> e2, e4 -> -e1
    SymplecticMatrix::from_columns(&[
        HVector::basis(3, 0),
        HVector::basis(4, 0),
        HVector::basis(2, 0),
        HVector::basis(1, 0).neg(),
    ])
}

fn handle_swap() -> SymplecticMatrix {
    SymplecticMatrix::from_rows_unchecked([[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]], 0)
}

impl FactorEngine {
    pub fn new(curve: char, cover: &CoverSpec) -> Result<Self, FactorError> {
        let claim = stab_claim(curve, cover)?;
        let idx = |label: &str| -> Result<usize, FactorError> {
            claim.index_of(label).ok_or_else(|| FactorError::Engine(format!("claim has no generator {label}")))
        };
        let one = |label: &str| -> Result<ClaimWord, FactorError> { Ok(vec![(idx(label)?, 1)]) };
        let case = match (&cover.kind, curve) {
            (CoverKind::Cyclic { k }, 'e') | (CoverKind::Cyclic { k }, 'c') => {
                let conj = curve == 'c';
                let lab = |s: &str| if conj { format!("F ({s}) F^-1") } else { s.to_string() };
                let s_len = super::gamma0_words(*k).len();
                let frame = if conj { psi(&w("d c e d")) } else { SymplecticMatrix::identity(0) };
                CaseData {
                    frame,
                    level: *k,
                    levi: (0..s_len).map(|i| vec![(i, 1)]).collect(),
                    heis: [
                        one(&lab(&format!("M^{k}")))?,
                        vec![(idx(&lab("e"))?, 1), (idx(&lab("a"))?, 1), (idx(&lab("c"))?, -1)],
                        one(&lab("e"))?,
                    ],
                }
            }
            (CoverKind::Cyclic { k }, 'b') => CaseData {
                frame: frame_b(),
                level: 1,
                levi: vec![one("d")?, one("e")?],
                heis: [one(&format!("M^{k}"))?, one(&format!("N^{k}"))?, one(&format!("b^{k}"))?],
            },
            (CoverKind::Klein, 'a') => CaseData {
                frame: handle_swap(),
                level: 1,
                levi: vec![one("d")?, one("e")?],
                heis: [one("M'^2")?, one("N'^2")?, one("a")?],
            },
            (CoverKind::Klein, 'e') => CaseData {
                frame: SymplecticMatrix::identity(0),
                level: 1,
                levi: vec![one("a")?, one("b")?],
                heis: [one("M^2")?, one("M'^2")?, one("e")?],
            },
            (CoverKind::Klein, 'c') => CaseData {
                frame: p_klein() * frame_b(),
                level: 2,
                levi: vec![one("e")?, one("d c b^2 c^-1 d^-1")?, one("M^2 (d e)^3")?],
                heis: [vec![(idx("I")?, 1), (idx("M^2 N'^2")?, 1)], vec![(idx("a")?, 1), (idx("e")?, -1)], one("c^2")?],
            },
            _ => return Err(FactorError::Unsupported(curve)),
        };
        let iota = idx("I")?;
        Self::build(claim, cover.clone(), case, iota)
    }

    fn build(claim: StabClaim, cover: CoverSpec, case: CaseData, iota: usize) -> Result<Self, FactorError> {
        let gens = claim.matrices();
        let frame = case.frame;
        if !frame.is_symplectic() {
            return Err(FactorError::Engine("frame is not symplectic".into()));
        }
        let frame_inv = frame.inverse();
        let e3 = HVector::basis(3, 0);
        let v = frame.apply(&e3);
        if v != claim.class && v != claim.class.neg() {
            return Err(FactorError::Engine(format!("frame sends e3 to {v}, not ±{}", claim.class)));
        }
        let eval = |word: &ClaimWord| -> SymplecticMatrix {
            word.iter().fold(SymplecticMatrix::identity(0), |acc, &(g, e)| acc * gens[g].pow(e))
        };
        let in_frame = |m: &SymplecticMatrix| frame_inv * *m * frame;
        let mut levi_blocks = Vec::new();
        for l in &case.levi {
            let m = in_frame(&eval(l));
            if m.apply(&e3) != e3 {
                return Err(FactorError::Engine(format!("Levi letter {l:?} does not fix the frame vector")));
            }
            levi_blocks.push(levi_block(&m));
        }
        let mut heis_mats = [SymplecticMatrix::identity(0); 3];
        for (i, h) in case.heis.iter().enumerate() {
            let m = eval(h);
            if heis_params(&in_frame(&m)).is_none() {
                return Err(FactorError::Engine(format!("Heisenberg letter {i} is not unipotent in the frame: {}", in_frame(&m))));
            }
            heis_mats[i] = m;
        }
        let gamma0 = gamma0_data_any_level(case.level);
        let mut expresser = Expresser::<2>::new(&levi_blocks, LEVI_SEARCH_LEN);
        let schreier = gamma0
            .generators
            .iter()
            .map(|g| {
                expresser.express(g).map(|gw| {
                    gw.iter()
                        .flat_map(|&(l, s)| {
                            let word = &case.levi[l];
                            let seq: Vec<(usize, i64)> =
                                if s > 0 { word.clone() } else { word.iter().rev().map(|&(g, e)| (g, -e)).collect() };
                            seq
                        })
                        .collect()
                })
            })
            .collect();
        Ok(FactorEngine { claim, cover, gens, frame, frame_inv, gamma0, schreier, heis: case.heis, heis_mats, iota })
    }

    /// Number of Schreier generators the Levi search could not express.
    pub fn missing_levi_generators(&self) -> usize {
        self.schreier.iter().filter(|s| s.is_none()).count()
    }

    /// A product of `len` random claim generators or their inverses.
    pub fn sample<R: rand::Rng>(&self, rng: &mut R, len: usize) -> SymplecticMatrix {
        let gens = self.generator_matrices();
        (0..len).fold(SymplecticMatrix::identity(0), |acc, _| {
            let g = gens[rng.gen_range(0..gens.len())];
            acc * if rng.gen_bool(0.5) { g } else { g.inverse() }
        })
    }

    pub fn sample_seeded(&self, seed: u64, len: usize) -> SymplecticMatrix {
        use rand::SeedableRng;
        self.sample(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed), len)
    }

    pub fn generator_matrices(&self) -> &[SymplecticMatrix] {
        &self.gens
    }

    pub fn factor(&self, input: &SymplecticMatrix) -> Result<FactorizationWitness, FactorError> {
        if input.modulus() != 0 || !input.is_symplectic() {
            return Err(FactorError::NotSymplectic);
        }
        let class = &self.claim.class;
        let img = input.apply(class);
        let mut word: ClaimWord = Vec::new();
        let mut a = *input;
        if img == class.neg() {
            word.push((self.iota, 1));
            a = a.neg();
        } else if img != *class {
            return Err(FactorError::NotInStabilizer(class.to_string()));
        }
        if !self.cover.is_liftable(input).unwrap_or(false) {
            return Err(FactorError::NotLiftable);
        }
        let mut note = None;
        let framed = self.frame_inv * a * self.frame;
        let block = levi_block(&framed);
        let mut levi_word: ClaimWord = Vec::new();
        match self.gamma0.rewrite(&block) {
            None => note = Some(format!("Levi block {block} is outside Γ₀({})", self.gamma0.k)),
            Some(rw) => {
                for (g, s) in rw {
                    match &self.schreier[g] {
                        Some(cw) if s > 0 => levi_word.extend(cw.iter().copied()),
                        Some(cw) => levi_word.extend(cw.iter().rev().map(|&(g, e)| (g, -e))),
                        None => {
                            note = Some(format!("Schreier generator {} not expressed by bounded search", self.gamma0.generators[g]));
                            break;
                        }
                    }
                }
            }
        }
        if note.is_none() {
            let levi = self.eval(&levi_word);
            let rest = levi.inverse() * a;
            word.extend(levi_word);
            match self.solve_heisenberg(&rest) {
                Ok(hw) => word.extend(hw),
                Err(msg) => note = Some(msg),
            }
        }
        let word = merge(word);
        let product = self.eval(&word);
        let residual = product.inverse() * *input;
        let status = if note.is_none() && residual.is_identity() { FactorStatus::Complete } else { FactorStatus::Incomplete };
        let letters = word
            .iter()
            .map(|&(g, e)| WordLetter { generator: g, label: self.claim.generators[g].label.clone(), exp: e })
            .collect();
        let twist = word.iter().fold(TwistWord::identity(), |acc, &(g, e)| acc.mul(&self.claim.generators[g].word.pow(e)));
        Ok(FactorizationWitness { input: *input, letters, word: twist, residual, status, note })
    }

    fn eval(&self, word: &ClaimWord) -> SymplecticMatrix {
        word.iter().fold(SymplecticMatrix::identity(0), |acc, &(g, e)| acc * self.gens[g].pow(e))
    }

    fn solve_heisenberg(&self, h: &SymplecticMatrix) -> Result<ClaimWord, String> {
        let f = |m: &SymplecticMatrix| self.frame_inv * *m * self.frame;
        let (al, be, _) = heis_params(&f(h)).ok_or_else(|| format!("remainder {} is not unipotent", f(h)))?;
        let p: Vec<(i64, i64, i64)> = self.heis_mats.iter().map(|m| heis_params(&f(m)).expect("checked at build")).collect();
        let det = p[0].0 * p[1].1 - p[1].0 * p[0].1;
        if det == 0 {
            return Err("Heisenberg letters X, Y are dependent".into());
        }
        let xn = al * p[1].1 - p[1].0 * be;
        let yn = p[0].0 * be - al * p[0].1;
        if xn % det != 0 || yn % det != 0 {
            return Err(format!("Heisenberg part ({al}, {be}) is outside the lattice of X, Y"));
        }
        let (x, y) = (xn / det, yn / det);
        let xy = self.heis_mats[0].pow(x) * self.heis_mats[1].pow(y);
        let central = f(&(xy.inverse() * *h));
        let (ca, cb, cg) = heis_params(&central).expect("product of unipotents");
        debug_assert_eq!((ca, cb), (0, 0));
        if p[2].0 != 0 || p[2].1 != 0 || p[2].2 == 0 || cg % p[2].2 != 0 {
            return Err(format!("central part {cg} is not a multiple of the Z letter"));
        }
        let z = cg / p[2].2;
        let mut out = Vec::new();
        for (n, letters) in [(x, &self.heis[0]), (y, &self.heis[1]), (z, &self.heis[2])] {
            if letters.len() == 1 {
                out.push((letters[0].0, letters[0].1 * n));
            } else {
                for _ in 0..n.unsigned_abs() {
                    if n > 0 {
                        out.extend(letters.iter().copied());
                    } else {
                        out.extend(letters.iter().rev().map(|&(g, e)| (g, -e)));
                    }
                }
            }
        }
        Ok(out)
    }
}

fn merge(word: ClaimWord) -> ClaimWord {
    let mut out: ClaimWord = Vec::new();
    for (g, e) in word {
        if e == 0 {
            continue;
        }
        match out.last_mut() {
            Some(last) if last.0 == g => {
                last.1 += e;
                if last.1 == 0 {
                    out.pop();
                }
            }
            _ => out.push((g, e)),
        }
    }
    out
}

/// One-shot factorization; builds the engine each call.
pub fn factor_stabilizer(a: &SymplecticMatrix, curve: char, cover: &CoverSpec) -> Result<FactorizationWitness, FactorError> {
    FactorEngine::new(curve, cover)?.factor(a)
}
