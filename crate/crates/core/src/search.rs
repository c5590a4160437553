//! Bounded meet-in-the-middle search for words over a list of matrices.

use std::collections::HashMap;

use crate::symplectic::SymplecticMatrix;

/// A word over generators: `(index, ±1)` letters.
pub type GenWord = Vec<(usize, i8)>;

/// Default maximal word length.
pub const DEFAULT_MAX_LEN: usize = 16;
/// Default cap on stored matrices per search direction.
pub const DEFAULT_NODE_BUDGET: usize = 400_000;

fn letter_key(l: &(usize, i8)) -> (usize, u8) {
    (l.0, if l.1 > 0 { 0 } else { 1 })
}

fn word_key(w: &GenWord) -> (usize, Vec<(usize, u8)>) {
    (w.len(), w.iter().map(letter_key).collect())
}

/// Reusable searcher: the forward ball around the identity is built once and
/// answers are cached per target.
pub struct Expresser<const N: usize = 4> {
    letters: Vec<((usize, i8), SymplecticMatrix<N>)>,
    inverse_letters: Vec<SymplecticMatrix<N>>,
    max_len: usize,
    node_budget: usize,
    forward: Option<(HashMap<SymplecticMatrix<N>, GenWord>, bool)>,
    cache: HashMap<SymplecticMatrix<N>, Option<GenWord>>,
}

impl<const N: usize> Expresser<N> {
    pub fn new(gens: &[SymplecticMatrix<N>], max_len: usize) -> Self {
        Self::with_budget(gens, max_len, DEFAULT_NODE_BUDGET)
    }

    pub fn with_budget(gens: &[SymplecticMatrix<N>], max_len: usize, node_budget: usize) -> Self {
        assert!(max_len >= 1);
        let mut letters = Vec::new();
        for (i, g) in gens.iter().enumerate() {
            letters.push(((i, 1), *g));
            letters.push(((i, -1), g.inverse()));
        }
        let inverse_letters = letters.iter().map(|(_, m)| m.inverse()).collect();
        Expresser { letters, inverse_letters, max_len, node_budget, forward: None, cache: HashMap::new() }
    }

    fn forward_depth(&self) -> usize {
        self.max_len.div_ceil(2)
    }

    fn build_forward(&mut self) {
        if self.forward.is_some() {
            return;
        }
        let id = SymplecticMatrix::<N>::identity(self.letters.first().map(|l| l.1.modulus()).unwrap_or(0));
        let mut table: HashMap<SymplecticMatrix<N>, GenWord> = HashMap::from([(id, vec![])]);
        let mut frontier = vec![(id, GenWord::new())];
        let mut complete = true;
        'levels: for _ in 0..self.forward_depth() {
            let mut next = Vec::new();
            for (m, w) in &frontier {
                for (l, g) in &self.letters {
                    let p = m * g;
                    if !table.contains_key(&p) {
                        if table.len() >= self.node_budget {
                            complete = false;
                            break 'levels;
                        }
                        let mut w2 = w.clone();
                        w2.push(*l);
                        table.insert(p, w2.clone());
                        next.push((p, w2));
                    }
                }
            }
            frontier = next;
        }
        self.forward = Some((table, complete));
    }

    /// A word of length at most `max_len` whose product is `target`, or
    /// `None` when none was found (inconclusive).
    pub fn express(&mut self, target: &SymplecticMatrix<N>) -> Option<GenWord> {
        if let Some(hit) = self.cache.get(target) {
            return hit.clone();
        }
        self.build_forward();
        let (table, _) = self.forward.as_ref().expect("forward ball");
        let back_depth = self.max_len - self.forward_depth();
        let mut best: Option<GenWord> = None;
        let consider = |best: &mut Option<GenWord>, cand: GenWord| {
            if best.as_ref().map_or(true, |b| word_key(&cand) < word_key(b)) {
                *best = Some(cand);
            }
        };
        // Y = target · v⁻¹; prepending l to v multiplies Y by l⁻¹ on the right.
        let mut seen: HashMap<SymplecticMatrix<N>, ()> = HashMap::from([(*target, ())]);
        let mut frontier: Vec<(SymplecticMatrix<N>, GenWord)> = vec![(*target, vec![])];
        for depth in 0..=back_depth {
            for (y, v) in &frontier {
                if let Some(u) = table.get(y) {
                    let mut cand = u.clone();
                    cand.extend_from_slice(v);
                    consider(&mut best, cand);
                }
            }
            if let Some(b) = &best {
                if b.len() <= depth + self.forward_depth() {
                    break;
                }
            }
            if depth == back_depth {
                break;
            }
            let mut next = Vec::new();
            for (y, v) in &frontier {
                for (idx, (l, _)) in self.letters.iter().enumerate() {
                    let z = y * &self.inverse_letters[idx];
                    if seen.len() >= self.node_budget {
                        break;
                    }
                    if seen.insert(z, ()).is_none() {
                        let mut v2 = Vec::with_capacity(v.len() + 1);
                        v2.push(*l);
                        v2.extend_from_slice(v);
                        next.push((z, v2));
                    }
                }
            }
            frontier = next;
        }
        self.cache.insert(*target, best.clone());
        best
    }

    pub fn evaluate(&self, word: &GenWord) -> SymplecticMatrix<N> {
        let modulus = self.letters.first().map(|l| l.1.modulus()).unwrap_or(0);
        word.iter().fold(SymplecticMatrix::identity(modulus), |acc, &(i, s)| {
            acc * self.letters[2 * i + if s > 0 { 0 } else { 1 }].1
        })
    }
}

/// One-shot search.
pub fn express_in<const N: usize>(target: &SymplecticMatrix<N>, gens: &[SymplecticMatrix<N>], max_len: usize) -> Option<GenWord> {
    Expresser::new(gens, max_len).express(target)
}
