//! Seeded generators for matrices, automata, words, trees and expressions.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::Semiring;
use crate::alphabet::{Alphabet, Word};
use crate::kleisli::KMatrix;
use crate::regex::RegExpr;
use crate::tree::{Tree, TreeAutomaton};
use crate::word::WordAutomaton;

/// `a, b, c, …` (at most 26 symbols).
pub fn letters(k: usize) -> Alphabet {
    Alphabet::new((0..k.min(26)).map(|i| char::from(b'a' + i as u8).to_string())).expect("distinct")
}

/// A nonzero carrier value: uniform over the nonzero elements of a finite
/// carrier, otherwise drawn from the sampler (falling back to one).
pub fn nonzero_value<S: Semiring, R: Rng>(spec: &S, rng: &mut R) -> S::Elem {
    if let Some(elems) = spec.elements() {
        let nz: Vec<S::Elem> = elems.into_iter().filter(|x| !spec.is_zero(x)).collect();
        return nz.choose(rng).cloned().unwrap_or_else(|| spec.one());
    }
    for _ in 0..64 {
        match spec.sample(rng) {
            Some(x) if !spec.is_zero(&x) => return x,
            Some(_) => continue,
            None => break,
        }
    }
    spec.one()
}

/// Each entry is nonzero with probability `density`, valued by `weight`.
pub fn random_matrix_with<S: Semiring, R: Rng>(
    spec: &S,
    rows: usize,
    cols: usize,
    density: f64,
    rng: &mut R,
    mut weight: impl FnMut(&mut R) -> S::Elem,
) -> KMatrix<S> {
    KMatrix::from_fn(spec.clone(), rows, cols, |_, _| {
        if rng.gen_bool(density) {
            weight(rng)
        } else {
            spec.zero()
        }
    })
}

pub fn random_matrix<S: Semiring, R: Rng>(
    spec: &S,
    rows: usize,
    cols: usize,
    density: f64,
    rng: &mut R,
) -> KMatrix<S> {
    random_matrix_with(spec, rows, cols, density, rng, |r| nonzero_value(spec, r))
}

/// A function `0..p → 0..q` (`q > 0` unless `p == 0`).
pub fn random_base_map<R: Rng>(p: usize, q: usize, rng: &mut R) -> Vec<usize> {
    (0..p).map(|_| rng.gen_range(0..q)).collect()
}

/// Shape of the internal moves of a random word automaton.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EpsShape {
    None,
    /// Each entry present with the given probability, weighted like letters.
    Dense(f64),
    /// At most one internal move per state, present with the given
    /// probability; weights come from the `eps_weight` closure.
    Functional(f64),
}

/// Parameters for [`random_word_automaton_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WordShape {
    pub states: usize,
    pub symbols: usize,
    pub exits: usize,
    pub density: f64,
    pub final_density: f64,
    pub eps: EpsShape,
}

impl WordShape {
    pub fn new(states: usize, symbols: usize, density: f64) -> Self {
        Self {
            states,
            symbols,
            exits: 1,
            density,
            final_density: 0.5,
            eps: EpsShape::None,
        }
    }

    pub fn with_eps(mut self, eps: EpsShape) -> Self {
        self.eps = eps;
        self
    }
}

pub fn random_word_automaton_with<S: Semiring, R: Rng>(
    spec: &S,
    shape: WordShape,
    rng: &mut R,
    mut weight: impl FnMut(&mut R) -> S::Elem,
    mut eps_weight: impl FnMut(&mut R) -> S::Elem,
) -> WordAutomaton<S> {
    let n = shape.states;
    let alphabet = letters(shape.symbols);
    let letter_mats = (0..alphabet.len())
        .map(|_| random_matrix_with(spec, n, n, shape.density, rng, &mut weight))
        .collect();
    let eps = match shape.eps {
        EpsShape::None => None,
        EpsShape::Dense(d) => Some(random_matrix_with(spec, n, n, d, rng, &mut eps_weight)),
        EpsShape::Functional(d) => {
            let mut m = KMatrix::zeros(spec.clone(), n, n);
            for q in 0..n {
                if rng.gen_bool(d) {
                    let target = rng.gen_range(0..n);
                    m.set(q, target, eps_weight(rng));
                }
            }
            Some(m)
        }
    };
    let finals = random_matrix_with(spec, n, shape.exits, shape.final_density, rng, &mut weight);
    WordAutomaton::new(spec.clone(), alphabet, letter_mats, eps, finals).expect("shapes agree")
}

pub fn random_word_automaton<S: Semiring, R: Rng>(
    spec: &S,
    shape: WordShape,
    rng: &mut R,
) -> WordAutomaton<S> {
    random_word_automaton_with(
        spec,
        shape,
        rng,
        |r| nonzero_value(spec, r),
        |r| nonzero_value(spec, r),
    )
}

/// `delta` entries present with probability `density`; one exit.
pub fn random_tree_automaton_with<S: Semiring, R: Rng>(
    spec: &S,
    states: usize,
    symbols: usize,
    density: f64,
    rng: &mut R,
    mut weight: impl FnMut(&mut R) -> S::Elem,
) -> TreeAutomaton<S> {
    let alphabet = letters(symbols);
    let delta = (0..symbols)
        .map(|_| random_matrix_with(spec, states, states * states, density, rng, &mut weight))
        .collect();
    let finals = random_matrix_with(spec, states, 1, 0.5, rng, &mut weight);
    TreeAutomaton::new(spec.clone(), alphabet, delta, finals).expect("shapes agree")
}

pub fn random_tree_automaton<S: Semiring, R: Rng>(
    spec: &S,
    states: usize,
    symbols: usize,
    density: f64,
    rng: &mut R,
) -> TreeAutomaton<S> {
    random_tree_automaton_with(spec, states, symbols, density, rng, |r| {
        nonzero_value(spec, r)
    })
}

pub fn random_word<R: Rng>(alphabet: &Alphabet, max_len: usize, rng: &mut R) -> Word {
    let len = rng.gen_range(0..=max_len);
    (0..len)
        .map(|_| {
            alphabet
                .symbols()
                .choose(rng)
                .cloned()
                .expect("nonempty alphabet")
        })
        .collect()
}

/// A random tree of height at most `max_height` over variables `0..vars`.
pub fn random_tree<R: Rng>(
    alphabet: &Alphabet,
    vars: usize,
    max_height: usize,
    rng: &mut R,
) -> Tree {
    if max_height == 0 || rng.gen_bool(0.3) {
        return Tree::Leaf(rng.gen_range(0..vars));
    }
    let sym = alphabet
        .symbols()
        .choose(rng)
        .cloned()
        .expect("nonempty alphabet");
    Tree::node(
        random_tree(alphabet, vars, max_height - 1, rng),
        sym,
        random_tree(alphabet, vars, max_height - 1, rng),
    )
}

/// A random expression of depth at most `depth`; atoms get weight one.
pub fn random_regex<S: Semiring, R: Rng>(
    spec: &S,
    alphabet: &Alphabet,
    depth: usize,
    rng: &mut R,
) -> RegExpr<S::Elem> {
    random_regex_with(alphabet, depth, rng, &mut |_| spec.one())
}

pub fn random_regex_with<E, R: Rng>(
    alphabet: &Alphabet,
    depth: usize,
    rng: &mut R,
    weight: &mut impl FnMut(&mut R) -> E,
) -> RegExpr<E> {
    let leaf = depth == 0 || rng.gen_bool(0.25);
    if leaf {
        return match rng.gen_range(0..8) {
            0 => RegExpr::Unit,
            1 => RegExpr::Zero,
            _ => {
                let s = alphabet
                    .symbols()
                    .choose(rng)
                    .cloned()
                    .expect("nonempty alphabet");
                RegExpr::Atom(s, weight(rng))
            }
        };
    }
    match rng.gen_range(0..3) {
        0 => RegExpr::union(
            random_regex_with(alphabet, depth - 1, rng, weight),
            random_regex_with(alphabet, depth - 1, rng, weight),
        ),
        1 => RegExpr::comp(
            random_regex_with(alphabet, depth - 1, rng, weight),
            random_regex_with(alphabet, depth - 1, rng, weight),
        ),
        _ => RegExpr::star(random_regex_with(alphabet, depth - 1, rng, weight)),
    }
}
