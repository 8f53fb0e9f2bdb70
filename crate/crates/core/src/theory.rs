//! Recognition through finite theories of state-set functions.
//!
//! For a Boolean automaton every term (a word, or a tree in one variable)
//! acts on sets of states: `h(t)(X)` is the set of states from which `t`
//! can be read into `X`. The functions arising this way form a finite
//! closure, and a term is accepted from `i` exactly when `i ∈ h(t)(F)`.

use std::collections::HashMap;

use crate::algebra::Boolean;
use crate::error::{Error, Result};
use crate::kleisli::KMatrix;
use crate::tree::{Tree, TreeAutomaton};
use crate::word::WordAutomaton;

/// Largest state count with tabulated state-set functions (tables have
/// `2^n` rows).
pub const MAX_STATES: usize = 16;

pub const DEFAULT_THEORY_CAP: usize = 100_000;

/// A set of states as a bit mask, bit `q` for state `q`.
pub type StateSet = u32;

pub fn set_contains(set: StateSet, q: usize) -> bool {
    set >> q & 1 == 1
}

/// Renders a set as `{l0,l2}` using the given state labels.
pub fn format_set(set: StateSet, labels: &[String]) -> String {
    let members: Vec<&str> = labels
        .iter()
        .enumerate()
        .filter(|(q, _)| set_contains(set, *q))
        .map(|(_, l)| l.as_str())
        .collect();
    format!("{{{}}}", members.join(","))
}

/// `q0, q1, …`
pub fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|q| format!("q{q}")).collect()
}

/// A total function on the subsets of `n` states, tabulated in the order
/// of the subsets' bit masks.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StateSetFunction {
    n: usize,
    table: Vec<StateSet>,
}

fn check_states(n: usize) -> Result<()> {
    if n > MAX_STATES {
        Err(Error::TooManyStates(n))
    } else {
        Ok(())
    }
}

impl StateSetFunction {
    pub fn from_table(n: usize, table: Vec<StateSet>) -> Result<Self> {
        check_states(n)?;
        if table.len() != 1 << n {
            return Err(Error::DimensionMismatch {
                expected: format!("{} table rows", 1usize << n),
                found: table.len().to_string(),
            });
        }
        let full = (1u64 << n) - 1;
        if let Some(&bad) = table.iter().find(|&&s| u64::from(s) > full) {
            return Err(Error::IndexOutOfRange {
                index: 31 - bad.leading_zeros() as usize,
                bound: n,
            });
        }
        Ok(Self { n, table })
    }

    fn tabulate(n: usize, f: impl Fn(StateSet) -> StateSet) -> Self {
        Self {
            n,
            table: (0..1u32 << n).map(f).collect(),
        }
    }

    pub fn identity(n: usize) -> Result<Self> {
        check_states(n)?;
        Ok(Self::tabulate(n, |x| x))
    }

    pub fn constant(n: usize, value: StateSet) -> Result<Self> {
        Self::from_table(n, vec![value; 1 << n])
    }

    /// `X ↦ { q | ∃q' ∈ X. m[q][q'] }` for a square Boolean matrix.
    pub fn predecessors(m: &KMatrix<Boolean>) -> Result<Self> {
        let n = m.rows();
        check_states(n)?;
        let rows: Vec<StateSet> = (0..n)
            .map(|q| {
                m.row(q)
                    .iter()
                    .enumerate()
                    .filter(|(_, &b)| b)
                    .fold(0, |acc, (j, _)| acc | 1 << j)
            })
            .collect();
        Ok(Self::tabulate(n, |x| {
            rows.iter()
                .enumerate()
                .filter(|(_, &succ)| succ & x != 0)
                .fold(0, |acc, (q, _)| acc | 1 << q)
        }))
    }

    pub fn states(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &[StateSet] {
        &self.table
    }

    pub fn apply(&self, x: StateSet) -> StateSet {
        self.table[x as usize]
    }

    /// `self ∘ g`, i.e. `X ↦ self(g(X))`.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        self.same_n(g)?;
        Ok(Self::tabulate(self.n, |x| self.apply(g.apply(x))))
    }

    fn same_n(&self, g: &Self) -> Result<()> {
        if self.n == g.n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: format!("{} states", self.n),
                found: format!("{} states", g.n),
            })
        }
    }

    /// `X ⊆ Y ⇒ f(X) ⊆ f(Y)`, checked on every covering pair.
    pub fn is_monotone(&self) -> bool {
        (0..1u32 << self.n).all(|x| {
            (0..self.n).all(|q| {
                let y = x | 1 << q;
                self.apply(x) & !self.apply(y) == 0
            })
        })
    }
}

/// A closure of state-set functions, in discovery order; element 0 is the
/// identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteTheory {
    n: usize,
    elements: Vec<StateSetFunction>,
    names: Vec<String>,
    index: HashMap<Vec<StateSet>, usize>,
}

impl FiniteTheory {
    fn new(n: usize) -> Result<Self> {
        let mut t = Self {
            n,
            elements: Vec::new(),
            names: Vec::new(),
            index: HashMap::new(),
        };
        t.insert(
            StateSetFunction::identity(n)?,
            Some("id".into()),
            usize::MAX,
        )?;
        Ok(t)
    }

    /// Adds `f` unless present; returns whether it was new.
    fn insert(&mut self, f: StateSetFunction, name: Option<String>, cap: usize) -> Result<bool> {
        if self.index.contains_key(&f.table) {
            return Ok(false);
        }
        if self.elements.len() >= cap {
            return Err(Error::CapExceeded { cap });
        }
        let k = self.elements.len();
        self.names.push(name.unwrap_or_else(|| format!("e{k}")));
        self.index.insert(f.table.clone(), k);
        self.elements.push(f);
        Ok(true)
    }

    pub fn states(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> &[StateSetFunction] {
        &self.elements
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, f: &StateSetFunction) -> Option<usize> {
        self.index.get(&f.table).copied()
    }

    pub fn contains(&self, f: &StateSetFunction) -> bool {
        self.index_of(f).is_some()
    }

    pub fn name_of(&self, f: &StateSetFunction) -> Option<&str> {
        self.index_of(f).map(|k| self.names[k].as_str())
    }

    pub fn get(&self, name: &str) -> Option<&StateSetFunction> {
        self.names
            .iter()
            .position(|x| x == name)
            .map(|k| &self.elements[k])
    }

    /// Header row of element names, then one row per input subset.
    pub fn to_tsv(&self, labels: &[String]) -> String {
        let mut out = String::from("input");
        for name in &self.names {
            out.push('\t');
            out.push_str(name);
        }
        out.push('\n');
        for x in 0..1u32 << self.n {
            out.push_str(&format_set(x, labels));
            for f in &self.elements {
                out.push('\t');
                out.push_str(&format_set(f.apply(x), labels));
            }
            out.push('\n');
        }
        out
    }
}

/// Boolean automata whose terms act on state sets.
pub trait Recognizer {
    type Term: ?Sized;

    fn state_count(&self) -> usize;

    /// States from which the empty term is accepted.
    fn accepting_set(&self) -> Result<StateSet>;

    /// `h(term)`.
    fn theory_morphism(&self, term: &Self::Term) -> Result<StateSetFunction>;

    /// Least set containing the identity and closed under term formation.
    fn generate_theory(&self, cap: usize) -> Result<FiniteTheory>;
}

fn single_exit(finals: &KMatrix<Boolean>) -> Result<StateSet> {
    if finals.cols() != 1 {
        return Err(Error::DimensionMismatch {
            expected: "1 exit".into(),
            found: format!("{} exits", finals.cols()),
        });
    }
    Ok(finals
        .column(0)
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .fold(0, |acc, (q, _)| acc | 1 << q))
}

impl WordAutomaton<Boolean> {
    /// `pre` of `E*·M(a)·E*`.
    pub fn letter_action(&self, symbol: &str) -> Result<StateSetFunction> {
        check_states(self.states())?;
        let star = self.eps_star()?;
        let m = star.compose(self.letter(symbol)?)?.compose(&star)?;
        StateSetFunction::predecessors(&m)
    }
}

impl Recognizer for WordAutomaton<Boolean> {
    type Term = [String];

    fn state_count(&self) -> usize {
        self.states()
    }

    /// States reaching a final state through internal moves alone.
    fn accepting_set(&self) -> Result<StateSet> {
        check_states(self.states())?;
        let f = single_exit(self.finals())?;
        Ok(StateSetFunction::predecessors(&self.eps_star()?)?.apply(f))
    }

    fn theory_morphism(&self, word: &[String]) -> Result<StateSetFunction> {
        let mut acc = StateSetFunction::identity(self.states())?;
        for sym in word.iter().rev() {
            acc = self.letter_action(sym)?.compose(&acc)?;
        }
        Ok(acc)
    }

    fn generate_theory(&self, cap: usize) -> Result<FiniteTheory> {
        let mut theory = FiniteTheory::new(self.states())?;
        let gens: Vec<StateSetFunction> = self
            .alphabet()
            .symbols()
            .iter()
            .map(|s| self.letter_action(s))
            .collect::<Result<_>>()?;
        for (s, g) in self.alphabet().symbols().iter().zip(&gens) {
            theory.insert(g.clone(), Some(format!("{s}_A")), cap)?;
        }
        let mut k = 0;
        while k < theory.len() {
            let f = theory.elements[k].clone();
            for g in &gens {
                theory.insert(g.compose(&f)?, None, cap)?;
            }
            k += 1;
        }
        Ok(theory)
    }
}

impl TreeAutomaton<Boolean> {
    /// `X ↦ { q | ∃(q1,q2) ∈ δ(q,σ). q1 ∈ g1(X), q2 ∈ g2(X) }`.
    pub fn tree_combine(
        &self,
        symbol: &str,
        g1: &StateSetFunction,
        g2: &StateSetFunction,
    ) -> Result<StateSetFunction> {
        let n = self.states();
        check_states(n)?;
        g1.same_n(g2)?;
        if g1.n != n {
            return Err(Error::DimensionMismatch {
                expected: format!("{n} states"),
                found: format!("{} states", g1.n),
            });
        }
        let d = self.delta(symbol)?;
        let pairs: Vec<Vec<(usize, usize)>> = (0..n)
            .map(|q| {
                (0..n * n)
                    .filter(|&c| *d.get(q, c))
                    .map(|c| (c / n, c % n))
                    .collect()
            })
            .collect();
        Ok(StateSetFunction::tabulate(n, |x| {
            let (y1, y2) = (g1.apply(x), g2.apply(x));
            pairs
                .iter()
                .enumerate()
                .filter(|(_, ps)| {
                    ps.iter()
                        .any(|&(a, b)| set_contains(y1, a) && set_contains(y2, b))
                })
                .fold(0, |acc, (q, _)| acc | 1 << q)
        }))
    }
}

impl Recognizer for TreeAutomaton<Boolean> {
    type Term = Tree;

    fn state_count(&self) -> usize {
        self.states()
    }

    fn accepting_set(&self) -> Result<StateSet> {
        check_states(self.states())?;
        single_exit(self.finals())
    }

    /// Leaves must all be `x0`.
    fn theory_morphism(&self, t: &Tree) -> Result<StateSetFunction> {
        match t {
            Tree::Leaf(0) => StateSetFunction::identity(self.states()),
            Tree::Leaf(j) => Err(Error::VariableOutOfRange { var: *j, arity: 1 }),
            Tree::Node(l, s, r) => {
                let g1 = self.theory_morphism(l)?;
                let g2 = self.theory_morphism(r)?;
                self.tree_combine(s, &g1, &g2)
            }
        }
    }

    /// Closes under the binary combine over all ordered pairs.
    fn generate_theory(&self, cap: usize) -> Result<FiniteTheory> {
        let mut theory = FiniteTheory::new(self.states())?;
        let id = StateSetFunction::identity(self.states())?;
        let symbols = self.alphabet().symbols().to_vec();
        for s in &symbols {
            let g = self.tree_combine(s, &id, &id)?;
            theory.insert(g, Some(format!("{s}_A")), cap)?;
        }
        // every pair (j, k) is visited once, when its larger index is current
        let mut k = 0;
        while k < theory.len() {
            let f = theory.elements[k].clone();
            for j in 0..=k {
                let g = theory.elements[j].clone();
                for s in &symbols {
                    theory.insert(self.tree_combine(s, &f, &g)?, None, cap)?;
                    if j != k {
                        theory.insert(self.tree_combine(s, &g, &f)?, None, cap)?;
                    }
                }
            }
            k += 1;
        }
        Ok(theory)
    }
}

pub fn generate_theory<A: Recognizer + ?Sized>(a: &A, cap: usize) -> Result<FiniteTheory> {
    a.generate_theory(cap)
}

pub fn theory_morphism<A: Recognizer + ?Sized>(a: &A, term: &A::Term) -> Result<StateSetFunction> {
    a.theory_morphism(term)
}

fn check_state<A: Recognizer + ?Sized>(a: &A, i: usize) -> Result<()> {
    if i < a.state_count() {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange {
            index: i,
            bound: a.state_count(),
        })
    }
}

/// `i ∈ h(term)(F)`.
pub fn recognize_membership<A: Recognizer + ?Sized>(
    a: &A,
    i: usize,
    term: &A::Term,
) -> Result<bool> {
    check_state(a, i)?;
    let f = a.accepting_set()?;
    Ok(set_contains(a.theory_morphism(term)?.apply(f), i))
}

/// Elements of the generated theory that accept from a given state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecognizingSubset {
    pub theory: FiniteTheory,
    /// Indices of `g` with `i ∈ g(F)`.
    pub membership: Vec<usize>,
    /// Indices of `g` with `g(F) = {i}`.
    pub equality: Vec<usize>,
}

impl RecognizingSubset {
    pub fn membership_names(&self) -> Vec<&str> {
        self.membership
            .iter()
            .map(|&k| self.theory.names()[k].as_str())
            .collect()
    }

    pub fn equality_names(&self) -> Vec<&str> {
        self.equality
            .iter()
            .map(|&k| self.theory.names()[k].as_str())
            .collect()
    }
}

pub fn recognizing_subset<A: Recognizer + ?Sized>(
    a: &A,
    i: usize,
    cap: usize,
) -> Result<RecognizingSubset> {
    check_state(a, i)?;
    let f = a.accepting_set()?;
    let theory = a.generate_theory(cap)?;
    let image: Vec<StateSet> = theory.elements().iter().map(|g| g.apply(f)).collect();
    let membership = (0..theory.len())
        .filter(|&k| set_contains(image[k], i))
        .collect();
    let equality = (0..theory.len()).filter(|&k| image[k] == 1 << i).collect();
    Ok(RecognizingSubset {
        theory,
        membership,
        equality,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::{parse_word, Alphabet};
    use crate::tree::TreeAutomatonBuilder;
    use crate::word::WordAutomatonBuilder;

    fn two_state() -> TreeAutomaton<Boolean> {
        TreeAutomatonBuilder::new(Boolean, Alphabet::new(["a", "b"]).unwrap(), 2)
            .edge(1, "a", 1, 1, true)
            .edge(1, "b", 0, 0, true)
            .final_weight(0, 0, true)
            .build()
            .unwrap()
    }

    fn a_ab() -> WordAutomaton<Boolean> {
        WordAutomatonBuilder::new(Boolean, Alphabet::new(["a", "b"]).unwrap(), 2)
            .letter(0, "a", 0, true)
            .letter(0, "b", 1, true)
            .final_weight(1, 0, true)
            .build()
            .unwrap()
    }

    #[test]
    fn letter_actions() {
        let a = a_ab();
        assert_eq!(a.letter_action("b").unwrap().apply(0b10), 0b01);
        let pa = a.letter_action("a").unwrap();
        assert_eq!(pa.apply(0), 0);
        assert!(pa.is_monotone());
        assert_eq!(
            a.theory_morphism(&parse_word("ab")).unwrap().apply(0b10),
            0b01
        );
        assert_eq!(
            a.theory_morphism(&[]).unwrap(),
            StateSetFunction::identity(2).unwrap()
        );
    }

    #[test]
    fn two_state_combines() {
        let a = two_state();
        let id = StateSetFunction::identity(2).unwrap();
        let a_a = a.tree_combine("a", &id, &id).unwrap();
        assert_eq!(a_a.table(), [0, 0, 0b10, 0b10]);
        let b_a = a.tree_combine("b", &id, &id).unwrap();
        assert_eq!(b_a.table(), [0, 0b10, 0, 0b10]);
        assert_eq!(a.tree_combine("a", &id, &b_a).unwrap().apply(0b01), 0);
        assert_eq!(
            a.theory_morphism(&"(b x0 x0)".parse().unwrap()).unwrap(),
            b_a
        );
    }

    #[test]
    fn small_tree_theories() {
        let one = TreeAutomatonBuilder::new(Boolean, Alphabet::new(["a"]).unwrap(), 1)
            .edge(0, "a", 0, 0, true)
            .build()
            .unwrap();
        assert_eq!(one.generate_theory(100).unwrap().len(), 1);
        let empty = TreeAutomatonBuilder::new(Boolean, Alphabet::new(["a"]).unwrap(), 1)
            .build()
            .unwrap();
        let th = empty.generate_theory(100).unwrap();
        assert_eq!(th.len(), 2);
        assert!(th.contains(&StateSetFunction::constant(1, 0).unwrap()));
        let r = recognizing_subset(&empty, 0, 100).unwrap();
        assert!(r.membership.is_empty());
    }

    #[test]
    fn cap_is_enforced() {
        assert_eq!(
            two_state().generate_theory(3),
            Err(Error::CapExceeded { cap: 3 })
        );
    }

    #[test]
    fn two_state_membership() {
        let a = two_state();
        let b = "(b x0 x0)".parse().unwrap();
        assert!(recognize_membership(&a, 1, &b).unwrap());
        assert!(!recognize_membership(&a, 1, &Tree::Leaf(0)).unwrap());
        assert!(recognize_membership(&a, 0, &Tree::Leaf(0)).unwrap());
        assert!(!recognize_membership(&a, 1, &"(a x0 x0)".parse().unwrap()).unwrap());
        let r = recognizing_subset(&a, 1, 100).unwrap();
        assert_eq!(r.membership_names(), ["b_A"]);
        assert_eq!(r.equality_names(), ["b_A"]);
    }

    #[test]
    fn all_final_includes_identity() {
        let a = WordAutomatonBuilder::new(Boolean, Alphabet::new(["a"]).unwrap(), 2)
            .letter(0, "a", 1, true)
            .final_weight(0, 0, true)
            .final_weight(1, 0, true)
            .build()
            .unwrap();
        let r = recognizing_subset(&a, 0, 100).unwrap();
        assert!(r.membership.contains(&0));
    }

    #[test]
    fn tsv_layout() {
        let th = two_state().generate_theory(100).unwrap();
        let tsv = th.to_tsv(&["1".into(), "2".into()]);
        let first: Vec<&str> = tsv.lines().next().unwrap().split('\t').collect();
        assert_eq!(&first[..3], ["input", "id", "a_A"]);
        assert_eq!(
            tsv.lines().nth(4).unwrap().split('\t').next(),
            Some("{1,2}")
        );
        assert_eq!(format_set(0, &default_labels(2)), "{}");
    }

    #[test]
    fn too_many_states() {
        assert_eq!(
            StateSetFunction::identity(17),
            Err(Error::TooManyStates(17))
        );
    }
}
