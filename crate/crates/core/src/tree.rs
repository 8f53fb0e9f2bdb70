//! Binary trees with variable leaves and weighted bottom-up tree automata.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::algebra::Semiring;
use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::kleisli::{check_spec, KMatrix};

/// Default bound on the number of trees kept by [`TreeAutomaton::saturation_slice`].
pub const DEFAULT_TREE_CAP: usize = 1_000_000;

/// A complete binary tree; inner nodes carry a symbol, leaves a variable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tree {
    Leaf(usize),
    Node(Box<Tree>, String, Box<Tree>),
}

impl Tree {
    pub fn leaf(var: usize) -> Self {
        Tree::Leaf(var)
    }

    pub fn node(left: Tree, symbol: impl Into<String>, right: Tree) -> Self {
        Tree::Node(Box::new(left), symbol.into(), Box::new(right))
    }

    /// Length of the longest root-to-leaf path; a bare leaf has height 0.
    pub fn height(&self) -> usize {
        match self {
            Tree::Leaf(_) => 0,
            Tree::Node(l, _, r) => 1 + l.height().max(r.height()),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Tree::Leaf(_) => 1,
            Tree::Node(l, _, r) => 1 + l.size() + r.size(),
        }
    }

    /// Largest leaf variable, if any leaf exists (always true).
    pub fn max_var(&self) -> usize {
        match self {
            Tree::Leaf(j) => *j,
            Tree::Node(l, _, r) => l.max_var().max(r.max_var()),
        }
    }

    /// Positions as `l`/`r` paths, in preorder; the root is `""`.
    pub fn dom(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.walk(&mut String::new(), &mut |p, _| out.push(p.to_owned()));
        out
    }

    /// Positions of the leaves.
    pub fn frontier(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.walk(&mut String::new(), &mut |p, t| {
            if matches!(t, Tree::Leaf(_)) {
                out.push(p.to_owned())
            }
        });
        out
    }

    /// Children positions of leaves: `dom·{l,r} \ dom`.
    pub fn outer_frontier(&self) -> Vec<String> {
        self.frontier()
            .into_iter()
            .flat_map(|p| [format!("{p}l"), format!("{p}r")])
            .collect()
    }

    fn walk(&self, path: &mut String, f: &mut impl FnMut(&str, &Tree)) {
        f(path, self);
        if let Tree::Node(l, _, r) = self {
            path.push('l');
            l.walk(path, f);
            path.pop();
            path.push('r');
            r.walk(path, f);
            path.pop();
        }
    }

    /// Replaces leaf `j` by `subst[j]`.
    pub fn substitute(&self, subst: &[Tree]) -> Result<Tree> {
        match self {
            Tree::Leaf(j) => subst.get(*j).cloned().ok_or(Error::VariableOutOfRange {
                var: *j,
                arity: subst.len(),
            }),
            Tree::Node(l, s, r) => Ok(Tree::node(
                l.substitute(subst)?,
                s.clone(),
                r.substitute(subst)?,
            )),
        }
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tree::Leaf(j) => write!(f, "x{j}"),
            Tree::Node(l, s, r) => write!(f, "({s} {l} {r})"),
        }
    }
}

struct TermParser<'a> {
    src: &'a str,
    pos: usize,
}

impl TermParser<'_> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: 1,
            column: self.src[..self.pos].chars().count() + 1,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn token(&mut self) -> &str {
        let rest = &self.src[self.pos..];
        let len = rest
            .find(|c: char| c.is_whitespace() || c == '(' || c == ')')
            .unwrap_or(rest.len());
        self.pos += len;
        &rest[..len]
    }

    fn term(&mut self) -> Result<Tree> {
        self.skip_ws();
        match self.src[self.pos..].chars().next() {
            None => Err(self.err("unexpected end of term")),
            Some('(') => {
                self.pos += 1;
                self.skip_ws();
                let sym = self.token().to_owned();
                if sym.is_empty() {
                    return Err(self.err("expected a symbol"));
                }
                let l = self.term()?;
                let r = self.term()?;
                self.skip_ws();
                if !self.src[self.pos..].starts_with(')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(Tree::node(l, sym, r))
            }
            Some(_) => {
                let start = self.pos;
                let tok = self.token();
                let var = tok
                    .strip_prefix('x')
                    .filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
                    .and_then(|d| d.parse().ok());
                match var {
                    Some(j) => Ok(Tree::Leaf(j)),
                    None => {
                        let msg = format!("expected a variable x<digits>, found {tok:?}");
                        self.pos = start;
                        Err(self.err(msg))
                    }
                }
            }
        }
    }
}

impl FromStr for Tree {
    type Err = Error;

    /// `term := x<digit+> | ( <sym> <term> <term> )`
    fn from_str(s: &str) -> Result<Self> {
        let mut p = TermParser { src: s, pos: 0 };
        let t = p.term()?;
        p.skip_ws();
        if p.pos < s.len() {
            return Err(p.err("trailing input after term"));
        }
        Ok(t)
    }
}

/// Every tree over `alphabet` with leaves in `0..vars` and height at most
/// `max_height`, ordered by height.
pub fn enumerate_trees(alphabet: &Alphabet, vars: usize, max_height: usize) -> Vec<Tree> {
    let mut all: Vec<Tree> = (0..vars).map(Tree::Leaf).collect();
    let mut prev_len = 0;
    for _ in 0..max_height {
        let new_from = all.len();
        let mut next = Vec::new();
        for (li, l) in all.iter().enumerate() {
            for (ri, r) in all.iter().enumerate() {
                // at least one child comes from the newest layer
                if li < prev_len && ri < prev_len {
                    continue;
                }
                for s in alphabet.symbols() {
                    next.push(Tree::node(l.clone(), s.clone(), r.clone()));
                }
            }
        }
        prev_len = new_from;
        all.extend(next);
    }
    all
}

/// Weighted tree automaton. `delta[σ]` is `n × n²` with column `q1·n + q2`
/// holding the weight of `q → (q1, σ, q2)`; `finals` is `n × p`.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeAutomaton<S: Semiring> {
    spec: S,
    alphabet: Alphabet,
    n: usize,
    delta: Vec<KMatrix<S>>,
    finals: KMatrix<S>,
}

impl<S: Semiring> TreeAutomaton<S> {
    pub fn new(
        spec: S,
        alphabet: Alphabet,
        delta: Vec<KMatrix<S>>,
        finals: KMatrix<S>,
    ) -> Result<Self> {
        let n = finals.rows();
        check_spec(&spec, finals.spec())?;
        if delta.len() != alphabet.len() {
            return Err(Error::DimensionMismatch {
                expected: format!("{} transition matrices", alphabet.len()),
                found: format!("{}", delta.len()),
            });
        }
        for d in &delta {
            check_spec(&spec, d.spec())?;
            if d.rows() != n || d.cols() != n * n {
                return Err(Error::DimensionMismatch {
                    expected: format!("{n}x{}", n * n),
                    found: format!("{}x{}", d.rows(), d.cols()),
                });
            }
        }
        Ok(Self {
            spec,
            alphabet,
            n,
            delta,
            finals,
        })
    }

    pub fn spec(&self) -> &S {
        &self.spec
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn states(&self) -> usize {
        self.n
    }

    pub fn exits(&self) -> usize {
        self.finals.cols()
    }

    pub fn finals(&self) -> &KMatrix<S> {
        &self.finals
    }

    pub fn delta(&self, symbol: &str) -> Result<&KMatrix<S>> {
        Ok(&self.delta[self.alphabet.index_of(symbol)?])
    }

    pub fn deltas(&self) -> &[KMatrix<S>] {
        &self.delta
    }

    /// Weight of `q → (q1, σ, q2)`.
    pub fn transition(&self, q: usize, symbol: &str, q1: usize, q2: usize) -> Result<&S::Elem> {
        Ok(self.delta(symbol)?.get(q, q1 * self.n + q2))
    }

    /// Combines child values through `σ`:
    /// `v(q) = ⊕ delta(q,σ)(q1,q2) ⊗ left(q1) ⊗ right(q2)`.
    pub fn combine(&self, sym: usize, left: &[S::Elem], right: &[S::Elem]) -> Vec<S::Elem> {
        let s = &self.spec;
        let d = &self.delta[sym];
        (0..self.n)
            .map(|q| {
                let mut acc = s.zero();
                for (q1, l) in left.iter().enumerate() {
                    if s.is_zero(l) {
                        continue;
                    }
                    for (q2, r) in right.iter().enumerate() {
                        let w = d.get(q, q1 * self.n + q2);
                        if !s.is_zero(w) && !s.is_zero(r) {
                            acc = s.plus(&acc, &s.times(&s.times(w, l), r));
                        }
                    }
                }
                acc
            })
            .collect()
    }

    /// Bottom-up value of `t` with leaf `j` valued `leaves[j]`.
    pub fn eval_with_leaves(&self, t: &Tree, leaves: &[Vec<S::Elem>]) -> Result<Vec<S::Elem>> {
        match t {
            Tree::Leaf(j) => leaves.get(*j).cloned().ok_or(Error::VariableOutOfRange {
                var: *j,
                arity: leaves.len(),
            }),
            Tree::Node(l, sym, r) => {
                let a = self.alphabet.index_of(sym)?;
                let lv = self.eval_with_leaves(l, leaves)?;
                let rv = self.eval_with_leaves(r, leaves)?;
                Ok(self.combine(a, &lv, &rv))
            }
        }
    }

    fn final_columns(&self) -> Vec<Vec<S::Elem>> {
        (0..self.exits()).map(|j| self.finals.column(j)).collect()
    }

    /// Value of `t` at every state, leaves read through the exit weights.
    pub fn eval_tree(&self, t: &Tree) -> Result<Vec<S::Elem>> {
        self.eval_with_leaves(t, &self.final_columns())
    }

    fn check_state(&self, i: usize) -> Result<()> {
        if i < self.n {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: i,
                bound: self.n,
            })
        }
    }

    pub fn accepts(&self, i: usize, t: &Tree) -> Result<S::Elem> {
        self.check_state(i)?;
        Ok(self.eval_tree(t)?.swap_remove(i))
    }

    /// Run oracle: the sum over every labelling of the positions of `t` by
    /// states, rooted at `i`, of the product of the transition weights at
    /// inner nodes and the exit weights at leaves. Runs are built top-down
    /// and abandoned as soon as a factor is zero.
    pub fn brute_force_accepts(&self, i: usize, t: &Tree) -> Result<S::Elem> {
        self.check_state(i)?;
        self.validate(t)?;
        let mut total = self.spec.zero();
        self.runs(vec![(t, i)], self.spec.one(), &mut total);
        Ok(total)
    }

    fn validate(&self, t: &Tree) -> Result<()> {
        match t {
            Tree::Leaf(j) if *j >= self.exits() => Err(Error::VariableOutOfRange {
                var: *j,
                arity: self.exits(),
            }),
            Tree::Leaf(_) => Ok(()),
            Tree::Node(l, s, r) => {
                self.alphabet.index_of(s)?;
                self.validate(l)?;
                self.validate(r)
            }
        }
    }

    /// `pending` holds the open positions of a partial run with their states.
    fn runs(&self, mut pending: Vec<(&Tree, usize)>, acc: S::Elem, total: &mut S::Elem) {
        let s = &self.spec;
        let Some((t, q)) = pending.pop() else {
            *total = s.plus(total, &acc);
            return;
        };
        match t {
            Tree::Leaf(j) => {
                let w = self.finals.get(q, *j);
                if !s.is_zero(w) {
                    self.runs(pending, s.times(&acc, w), total);
                }
            }
            Tree::Node(l, sym, r) => {
                let d = &self.delta[self.alphabet.index_of(sym).expect("validated")];
                for q1 in 0..self.n {
                    for q2 in 0..self.n {
                        let w = d.get(q, q1 * self.n + q2);
                        if s.is_zero(w) {
                            continue;
                        }
                        let mut next = pending.clone();
                        next.push((r, q2));
                        next.push((l, q1));
                        self.runs(next, s.times(&acc, w), total);
                    }
                }
            }
        }
    }

    /// Trees over state-variable leaves of height at most `max_height` in
    /// the saturation of state `i`, mapped to their value vectors (leaf `j`
    /// valued at the unit of `j`). Built layer by layer; trees whose value
    /// vector is zero are dropped since every tree containing them is zero
    /// as well.
    pub fn saturation_slice(
        &self,
        i: usize,
        max_height: usize,
    ) -> Result<BTreeMap<Tree, Vec<S::Elem>>> {
        self.saturation_slice_capped(i, max_height, DEFAULT_TREE_CAP)
    }

    pub fn saturation_slice_capped(
        &self,
        i: usize,
        max_height: usize,
        cap: usize,
    ) -> Result<BTreeMap<Tree, Vec<S::Elem>>> {
        self.check_state(i)?;
        let s = &self.spec;
        let unit = |j: usize| -> Vec<S::Elem> {
            (0..self.n)
                .map(|q| if q == j { s.one() } else { s.zero() })
                .collect()
        };
        let mut all: Vec<(Tree, Vec<S::Elem>)> =
            (0..self.n).map(|j| (Tree::Leaf(j), unit(j))).collect();
        let mut prev_len = 0;
        for _ in 0..max_height {
            let new_from = all.len();
            let mut next = Vec::new();
            for (li, (lt, lv)) in all.iter().enumerate() {
                for (ri, (rt, rv)) in all.iter().enumerate() {
                    if li < prev_len && ri < prev_len {
                        continue;
                    }
                    for (a, sym) in self.alphabet.symbols().iter().enumerate() {
                        let v = self.combine(a, lv, rv);
                        if v.iter().all(|x| s.is_zero(x)) {
                            continue;
                        }
                        if all.len() + next.len() >= cap {
                            return Err(Error::ResultTooLarge { cap });
                        }
                        next.push((Tree::node(lt.clone(), sym.clone(), rt.clone()), v));
                    }
                }
            }
            prev_len = new_from;
            all.extend(next);
        }
        Ok(all.into_iter().filter(|(_, v)| !s.is_zero(&v[i])).collect())
    }
}

/// Incremental construction; repeated transitions and exit weights are summed.
#[derive(Debug, Clone)]
pub struct TreeAutomatonBuilder<S: Semiring> {
    spec: S,
    alphabet: Alphabet,
    states: usize,
    exits: usize,
    edges: Vec<(usize, String, usize, usize, S::Elem)>,
    finals: Vec<(usize, usize, S::Elem)>,
}

impl<S: Semiring> TreeAutomatonBuilder<S> {
    pub fn new(spec: S, alphabet: Alphabet, states: usize) -> Self {
        Self {
            spec,
            alphabet,
            states,
            exits: 1,
            edges: Vec::new(),
            finals: Vec::new(),
        }
    }

    pub fn exits(mut self, p: usize) -> Self {
        self.exits = p;
        self
    }

    pub fn edge(
        mut self,
        src: usize,
        symbol: &str,
        left: usize,
        right: usize,
        weight: S::Elem,
    ) -> Self {
        self.edges
            .push((src, symbol.to_owned(), left, right, weight));
        self
    }

    pub fn final_weight(mut self, state: usize, exit: usize, weight: S::Elem) -> Self {
        self.finals.push((state, exit, weight));
        self
    }

    pub fn build(self) -> Result<TreeAutomaton<S>> {
        let n = self.states;
        let check = |i: usize| {
            if i < n {
                Ok(())
            } else {
                Err(Error::IndexOutOfRange { index: i, bound: n })
            }
        };
        let mut delta = vec![KMatrix::zeros(self.spec.clone(), n, n * n); self.alphabet.len()];
        for (src, sym, l, r, w) in self.edges {
            check(src)?;
            check(l)?;
            check(r)?;
            delta[self.alphabet.index_of(&sym)?].accumulate(src, l * n + r, &w);
        }
        let exits = self
            .finals
            .iter()
            .map(|f| f.1 + 1)
            .max()
            .unwrap_or(0)
            .max(self.exits)
            .max(1);
        let mut finals = KMatrix::zeros(self.spec.clone(), n, exits);
        for (state, exit, w) in self.finals {
            check(state)?;
            finals.accumulate(state, exit, &w);
        }
        TreeAutomaton::new(self.spec, self.alphabet, delta, finals)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Boolean, NaturalSat};

    /// Two states; state 1 has `a → (1,1)` and `b → (0,0)`; only state 0 is final.
    fn two_state() -> TreeAutomaton<Boolean> {
        TreeAutomatonBuilder::new(Boolean, Alphabet::new(["a", "b"]).unwrap(), 2)
            .edge(1, "a", 1, 1, true)
            .edge(1, "b", 0, 0, true)
            .final_weight(0, 0, true)
            .build()
            .unwrap()
    }

    fn t(s: &str) -> Tree {
        s.parse().unwrap()
    }

    #[test]
    fn term_syntax_round_trips() {
        for s in ["x0", "(a x0 x1)", "(a (b x0 x0) x12)"] {
            assert_eq!(t(s).to_string(), s);
        }
        assert_eq!(
            t("  ( a\n x0 x0 ) "),
            Tree::node(Tree::Leaf(0), "a", Tree::Leaf(0))
        );
        for bad in ["", "x", "y0", "(a x0)", "(a x0 x0", "(a x0 x0))", "()"] {
            assert!(
                matches!(bad.parse::<Tree>(), Err(Error::Parse { .. })),
                "{bad}"
            );
        }
    }

    #[test]
    fn positions() {
        let tr = t("(a (b x0 x0) x0)");
        assert_eq!(tr.height(), 2);
        assert_eq!(tr.dom(), ["", "l", "ll", "lr", "r"]);
        assert_eq!(tr.frontier(), ["ll", "lr", "r"]);
        assert_eq!(
            tr.outer_frontier(),
            ["lll", "llr", "lrl", "lrr", "rl", "rr"]
        );
        assert_eq!(tr.dom().iter().map(String::len).max(), Some(tr.height()));
    }

    #[test]
    fn two_state_evaluations() {
        let a = two_state();
        assert_eq!(a.eval_tree(&t("x0")).unwrap(), [true, false]);
        assert_eq!(a.eval_tree(&t("(b x0 x0)")).unwrap(), [false, true]);
        assert!(a.eval_tree(&t("(a (b x0 x0) (b x0 x0))")).unwrap()[1]);
        assert!(a.accepts(0, &t("x0")).unwrap());
        assert!(!a.accepts(1, &t("x0")).unwrap());
        assert!(!a.accepts(1, &t("(a x0 x0)")).unwrap());
        assert_eq!(
            a.accepts(2, &t("x0")),
            Err(Error::IndexOutOfRange { index: 2, bound: 2 })
        );
        assert_eq!(
            a.eval_tree(&t("(c x0 x0)")),
            Err(Error::UnknownSymbol("c".into()))
        );
        assert_eq!(
            a.eval_tree(&t("(a x0 x1)")),
            Err(Error::VariableOutOfRange { var: 1, arity: 1 })
        );
    }

    #[test]
    fn brute_force_matches_on_two_state() {
        let a = two_state();
        for tr in enumerate_trees(a.alphabet(), 1, 3) {
            for i in 0..2 {
                assert_eq!(
                    a.accepts(i, &tr).unwrap(),
                    a.brute_force_accepts(i, &tr).unwrap(),
                    "{tr}"
                );
            }
        }
    }

    #[test]
    fn empty_delta_has_no_runs() {
        let a = TreeAutomatonBuilder::new(Boolean, Alphabet::new(["a"]).unwrap(), 1)
            .final_weight(0, 0, true)
            .build()
            .unwrap();
        assert!(!a.brute_force_accepts(0, &t("(a x0 x0)")).unwrap());
    }

    #[test]
    fn duplicated_pairs_count_twice() {
        // two runs on (a x0 x0): via (0,1) and (1,0), the first entered twice
        let n = NaturalSat::<u64>::new();
        let a = TreeAutomatonBuilder::new(n, Alphabet::new(["a"]).unwrap(), 2)
            .edge(0, "a", 0, 1, 1)
            .edge(0, "a", 0, 1, 1)
            .edge(0, "a", 1, 0, 3)
            .final_weight(0, 0, 1)
            .final_weight(1, 0, 5)
            .build()
            .unwrap();
        let tr = t("(a x0 x0)");
        assert_eq!(a.brute_force_accepts(0, &tr).unwrap(), 2 * 5 + 3 * 5);
        assert_eq!(a.accepts(0, &tr).unwrap(), 25);
    }

    #[test]
    fn enumeration_counts() {
        let ab = Alphabet::new(["a", "b"]).unwrap();
        let counts: Vec<usize> = (0..4).map(|h| enumerate_trees(&ab, 1, h).len()).collect();
        assert_eq!(counts, [1, 3, 19, 723]);
        let trees = enumerate_trees(&ab, 2, 2);
        let distinct: std::collections::BTreeSet<_> = trees.iter().collect();
        assert_eq!(distinct.len(), trees.len());
        assert!(trees.iter().all(|x| x.height() <= 2));
    }

    #[test]
    fn saturation_slices() {
        let a = two_state();
        let s0 = a.saturation_slice(1, 0).unwrap();
        assert_eq!(s0.keys().cloned().collect::<Vec<_>>(), [Tree::Leaf(1)]);
        assert_eq!(s0[&Tree::Leaf(1)], [false, true]);
        let s1 = a.saturation_slice(1, 1).unwrap();
        let mut keys: Vec<String> = s1.keys().map(Tree::to_string).collect();
        keys.sort();
        assert_eq!(keys, ["(a x1 x1)", "(b x0 x0)", "x1"]);
        let s2 = a.saturation_slice(1, 2).unwrap();
        for l in s1.keys() {
            for r in s1.keys() {
                assert!(s2.contains_key(&Tree::node(l.clone(), "a", r.clone())));
            }
        }
        assert!(matches!(
            a.saturation_slice_capped(1, 3, 10),
            Err(Error::ResultTooLarge { cap: 10 })
        ));
    }

    #[test]
    fn substitution_law_on_two_state() {
        let a = two_state();
        let trees = enumerate_trees(a.alphabet(), 1, 2);
        for outer in &trees {
            for inner in &trees {
                let lhs = a
                    .eval_tree(&outer.substitute(std::slice::from_ref(inner)).unwrap())
                    .unwrap();
                let rhs = a
                    .eval_with_leaves(outer, &[a.eval_tree(inner).unwrap()])
                    .unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }
}
