//! Word automata over a semiring and the regular maps they present.
//!
//! A [`WordAutomaton`] stores the one-step transition split by letter plus an
//! optional matrix of internal (ε) moves and an exit matrix. Saturated
//! behaviour is computed on demand: reading `a1…ak` from state `i` is row `i`
//! of `E*·M(a1)·E*·…·M(ak)·E*`, where `E*` is the star of the internal moves.

use std::collections::BTreeMap;

use crate::algebra::Semiring;
use crate::alphabet::{format_word, Alphabet, Word};
use crate::error::{Error, Result};
use crate::kleisli::{check_spec, KMatrix};
use crate::report::LawReport;

/// Word-indexed weights; words with all-zero values are absent.
pub type Slice<E> = BTreeMap<Word, Vec<E>>;

#[derive(Debug, Clone, PartialEq)]
pub struct WordAutomaton<S: Semiring> {
    spec: S,
    alphabet: Alphabet,
    n: usize,
    letters: Vec<KMatrix<S>>,
    eps: Option<KMatrix<S>>,
    finals: KMatrix<S>,
}

fn expect_shape<S: Semiring>(
    m: &KMatrix<S>,
    spec: &S,
    rows: usize,
    cols: Option<usize>,
) -> Result<()> {
    check_spec(spec, m.spec())?;
    if m.rows() != rows || cols.is_some_and(|c| c != m.cols()) {
        return Err(Error::DimensionMismatch {
            expected: match cols {
                Some(c) => format!("{rows}x{c}"),
                None => format!("{rows} rows"),
            },
            found: format!("{}x{}", m.rows(), m.cols()),
        });
    }
    Ok(())
}

impl<S: Semiring> WordAutomaton<S> {
    /// `letters[k]` is the transition matrix of `alphabet.symbols()[k]`.
    pub fn new(
        spec: S,
        alphabet: Alphabet,
        letters: Vec<KMatrix<S>>,
        eps: Option<KMatrix<S>>,
        finals: KMatrix<S>,
    ) -> Result<Self> {
        let n = finals.rows();
        if letters.len() != alphabet.len() {
            return Err(Error::DimensionMismatch {
                expected: format!("{} letter matrices", alphabet.len()),
                found: format!("{}", letters.len()),
            });
        }
        for m in letters.iter().chain(eps.iter()) {
            expect_shape(m, &spec, n, Some(n))?;
        }
        expect_shape(&finals, &spec, n, None)?;
        Ok(Self {
            spec,
            alphabet,
            n,
            letters,
            eps,
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

    /// Number of exit variables `p` (columns of the exit matrix).
    pub fn exits(&self) -> usize {
        self.finals.cols()
    }

    pub fn letter(&self, symbol: &str) -> Result<&KMatrix<S>> {
        Ok(&self.letters[self.alphabet.index_of(symbol)?])
    }

    pub fn letters(&self) -> &[KMatrix<S>] {
        &self.letters
    }

    pub fn eps(&self) -> Option<&KMatrix<S>> {
        self.eps.as_ref()
    }

    pub fn finals(&self) -> &KMatrix<S> {
        &self.finals
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

    /// Closure of the internal moves; the identity when there are none.
    pub fn eps_star(&self) -> Result<KMatrix<S>> {
        match &self.eps {
            None => Ok(KMatrix::identity(self.spec.clone(), self.n)),
            Some(e) => e.star(),
        }
    }

    /// `M(a)·E*` for every letter, in alphabet order.
    fn saturated_letters(&self, star: &KMatrix<S>) -> Result<Vec<KMatrix<S>>> {
        self.letters.iter().map(|m| m.compose(star)).collect()
    }

    /// `E*·M(a1)·E*·…·M(ak)·E*`; entry `[i][j]` is the total weight of
    /// reaching `j` from `i` while reading `w`, internal moves included.
    pub fn run_dual<W: AsRef<str>>(&self, word: &[W]) -> Result<KMatrix<S>> {
        let idx = self.alphabet.encode(word)?;
        let star = self.eps_star()?;
        let sat = self.saturated_letters(&star)?;
        idx.iter().try_fold(star, |acc, &a| acc.compose(&sat[a]))
    }

    /// Like [`Self::run_dual`] but without the trailing `E*`.
    fn run_open(&self, idx: &[usize], star: &KMatrix<S>) -> Result<KMatrix<S>> {
        let Some((&last, init)) = idx.split_last() else {
            return Ok(KMatrix::identity(self.spec.clone(), self.n));
        };
        let mut acc = star.clone();
        for &a in init {
            acc = acc.compose(&self.letters[a])?.compose(star)?;
        }
        acc.compose(&self.letters[last])
    }

    /// Weights of the exit variables when reading `word` from `state`:
    /// row `state` of `run_dual(word)·finals`.
    pub fn weight<W: AsRef<str>>(&self, state: usize, word: &[W]) -> Result<Vec<S::Elem>> {
        self.check_state(state)?;
        let idx = self.alphabet.encode(word)?;
        let star = self.eps_star()?;
        let sat = self.saturated_letters(&star)?;
        let mut row = star.row(state).to_vec();
        for &a in &idx {
            row = sat[a].apply_row(&row)?;
        }
        self.finals.apply_row(&row)
    }

    /// Path-sum oracle: sums, over every explicit sequence of states that
    /// reads `word` from `state` with at most `eps_bound` internal moves
    /// before, between and after letters, the product of the step weights
    /// and the exit weight. Zero-weight steps are not explored.
    pub fn brute_force_weight<W: AsRef<str>>(
        &self,
        state: usize,
        word: &[W],
        eps_bound: usize,
    ) -> Result<Vec<S::Elem>> {
        self.check_state(state)?;
        let idx = self.alphabet.encode(word)?;
        let mut total = vec![self.spec.zero(); self.exits()];
        self.paths(&idx, 0, state, 0, eps_bound, &self.spec.one(), &mut total);
        Ok(total)
    }

    #[allow(clippy::too_many_arguments)]
    fn paths(
        &self,
        word: &[usize],
        pos: usize,
        state: usize,
        eps_used: usize,
        eps_bound: usize,
        acc: &S::Elem,
        total: &mut [S::Elem],
    ) {
        let s = &self.spec;
        if pos == word.len() {
            for (t, f) in total.iter_mut().zip(self.finals.row(state)) {
                *t = s.plus(t, &s.times(acc, f));
            }
        }
        if let Some(e) = &self.eps {
            if eps_used < eps_bound {
                for (next, w) in e.row(state).iter().enumerate() {
                    if !s.is_zero(w) {
                        let acc = s.times(acc, w);
                        self.paths(word, pos, next, eps_used + 1, eps_bound, &acc, total);
                    }
                }
            }
        }
        if pos < word.len() {
            for (next, w) in self.letters[word[pos]].row(state).iter().enumerate() {
                if !s.is_zero(w) {
                    let acc = s.times(acc, w);
                    self.paths(word, pos + 1, next, 0, eps_bound, &acc, total);
                }
            }
        }
    }

    /// Row `state` of `run_dual(w)` for every word of length at most
    /// `max_len`, omitting all-zero rows. Over the booleans the nonzero
    /// entries enumerate the saturated reachability labelled by `w`.
    pub fn saturation_slice(&self, state: usize, max_len: usize) -> Result<Slice<S::Elem>> {
        self.check_state(state)?;
        self.explore(state, max_len, |row| Ok(row.to_vec()))
    }

    /// [`Self::weight`] for every word of length at most `max_len`,
    /// omitting words of weight zero.
    pub fn weight_slice(&self, state: usize, max_len: usize) -> Result<Slice<S::Elem>> {
        self.check_state(state)?;
        self.explore(state, max_len, |row| self.finals.apply_row(row))
    }

    fn explore(
        &self,
        state: usize,
        max_len: usize,
        view: impl Fn(&[S::Elem]) -> Result<Vec<S::Elem>>,
    ) -> Result<Slice<S::Elem>> {
        let star = self.eps_star()?;
        let sat = self.saturated_letters(&star)?;
        let mut out = BTreeMap::new();
        let mut layer: Vec<(Word, Vec<S::Elem>)> = vec![(Vec::new(), star.row(state).to_vec())];
        for len in 0..=max_len {
            let mut next = Vec::new();
            for (w, row) in layer {
                // a zero row stays zero on every extension
                if row.iter().all(|x| self.spec.is_zero(x)) {
                    continue;
                }
                let v = view(&row)?;
                if !v.iter().all(|x| self.spec.is_zero(x)) {
                    out.insert(w.clone(), v);
                }
                if len < max_len {
                    for (a, m) in sat.iter().enumerate() {
                        let mut w2 = w.clone();
                        w2.push(self.alphabet.symbols()[a].clone());
                        next.push((w2, m.apply_row(&row)?));
                    }
                }
            }
            layer = next;
        }
        Ok(out)
    }

    /// Checks the Eilenberg–Moore laws of the run action on `words`:
    /// `run_dual(ε) = E*` with `id ≤ E*`, `E*·E* = E*` (idempotent carriers),
    /// and `run_dual(uv) = run_dual(u)·run_dual(v)` for all pairs.
    ///
    /// Over non-idempotent carriers with internal moves the product form
    /// double counts the internal moves at the junction, so only the
    /// normalized law `run_dual(uv) = open(u)·run_dual(v)` is checked, where
    /// `open(u)` is `run_dual(u)` without its trailing `E*`.
    pub fn check_em_laws<W: AsRef<str>>(&self, words: &[Vec<W>]) -> Result<LawReport> {
        let star = self.eps_star()?;
        let id = KMatrix::identity(self.spec.clone(), self.n);
        let mut report = LawReport::new();
        let empty: [&str; 0] = [];

        let r_eps = self.run_dual(&empty)?;
        report.record(
            "unit: run_dual(ε) = E*",
            (!r_eps.approx_eq(&star)).then(|| r_eps.to_tsv()),
        );
        report.record("unit: id <= E*", (!id.leq(&star)?).then(|| star.to_tsv()));

        let idempotent = self.spec.flags().idempotent_plus;
        let full_product = idempotent || self.eps.is_none();
        if idempotent {
            let sq = star.compose(&star)?;
            report.record(
                "unit: E*·E* = E*",
                (!sq.approx_eq(&star)).then(|| sq.to_tsv()),
            );
        }

        let encoded: Vec<(Word, Vec<usize>)> = words
            .iter()
            .map(|w| {
                let word: Word = w.iter().map(|s| s.as_ref().to_owned()).collect();
                self.alphabet.encode(w).map(|idx| (word, idx))
            })
            .collect::<Result<_>>()?;
        let sat = self.saturated_letters(&star)?;
        let run = |idx: &[usize]| -> Result<KMatrix<S>> {
            idx.iter()
                .try_fold(star.clone(), |acc, &a| acc.compose(&sat[a]))
        };
        let runs: Vec<KMatrix<S>> = encoded.iter().map(|(_, i)| run(i)).collect::<Result<_>>()?;

        let mut product_witness = None;
        let mut normalized_witness = None;
        'outer: for (u, (uw, ui)) in encoded.iter().enumerate() {
            let open_u = self.run_open(ui, &star)?;
            for (v, (vw, vi)) in encoded.iter().enumerate() {
                let uv: Vec<usize> = ui.iter().chain(vi).copied().collect();
                let r_uv = run(&uv)?;
                let pair = || format!("u={} v={}", format_word(uw), format_word(vw));
                if full_product && product_witness.is_none() {
                    let prod = runs[u].compose(&runs[v])?;
                    if !prod.approx_eq(&r_uv) {
                        product_witness = Some(pair());
                    }
                }
                if normalized_witness.is_none() {
                    let prod = open_u.compose(&runs[v])?;
                    if !prod.approx_eq(&r_uv) {
                        normalized_witness = Some(pair());
                    }
                }
                if normalized_witness.is_some() && (product_witness.is_some() || !full_product) {
                    break 'outer;
                }
            }
        }
        if full_product {
            report.record(
                "multiplication: run_dual(uv) = run_dual(u)·run_dual(v)",
                product_witness,
            );
        }
        report.record(
            "multiplication: run_dual(uv) = open(u)·run_dual(v)",
            normalized_witness,
        );
        Ok(report)
    }

    /// The automaton with every letter and internal move reversed.
    pub fn edge_reversed(&self) -> Self {
        Self {
            spec: self.spec.clone(),
            alphabet: self.alphabet.clone(),
            n: self.n,
            letters: self.letters.iter().map(KMatrix::transpose).collect(),
            eps: self.eps.as_ref().map(KMatrix::transpose),
            finals: self.finals.clone(),
        }
    }

    /// Letter matrices reordered to follow `target`, which must hold the
    /// same symbols.
    fn reorder_alphabet(&self, target: &Alphabet) -> Result<Self> {
        if !self.alphabet.same_symbols(target) {
            return Err(Error::AlphabetMismatch {
                left: target.symbols().to_vec(),
                right: self.alphabet.symbols().to_vec(),
            });
        }
        let letters = target
            .symbols()
            .iter()
            .map(|s| self.letter(s).cloned())
            .collect::<Result<_>>()?;
        Ok(Self {
            alphabet: target.clone(),
            letters,
            ..self.clone()
        })
    }
}

/// Edge label accepted by [`WordAutomatonBuilder`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Label {
    Symbol(String),
    Eps,
    /// A multi-symbol word, expanded into a chain through fresh states.
    Word(Word),
}

/// Incremental construction from edge lists. Parallel edges and repeated
/// exit weights are summed.
#[derive(Debug, Clone)]
pub struct WordAutomatonBuilder<S: Semiring> {
    spec: S,
    alphabet: Alphabet,
    states: usize,
    exits: usize,
    edges: Vec<(usize, Label, usize, S::Elem)>,
    finals: Vec<(usize, usize, S::Elem)>,
}

impl<S: Semiring> WordAutomatonBuilder<S> {
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

    /// Lower bound on the exit arity (it also grows with exit indices used).
    pub fn exits(mut self, p: usize) -> Self {
        self.exits = p;
        self
    }

    pub fn edge(mut self, src: usize, label: Label, dst: usize, weight: S::Elem) -> Self {
        self.edges.push((src, label, dst, weight));
        self
    }

    /// Shorthand for a single-symbol edge.
    pub fn letter(self, src: usize, symbol: &str, dst: usize, weight: S::Elem) -> Self {
        self.edge(src, Label::Symbol(symbol.to_owned()), dst, weight)
    }

    pub fn eps(self, src: usize, dst: usize, weight: S::Elem) -> Self {
        self.edge(src, Label::Eps, dst, weight)
    }

    pub fn final_weight(mut self, state: usize, exit: usize, weight: S::Elem) -> Self {
        self.finals.push((state, exit, weight));
        self
    }

    pub fn build(self) -> Result<WordAutomaton<S>> {
        let bound = self.states;
        let check = |i: usize| {
            if i < bound {
                Ok(())
            } else {
                Err(Error::IndexOutOfRange { index: i, bound })
            }
        };
        // expand word labels first so the final state count is known
        let mut simple: Vec<(usize, Option<usize>, usize, S::Elem)> = Vec::new();
        let mut n = self.states;
        for (src, label, dst, w) in self.edges {
            check(src)?;
            check(dst)?;
            let symbols = match label {
                Label::Eps => Vec::new(),
                Label::Symbol(s) => vec![s],
                Label::Word(word) => word,
            };
            let idx = self.alphabet.encode(&symbols)?;
            match idx.len() {
                0 => simple.push((src, None, dst, w)),
                1 => simple.push((src, Some(idx[0]), dst, w)),
                len => {
                    let mut from = src;
                    for (k, &a) in idx.iter().enumerate() {
                        let to = if k + 1 == len {
                            dst
                        } else {
                            n += 1;
                            n - 1
                        };
                        let weight = if k == 0 { w.clone() } else { self.spec.one() };
                        simple.push((from, Some(a), to, weight));
                        from = to;
                    }
                }
            }
        }
        let exits = self
            .finals
            .iter()
            .map(|f| f.1 + 1)
            .max()
            .unwrap_or(0)
            .max(self.exits)
            .max(1);
        let mut letters = vec![KMatrix::zeros(self.spec.clone(), n, n); self.alphabet.len()];
        let mut eps: Option<KMatrix<S>> = None;
        for (src, a, dst, w) in simple {
            match a {
                Some(a) => letters[a].accumulate(src, dst, &w),
                None => eps
                    .get_or_insert_with(|| KMatrix::zeros(self.spec.clone(), n, n))
                    .accumulate(src, dst, &w),
            }
        }
        let mut finals = KMatrix::zeros(self.spec.clone(), n, exits);
        for (state, exit, w) in self.finals {
            check(state)?;
            finals.accumulate(state, exit, &w);
        }
        WordAutomaton::new(self.spec, self.alphabet, letters, eps, finals)
    }
}

/// A regular map `p ⇸ q`: a base map `entry: p → n` into the states of an
/// automaton with `q` exits; its value at `j` is the language of state
/// `entry[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularWordMap<S: Semiring> {
    entry: Vec<usize>,
    automaton: WordAutomaton<S>,
}

impl<S: Semiring> RegularWordMap<S> {
    pub fn new(entry: Vec<usize>, automaton: WordAutomaton<S>) -> Result<Self> {
        if let Some(&bad) = entry.iter().find(|&&e| e >= automaton.states()) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                bound: automaton.states(),
            });
        }
        Ok(Self { entry, automaton })
    }

    pub fn entry(&self) -> &[usize] {
        &self.entry
    }

    pub fn automaton(&self) -> &WordAutomaton<S> {
        &self.automaton
    }

    pub fn entry_arity(&self) -> usize {
        self.entry.len()
    }

    pub fn exit_arity(&self) -> usize {
        self.automaton.exits()
    }

    fn entry_state(&self, j: usize) -> Result<usize> {
        self.entry.get(j).copied().ok_or(Error::IndexOutOfRange {
            index: j,
            bound: self.entry.len(),
        })
    }

    pub fn weight<W: AsRef<str>>(&self, j: usize, word: &[W]) -> Result<Vec<S::Elem>> {
        self.automaton.weight(self.entry_state(j)?, word)
    }

    /// Language of entry `j` on words up to `max_len` (nonzero words only).
    pub fn slice(&self, j: usize, max_len: usize) -> Result<Slice<S::Elem>> {
        self.automaton.weight_slice(self.entry_state(j)?, max_len)
    }

    /// Kleisli composition of languages, `self` first.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        compose_regular(self, other)
    }
}

/// Composite of `r1: p ⇸ k` and `r2: k ⇸ q`: both automata side by side,
/// with an internal move from every `r1`-state `x` to `r2`'s entry `j`
/// weighted by the exit weight of `x` at `j`.
pub fn compose_regular<S: Semiring>(
    r1: &RegularWordMap<S>,
    r2: &RegularWordMap<S>,
) -> Result<RegularWordMap<S>> {
    let (a1, a2) = (&r1.automaton, &r2.automaton);
    check_spec(a1.spec(), a2.spec())?;
    let a2 = a2.reorder_alphabet(a1.alphabet())?;
    if r1.exit_arity() != r2.entry_arity() {
        return Err(Error::ArityMismatch {
            exits: r1.exit_arity(),
            entries: r2.entry_arity(),
        });
    }
    let spec = a1.spec().clone();
    let (n1, n2) = (a1.states(), a2.states());
    let letters = a1
        .letters()
        .iter()
        .zip(a2.letters())
        .map(|(m1, m2)| KMatrix::block_diagonal(spec.clone(), &[m1, m2]))
        .collect::<Result<_>>()?;
    let e1 = a1
        .eps()
        .cloned()
        .unwrap_or_else(|| KMatrix::zeros(spec.clone(), n1, n1));
    let e2 = a2
        .eps()
        .cloned()
        .unwrap_or_else(|| KMatrix::zeros(spec.clone(), n2, n2));
    let mut eps = KMatrix::block_diagonal(spec.clone(), &[&e1, &e2])?;
    for x in 0..n1 {
        for (j, &target) in r2.entry.iter().enumerate() {
            eps.accumulate(x, n1 + target, a1.finals().get(x, j));
        }
    }
    let eps = (!eps.is_zero()).then_some(eps);
    let finals = KMatrix::cotuple(&[
        KMatrix::zeros(spec.clone(), n1, a2.exits()),
        a2.finals().clone(),
    ])?;
    let automaton = WordAutomaton::new(spec, a1.alphabet().clone(), letters, eps, finals)?;
    RegularWordMap::new(r1.entry.clone(), automaton)
}

/// Cotuple `[r_1, …, r_m]`: disjoint union of the automata, with entries
/// concatenated in order.
pub fn cotuple_regular<S: Semiring>(rs: &[RegularWordMap<S>]) -> Result<RegularWordMap<S>> {
    let Some(first) = rs.first() else {
        return Err(Error::DimensionMismatch {
            expected: "a nonempty sequence".into(),
            found: "an empty sequence".into(),
        });
    };
    let spec = first.automaton.spec().clone();
    let alphabet = first.automaton.alphabet().clone();
    let q = first.exit_arity();
    let mut autos = Vec::with_capacity(rs.len());
    for r in rs {
        check_spec(&spec, r.automaton.spec())?;
        if r.exit_arity() != q {
            return Err(Error::ArityMismatch {
                exits: q,
                entries: r.exit_arity(),
            });
        }
        autos.push(r.automaton.reorder_alphabet(&alphabet)?);
    }
    let letters = (0..alphabet.len())
        .map(|a| {
            let blocks: Vec<&KMatrix<S>> = autos.iter().map(|x| &x.letters()[a]).collect();
            KMatrix::block_diagonal(spec.clone(), &blocks)
        })
        .collect::<Result<_>>()?;
    let eps = if autos.iter().any(|x| x.eps().is_some()) {
        let owned: Vec<KMatrix<S>> = autos
            .iter()
            .map(|x| {
                x.eps()
                    .cloned()
                    .unwrap_or_else(|| KMatrix::zeros(spec.clone(), x.states(), x.states()))
            })
            .collect();
        let blocks: Vec<&KMatrix<S>> = owned.iter().collect();
        Some(KMatrix::block_diagonal(spec.clone(), &blocks)?)
    } else {
        None
    };
    let finals: Vec<KMatrix<S>> = autos.iter().map(|x| x.finals().clone()).collect();
    let finals = KMatrix::cotuple(&finals)?;
    let mut entry = Vec::new();
    let mut offset = 0;
    for (r, x) in rs.iter().zip(&autos) {
        entry.extend(r.entry.iter().map(|e| e + offset));
        offset += x.states();
    }
    let automaton = WordAutomaton::new(spec, alphabet, letters, eps, finals)?;
    RegularWordMap::new(entry, automaton)
}

/// The unit `q ⇸ q`: `q` states, no transitions, identity exits. Entry `i`
/// accepts exactly the empty word, at exit `i`.
pub fn unit_regular<S: Semiring>(spec: S, alphabet: Alphabet, q: usize) -> RegularWordMap<S> {
    let letters = vec![KMatrix::zeros(spec.clone(), q, q); alphabet.len()];
    let finals = KMatrix::identity(spec.clone(), q);
    let automaton = WordAutomaton::new(spec, alphabet, letters, None, finals)
        .expect("unit automaton is well formed");
    RegularWordMap {
        entry: (0..q).collect(),
        automaton,
    }
}
