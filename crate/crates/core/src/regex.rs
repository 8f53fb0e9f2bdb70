//! Regular expressions over a semiring, compiled to regular word maps.
//!
//! Concrete syntax, loosest binding first:
//!
//! ```text
//! expr    := comp ( '|' comp )*
//! comp    := postfix ( '.' postfix )*
//! postfix := atom '*'*
//! atom    := '0' | '1' | symbol [ '{' weight '}' ] | '(' expr ')'
//! symbol  := [A-Za-z_][A-Za-z0-9_]*
//! ```

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::Semiring;
use crate::alphabet::{Alphabet, Word};
use crate::error::{Error, Result};
use crate::kleisli::KMatrix;
use crate::word::{compose_regular, cotuple_regular, unit_regular, RegularWordMap, WordAutomaton};

#[derive(Debug, Clone, PartialEq)]
pub enum RegExpr<E> {
    /// A single symbol with a weight.
    Atom(String, E),
    /// The empty word.
    Unit,
    /// The empty language.
    Zero,
    Union(Box<RegExpr<E>>, Box<RegExpr<E>>),
    Comp(Box<RegExpr<E>>, Box<RegExpr<E>>),
    Star(Box<RegExpr<E>>),
}

impl<E> RegExpr<E> {
    pub fn union(a: Self, b: Self) -> Self {
        RegExpr::Union(Box::new(a), Box::new(b))
    }

    pub fn comp(a: Self, b: Self) -> Self {
        RegExpr::Comp(Box::new(a), Box::new(b))
    }

    pub fn star(a: Self) -> Self {
        RegExpr::Star(Box::new(a))
    }

    pub fn depth(&self) -> usize {
        match self {
            RegExpr::Atom(..) | RegExpr::Unit | RegExpr::Zero => 0,
            RegExpr::Union(a, b) | RegExpr::Comp(a, b) => 1 + a.depth().max(b.depth()),
            RegExpr::Star(a) => 1 + a.depth(),
        }
    }

    /// Symbols in order of first occurrence.
    pub fn symbols(&self) -> Vec<String> {
        fn go<E>(e: &RegExpr<E>, out: &mut Vec<String>) {
            match e {
                RegExpr::Atom(s, _) => {
                    if !out.contains(s) {
                        out.push(s.clone())
                    }
                }
                RegExpr::Unit | RegExpr::Zero => {}
                RegExpr::Union(a, b) | RegExpr::Comp(a, b) => {
                    go(a, out);
                    go(b, out);
                }
                RegExpr::Star(a) => go(a, out),
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }

    /// Renders with the given weight formatter; weights equal to `one` are
    /// omitted.
    pub fn display<'a, S>(&'a self, spec: &'a S) -> impl fmt::Display + 'a
    where
        S: Semiring<Elem = E>,
    {
        Shown { e: self, spec }
    }
}

struct Shown<'a, S: Semiring> {
    e: &'a RegExpr<S::Elem>,
    spec: &'a S,
}

impl<S: Semiring> Shown<'_, S> {
    fn write(&self, e: &RegExpr<S::Elem>, prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (own, paren) = match e {
            RegExpr::Union(..) => (0, prec > 0),
            RegExpr::Comp(..) => (1, prec > 1),
            _ => (2, false),
        };
        if paren {
            write!(f, "(")?;
        }
        match e {
            RegExpr::Atom(s, w) if *w == self.spec.one() => write!(f, "{s}")?,
            RegExpr::Atom(s, w) => write!(f, "{s}{{{}}}", self.spec.format_elem(w))?,
            RegExpr::Unit => write!(f, "1")?,
            RegExpr::Zero => write!(f, "0")?,
            RegExpr::Union(a, b) => {
                self.write(a, own, f)?;
                write!(f, "|")?;
                self.write(b, own + 1, f)?;
            }
            RegExpr::Comp(a, b) => {
                self.write(a, own, f)?;
                write!(f, ".")?;
                self.write(b, own + 1, f)?;
            }
            RegExpr::Star(a) => {
                match **a {
                    RegExpr::Atom(..) | RegExpr::Unit | RegExpr::Zero | RegExpr::Star(_) => {
                        self.write(a, 2, f)?
                    }
                    _ => {
                        write!(f, "(")?;
                        self.write(a, 0, f)?;
                        write!(f, ")")?;
                    }
                }
                write!(f, "*")?;
            }
        }
        if paren {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl<S: Semiring> fmt::Display for Shown<'_, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(self.e, 0, f)
    }
}

struct Parser<'a, S> {
    src: &'a str,
    pos: usize,
    spec: &'a S,
}

impl<S: Semiring> Parser<'_, S> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: 1,
            column: self.src[..self.pos].chars().count() + 1,
            message: message.into(),
        }
    }

    fn peek(&mut self) -> Option<char> {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RegExpr<S::Elem>> {
        let mut e = self.comp()?;
        while self.eat('|') {
            e = RegExpr::union(e, self.comp()?);
        }
        Ok(e)
    }

    fn comp(&mut self) -> Result<RegExpr<S::Elem>> {
        let mut e = self.postfix()?;
        while self.eat('.') {
            e = RegExpr::comp(e, self.postfix()?);
        }
        Ok(e)
    }

    fn postfix(&mut self) -> Result<RegExpr<S::Elem>> {
        let mut e = self.atom()?;
        while self.eat('*') {
            e = RegExpr::star(e);
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<RegExpr<S::Elem>> {
        match self.peek() {
            None => Err(self.err("unexpected end of expression")),
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            Some('0') => {
                self.pos += 1;
                Ok(RegExpr::Zero)
            }
            Some('1') => {
                self.pos += 1;
                Ok(RegExpr::Unit)
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let rest = &self.src[self.pos..];
                let len = rest
                    .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
                    .unwrap_or(rest.len());
                let sym = rest[..len].to_owned();
                self.pos += len;
                let weight = if self.src[self.pos..].starts_with('{') {
                    self.pos += 1;
                    let rest = &self.src[self.pos..];
                    let Some(end) = rest.find('}') else {
                        return Err(self.err("unterminated weight"));
                    };
                    let text = rest[..end].trim();
                    let w = self.spec.parse_elem(text).ok_or_else(|| {
                        self.err(format!("bad weight {text:?} for {}", self.spec.name()))
                    })?;
                    self.pos += end + 1;
                    w
                } else {
                    self.spec.one()
                };
                Ok(RegExpr::Atom(sym, weight))
            }
            Some(c) => Err(self.err(format!("unexpected {c:?}"))),
        }
    }
}

/// Parses the concrete syntax; weights are read in `spec`.
pub fn parse_regex<S: Semiring>(text: &str, spec: &S) -> Result<RegExpr<S::Elem>> {
    let mut p = Parser {
        src: text,
        pos: 0,
        spec,
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

/// `a` enlarged by `extra` fresh states with no edges and zero exits.
fn grow<S: Semiring>(
    a: &WordAutomaton<S>,
    extra: usize,
) -> (Vec<KMatrix<S>>, KMatrix<S>, KMatrix<S>) {
    let spec = a.spec().clone();
    let n = a.states();
    let m = n + extra;
    let embed = |src: &KMatrix<S>, cols: usize| {
        KMatrix::from_fn(spec.clone(), m, cols, |i, j| {
            if i < n && j < src.cols() {
                src.get(i, j).clone()
            } else {
                spec.zero()
            }
        })
    };
    let letters = a.letters().iter().map(|l| embed(l, m)).collect();
    let eps = match a.eps() {
        Some(e) => embed(e, m),
        None => KMatrix::zeros(spec.clone(), m, m),
    };
    let finals = embed(a.finals(), a.exits());
    (letters, eps, finals)
}

fn assemble<S: Semiring>(
    a: &WordAutomaton<S>,
    letters: Vec<KMatrix<S>>,
    eps: KMatrix<S>,
    finals: KMatrix<S>,
    entry: usize,
) -> Result<RegularWordMap<S>> {
    let eps = (!eps.is_zero()).then_some(eps);
    let automaton =
        WordAutomaton::new(a.spec().clone(), a.alphabet().clone(), letters, eps, finals)?;
    RegularWordMap::new(vec![entry], automaton)
}

/// Compiles `e` to a one-entry, one-exit regular map.
pub fn compile<S: Semiring>(
    e: &RegExpr<S::Elem>,
    spec: &S,
    alphabet: &Alphabet,
) -> Result<RegularWordMap<S>> {
    match e {
        RegExpr::Atom(sym, w) => {
            let a = alphabet.index_of(sym)?;
            let mut letters = vec![KMatrix::zeros(spec.clone(), 2, 2); alphabet.len()];
            letters[a].set(0, 1, w.clone());
            let mut finals = KMatrix::zeros(spec.clone(), 2, 1);
            finals.set(1, 0, spec.one());
            let automaton =
                WordAutomaton::new(spec.clone(), alphabet.clone(), letters, None, finals)?;
            RegularWordMap::new(vec![0], automaton)
        }
        RegExpr::Unit => Ok(unit_regular(spec.clone(), alphabet.clone(), 1)),
        RegExpr::Zero => {
            let letters = vec![KMatrix::zeros(spec.clone(), 1, 1); alphabet.len()];
            let finals = KMatrix::zeros(spec.clone(), 1, 1);
            let automaton =
                WordAutomaton::new(spec.clone(), alphabet.clone(), letters, None, finals)?;
            RegularWordMap::new(vec![0], automaton)
        }
        RegExpr::Union(x, y) => {
            let both =
                cotuple_regular(&[compile(x, spec, alphabet)?, compile(y, spec, alphabet)?])?;
            let a = both.automaton();
            let s = a.states();
            let (letters, mut eps, finals) = grow(a, 1);
            for &target in both.entry() {
                eps.accumulate(s, target, &spec.one());
            }
            assemble(a, letters, eps, finals, s)
        }
        RegExpr::Comp(x, y) => {
            compose_regular(&compile(x, spec, alphabet)?, &compile(y, spec, alphabet)?)
        }
        RegExpr::Star(x) => {
            let inner = compile(x, spec, alphabet)?;
            let a = inner.automaton();
            let s = a.states();
            let (letters, mut eps, old_finals) = grow(a, 1);
            eps.accumulate(s, inner.entry()[0], &spec.one());
            for q in 0..s {
                eps.accumulate(q, s, old_finals.get(q, 0));
            }
            let mut finals = KMatrix::zeros(spec.clone(), s + 1, 1);
            finals.set(s, 0, spec.one());
            let r = assemble(a, letters, eps, finals, s)?;
            if !spec.flags().idempotent_plus && r.automaton().eps_star().is_err() {
                return Err(Error::NonIdempotentStar(e.display(spec).to_string()));
            }
            Ok(r)
        }
    }
}

/// Word-indexed weights with zero entries omitted.
pub type Denotation<E> = BTreeMap<Word, E>;

fn add_into<S: Semiring>(spec: &S, out: &mut Denotation<S::Elem>, w: Word, x: S::Elem) {
    let slot = out.entry(w).or_insert_with(|| spec.zero());
    *slot = spec.plus(slot, &x);
}

fn concat<S: Semiring>(
    spec: &S,
    l: &Denotation<S::Elem>,
    r: &Denotation<S::Elem>,
    max_len: usize,
) -> Denotation<S::Elem> {
    let mut out = BTreeMap::new();
    for (u, x) in l {
        for (v, y) in r {
            if u.len() + v.len() <= max_len {
                let uv: Word = u.iter().chain(v).cloned().collect();
                add_into(spec, &mut out, uv, spec.times(x, y));
            }
        }
    }
    out
}

/// Direct denotation on words of length at most `max_len`. A star is the
/// sum of the powers `0..=max_len`.
pub fn denote_slice<S: Semiring>(
    e: &RegExpr<S::Elem>,
    spec: &S,
    max_len: usize,
) -> Denotation<S::Elem> {
    let mut out = denote_raw(e, spec, max_len);
    out.retain(|_, x| !spec.is_zero(x));
    out
}

fn denote_raw<S: Semiring>(e: &RegExpr<S::Elem>, spec: &S, max_len: usize) -> Denotation<S::Elem> {
    match e {
        RegExpr::Atom(s, w) => {
            let mut out = BTreeMap::new();
            if max_len >= 1 {
                out.insert(vec![s.clone()], w.clone());
            }
            out
        }
        RegExpr::Unit => BTreeMap::from([(Vec::new(), spec.one())]),
        RegExpr::Zero => BTreeMap::new(),
        RegExpr::Union(a, b) => {
            let mut out = denote_raw(a, spec, max_len);
            for (w, x) in denote_raw(b, spec, max_len) {
                add_into(spec, &mut out, w, x);
            }
            out
        }
        RegExpr::Comp(a, b) => concat(
            spec,
            &denote_raw(a, spec, max_len),
            &denote_raw(b, spec, max_len),
            max_len,
        ),
        RegExpr::Star(a) => {
            let base = denote_raw(a, spec, max_len);
            let mut power: Denotation<S::Elem> = BTreeMap::from([(Vec::new(), spec.one())]);
            let mut out = power.clone();
            for _ in 0..max_len {
                power = concat(spec, &power, &base, max_len);
                for (w, x) in &power {
                    add_into(spec, &mut out, w.clone(), x.clone());
                }
            }
            out
        }
    }
}

/// Language slice of a compiled map in the same shape as [`denote_slice`].
pub fn compiled_slice<S: Semiring>(
    r: &RegularWordMap<S>,
    max_len: usize,
) -> Result<Denotation<S::Elem>> {
    Ok(r.slice(0, max_len)?
        .into_iter()
        .map(|(w, mut v)| (w, v.swap_remove(0)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Boolean, NaturalSat};
    use crate::alphabet::parse_word;

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    fn keys(d: &Denotation<bool>) -> Vec<String> {
        d.keys().map(|w| crate::alphabet::format_word(w)).collect()
    }

    fn both(text: &str, max_len: usize) -> (Denotation<bool>, Denotation<bool>) {
        let e = parse_regex(text, &Boolean).unwrap();
        let c = compiled_slice(&compile(&e, &Boolean, &ab()).unwrap(), max_len).unwrap();
        (c, denote_slice(&e, &Boolean, max_len))
    }

    #[test]
    fn parsing_and_precedence() {
        let e = parse_regex("a|b.a*", &Boolean).unwrap();
        let expected = RegExpr::union(
            RegExpr::Atom("a".into(), true),
            RegExpr::comp(
                RegExpr::Atom("b".into(), true),
                RegExpr::star(RegExpr::Atom("a".into(), true)),
            ),
        );
        assert_eq!(e, expected);
        for text in ["a|b.a*", "(a|b).a", "(a.b)*", "1|0", "a**"] {
            let e = parse_regex(text, &Boolean).unwrap();
            assert_eq!(e.display(&Boolean).to_string(), text);
        }
        let n = NaturalSat::<u64>::new();
        assert_eq!(
            parse_regex("a{2}", &n).unwrap(),
            RegExpr::Atom("a".into(), 2)
        );
        for bad in ["", "a|", "(a", "a)", "a{x}", "a{2", "#"] {
            assert!(
                matches!(parse_regex(bad, &n), Err(Error::Parse { .. })),
                "{bad}"
            );
        }
    }

    #[test]
    fn literal_concatenation() {
        let (c, d) = both("a.b", 3);
        assert_eq!(keys(&c), ["ab"]);
        assert_eq!(c, d);
    }

    #[test]
    fn star_of_literal() {
        let (c, d) = both("a*", 2);
        assert_eq!(keys(&c), ["ε", "a", "aa"]);
        assert_eq!(c, d);
    }

    #[test]
    fn union_with_star() {
        let (c, d) = both("a|b*", 1);
        assert_eq!(keys(&c), ["ε", "a", "b"]);
        assert_eq!(c, d);
    }

    #[test]
    fn trivial_denotations() {
        assert!(denote_slice(&RegExpr::<bool>::Zero, &Boolean, 3).is_empty());
        let u = denote_slice(&RegExpr::<bool>::Unit, &Boolean, 3);
        assert_eq!(keys(&u), ["ε"]);
        let (c, _) = both("0", 3);
        assert!(c.is_empty());
    }

    #[test]
    fn weighted_compilation() {
        let n = NaturalSat::<u64>::new();
        let e = parse_regex("a{2}.b{3}|a{5}.b", &n).unwrap();
        let r = compile(&e, &n, &ab()).unwrap();
        assert_eq!(r.weight(0, &parse_word("ab")).unwrap(), [11]);
        assert_eq!(compiled_slice(&r, 3).unwrap(), denote_slice(&e, &n, 3));
        let s = parse_regex("a{2}*", &n).unwrap();
        let r = compile(&s, &n, &ab()).unwrap();
        assert_eq!(compiled_slice(&r, 4).unwrap(), denote_slice(&s, &n, 4));
    }

    #[test]
    fn divergent_star_is_rejected() {
        let r = crate::algebra::ExtNonnegReal::<f64>::new();
        let e = parse_regex("(1|a)*", &r).unwrap();
        assert!(matches!(
            compile(&e, &r, &ab()),
            Err(Error::NonIdempotentStar(_))
        ));
        // over the booleans the same star is fine
        let (c, d) = both("(1|a)*", 3);
        assert_eq!(c, d);
    }

    #[test]
    fn unknown_symbol_in_compile() {
        let e = parse_regex("c", &Boolean).unwrap();
        assert_eq!(
            compile(&e, &Boolean, &ab()).unwrap_err(),
            Error::UnknownSymbol("c".into())
        );
        assert_eq!(e.symbols(), ["c"]);
    }
}
