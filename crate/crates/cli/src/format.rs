//! The line-oriented automaton file format.
//!
//! ```text
//! kind word|tree
//! semiring boolean|natural|tropical|real|unit-interval|chain:<k>[:lukasiewicz]
//! alphabet <sym> <sym> ...
//! states <n>
//! edge <src> <sym|@eps|"word"> <dst> [<weight>]       # word automata
//! edge <src> <sym> <left> <right> [<weight>]          # tree automata
//! final <state> [<exit-index>] [<weight>]
//! entry <name> <state>
//! label <state> <display>
//! ```
//!
//! Weights default to the semiring's one. Everything after `#` outside a
//! quoted word is a comment.

use std::fmt::{self, Write as _};

use kleisli_automata::algebra::ChainProduct;
use kleisli_automata::word::Label;
use kleisli_automata::{
    parse_word, Alphabet, Semiring, TreeAutomaton, TreeAutomatonBuilder, WordAutomaton,
    WordAutomatonBuilder,
};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Word,
    Tree,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Word => "word",
            Kind::Tree => "tree",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SemiringName {
    Boolean,
    Natural,
    Tropical,
    Real,
    UnitInterval,
    Chain(u32, ChainProduct),
}

impl SemiringName {
    pub fn parse(token: &str) -> Option<Self> {
        Some(match token {
            "boolean" => Self::Boolean,
            "natural" => Self::Natural,
            "tropical" => Self::Tropical,
            "real" => Self::Real,
            "unit-interval" => Self::UnitInterval,
            _ => {
                let rest = token.strip_prefix("chain:")?;
                let (k, product) = match rest.split_once(':') {
                    None => (rest, ChainProduct::Min),
                    Some((k, "lukasiewicz")) => (k, ChainProduct::Lukasiewicz),
                    Some(_) => return None,
                };
                let k: u32 = k.parse().ok().filter(|&k| k >= 1)?;
                Self::Chain(k, product)
            }
        })
    }

    pub fn is_boolean(self) -> bool {
        self == Self::Boolean
    }
}

impl fmt::Display for SemiringName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Boolean => f.write_str("boolean"),
            Self::Natural => f.write_str("natural"),
            Self::Tropical => f.write_str("tropical"),
            Self::Real => f.write_str("real"),
            Self::UnitInterval => f.write_str("unit-interval"),
            Self::Chain(k, ChainProduct::Min) => write!(f, "chain:{k}"),
            Self::Chain(k, ChainProduct::Lukasiewicz) => write!(f, "chain:{k}:lukasiewicz"),
        }
    }
}

/// Runs `$body` with `$spec` bound to the semiring value named by `$name`.
#[macro_export]
macro_rules! with_semiring {
    ($name:expr, $spec:ident => $body:expr) => {{
        use kleisli_automata as ka;
        match $name {
            $crate::format::SemiringName::Boolean => {
                let $spec = ka::Boolean;
                $body
            }
            $crate::format::SemiringName::Natural => {
                let $spec = ka::Natural::new();
                $body
            }
            $crate::format::SemiringName::Tropical => {
                let $spec = ka::Tropical::new();
                $body
            }
            $crate::format::SemiringName::Real => {
                let $spec = ka::Real::new();
                $body
            }
            $crate::format::SemiringName::UnitInterval => {
                let $spec = ka::UnitInterval::new();
                $body
            }
            $crate::format::SemiringName::Chain(k, p) => {
                let $spec = ka::ChainQuantale::with_product(k, p);
                $body
            }
        }
    }};
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EdgeLabel {
    Symbol(String),
    Eps,
    Word(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Edge {
    Word {
        src: usize,
        label: EdgeLabel,
        dst: usize,
        weight: Option<String>,
    },
    Tree {
        src: usize,
        symbol: String,
        left: usize,
        right: usize,
        weight: Option<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Final {
    pub state: usize,
    pub exit: usize,
    pub weight: Option<String>,
}

/// A parsed file. Weights stay textual until the semiring is instantiated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutomatonFile {
    pub kind: Kind,
    pub semiring: SemiringName,
    pub alphabet: Vec<String>,
    pub states: usize,
    pub edges: Vec<(usize, Edge)>,
    pub finals: Vec<(usize, Final)>,
    pub entries: Vec<(String, usize)>,
    pub labels: Vec<(usize, String)>,
}

fn err(line: usize, message: impl Into<String>) -> CliError {
    CliError::Parse {
        line,
        message: message.into(),
    }
}

/// Splits a line into tokens; `"…"` groups a quoted word, `#` starts a comment.
fn tokenize(line: &str, no: usize) -> Result<Vec<(String, bool)>, CliError> {
    let mut out = Vec::new();
    let mut chars = line.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c == '#' {
            break;
        } else if c == '"' {
            chars.next();
            let mut tok = String::new();
            loop {
                match chars.next() {
                    Some('"') => break,
                    Some(c) => tok.push(c),
                    None => return Err(err(no, "unterminated quoted word")),
                }
            }
            out.push((tok, true));
        } else {
            let mut tok = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_whitespace() || c == '#' || c == '"' {
                    break;
                }
                tok.push(c);
                chars.next();
            }
            out.push((tok, false));
        }
    }
    Ok(out)
}

fn index(tok: &str, no: usize, what: &str) -> Result<usize, CliError> {
    tok.parse()
        .map_err(|_| err(no, format!("expected {what}, found {tok:?}")))
}

pub fn parse_automaton(text: &str) -> Result<AutomatonFile, CliError> {
    let mut kind = None;
    let mut semiring = None;
    let mut alphabet = None;
    let mut states = None;
    let mut edges = Vec::new();
    let mut finals = Vec::new();
    let mut entries = Vec::new();
    let mut labels = Vec::new();
    // (line, state) of entry and label directives, checked once `states` is known
    let mut refs = Vec::new();

    for (i, line) in text.lines().enumerate() {
        let no = i + 1;
        let toks = tokenize(line, no)?;
        let Some(((head, quoted), args)) = toks.split_first() else {
            continue;
        };
        if *quoted {
            return Err(err(no, "expected a directive"));
        }
        let plain = |k: usize| -> Result<&str, CliError> {
            match args.get(k) {
                Some((t, false)) => Ok(t.as_str()),
                Some((_, true)) => Err(err(no, "unexpected quoted word")),
                None => Err(err(no, format!("{head}: missing argument"))),
            }
        };
        let arity = |lo: usize, hi: usize| -> Result<(), CliError> {
            if args.len() < lo || args.len() > hi {
                Err(err(
                    no,
                    format!(
                        "{head}: expected {lo}..={hi} arguments, found {}",
                        args.len()
                    ),
                ))
            } else {
                Ok(())
            }
        };
        let once = |seen: bool| -> Result<(), CliError> {
            if seen {
                Err(err(no, format!("duplicate {head} directive")))
            } else {
                Ok(())
            }
        };
        match head.as_str() {
            "kind" => {
                arity(1, 1)?;
                once(kind.is_some())?;
                kind = Some(match plain(0)? {
                    "word" => Kind::Word,
                    "tree" => Kind::Tree,
                    other => return Err(err(no, format!("unknown kind {other:?}"))),
                });
            }
            "semiring" => {
                arity(1, 1)?;
                once(semiring.is_some())?;
                let tok = plain(0)?;
                semiring = Some(
                    SemiringName::parse(tok)
                        .ok_or_else(|| err(no, format!("unknown semiring {tok:?}")))?,
                );
            }
            "alphabet" => {
                once(alphabet.is_some())?;
                let syms = (0..args.len())
                    .map(|k| plain(k).map(str::to_owned))
                    .collect::<Result<Vec<_>, _>>()?;
                Alphabet::new(syms.clone()).map_err(|e| err(no, e.to_string()))?;
                if syms.iter().any(|s| s.starts_with('@')) {
                    return Err(err(no, "symbols may not start with '@'"));
                }
                alphabet = Some(syms);
            }
            "states" => {
                arity(1, 1)?;
                once(states.is_some())?;
                states = Some(index(plain(0)?, no, "a state count")?);
            }
            "edge" => {
                let k = kind.ok_or_else(|| err(no, "edge before kind"))?;
                match k {
                    Kind::Word => {
                        arity(3, 4)?;
                        let label = match &args[1] {
                            (w, true) => {
                                let w = parse_word(w);
                                if w.is_empty() {
                                    EdgeLabel::Eps
                                } else if w.len() == 1 {
                                    EdgeLabel::Symbol(w[0].clone())
                                } else {
                                    EdgeLabel::Word(w)
                                }
                            }
                            (s, false) if s == "@eps" => EdgeLabel::Eps,
                            (s, false) if s.starts_with('@') => {
                                return Err(err(no, format!("unknown label {s:?}")))
                            }
                            (s, false) => EdgeLabel::Symbol(s.clone()),
                        };
                        edges.push((
                            no,
                            Edge::Word {
                                src: index(plain(0)?, no, "a state")?,
                                label,
                                dst: index(plain(2)?, no, "a state")?,
                                weight: args
                                    .get(3)
                                    .map(|_| plain(3).map(str::to_owned))
                                    .transpose()?,
                            },
                        ));
                    }
                    Kind::Tree => {
                        arity(4, 5)?;
                        edges.push((
                            no,
                            Edge::Tree {
                                src: index(plain(0)?, no, "a state")?,
                                symbol: plain(1)?.to_owned(),
                                left: index(plain(2)?, no, "a state")?,
                                right: index(plain(3)?, no, "a state")?,
                                weight: args
                                    .get(4)
                                    .map(|_| plain(4).map(str::to_owned))
                                    .transpose()?,
                            },
                        ));
                    }
                }
            }
            "final" => {
                arity(1, 3)?;
                finals.push((
                    no,
                    Final {
                        state: index(plain(0)?, no, "a state")?,
                        exit: args
                            .get(1)
                            .map(|_| plain(1).and_then(|t| index(t, no, "an exit index")))
                            .transpose()?
                            .unwrap_or(0),
                        weight: args
                            .get(2)
                            .map(|_| plain(2).map(str::to_owned))
                            .transpose()?,
                    },
                ));
            }
            "entry" => {
                arity(2, 2)?;
                let name = plain(0)?.to_owned();
                if entries.iter().any(|(n, _)| *n == name) {
                    return Err(err(no, format!("duplicate entry {name:?}")));
                }
                let state = index(plain(1)?, no, "a state")?;
                refs.push((no, state));
                entries.push((name, state));
            }
            "label" => {
                arity(2, 2)?;
                let state = index(plain(0)?, no, "a state")?;
                let display = plain(1)?.to_owned();
                if labels.iter().any(|(s, d)| *s == state || *d == display) {
                    return Err(err(
                        no,
                        format!("duplicate label for state {state} or name {display:?}"),
                    ));
                }
                refs.push((no, state));
                labels.push((state, display));
            }
            other => return Err(err(no, format!("unknown directive {other:?}"))),
        }
    }

    let missing = |what: &str| {
        err(
            text.lines().count().max(1),
            format!("missing {what} directive"),
        )
    };
    let file = AutomatonFile {
        kind: kind.ok_or_else(|| missing("kind"))?,
        semiring: semiring.ok_or_else(|| missing("semiring"))?,
        alphabet: alphabet.ok_or_else(|| missing("alphabet"))?,
        states: states.ok_or_else(|| missing("states"))?,
        edges,
        finals,
        entries,
        labels,
    };
    if let Some((no, q)) = refs.into_iter().find(|&(_, q)| q >= file.states) {
        return Err(err(
            no,
            format!("state {q} out of range (states {})", file.states),
        ));
    }
    file.validate()?;
    Ok(file)
}

/// The exit count is the largest `final` exit index plus one, so a trailing
/// all-zero exit column is kept with an explicit zero weight.
fn pad_exits<S: Semiring>(spec: &S, finals: &mut Vec<(usize, Final)>, exits: usize) {
    if exits > 1 && !finals.iter().any(|(_, f)| f.exit == exits - 1) {
        finals.push((
            0,
            Final {
                state: 0,
                exit: exits - 1,
                weight: Some(spec.format_elem(&spec.zero())),
            },
        ));
    }
}

impl AutomatonFile {
    /// Index bounds, symbols, and weights in the named semiring.
    fn validate(&self) -> Result<(), CliError> {
        let n = self.states;
        let state = |no: usize, q: usize| {
            if q < n {
                Ok(())
            } else {
                Err(err(no, format!("state {q} out of range (states {n})")))
            }
        };
        let symbol = |no: usize, s: &str| {
            if self.alphabet.iter().any(|a| a == s) {
                Ok(())
            } else {
                Err(err(no, format!("symbol {s:?} not in the alphabet")))
            }
        };
        let sr = self.semiring;
        let weight = |no: usize, w: &Option<String>| -> Result<(), CliError> {
            match w {
                Some(w) if !with_semiring!(sr, s => s.parse_elem(w).is_some()) => {
                    Err(err(no, format!("{w:?} is not a {sr} weight")))
                }
                _ => Ok(()),
            }
        };
        for (no, e) in &self.edges {
            match e {
                Edge::Word {
                    src,
                    label,
                    dst,
                    weight: w,
                } => {
                    state(*no, *src)?;
                    state(*no, *dst)?;
                    match label {
                        EdgeLabel::Symbol(s) => symbol(*no, s)?,
                        EdgeLabel::Word(ws) => ws.iter().try_for_each(|s| symbol(*no, s))?,
                        EdgeLabel::Eps => {}
                    }
                    weight(*no, w)?;
                }
                Edge::Tree {
                    src,
                    symbol: s,
                    left,
                    right,
                    weight: w,
                } => {
                    state(*no, *src)?;
                    state(*no, *left)?;
                    state(*no, *right)?;
                    symbol(*no, s)?;
                    weight(*no, w)?;
                }
            }
        }
        for (no, f) in &self.finals {
            state(*no, f.state)?;
            weight(*no, &f.weight)?;
        }
        Ok(())
    }

    pub fn exits(&self) -> usize {
        self.finals
            .iter()
            .map(|(_, f)| f.exit + 1)
            .max()
            .unwrap_or(1)
    }

    /// Display names, falling back to `q<i>`.
    pub fn state_labels(&self) -> Vec<String> {
        (0..self.states)
            .map(|q| {
                self.labels
                    .iter()
                    .find(|(s, _)| *s == q)
                    .map_or_else(|| format!("q{q}"), |(_, l)| l.clone())
            })
            .collect()
    }

    /// A state given by display label, entry name, or index, in that order.
    pub fn resolve_state(&self, text: &str) -> Result<usize, CliError> {
        if let Some((q, _)) = self.labels.iter().find(|(_, l)| l == text) {
            return Ok(*q);
        }
        if let Some((_, q)) = self.entries.iter().find(|(n, _)| n == text) {
            return Ok(*q);
        }
        match text.parse::<usize>() {
            Ok(q) if q < self.states => Ok(q),
            _ => Err(CliError::Usage(format!("unknown state {text:?}"))),
        }
    }

    /// Entry states in declaration order; state 0 when none are declared.
    pub fn entry_states(&self) -> Vec<usize> {
        if self.entries.is_empty() {
            vec![0]
        } else {
            self.entries.iter().map(|(_, q)| *q).collect()
        }
    }

    fn alphabet_value(&self) -> Result<Alphabet, CliError> {
        Ok(Alphabet::new(self.alphabet.clone())?)
    }

    fn weight<S: Semiring>(spec: &S, w: &Option<String>) -> S::Elem {
        w.as_ref()
            .and_then(|w| spec.parse_elem(w))
            .unwrap_or_else(|| spec.one())
    }

    pub fn build_word<S: Semiring>(&self, spec: &S) -> Result<WordAutomaton<S>, CliError> {
        if self.kind != Kind::Word {
            return Err(CliError::Usage("expected a word automaton".into()));
        }
        let mut b = WordAutomatonBuilder::new(spec.clone(), self.alphabet_value()?, self.states)
            .exits(self.exits());
        for (_, e) in &self.edges {
            if let Edge::Word {
                src,
                label,
                dst,
                weight,
            } = e
            {
                let label = match label {
                    EdgeLabel::Symbol(s) => Label::Symbol(s.clone()),
                    EdgeLabel::Eps => Label::Eps,
                    EdgeLabel::Word(w) => Label::Word(w.clone()),
                };
                b = b.edge(*src, label, *dst, Self::weight(spec, weight));
            }
        }
        for (_, f) in &self.finals {
            b = b.final_weight(f.state, f.exit, Self::weight(spec, &f.weight));
        }
        Ok(b.build()?)
    }

    pub fn build_tree<S: Semiring>(&self, spec: &S) -> Result<TreeAutomaton<S>, CliError> {
        if self.kind != Kind::Tree {
            return Err(CliError::Usage("expected a tree automaton".into()));
        }
        let mut b = TreeAutomatonBuilder::new(spec.clone(), self.alphabet_value()?, self.states)
            .exits(self.exits());
        for (_, e) in &self.edges {
            if let Edge::Tree {
                src,
                symbol,
                left,
                right,
                weight,
            } = e
            {
                b = b.edge(*src, symbol, *left, *right, Self::weight(spec, weight));
            }
        }
        for (_, f) in &self.finals {
            b = b.final_weight(f.state, f.exit, Self::weight(spec, &f.weight));
        }
        Ok(b.build()?)
    }

    /// The file describing `a`: one edge per nonzero matrix entry.
    pub fn from_word<S: Semiring>(
        semiring: SemiringName,
        a: &WordAutomaton<S>,
        entries: Vec<(String, usize)>,
        labels: Vec<(usize, String)>,
    ) -> Self {
        let spec = a.spec();
        let w = |x: &S::Elem| (*x != spec.one()).then(|| spec.format_elem(x));
        let mut edges = Vec::new();
        let n = a.states();
        let mut push = |label: EdgeLabel, m: &kleisli_automata::KMatrix<S>| {
            for src in 0..n {
                for dst in 0..n {
                    let x = m.get(src, dst);
                    if !spec.is_zero(x) {
                        edges.push((
                            0,
                            Edge::Word {
                                src,
                                label: label.clone(),
                                dst,
                                weight: w(x),
                            },
                        ));
                    }
                }
            }
        };
        for (sym, m) in a.alphabet().symbols().iter().zip(a.letters()) {
            push(EdgeLabel::Symbol(sym.clone()), m);
        }
        if let Some(e) = a.eps() {
            push(EdgeLabel::Eps, e);
        }
        let mut finals = Vec::new();
        for state in 0..n {
            for exit in 0..a.exits() {
                let x = a.finals().get(state, exit);
                if !spec.is_zero(x) {
                    finals.push((
                        0,
                        Final {
                            state,
                            exit,
                            weight: w(x),
                        },
                    ));
                }
            }
        }
        pad_exits(spec, &mut finals, a.exits());
        edges.sort_by_key(|(_, e)| match e {
            Edge::Word { src, dst, .. } => (*src, *dst),
            Edge::Tree { src, left, .. } => (*src, *left),
        });
        Self {
            kind: Kind::Word,
            semiring,
            alphabet: a.alphabet().symbols().to_vec(),
            states: n,
            edges,
            finals,
            entries,
            labels,
        }
    }

    /// The file describing `a`: one edge per nonzero transition.
    pub fn from_tree<S: Semiring>(
        semiring: SemiringName,
        a: &TreeAutomaton<S>,
        labels: Vec<(usize, String)>,
    ) -> Self {
        let spec = a.spec();
        let n = a.states();
        let w = |x: &S::Elem| (*x != spec.one()).then(|| spec.format_elem(x));
        let mut edges = Vec::new();
        for src in 0..n {
            for (symbol, d) in a.alphabet().symbols().iter().zip(a.deltas()) {
                for left in 0..n {
                    for right in 0..n {
                        let x = d.get(src, left * n + right);
                        if !spec.is_zero(x) {
                            edges.push((
                                0,
                                Edge::Tree {
                                    src,
                                    symbol: symbol.clone(),
                                    left,
                                    right,
                                    weight: w(x),
                                },
                            ));
                        }
                    }
                }
            }
        }
        let mut finals = Vec::new();
        for state in 0..n {
            for exit in 0..a.exits() {
                let x = a.finals().get(state, exit);
                if !spec.is_zero(x) {
                    finals.push((
                        0,
                        Final {
                            state,
                            exit,
                            weight: w(x),
                        },
                    ));
                }
            }
        }
        pad_exits(spec, &mut finals, a.exits());
        Self {
            kind: Kind::Tree,
            semiring,
            alphabet: a.alphabet().symbols().to_vec(),
            states: n,
            edges,
            finals,
            entries: Vec::new(),
            labels,
        }
    }

    /// Canonical text: header directives, labels, entries, edges, finals.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "kind {}", self.kind);
        let _ = writeln!(out, "semiring {}", self.semiring);
        let _ = writeln!(out, "alphabet {}", self.alphabet.join(" "));
        let _ = writeln!(out, "states {}", self.states);
        for (q, l) in &self.labels {
            let _ = writeln!(out, "label {q} {l}");
        }
        for (name, q) in &self.entries {
            let _ = writeln!(out, "entry {name} {q}");
        }
        for (_, e) in &self.edges {
            match e {
                Edge::Word {
                    src,
                    label,
                    dst,
                    weight,
                } => {
                    let label = match label {
                        EdgeLabel::Symbol(s) => s.clone(),
                        EdgeLabel::Eps => "@eps".into(),
                        EdgeLabel::Word(w) => format!("\"{}\"", w.join(" ")),
                    };
                    let _ = write!(out, "edge {src} {label} {dst}");
                    if let Some(w) = weight {
                        let _ = write!(out, " {w}");
                    }
                }
                Edge::Tree {
                    src,
                    symbol,
                    left,
                    right,
                    weight,
                } => {
                    let _ = write!(out, "edge {src} {symbol} {left} {right}");
                    if let Some(w) = weight {
                        let _ = write!(out, " {w}");
                    }
                }
            }
            out.push('\n');
        }
        for (_, f) in &self.finals {
            let _ = write!(out, "final {}", f.state);
            match &f.weight {
                Some(w) => {
                    let _ = write!(out, " {} {w}", f.exit);
                }
                None if f.exit != 0 => {
                    let _ = write!(out, " {}", f.exit);
                }
                None => {}
            }
            out.push('\n');
        }
        out
    }
}
