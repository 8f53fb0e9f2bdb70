//! Subcommand implementations. Each returns the rendered output; the
//! semiring named in the file picks the instantiation.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use kleisli_automata::theory::{format_set, DEFAULT_THEORY_CAP};
use kleisli_automata::tree::{enumerate_trees, DEFAULT_TREE_CAP};
use kleisli_automata::word::Slice;
use kleisli_automata::{
    compile, generate_theory, parse_regex, parse_word, recognize_membership, recognizing_subset,
    theory_morphism, Alphabet, Boolean, Error, Recognizer, RegularWordMap, Semiring, Tree, Word,
};

use crate::format::{parse_automaton, AutomatonFile, Kind, SemiringName};
use crate::{laws, with_semiring, CliError, Command, Outcome, Query, Suite};

pub fn run(command: &Command) -> Result<Outcome, CliError> {
    let ok = |stdout: String| {
        Ok(Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        })
    };
    match command {
        Command::Weight { file, state, query } => {
            let f = load(file)?;
            let q = f.resolve_state(state)?;
            ok(with_semiring!(f.semiring, spec => weight(&spec, &f, q, query))?)
        }
        Command::Enumerate {
            file,
            state,
            max_len,
            max_height,
            saturation,
        } => {
            let f = load(file)?;
            let q = f.resolve_state(state)?;
            let bound = match (f.kind, max_len, max_height) {
                (Kind::Word, Some(l), None) => *l,
                (Kind::Tree, None, Some(h)) => *h,
                (Kind::Word, ..) => {
                    return Err(CliError::Usage("word automata take --max-len".into()))
                }
                (Kind::Tree, ..) => {
                    return Err(CliError::Usage("tree automata take --max-height".into()))
                }
            };
            ok(with_semiring!(f.semiring, spec => enumerate(&spec, &f, q, bound, *saturation))?)
        }
        Command::Theory {
            file,
            emit_table,
            cap,
        } => {
            let f = load(file)?;
            ok(theory(&f, *emit_table, *cap)?)
        }
        Command::Recognize { file, state, query } => {
            let f = load(file)?;
            let q = f.resolve_state(state)?;
            ok(recognize(&f, q, query)?)
        }
        Command::Laws {
            file,
            suite,
            seed,
            samples,
        } => {
            let f = load(file)?;
            let mut report =
                with_semiring!(f.semiring, spec => laws::run(&spec, &f, *suite, *seed, *samples))?;
            let mut out = String::new();
            if matches!(suite, Suite::Recognition | Suite::All) {
                if f.semiring.is_boolean() {
                    report.extend(laws::recognition(&f)?);
                } else {
                    let _ = writeln!(out, "SKIP\trecognition\tnot a boolean automaton");
                }
            }
            let failed = report.failures().count();
            out.insert_str(0, &report.to_string());
            let _ = writeln!(out, "# {} laws, {failed} failed", report.checks.len());
            Ok(Outcome {
                code: if failed == 0 { 0 } else { 1 },
                stdout: out,
                stderr: String::new(),
            })
        }
        Command::Compile {
            regex,
            alphabet,
            semiring,
            output,
        } => {
            let name = SemiringName::parse(semiring)
                .ok_or_else(|| CliError::Usage(format!("unknown semiring {semiring:?}")))?;
            let symbols: Vec<String> = alphabet
                .iter()
                .flat_map(|s| s.split_whitespace())
                .map(str::to_owned)
                .collect();
            let alphabet = Alphabet::new(symbols)?;
            let text = with_semiring!(name, spec => compile_regex(&spec, name, regex, &alphabet))?;
            emit(text, output.as_deref())
        }
        Command::Compose {
            first,
            second,
            output,
        } => {
            let f1 = load(first)?;
            let f2 = load(second)?;
            if f1.semiring != f2.semiring {
                return Err(CliError::Usage(format!(
                    "semiring mismatch: {} vs {}",
                    f1.semiring, f2.semiring
                )));
            }
            let text = with_semiring!(f1.semiring, spec => compose(&spec, &f1, &f2))?;
            emit(text, output.as_deref())
        }
    }
}

pub fn load(path: &Path) -> Result<AutomatonFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_automaton(&text).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn emit(text: String, output: Option<&Path>) -> Result<Outcome, CliError> {
    match output {
        None => Ok(Outcome {
            code: 0,
            stdout: text,
            stderr: String::new(),
        }),
        Some(path) => {
            std::fs::write(path, text).map_err(|e| CliError::Io {
                path: path.display().to_string(),
                message: e.to_string(),
            })?;
            Ok(Outcome::default())
        }
    }
}

fn word_query(kind: Kind, q: &Query) -> Result<Word, CliError> {
    match (kind, &q.word) {
        (Kind::Word, Some(w)) => Ok(parse_word(w)),
        _ => Err(CliError::Usage("word automata take --word".into())),
    }
}

fn term_query(kind: Kind, q: &Query) -> Result<Tree, CliError> {
    match (kind, &q.term) {
        (Kind::Tree, Some(t)) => Ok(t.parse()?),
        _ => Err(CliError::Usage("tree automata take --term".into())),
    }
}

fn row<S: Semiring>(spec: &S, v: &[S::Elem]) -> String {
    v.iter()
        .map(|x| spec.format_elem(x))
        .collect::<Vec<_>>()
        .join("\t")
}

fn weight<S: Semiring>(
    spec: &S,
    f: &AutomatonFile,
    q: usize,
    query: &Query,
) -> Result<String, CliError> {
    let v = match f.kind {
        Kind::Word => f.build_word(spec)?.weight(q, &word_query(f.kind, query)?)?,
        Kind::Tree => vec![f
            .build_tree(spec)?
            .accepts(q, &term_query(f.kind, query)?)?],
    };
    Ok(format!("{}\n", row(spec, &v)))
}

/// Number of trees of height at most `h`, saturating.
fn tree_count(symbols: usize, vars: usize, h: usize) -> usize {
    (0..h).fold(vars, |c, _| {
        vars.saturating_add(symbols.saturating_mul(c.saturating_mul(c)))
    })
}

fn enumerate<S: Semiring>(
    spec: &S,
    f: &AutomatonFile,
    q: usize,
    bound: usize,
    saturation: bool,
) -> Result<String, CliError> {
    let labels = f.state_labels();
    let mut out = String::new();
    match f.kind {
        Kind::Word => {
            let a = f.build_word(spec)?;
            let slice: Slice<S::Elem> = if saturation {
                let _ = writeln!(out, "word\t{}", labels.join("\t"));
                a.saturation_slice(q, bound)?
            } else {
                a.weight_slice(q, bound)?
            };
            // shortlex in alphabet order
            let mut words: Vec<_> = slice.iter().collect();
            words.sort_by_cached_key(|(w, _)| {
                let idx = a.alphabet().encode(w).unwrap_or_default();
                (idx.len(), idx)
            });
            for (w, v) in words {
                let _ = writeln!(
                    out,
                    "{}\t{}",
                    kleisli_automata::alphabet::format_word(w),
                    row(spec, v)
                );
            }
        }
        Kind::Tree => {
            let a = f.build_tree(spec)?;
            let entries: BTreeMap<Tree, Vec<S::Elem>> = if saturation {
                let _ = writeln!(out, "tree\t{}", labels.join("\t"));
                a.saturation_slice(q, bound)?
            } else {
                if tree_count(a.alphabet().len(), a.exits(), bound) > DEFAULT_TREE_CAP {
                    return Err(Error::ResultTooLarge {
                        cap: DEFAULT_TREE_CAP,
                    }
                    .into());
                }
                enumerate_trees(a.alphabet(), a.exits(), bound)
                    .into_iter()
                    .map(|t| Ok((a.accepts(q, &t)?, t)))
                    .filter(|r: &Result<_, Error>| {
                        r.as_ref().map_or(true, |(w, _)| !spec.is_zero(w))
                    })
                    .map(|r| r.map(|(w, t)| (t, vec![w])))
                    .collect::<Result<_, Error>>()?
            };
            let mut trees: Vec<_> = entries.iter().collect();
            trees.sort_by_key(|(t, _)| (t.height(), t.size()));
            for (t, v) in trees {
                let _ = writeln!(out, "{t}\t{}", row(spec, v));
            }
        }
    }
    Ok(out)
}

fn require_boolean(f: &AutomatonFile) -> Result<(), CliError> {
    if f.semiring.is_boolean() {
        Ok(())
    } else {
        Err(Error::NotBoolean(f.semiring.to_string()).into())
    }
}

fn theory(f: &AutomatonFile, emit_table: bool, cap: usize) -> Result<String, CliError> {
    require_boolean(f)?;
    match f.kind {
        Kind::Word => theory_of(&f.build_word(&Boolean)?, f, emit_table, cap),
        Kind::Tree => theory_of(&f.build_tree(&Boolean)?, f, emit_table, cap),
    }
}

fn theory_of<A: Recognizer>(
    a: &A,
    f: &AutomatonFile,
    emit_table: bool,
    cap: usize,
) -> Result<String, CliError> {
    let labels = f.state_labels();
    let t = generate_theory(a, cap)?;
    if emit_table {
        return Ok(t.to_tsv(&labels));
    }
    let mut out = String::new();
    let _ = writeln!(out, "# elements\t{}", t.len());
    let _ = writeln!(
        out,
        "# accepting set\t{}",
        format_set(a.accepting_set()?, &labels)
    );
    for (q, label) in labels.iter().enumerate() {
        let r = recognizing_subset(a, q, cap)?;
        let _ = writeln!(
            out,
            "# state {label}\tmembership {{{}}}\tequality {{{}}}",
            r.membership_names().join(","),
            r.equality_names().join(","),
        );
    }
    out.push_str(&t.to_tsv(&labels));
    Ok(out)
}

fn recognize(f: &AutomatonFile, q: usize, query: &Query) -> Result<String, CliError> {
    require_boolean(f)?;
    match f.kind {
        Kind::Word => {
            let a = f.build_word(&Boolean)?;
            verdict(&a, q, &word_query(f.kind, query)?[..], f)
        }
        Kind::Tree => {
            let a = f.build_tree(&Boolean)?;
            verdict(&a, q, &term_query(f.kind, query)?, f)
        }
    }
}

fn verdict<A: Recognizer>(
    a: &A,
    q: usize,
    term: &A::Term,
    f: &AutomatonFile,
) -> Result<String, CliError> {
    let member = recognize_membership(a, q, term)?;
    let h = theory_morphism(a, term)?;
    let theory = generate_theory(a, DEFAULT_THEORY_CAP)?;
    let name = theory.name_of(&h).unwrap_or("?");
    let labels = f.state_labels();
    let table: Vec<String> = h.table().iter().map(|&x| format_set(x, &labels)).collect();
    Ok(format!(
        "{}\t{name}\t{}\n",
        if member { "accept" } else { "reject" },
        table.join(" ")
    ))
}

fn compile_regex<S: Semiring>(
    spec: &S,
    name: SemiringName,
    regex: &str,
    alphabet: &Alphabet,
) -> Result<String, CliError> {
    let e = parse_regex(regex, spec)?;
    let r = compile(&e, spec, alphabet)?;
    Ok(render_map(name, &r, &["in".to_owned()]))
}

fn compose<S: Semiring>(
    spec: &S,
    f1: &AutomatonFile,
    f2: &AutomatonFile,
) -> Result<String, CliError> {
    let r1 = RegularWordMap::new(f1.entry_states(), f1.build_word(spec)?)?;
    let r2 = RegularWordMap::new(f2.entry_states(), f2.build_word(spec)?)?;
    let r = r1.compose(&r2)?;
    let names: Vec<String> = if f1.entries.is_empty() {
        vec!["in".to_owned()]
    } else {
        f1.entries.iter().map(|(n, _)| n.clone()).collect()
    };
    Ok(render_map(f1.semiring, &r, &names))
}

fn render_map<S: Semiring>(name: SemiringName, r: &RegularWordMap<S>, names: &[String]) -> String {
    let entries = names
        .iter()
        .cloned()
        .zip(r.entry().iter().copied())
        .collect();
    AutomatonFile::from_word(name, r.automaton(), entries, Vec::new()).render()
}
