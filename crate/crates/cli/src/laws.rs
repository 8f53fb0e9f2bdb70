//! Law suites run by `aut laws`. Each law is checked on the automaton's own
//! matrices and on seeded random samples; a report line carries the first
//! counterexample found.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use kleisli_automata::alphabet::format_word;
use kleisli_automata::random::{random_base_map, random_matrix, random_tree, random_word};
use kleisli_automata::theory::DEFAULT_THEORY_CAP;
use kleisli_automata::tree::enumerate_trees;
use kleisli_automata::{
    generate_theory, recognize_membership, theory_morphism, Boolean, Error, KMatrix, LawReport,
    Recognizer, Semiring, Tree, TreeAutomaton, WordAutomaton,
};

use crate::format::{AutomatonFile, Kind};
use crate::{CliError, Suite};

/// Word lists for the product laws stay below this many words.
const EM_WORDS: usize = 60;
/// Exhaustive recognition checks stay below this many terms.
const RECOGNITION_TERMS: usize = 2_000;

/// Law names in first-seen order with the first counterexample of each.
#[derive(Default)]
struct Tally {
    laws: Vec<(String, Option<String>, usize)>,
    notes: Vec<(String, String)>,
}

impl Tally {
    fn check(&mut self, law: &str, ok: bool, witness: impl FnOnce() -> String) {
        let k = match self.laws.iter().position(|(l, ..)| l == law) {
            Some(k) => k,
            None => {
                self.laws.push((law.to_owned(), None, 0));
                self.laws.len() - 1
            }
        };
        let entry = &mut self.laws[k];
        entry.2 += 1;
        if !ok && entry.1.is_none() {
            entry.1 = Some(witness());
        }
    }

    fn absorb(&mut self, report: &LawReport, context: impl Fn() -> String) {
        for c in &report.checks {
            let detail = c.counterexample.clone().unwrap_or_default();
            self.check(&c.law, c.passed, || {
                format!("{}: {}", context(), detail.trim_end())
            });
        }
    }

    fn note(&mut self, law: &str, note: String) {
        self.notes.push((law.to_owned(), note));
    }

    fn into_report(self, scope: &str) -> LawReport {
        let mut report = LawReport::new();
        for (law, witness, count) in self.laws {
            report.record(law.clone(), witness.map(|w| w.replace(['\n', '\t'], " ")));
            let mut note = format!("{count} cases");
            for (_, n) in self.notes.iter().filter(|(l, _)| *l == law) {
                note.push_str("; ");
                note.push_str(n);
            }
            report.annotate_last(note);
        }
        report.scoped(scope)
    }
}

fn rng(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// The duality, EM and saturation suites selected by `suite`.
pub fn run<S: Semiring>(
    spec: &S,
    f: &AutomatonFile,
    suite: Suite,
    seed: u64,
    samples: usize,
) -> Result<LawReport, CliError> {
    let want = |s: Suite| suite == s || suite == Suite::All;
    let mut report = LawReport::new();
    match f.kind {
        Kind::Word => {
            let a = f.build_word(spec)?;
            let mut mats: Vec<KMatrix<S>> = a.letters().to_vec();
            mats.extend(a.eps().cloned());
            if want(Suite::Duality) {
                report.extend(duality(spec, a.states(), &mats, seed, samples)?);
            }
            if want(Suite::Em) {
                report.extend(word_em(&a, seed, samples)?);
            }
            if want(Suite::Saturation) {
                report.extend(saturation(spec, a.states(), &mats, seed, samples)?);
            }
        }
        Kind::Tree => {
            let a = f.build_tree(spec)?;
            if want(Suite::Duality) {
                report.extend(duality(spec, a.states(), a.deltas(), seed, samples)?);
            }
            if want(Suite::Em) {
                report.extend(tree_em(&a, seed, samples)?);
            }
            if want(Suite::Saturation) {
                let mats: Vec<KMatrix<S>> = a
                    .deltas()
                    .iter()
                    .map(|d| child_reach(a.states(), d))
                    .collect();
                report.extend(saturation(spec, a.states(), &mats, seed, samples)?);
            }
        }
    }
    Ok(report)
}

/// `q ↦ q1` when some transition from `q` has `q1` as a child.
fn child_reach<S: Semiring>(n: usize, delta: &KMatrix<S>) -> KMatrix<S> {
    let s = delta.spec();
    let mut m = KMatrix::zeros(s.clone(), n, n);
    for q in 0..n {
        for q1 in 0..n {
            for q2 in 0..n {
                let w = delta.get(q, q1 * n + q2);
                m.accumulate(q, q1, w);
                m.accumulate(q, q2, w);
            }
        }
    }
    m
}

fn duality<S: Semiring>(
    spec: &S,
    n: usize,
    mats: &[KMatrix<S>],
    seed: u64,
    samples: usize,
) -> Result<LawReport, CliError> {
    let mut r = rng(seed, 1);
    let mut t = Tally::default();
    let bound = n.max(1) + 1;
    // summing over a fibre exceeds one unless plus is idempotent, so other
    // carriers only see injective maps
    let idempotent = spec.flags().idempotent_plus;
    for k in 0..samples {
        let q = r.gen_range(1..=bound);
        let m = r.gen_range(1..=bound);
        let fm = if idempotent {
            random_base_map(r.gen_range(0..=bound), q, &mut r)
        } else {
            let mut targets: Vec<usize> = (0..q).collect();
            targets.shuffle(&mut r);
            targets.truncate(r.gen_range(0..=q));
            targets
        };
        let f = KMatrix::base_map(spec.clone(), &fm, q)?;
        t.absorb(&f.check_adjunction()?, || format!("base map #{k} {fm:?}"));
        let ft = f.transpose();
        t.check("(f_)_ = f", ft.transpose() == f, || {
            format!("base map #{k} {fm:?}")
        });
        let gm = random_base_map(q, m, &mut r);
        let g = KMatrix::base_map(spec.clone(), &gm, m)?;
        let lhs = f.compose(&g)?.transpose();
        let rhs = g.transpose().compose(&ft)?;
        t.check("(f;g)_ = g_;f_ on base maps", lhs == rhs, || {
            format!("{fm:?} then {gm:?}")
        });
    }
    for (i, x) in mats.iter().enumerate() {
        for k in 0..samples.div_ceil(mats.len().max(1)).max(1) {
            let y = random_matrix(spec, x.cols(), r.gen_range(1..=bound), 0.4, &mut r);
            let lhs = x.compose(&y)?.transpose();
            let rhs = y.transpose().compose(&x.transpose())?;
            t.check(
                "transpose reverses composition",
                lhs.approx_eq(&rhs),
                || format!("automaton matrix {i}, sample {k}"),
            );
            let big = x.join(&random_matrix(spec, x.rows(), x.cols(), 0.3, &mut r))?;
            t.check(
                "transpose preserves <=",
                x.transpose().leq(&big.transpose())?,
                || format!("automaton matrix {i}, sample {k}"),
            );
        }
    }
    if !idempotent {
        t.note("counit: f∘f_ <= id", "injective base maps only".into());
    }
    Ok(t.into_report("duality"))
}

/// `⊕_{k ≤ n} α^k`: the star when `1 ⊕ x = 1`, which holds in every
/// idempotent carrier offered here.
fn power_sum<S: Semiring>(alpha: &KMatrix<S>) -> Result<KMatrix<S>, Error> {
    let n = alpha.rows();
    let id = KMatrix::identity(alpha.spec().clone(), n);
    let mut acc = id.clone();
    let mut pow = id;
    for _ in 0..n {
        pow = pow.compose(alpha)?;
        acc = acc.join(&pow)?;
    }
    Ok(acc)
}

fn saturation<S: Semiring>(
    spec: &S,
    n: usize,
    mats: &[KMatrix<S>],
    seed: u64,
    samples: usize,
) -> Result<LawReport, CliError> {
    let mut r = rng(seed, 2);
    let mut t = Tally::default();
    let idempotent = spec.flags().idempotent_plus;
    let mut cases: Vec<(String, KMatrix<S>)> = mats
        .iter()
        .enumerate()
        .map(|(i, m)| (format!("automaton matrix {i}"), m.clone()))
        .collect();
    for k in 0..samples {
        let size = r.gen_range(0..=n.max(1));
        cases.push((
            format!("sample #{k}"),
            random_matrix(spec, size, size, 0.3, &mut r),
        ));
    }
    let id_law = "id <= α*";
    let mut diverged = 0;
    for (what, alpha) in &cases {
        let st = match alpha.star() {
            Ok(st) => st,
            Err(Error::NoConvergence { .. }) => {
                diverged += 1;
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let id = KMatrix::identity(spec.clone(), alpha.rows());
        t.check(id_law, id.leq(&st)?, || what.clone());
        t.check("α <= α*", alpha.leq(&st)?, || what.clone());
        let unrolled = id.join(&alpha.compose(&st)?)?;
        t.check("α* = id ⊕ α·α*", unrolled.approx_eq(&st), || {
            what.clone()
        });
        if idempotent {
            t.check("α*·α* = α*", st.compose(&st)?.approx_eq(&st), || {
                what.clone()
            });
            t.check(
                "α* = ⊕_{k≤n} α^k",
                power_sum(alpha)?.approx_eq(&st),
                || what.clone(),
            );
        }
    }
    if diverged > 0 {
        t.note(id_law, format!("{diverged} stars diverged"));
    }
    Ok(t.into_report("saturation"))
}

fn word_em<S: Semiring>(
    a: &WordAutomaton<S>,
    seed: u64,
    samples: usize,
) -> Result<LawReport, CliError> {
    let mut r = rng(seed, 3);
    let mut t = Tally::default();
    let mut len = 0;
    while len < 3 && a.alphabet().words_up_to(len + 1).len() <= EM_WORDS {
        len += 1;
    }
    let words = a.alphabet().words_up_to(len);
    t.absorb(&a.check_em_laws(&words)?, || {
        format!("words up to length {len}")
    });

    // the path oracle agrees exactly when no internal moves can repeat
    let exact = a.eps().is_none() || a.spec().flags().idempotent_plus;
    if exact && !a.alphabet().is_empty() {
        let eps_bound = if a.eps().is_none() { 0 } else { a.states() };
        for _ in 0..samples {
            let w = random_word(a.alphabet(), 4, &mut r);
            for q in 0..a.states() {
                let lhs = a.weight(q, &w)?;
                let rhs = a.brute_force_weight(q, &w, eps_bound)?;
                let same = lhs.iter().zip(&rhs).all(|(x, y)| a.spec().approx_eq(x, y));
                t.check("weight = path-sum oracle", same, || {
                    format!("state {q}, word {}", format_word(&w))
                });
            }
        }
    }
    Ok(t.into_report("em"))
}

fn tree_em<S: Semiring>(
    a: &TreeAutomaton<S>,
    seed: u64,
    samples: usize,
) -> Result<LawReport, CliError> {
    let mut r = rng(seed, 4);
    let mut t = Tally::default();
    let s = a.spec();
    let vars = a.exits();
    for _ in 0..samples {
        let outer = random_tree(a.alphabet(), 2, 2, &mut r);
        let subst = [
            random_tree(a.alphabet(), vars, 2, &mut r),
            random_tree(a.alphabet(), vars, 2, &mut r),
        ];
        let lhs = a.eval_tree(&outer.substitute(&subst)?)?;
        let leaves = [a.eval_tree(&subst[0])?, a.eval_tree(&subst[1])?];
        let rhs = a.eval_with_leaves(&outer, &leaves)?;
        let same = lhs.iter().zip(&rhs).all(|(x, y)| s.approx_eq(x, y));
        t.check("eval(t[s/x]) = eval(t) over eval(s)", same, || {
            format!("t={outer} s0={} s1={}", subst[0], subst[1])
        });

        let u = random_tree(a.alphabet(), vars, 3, &mut r);
        for q in 0..a.states() {
            let same = s.approx_eq(&a.accepts(q, &u)?, &a.brute_force_accepts(q, &u)?);
            t.check("accepts = run oracle", same, || {
                format!("state {q}, tree {u}")
            });
        }
    }
    Ok(t.into_report("em"))
}

/// Recognition through the finite theory against the automaton's own
/// semantics, on every short word or tree.
pub fn recognition(f: &AutomatonFile) -> Result<LawReport, CliError> {
    match f.kind {
        Kind::Word => {
            let a = f.build_word(&Boolean)?;
            let mut len = 0;
            while len < 8 && a.alphabet().words_up_to(len + 1).len() <= RECOGNITION_TERMS {
                len += 1;
            }
            let words = a.alphabet().words_up_to(len);
            recognition_on(
                &a,
                &words,
                |w| Ok(a.weight(0, w).map(|_| ())?),
                |q, w| Ok(a.weight(q, w)?[0]),
                |w| format_word(w),
            )
        }
        Kind::Tree => {
            let a = f.build_tree(&Boolean)?;
            let mut h = 0;
            while h < 3 && enumerate_trees(a.alphabet(), 1, h + 1).len() <= RECOGNITION_TERMS {
                h += 1;
            }
            let trees = enumerate_trees(a.alphabet(), 1, h);
            recognition_on(
                &a,
                &trees,
                |_| Ok(()),
                |q, t| Ok(a.accepts(q, t)?),
                Tree::to_string,
            )
        }
    }
}

fn recognition_on<A, T>(
    a: &A,
    terms: &[T],
    validate: impl Fn(&T) -> Result<(), CliError>,
    semantics: impl Fn(usize, &T) -> Result<bool, CliError>,
    show: impl Fn(&T) -> String,
) -> Result<LawReport, CliError>
where
    A: Recognizer,
    T: std::borrow::Borrow<A::Term>,
{
    let mut t = Tally::default();
    let theory = generate_theory(a, DEFAULT_THEORY_CAP)?;
    for term in terms {
        validate(term)?;
        let h = theory_morphism(a, term.borrow())?;
        t.check("h(term) lies in the theory", theory.contains(&h), || {
            show(term)
        });
        for q in 0..a.state_count() {
            let member = recognize_membership(a, q, term.borrow())?;
            t.check(
                "membership = semantics",
                member == semantics(q, term)?,
                || format!("state {q}, term {}", show(term)),
            );
        }
    }
    Ok(t.into_report("recognition"))
}
