//! Acceptance suite: one test per criterion, each printing a single
//! `PASS`/`FAIL` line with its runtime. Run with `--nocapture` to see them.

use std::time::{Duration, Instant};

use kleisli_automata::random::{
    letters, nonzero_value, random_base_map, random_matrix, random_matrix_with, random_regex,
    random_tree_automaton, random_word_automaton, random_word_automaton_with, EpsShape, WordShape,
};
use kleisli_automata::regex::{compiled_slice, denote_slice};
use kleisli_automata::theory::StateSetFunction;
use kleisli_automata::tree::enumerate_trees;
use kleisli_automata::{
    compile, generate_theory, recognize_membership, Alphabet, Boolean, ChainProduct, ChainQuantale,
    KMatrix, Natural, Real, RegExpr, Semiring, Tree, TreeAutomatonBuilder, Tropical, UnitInterval,
    WordAutomaton,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    start: Instant,
    checks: usize,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Criterion {
    fn new(id: u32, name: &'static str, limit_secs: u64) -> Self {
        Self {
            id,
            name,
            limit: Duration::from_secs(limit_secs),
            start: Instant::now(),
            checks: 0,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.failures.len() < 20 {
            self.failures.push(what());
        }
    }

    fn finish(mut self) {
        let elapsed = self.start.elapsed();
        if elapsed > self.limit {
            self.failures
                .push(format!("runtime {elapsed:.2?} exceeds {:?}", self.limit));
        }
        let verdict = if self.failures.is_empty() {
            "PASS"
        } else {
            "FAIL"
        };
        self.notes.insert(0, format!("{} checks", self.checks));
        let notes = format!(" [{}]", self.notes.join("; "));
        println!(
            "{verdict} criterion {}: {} ({elapsed:.2?}){notes}",
            self.id, self.name
        );
        for f in &self.failures {
            println!("    {f}");
        }
        assert!(self.failures.is_empty(), "criterion {} failed", self.id);
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Two states; state 1 reads `a` into (1,1) and `b` into (0,0); state 0 is final.
fn two_state_tree() -> kleisli_automata::TreeAutomaton<Boolean> {
    TreeAutomatonBuilder::new(Boolean, Alphabet::new(["a", "b"]).unwrap(), 2)
        .edge(1, "a", 1, 1, true)
        .edge(1, "b", 0, 0, true)
        .final_weight(0, 0, true)
        .build()
        .unwrap()
}

#[test]
fn criterion_1_two_state_table() {
    let mut c = Criterion::new(1, "two-state tree theory table", 1);
    let a = two_state_tree();
    let theory = generate_theory(&a, 1000).unwrap();
    // inputs ∅, {1}, {2}, {1,2} are masks 0, 1, 2, 3
    let table = |cols: [u32; 4]| StateSetFunction::from_table(2, cols.to_vec()).unwrap();
    let id = table([0, 1, 2, 3]);
    let a_a = table([0, 0, 2, 2]);
    let b_a = table([0, 2, 0, 2]);
    let empty = table([0, 0, 0, 0]);
    for (name, f) in [
        ("id", &id),
        ("a_A", &a_a),
        ("b_A", &b_a),
        ("all-empty", &empty),
    ] {
        c.check(theory.contains(f), || {
            format!("{name} missing from the closure")
        });
    }
    c.check(theory.get("a_A") == Some(&a_a), || {
        "a_A column differs".into()
    });
    c.check(theory.get("b_A") == Some(&b_a), || {
        "b_A column differs".into()
    });
    let b2 = b_a.compose(&b_a).unwrap();
    c.check(b2 == empty, || {
        "b_A∘b_A is not the all-empty function".into()
    });
    c.check(a_a.compose(&a_a).unwrap() == a_a, || "a_A∘a_A ≠ a_A".into());
    c.check(a_a.compose(&b_a).unwrap() == b_a, || "a_A∘b_A ≠ b_A".into());
    c.check(b_a.compose(&a_a).unwrap() == b2, || "b_A∘a_A ≠ b_A²".into());
    // the same relations through terms
    let t = |s: &str| -> Tree { s.parse().unwrap() };
    let h = |s: &str| kleisli_automata::theory_morphism(&a, &t(s)).unwrap();
    c.check(h("(a (a x0 x0) (a x0 x0))") == a_a, || {
        "term a(a,a) ≠ a_A".into()
    });
    c.check(h("(a (b x0 x0) (b x0 x0))") == b_a, || {
        "term a(b,b) ≠ b_A".into()
    });
    c.check(h("(b (a x0 x0) (a x0 x0))") == b2, || {
        "term b(a,a) ≠ b_A²".into()
    });
    for f in theory.elements() {
        c.check(f.is_monotone(), || {
            format!("non-monotone element {:?}", f.table())
        });
    }
    c.notes
        .push(format!("closure cardinality {}", theory.len()));
    c.finish();
}

#[test]
fn criterion_2_recognition_equals_semantics() {
    let mut c = Criterion::new(2, "recognition equals semantics", 60);
    let mut r = rng(2);
    let mut word_checks = 0usize;
    for k in 0..200 {
        let n = r.gen_range(1..=4);
        let sigma = r.gen_range(1..=3);
        let mut shape = WordShape::new(n, sigma, 0.3);
        if k % 2 == 1 {
            shape = shape.with_eps(EpsShape::Dense(0.3));
        }
        let a = random_word_automaton(&Boolean, shape, &mut r);
        for w in a.alphabet().words_up_to(6) {
            for i in 0..n {
                let direct = a.weight(i, &w).unwrap()[0];
                let rec = recognize_membership(&a, i, &w).unwrap();
                word_checks += 1;
                c.check(direct == rec, || {
                    format!("word automaton #{k}, state {i}, word {w:?}")
                });
            }
        }
    }
    let mut tree_checks = 0usize;
    for k in 0..100 {
        let n = r.gen_range(1..=3);
        let sigma = r.gen_range(1..=2);
        let a = random_tree_automaton(&Boolean, n, sigma, 0.3, &mut r);
        for t in enumerate_trees(a.alphabet(), 1, 3) {
            let values = a.eval_tree(&t).unwrap();
            for (i, &v) in values.iter().enumerate() {
                let rec = recognize_membership(&a, i, &t).unwrap();
                tree_checks += 1;
                c.check(v == rec, || {
                    format!("tree automaton #{k}, state {i}, tree {t}")
                });
            }
        }
    }
    c.notes
        .push(format!("{word_checks} on words, {tree_checks} on trees"));
    c.finish();
}

fn weight_oracle<S: Semiring>(
    c: &mut Criterion,
    label: &str,
    automata: &[WordAutomaton<S>],
    max_len: usize,
    eps_bound: usize,
) {
    for (k, a) in automata.iter().enumerate() {
        for w in a.alphabet().words_up_to(max_len) {
            for i in 0..a.states() {
                let fast = a.weight(i, &w).unwrap();
                let slow = a.brute_force_weight(i, &w, eps_bound).unwrap();
                let ok = fast
                    .iter()
                    .zip(&slow)
                    .all(|(x, y)| a.spec().approx_eq(x, y));
                c.check(ok, || {
                    format!("{label} #{k}, state {i}, word {w:?}: {fast:?} vs {slow:?}")
                });
            }
        }
    }
}

#[test]
fn criterion_3_weight_oracle() {
    let mut c = Criterion::new(3, "weight equals path-sum oracle", 60);
    let mut r = rng(3);
    let shape = |r: &mut ChaCha8Rng| WordShape::new(r.gen_range(1..=4), r.gen_range(1..=3), 0.3);

    let bools: Vec<_> = (0..40)
        .map(|_| {
            let s = shape(&mut r);
            random_word_automaton(&Boolean, s, &mut r)
        })
        .collect();
    weight_oracle(&mut c, "boolean", &bools, 6, 0);

    let nat = Natural::new();
    let nats: Vec<_> = (0..40)
        .map(|_| {
            let s = shape(&mut r);
            random_word_automaton_with(&nat, s, &mut r, |r| r.gen_range(1..=3), |_| 1)
        })
        .collect();
    weight_oracle(&mut c, "natural", &nats, 6, 0);

    let trop = Tropical::new();
    let trops: Vec<_> = (0..40)
        .map(|_| {
            let s = shape(&mut r);
            random_word_automaton_with(&trop, s, &mut r, |r| r.gen_range(0..=9), |_| 0)
        })
        .collect();
    weight_oracle(&mut c, "tropical", &trops, 6, 0);

    // contractive internal moves: each state has at most one, of weight
    // below 0.01, so five moves per segment bound the truncation by ~1e-12
    let real = Real::new();
    let reals: Vec<_> = (0..40)
        .map(|_| {
            let s = shape(&mut r).with_eps(EpsShape::Functional(0.5));
            random_word_automaton_with(
                &real,
                s,
                &mut r,
                |r| r.gen_range(0.1..2.0),
                |r| r.gen_range(0.0..0.01),
            )
        })
        .collect();
    weight_oracle(&mut c, "real", &reals, 5, 5);
    c.finish();
}

/// `g ⊕ random` keeps `g` below the result.
fn enlarge<S: Semiring>(g: &KMatrix<S>, r: &mut ChaCha8Rng) -> KMatrix<S> {
    let extra = random_matrix(g.spec(), g.rows(), g.cols(), 0.3, r);
    g.join(&extra).unwrap()
}

fn duality_suite<S: Semiring>(c: &mut Criterion, spec: &S, r: &mut ChaCha8Rng) {
    let name = spec.name();
    for k in 0..200 {
        let p = r.gen_range(0..=5);
        let q = r.gen_range(1..=5);
        let m = r.gen_range(1..=5);
        let f = KMatrix::base_map(spec.clone(), &random_base_map(p, q, r), q).unwrap();
        let report = f.check_adjunction().unwrap();
        c.check(report.all_passed(), || format!("{name} #{k}: {report}"));
        let ft = f.transpose();
        c.check(ft.transpose() == f, || format!("{name} #{k}: (f_)_ ≠ f"));
        let g = KMatrix::base_map(spec.clone(), &random_base_map(q, m, r), m).unwrap();
        let lhs = f.compose(&g).unwrap().transpose();
        let rhs = g.transpose().compose(&ft).unwrap();
        c.check(lhs == rhs, || {
            format!("{name} #{k}: transpose does not reverse composition")
        });
        // the same on arbitrary matrices
        let x = random_matrix(spec, p, q, 0.4, r);
        let y = random_matrix(spec, q, m, 0.4, r);
        let lhs = x.compose(&y).unwrap().transpose();
        let rhs = y.transpose().compose(&x.transpose()).unwrap();
        c.check(lhs == rhs, || {
            format!("{name} #{k}: reversal fails on general matrices")
        });
        let big = enlarge(&x, r);
        c.check(x.leq(&big).unwrap(), || {
            format!("{name} #{k}: join is not an upper bound")
        });
        c.check(x.transpose().leq(&big.transpose()).unwrap(), || {
            format!("{name} #{k}: transpose does not preserve order")
        });
    }
}

#[test]
fn criterion_4_duality() {
    let mut c = Criterion::new(4, "duality suite", 5);
    let mut r = rng(4);
    duality_suite(&mut c, &Boolean, &mut r);
    duality_suite(&mut c, &ChainQuantale::new(3), &mut r);
    duality_suite(
        &mut c,
        &ChainQuantale::with_product(3, ChainProduct::Lukasiewicz),
        &mut r,
    );
    c.finish();
}

/// Reflexive-transitive closure by depth-first search from every vertex.
fn reachability(adj: &KMatrix<Boolean>) -> Vec<Vec<bool>> {
    let n = adj.rows();
    (0..n)
        .map(|s| {
            let mut seen = vec![false; n];
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(v) = stack.pop() {
                for (w, &edge) in adj.row(v).iter().enumerate() {
                    if edge && !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            seen
        })
        .collect()
}

/// All-pairs shortest paths by Floyd–Warshall; `None` is unreachable.
fn shortest_paths(w: &KMatrix<Tropical>) -> Vec<Vec<Option<u64>>> {
    let n = w.rows();
    let mut d: Vec<Vec<Option<u64>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    // weights are nonnegative, so the empty path wins on the diagonal
                    let x = *w.get(i, j);
                    if i == j {
                        Some(0)
                    } else {
                        (x != u64::MAX).then_some(x)
                    }
                })
                .collect()
        })
        .collect();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(a), Some(b)) = (d[i][k], d[k][j]) {
                    if d[i][j].is_none_or(|cur| a + b < cur) {
                        d[i][j] = Some(a + b);
                    }
                }
            }
        }
    }
    d
}

#[test]
fn criterion_5_saturation() {
    let mut c = Criterion::new(5, "saturation suite", 10);
    let mut r = rng(5);
    for k in 0..300 {
        let n = r.gen_range(0..=6);
        let alpha = random_matrix(&Boolean, n, n, r.gen_range(0.05..0.5), &mut r);
        let st = alpha.star().unwrap();
        let id = KMatrix::identity(Boolean, n);
        c.check(id.leq(&st).unwrap(), || format!("#{k}: id ≰ α*"));
        c.check(alpha.leq(&st).unwrap(), || format!("#{k}: α ≰ α*"));
        c.check(st.compose(&st).unwrap() == st, || {
            format!("#{k}: α*·α* ≠ α*")
        });
        let oracle = reachability(&alpha);
        let same = (0..n).all(|i| (0..n).all(|j| *st.get(i, j) == oracle[i][j]));
        c.check(same, || format!("#{k}: α* differs from reachability"));
    }
    // leastness among all reflexive transitive 3x3 relations above α
    for k in 0..40 {
        let alpha = random_matrix(&Boolean, 3, 3, 0.3, &mut r);
        let st = alpha.star().unwrap();
        let id = KMatrix::identity(Boolean, 3);
        let mut found_self = false;
        for bits in 0u32..512 {
            let x = KMatrix::from_fn(Boolean, 3, 3, |i, j| bits >> (3 * i + j) & 1 == 1);
            let closed = id.leq(&x).unwrap()
                && alpha.leq(&x).unwrap()
                && x.compose(&x).unwrap().leq(&x).unwrap();
            if closed {
                c.check(st.leq(&x).unwrap(), || {
                    format!("3x3 #{k}: α* not below {bits:09b}")
                });
                found_self |= x == st;
            }
        }
        c.check(found_self, || {
            format!("3x3 #{k}: α* is not itself a candidate")
        });
    }
    let trop = Tropical::new();
    for k in 0..300 {
        let n = r.gen_range(1..=6);
        let w = random_matrix_with(&trop, n, n, 0.4, &mut r, |r| r.gen_range(0..=20));
        let st = w.star().unwrap();
        let d = shortest_paths(&w);
        let same = (0..n).all(|i| {
            (0..n).all(|j| {
                let x = *st.get(i, j);
                d[i][j] == (x != u64::MAX).then_some(x)
            })
        });
        c.check(same, || {
            format!("tropical #{k}: star differs from shortest paths")
        });
    }
    c.finish();
}

fn em_suite<S: Semiring>(
    c: &mut Criterion,
    spec: &S,
    eps: EpsShape,
    r: &mut ChaCha8Rng,
    mut weight: impl FnMut(&mut ChaCha8Rng) -> S::Elem,
    mut eps_weight: impl FnMut(&mut ChaCha8Rng) -> S::Elem,
) {
    for k in 0..50 {
        let shape = WordShape::new(r.gen_range(1..=4), r.gen_range(1..=3), 0.3).with_eps(eps);
        let a = random_word_automaton_with(spec, shape, r, &mut weight, &mut eps_weight);
        let words = a.alphabet().words_up_to(3);
        let report = a.check_em_laws(&words).unwrap();
        c.check(report.all_passed(), || {
            format!("{} #{k} ({eps:?}):\n{report}", spec.name())
        });
        let full = report
            .get("multiplication: run_dual(uv) = run_dual(u)·run_dual(v)")
            .is_some();
        let expect_full = spec.flags().idempotent_plus || matches!(eps, EpsShape::None);
        c.check(full == expect_full, || {
            format!("{} #{k}: product law not checked", spec.name())
        });
    }
}

#[test]
fn criterion_6_em_laws() {
    let mut c = Criterion::new(6, "Eilenberg-Moore law suite", 30);
    let mut r = rng(6);
    let one = |spec: &Boolean| spec.one();
    em_suite(&mut c, &Boolean, EpsShape::None, &mut r, |_| true, |_| true);
    em_suite(
        &mut c,
        &Boolean,
        EpsShape::Dense(0.3),
        &mut r,
        |_| true,
        |_| one(&Boolean),
    );
    let nat = Natural::new();
    em_suite(
        &mut c,
        &nat,
        EpsShape::None,
        &mut r,
        |r| r.gen_range(1..=3),
        |_| 1,
    );
    em_suite(
        &mut c,
        &nat,
        EpsShape::Dense(0.3),
        &mut r,
        |r| r.gen_range(1..=3),
        |r| r.gen_range(1..=3),
    );
    let trop = Tropical::new();
    em_suite(
        &mut c,
        &trop,
        EpsShape::None,
        &mut r,
        |r| r.gen_range(0..=9),
        |_| 0,
    );
    em_suite(
        &mut c,
        &trop,
        EpsShape::Dense(0.3),
        &mut r,
        |r| r.gen_range(0..=9),
        |r| r.gen_range(0..=9),
    );
    let real = Real::new();
    em_suite(
        &mut c,
        &real,
        EpsShape::None,
        &mut r,
        |r| r.gen_range(0.1..2.0),
        |_| 0.0,
    );
    em_suite(
        &mut c,
        &real,
        EpsShape::Functional(0.5),
        &mut r,
        |r| r.gen_range(0.1..2.0),
        |r| r.gen_range(0.0..0.9),
    );
    let chain = ChainQuantale::new(4);
    em_suite(
        &mut c,
        &chain,
        EpsShape::Dense(0.3),
        &mut r,
        |r| nonzero_value(&chain, r),
        |r| nonzero_value(&chain, r),
    );

    // substitution law for trees
    let ab = letters(2);
    let inner = enumerate_trees(&ab, 1, 2);
    let outer = enumerate_trees(&ab, 2, 2);
    for k in 0..20 {
        let a = random_tree_automaton(&Boolean, r.gen_range(1..=3), 2, 0.3, &mut r);
        let b = kleisli_automata::random::random_tree_automaton_with(
            &nat,
            r.gen_range(1..=3),
            2,
            0.3,
            &mut r,
            |r| r.gen_range(1..=3),
        );
        for t in &outer {
            for _ in 0..10 {
                let s = [
                    inner[r.gen_range(0..inner.len())].clone(),
                    inner[r.gen_range(0..inner.len())].clone(),
                ];
                let sub = t.substitute(&s).unwrap();
                let lhs = a.eval_tree(&sub).unwrap();
                let vals = [a.eval_tree(&s[0]).unwrap(), a.eval_tree(&s[1]).unwrap()];
                c.check(lhs == a.eval_with_leaves(t, &vals).unwrap(), || {
                    format!("boolean tree #{k}: {t} with {} / {}", s[0], s[1])
                });
                let lhs = b.eval_tree(&sub).unwrap();
                let vals = [b.eval_tree(&s[0]).unwrap(), b.eval_tree(&s[1]).unwrap()];
                c.check(lhs == b.eval_with_leaves(t, &vals).unwrap(), || {
                    format!("natural tree #{k}: {t}")
                });
            }
        }
    }
    c.finish();
}

#[test]
fn criterion_7_kleene() {
    let mut c = Criterion::new(7, "Kleene/subtheory suite", 30);
    let mut r = rng(7);
    let ab = letters(2);
    let slice = |e: &RegExpr<bool>, len: usize| {
        compiled_slice(&compile(e, &Boolean, &ab).unwrap(), len).unwrap()
    };
    let mut exprs = Vec::new();
    for k in 0..100 {
        let sigma = letters(r.gen_range(1..=2));
        let e = random_regex(&Boolean, &sigma, 4, &mut r);
        let compiled = compiled_slice(&compile(&e, &Boolean, &ab).unwrap(), 5).unwrap();
        let denoted = denote_slice(&e, &Boolean, 5);
        c.check(compiled == denoted, || {
            format!("#{k}: {}", e.display(&Boolean))
        });
        exprs.push(e);
    }
    for k in 0..60 {
        let e1 = &exprs[r.gen_range(0..exprs.len())];
        let e2 = &exprs[r.gen_range(0..exprs.len())];
        let e3 = &exprs[r.gen_range(0..exprs.len())];
        let left = RegExpr::comp(RegExpr::comp(e1.clone(), e2.clone()), e3.clone());
        let right = RegExpr::comp(e1.clone(), RegExpr::comp(e2.clone(), e3.clone()));
        c.check(slice(&left, 4) == slice(&right, 4), || {
            format!("associativity #{k}")
        });
        let base = slice(e1, 4);
        c.check(
            slice(&RegExpr::comp(RegExpr::Unit, e1.clone()), 4) == base,
            || format!("left unit #{k}"),
        );
        c.check(
            slice(&RegExpr::comp(e1.clone(), RegExpr::Unit), 4) == base,
            || format!("right unit #{k}"),
        );
        let star = RegExpr::star(e1.clone());
        let unrolled = RegExpr::union(RegExpr::Unit, RegExpr::comp(e1.clone(), star.clone()));
        c.check(slice(&star, 4) == slice(&unrolled, 4), || {
            format!("star unrolling #{k}")
        });
    }
    c.finish();
}

/// `⋁` over all state sequences of the `⊗`-product of step weights and the
/// exit weight, enumerated exhaustively.
fn fuzzy_path_formula<S: Semiring>(a: &WordAutomaton<S>, i: usize, w: &[String]) -> S::Elem {
    let s = a.spec();
    let n = a.states();
    let mats: Vec<&KMatrix<S>> = w.iter().map(|x| a.letter(x).unwrap()).collect();
    let mut best = s.zero();
    let total = n.pow(w.len() as u32);
    for code in 0..total {
        let mut seq = vec![i];
        let mut rest = code;
        for _ in 0..w.len() {
            seq.push(rest % n);
            rest /= n;
        }
        let mut prod = s.one();
        for (step, m) in mats.iter().enumerate() {
            prod = s.times(&prod, m.get(seq[step], seq[step + 1]));
        }
        prod = s.times(&prod, a.finals().get(seq[w.len()], 0));
        best = s.plus(&best, &prod);
    }
    best
}

fn fuzzy_suite<S: Semiring>(c: &mut Criterion, spec: &S, r: &mut ChaCha8Rng) {
    for k in 0..40 {
        let shape = WordShape::new(r.gen_range(1..=3), r.gen_range(1..=2), 0.5);
        let a = random_word_automaton(spec, shape, r);
        for w in a.alphabet().words_up_to(4) {
            for i in 0..a.states() {
                let got = a.weight(i, &w).unwrap().swap_remove(0);
                let expected = fuzzy_path_formula(&a, i, &w);
                c.check(spec.approx_eq(&got, &expected), || {
                    format!(
                        "{} #{k}, state {i}, {w:?}: {} vs {}",
                        spec.name(),
                        spec.format_elem(&got),
                        spec.format_elem(&expected)
                    )
                });
            }
        }
    }
}

#[test]
fn criterion_8_fuzzy() {
    let mut c = Criterion::new(8, "fuzzy instantiation", 10);
    let mut r = rng(8);
    let chains = [
        ChainQuantale::new(4),
        ChainQuantale::with_product(4, ChainProduct::Lukasiewicz),
    ];
    for chain in &chains {
        fuzzy_suite(&mut c, chain, &mut r);
    }
    fuzzy_suite(&mut c, &UnitInterval::new(), &mut r);
    let mut worst = 0;
    for chain in &chains {
        for k in 0..200 {
            let n = r.gen_range(1..=3);
            let m = random_matrix(chain, n, n, 0.6, &mut r);
            let bound = (1usize << n) * chain.k() as usize;
            match m.star_iterations(bound) {
                Ok((_, iters)) => worst = worst.max(iters),
                Err(e) => c.check(false, || format!("{} #{k}: {e}", chain.name())),
            }
        }
    }
    c.notes.push(format!("max star iterations {worst}"));
    c.finish();
}
