//! Property tests. Each case draws a seed and builds its input with the
//! shared generators.

mod common;

use std::collections::BTreeSet;

use clph::automaton::{automaton_to_regex, intersect, to_automaton};
use clph::constraint::{classify_dnf, dnf, Class, Prim};
use clph::engine::{solve, Atom, Clause, Literal, Outcome, Program, SearchOptions};
use clph::modes::{check_conjunction, Mode, ModeTable};
use clph::oracle::lang_enumerate;
use clph::parser::{parse_constraint, parse_program, parse_query, parse_regex};
use clph::solver::{normalize, SolveOptions};
use clph::syntax::{perms_of, Hedge, Item, Signature, Subst, Term, Var, VarGen, VarKind};
use common::{rng, Pool, Rng8};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn random_subst(r: &mut Rng8, p: &Pool) -> Subst {
    let mut s = Subst::new();
    for v in &p.term_vars {
        if r.gen_bool(0.5) {
            s.terms.insert(v.clone(), common::term(r, p, 3));
        }
    }
    for v in &p.hedge_vars {
        if r.gen_bool(0.5) {
            s.hedges.insert(v.clone(), common::hedge(r, p, 3, 2));
        }
    }
    for v in &p.func_vars {
        if r.gen_bool(0.5) {
            let f = p.sig.symbols().choose(r).unwrap().clone();
            s.funcs.insert(v.clone(), clph::syntax::Functor::Sym(f));
        }
    }
    s
}

fn lang_sig() -> Signature {
    Signature::with_symbols(&["a", "b", "f"], &[])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_applies_in_sequence(seed in any::<u64>()) {
        let p = Pool::standard();
        let mut r = rng(seed);
        let h = common::hedge(&mut r, &p, 8, 3);
        let (s1, s2) = (random_subst(&mut r, &p), random_subst(&mut r, &p));
        prop_assert_eq!(h.apply(&s1).apply(&s2), h.apply(&s1.compose(&s2)));
    }

    #[test]
    fn permutations_are_distinct_rearrangements(items in proptest::collection::vec(0u8..3, 0..6)) {
        let ps = perms_of(&items);
        let mut sorted = items.clone();
        sorted.sort_unstable();
        let distinct: BTreeSet<Vec<u8>> = ps.iter().cloned().collect();
        prop_assert_eq!(distinct.len(), ps.len());
        for q in &ps {
            let mut s = q.clone();
            s.sort_unstable();
            prop_assert_eq!(&s, &sorted);
        }
        // n! divided by the factorials of the multiplicities.
        let fact = |n: usize| (1..=n).product::<usize>();
        let mult: usize = (0..3u8).map(|k| fact(items.iter().filter(|&&x| x == k).count())).product();
        prop_assert_eq!(ps.len(), fact(items.len()) / mult);
    }

    #[test]
    fn constraints_print_and_parse_back(seed in any::<u64>()) {
        let p = Pool::standard();
        let mut r = rng(seed);
        let f = common::formula(&mut r, &p, 4, 6);
        let text = f.to_string();
        let back = parse_constraint(&text, &p.sig).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
        prop_assert_eq!(dnf(&back).unwrap(), dnf(&f).unwrap(), "{}", text);
    }

    #[test]
    fn regexes_print_and_parse_back(seed in any::<u64>()) {
        let mut r = rng(seed);
        let re = common::regex(&mut r, &lang_sig().symbols(), 8);
        let text = re.to_string();
        let back = parse_regex(&text).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
        prop_assert_eq!(back, re, "{}", text);
    }

    #[test]
    fn programs_print_and_parse_back(seed in any::<u64>()) {
        let pool = Pool::standard();
        let mut r = rng(seed);
        let mut prog = Program { sig: pool.sig.clone(), ..Program::default() };
        prog.modes.declare("p", vec![Mode::In, Mode::Out]);
        for _ in 0..r.gen_range(1..5) {
            let head = Atom::new("p", vec![common::term(&mut r, &pool, 4), common::term(&mut r, &pool, 4)]);
            let body = (0..r.gen_range(0..3))
                .map(|_| {
                    if r.gen_bool(0.4) {
                        Literal::Atom(Atom::new("q", vec![common::term(&mut r, &pool, 3)]))
                    } else {
                        Literal::Prim(common::prim(&mut r, &pool, 4))
                    }
                })
                .collect();
            prog.clauses.push(Clause { head, body });
        }
        let text = prog.to_string();
        let back = parse_program(&text).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?.program;
        prop_assert_eq!(&back.clauses, &prog.clauses, "{}", text);
        prop_assert_eq!(&back.modes, &prog.modes);
        prop_assert_eq!(&back.sig.unordered, &prog.sig.unordered);
    }

    #[test]
    fn fresh_variables_avoid_user_variables(seed in any::<u64>()) {
        let pool = Pool::new(&["a", "f"], &[], &["x", "x1", "x#1"], &["X", "X#2"], &["F#1"]);
        let mut r = rng(seed);
        let used: BTreeSet<Var> = common::hedge(&mut r, &pool, 8, 4).vars();
        let mut gen = VarGen::new();
        gen.avoid(used.iter());
        let mut seen = BTreeSet::new();
        for kind in [VarKind::Term, VarKind::Hedge, VarKind::Func] {
            for hint in ["x", "X", "F"] {
                let v = gen.fresh(kind, hint);
                prop_assert!(!used.contains(&v), "{} collides", v);
                prop_assert!(seen.insert(v));
            }
        }
    }

    #[test]
    fn intersection_is_exact(seed in any::<u64>()) {
        let sig = lang_sig();
        let mut r = rng(seed);
        let r1 = common::regex(&mut r, &sig.symbols(), 6);
        let r2 = common::regex(&mut r, &sig.symbols(), 6);
        let (l1, l2) = (lang_enumerate(&r1, &sig, 4), lang_enumerate(&r2, &sig, 4));
        let both: BTreeSet<Hedge> = l1.intersection(&l2).cloned().collect();
        match intersect(&r1, &r2, &sig).unwrap() {
            None => prop_assert!(both.is_empty(), "{} & {} is not empty", r1, r2),
            Some(i) => prop_assert_eq!(lang_enumerate(&i, &sig, 4), both, "{} & {} = {}", r1, r2, i),
        }
    }

    #[test]
    fn automata_convert_back_to_equal_languages(seed in any::<u64>()) {
        let sig = lang_sig();
        let mut r = rng(seed);
        let re = common::regex(&mut r, &sig.symbols(), 8);
        let back = automaton_to_regex(&to_automaton(&re, &sig)).expect("grammar languages are non-empty");
        prop_assert_eq!(lang_enumerate(&back, &sig, 5), lang_enumerate(&re, &sig, 5), "{} vs {}", re, back);
    }

    #[test]
    fn normal_forms_are_never_active(seed in any::<u64>()) {
        let p = Pool::standard();
        let mut r = rng(seed);
        let d = dnf(&common::formula(&mut r, &p, 6, 8)).unwrap();
        let opts = SolveOptions { check_measure: true, ..SolveOptions::default() };
        let out = normalize(d.clone(), &p.sig, &mut VarGen::new(), &opts);
        prop_assert!(!out.exhausted);
        prop_assert!(out.violations.is_empty(), "{}", d);
        prop_assert_ne!(classify_dnf(&out.result, &p.sig), Class::Active);
    }
}

/// The sequence conditions checked literal by literal against a fixed order.
fn order_is_well_moded(lits: &[Literal], order: &[usize], table: &ModeTable) -> bool {
    let mut out: BTreeSet<Var> = BTreeSet::new();
    for &i in order {
        match &lits[i] {
            Literal::Atom(a) => {
                let modes = table.get(&a.key()).unwrap();
                let (mut ins, mut outs) = (BTreeSet::new(), BTreeSet::new());
                for (t, m) in a.args.iter().zip(modes) {
                    let target = if *m == Mode::In { &mut ins } else { &mut outs };
                    target.extend(Hedge::single(t.clone()).vars());
                }
                if !ins.is_subset(&out) {
                    return false;
                }
                out.extend(outs);
            }
            Literal::Prim(Prim::Eq(l, r)) => {
                if !l.vars().is_subset(&out) && !r.vars().is_subset(&out) {
                    return false;
                }
                out.extend(l.vars());
                out.extend(r.vars());
            }
            Literal::Prim(Prim::In(h, _)) => {
                if !h.vars().is_subset(&out) {
                    return false;
                }
            }
            Literal::Prim(p @ Prim::FEq(..)) => out.extend(p.vars()),
        }
    }
    true
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    perms_of(&(0..n).collect::<Vec<_>>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn greedy_mode_check_matches_exhaustive_search(seed in any::<u64>()) {
        let mut r = rng(seed);
        let vars: Vec<Term> = ["x", "y", "z"].iter().map(|v| Term::var(v)).collect();
        let mut table = ModeTable::new();
        table.declare("p", vec![Mode::In, Mode::Out]);
        table.declare("q", vec![Mode::In]);
        table.declare("r", vec![Mode::Out]);
        let sig = Signature::with_symbols(&["a", "f"], &[]);
        let pick = |r: &mut Rng8| if r.gen_bool(0.2) { Term::constant("a") } else { vars.choose(r).unwrap().clone() };
        let lits: Vec<Literal> = (0..r.gen_range(0..=5))
            .map(|_| match r.gen_range(0..5) {
                0 => Literal::Atom(Atom::new("p", vec![pick(&mut r), pick(&mut r)])),
                1 => Literal::Atom(Atom::new("q", vec![pick(&mut r)])),
                2 => Literal::Atom(Atom::new("r", vec![pick(&mut r)])),
                3 => {
                    let l = pick(&mut r);
                    let rt = Term::sym("f", vec![Item::Term(pick(&mut r))]);
                    Literal::Prim(Prim::term_eq(l, rt, &sig))
                }
                _ => Literal::Prim(Prim::In(Hedge::single(pick(&mut r)), clph::regex::Regex::atom("a"))),
            })
            .collect();
        let report = check_conjunction(&lits, &table);
        let exists = permutations(lits.len()).iter().any(|o| order_is_well_moded(&lits, o, &table));
        prop_assert_eq!(report.ok, exists);
        if report.ok {
            prop_assert!(order_is_well_moded(&lits, &report.witness, &table));
        }
    }
}

fn answers(p: &Program, query: &str, opts: SearchOptions) -> BTreeSet<String> {
    let goal = parse_query(query, &p.sig).unwrap();
    solve(p, goal, opts)
        .into_iter()
        .map(|o| match o {
            Outcome::Answer(a) => a.to_string(),
            Outcome::DepthExceeded => "depth limit".to_string(),
        })
        .collect()
}

fn corpus(name: &str) -> Program {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name);
    parse_program(&std::fs::read_to_string(path).unwrap()).unwrap().program
}

const RANKED: [(&str, usize); 5] = [("f", 2), ("g", 2), ("h", 1), ("a", 0), ("b", 0)];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn search_shortcuts_keep_the_answers(seed in any::<u64>()) {
        let full = SearchOptions { gc: false, prune_ground: false, split: false, ..SearchOptions::default() };
        let mut r = rng(seed);
        let rw = corpus("rewrite.clph");
        let t = common::ranked(&mut r, &RANKED, 5);
        let q = format!("rewrite({t}, ?x)");
        prop_assert_eq!(answers(&rw, &q, SearchOptions::default()), answers(&rw, &q, full.clone()), "{}", q);
        let rpo = corpus("rpo.clph");
        let (s, t) = (common::ranked(&mut r, &RANKED, 3), common::ranked(&mut r, &RANKED, 3));
        let q = format!("rpo({s}, {t})");
        let yes = |o: SearchOptions| !answers(&rpo, &q, SearchOptions { max_answers: Some(1), ..o }).is_empty();
        prop_assert_eq!(yes(SearchOptions::default()), yes(full), "{}", q);
    }
}
