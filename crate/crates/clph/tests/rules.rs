//! Single rule applications, the step function and the measure.

use std::collections::BTreeSet;

use clph::constraint::{classify, dnf, Class, Conj, Dnf, Prim};
use clph::oracle::{brute_solutions, Bounds, Domain};
use clph::parser::parse_constraint;
use clph::solver::{cm, normalize, replay, sol, step, try_rule, Ctx, RuleId, SolveOptions};
use clph::syntax::{Signature, VarGen};

fn parse(src: &str, sig: &Signature) -> Dnf {
    dnf(&parse_constraint(src, sig).unwrap()).unwrap()
}

/// Each disjunct as a set of equations with unordered sides, so the
/// comparison ignores orientation and literal order.
fn shape(d: &Dnf) -> BTreeSet<BTreeSet<String>> {
    d.0.iter()
        .map(|c| match c {
            Conj::False => ["false".to_string()].into(),
            Conj::Lits(ls) => ls
                .iter()
                .map(|p| match p {
                    Prim::Eq(l, r) => {
                        let (a, b) = (l.to_string(), r.to_string());
                        if a <= b {
                            format!("{a} = {b}")
                        } else {
                            format!("{b} = {a}")
                        }
                    }
                    other => other.to_string(),
                })
                .collect(),
        })
        .collect()
}

fn apply(rule: RuleId, src: &str, sig: &Signature) -> Dnf {
    let d = parse(src, sig);
    let mut gen = VarGen::new();
    let mut ctx = Ctx { sig, gen: &mut gen };
    try_rule(rule, &d, &mut ctx).unwrap_or_else(|| panic!("{rule} does not apply to {d}")).0
}

fn same_solutions(a: &Dnf, b: &Dnf, sig: &Signature) {
    let dom = Domain::new(sig, Bounds::new(2, 2, 3));
    let keep: Vec<_> = a.vars().into_iter().collect();
    assert_eq!(brute_solutions(a, &keep, sig, &dom), brute_solutions(b, &keep, sig, &dom), "{a} vs {b}");
}

#[test]
fn head_clash_fails() {
    let sig = Signature::with_symbols(&["f", "g", "a"], &[]);
    assert_eq!(apply(RuleId::F(3), "f(a) = g(a)", &sig), Dnf(vec![Conj::False]));
}

#[test]
fn unordered_decomposition_tries_both_pairings() {
    let sig = Signature::with_symbols(&["a", "b"], &["fu"]);
    let out = apply(RuleId::D1, "fu(a, b) = fu(?x, ?y)", &sig);
    let perms: BTreeSet<BTreeSet<String>> =
        [["(?x, ?y) = (a, b)".to_string()].into(), ["(?y, ?x) = (a, b)".to_string()].into()].into();
    assert_eq!(shape(&out), perms);
    let out = normalize(out, &sig, &mut VarGen::new(), &SolveOptions::default()).result;
    let want: BTreeSet<BTreeSet<String>> = [
        ["?x = a".to_string(), "?y = b".to_string()].into(),
        ["?y = a".to_string(), "?x = b".to_string()].into(),
    ]
    .into();
    assert_eq!(shape(&out), want);
}

#[test]
fn hedge_variable_split_covers_every_prefix() {
    let sig = Signature::with_symbols(&["a", "b"], &[]);
    let before = parse("(@X, @Y) = (a, b)", &sig);
    let out = apply(RuleId::E(3), "(@X, @Y) = (a, b)", &sig);
    assert_eq!(out.0.len(), 3, "{out}");
    same_solutions(&before, &out, &sig);
    let normal = normalize(out, &sig, &mut VarGen::new(), &SolveOptions::default()).result;
    let want: BTreeSet<BTreeSet<String>> = [
        ["() = @X".to_string(), "(a, b) = @Y".to_string()].into(),
        ["@X = a".to_string(), "@Y = b".to_string()].into(),
        ["(a, b) = @X".to_string(), "() = @Y".to_string()].into(),
    ]
    .into();
    assert_eq!(shape(&normal), want);
}

#[test]
fn membership_in_eps_empties_every_variable() {
    let sig = Signature::new();
    let out = apply(RuleId::M(1), "(@X1, @X2) in eps", &sig);
    let want: BTreeSet<BTreeSet<String>> = [["() = @X1".to_string(), "() = @X2".to_string()].into()].into();
    assert_eq!(shape(&out), want);
}

#[test]
fn logical_rules_come_first() {
    let sig = Signature::with_symbols(&["a"], &[]);
    let d = parse("a = a & ?x = a", &sig);
    let mut gen = VarGen::new();
    let (out, ev) = step(&d, &mut Ctx { sig: &sig, gen: &mut gen }).unwrap();
    assert!(matches!(ev.rule, RuleId::Log(_)), "{}", ev.rule);
    assert_eq!(out.to_string(), "?x = a");
    assert!(sol(&parse_constraint("f(a) = f(a)", &sig).unwrap(), &sig).unwrap().is_true());
}

#[test]
fn partially_solved_constraints_do_not_step() {
    let sig = Signature::with_symbols(&["a", "b"], &[]);
    let d = parse("(@X, a) = (@Y, b)", &sig);
    assert_eq!(classify(&d.0[0], &sig), Class::PartiallySolved);
    let mut gen = VarGen::new();
    assert!(step(&d, &mut Ctx { sig: &sig, gen: &mut gen }).is_none());
}

#[test]
fn measure_of_a_single_equation() {
    let sig = Signature::with_symbols(&["f", "a"], &[]);
    let d = parse("?x = f(a)", &sig);
    let m = cm(&d.0[0]);
    // x is solved here, so nothing counts towards the first component.
    assert_eq!(m.n1, 0);
    let d2 = parse("?x = f(a) & ?x = f(?y)", &sig);
    let m2 = cm(&d2.0[0]);
    assert_eq!(m2.n1, 2);
    assert_eq!(m2.m3, vec![3, 3]);
}

#[test]
fn distributing_binary_choices_doubles_disjuncts() {
    let sig = Signature::with_symbols(&["a", "b"], &[]);
    for n in 1..=5 {
        let src = (0..n).map(|i| format!("(?x{i} = a or ?x{i} = b)")).collect::<Vec<_>>().join(" & ");
        assert_eq!(parse(&src, &sig).0.len(), 1 << n, "{src}");
    }
}

#[test]
fn traces_replay_step_by_step() {
    let sig = Signature::with_symbols(&["f", "a", "b", "c"], &[]);
    let src = "f(@X, a, @Y) = f(a, b, a, c, c) & f(@Z, a, ?x) = f(@Y, @X) & @Y in c*";
    let start = parse(src, &sig);
    let opts = SolveOptions { record_trace: true, ..SolveOptions::default() };
    let out = normalize(start.clone(), &sig, &mut VarGen::new(), &opts);
    let mut gen = VarGen::new();
    let mut cur = start;
    for ev in &out.trace {
        cur = replay(&cur, ev, &mut Ctx { sig: &sig, gen: &mut gen }).unwrap_or_else(|| panic!("{} failed to replay", ev.rule));
        assert_eq!(cur, ev.after);
    }
    assert_eq!(cur, out.result);
}

#[test]
fn solving_is_deterministic() {
    let sig = Signature::with_symbols(&["a", "b"], &["g"]);
    let src = "g(?x, @X) = g(a, b, a) & @X in a* . b*";
    let f = parse_constraint(src, &sig).unwrap();
    let opts = SolveOptions { record_trace: true, ..SolveOptions::default() };
    let one = clph::solver::sol_with(&f, &sig, &mut VarGen::new(), &opts).unwrap();
    let two = clph::solver::sol_with(&f, &sig, &mut VarGen::new(), &opts).unwrap();
    assert_eq!(one.result, two.result);
    assert_eq!(one.trace, two.trace);
}
