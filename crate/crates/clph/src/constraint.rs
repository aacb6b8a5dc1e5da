//! Primitive constraints, conjunctions, DNF constraints and the solved /
//! partially solved classification.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::regex::Regex;
use crate::syntax::{Functor, Hedge, Item, Signature, Subst, Term, Var, VarKind};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Prim {
    Eq(Hedge, Hedge),
    FEq(Functor, Functor),
    In(Hedge, Regex),
}

impl Prim {
    /// Builds `l ≐ r`, peeling equal ordered heads off singleton sides and
    /// turning `F1() ≐ F2()` into a functor equation when a variable is involved.
    pub fn eq(mut l: Hedge, mut r: Hedge, sig: &Signature) -> Prim {
        loop {
            match (l.as_single_term(), r.as_single_term()) {
                (Some(Term::App(f, hl)), Some(Term::App(g, hr))) => {
                    if let (Functor::Sym(f), Functor::Sym(g)) = (f, g) {
                        if f == g && !sig.is_unordered(f) {
                            let (nl, nr) = (hl.clone(), hr.clone());
                            l = nl;
                            r = nr;
                            continue;
                        }
                    }
                    let has_var = matches!(f, Functor::Var(_)) || matches!(g, Functor::Var(_));
                    if has_var && hl.is_empty() && hr.is_empty() {
                        return Prim::FEq(f.clone(), g.clone());
                    }
                    return Prim::Eq(l, r);
                }
                _ => return Prim::Eq(l, r),
            }
        }
    }

    pub fn term_eq(l: Term, r: Term, sig: &Signature) -> Prim {
        Prim::eq(Hedge::single(l), Hedge::single(r), sig)
    }

    pub fn member(h: Hedge, r: Regex) -> Prim {
        Prim::In(h, r)
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Prim::Eq(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
            Prim::FEq(f, g) => {
                for x in [f, g] {
                    if let Functor::Var(v) = x {
                        out.insert(v.clone());
                    }
                }
            }
            Prim::In(h, _) => h.collect_vars(out),
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn contains_var(&self, v: &Var) -> bool {
        match self {
            Prim::Eq(l, r) => l.contains_var(v) || r.contains_var(v),
            Prim::FEq(f, g) => [f, g].iter().any(|x| matches!(x, Functor::Var(w) if w == v)),
            Prim::In(h, _) => h.contains_var(v),
        }
    }

    pub fn apply(&self, s: &Subst, sig: &Signature) -> Prim {
        match self {
            Prim::Eq(l, r) => Prim::eq(l.apply(s), r.apply(s), sig),
            Prim::FEq(f, g) => {
                let l = Hedge::single(Term::App(f.apply(s), Hedge::empty()));
                let r = Hedge::single(Term::App(g.apply(s), Hedge::empty()));
                Prim::eq(l, r, sig)
            }
            Prim::In(h, r) => Prim::In(h.apply(s), r.clone()),
        }
    }

    pub fn is_membership(&self) -> bool {
        matches!(self, Prim::In(..))
    }

    /// Both orientations of an equation, lhs-first; memberships yield nothing.
    pub fn orientations(&self) -> Vec<(&Hedge, &Hedge)> {
        match self {
            Prim::Eq(l, r) => vec![(l, r), (r, l)],
            _ => Vec::new(),
        }
    }
}

/// A conjunction of primitive constraints; an empty literal list is `true`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Conj {
    False,
    Lits(Vec<Prim>),
}

impl Conj {
    pub fn truth() -> Conj {
        Conj::Lits(Vec::new())
    }

    pub fn is_true(&self) -> bool {
        matches!(self, Conj::Lits(l) if l.is_empty())
    }

    pub fn lits(&self) -> &[Prim] {
        match self {
            Conj::False => &[],
            Conj::Lits(l) => l,
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        for p in self.lits() {
            p.collect_vars(&mut out);
        }
        out
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Dnf(pub Vec<Conj>);

impl Dnf {
    pub fn truth() -> Dnf {
        Dnf(vec![Conj::truth()])
    }

    pub fn falsity() -> Dnf {
        Dnf(vec![Conj::False])
    }

    pub fn conj(lits: Vec<Prim>) -> Dnf {
        Dnf(vec![Conj::Lits(lits)])
    }

    pub fn is_false(&self) -> bool {
        self.0.iter().all(|c| matches!(c, Conj::False))
    }

    pub fn is_true(&self) -> bool {
        self.0.len() == 1 && self.0[0].is_true()
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.0.iter().flat_map(|c| c.vars()).collect()
    }

    /// `self ∧ p`, distributed over the disjuncts.
    pub fn and_prim(&self, p: &Prim) -> Dnf {
        Dnf(self
            .0
            .iter()
            .map(|c| match c {
                Conj::False => Conj::False,
                Conj::Lits(l) => {
                    let mut l = l.clone();
                    l.push(p.clone());
                    Conj::Lits(l)
                }
            })
            .collect())
    }
}

/// A quantifier-free constraint formula.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Formula {
    True,
    False,
    Prim(Prim),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Not(Box<Formula>),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DnfError {
    #[error("negation is not supported in constraints")]
    Negation,
}

/// Distributes conjunction over disjunction, left to right.
pub fn dnf(f: &Formula) -> Result<Dnf, DnfError> {
    Ok(Dnf(dnf_rec(f)?))
}

fn dnf_rec(f: &Formula) -> Result<Vec<Conj>, DnfError> {
    Ok(match f {
        Formula::True => vec![Conj::truth()],
        Formula::False => vec![Conj::False],
        Formula::Prim(p) => vec![Conj::Lits(vec![p.clone()])],
        Formula::Or(fs) => {
            let mut out = Vec::new();
            for g in fs {
                out.extend(dnf_rec(g)?);
            }
            if out.is_empty() {
                out.push(Conj::False);
            }
            out
        }
        Formula::And(fs) => {
            let mut acc = vec![Conj::truth()];
            for g in fs {
                let right = dnf_rec(g)?;
                let mut next = Vec::with_capacity(acc.len() * right.len());
                for a in &acc {
                    for b in &right {
                        next.push(match (a, b) {
                            (Conj::Lits(x), Conj::Lits(y)) => {
                                let mut l = x.clone();
                                l.extend(y.iter().cloned());
                                Conj::Lits(l)
                            }
                            _ => Conj::False,
                        });
                    }
                }
                acc = next;
            }
            acc
        }
        Formula::Not(_) => return Err(DnfError::Negation),
    })
}

fn lhs_var(l: &Hedge) -> Option<&Var> {
    match l.items() {
        [Item::Term(Term::Var(v))] | [Item::HVar(v)] => Some(v),
        _ => None,
    }
}

fn elsewhere(v: &Var, lits: &[Prim], i: usize) -> bool {
    lits.iter().enumerate().any(|(j, p)| j != i && p.contains_var(v))
}

fn in_other_membership(v: &Var, lits: &[Prim], i: usize) -> bool {
    lits.iter().enumerate().any(|(j, p)| j != i && p.is_membership() && p.contains_var(v))
}

/// The variable that literal `i` solves in `lits`, if any.
pub fn solved_var(lits: &[Prim], i: usize) -> Option<Var> {
    match &lits[i] {
        Prim::Eq(l, r) => {
            for (a, b) in [(l, r), (r, l)] {
                let Some(v) = lhs_var(a) else { continue };
                let shape_ok = match v.kind {
                    VarKind::Term => b.as_single_term().is_some(),
                    _ => true,
                };
                if shape_ok && !b.contains_var(v) && !elsewhere(v, lits, i) {
                    return Some(v.clone());
                }
            }
            None
        }
        Prim::FEq(f, g) => {
            for (a, b) in [(f, g), (g, f)] {
                if let Functor::Var(v) = a {
                    if a != b && !elsewhere(v, lits, i) {
                        return Some(v.clone());
                    }
                }
            }
            None
        }
        Prim::In(h, r) => {
            let v = lhs_var(h)?;
            let ok = match v.kind {
                VarKind::Term => matches!(r, Regex::Sym(..)),
                _ => matches!(r, Regex::Concat(..) | Regex::Star(..)),
            };
            (ok && !in_other_membership(v, lits, i)).then(|| v.clone())
        }
    }
}

pub fn var_solved_in(v: &Var, lits: &[Prim]) -> bool {
    (0..lits.len()).any(|i| solved_var(lits, i).as_ref() == Some(v))
}

/// Variables solved by an equation (the measure's notion of "solved").
pub fn eq_solved_vars(lits: &[Prim]) -> BTreeSet<Var> {
    (0..lits.len())
        .filter(|&i| !lits[i].is_membership())
        .filter_map(|i| solved_var(lits, i))
        .collect()
}

fn disjoint(a: &Hedge, b: &Hedge) -> bool {
    a.items().iter().all(|x| !b.items().contains(x))
}

fn first_hvar(h: &Hedge) -> Option<&Var> {
    match h.items().first() {
        Some(Item::HVar(v)) => Some(v),
        _ => None,
    }
}

/// Matches one of the irreducible forms allowed in partially solved conjunctions.
pub fn is_stuck(p: &Prim, sig: &Signature) -> bool {
    match p {
        Prim::In(h, r) => {
            if let (Some(Term::App(Functor::Sym(f), args)), Regex::Sym(g, _)) = (h.as_single_term(), r) {
                if f == g && sig.is_unordered(f) && args.items().iter().any(|i| matches!(i, Item::HVar(_))) {
                    return true;
                }
            }
            first_hvar(h).is_some() && h.len() > 1 && matches!(r, Regex::Concat(..) | Regex::Star(..))
        }
        Prim::Eq(l, r) => {
            for (a, b) in [(l, r), (r, l)] {
                if let (Some(x), Some(y)) = (first_hvar(a), first_hvar(b)) {
                    if x != y && a.len() > 1 && b.len() > 1 {
                        return true;
                    }
                }
                if let Some(x) = first_hvar(a) {
                    let k = b.items().iter().take_while(|i| matches!(i, Item::Term(_))).count();
                    let t = b.slice(0, k);
                    if a.len() > 1 && k > 0 && k < b.len() && !t.contains_var(x) {
                        return true;
                    }
                }
            }
            if let (Some(Term::App(Functor::Sym(f), ha)), Some(Term::App(Functor::Sym(g), hb))) =
                (l.as_single_term(), r.as_single_term())
            {
                let has_hvar = |h: &Hedge| h.items().iter().any(|i| matches!(i, Item::HVar(_)));
                if f == g && sig.is_unordered(f) && has_hvar(ha) && has_hvar(hb) && disjoint(ha, hb) {
                    return true;
                }
            }
            false
        }
        Prim::FEq(..) => false,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Class {
    False,
    Solved,
    PartiallySolved,
    Active,
}

pub fn classify(c: &Conj, sig: &Signature) -> Class {
    let lits = match c {
        Conj::False => return Class::False,
        Conj::Lits(l) => l,
    };
    let mut class = Class::Solved;
    for i in 0..lits.len() {
        if solved_var(lits, i).is_some() {
            continue;
        }
        if is_stuck(&lits[i], sig) {
            class = Class::PartiallySolved;
        } else {
            return Class::Active;
        }
    }
    class
}

/// Solved if every disjunct is; `False` only for the false constraint.
pub fn classify_dnf(d: &Dnf, sig: &Signature) -> Class {
    if d.is_false() {
        return Class::False;
    }
    let mut class = Class::Solved;
    for c in &d.0 {
        match classify(c, sig) {
            Class::Active => return Class::Active,
            Class::PartiallySolved => class = Class::PartiallySolved,
            _ => {}
        }
    }
    class
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        Signature::with_symbols(&["a", "b", "c", "f"], &["g"])
    }
    fn t(name: &str) -> Item {
        Item::Term(Term::constant(name))
    }
    fn hv(name: &str) -> Item {
        Item::HVar(Var::hedge(name))
    }

    #[test]
    fn ordered_heads_are_peeled() {
        let l = Hedge::single(Term::sym("f", vec![hv("X"), t("a")]));
        let r = Hedge::single(Term::sym("f", vec![t("b"), t("a")]));
        assert_eq!(Prim::eq(l, r, &sig()), Prim::Eq(Hedge(vec![hv("X"), t("a")]), Hedge(vec![t("b"), t("a")])));
    }

    #[test]
    fn unordered_heads_are_kept() {
        let l = Hedge::single(Term::sym("g", vec![t("a")]));
        let p = Prim::eq(l.clone(), l.clone(), &sig());
        assert_eq!(p, Prim::Eq(l.clone(), l));
    }

    #[test]
    fn nullary_functor_equations() {
        let f = Term::App(Functor::Var(Var::func("F")), Hedge::empty());
        assert_eq!(
            Prim::term_eq(f, Term::constant("a"), &sig()),
            Prim::FEq(Functor::Var(Var::func("F")), Functor::sym("a"))
        );
    }

    #[test]
    fn dnf_distributes_left_to_right() {
        let p = |n: &str| Formula::Prim(Prim::term_eq(Term::constant(n), Term::constant(n), &sig()));
        let f = Formula::And(vec![p("a"), Formula::Or(vec![p("b"), p("c")])]);
        assert_eq!(dnf(&f).unwrap().0.len(), 2);
        assert_eq!(dnf(&Formula::True).unwrap(), Dnf::truth());
        let five = Formula::And((0..5).map(|_| Formula::Or(vec![p("a"), p("b")])).collect());
        assert_eq!(dnf(&five).unwrap().0.len(), 32);
        assert!(dnf(&Formula::Not(Box::new(Formula::True))).is_err());
    }

    #[test]
    fn solved_variables() {
        let x = Var::term("x");
        let eq = Prim::Eq(Hedge::single(Term::var("x")), Hedge::single(Term::sym("f", vec![t("a")])));
        assert!(var_solved_in(&x, &[eq]));
        let occ = Prim::Eq(
            Hedge::single(Term::var("x")),
            Hedge::single(Term::sym("f", vec![Item::Term(Term::var("x"))])),
        );
        assert!(!var_solved_in(&x, &[occ]));
        let xv = Var::hedge("X");
        let star = |s: &str| Regex::star(Regex::atom(s));
        let m1 = Prim::In(Hedge(vec![hv("X")]), Regex::concat(star("a"), star("b")));
        assert!(var_solved_in(&xv, std::slice::from_ref(&m1)));
        let m2 = Prim::In(Hedge(vec![hv("X"), t("c")]), star("c"));
        assert!(!var_solved_in(&xv, &[m1, m2]));
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify(&Conj::truth(), &sig()), Class::Solved);
        let stuck = Prim::Eq(Hedge(vec![hv("X"), t("a")]), Hedge(vec![hv("Y"), t("b")]));
        assert_eq!(classify(&Conj::Lits(vec![stuck]), &sig()), Class::PartiallySolved);
        let clash = Prim::Eq(Hedge::single(Term::sym("f", vec![t("a")])), Hedge::single(Term::sym("f", vec![t("b")])));
        assert_eq!(classify(&Conj::Lits(vec![clash]), &sig()), Class::Active);
    }
}
