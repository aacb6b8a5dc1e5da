//! The individual rewrite rules. Each literal-level rule inspects literal
//! `j` of a conjunction and returns the disjuncts replacing the conjunction.

use std::fmt;

use crate::automaton::intersect;
use crate::constraint::{Conj, Prim};
use crate::regex::{lf, Regex};
use crate::syntax::{perms_of, Functor, Hedge, Item, Signature, Subst, Term, Var, VarGen, VarKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RuleId {
    Log(u8),
    F(u8),
    D1,
    D2,
    Del(u8),
    E(u8),
    M(u8),
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleId::Log(n) => write!(f, "Log{n}"),
            RuleId::F(n) => write!(f, "F{n}"),
            RuleId::D1 => f.write_str("D1"),
            RuleId::D2 => f.write_str("D2"),
            RuleId::Del(n) => write!(f, "Del{n}"),
            RuleId::E(n) => write!(f, "E{n}"),
            RuleId::M(n) => write!(f, "M{n}"),
        }
    }
}

impl RuleId {
    pub fn parse(s: &str) -> Option<RuleId> {
        let split = s.find(|c: char| c.is_ascii_digit())?;
        let (name, num) = s.split_at(split);
        let n: u8 = num.parse().ok()?;
        let r = match name {
            "Log" => RuleId::Log(n),
            "F" => RuleId::F(n),
            "D" if n == 1 => RuleId::D1,
            "D" if n == 2 => RuleId::D2,
            "Del" => RuleId::Del(n),
            "E" => RuleId::E(n),
            "M" => RuleId::M(n),
            _ => return None,
        };
        ALL_RULES.contains(&r).then_some(r)
    }
}

/// Rule order used by `step`: Log, Fail, Del, Dec, Elim, Memb. M8 comes
/// last so that it only fires when no other rule applies.
pub const ALL_RULES: &[RuleId] = &[
    RuleId::Log(1),
    RuleId::Log(2),
    RuleId::Log(3),
    RuleId::Log(4),
    RuleId::Log(5),
    RuleId::Log(6),
    RuleId::Log(7),
    RuleId::Log(8),
    RuleId::F(1),
    RuleId::F(2),
    RuleId::F(3),
    RuleId::F(4),
    RuleId::F(5),
    RuleId::F(6),
    RuleId::F(7),
    RuleId::Del(1),
    RuleId::Del(2),
    RuleId::Del(3),
    RuleId::D1,
    RuleId::D2,
    RuleId::E(1),
    RuleId::E(2),
    RuleId::E(3),
    RuleId::E(4),
    RuleId::E(5),
    RuleId::E(6),
    RuleId::E(7),
    RuleId::M(1),
    RuleId::M(2),
    RuleId::M(3),
    RuleId::M(4),
    RuleId::M(5),
    RuleId::M(6),
    RuleId::M(7),
    RuleId::M(9),
    RuleId::M(10),
    RuleId::M(11),
    RuleId::M(12),
    RuleId::M(8),
];

pub struct Ctx<'a> {
    pub sig: &'a Signature,
    pub gen: &'a mut VarGen,
}

/// Disjuncts replacing the conjunction, or `None` if the rule does not match.
pub(crate) type Replacement = Option<Vec<Conj>>;

fn single_var(h: &Hedge) -> Option<&Var> {
    match h.items() {
        [Item::Term(Term::Var(v))] | [Item::HVar(v)] => Some(v),
        _ => None,
    }
}

fn app(h: &Hedge) -> Option<(&Functor, &Hedge)> {
    match h.as_single_term() {
        Some(Term::App(f, args)) => Some((f, args)),
        _ => None,
    }
}

fn sym_app<'a>(h: &'a Hedge, sig: &Signature, unordered: bool) -> Option<(&'a crate::syntax::Symbol, &'a Hedge)> {
    match app(h)? {
        (Functor::Sym(f), args) if sig.is_unordered(f) == unordered => Some((f, args)),
        _ => None,
    }
}

/// Whether `v` occurs in a literal other than `j`.
fn elsewhere(lits: &[Prim], j: usize, v: &Var) -> bool {
    lits.iter().enumerate().any(|(k, p)| k != j && p.contains_var(v))
}

/// Replaces literal `j` by `new` and applies `theta` to every other literal.
fn rebuild(lits: &[Prim], j: usize, new: Vec<Prim>, theta: Option<&Subst>, sig: &Signature) -> Conj {
    let mut out = Vec::with_capacity(lits.len() + new.len());
    for (k, p) in lits.iter().enumerate() {
        if k == j {
            out.extend(new.iter().cloned());
        } else {
            match theta {
                Some(s) => out.push(p.apply(s, sig)),
                None => out.push(p.clone()),
            }
        }
    }
    Conj::Lits(out)
}

fn one(c: Conj) -> Replacement {
    Some(vec![c])
}

fn falsity() -> Replacement {
    Some(vec![Conj::False])
}

fn first_term_pos(h: &Hedge) -> Option<usize> {
    h.items().iter().position(|i| matches!(i, Item::Term(_)))
}

pub(crate) fn apply_at(rule: RuleId, lits: &[Prim], j: usize, ctx: &mut Ctx) -> Replacement {
    let sig = ctx.sig;
    let p = &lits[j];
    match rule {
        RuleId::Log(1) => lits[..j].contains(p).then(|| rebuild(lits, j, vec![], None, sig)).map(|c| vec![c]),
        RuleId::Log(7) => {
            let same = match p {
                Prim::Eq(l, r) => l == r,
                Prim::FEq(f, g) => f == g,
                Prim::In(..) => false,
            };
            same.then(|| vec![rebuild(lits, j, vec![], None, sig)])
        }
        RuleId::Log(8) => match p {
            Prim::In(h, r) if h.is_empty() && r.nullable() => one(rebuild(lits, j, vec![], None, sig)),
            _ => None,
        },
        RuleId::F(1) => {
            for (a, b) in p.orientations() {
                if let Some(Term::Var(x)) = a.as_single_term() {
                    let hit = b.items().iter().any(|i| matches!(i, Item::Term(Term::App(_, h)) if h.contains_var(x)));
                    if hit {
                        return falsity();
                    }
                }
            }
            None
        }
        RuleId::F(2) => {
            for (a, b) in p.orientations() {
                if let Some(x) = a.as_single_hvar() {
                    if first_term_pos(b).is_some() && b.contains_var(x) {
                        return falsity();
                    }
                }
            }
            None
        }
        RuleId::F(3) => {
            if let Prim::Eq(l, r) = p {
                if let (Some((Functor::Sym(f), _)), Some((Functor::Sym(g), _))) = (app(l), app(r)) {
                    if f != g {
                        return falsity();
                    }
                }
            }
            None
        }
        RuleId::F(4) => {
            for (a, b) in p.orientations() {
                if a.is_empty() && first_term_pos(b).is_some() {
                    return falsity();
                }
            }
            None
        }
        RuleId::F(5) => match p {
            Prim::In(h, Regex::Sym(g, _)) => match app(h) {
                Some((Functor::Sym(f), _)) if f != g => falsity(),
                _ => None,
            },
            _ => None,
        },
        RuleId::F(6) => match p {
            Prim::In(h, r) if h.is_empty() && !r.nullable() => falsity(),
            _ => None,
        },
        RuleId::F(7) => match p {
            Prim::In(h, Regex::Eps) if first_term_pos(h).is_some() => falsity(),
            _ => None,
        },
        RuleId::Del(1) => {
            if let Prim::Eq(l, r) = p {
                if let (Some(Item::HVar(x)), Some(Item::HVar(y))) = (l.items().first(), r.items().first()) {
                    if x == y {
                        return one(rebuild(lits, j, vec![Prim::eq(l.tail(1), r.tail(1), sig)], None, sig));
                    }
                }
            }
            None
        }
        RuleId::Del(2) => {
            if let Prim::Eq(l, r) = p {
                let (Some((f, ha)), Some((g, hb))) = (sym_app(l, sig, true), sym_app(r, sig, true)) else {
                    return None;
                };
                if f != g {
                    return None;
                }
                for (ia, item) in ha.items().iter().enumerate() {
                    if let Some(ib) = hb.items().iter().position(|x| x == item) {
                        let mut na = ha.0.clone();
                        na.remove(ia);
                        let mut nb = hb.0.clone();
                        nb.remove(ib);
                        let fun = Functor::Sym(f.clone());
                        let new = Prim::eq(
                            Hedge::single(Term::App(fun.clone(), Hedge(na))),
                            Hedge::single(Term::App(fun, Hedge(nb))),
                            sig,
                        );
                        return one(rebuild(lits, j, vec![new], None, sig));
                    }
                }
            }
            None
        }
        RuleId::Del(3) => {
            for (a, b) in p.orientations() {
                let Some(x) = a.as_single_hvar() else { continue };
                let Some(k) = b.items().iter().skip(1).position(|i| matches!(i, Item::HVar(y) if y == x)) else {
                    continue;
                };
                let k = k + 1;
                let new = vec![
                    Prim::eq(b.slice(0, k), Hedge::empty(), sig),
                    Prim::eq(b.tail(k + 1), Hedge::empty(), sig),
                ];
                return one(rebuild(lits, j, new, None, sig));
            }
            None
        }
        RuleId::D1 => {
            for (a, b) in p.orientations() {
                let (Some((f, h)), Some((g, t))) = (sym_app(a, sig, true), sym_app(b, sig, true)) else {
                    continue;
                };
                if f != g || !t.is_term_seq() || h.items().iter().any(|i| t.items().contains(i)) {
                    continue;
                }
                let out = perms_of(t.items())
                    .into_iter()
                    .map(|tp| rebuild(lits, j, vec![Prim::eq(h.clone(), Hedge(tp), sig)], None, sig))
                    .collect();
                return Some(out);
            }
            None
        }
        RuleId::D2 => {
            for (a, b) in p.orientations() {
                let (Some(Item::Term(t1)), Some(Item::Term(t2))) = (a.items().first(), b.items().first()) else {
                    continue;
                };
                if a.len() == 1 && b.len() == 1 {
                    continue;
                }
                let new = vec![
                    Prim::term_eq(t1.clone(), t2.clone(), sig),
                    Prim::eq(a.tail(1), b.tail(1), sig),
                ];
                return one(rebuild(lits, j, new, None, sig));
            }
            None
        }
        RuleId::E(1) => {
            for (a, b) in p.orientations() {
                let (Some(Term::Var(x)), Some(t)) = (a.as_single_term(), b.as_single_term()) else {
                    continue;
                };
                if t.contains_var(x) || !elsewhere(lits, j, x) {
                    continue;
                }
                if let Term::Var(y) = t {
                    if !elsewhere(lits, j, y) {
                        continue;
                    }
                }
                let theta = Subst::term(x.clone(), t.clone());
                let new = Prim::Eq(a.clone(), b.clone());
                return one(rebuild(lits, j, vec![new], Some(&theta), sig));
            }
            None
        }
        RuleId::E(2) => {
            for (a, b) in p.orientations() {
                let Some(x) = a.as_single_hvar() else { continue };
                if b.contains_var(x) || !elsewhere(lits, j, x) {
                    continue;
                }
                if let Some(y) = b.as_single_hvar() {
                    if !elsewhere(lits, j, y) {
                        continue;
                    }
                }
                let theta = Subst::hedge(x.clone(), b.clone());
                let new = Prim::Eq(a.clone(), b.clone());
                return one(rebuild(lits, j, vec![new], Some(&theta), sig));
            }
            None
        }
        RuleId::E(3) => {
            for (a, b) in p.orientations() {
                let Some(Item::HVar(x)) = a.items().first() else { continue };
                if a.len() < 2 || !b.is_term_seq() || b.contains_var(x) {
                    continue;
                }
                let h = a.tail(1);
                let out = (0..=b.len())
                    .map(|k| {
                        let t1 = b.slice(0, k);
                        let theta = Subst::hedge(x.clone(), t1.clone());
                        let new = vec![
                            Prim::Eq(Hedge::hvar(x.clone()), t1),
                            Prim::eq(h.apply(&theta), b.tail(k), sig),
                        ];
                        rebuild(lits, j, new, Some(&theta), sig)
                    })
                    .collect();
                return Some(out);
            }
            None
        }
        RuleId::E(4) => {
            for (a, b) in p.orientations() {
                let Some(Item::HVar(x)) = a.items().first() else { continue };
                if a.len() < 2 {
                    continue;
                }
                let Some(pos) = b.items().iter().position(|i| !matches!(i, Item::Term(t) if !t.contains_var(x)))
                else {
                    continue;
                };
                if !matches!(&b.items()[pos], Item::Term(_)) {
                    continue;
                }
                let h1 = a.tail(1);
                let out = (0..=pos)
                    .map(|k| {
                        let t1 = b.slice(0, k);
                        let theta = Subst::hedge(x.clone(), t1.clone());
                        let new = vec![
                            Prim::Eq(Hedge::hvar(x.clone()), t1),
                            Prim::eq(h1.apply(&theta), b.tail(k).apply(&theta), sig),
                        ];
                        rebuild(lits, j, new, Some(&theta), sig)
                    })
                    .collect();
                return Some(out);
            }
            None
        }
        RuleId::E(5) => {
            let Prim::FEq(l, r) = p else { return None };
            for (a, b) in [(l, r), (r, l)] {
                let Functor::Var(fv) = a else { continue };
                if a == b {
                    continue;
                }
                if !elsewhere(lits, j, fv) {
                    continue;
                }
                if let Functor::Var(g) = b {
                    if !elsewhere(lits, j, g) {
                        continue;
                    }
                }
                let theta = Subst::func(fv.clone(), b.clone());
                return one(rebuild(lits, j, vec![Prim::FEq(a.clone(), b.clone())], Some(&theta), sig));
            }
            None
        }
        RuleId::E(6) => {
            for (a, b) in p.orientations() {
                let (Some((Functor::Var(fv), h1)), Some((g, h2))) = (app(a), app(b)) else { continue };
                if Functor::Var(fv.clone()) == *g || (h1.is_empty() && h2.is_empty()) {
                    continue;
                }
                let theta = Subst::func(fv.clone(), g.clone());
                let new = vec![
                    Prim::FEq(Functor::Var(fv.clone()), g.clone()),
                    Prim::eq(
                        Hedge::single(Term::App(g.clone(), h1.apply(&theta))),
                        Hedge::single(Term::App(g.clone(), h2.apply(&theta))),
                        sig,
                    ),
                ];
                return one(rebuild(lits, j, new, Some(&theta), sig));
            }
            None
        }
        RuleId::E(7) => {
            let Prim::Eq(l, r) = p else { return None };
            let (Some((Functor::Var(fv), h1)), Some((Functor::Var(gv), h2))) = (app(l), app(r)) else {
                return None;
            };
            if fv != gv || h1 == h2 {
                return None;
            }
            let out = sig
                .symbols()
                .into_iter()
                .map(|f| {
                    let fun = Functor::Sym(f);
                    let theta = Subst::func(fv.clone(), fun.clone());
                    let new = vec![
                        Prim::FEq(Functor::Var(fv.clone()), fun.clone()),
                        Prim::eq(
                            Hedge::single(Term::App(fun.clone(), h1.apply(&theta))),
                            Hedge::single(Term::App(fun, h2.apply(&theta))),
                            sig,
                        ),
                    ];
                    rebuild(lits, j, new, Some(&theta), sig)
                })
                .collect::<Vec<_>>();
            Some(if out.is_empty() { vec![Conj::False] } else { out })
        }
        RuleId::M(1) => {
            let Prim::In(h, Regex::Eps) = p else { return None };
            if h.is_empty() || !h.items().iter().all(|i| matches!(i, Item::HVar(_))) {
                return None;
            }
            let mut vars: Vec<Var> = Vec::new();
            for i in h.items() {
                if let Item::HVar(v) = i {
                    if !vars.contains(v) {
                        vars.push(v.clone());
                    }
                }
            }
            let mut theta = Subst::new();
            for v in &vars {
                theta.hedges.insert(v.clone(), Hedge::empty());
            }
            let new = vars.iter().map(|v| Prim::Eq(Hedge::hvar(v.clone()), Hedge::empty())).collect();
            one(rebuild(lits, j, new, Some(&theta), sig))
        }
        RuleId::M(2) => {
            let Prim::In(h, r) = p else { return None };
            if *r == Regex::Eps || h.len() < 2 {
                return None;
            }
            let Some(Item::Term(t)) = h.items().first() else { return None };
            let rest = h.tail(1);
            let out: Vec<Conj> = lf(r)
                .into_iter()
                .map(|(f, b, tail)| {
                    let new = vec![
                        Prim::In(Hedge::single(t.clone()), Regex::Sym(f, Box::new(b))),
                        Prim::In(rest.clone(), tail),
                    ];
                    rebuild(lits, j, new, None, sig)
                })
                .collect();
            Some(if out.is_empty() { vec![Conj::False] } else { out })
        }
        RuleId::M(3) => {
            let Prim::In(h, r @ Regex::Sym(..)) = p else { return None };
            let Some(Item::HVar(x)) = h.items().first() else { return None };
            if h.len() < 2 {
                return None;
            }
            let rest = h.tail(1);
            let xh = Hedge::hvar(x.clone());
            let d1 = vec![Prim::In(xh.clone(), r.clone()), Prim::eq(rest.clone(), Hedge::empty(), sig)];
            let d2 = vec![Prim::Eq(xh, Hedge::empty()), Prim::In(rest, r.clone())];
            Some(vec![rebuild(lits, j, d1, None, sig), rebuild(lits, j, d2, None, sig)])
        }
        RuleId::M(4) => match p {
            Prim::In(h, Regex::Star(r)) if h.as_single_term().is_some() => {
                one(rebuild(lits, j, vec![Prim::In(h.clone(), (**r).clone())], None, sig))
            }
            _ => None,
        },
        RuleId::M(5) => match p {
            Prim::In(h, Regex::Concat(r1, r2)) if h.as_single_term().is_some() => {
                let e = Hedge::empty();
                let d1 = vec![Prim::In(h.clone(), (**r1).clone()), Prim::In(e.clone(), (**r2).clone())];
                let d2 = vec![Prim::In(e, (**r1).clone()), Prim::In(h.clone(), (**r2).clone())];
                Some(vec![rebuild(lits, j, d1, None, sig), rebuild(lits, j, d2, None, sig)])
            }
            _ => None,
        },
        RuleId::M(6) | RuleId::M(7) => match p {
            Prim::In(h, Regex::Choice(r1, r2)) => {
                let ok = if rule == RuleId::M(6) {
                    h.as_single_term().is_some()
                } else {
                    matches!(h.items().first(), Some(Item::HVar(_)))
                };
                ok.then(|| {
                    vec![
                        rebuild(lits, j, vec![Prim::In(h.clone(), (**r1).clone())], None, sig),
                        rebuild(lits, j, vec![Prim::In(h.clone(), (**r2).clone())], None, sig),
                    ]
                })
            }
            _ => None,
        },
        RuleId::M(9) => {
            let Prim::In(h, r @ Regex::Sym(..)) = p else { return None };
            let x = h.as_single_hvar()?;
            let fresh = ctx.gen.fresh(VarKind::Term, "x");
            let theta = Subst::hedge(x.clone(), Hedge::single(Term::Var(fresh.clone())));
            let new = vec![
                Prim::Eq(Hedge::hvar(x.clone()), Hedge::single(Term::Var(fresh.clone()))),
                Prim::In(Hedge::single(Term::Var(fresh)), r.clone()),
            ];
            one(rebuild(lits, j, new, Some(&theta), sig))
        }
        RuleId::M(10) => {
            let Prim::In(h, r @ Regex::Sym(f, _)) = p else { return None };
            let (Functor::Var(fv), args) = app(h)? else { return None };
            let fun = Functor::Sym(f.clone());
            let theta = Subst::func(fv.clone(), fun.clone());
            let new = vec![
                Prim::FEq(Functor::Var(fv.clone()), fun.clone()),
                Prim::In(Hedge::single(Term::App(fun, args.apply(&theta))), r.clone()),
            ];
            one(rebuild(lits, j, new, Some(&theta), sig))
        }
        RuleId::M(11) => {
            let Prim::In(h, Regex::Sym(g, body)) = p else { return None };
            let (f, args) = sym_app(h, sig, false)?;
            (f == g).then(|| vec![rebuild(lits, j, vec![Prim::In(args.clone(), (**body).clone())], None, sig)])
        }
        RuleId::M(12) => {
            let Prim::In(h, Regex::Sym(g, body)) = p else { return None };
            let (f, args) = sym_app(h, sig, true)?;
            if f != g || !args.is_term_seq() {
                return None;
            }
            let out = perms_of(args.items())
                .into_iter()
                .map(|tp| rebuild(lits, j, vec![Prim::In(Hedge(tp), (**body).clone())], None, sig))
                .collect();
            Some(out)
        }
        RuleId::M(8) => {
            let Prim::In(h, r1) = p else { return None };
            let v = single_var(h)?;
            for (k, q) in lits.iter().enumerate().skip(j + 1) {
                let Prim::In(h2, r2) = q else { continue };
                if single_var(h2) != Some(v) {
                    continue;
                }
                let Ok(res) = intersect(r1, r2, sig) else { continue };
                let Some(r) = res else { return falsity() };
                let mut out: Vec<Prim> = Vec::with_capacity(lits.len() - 1);
                for (i, x) in lits.iter().enumerate() {
                    if i == j {
                        out.push(Prim::In(h.clone(), r.clone()));
                    } else if i != k {
                        out.push(x.clone());
                    }
                }
                return one(Conj::Lits(out));
            }
            None
        }
        _ => None,
    }
}
