//! Seeded random generators shared by the integration tests.
#![allow(dead_code)]

use clph::constraint::{Formula, Prim};
use clph::regex::Regex;
use clph::syntax::{Functor, Hedge, Item, Signature, Symbol, Term, Var, VarKind};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Symbols and variables a generator may draw from.
#[derive(Clone, Debug)]
pub struct Pool {
    pub sig: Signature,
    pub term_vars: Vec<Var>,
    pub hedge_vars: Vec<Var>,
    pub func_vars: Vec<Var>,
}

impl Pool {
    pub fn new(ordered: &[&str], unordered: &[&str], tv: &[&str], hv: &[&str], fv: &[&str]) -> Pool {
        Pool {
            sig: Signature::with_symbols(ordered, unordered),
            term_vars: tv.iter().map(|n| Var::term(n)).collect(),
            hedge_vars: hv.iter().map(|n| Var::hedge(n)).collect(),
            func_vars: fv.iter().map(|n| Var::func(n)).collect(),
        }
    }

    /// Four symbols, one unordered.
    pub fn standard() -> Pool {
        Pool::new(&["a", "b", "f"], &["g"], &["x", "y"], &["X", "Y", "Z"], &["F"])
    }

    fn symbols(&self) -> Vec<Symbol> {
        self.sig.symbols()
    }
}

/// A random term of at most `size` symbol and variable occurrences.
pub fn term(r: &mut Rng8, p: &Pool, size: usize) -> Term {
    if size <= 1 || r.gen_bool(0.3) {
        if !p.term_vars.is_empty() && r.gen_bool(0.35) {
            return Term::Var(p.term_vars.choose(r).unwrap().clone());
        }
        return Term::App(Functor::Sym(p.symbols().choose(r).unwrap().clone()), Hedge::empty());
    }
    let head = if !p.func_vars.is_empty() && r.gen_bool(0.15) {
        Functor::Var(p.func_vars.choose(r).unwrap().clone())
    } else {
        Functor::Sym(p.symbols().choose(r).unwrap().clone())
    };
    Term::App(head, hedge(r, p, size - 1, 3))
}

/// A random hedge of at most `width` items and `size` occurrences.
pub fn hedge(r: &mut Rng8, p: &Pool, size: usize, width: usize) -> Hedge {
    let n = r.gen_range(0..=width.min(size));
    let mut items = Vec::new();
    let mut left = size;
    for _ in 0..n {
        if left == 0 {
            break;
        }
        if !p.hedge_vars.is_empty() && r.gen_bool(0.3) {
            items.push(Item::HVar(p.hedge_vars.choose(r).unwrap().clone()));
            left -= 1;
        } else {
            let budget = r.gen_range(1..=left);
            let t = term(r, p, budget);
            left = left.saturating_sub(t.size().max(1));
            items.push(Item::Term(t));
        }
    }
    Hedge(items)
}

/// A random regex over the pool's symbols with at most `size` nodes.
pub fn regex(r: &mut Rng8, syms: &[Symbol], size: usize) -> Regex {
    if size <= 1 {
        return match r.gen_range(0..5) {
            0 => Regex::Eps,
            _ => Regex::Sym(syms.choose(r).unwrap().clone(), Box::new(Regex::Eps)),
        };
    }
    let ops = if size >= 3 { 4 } else { 2 };
    match r.gen_range(0..ops) {
        0 => Regex::Sym(syms.choose(r).unwrap().clone(), Box::new(regex(r, syms, size - 1))),
        1 => Regex::Star(Box::new(regex(r, syms, size - 1))),
        k => {
            let left = r.gen_range(1..=size - 2);
            let a = regex(r, syms, left);
            let b = regex(r, syms, size - 1 - left);
            if k == 2 {
                Regex::Concat(Box::new(a), Box::new(b))
            } else {
                Regex::Choice(Box::new(a), Box::new(b))
            }
        }
    }
}

/// `(f1(ρ) | ... | fk(ρ))*` over a random subset of `syms`, nested
/// `depth` deep; such languages are large enough that random memberships
/// are often satisfiable.
pub fn loose_regex(r: &mut Rng8, syms: &[Symbol], depth: usize) -> Regex {
    let mut pick: Vec<&Symbol> = syms.iter().filter(|_| r.gen_bool(0.7)).collect();
    if pick.is_empty() {
        pick.push(syms.choose(r).unwrap());
    }
    let alts = pick.into_iter().map(|f| {
        let body = if depth > 1 { loose_regex(r, syms, depth - 1) } else { Regex::Eps };
        Regex::Sym(f.clone(), Box::new(body))
    });
    let choice = alts.reduce(|a, b| Regex::Choice(Box::new(a), Box::new(b))).unwrap();
    Regex::Star(Box::new(choice))
}

/// A random equation or membership.
pub fn prim(r: &mut Rng8, p: &Pool, term_size: usize) -> Prim {
    if r.gen_bool(0.3) {
        let subject = hedge(r, p, 3, 2);
        return Prim::In(subject, regex(r, &p.symbols(), 4));
    }
    if !p.func_vars.is_empty() && r.gen_bool(0.05) {
        let f = Functor::Var(p.func_vars.choose(r).unwrap().clone());
        return Prim::FEq(f, Functor::Sym(p.symbols().choose(r).unwrap().clone()));
    }
    let l = if r.gen_bool(0.5) {
        Hedge::single(term(r, p, term_size))
    } else {
        hedge(r, p, term_size, 3)
    };
    if r.gen_bool(0.5) {
        let rt = mutate(r, p, &l);
        return Prim::eq(l, rt, &p.sig);
    }
    let rt = if r.gen_bool(0.5) {
        Hedge::single(term(r, p, term_size))
    } else {
        hedge(r, p, term_size, 3)
    };
    Prim::eq(l, rt, &p.sig)
}

/// A variant of `h` that often unifies with it: some items become
/// variables, some variables become small terms, and arguments of
/// unordered symbols may be shuffled.
pub fn mutate(r: &mut Rng8, p: &Pool, h: &Hedge) -> Hedge {
    let mut items = Vec::new();
    for it in h.items() {
        let roll: f64 = r.gen();
        match it {
            _ if roll < 0.15 && !p.hedge_vars.is_empty() => {
                items.push(Item::HVar(p.hedge_vars.choose(r).unwrap().clone()));
            }
            Item::Term(Term::App(f, args)) if roll < 0.85 => {
                let mut inner = mutate(r, p, args);
                if matches!(f, Functor::Sym(s) if p.sig.is_unordered(s)) {
                    inner.0.shuffle(r);
                }
                items.push(Item::Term(Term::App(f.clone(), inner)));
            }
            Item::Term(_) if roll < 0.9 && !p.term_vars.is_empty() => {
                items.push(Item::Term(Term::Var(p.term_vars.choose(r).unwrap().clone())));
            }
            Item::HVar(_) | Item::Term(Term::Var(_)) if roll < 0.95 => items.push(Item::Term(term(r, p, 2))),
            _ => items.push(it.clone()),
        }
    }
    Hedge(items)
}

/// A quantifier-free formula with `1..=max_lits` primitive constraints
/// combined by random conjunctions and disjunctions.
pub fn formula(r: &mut Rng8, p: &Pool, max_lits: usize, term_size: usize) -> Formula {
    let n = r.gen_range(1..=max_lits);
    let mut parts: Vec<Formula> = (0..n).map(|_| Formula::Prim(prim(r, p, term_size))).collect();
    while parts.len() > 1 {
        let i = r.gen_range(0..parts.len() - 1);
        let a = parts.remove(i);
        let b = parts.remove(i);
        parts.insert(i, if r.gen_bool(0.75) { Formula::And(vec![a, b]) } else { Formula::Or(vec![a, b]) });
    }
    parts.pop().unwrap()
}

/// Replaces random subterms of a ground hedge by fresh variables, which
/// become outputs; returns the pattern.
fn abstract_hedge(r: &mut Rng8, h: &Hedge, sig: &Signature, next: &mut usize, out: &mut Vec<Var>) -> Hedge {
    let mut items = Vec::new();
    let mut i = 0;
    let ts = h.items();
    while i < ts.len() {
        let roll: f64 = r.gen();
        if roll < 0.2 {
            let k = r.gen_range(i..=ts.len());
            let v = Var::hedge(&format!("V{next}"));
            *next += 1;
            out.push(v.clone());
            items.push(Item::HVar(v));
            i = k;
            continue;
        }
        let Item::Term(t) = &ts[i] else {
            items.push(ts[i].clone());
            i += 1;
            continue;
        };
        if roll < 0.45 {
            let v = Var::term(&format!("v{next}"));
            *next += 1;
            out.push(v.clone());
            items.push(Item::Term(Term::Var(v)));
        } else if let Term::App(f, args) = t {
            let unordered = matches!(f, Functor::Sym(s) if sig.is_unordered(s));
            let inner = if unordered && r.gen_bool(0.5) {
                let mut shuffled = args.items().to_vec();
                shuffled.shuffle(r);
                abstract_hedge(r, &Hedge(shuffled), sig, next, out)
            } else {
                abstract_hedge(r, args, sig, next, out)
            };
            items.push(Item::Term(Term::App(f.clone(), inner)));
        } else {
            items.push(ts[i].clone());
        }
        i += 1;
    }
    Hedge(items)
}

/// A well-moded conjunction by construction: each equation matches a
/// pattern with new variables against a side built from ground terms and
/// earlier outputs; memberships use earlier outputs only. The literal
/// order is shuffled afterwards.
pub fn well_moded(r: &mut Rng8, p: &Pool) -> Vec<Prim> {
    let ground_pool = Pool { term_vars: vec![], hedge_vars: vec![], func_vars: vec![], ..p.clone() };
    let mut outs: Vec<Var> = Vec::new();
    let mut lits = Vec::new();
    let mut next = 0;
    let n = r.gen_range(1..=4);
    for _ in 0..n {
        if !outs.is_empty() && r.gen_bool(0.3) {
            let v = outs.choose(r).unwrap().clone();
            let subject = match v.kind {
                VarKind::Term => Hedge::single(Term::Var(v)),
                _ => Hedge::hvar(v),
            };
            lits.push(Prim::In(subject, regex(r, &p.symbols(), 4)));
            continue;
        }
        let ground = hedge(r, &ground_pool, 6, 3);
        let mut known = ground.clone();
        if !outs.is_empty() && r.gen_bool(0.4) {
            let v = outs.choose(r).unwrap().clone();
            let item = match v.kind {
                VarKind::Term => Item::Term(Term::Var(v)),
                _ => Item::HVar(v),
            };
            known.0.insert(r.gen_range(0..=known.len()), item);
        }
        let pattern = if r.gen_bool(0.15) {
            hedge(r, &ground_pool, 4, 2)
        } else {
            abstract_hedge(r, &ground, &p.sig, &mut next, &mut outs)
        };
        let (l, rt) = if r.gen_bool(0.5) { (pattern, known) } else { (known, pattern) };
        lits.push(Prim::eq(l, rt, &p.sig));
    }
    lits.shuffle(r);
    lits
}

/// A KIF term: hedge variables appear only as the last argument of an
/// ordered symbol.
pub fn kif_term(r: &mut Rng8, p: &Pool, size: usize) -> Term {
    if size <= 1 || r.gen_bool(0.3) {
        if r.gen_bool(0.35) {
            return Term::Var(p.term_vars.choose(r).unwrap().clone());
        }
        return Term::App(Functor::Sym(p.symbols().choose(r).unwrap().clone()), Hedge::empty());
    }
    let f = p.symbols().choose(r).unwrap().clone();
    let unordered = p.sig.is_unordered(&f);
    let n = r.gen_range(0..=2);
    let mut items: Vec<Item> = (0..n).map(|_| Item::Term(kif_term(r, p, (size - 1) / 2))).collect();
    if !unordered && r.gen_bool(0.5) {
        items.push(Item::HVar(p.hedge_vars.choose(r).unwrap().clone()));
    }
    Term::App(Functor::Sym(f), Hedge(items))
}

/// A KIF hedge: KIF terms with an optional trailing hedge variable.
pub fn kif_hedge(r: &mut Rng8, p: &Pool, size: usize) -> Hedge {
    let n = r.gen_range(0..=2);
    let mut items: Vec<Item> = (0..n).map(|_| Item::Term(kif_term(r, p, size))).collect();
    if r.gen_bool(0.4) {
        items.push(Item::HVar(p.hedge_vars.choose(r).unwrap().clone()));
    }
    Hedge(items)
}

/// A KIF variant of the KIF hedge `h`: terms may become term variables
/// and, under ordered symbols and at the top, a suffix may collapse into a
/// trailing hedge variable.
pub fn kif_mutate(r: &mut Rng8, p: &Pool, h: &Hedge, top: bool) -> Hedge {
    let mut items = Vec::new();
    for it in h.items() {
        if top && r.gen_bool(0.15) {
            items.push(Item::HVar(p.hedge_vars.choose(r).unwrap().clone()));
            return Hedge(items);
        }
        match it {
            Item::Term(Term::App(f, args)) => {
                let roll: f64 = r.gen();
                if roll < 0.2 {
                    items.push(Item::Term(Term::Var(p.term_vars.choose(r).unwrap().clone())));
                } else {
                    let ordered = matches!(f, Functor::Sym(s) if !p.sig.is_unordered(s));
                    let mut inner = kif_mutate(r, p, args, ordered);
                    if !ordered {
                        inner.0.shuffle(r);
                    }
                    items.push(Item::Term(Term::App(f.clone(), inner)));
                }
            }
            Item::Term(Term::Var(_)) if r.gen_bool(0.3) => items.push(Item::Term(kif_term(r, p, 2))),
            _ => items.push(it.clone()),
        }
    }
    Hedge(items)
}

/// A random KIF conjunction.
pub fn kif(r: &mut Rng8, p: &Pool) -> Vec<Prim> {
    let n = r.gen_range(1..=4);
    (0..n)
        .map(|_| {
            if r.gen_bool(0.3) {
                let re = if r.gen_bool(0.7) { loose_regex(r, &p.symbols(), 3) } else { regex(r, &p.symbols(), 4) };
                Prim::In(kif_hedge(r, p, 3), re)
            } else if r.gen_bool(0.5) {
                let l = kif_hedge(r, p, 4);
                let rt = kif_mutate(r, p, &l, true);
                Prim::eq(l, rt, &p.sig)
            } else if r.gen_bool(0.5) {
                Prim::eq(Hedge::single(kif_term(r, p, 5)), Hedge::single(kif_term(r, p, 5)), &p.sig)
            } else {
                Prim::eq(kif_hedge(r, p, 4), kif_hedge(r, p, 4), &p.sig)
            }
        })
        .collect()
}

/// A ground ranked term over `syms` (name, arity) of at most `size` symbols.
pub fn ranked(r: &mut Rng8, syms: &[(&str, usize)], size: usize) -> Term {
    let fits: Vec<&(&str, usize)> = syms.iter().filter(|(_, n)| *n < size).collect();
    let (name, arity) = **fits.choose(r).expect("a constant fits");
    let mut left = size - 1 - arity;
    let mut args = Vec::new();
    for _ in 0..arity {
        let extra = if left > 0 { r.gen_range(0..=left) } else { 0 };
        left -= extra;
        args.push(Item::Term(ranked(r, syms, 1 + extra)));
    }
    Term::App(Functor::Sym(Symbol::new(name)), Hedge(args))
}
