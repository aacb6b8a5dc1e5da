//! The constraint solver: `sol = dnf ; NF(step)`.

pub mod measure;
pub mod rules;

use std::collections::BTreeSet;

use crate::constraint::{dnf, Conj, Dnf, DnfError, Formula, Prim};
use crate::syntax::{Functor, Hedge, Item, Signature, Symbol, Term, VarGen};

pub use measure::{cm, cm_dnf, measure_less, Measure};
pub use rules::{Ctx, RuleId, ALL_RULES};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEvent {
    pub rule: RuleId,
    pub disjunct: usize,
    pub literal: usize,
    pub after: Dnf,
}

/// A step that failed to decrease the termination measure.
#[derive(Clone, Debug)]
pub struct MeasureViolation {
    pub step: usize,
    pub rule: RuleId,
    pub before: Dnf,
    pub after: Dnf,
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub check_measure: bool,
    pub record_trace: bool,
    /// Safeguard against non-termination bugs; `None` means unbounded.
    pub max_steps: Option<usize>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { check_measure: false, record_trace: false, max_steps: Some(1_000_000) }
    }
}

#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub result: Dnf,
    pub trace: Vec<TraceEvent>,
    pub violations: Vec<MeasureViolation>,
    pub steps: usize,
    /// Set when `max_steps` cut the rewriting short.
    pub exhausted: bool,
}

fn sorted_set(c: &Conj) -> Option<BTreeSet<&Prim>> {
    match c {
        Conj::False => None,
        Conj::Lits(l) => Some(l.iter().collect()),
    }
}

/// Rules acting on the disjunction itself.
fn dnf_rule(rule: RuleId, d: &Dnf) -> Option<(Dnf, usize)> {
    let cs = &d.0;
    if cs.len() < 2 {
        return None;
    }
    match rule {
        RuleId::Log(2) => {
            let keys: Vec<_> = cs.iter().map(sorted_set).collect();
            let i = (1..cs.len()).find(|&i| keys[..i].contains(&keys[i]))?;
            let mut out = cs.clone();
            out.remove(i);
            Some((Dnf(out), i))
        }
        RuleId::Log(4) => {
            let i = cs.iter().position(|c| *c == Conj::False)?;
            let mut out = cs.clone();
            out.remove(i);
            Some((Dnf(out), i))
        }
        RuleId::Log(6) => {
            let i = cs.iter().position(Conj::is_true)?;
            Some((Dnf::truth(), i))
        }
        _ => None,
    }
}

/// A rule match: either a whole new disjunction, or the disjuncts that
/// replace disjunct `i`, found at literal `j`.
enum Found {
    Whole(Dnf, usize),
    At(usize, usize, Vec<Conj>),
}

fn find_rule(rule: RuleId, d: &Dnf, ctx: &mut Ctx) -> Option<Found> {
    if let Some((out, i)) = dnf_rule(rule, d) {
        return Some(Found::Whole(out, i));
    }
    for (i, c) in d.0.iter().enumerate() {
        let Conj::Lits(lits) = c else { continue };
        for j in 0..lits.len() {
            if let Some(repl) = rules::apply_at(rule, lits, j, ctx) {
                return Some(Found::At(i, j, repl));
            }
        }
    }
    None
}

fn find_step(d: &Dnf, ctx: &mut Ctx) -> Option<(RuleId, Found)> {
    ALL_RULES.iter().find_map(|&r| find_rule(r, d, ctx).map(|f| (r, f)))
}

/// Applies a match to `d` in place, returning the disjunct and literal.
fn apply_found(d: &mut Dnf, f: Found) -> (usize, usize) {
    match f {
        Found::Whole(out, i) => {
            *d = out;
            (i, 0)
        }
        Found::At(i, j, repl) => {
            d.0.splice(i..=i, repl);
            (i, j)
        }
    }
}

/// Applies `rule` at its first match under the fixed scan order.
pub fn try_rule(rule: RuleId, d: &Dnf, ctx: &mut Ctx) -> Option<(Dnf, TraceEvent)> {
    let f = find_rule(rule, d, ctx)?;
    let mut out = d.clone();
    let (disjunct, literal) = apply_found(&mut out, f);
    let ev = TraceEvent { rule, disjunct, literal, after: out.clone() };
    Some((out, ev))
}

/// Applies a literal-level rule at disjunct `i`, literal `j`, splicing the
/// resulting disjuncts in place.
pub fn try_rule_at(rule: RuleId, d: &Dnf, i: usize, j: usize, ctx: &mut Ctx) -> Option<Dnf> {
    let Conj::Lits(lits) = d.0.get(i)? else { return None };
    if j >= lits.len() {
        return None;
    }
    let repl = rules::apply_at(rule, lits, j, ctx)?;
    let mut out = d.clone();
    out.0.splice(i..=i, repl);
    Some(out)
}

pub fn step(d: &Dnf, ctx: &mut Ctx) -> Option<(Dnf, TraceEvent)> {
    let (rule, f) = find_step(d, ctx)?;
    let mut out = d.clone();
    let (disjunct, literal) = apply_found(&mut out, f);
    let ev = TraceEvent { rule, disjunct, literal, after: out.clone() };
    Some((out, ev))
}

/// Re-applies a recorded event; used to check that traces replay.
pub fn replay(d: &Dnf, ev: &TraceEvent, ctx: &mut Ctx) -> Option<Dnf> {
    match dnf_rule(ev.rule, d) {
        Some((out, i)) if i == ev.disjunct => Some(out),
        Some(_) => None,
        None => try_rule_at(ev.rule, d, ev.disjunct, ev.literal, ctx),
    }
}

fn hedge_symbols(h: &Hedge, out: &mut BTreeSet<Symbol>) {
    for it in h.items() {
        if let Item::Term(Term::App(f, args)) = it {
            if let Functor::Sym(s) = f {
                out.insert(s.clone());
            }
            hedge_symbols(args, out);
        }
    }
}

/// Every function symbol occurring in `d`.
pub fn dnf_symbols(d: &Dnf) -> BTreeSet<Symbol> {
    let mut out = BTreeSet::new();
    for p in d.0.iter().flat_map(|c| c.lits()) {
        match p {
            Prim::Eq(l, r) => {
                hedge_symbols(l, &mut out);
                hedge_symbols(r, &mut out);
            }
            Prim::FEq(f, g) => {
                out.extend([f, g].into_iter().filter_map(|x| x.as_sym().cloned()));
            }
            Prim::In(h, r) => {
                hedge_symbols(h, &mut out);
                let mut v = Vec::new();
                r.symbols(&mut v);
                out.extend(v);
            }
        }
    }
    out
}

/// `sig` extended with undeclared symbols of `d`, which count as ordered.
pub fn closed_signature(sig: &Signature, d: &Dnf) -> Signature {
    let mut s = sig.clone();
    for f in dnf_symbols(d) {
        s.ensure(&f);
    }
    s
}

/// Rewrites `d` to a normal form with respect to `step`.
pub fn normalize(d: Dnf, sig: &Signature, gen: &mut VarGen, opts: &SolveOptions) -> SolveOutcome {
    let sig = closed_signature(sig, &d);
    gen.avoid(d.vars().iter());
    let mut ctx = Ctx { sig: &sig, gen };
    let mut cur = d;
    let mut trace = Vec::new();
    let mut violations = Vec::new();
    let mut steps = 0;
    let mut cur_measure = if opts.check_measure { cm_dnf(&cur) } else { Vec::new() };
    loop {
        if opts.max_steps.is_some_and(|m| steps >= m) {
            return SolveOutcome { result: cur, trace, violations, steps, exhausted: true };
        }
        let Some((rule, found)) = find_step(&cur, &mut ctx) else { break };
        let before = opts.check_measure.then(|| cur.clone());
        let (disjunct, literal) = apply_found(&mut cur, found);
        steps += 1;
        if let Some(before) = before {
            let m = cm_dnf(&cur);
            if !measure_less(&m, &cur_measure) {
                violations.push(MeasureViolation { step: steps, rule, before, after: cur.clone() });
            }
            cur_measure = m;
        }
        if opts.record_trace {
            trace.push(TraceEvent { rule, disjunct, literal, after: cur.clone() });
        }
    }
    SolveOutcome { result: cur, trace, violations, steps, exhausted: false }
}

pub fn sol_with(f: &Formula, sig: &Signature, gen: &mut VarGen, opts: &SolveOptions) -> Result<SolveOutcome, DnfError> {
    Ok(normalize(dnf(f)?, sig, gen, opts))
}

/// `sol` with default options and a private variable generator.
pub fn sol(f: &Formula, sig: &Signature) -> Result<Dnf, DnfError> {
    let mut gen = VarGen::new();
    Ok(sol_with(f, sig, &mut gen, &SolveOptions::default())?.result)
}

/// Solves a conjunction of primitive constraints.
pub fn sol_conj(lits: Vec<Prim>, sig: &Signature) -> Dnf {
    let mut gen = VarGen::new();
    normalize(Dnf::conj(lits), sig, &mut gen, &SolveOptions::default()).result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_constraint;

    fn solve(src: &str, sig: &Signature) -> Dnf {
        sol(&parse_constraint(src, sig).unwrap(), sig).unwrap()
    }

    #[test]
    fn well_moded_example() {
        let sig = Signature::new();
        let d = solve("f(@X, a, @Y) = f(a, b, a, c, c) & f(@Z, a, ?x) = f(@Y, @X) & @Y in c*", &sig);
        assert_eq!(d.to_string(), "@X = (a, b) & @Y = (c, c) & @Z = (c, c) & ?x = b");
    }

    #[test]
    fn kif_example() {
        let sig = Signature::new();
        let d = solve("f(?x, @X) = f(g(@Y), a, @Y) & @X in a* & @Y in a . a(b*)*", &sig);
        assert_eq!(d.to_string(), "?x = g(@Y) & @X = (a, @Y) & @Y in a . (eps | a . a*)");
    }

    #[test]
    fn false_stays_false() {
        assert!(sol(&Formula::False, &Signature::new()).unwrap().is_false());
    }
}
