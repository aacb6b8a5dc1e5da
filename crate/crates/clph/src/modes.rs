//! Well-modedness and KIF-form analyses.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::constraint::{Conj, Dnf, Prim};
use crate::engine::{Atom, Clause, Literal, Program, State};
use crate::syntax::{Functor, Hedge, Item, Signature, Term, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    In,
    Out,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::In => "i",
            Mode::Out => "o",
        })
    }
}

/// Mode per predicate `(name, arity)`. `=` and `in` are implicitly all-output.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ModeTable(pub BTreeMap<(Arc<str>, usize), Vec<Mode>>);

impl ModeTable {
    pub fn new() -> Self {
        ModeTable::default()
    }

    pub fn declare(&mut self, pred: &str, modes: Vec<Mode>) {
        self.0.insert((Arc::from(pred), modes.len()), modes);
    }

    pub fn get(&self, key: &(Arc<str>, usize)) -> Option<&[Mode]> {
        self.0.get(key).map(Vec::as_slice)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModeError {
    #[error("predicate {0}/{1} has no mode declaration")]
    Unmoded(String, usize),
}

/// Resolves modes, falling back to all-input for undeclared predicates
/// and recording a warning for each.
pub struct Modes<'a> {
    table: &'a ModeTable,
    pub warnings: BTreeSet<String>,
}

impl<'a> Modes<'a> {
    pub fn new(table: &'a ModeTable) -> Self {
        Modes { table, warnings: BTreeSet::new() }
    }

    fn of(&mut self, a: &Atom) -> Vec<Mode> {
        match self.table.get(&a.key()) {
            Some(m) => m.to_vec(),
            None => {
                self.warnings.insert(format!("{}/{} has no mode declaration; assuming all input", a.pred, a.args.len()));
                vec![Mode::In; a.args.len()]
            }
        }
    }

    fn split(&mut self, l: &Literal) -> (BTreeSet<Var>, BTreeSet<Var>) {
        let mut ins = BTreeSet::new();
        let mut outs = BTreeSet::new();
        match l {
            Literal::Prim(p) => p.collect_vars(&mut outs),
            Literal::Atom(a) => {
                for (t, m) in a.args.iter().zip(self.of(a)) {
                    t.collect_vars(if m == Mode::In { &mut ins } else { &mut outs });
                }
            }
        }
        (ins, outs)
    }

    pub fn invars(&mut self, l: &Literal) -> BTreeSet<Var> {
        self.split(l).0
    }

    pub fn outvars(&mut self, l: &Literal) -> BTreeSet<Var> {
        self.split(l).1
    }
}

/// Strict lookup; errors on undeclared predicates.
pub fn invars(l: &Literal, m: &ModeTable) -> Result<BTreeSet<Var>, ModeError> {
    strict(l, m)?;
    Ok(Modes::new(m).invars(l))
}

pub fn outvars(l: &Literal, m: &ModeTable) -> Result<BTreeSet<Var>, ModeError> {
    strict(l, m)?;
    Ok(Modes::new(m).outvars(l))
}

fn strict(l: &Literal, m: &ModeTable) -> Result<(), ModeError> {
    match l {
        Literal::Atom(a) if m.get(&a.key()).is_none() => Err(ModeError::Unmoded(a.pred.to_string(), a.args.len())),
        _ => Ok(()),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ModeReport {
    pub ok: bool,
    /// Indices of the literals in a well-moded order, when `ok`.
    pub witness: Vec<usize>,
    /// The first offending literal, when not `ok`.
    pub violation: Option<String>,
    pub warnings: Vec<String>,
}

fn subset(a: &BTreeSet<Var>, b: &BTreeSet<Var>) -> bool {
    a.is_subset(b)
}

fn hedge_vars(h: &Hedge) -> BTreeSet<Var> {
    h.vars()
}

fn functor_vars(f: &Functor) -> BTreeSet<Var> {
    match f {
        Functor::Var(v) => [v.clone()].into_iter().collect(),
        Functor::Sym(_) => BTreeSet::new(),
    }
}

/// The sequence condition for literal `l` given the accumulated outputs.
fn enabled(l: &Literal, modes: &mut Modes, acc: &BTreeSet<Var>) -> bool {
    if !subset(&modes.invars(l), acc) {
        return false;
    }
    match l {
        Literal::Prim(Prim::Eq(a, b)) => subset(&hedge_vars(a), acc) || subset(&hedge_vars(b), acc),
        Literal::Prim(Prim::FEq(f, g)) => subset(&functor_vars(f), acc) || subset(&functor_vars(g), acc),
        // var(E) here; the clause conditions use outvar(E), which is the same set
        // because every position of `in` is an output.
        Literal::Prim(p @ Prim::In(..)) => subset(&p.vars(), acc),
        Literal::Atom(_) => true,
    }
}

/// Greedy saturation: enabling is monotone in the accumulated outputs, so
/// a witness exists iff this finds one.
pub fn check_conjunction(lits: &[Literal], table: &ModeTable) -> ModeReport {
    let mut modes = Modes::new(table);
    let mut acc = BTreeSet::new();
    let mut placed = vec![false; lits.len()];
    let mut witness = Vec::with_capacity(lits.len());
    loop {
        let next = (0..lits.len()).find(|&i| !placed[i] && enabled(&lits[i], &mut modes, &acc));
        let Some(i) = next else { break };
        placed[i] = true;
        witness.push(i);
        acc.extend(modes.outvars(&lits[i]));
    }
    let violation = placed.iter().position(|p| !p).map(|i| lit_text(&lits[i]));
    ModeReport { ok: violation.is_none(), witness, violation, warnings: modes.warnings.into_iter().collect() }
}

fn lit_text(l: &Literal) -> String {
    match l {
        Literal::Atom(a) => a.to_string(),
        Literal::Prim(p) => p.to_string(),
    }
}

/// The four clause conditions, checked in body order.
pub fn check_clause(c: &Clause, table: &ModeTable) -> ModeReport {
    let mut modes = Modes::new(table);
    let head = Literal::Atom(c.head.clone());
    let (head_in, head_out) = (modes.invars(&head), modes.outvars(&head));
    let mut acc = head_in.clone();
    let mut violation = None;
    for l in &c.body {
        if !enabled(l, &mut modes, &acc) {
            violation = Some(lit_text(l));
            break;
        }
        acc.extend(modes.outvars(l));
    }
    if violation.is_none() && !subset(&head_out, &acc) {
        violation = Some(format!("head {}", c.head));
    }
    ModeReport {
        ok: violation.is_none(),
        witness: if violation.is_none() { (0..c.body.len()).collect() } else { Vec::new() },
        violation,
        warnings: modes.warnings.into_iter().collect(),
    }
}

pub fn check_program(p: &Program) -> ModeReport {
    let mut warnings = BTreeSet::new();
    for (k, c) in p.clauses.iter().enumerate() {
        let r = check_clause(c, &p.modes);
        warnings.extend(r.warnings);
        if !r.ok {
            return ModeReport {
                ok: false,
                witness: Vec::new(),
                violation: r.violation.map(|v| format!("clause {}: {v}", k + 1)),
                warnings: warnings.into_iter().collect(),
            };
        }
    }
    ModeReport { ok: true, witness: Vec::new(), violation: None, warnings: warnings.into_iter().collect() }
}

pub fn check_goal(goal: &[Literal], table: &ModeTable) -> ModeReport {
    check_conjunction(goal, table)
}

/// Each disjunct conjoined with the goal must be well-moded.
pub fn check_state(s: &State, table: &ModeTable) -> ModeReport {
    let mut warnings = BTreeSet::new();
    for c in &s.store.0 {
        let mut lits = s.goal.clone();
        lits.extend(c.lits().iter().cloned().map(Literal::Prim));
        let r = check_conjunction(&lits, table);
        warnings.extend(r.warnings);
        if !r.ok {
            return ModeReport { ok: false, witness: Vec::new(), violation: r.violation, warnings: warnings.into_iter().collect() };
        }
    }
    ModeReport { ok: true, witness: Vec::new(), violation: None, warnings: warnings.into_iter().collect() }
}

pub fn is_kif_term(t: &Term, sig: &Signature) -> bool {
    match t {
        Term::Var(_) => true,
        Term::App(Functor::Sym(f), h) if !sig.is_unordered(f) => is_kif_hedge(h, sig),
        Term::App(Functor::Var(_), h) if sig.unordered.is_empty() => is_kif_hedge(h, sig),
        Term::App(_, h) => h.items().iter().all(|i| matches!(i, Item::Term(t) if is_kif_term(t, sig))),
    }
}

/// Terms, optionally followed by one hedge variable.
pub fn is_kif_hedge(h: &Hedge, sig: &Signature) -> bool {
    let items = h.items();
    let body = match items.last() {
        Some(Item::HVar(_)) => &items[..items.len() - 1],
        _ => items,
    };
    body.iter().all(|i| matches!(i, Item::Term(t) if is_kif_term(t, sig)))
}

pub fn is_kif_prim(p: &Prim, sig: &Signature) -> bool {
    match p {
        Prim::Eq(l, r) => is_kif_hedge(l, sig) && is_kif_hedge(r, sig),
        Prim::FEq(..) => true,
        Prim::In(h, _) => is_kif_hedge(h, sig),
    }
}

pub fn is_kif_literal(l: &Literal, sig: &Signature) -> bool {
    match l {
        Literal::Atom(a) => a.args.iter().all(|t| is_kif_term(t, sig)),
        Literal::Prim(p) => is_kif_prim(p, sig),
    }
}

pub fn is_kif_clause(c: &Clause, sig: &Signature) -> bool {
    c.head.args.iter().all(|t| is_kif_term(t, sig)) && c.body.iter().all(|l| is_kif_literal(l, sig))
}

pub fn is_kif_program(p: &Program) -> bool {
    p.clauses.iter().all(|c| is_kif_clause(c, &p.sig))
}

pub fn is_kif_conj(c: &Conj, sig: &Signature) -> bool {
    c.lits().iter().all(|p| is_kif_prim(p, sig))
}

pub fn is_kif_constraint(d: &Dnf, sig: &Signature) -> bool {
    d.0.iter().all(|c| is_kif_conj(c, sig))
}
