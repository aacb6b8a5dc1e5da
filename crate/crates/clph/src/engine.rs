//! Programs, states, the four-case reduction, and depth-first search for
//! answers.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::constraint::{classify_dnf, solved_var, Class, Conj, Dnf, Prim};
use crate::modes::ModeTable;
use crate::solver::{normalize, SolveOptions, TraceEvent};
use crate::syntax::{Functor, Hedge, Item, Signature, Subst, Term, Var, VarGen};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub pred: Arc<str>,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(pred: &str, args: Vec<Term>) -> Atom {
        Atom { pred: Arc::from(pred), args }
    }

    pub fn key(&self) -> (Arc<str>, usize) {
        (self.pred.clone(), self.args.len())
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        for t in &self.args {
            t.collect_vars(out);
        }
    }

    pub fn apply(&self, s: &Subst) -> Atom {
        Atom { pred: self.pred.clone(), args: self.args.iter().map(|t| t.apply(s)).collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Literal {
    Atom(Atom),
    Prim(Prim),
}

impl Literal {
    pub fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Literal::Atom(a) => a.collect_vars(out),
            Literal::Prim(p) => p.collect_vars(out),
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn apply(&self, s: &Subst, sig: &Signature) -> Literal {
        match self {
            Literal::Atom(a) => Literal::Atom(a.apply(s)),
            Literal::Prim(p) => Literal::Prim(p.apply(s, sig)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clause {
    pub head: Atom,
    pub body: Vec<Literal>,
}

impl Clause {
    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.head.collect_vars(&mut out);
        for l in &self.body {
            l.collect_vars(&mut out);
        }
        out
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Program {
    pub sig: Signature,
    pub clauses: Vec<Clause>,
    pub modes: ModeTable,
}

impl Program {
    pub fn vars(&self) -> BTreeSet<Var> {
        self.clauses.iter().flat_map(Clause::vars).collect()
    }

    /// Appends another program's clauses and declarations.
    pub fn extend(&mut self, other: Program) {
        self.sig.ordered.extend(other.sig.ordered);
        self.sig.unordered.extend(other.sig.unordered);
        let unordered = self.sig.unordered.clone();
        self.sig.ordered.retain(|f| !unordered.contains(f));
        self.sig.predicates.extend(other.sig.predicates);
        self.clauses.extend(other.clauses);
        self.modes.0.extend(other.modes.0);
    }
}

/// A state `⟨goal ‖ store⟩`; an empty goal is the box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct State {
    pub goal: Vec<Literal>,
    pub store: Dnf,
}

impl State {
    pub fn initial(goal: Vec<Literal>) -> State {
        State { goal, store: Dnf::truth() }
    }

    pub fn failed() -> State {
        State { goal: Vec::new(), store: Dnf::falsity() }
    }

    pub fn is_failed(&self) -> bool {
        self.store.is_false()
    }

    /// Finished: nothing left to reduce, or failed.
    pub fn is_finished(&self) -> bool {
        self.goal.is_empty() || self.is_failed()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EngineError {
    #[error("literal index {0} out of range")]
    LiteralIndex(usize),
    #[error("clause choice {0} out of range")]
    ClauseChoice(usize),
    #[error("selected literal is a primitive constraint; no clause choice applies")]
    NotAnAtom,
}

fn rename(v: &Var, map: &mut BTreeMap<Var, Var>, gen: &mut VarGen) -> Var {
    map.entry(v.clone()).or_insert_with(|| gen.fresh(v.kind, &v.name)).clone()
}

/// Fresh variants of the clauses whose head matches `atom` by name and arity.
pub fn defn(p: &Program, atom: &Atom, gen: &mut VarGen) -> Vec<Clause> {
    p.clauses
        .iter()
        .filter(|c| c.head.key() == atom.key())
        .map(|c| {
            let mut map = BTreeMap::new();
            let mut s = Subst::new();
            for v in c.vars() {
                let w = rename(&v, &mut map, gen);
                match v.kind {
                    crate::syntax::VarKind::Term => {
                        s.terms.insert(v, Term::Var(w));
                    }
                    crate::syntax::VarKind::Hedge => {
                        s.hedges.insert(v, Hedge::hvar(w));
                    }
                    crate::syntax::VarKind::Func => {
                        s.funcs.insert(v, Functor::Var(w));
                    }
                }
            }
            Clause { head: c.head.apply(&s), body: c.body.iter().map(|l| l.apply(&s, &p.sig)).collect() }
        })
        .collect()
}

/// Runs the solver on `store ∧ p`.
pub fn add_constraint(store: &Dnf, p: &Prim, sig: &Signature, gen: &mut VarGen, trace: bool) -> (Dnf, Vec<TraceEvent>) {
    let opts = SolveOptions { record_trace: trace, ..SolveOptions::default() };
    let out = normalize(store.and_prim(p), sig, gen, &opts);
    (out.result, out.trace)
}

/// One reduction of literal `i`. `choice` selects among the fresh variants
/// returned by `defn` for atoms and is ignored for primitive constraints.
pub fn reduce(s: &State, p: &Program, i: usize, choice: usize, gen: &mut VarGen) -> Result<State, EngineError> {
    let lit = s.goal.get(i).ok_or(EngineError::LiteralIndex(i))?;
    match lit {
        Literal::Prim(c) => {
            let (store, _) = add_constraint(&s.store, c, &p.sig, gen, false);
            Ok(after_constraint(s, i, store))
        }
        Literal::Atom(a) => {
            let defs = defn(p, a, gen);
            if defs.is_empty() {
                return Ok(State::failed());
            }
            let c = defs.into_iter().nth(choice).ok_or(EngineError::ClauseChoice(choice))?;
            Ok(unfold(s, i, a, c, &p.sig))
        }
    }
}

/// Drops solved literals whose variable occurs nowhere else in the
/// disjunct and is not in `keep`. Sound because `∃v. v ≐ e ∧ D ≡ D` and
/// `∃v. v in ρ ∧ D ≡ D` for a non-empty solved `ρ`. Duplicate disjuncts
/// that result are removed.
pub fn collect_garbage(store: &Dnf, keep: &BTreeSet<Var>) -> Dnf {
    let mut out: Vec<Conj> = Vec::with_capacity(store.0.len());
    for c in &store.0 {
        let Conj::Lits(lits) = c else {
            out.push(c.clone());
            continue;
        };
        let mut lits = lits.clone();
        'scan: loop {
            for i in 0..lits.len() {
                let Some(v) = solved_var(&lits, i) else { continue };
                let alone = lits.iter().enumerate().all(|(k, p)| k == i || !p.contains_var(&v));
                if alone && !keep.contains(&v) {
                    lits.remove(i);
                    continue 'scan;
                }
            }
            break;
        }
        let c = Conj::Lits(lits);
        if !out.contains(&c) {
            out.push(c);
        }
    }
    Dnf(out)
}

fn after_constraint(s: &State, i: usize, store: Dnf) -> State {
    if store.is_false() {
        return State::failed();
    }
    let mut goal = s.goal.clone();
    goal.remove(i);
    State { goal, store }
}

fn unfold(s: &State, i: usize, a: &Atom, c: Clause, sig: &Signature) -> State {
    let mut goal = Vec::with_capacity(s.goal.len() + a.args.len() + c.body.len());
    goal.extend_from_slice(&s.goal[..i]);
    for (t, r) in a.args.iter().zip(&c.head.args) {
        goal.push(Literal::Prim(Prim::term_eq(t.clone(), r.clone(), sig)));
    }
    goal.extend(c.body);
    goal.extend_from_slice(&s.goal[i + 1..]);
    State { goal, store: s.store.clone() }
}

/// Called with the state before and after every successful reduction.
pub type Observer<'p> = Box<dyn FnMut(&State, &State) + 'p>;

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub max_depth: usize,
    pub max_answers: Option<usize>,
    pub trace: bool,
    /// Drop solved bindings of variables no longer reachable from the
    /// query or the remaining goal.
    pub gc: bool,
    /// Keep only the first solved success of an atom that is ground under
    /// a single-disjunct store; other successes add nothing to the answer.
    pub prune_ground: bool,
    /// Continue each disjunct of a disjunctive store as its own branch.
    pub split: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { max_depth: 10_000, max_answers: None, trace: false, gc: true, prune_ground: true, split: true }
    }
}

/// A binding read off a solved literal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Hedge(Hedge),
    Functor(Functor),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Hedge(h) => h.fmt(f),
            Value::Functor(g) => g.fmt(f),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Answer {
    pub disjunct: Conj,
    pub bindings: Vec<(Var, Value)>,
    /// Literals constraining the answer beyond the bindings.
    pub residual: Vec<Prim>,
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bindings.is_empty() && self.residual.is_empty() {
            return f.write_str("yes");
        }
        let mut first = true;
        for (v, val) in &self.bindings {
            if !first {
                writeln!(f)?;
            }
            first = false;
            write!(f, "{v} = {val}")?;
        }
        for p in &self.residual {
            if !first {
                writeln!(f)?;
            }
            first = false;
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// The side of a solved literal that `v` is bound to.
fn solved_value(p: &Prim, v: &Var) -> Option<Value> {
    match p {
        Prim::Eq(l, r) => {
            let is_v = |h: &Hedge| match h.items() {
                [Item::Term(Term::Var(w))] | [Item::HVar(w)] => w == v,
                _ => false,
            };
            if is_v(l) {
                Some(Value::Hedge(r.clone()))
            } else if is_v(r) {
                Some(Value::Hedge(l.clone()))
            } else {
                None
            }
        }
        Prim::FEq(a, b) => {
            if *a == Functor::Var(v.clone()) {
                Some(Value::Functor(b.clone()))
            } else if *b == Functor::Var(v.clone()) {
                Some(Value::Functor(a.clone()))
            } else {
                None
            }
        }
        Prim::In(..) => None,
    }
}

/// Bindings for the query variables of one disjunct. Solved literals for
/// other variables are existential witnesses and are dropped unless they
/// constrain a variable reachable from the query.
pub fn project_conj(c: &Conj, query: &BTreeSet<Var>) -> Answer {
    let lits = c.lits();
    let mut bindings = Vec::new();
    let mut used = vec![false; lits.len()];
    let mut reach: BTreeSet<Var> = query.clone();
    for (i, p) in lits.iter().enumerate() {
        let Some(v) = solved_var(lits, i) else { continue };
        if !query.contains(&v) {
            continue;
        }
        if let Some(val) = solved_value(p, &v) {
            let mut vs = BTreeSet::new();
            p.collect_vars(&mut vs);
            reach.extend(vs);
            bindings.push((v, val));
            used[i] = true;
        }
    }
    // Unsolved literals always stay; solved memberships stay when reachable.
    let mut keep = vec![false; lits.len()];
    loop {
        let mut changed = false;
        for (i, p) in lits.iter().enumerate() {
            if used[i] || keep[i] {
                continue;
            }
            let solved = solved_var(lits, i);
            let wanted = match &solved {
                None => true,
                Some(v) => reach.contains(v) && (p.is_membership() || query.contains(v)),
            };
            if wanted {
                keep[i] = true;
                reach.extend(p.vars());
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let residual = lits.iter().zip(&keep).filter(|(_, k)| **k).map(|(p, _)| p.clone()).collect();
    bindings.sort_by(|a, b| a.0.cmp(&b.0));
    Answer { disjunct: c.clone(), bindings, residual }
}

pub fn project(store: &Dnf, query: &BTreeSet<Var>) -> Vec<Answer> {
    store.0.iter().filter(|c| **c != Conj::False).map(|c| project_conj(c, query)).collect()
}

#[derive(Clone, Debug)]
pub enum Event {
    /// A reduction at the given depth; `clause` is the program clause used.
    Reduce { depth: usize, literal: Literal, clause: Option<usize> },
    Solver(TraceEvent),
}

#[derive(Clone, Debug)]
pub enum Outcome {
    Answer(Answer),
    /// A branch cut by `max_depth`.
    DepthExceeded,
}

struct Node {
    state: State,
    depth: usize,
}

/// An open call of a ground atom. Its subtree occupies the stack from
/// `height` up, and it succeeds once the goal shrinks to `len` literals.
struct Call {
    key: Atom,
    height: usize,
    len: usize,
    /// A branch below was cut by the depth limit, so failure is not final.
    cut: bool,
}

/// Depth-first search with leftmost selection, as an iterator of outcomes.
pub struct Search<'p> {
    program: &'p Program,
    query: BTreeSet<Var>,
    opts: SearchOptions,
    gen: VarGen,
    stack: Vec<Node>,
    pending: Vec<Outcome>,
    answers: usize,
    calls: Vec<Call>,
    /// Settled ground atoms, in canonical form.
    table: BTreeMap<Atom, bool>,
    pub events: Vec<Event>,
    /// Called with every reduction `(before, after)`.
    pub observer: Option<Observer<'p>>,
}

impl<'p> Search<'p> {
    pub fn new(program: &'p Program, goal: Vec<Literal>, opts: SearchOptions) -> Search<'p> {
        let mut query = BTreeSet::new();
        for l in &goal {
            l.collect_vars(&mut query);
        }
        let mut gen = VarGen::new();
        gen.avoid(program.vars().iter());
        gen.avoid(query.iter());
        Search {
            program,
            query,
            opts,
            gen,
            stack: vec![Node { state: State::initial(goal), depth: 0 }],
            pending: Vec::new(),
            answers: 0,
            calls: Vec::new(),
            table: BTreeMap::new(),
            events: Vec::new(),
            observer: None,
        }
    }

    fn observe(&mut self, before: &State, after: &State) {
        if let Some(f) = self.observer.as_mut() {
            f(before, after);
        }
    }

    /// Solves the selected constraint; one successor per disjunct when
    /// splitting is on.
    fn tell(&mut self, s: &State, c: &Prim, depth: usize) -> Vec<State> {
        let (store, trace) = add_constraint(&s.store, c, &self.program.sig, &mut self.gen, self.opts.trace);
        if self.opts.trace {
            self.events.push(Event::Reduce { depth, literal: s.goal[0].clone(), clause: None });
            self.events.extend(trace.into_iter().map(Event::Solver));
        }
        let stores = if self.opts.split && store.0.len() > 1 {
            store.0.into_iter().map(|c| Dnf(vec![c])).collect()
        } else {
            vec![store]
        };
        let mut keep = self.query.clone();
        for l in &s.goal[1..] {
            l.collect_vars(&mut keep);
        }
        let mut out = Vec::with_capacity(stores.len());
        for store in stores {
            let mut next = after_constraint(s, 0, store);
            if self.opts.gc && !next.is_failed() {
                next.store = collect_garbage(&next.store, &keep);
            }
            self.observe(s, &next);
            out.push(next);
        }
        out
    }

    /// Expands one node, returning its children in search order.
    fn expand(&mut self, node: &Node) -> Vec<State> {
        let s = &node.state;
        let depth = node.depth + 1;
        match &s.goal[0] {
            Literal::Prim(c) => self.tell(s, c, depth),
            Literal::Atom(a) => {
                let idx: Vec<usize> = (0..self.program.clauses.len())
                    .filter(|&k| self.program.clauses[k].head.key() == a.key())
                    .collect();
                let defs = defn(self.program, a, &mut self.gen);
                if defs.is_empty() {
                    let next = State::failed();
                    self.observe(s, &next);
                    return vec![next];
                }
                let mut out = Vec::with_capacity(defs.len());
                for (k, c) in idx.into_iter().zip(defs) {
                    if self.opts.trace {
                        self.events.push(Event::Reduce { depth, literal: s.goal[0].clone(), clause: Some(k) });
                    }
                    let next = unfold(s, 0, a, c, &self.program.sig);
                    self.observe(s, &next);
                    out.push(next);
                }
                out
            }
        }
    }

    /// Closes calls whose subtree is exhausted; they failed.
    fn close_failed(&mut self) {
        while self.calls.last().is_some_and(|c| self.stack.len() <= c.height) {
            let c = self.calls.pop().expect("checked above");
            if c.cut {
                if let Some(outer) = self.calls.last_mut() {
                    outer.cut = true;
                }
            } else {
                self.table.insert(c.key, false);
            }
        }
    }

    /// Closes calls completed by `node`, dropping their other branches when
    /// the store is solved.
    fn close_succeeded(&mut self, node: &Node) {
        while self.calls.last().is_some_and(|c| node.state.goal.len() <= c.len) {
            let c = self.calls.pop().expect("checked above");
            if classify_dnf(&node.state.store, &self.program.sig) == Class::Solved {
                self.stack.truncate(c.height);
                self.table.insert(c.key, true);
            }
        }
    }
}

impl Iterator for Search<'_> {
    type Item = Outcome;

    fn next(&mut self) -> Option<Outcome> {
        loop {
            if self.opts.max_answers.is_some_and(|m| self.answers >= m) {
                return None;
            }
            if let Some(o) = self.pending.pop() {
                if matches!(o, Outcome::Answer(_)) {
                    self.answers += 1;
                }
                return Some(o);
            }
            self.close_failed();
            let node = self.stack.pop()?;
            if node.state.is_failed() {
                continue;
            }
            self.close_succeeded(&node);
            if node.state.goal.is_empty() {
                let mut out: Vec<Outcome> = project(&node.state.store, &self.query).into_iter().map(Outcome::Answer).collect();
                out.reverse();
                self.pending = out;
                continue;
            }
            if node.depth >= self.opts.max_depth {
                if let Some(c) = self.calls.last_mut() {
                    c.cut = true;
                }
                return Some(Outcome::DepthExceeded);
            }
            let depth = node.depth + 1;
            if self.opts.prune_ground {
                if let Some(key) = ground_call(&node.state, &self.program.sig) {
                    match self.table.get(&key) {
                        Some(&ok) => {
                            let next = if ok {
                                State { goal: node.state.goal[1..].to_vec(), store: node.state.store.clone() }
                            } else {
                                State::failed()
                            };
                            if self.opts.trace {
                                self.events.push(Event::Reduce { depth, literal: node.state.goal[0].clone(), clause: None });
                            }
                            self.observe(&node.state, &next);
                            self.stack.push(Node { state: next, depth });
                            continue;
                        }
                        None => self.calls.push(Call {
                            key,
                            height: self.stack.len(),
                            len: node.state.goal.len() - 1,
                            cut: false,
                        }),
                    }
                }
            }
            let children = self.expand(&node);
            self.stack.extend(children.into_iter().rev().map(|state| Node { state, depth }));
        }
    }
}

fn canonical(t: &Term, sig: &Signature) -> Term {
    match t {
        Term::App(f, h) => {
            let mut items: Vec<Item> = h
                .items()
                .iter()
                .map(|i| match i {
                    Item::Term(t) => Item::Term(canonical(t, sig)),
                    v => v.clone(),
                })
                .collect();
            if matches!(f, Functor::Sym(s) if sig.is_unordered(s)) {
                items.sort();
            }
            Term::App(f.clone(), Hedge(items))
        }
        v => v.clone(),
    }
}

/// The selected atom, instantiated by a single-disjunct store and in
/// canonical form, if that makes it ground.
fn ground_call(s: &State, sig: &Signature) -> Option<Atom> {
    let Some(Literal::Atom(a)) = s.goal.first() else { return None };
    let [c] = s.store.0.as_slice() else { return None };
    let lits = c.lits();
    let mut theta = Subst::new();
    for (i, p) in lits.iter().enumerate() {
        let Some(v) = solved_var(lits, i) else { continue };
        match solved_value(p, &v) {
            Some(Value::Hedge(h)) if v.kind == crate::syntax::VarKind::Term => {
                if let Some(t) = h.as_single_term() {
                    theta.terms.insert(v, t.clone());
                }
            }
            Some(Value::Hedge(h)) => {
                theta.hedges.insert(v, h);
            }
            Some(Value::Functor(f)) => {
                theta.funcs.insert(v, f);
            }
            None => {}
        }
    }
    let args: Vec<Term> = a.args.iter().map(|t| canonical(&t.apply(&theta), sig)).collect();
    args.iter().all(Term::is_ground).then(|| Atom { pred: a.pred.clone(), args })
}

/// Collects all answers (up to the options' limits).
pub fn solve(p: &Program, goal: Vec<Literal>, opts: SearchOptions) -> Vec<Outcome> {
    Search::new(p, goal, opts).collect()
}
