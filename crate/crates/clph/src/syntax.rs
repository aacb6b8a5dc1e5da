//! Terms, hedges, functors, variables and substitutions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(pub Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Self {
        Symbol(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarKind {
    Term,
    Hedge,
    Func,
}

impl VarKind {
    pub fn sigil(self) -> char {
        match self {
            VarKind::Term => '?',
            VarKind::Hedge => '@',
            VarKind::Func => '^',
        }
    }
}

/// A variable. Kinds are separate namespaces: `?x` and `@x` are distinct.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    pub kind: VarKind,
    pub name: Arc<str>,
}

impl Var {
    pub fn new(kind: VarKind, name: &str) -> Self {
        Var { kind, name: Arc::from(name) }
    }

    pub fn term(name: &str) -> Self {
        Var::new(VarKind::Term, name)
    }

    pub fn hedge(name: &str) -> Self {
        Var::new(VarKind::Hedge, name)
    }

    pub fn func(name: &str) -> Self {
        Var::new(VarKind::Func, name)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind.sigil(), self.name)
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Functor {
    Sym(Symbol),
    /// Always a variable of kind `Func`.
    Var(Var),
}

impl Functor {
    pub fn sym(name: &str) -> Self {
        Functor::Sym(Symbol::new(name))
    }

    pub fn as_sym(&self) -> Option<&Symbol> {
        match self {
            Functor::Sym(s) => Some(s),
            Functor::Var(_) => None,
        }
    }

    pub fn apply(&self, s: &Subst) -> Functor {
        match self {
            Functor::Var(v) => s.funcs.get(v).cloned().unwrap_or_else(|| self.clone()),
            Functor::Sym(_) => self.clone(),
        }
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Term {
    /// Always a variable of kind `Term`.
    Var(Var),
    App(Functor, Hedge),
}

/// A hedge element: a term or a hedge variable.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Item {
    Term(Term),
    HVar(Var),
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Hedge(pub Vec<Item>);

impl Term {
    pub fn var(name: &str) -> Self {
        Term::Var(Var::term(name))
    }

    pub fn app(f: Functor, args: Hedge) -> Self {
        Term::App(f, args)
    }

    pub fn sym(name: &str, args: Vec<Item>) -> Self {
        Term::App(Functor::sym(name), Hedge(args))
    }

    pub fn constant(name: &str) -> Self {
        Term::sym(name, Vec::new())
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, h) => 1 + h.size(),
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(f, h) => matches!(f, Functor::Sym(_)) && h.is_ground(),
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(f, h) => {
                if let Functor::Var(v) = f {
                    out.insert(v.clone());
                }
                h.collect_vars(out);
            }
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn contains_var(&self, v: &Var) -> bool {
        match self {
            Term::Var(w) => w == v,
            Term::App(f, h) => matches!(f, Functor::Var(w) if w == v) || h.contains_var(v),
        }
    }

    pub fn apply(&self, s: &Subst) -> Term {
        match self {
            Term::Var(v) => s.terms.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::App(f, h) => Term::App(f.apply(s), h.apply(s)),
        }
    }
}

impl Item {
    pub fn size(&self) -> usize {
        match self {
            Item::Term(t) => t.size(),
            Item::HVar(_) => 1,
        }
    }

    pub fn as_term(&self) -> Option<&Term> {
        match self {
            Item::Term(t) => Some(t),
            Item::HVar(_) => None,
        }
    }

    pub fn contains_var(&self, v: &Var) -> bool {
        match self {
            Item::Term(t) => t.contains_var(v),
            Item::HVar(w) => w == v,
        }
    }
}

impl Hedge {
    pub fn empty() -> Self {
        Hedge(Vec::new())
    }

    pub fn single(t: Term) -> Self {
        Hedge(vec![Item::Term(t)])
    }

    pub fn hvar(v: Var) -> Self {
        Hedge(vec![Item::HVar(v)])
    }

    pub fn terms(ts: Vec<Term>) -> Self {
        Hedge(ts.into_iter().map(Item::Term).collect())
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn items(&self) -> &[Item] {
        &self.0
    }

    /// The single term of a one-element hedge.
    pub fn as_single_term(&self) -> Option<&Term> {
        match self.0.as_slice() {
            [Item::Term(t)] => Some(t),
            _ => None,
        }
    }

    /// The single hedge variable of a one-element hedge.
    pub fn as_single_hvar(&self) -> Option<&Var> {
        match self.0.as_slice() {
            [Item::HVar(v)] => Some(v),
            _ => None,
        }
    }

    /// True when every element is a term (a term sequence).
    pub fn is_term_seq(&self) -> bool {
        self.0.iter().all(|i| matches!(i, Item::Term(_)))
    }

    pub fn size(&self) -> usize {
        self.0.iter().map(Item::size).sum()
    }

    pub fn is_ground(&self) -> bool {
        self.0.iter().all(|i| match i {
            Item::Term(t) => t.is_ground(),
            Item::HVar(_) => false,
        })
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        for i in &self.0 {
            match i {
                Item::Term(t) => t.collect_vars(out),
                Item::HVar(v) => {
                    out.insert(v.clone());
                }
            }
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn contains_var(&self, v: &Var) -> bool {
        self.0.iter().any(|i| i.contains_var(v))
    }

    /// Instance under `s`; hedge-variable images are spliced flat.
    pub fn apply(&self, s: &Subst) -> Hedge {
        let mut out = Vec::with_capacity(self.0.len());
        for i in &self.0 {
            match i {
                Item::Term(t) => out.push(Item::Term(t.apply(s))),
                Item::HVar(v) => match s.hedges.get(v) {
                    Some(h) => out.extend(h.0.iter().cloned()),
                    None => out.push(i.clone()),
                },
            }
        }
        Hedge(out)
    }

    pub fn concat(&self, other: &Hedge) -> Hedge {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        Hedge(v)
    }

    pub fn slice(&self, from: usize, to: usize) -> Hedge {
        Hedge(self.0[from..to].to_vec())
    }

    pub fn tail(&self, from: usize) -> Hedge {
        Hedge(self.0[from..].to_vec())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SyntaxError {
    #[error("permutations requested for a hedge containing the hedge variable {0:?}")]
    HedgeVarInPerm(Var),
}

/// Distinct permutations of a term sequence, in lexicographic order of the
/// index sequence of first occurrences.
pub fn perms(t: &Hedge) -> Result<Vec<Hedge>, SyntaxError> {
    if let Some(Item::HVar(v)) = t.0.iter().find(|i| matches!(i, Item::HVar(_))) {
        return Err(SyntaxError::HedgeVarInPerm(v.clone()));
    }
    Ok(perms_of(&t.0).into_iter().map(Hedge).collect())
}

/// Distinct permutations of a sequence, each returned once.
pub fn perms_of<T: Clone + PartialEq>(items: &[T]) -> Vec<Vec<T>> {
    let mut out = Vec::new();
    let mut used = vec![false; items.len()];
    let mut cur = Vec::with_capacity(items.len());
    perm_rec(items, &mut used, &mut cur, &mut out);
    out
}

fn perm_rec<T: Clone + PartialEq>(
    items: &[T],
    used: &mut [bool],
    cur: &mut Vec<T>,
    out: &mut Vec<Vec<T>>,
) {
    if cur.len() == items.len() {
        out.push(cur.clone());
        return;
    }
    for i in 0..items.len() {
        if used[i] {
            continue;
        }
        // Skip an element equal to an earlier unused one: it yields the same sequences.
        if (0..i).any(|j| !used[j] && items[j] == items[i]) {
            continue;
        }
        used[i] = true;
        cur.push(items[i].clone());
        perm_rec(items, used, cur, out);
        cur.pop();
        used[i] = false;
    }
}

/// A substitution split by variable kind.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Subst {
    pub terms: BTreeMap<Var, Term>,
    pub hedges: BTreeMap<Var, Hedge>,
    pub funcs: BTreeMap<Var, Functor>,
}

impl Subst {
    pub fn new() -> Self {
        Subst::default()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty() && self.hedges.is_empty() && self.funcs.is_empty()
    }

    pub fn term(v: Var, t: Term) -> Self {
        let mut s = Subst::new();
        s.terms.insert(v, t);
        s
    }

    pub fn hedge(v: Var, h: Hedge) -> Self {
        let mut s = Subst::new();
        s.hedges.insert(v, h);
        s
    }

    pub fn func(v: Var, f: Functor) -> Self {
        let mut s = Subst::new();
        s.funcs.insert(v, f);
        s
    }

    pub fn domain(&self) -> BTreeSet<Var> {
        self.terms
            .keys()
            .chain(self.hedges.keys())
            .chain(self.funcs.keys())
            .cloned()
            .collect()
    }

    /// The composition applying `self` first and then `other`.
    pub fn compose(&self, other: &Subst) -> Subst {
        let mut out = Subst::new();
        for (v, t) in &self.terms {
            out.terms.insert(v.clone(), t.apply(other));
        }
        for (v, h) in &self.hedges {
            out.hedges.insert(v.clone(), h.apply(other));
        }
        for (v, f) in &self.funcs {
            out.funcs.insert(v.clone(), f.apply(other));
        }
        for (v, t) in &other.terms {
            out.terms.entry(v.clone()).or_insert_with(|| t.clone());
        }
        for (v, h) in &other.hedges {
            out.hedges.entry(v.clone()).or_insert_with(|| h.clone());
        }
        for (v, f) in &other.funcs {
            out.funcs.entry(v.clone()).or_insert_with(|| f.clone());
        }
        out.terms.retain(|v, t| *t != Term::Var(v.clone()));
        out.hedges.retain(|v, h| *h != Hedge::hvar(v.clone()));
        out.funcs.retain(|v, f| *f != Functor::Var(v.clone()));
        out
    }
}

/// Counter-based fresh variable supply. Fresh names have the form `hint#n`.
#[derive(Clone, Debug, Default)]
pub struct VarGen {
    next: u64,
}

impl VarGen {
    pub fn new() -> Self {
        VarGen { next: 0 }
    }

    /// Moves the counter past every `#n` suffix occurring in `vars`.
    pub fn avoid<'a>(&mut self, vars: impl IntoIterator<Item = &'a Var>) {
        for v in vars {
            if let Some((_, n)) = v.name.rsplit_once('#') {
                if let Ok(n) = n.parse::<u64>() {
                    self.next = self.next.max(n);
                }
            }
        }
    }

    pub fn fresh(&mut self, kind: VarKind, hint: &str) -> Var {
        self.next += 1;
        let base = hint.split('#').next().unwrap_or(hint);
        Var::new(kind, &format!("{}#{}", base, self.next))
    }
}

/// Function symbols, split into ordered and unordered, plus predicates.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub ordered: BTreeSet<Symbol>,
    pub unordered: BTreeSet<Symbol>,
    pub predicates: BTreeSet<(Arc<str>, usize)>,
}

impl Signature {
    pub fn new() -> Self {
        Signature::default()
    }

    pub fn with_symbols(ordered: &[&str], unordered: &[&str]) -> Self {
        let mut s = Signature::new();
        for o in ordered {
            s.ordered.insert(Symbol::new(o));
        }
        for u in unordered {
            s.unordered.insert(Symbol::new(u));
        }
        s
    }

    pub fn is_unordered(&self, f: &Symbol) -> bool {
        self.unordered.contains(f)
    }

    pub fn declares(&self, f: &Symbol) -> bool {
        self.ordered.contains(f) || self.unordered.contains(f)
    }

    /// All function symbols, ordered ones first, each group sorted by name.
    pub fn symbols(&self) -> Vec<Symbol> {
        self.ordered.iter().chain(self.unordered.iter()).cloned().collect()
    }

    /// Declares `f` as ordered unless it is already known.
    pub fn ensure(&mut self, f: &Symbol) {
        if !self.declares(f) {
            self.ordered.insert(f.clone());
        }
    }
}
