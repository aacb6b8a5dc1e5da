//! Brute-force reference implementations used to test the solver and the
//! engine: bounded enumeration of ground hedges, ground evaluation,
//! bounded solution sets, a structural regex matcher and a reference rpo.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::constraint::{Conj, Dnf, Prim};
use crate::regex::Regex;
use crate::syntax::{perms_of, Functor, Hedge, Item, Signature, Subst, Symbol, Term, Var, VarKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    /// Constants have depth 1.
    pub max_depth: usize,
    /// Maximal length of any hedge, at the top or as arguments.
    pub max_width: usize,
    /// Maximal number of symbol occurrences in the whole hedge.
    pub max_total_size: usize,
}

impl Bounds {
    pub fn new(max_depth: usize, max_width: usize, max_total_size: usize) -> Self {
        Bounds { max_depth, max_width, max_total_size }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("grounding leaves {0:?} unbound")]
    NonGround(Var),
    #[error("symbol {0:?} has no precedence or status")]
    Undeclared(Symbol),
}

/// Sorts the arguments of unordered symbols, recursively.
pub fn canonical_term(t: &Term, sig: &Signature) -> Term {
    match t {
        Term::Var(_) => t.clone(),
        Term::App(f, h) => {
            let mut items: Vec<Item> = h
                .items()
                .iter()
                .map(|i| match i {
                    Item::Term(t) => Item::Term(canonical_term(t, sig)),
                    v => v.clone(),
                })
                .collect();
            if matches!(f, Functor::Sym(s) if sig.is_unordered(s)) {
                items.sort();
            }
            Term::App(f.clone(), Hedge(items))
        }
    }
}

pub fn canonical(h: &Hedge, sig: &Signature) -> Hedge {
    Hedge(
        h.items()
            .iter()
            .map(|i| match i {
                Item::Term(t) => Item::Term(canonical_term(t, sig)),
                v => v.clone(),
            })
            .collect(),
    )
}

/// Ground terms of depth ≤ `depth` and size ≤ `size`, canonical, by size.
fn terms(sig: &Signature, depth: usize, size: usize, width: usize) -> Vec<Term> {
    if depth == 0 || size == 0 {
        return Vec::new();
    }
    let args = hedges(sig, depth - 1, size - 1, width);
    let mut out = Vec::new();
    for f in sig.symbols() {
        let unordered = sig.is_unordered(&f);
        for h in &args {
            let sorted = h.items().windows(2).all(|w| w[0] <= w[1]);
            if unordered && !sorted {
                continue;
            }
            out.push(Term::App(Functor::Sym(f.clone()), h.clone()));
        }
    }
    out
}

/// Ground hedges with at most `width` terms, each of depth ≤ `depth`, of
/// total size ≤ `size`.
fn hedges(sig: &Signature, depth: usize, size: usize, width: usize) -> Vec<Hedge> {
    let ts = terms(sig, depth, size, width);
    let mut by_size: BTreeMap<usize, Vec<&Term>> = BTreeMap::new();
    for t in &ts {
        by_size.entry(t.size()).or_default().push(t);
    }
    let mut out = vec![Hedge::empty()];
    let mut frontier: Vec<(Vec<Item>, usize)> = vec![(Vec::new(), 0)];
    for _ in 0..width {
        let mut next = Vec::new();
        for (items, used) in &frontier {
            for t in &ts {
                let s = used + t.size();
                if s <= size {
                    let mut v = items.clone();
                    v.push(Item::Term(t.clone()));
                    out.push(Hedge(v.clone()));
                    next.push((v, s));
                }
            }
        }
        frontier = next;
    }
    out
}

/// All ground hedges within bounds, one canonical representative per
/// permutation class.
pub fn enum_ground(sig: &Signature, b: Bounds) -> Vec<Hedge> {
    let mut out = hedges(sig, b.max_depth, b.max_total_size, b.max_width);
    out.sort_by(|x, y| x.size().cmp(&y.size()).then_with(|| x.cmp(y)));
    out
}

/// Ground terms within bounds (hedges of length one).
pub fn enum_ground_terms(sig: &Signature, b: Bounds) -> Vec<Term> {
    enum_ground(sig, b).into_iter().filter_map(|h| h.as_single_term().cloned()).collect()
}

/// Structural membership, independent of linear forms.
pub fn matches(h: &[Item], r: &Regex, sig: &Signature) -> bool {
    match r {
        Regex::Eps => h.is_empty(),
        Regex::Sym(f, body) => match h {
            [Item::Term(Term::App(Functor::Sym(g), args))] if f == g => {
                if sig.is_unordered(f) {
                    perms_of(args.items()).iter().any(|p| matches(p, body, sig))
                } else {
                    matches(args.items(), body, sig)
                }
            }
            _ => false,
        },
        Regex::Concat(a, b) => (0..=h.len()).any(|k| matches(&h[..k], a, sig) && matches(&h[k..], b, sig)),
        Regex::Choice(a, b) => matches(h, a, sig) || matches(h, b, sig),
        Regex::Star(a) => h.is_empty() || (1..=h.len()).any(|k| matches(&h[..k], a, sig) && matches(&h[k..], r, sig)),
    }
}

/// Members of `⟦r⟧` of size ≤ `max`, canonical and deduplicated, built
/// directly from the expression.
pub fn lang_enumerate(r: &Regex, sig: &Signature, max: usize) -> BTreeSet<Hedge> {
    match r {
        Regex::Eps => BTreeSet::from([Hedge::empty()]),
        Regex::Sym(f, body) => {
            if max == 0 {
                return BTreeSet::new();
            }
            lang_enumerate(body, sig, max - 1)
                .into_iter()
                .map(|h| canonical(&Hedge::single(Term::App(Functor::Sym(f.clone()), h)), sig))
                .collect()
        }
        Regex::Concat(a, b) => {
            let la = lang_enumerate(a, sig, max);
            let lb = lang_enumerate(b, sig, max);
            let mut out = BTreeSet::new();
            for x in &la {
                for y in &lb {
                    if x.size() + y.size() <= max {
                        out.insert(x.concat(y));
                    }
                }
            }
            out
        }
        Regex::Choice(a, b) => {
            let mut out = lang_enumerate(a, sig, max);
            out.extend(lang_enumerate(b, sig, max));
            out
        }
        Regex::Star(a) => {
            let base: Vec<Hedge> = lang_enumerate(a, sig, max).into_iter().filter(|h| !h.is_empty()).collect();
            let mut out = BTreeSet::from([Hedge::empty()]);
            let mut frontier = vec![Hedge::empty()];
            while !frontier.is_empty() {
                let mut next = Vec::new();
                for x in &frontier {
                    for y in &base {
                        if x.size() + y.size() <= max {
                            let z = x.concat(y);
                            if out.insert(z.clone()) {
                                next.push(z);
                            }
                        }
                    }
                }
                frontier = next;
            }
            out
        }
    }
}

fn ground_value_check(h: &Hedge) -> Result<(), OracleError> {
    match h.vars().into_iter().next() {
        Some(v) => Err(OracleError::NonGround(v)),
        None => Ok(()),
    }
}

/// Ground functor images compare by symbol; variables left unbound are errors.
fn ground_functor(f: &Functor, s: &Subst) -> Result<Functor, OracleError> {
    match f.apply(s) {
        Functor::Var(v) => Err(OracleError::NonGround(v)),
        g => Ok(g),
    }
}

/// Evaluates one primitive constraint under a grounding.
pub fn eval_prim(p: &Prim, theta: &Subst, sig: &Signature) -> Result<bool, OracleError> {
    match p {
        Prim::Eq(l, r) => {
            let (l, r) = (l.apply(theta), r.apply(theta));
            ground_value_check(&l)?;
            ground_value_check(&r)?;
            Ok(canonical(&l, sig) == canonical(&r, sig))
        }
        Prim::FEq(f, g) => Ok(ground_functor(f, theta)? == ground_functor(g, theta)?),
        Prim::In(h, r) => {
            let h = h.apply(theta);
            ground_value_check(&h)?;
            Ok(matches(h.items(), r, sig))
        }
    }
}

pub fn eval_ground(c: &Conj, theta: &Subst, sig: &Signature) -> Result<bool, OracleError> {
    match c {
        Conj::False => Ok(false),
        Conj::Lits(ls) => {
            for p in ls {
                if !eval_prim(p, theta, sig)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

pub fn eval_dnf(d: &Dnf, theta: &Subst, sig: &Signature) -> Result<bool, OracleError> {
    for c in &d.0 {
        if eval_ground(c, theta, sig)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// A grounding value, canonical for comparison.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ground {
    Hedge(Hedge),
    Functor(Symbol),
}

pub type Grounding = BTreeMap<Var, Ground>;

/// Candidate values per variable kind.
pub struct Domain {
    pub bounds: Bounds,
    pub hedges: Vec<Hedge>,
    pub terms: Vec<Hedge>,
    pub funcs: Vec<Symbol>,
}

impl Domain {
    pub fn new(sig: &Signature, b: Bounds) -> Self {
        let hedges = enum_ground(sig, b);
        let terms = hedges.iter().filter(|h| h.len() == 1).cloned().collect();
        Domain { bounds: b, hedges, terms, funcs: sig.symbols() }
    }

    fn values(&self, v: &Var) -> Vec<Ground> {
        match v.kind {
            VarKind::Term => self.terms.iter().cloned().map(Ground::Hedge).collect(),
            VarKind::Hedge => self.hedges.iter().cloned().map(Ground::Hedge).collect(),
            VarKind::Func => self.funcs.iter().cloned().map(Ground::Functor).collect(),
        }
    }

    /// Whether the value `v` has under `s` is in the domain.
    fn admits(&self, s: &Subst, v: &Var) -> bool {
        match v.kind {
            VarKind::Term => s.terms.get(v).is_some_and(|t| within(&Hedge::single(t.clone()), self.bounds)),
            VarKind::Hedge => s.hedges.get(v).is_some_and(|h| within(h, self.bounds)),
            VarKind::Func => matches!(s.funcs.get(v), Some(Functor::Sym(f)) if self.funcs.contains(f)),
        }
    }
}

fn depth(h: &Hedge) -> usize {
    h.items()
        .iter()
        .map(|i| match i {
            Item::Term(Term::App(_, a)) => 1 + depth(a),
            _ => 1,
        })
        .max()
        .unwrap_or(0)
}

fn width_within(h: &Hedge, w: usize) -> bool {
    h.len() <= w
        && h.items().iter().all(|i| match i {
            Item::Term(Term::App(_, a)) => width_within(a, w),
            _ => true,
        })
}

/// Whether a ground hedge lies within the bounds.
pub fn within(h: &Hedge, b: Bounds) -> bool {
    depth(h) <= b.max_depth && width_within(h, b.max_width) && h.size() <= b.max_total_size
}

fn bind(s: &mut Subst, v: &Var, g: &Ground) {
    match (v.kind, g) {
        (VarKind::Term, Ground::Hedge(h)) => {
            s.terms.insert(v.clone(), h.as_single_term().expect("term value").clone());
        }
        (VarKind::Hedge, Ground::Hedge(h)) => {
            s.hedges.insert(v.clone(), h.clone());
        }
        (VarKind::Func, Ground::Functor(f)) => {
            s.funcs.insert(v.clone(), Functor::Sym(f.clone()));
        }
        _ => unreachable!("value kind matches variable kind"),
    }
}

fn bound(s: &Subst, v: &Var) -> bool {
    s.terms.contains_key(v) || s.hedges.contains_key(v) || s.funcs.contains_key(v)
}

fn same(a: &[Item], b: &[Item], sig: &Signature) -> bool {
    a.len() == b.len() && canonical(&Hedge(a.to_vec()), sig) == canonical(&Hedge(b.to_vec()), sig)
}

/// Extensions of `s` under which the pattern `pat` equals the ground `g`,
/// modulo the argument order of unordered symbols.
fn match_items(pat: &[Item], g: &[Item], s: &Subst, sig: &Signature, out: &mut Vec<Subst>) {
    let Some((first, rest)) = pat.split_first() else {
        if g.is_empty() {
            out.push(s.clone());
        }
        return;
    };
    let min_rest = rest.iter().filter(|i| matches!(i, Item::Term(_))).count();
    match first {
        Item::HVar(x) => {
            if let Some(v) = s.hedges.get(x) {
                let n = v.len();
                if g.len() >= n && same(&g[..n], v.items(), sig) {
                    match_items(rest, &g[n..], s, sig, out);
                }
                return;
            }
            for k in 0..=g.len().saturating_sub(min_rest) {
                let mut s2 = s.clone();
                s2.hedges.insert(x.clone(), Hedge(g[..k].to_vec()));
                match_items(rest, &g[k..], &s2, sig, out);
            }
        }
        Item::Term(t) => {
            let Some((Item::Term(gt), g_rest)) = g.split_first() else { return };
            let mut heads = Vec::new();
            match_term(t, gt, s, sig, &mut heads);
            for s2 in heads {
                match_items(rest, g_rest, &s2, sig, out);
            }
        }
    }
}

fn match_term(t: &Term, g: &Term, s: &Subst, sig: &Signature, out: &mut Vec<Subst>) {
    let Term::App(Functor::Sym(h), gargs) = g else { return };
    match t {
        Term::Var(x) => match s.terms.get(x) {
            Some(v) => {
                if canonical_term(v, sig) == canonical_term(g, sig) {
                    out.push(s.clone());
                }
            }
            None => {
                let mut s2 = s.clone();
                s2.terms.insert(x.clone(), g.clone());
                out.push(s2);
            }
        },
        Term::App(f, args) => {
            let mut s = s.clone();
            match f {
                Functor::Sym(f) if f != h => return,
                Functor::Sym(_) => {}
                Functor::Var(fv) => match s.funcs.get(fv) {
                    Some(Functor::Sym(b)) if b == h => {}
                    Some(_) => return,
                    None => {
                        s.funcs.insert(fv.clone(), Functor::Sym(h.clone()));
                    }
                },
            }
            if sig.is_unordered(h) {
                for p in perms_of(gargs.items()) {
                    match_items(args.items(), &p, &s, sig, out);
                }
            } else {
                match_items(args.items(), gargs.items(), &s, sig, out);
            }
        }
    }
}

struct Brute<'a> {
    lits: &'a [Prim],
    keep: &'a [Var],
    sig: &'a Signature,
    dom: &'a Domain,
}

impl Brute<'_> {
    /// Depth-first over groundings of the literals in `pending`. Literals
    /// are checked as soon as they are ground; an equation with a ground
    /// side binds the other side by matching; remaining variables range
    /// over the domain, kept ones first.
    fn go(&self, s: &Subst, pending: &[usize], visit: &mut dyn FnMut(&Subst)) {
        let mut open = Vec::with_capacity(pending.len());
        for &k in pending {
            match eval_prim(&self.lits[k], s, self.sig) {
                Ok(false) => return,
                Ok(true) => {}
                Err(_) => open.push(k),
            }
        }
        if open.is_empty() {
            visit(s);
            return;
        }
        for (n, &k) in open.iter().enumerate() {
            let rest: Vec<usize> = open.iter().enumerate().filter(|&(m, _)| m != n).map(|(_, &k)| k).collect();
            match &self.lits[k] {
                Prim::Eq(l, r) => {
                    for (pat, g) in [(l, r), (r, l)] {
                        let g = g.apply(s);
                        if !g.is_ground() {
                            continue;
                        }
                        let mut out = Vec::new();
                        match_items(pat.items(), g.items(), s, self.sig, &mut out);
                        for s2 in out {
                            if self.keep.iter().all(|v| bound(s, v) || !bound(&s2, v) || self.dom.admits(&s2, v)) {
                                self.go(&s2, &rest, visit);
                            }
                        }
                        return;
                    }
                }
                Prim::FEq(f, g) => {
                    for (a, b) in [(f, g), (g, f)] {
                        let (Functor::Var(x), Functor::Sym(h)) = (a.apply(s), b.apply(s)) else { continue };
                        let mut s2 = s.clone();
                        s2.funcs.insert(x.clone(), Functor::Sym(h));
                        if !self.keep.contains(&x) || self.dom.admits(&s2, &x) {
                            self.go(&s2, &rest, visit);
                        }
                        return;
                    }
                }
                Prim::In(..) => {}
            }
        }
        let mut free = BTreeSet::new();
        for &k in &open {
            self.lits[k].collect_vars(&mut free);
        }
        free.retain(|v| !bound(s, v));
        let v = self.keep.iter().find(|v| free.contains(*v)).or_else(|| free.iter().next()).expect("an open literal has a free variable");
        for g in self.dom.values(v) {
            let mut s2 = s.clone();
            bind(&mut s2, v, &g);
            self.go(&s2, &open, visit);
        }
    }
}

fn value_of(s: &Subst, v: &Var, sig: &Signature) -> Ground {
    match v.kind {
        VarKind::Term => Ground::Hedge(canonical(&Hedge::single(s.terms[v].clone()), sig)),
        VarKind::Hedge => Ground::Hedge(canonical(&s.hedges[v], sig)),
        VarKind::Func => match &s.funcs[v] {
            Functor::Sym(f) => Ground::Functor(f.clone()),
            Functor::Var(_) => unreachable!("groundings bind symbols"),
        },
    }
}

/// Groundings of `keep` (drawn from `dom`) that extend to a solution of
/// some disjunct of `d`. Other variables of `d` are existential; they are
/// bound by matching against ground sides where possible and otherwise
/// range over the domain.
pub fn brute_solutions(d: &Dnf, keep: &[Var], sig: &Signature, dom: &Domain) -> BTreeSet<Grounding> {
    let mut out = BTreeSet::new();
    for c in &d.0 {
        let Conj::Lits(lits) = c else { continue };
        let cv = c.vars();
        let brute = Brute { lits, keep, sig, dom };
        let mut partial: BTreeSet<Vec<Ground>> = BTreeSet::new();
        let present: Vec<&Var> = keep.iter().filter(|v| cv.contains(*v)).collect();
        let all: Vec<usize> = (0..lits.len()).collect();
        brute.go(&Subst::new(), &all, &mut |s| {
            partial.insert(present.iter().map(|v| value_of(s, v, sig)).collect());
        });
        // Kept variables absent from this disjunct are unconstrained.
        for vals in partial {
            let mut combos: Vec<Grounding> = vec![present.iter().map(|v| (*v).clone()).zip(vals).collect()];
            for v in keep.iter().filter(|v| !cv.contains(*v)) {
                combos = combos
                    .into_iter()
                    .flat_map(|m| {
                        dom.values(v).into_iter().map(move |g| {
                            let mut m = m.clone();
                            m.insert(v.clone(), g);
                            m
                        })
                    })
                    .collect();
            }
            out.extend(combos);
        }
    }
    out
}

/// Turns a grounding into a substitution.
pub fn grounding_subst(g: &Grounding) -> Subst {
    let mut s = Subst::new();
    for (v, val) in g {
        bind(&mut s, v, val);
    }
    s
}

/// Ground solutions read off a solved conjunction: membership-constrained
/// variables take small members of their language, other unsolved
/// variables take each of `defaults`, and equation-solved variables take
/// their instantiated right-hand sides. At most `limit` results.
pub fn solved_groundings(c: &Conj, sig: &Signature, defaults: &[Term], limit: usize) -> Vec<Subst> {
    let lits = c.lits();
    let solved: Vec<Option<Var>> = (0..lits.len()).map(|i| crate::constraint::solved_var(lits, i)).collect();
    let mut choices: Vec<(Var, Vec<Ground>)> = Vec::new();
    let mut eq_bound = BTreeSet::new();
    for (i, p) in lits.iter().enumerate() {
        let Some(v) = &solved[i] else { continue };
        match p {
            Prim::In(_, r) => {
                let mut members: Vec<Hedge> = (1..=8)
                    .map(|m| lang_enumerate(r, sig, m))
                    .find(|s| s.iter().any(|h| v.kind != VarKind::Term || h.len() == 1))
                    .unwrap_or_default()
                    .into_iter()
                    .filter(|h| v.kind != VarKind::Term || h.len() == 1)
                    .collect();
                members.truncate(3);
                choices.push((v.clone(), members.into_iter().map(Ground::Hedge).collect()));
            }
            _ => {
                eq_bound.insert(v.clone());
            }
        }
    }
    let constrained: BTreeSet<Var> = choices.iter().map(|(v, _)| v.clone()).collect();
    for v in c.vars() {
        if eq_bound.contains(&v) || constrained.contains(&v) {
            continue;
        }
        let vals = match v.kind {
            VarKind::Term => defaults.iter().map(|t| Ground::Hedge(Hedge::single(t.clone()))).collect(),
            VarKind::Hedge => {
                let mut vs = vec![Ground::Hedge(Hedge::empty())];
                vs.extend(defaults.iter().map(|t| Ground::Hedge(Hedge::single(t.clone()))));
                vs
            }
            VarKind::Func => sig.symbols().into_iter().take(2).map(Ground::Functor).collect(),
        };
        choices.push((v, vals));
    }
    let mut base: Vec<Subst> = vec![Subst::new()];
    for (v, vals) in &choices {
        let mut next = Vec::new();
        for s in &base {
            for g in vals {
                let mut s2 = s.clone();
                bind(&mut s2, v, g);
                next.push(s2);
                if next.len() >= limit {
                    break;
                }
            }
        }
        base = next;
    }
    // Right-hand sides mention only unsolved variables, so one pass suffices.
    base.into_iter()
        .map(|s| {
            let mut out = s.clone();
            for (i, p) in lits.iter().enumerate() {
                let (Some(v), false) = (&solved[i], p.is_membership()) else { continue };
                match p {
                    Prim::Eq(l, r) => {
                        let other = if l.as_single_term() == Some(&Term::Var(v.clone())) || l.as_single_hvar() == Some(v) {
                            r
                        } else {
                            l
                        };
                        let val = other.apply(&s);
                        match v.kind {
                            VarKind::Term => {
                                out.terms.insert(v.clone(), val.as_single_term().cloned().unwrap_or(Term::Var(v.clone())));
                            }
                            _ => {
                                out.hedges.insert(v.clone(), val);
                            }
                        }
                    }
                    Prim::FEq(f, g) => {
                        let other = if *f == Functor::Var(v.clone()) { g } else { f };
                        out.funcs.insert(v.clone(), other.apply(&s));
                    }
                    Prim::In(..) => {}
                }
            }
            out
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Lex,
    Mul,
}

/// Precedence (earlier is greater) and status per symbol.
#[derive(Clone, Debug, Default)]
pub struct RpoTable {
    pub order: Vec<Symbol>,
    pub status: BTreeMap<Symbol, Status>,
}

impl RpoTable {
    fn rank(&self, f: &Symbol) -> Result<usize, OracleError> {
        self.order.iter().position(|g| g == f).ok_or_else(|| OracleError::Undeclared(f.clone()))
    }

    fn status_of(&self, f: &Symbol) -> Result<Status, OracleError> {
        self.status.get(f).copied().ok_or_else(|| OracleError::Undeclared(f.clone()))
    }
}

fn head_args(t: &Term) -> (Symbol, Vec<Term>) {
    match t {
        Term::App(Functor::Sym(f), h) => (f.clone(), h.items().iter().filter_map(|i| i.as_term().cloned()).collect()),
        _ => panic!("rpo is defined on ground terms"),
    }
}

/// `s >rpo t` on ground ranked terms.
pub fn rpo_reference(s: &Term, t: &Term, tab: &RpoTable) -> Result<bool, OracleError> {
    let (f, ss) = head_args(s);
    for si in &ss {
        if si == t || rpo_reference(si, t, tab)? {
            return Ok(true);
        }
    }
    let (g, ts) = head_args(t);
    for ti in &ts {
        if !rpo_reference(s, ti, tab)? {
            return Ok(false);
        }
    }
    let (rf, rg) = (tab.rank(&f)?, tab.rank(&g)?);
    if rf < rg {
        return Ok(true);
    }
    if f != g {
        return Ok(false);
    }
    match tab.status_of(&f)? {
        Status::Lex => lex_greater(&ss, &ts, tab),
        Status::Mul => mul_greater(&ss, &ts, tab),
    }
}

fn lex_greater(ss: &[Term], ts: &[Term], tab: &RpoTable) -> Result<bool, OracleError> {
    for (a, b) in ss.iter().zip(ts) {
        if a != b {
            return rpo_reference(a, b, tab);
        }
    }
    Ok(false)
}

/// Multiset extension: after cancelling common elements, the left rest is
/// non-empty and dominates every element of the right rest.
fn mul_greater(ss: &[Term], ts: &[Term], tab: &RpoTable) -> Result<bool, OracleError> {
    let mut left: Vec<Term> = ss.to_vec();
    let mut right: Vec<Term> = Vec::new();
    for t in ts {
        match left.iter().position(|x| x == t) {
            Some(i) => {
                left.remove(i);
            }
            None => right.push(t.clone()),
        }
    }
    if left.is_empty() {
        return Ok(false);
    }
    for r in &right {
        let mut dominated = false;
        for l in &left {
            if rpo_reference(l, r, tab)? {
                dominated = true;
                break;
            }
        }
        if !dominated {
            return Ok(false);
        }
    }
    Ok(true)
}
