//! Hedge automata: a horizontal word automaton over tree states, where each
//! tree state carries a symbol and a word automaton for its children.
//! Used to intersect regular hedge expressions.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use thiserror::Error;

use crate::regex::Regex;
use crate::syntax::{Signature, Symbol};

/// A word automaton over tree-state labels. `None` labels are epsilon moves.
#[derive(Clone, Debug, Default)]
pub struct Nfa {
    pub start: usize,
    pub accept: Vec<bool>,
    pub trans: Vec<Vec<(Option<usize>, usize)>>,
}

#[derive(Clone, Debug)]
pub struct TreeState {
    pub sym: Symbol,
    pub children: Nfa,
    /// Source expression for the children; used to judge permutation closure.
    pub body: Regex,
}

#[derive(Clone, Debug)]
pub struct HedgeAutomaton {
    pub trees: Vec<TreeState>,
    pub top: Nfa,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IntersectError {
    #[error("intersection under the unordered symbol {0:?} is not expressible by a sequence product")]
    UnorderedInexact(Symbol),
}

impl Nfa {
    fn add_state(&mut self) -> usize {
        self.accept.push(false);
        self.trans.push(Vec::new());
        self.accept.len() - 1
    }

    fn len(&self) -> usize {
        self.accept.len()
    }

    fn eps_closure(&self, s: usize) -> BTreeSet<usize> {
        let mut seen = BTreeSet::from([s]);
        let mut stack = vec![s];
        while let Some(p) = stack.pop() {
            for (l, q) in &self.trans[p] {
                if l.is_none() && seen.insert(*q) {
                    stack.push(*q);
                }
            }
        }
        seen
    }

    /// An equivalent automaton without epsilon moves.
    fn remove_eps(&self) -> Nfa {
        let n = self.len();
        let mut out = Nfa { start: self.start, accept: vec![false; n], trans: vec![Vec::new(); n] };
        for p in 0..n {
            for q in self.eps_closure(p) {
                if self.accept[q] {
                    out.accept[p] = true;
                }
                for (l, r) in &self.trans[q] {
                    if let Some(l) = l {
                        if !out.trans[p].contains(&(Some(*l), *r)) {
                            out.trans[p].push((Some(*l), *r));
                        }
                    }
                }
            }
        }
        out
    }

    /// True if some accepted word uses only labels satisfying `ok`.
    fn accepts_some(&self, ok: &dyn Fn(usize) -> bool) -> bool {
        let mut seen = vec![false; self.len()];
        let mut queue = VecDeque::from([self.start]);
        seen[self.start] = true;
        while let Some(p) = queue.pop_front() {
            if self.accept[p] {
                return true;
            }
            for (l, q) in &self.trans[p] {
                if l.is_none_or(ok) && !seen[*q] {
                    seen[*q] = true;
                    queue.push_back(*q);
                }
            }
        }
        false
    }
}

struct Builder<'a> {
    trees: Vec<TreeState>,
    _sig: &'a Signature,
}

impl Builder<'_> {
    fn nfa(&mut self, r: &Regex) -> Nfa {
        let mut nfa = Nfa::default();
        let s = nfa.add_state();
        let e = nfa.add_state();
        nfa.start = s;
        nfa.accept[e] = true;
        self.frag(r, &mut nfa, s, e);
        nfa.remove_eps()
    }

    fn frag(&mut self, r: &Regex, nfa: &mut Nfa, s: usize, e: usize) {
        match r {
            Regex::Eps => nfa.trans[s].push((None, e)),
            Regex::Sym(f, body) => {
                let children = self.nfa(body);
                self.trees.push(TreeState { sym: f.clone(), children, body: (**body).clone() });
                nfa.trans[s].push((Some(self.trees.len() - 1), e));
            }
            Regex::Concat(a, b) => {
                let m = nfa.add_state();
                self.frag(a, nfa, s, m);
                self.frag(b, nfa, m, e);
            }
            Regex::Choice(a, b) => {
                self.frag(a, nfa, s, e);
                self.frag(b, nfa, s, e);
            }
            Regex::Star(a) => {
                let m = nfa.add_state();
                nfa.trans[s].push((None, m));
                nfa.trans[m].push((None, e));
                let m2 = nfa.add_state();
                self.frag(a, nfa, m, m2);
                nfa.trans[m2].push((None, m));
            }
        }
    }
}

pub fn to_automaton(r: &Regex, sig: &Signature) -> HedgeAutomaton {
    let mut b = Builder { trees: Vec::new(), _sig: sig };
    let top = b.nfa(r);
    HedgeAutomaton { trees: b.trees, top }
}

struct Product<'a> {
    a: &'a HedgeAutomaton,
    b: &'a HedgeAutomaton,
    sig: &'a Signature,
    pairs: HashMap<(usize, usize), Option<usize>>,
    trees: Vec<TreeState>,
    error: Option<IntersectError>,
}

impl Product<'_> {
    fn tree_pair(&mut self, i: usize, j: usize) -> Option<usize> {
        if let Some(r) = self.pairs.get(&(i, j)) {
            return *r;
        }
        let (ta, tb) = (&self.a.trees[i], &self.b.trees[j]);
        if ta.sym != tb.sym {
            self.pairs.insert((i, j), None);
            return None;
        }
        if self.sig.is_unordered(&ta.sym)
            && ta.body != tb.body
            && !ta.body.perm_closed()
            && !tb.body.perm_closed()
            && self.error.is_none()
        {
            self.error = Some(IntersectError::UnorderedInexact(ta.sym.clone()));
        }
        let (ca, cb) = (ta.children.clone(), tb.children.clone());
        let sym = ta.sym.clone();
        let body = ta.body.clone();
        let children = self.nfa_pair(&ca, &cb);
        self.trees.push(TreeState { sym, children, body });
        let id = self.trees.len() - 1;
        self.pairs.insert((i, j), Some(id));
        Some(id)
    }

    fn nfa_pair(&mut self, x: &Nfa, y: &Nfa) -> Nfa {
        let mut out = Nfa::default();
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let s = out.add_state();
        out.start = s;
        index.insert((x.start, y.start), s);
        let mut queue = VecDeque::from([(x.start, y.start)]);
        while let Some((p, q)) = queue.pop_front() {
            let from = index[&(p, q)];
            out.accept[from] = x.accept[p] && y.accept[q];
            for (la, pa) in &x.trans[p] {
                for (lb, qb) in &y.trans[q] {
                    let (Some(la), Some(lb)) = (la, lb) else { continue };
                    let Some(label) = self.tree_pair(*la, *lb) else { continue };
                    let to = match index.get(&(*pa, *qb)) {
                        Some(t) => *t,
                        None => {
                            let t = out.add_state();
                            index.insert((*pa, *qb), t);
                            queue.push_back((*pa, *qb));
                            t
                        }
                    };
                    out.trans[from].push((Some(label), to));
                }
            }
        }
        out
    }
}

/// Product automaton. Fails when an unordered node would make the sequence
/// product a strict subset of the intersection.
pub fn product(
    a: &HedgeAutomaton,
    b: &HedgeAutomaton,
    sig: &Signature,
) -> Result<HedgeAutomaton, IntersectError> {
    let mut p = Product { a, b, sig, pairs: HashMap::new(), trees: Vec::new(), error: None };
    let top = p.nfa_pair(&a.top, &b.top);
    match p.error {
        Some(e) => Err(e),
        None => Ok(HedgeAutomaton { trees: p.trees, top }),
    }
}

fn productive(a: &HedgeAutomaton) -> Vec<bool> {
    let mut prod = vec![false; a.trees.len()];
    loop {
        let mut changed = false;
        for i in 0..a.trees.len() {
            if !prod[i] && a.trees[i].children.accepts_some(&|l| prod[l]) {
                prod[i] = true;
                changed = true;
            }
        }
        if !changed {
            return prod;
        }
    }
}

pub fn is_empty(a: &HedgeAutomaton) -> bool {
    let prod = productive(a);
    !a.top.accepts_some(&|l| prod[l])
}

/// Converts back to an expression by state elimination at every level;
/// `None` stands for the empty language.
pub fn automaton_to_regex(a: &HedgeAutomaton) -> Option<Regex> {
    let prod = productive(a);
    let mut memo: BTreeMap<usize, Regex> = BTreeMap::new();
    nfa_to_regex(&a.top, a, &prod, &mut memo)
}

fn tree_regex(i: usize, a: &HedgeAutomaton, prod: &[bool], memo: &mut BTreeMap<usize, Regex>) -> Regex {
    if let Some(r) = memo.get(&i) {
        return r.clone();
    }
    let body = nfa_to_regex(&a.trees[i].children, a, prod, memo).expect("productive tree state");
    let r = Regex::Sym(a.trees[i].sym.clone(), Box::new(body));
    memo.insert(i, r.clone());
    r
}

fn alt(x: Option<Regex>, y: Regex) -> Regex {
    match x {
        None => y,
        Some(x) if x == y => x,
        Some(Regex::Eps) if y.nullable() => y,
        Some(x) if x.nullable() && y == Regex::Eps => x,
        Some(x) => Regex::choice(x, y),
    }
}

fn cat(x: Regex, y: Regex) -> Regex {
    match (x, y) {
        (Regex::Eps, y) => y,
        (x, Regex::Eps) => x,
        (x, y) => Regex::concat(x, y),
    }
}

fn star(x: Regex) -> Regex {
    match x {
        Regex::Eps => Regex::Eps,
        s @ Regex::Star(_) => s,
        x => Regex::star(x),
    }
}

fn nfa_to_regex(
    nfa: &Nfa,
    a: &HedgeAutomaton,
    prod: &[bool],
    memo: &mut BTreeMap<usize, Regex>,
) -> Option<Regex> {
    let n = nfa.len();
    // Keep states reachable from the start and co-reachable to acceptance over productive labels.
    let mut fwd = vec![false; n];
    let mut stack = vec![nfa.start];
    fwd[nfa.start] = true;
    while let Some(p) = stack.pop() {
        for (l, q) in &nfa.trans[p] {
            if l.is_none_or(|l| prod[l]) && !fwd[*q] {
                fwd[*q] = true;
                stack.push(*q);
            }
        }
    }
    let mut bwd: Vec<bool> = nfa.accept.clone();
    loop {
        let mut changed = false;
        for p in 0..n {
            if bwd[p] {
                continue;
            }
            if nfa.trans[p].iter().any(|(l, q)| l.is_none_or(|l| prod[l]) && bwd[*q]) {
                bwd[p] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    if !(fwd[nfa.start] && bwd[nfa.start]) {
        return None;
    }
    let live: Vec<usize> = (0..n).filter(|&p| fwd[p] && bwd[p]).collect();
    // Nodes: live states, then a fresh start S and final F.
    let idx: HashMap<usize, usize> = live.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let m = live.len();
    let (s_node, f_node) = (m, m + 1);
    let mut edges: BTreeMap<(usize, usize), Regex> = BTreeMap::new();
    let add = |edges: &mut BTreeMap<(usize, usize), Regex>, i: usize, j: usize, r: Regex| {
        let cur = edges.remove(&(i, j));
        edges.insert((i, j), alt(cur, r));
    };
    add(&mut edges, s_node, idx[&nfa.start], Regex::Eps);
    for &p in &live {
        if nfa.accept[p] {
            add(&mut edges, idx[&p], f_node, Regex::Eps);
        }
        for (l, q) in &nfa.trans[p] {
            let Some(&qi) = idx.get(q) else { continue };
            let r = match l {
                None => Regex::Eps,
                Some(l) if prod[*l] => tree_regex(*l, a, prod, memo),
                Some(_) => continue,
            };
            add(&mut edges, idx[&p], qi, r);
        }
    }
    let mut remaining: BTreeSet<usize> = (0..m).collect();
    while !remaining.is_empty() {
        // Eliminate the node with the fewest in*out edges first.
        let k = *remaining
            .iter()
            .min_by_key(|&&k| {
                let ins = edges.keys().filter(|(i, j)| *j == k && *i != k).count();
                let outs = edges.keys().filter(|(i, j)| *i == k && *j != k).count();
                (ins * outs, k)
            })
            .unwrap();
        remaining.remove(&k);
        let self_loop = edges.remove(&(k, k)).map(star);
        let ins: Vec<(usize, Regex)> =
            edges.iter().filter(|((_, j), _)| *j == k).map(|((i, _), r)| (*i, r.clone())).collect();
        let outs: Vec<(usize, Regex)> =
            edges.iter().filter(|((i, _), _)| *i == k).map(|((_, j), r)| (*j, r.clone())).collect();
        edges.retain(|(i, j), _| *i != k && *j != k);
        for (i, ri) in &ins {
            for (j, rj) in &outs {
                let mid = match &self_loop {
                    Some(l) => cat(cat(ri.clone(), l.clone()), rj.clone()),
                    None => cat(ri.clone(), rj.clone()),
                };
                add(&mut edges, *i, *j, mid);
            }
        }
    }
    edges.remove(&(s_node, f_node))
}

/// An expression for `⟦r1⟧ ∩ ⟦r2⟧`, or `None` when the intersection is empty.
pub fn intersect(r1: &Regex, r2: &Regex, sig: &Signature) -> Result<Option<Regex>, IntersectError> {
    if r1 == r2 {
        return Ok(Some(r1.clone()));
    }
    let a = to_automaton(r1, sig);
    let b = to_automaton(r2, sig);
    let p = product(&a, &b, sig)?;
    if is_empty(&p) {
        return Ok(None);
    }
    Ok(automaton_to_regex(&p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Regex {
        Regex::atom("a")
    }

    #[test]
    fn disjoint_singletons_are_empty() {
        let sig = Signature::with_symbols(&["f", "g"], &[]);
        assert_eq!(intersect(&Regex::atom("f"), &Regex::atom("g"), &sig), Ok(None));
    }

    #[test]
    fn stars_of_different_atoms_meet_in_eps() {
        let sig = Signature::with_symbols(&["a", "b"], &[]);
        let r = intersect(&Regex::star(a()), &Regex::star(Regex::atom("b")), &sig).unwrap();
        assert_eq!(r, Some(Regex::Eps));
    }

    #[test]
    fn grammar_expressions_are_never_empty() {
        let sig = Signature::with_symbols(&["a", "f"], &[]);
        let r = Regex::concat(Regex::sym("f", Regex::star(a())), Regex::choice(a(), Regex::Eps));
        assert!(!is_empty(&to_automaton(&r, &sig)));
    }

    #[test]
    fn unordered_nonclosed_bodies_are_rejected() {
        let sig = Signature::with_symbols(&["a", "b"], &["g"]);
        let r1 = Regex::sym("g", Regex::concat(a(), Regex::atom("b")));
        let r2 = Regex::sym("g", Regex::concat(Regex::atom("b"), a()));
        assert!(intersect(&r1, &r2, &sig).is_err());
    }
}
