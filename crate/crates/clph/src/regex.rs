//! Regular hedge expressions and their linear forms.

use thiserror::Error;

use crate::syntax::{Hedge, Item, Signature, Symbol, Term, Functor};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Regex {
    Eps,
    Sym(Symbol, Box<Regex>),
    Concat(Box<Regex>, Box<Regex>),
    Choice(Box<Regex>, Box<Regex>),
    Star(Box<Regex>),
}

/// A linear form: pairs `(f(head_body), tail)`.
pub type LinearForm = Vec<(Symbol, Regex, Regex)>;

impl Regex {
    pub fn sym(f: &str, body: Regex) -> Regex {
        Regex::Sym(Symbol::new(f), Box::new(body))
    }

    /// `f(eps)`, written `f` in source.
    pub fn atom(f: &str) -> Regex {
        Regex::sym(f, Regex::Eps)
    }

    pub fn concat(a: Regex, b: Regex) -> Regex {
        Regex::Concat(Box::new(a), Box::new(b))
    }

    pub fn choice(a: Regex, b: Regex) -> Regex {
        Regex::Choice(Box::new(a), Box::new(b))
    }

    pub fn star(a: Regex) -> Regex {
        Regex::Star(Box::new(a))
    }

    /// Denotational length; the implicit `eps` body of `f` is not counted.
    pub fn size(&self) -> usize {
        match self {
            Regex::Eps => 1,
            Regex::Sym(_, b) if **b == Regex::Eps => 1,
            Regex::Sym(_, b) => 1 + b.size(),
            Regex::Concat(a, b) | Regex::Choice(a, b) => 1 + a.size() + b.size(),
            Regex::Star(a) => 1 + a.size(),
        }
    }

    pub fn nullable(&self) -> bool {
        match self {
            Regex::Eps | Regex::Star(_) => true,
            Regex::Sym(..) => false,
            Regex::Concat(a, b) => a.nullable() && b.nullable(),
            Regex::Choice(a, b) => a.nullable() || b.nullable(),
        }
    }

    pub fn symbols(&self, out: &mut Vec<Symbol>) {
        match self {
            Regex::Eps => {}
            Regex::Sym(f, b) => {
                if !out.contains(f) {
                    out.push(f.clone());
                }
                b.symbols(out);
            }
            Regex::Concat(a, b) | Regex::Choice(a, b) => {
                a.symbols(out);
                b.symbols(out);
            }
            Regex::Star(a) => a.symbols(out),
        }
    }

    /// Upper bound on the length of member hedges; `None` when unbounded.
    pub fn max_len(&self) -> Option<usize> {
        match self {
            Regex::Eps => Some(0),
            Regex::Sym(..) => Some(1),
            Regex::Concat(a, b) => Some(a.max_len()? + b.max_len()?),
            Regex::Choice(a, b) => Some(a.max_len()?.max(b.max_len()?)),
            Regex::Star(a) => match a.max_len()? {
                0 => Some(0),
                _ => None,
            },
        }
    }

    /// A sufficient syntactic test for closure of the language under
    /// permutation of hedge elements.
    pub fn perm_closed(&self) -> bool {
        match self {
            Regex::Choice(a, b) => a.perm_closed() && b.perm_closed(),
            Regex::Star(a) => a.max_len().is_some_and(|n| n <= 1),
            _ => self.max_len().is_some_and(|n| n <= 1),
        }
    }
}

pub fn lf(r: &Regex) -> LinearForm {
    match r {
        Regex::Eps => Vec::new(),
        Regex::Sym(f, b) => vec![(f.clone(), (**b).clone(), Regex::Eps)],
        Regex::Choice(a, b) => union(lf(a), lf(b)),
        Regex::Concat(a, b) => {
            let left = odot(lf(a), b);
            if a.nullable() {
                union(left, lf(b))
            } else {
                left
            }
        }
        Regex::Star(a) => odot(lf(a), r),
    }
}

pub fn odot(l: LinearForm, r: &Regex) -> LinearForm {
    if *r == Regex::Eps {
        return l;
    }
    let mapped = l
        .into_iter()
        .map(|(f, b, tail)| {
            let tail = if tail == Regex::Eps { r.clone() } else { Regex::concat(tail, r.clone()) };
            (f, b, tail)
        })
        .collect();
    union(mapped, Vec::new())
}

fn union(mut a: LinearForm, b: LinearForm) -> LinearForm {
    let mut out: LinearForm = Vec::with_capacity(a.len() + b.len());
    for p in a.drain(..).chain(b) {
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MemberError {
    #[error("membership test on a non-ground hedge")]
    NonGround,
}

/// Decides `h ∈ ⟦r⟧` for a ground hedge using linear forms. Arguments of
/// unordered symbols match if some permutation of them does.
pub fn ground_member(h: &Hedge, r: &Regex, sig: &Signature) -> Result<bool, MemberError> {
    if !h.is_ground() {
        return Err(MemberError::NonGround);
    }
    Ok(member(h.items(), r, sig))
}

fn member(h: &[Item], r: &Regex, sig: &Signature) -> bool {
    let Some((first, rest)) = h.split_first() else {
        return r.nullable();
    };
    let Some(Term::App(Functor::Sym(g), args)) = first.as_term() else {
        return false;
    };
    lf(r).iter().any(|(f, body, tail)| {
        f == g && member_args(args.items(), body, sig.is_unordered(f), sig) && member(rest, tail, sig)
    })
}

pub(crate) fn member_args(args: &[Item], body: &Regex, unordered: bool, sig: &Signature) -> bool {
    if unordered {
        crate::syntax::perms_of(args).iter().any(|p| member(p, body, sig))
    } else {
        member(args, body, sig)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Regex {
        Regex::atom("a")
    }
    fn b() -> Regex {
        Regex::atom("b")
    }

    #[test]
    fn size_reference_value() {
        let r = Regex::sym("f", Regex::sym("f", Regex::concat(a(), Regex::star(b()))));
        assert_eq!(r.size(), 6);
        assert_eq!(Regex::Eps.size(), 1);
    }

    #[test]
    fn nullable_cases() {
        assert!(Regex::Eps.nullable());
        assert!(!Regex::concat(Regex::sym("f", Regex::star(a())), Regex::star(b())).nullable());
        assert!(Regex::star(Regex::atom("f")).nullable());
    }

    #[test]
    fn linear_forms() {
        assert!(lf(&Regex::Eps).is_empty());
        let fa = Regex::sym("f", Regex::star(a()));
        assert_eq!(lf(&fa), vec![(Symbol::new("f"), Regex::star(a()), Regex::Eps)]);
        let r = Regex::concat(Regex::sym("f", a()), Regex::star(b()));
        assert_eq!(lf(&r), vec![(Symbol::new("f"), a(), Regex::star(b()))]);
    }

    #[test]
    fn odot_cases() {
        let l = vec![(Symbol::new("f"), a(), Regex::Eps)];
        assert_eq!(odot(l.clone(), &Regex::star(b())), vec![(Symbol::new("f"), a(), Regex::star(b()))]);
        let l2 = vec![(Symbol::new("f"), a(), Regex::atom("c"))];
        assert_eq!(
            odot(l2.clone(), &Regex::star(b())),
            vec![(Symbol::new("f"), a(), Regex::concat(Regex::atom("c"), Regex::star(b())))]
        );
        assert_eq!(odot(l2.clone(), &Regex::Eps), l2);
    }

    #[test]
    fn membership_examples() {
        let sig = Signature::with_symbols(&["a", "b", "f"], &[]);
        let r = Regex::concat(Regex::sym("f", Regex::star(a())), Regex::star(b()));
        let fb = Hedge::terms(vec![Term::constant("f"), Term::constant("b")]);
        assert_eq!(ground_member(&fb, &r, &sig), Ok(true));
        assert_eq!(ground_member(&Hedge::empty(), &Regex::Eps, &sig), Ok(true));
        let just_b = Hedge::terms(vec![Term::constant("b")]);
        assert_eq!(ground_member(&just_b, &Regex::sym("f", Regex::star(a())), &sig), Ok(false));
    }

    #[test]
    fn unordered_membership_uses_permutations() {
        let sig = Signature::with_symbols(&["a", "b"], &["g"]);
        let r = Regex::sym("g", Regex::concat(a(), b()));
        let t = Hedge::single(Term::sym("g", vec![Item::Term(Term::constant("b")), Item::Term(Term::constant("a"))]));
        assert_eq!(ground_member(&t, &r, &sig), Ok(true));
    }
}
