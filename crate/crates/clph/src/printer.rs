//! Concrete-syntax rendering. Output parses back to the same value.

use std::fmt::{self, Display};

use crate::constraint::{Conj, Dnf, Formula, Prim};
use crate::engine::{Atom, Clause, Literal, Program, State};
use crate::modes::Mode;
use crate::regex::Regex;
use crate::syntax::{Functor, Hedge, Item, Subst, Symbol, Term, Var};

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind.sigil(), self.name)
    }
}

impl fmt::Display for Functor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Functor::Sym(s) => s.fmt(f),
            Functor::Var(v) => v.fmt(f),
        }
    }
}

fn args(f: &mut fmt::Formatter<'_>, items: &[Item]) -> fmt::Result {
    for (i, it) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        it.fmt(f)?;
    }
    Ok(())
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => v.fmt(f),
            Term::App(fun, h) if h.is_empty() => fun.fmt(f),
            Term::App(fun, h) => {
                write!(f, "{fun}(")?;
                args(f, h.items())?;
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Item::Term(t) => t.fmt(f),
            Item::HVar(v) => v.fmt(f),
        }
    }
}

/// Parenthesized unless the hedge has exactly one element.
impl fmt::Display for Hedge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len() == 1 {
            return self.items()[0].fmt(f);
        }
        f.write_str("(")?;
        args(f, self.items())?;
        f.write_str(")")
    }
}

fn prec(r: &Regex) -> u8 {
    match r {
        Regex::Choice(..) => 0,
        Regex::Concat(..) => 1,
        _ => 2,
    }
}

fn regex_at(f: &mut fmt::Formatter<'_>, r: &Regex, min: u8) -> fmt::Result {
    if prec(r) < min {
        write!(f, "({r})")
    } else {
        r.fmt(f)
    }
}

/// Operators are left-associative; a right operand of the same precedence
/// is parenthesized.
impl fmt::Display for Regex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Regex::Eps => f.write_str("eps"),
            Regex::Sym(s, b) if **b == Regex::Eps => s.fmt(f),
            Regex::Sym(s, b) => write!(f, "{s}({b})"),
            Regex::Concat(a, b) => {
                regex_at(f, a, 1)?;
                f.write_str(" . ")?;
                regex_at(f, b, 2)
            }
            Regex::Choice(a, b) => {
                regex_at(f, a, 0)?;
                f.write_str(" | ")?;
                regex_at(f, b, 1)
            }
            Regex::Star(a) => {
                regex_at(f, a, 2)?;
                f.write_str("*")
            }
        }
    }
}

impl fmt::Display for Prim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prim::Eq(l, r) => write!(f, "{l} = {r}"),
            Prim::FEq(l, r) => write!(f, "{l} = {r}"),
            Prim::In(h, r) => write!(f, "{h} in {r}"),
        }
    }
}

impl fmt::Display for Conj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Conj::False => f.write_str("false"),
            Conj::Lits(l) if l.is_empty() => f.write_str("true"),
            Conj::Lits(l) => {
                for (i, p) in l.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" & ")?;
                    }
                    p.fmt(f)?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Dnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("false");
        }
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" or ")?;
            }
            c.fmt(f)?;
        }
        Ok(())
    }
}

fn formula_at(f: &mut fmt::Formatter<'_>, x: &Formula, min: u8) -> fmt::Result {
    let p = match x {
        Formula::Or(_) => 0,
        Formula::And(_) => 1,
        _ => 2,
    };
    if p < min {
        write!(f, "({x})")
    } else {
        x.fmt(f)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Prim(p) => p.fmt(f),
            Formula::And(xs) | Formula::Or(xs) => {
                let (sep, min) = if matches!(self, Formula::And(_)) { (" & ", 2) } else { (" or ", 1) };
                if xs.is_empty() {
                    return f.write_str(if min == 2 { "true" } else { "false" });
                }
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(sep)?;
                    }
                    formula_at(f, x, min)?;
                }
                Ok(())
            }
            Formula::Not(x) => {
                f.write_str("not ")?;
                formula_at(f, x, 2)
            }
        }
    }
}

impl fmt::Display for Subst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        parts.extend(self.terms.iter().map(|(v, t)| format!("{v} = {t}")));
        parts.extend(self.hedges.iter().map(|(v, h)| format!("{v} = {h}")));
        parts.extend(self.funcs.iter().map(|(v, g)| format!("{v} = {g}")));
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pred)?;
        if self.args.is_empty() {
            return Ok(());
        }
        f.write_str("(")?;
        for (i, t) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            t.fmt(f)?;
        }
        f.write_str(")")
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Atom(a) => a.fmt(f),
            Literal::Prim(p) => p.fmt(f),
        }
    }
}

fn literals(f: &mut fmt::Formatter<'_>, ls: &[Literal]) -> fmt::Result {
    for (i, l) in ls.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        l.fmt(f)?;
    }
    Ok(())
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.head.fmt(f)?;
        if !self.body.is_empty() {
            f.write_str(" :- ")?;
            literals(f, &self.body)?;
        }
        f.write_str(".")
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        if self.goal.is_empty() {
            f.write_str("[]")?;
        } else {
            literals(f, &self.goal)?;
        }
        write!(f, " || {}>", self.store)
    }
}

/// Declarations first, then clauses, one per line.
impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.sig.unordered {
            writeln!(f, ":- unordered {s}.")?;
        }
        for ((p, _), ms) in &self.modes.0 {
            let ms: Vec<String> = ms.iter().map(Mode::to_string).collect();
            writeln!(f, ":- mode {p}({}).", ms.join(", "))?;
        }
        for c in &self.clauses {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}
