//! Concrete syntax.
//!
//! ```text
//! program   ::= { directive | clause | query }
//! directive ::= ":-" ("unordered" | "ordered") ident {"," ident} "."
//!             | ":-" "mode" ident "(" mode {"," mode} ")" "."
//! clause    ::= atom [":-" body] "."
//! query     ::= "?-" body "."
//! body      ::= literal {"," literal}
//! literal   ::= atom | hedge "=" hedge | hedge "in" regex
//! formula   ::= conj {"or" conj}          conj ::= unary {"&" unary}
//! unary     ::= "true" | "false" | "(" formula ")" | hedge "=" hedge | hedge "in" regex
//! hedge     ::= item | "(" [item {"," item}] ")"
//! item      ::= ?x | @X | ^F ["(" args ")"] | ident ["(" args ")"]
//! regex     ::= cat {"|" cat}     cat ::= post {"." post}     post ::= prim {"*"}
//! prim      ::= "eps" | ident ["(" [regex] ")"] | "(" regex ")"
//! ```
//!
//! A `.` ends a clause only when nothing but layout or a comment follows it
//! on the same line; elsewhere inside a regex it is concatenation.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::constraint::{Formula, Prim};
use crate::engine::{Atom, Clause, Literal, Program};
use crate::modes::Mode;
use crate::regex::Regex;
use crate::syntax::{Functor, Hedge, Item, Signature, Symbol, Term, Var, VarKind};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Var(VarKind, String),
    LParen,
    RParen,
    Comma,
    /// `eol` is set when only layout follows on the same line.
    Dot { eol: bool },
    Pipe,
    Star,
    Amp,
    Eq,
    Neck,
    Query,
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let err = |line, col, msg: String| ParseError { line, col, msg };
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let mut adv = 1;
        let tok = match c {
            '\n' => {
                line += 1;
                col = 1;
                i += 1;
                continue;
            }
            c if c.is_whitespace() => None,
            '%' => {
                while i + adv < chars.len() && chars[i + adv] != '\n' {
                    adv += 1;
                }
                None
            }
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '|' => Some(Tok::Pipe),
            '*' => Some(Tok::Star),
            '&' => Some(Tok::Amp),
            '=' => Some(Tok::Eq),
            '.' => {
                let mut j = i + 1;
                while j < chars.len() && chars[j] != '\n' && chars[j].is_whitespace() {
                    j += 1;
                }
                let eol = j >= chars.len() || chars[j] == '\n' || chars[j] == '%';
                Some(Tok::Dot { eol })
            }
            ':' if chars.get(i + 1) == Some(&'-') => {
                adv = 2;
                Some(Tok::Neck)
            }
            '?' if chars.get(i + 1) == Some(&'-') => {
                adv = 2;
                Some(Tok::Query)
            }
            '?' | '@' | '^' => {
                let kind = match c {
                    '?' => VarKind::Term,
                    '@' => VarKind::Hedge,
                    _ => VarKind::Func,
                };
                let mut j = i + 1;
                while j < chars.len() && (ident_char(chars[j]) || chars[j] == '#') {
                    j += 1;
                }
                if j == i + 1 {
                    return Err(err(tl, tc, format!("expected a variable name after `{c}`")));
                }
                adv = j - i;
                Some(Tok::Var(kind, chars[i + 1..j].iter().collect()))
            }
            c if ident_char(c) => {
                let mut j = i;
                while j < chars.len() && ident_char(chars[j]) {
                    j += 1;
                }
                adv = j - i;
                Some(Tok::Ident(chars[i..j].iter().collect()))
            }
            _ => return Err(err(tl, tc, format!("unexpected character `{c}`"))),
        };
        if let Some(tok) = tok {
            out.push(Token { tok, line: tl, col: tc });
        }
        i += adv;
        col += adv;
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

const RESERVED: [&str; 3] = ["in", "or", "eps"];

struct Parser<'s> {
    toks: Vec<Token>,
    pos: usize,
    sig: &'s Signature,
}

type PResult<T> = Result<T, ParseError>;

impl<'s> Parser<'s> {
    fn new(src: &str, sig: &'s Signature) -> PResult<Self> {
        Ok(Parser { toks: lex(src)?, pos: 0, sig })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, msg: impl Into<String>) -> PResult<T> {
        let t = &self.toks[self.pos];
        Err(ParseError { line: t.line, col: t.col, msg: msg.into() })
    }

    fn expect(&mut self, t: Tok, what: &str) -> PResult<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {what}, found {}", describe(self.peek())))
        }
    }

    fn is_ident(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Ident(x) if x == s)
    }

    fn symbol_name(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) if !RESERVED.contains(&s.as_str()) => {
                self.bump();
                Ok(s)
            }
            other => self.error(format!("expected a symbol, found {}", describe(&other))),
        }
    }

    fn args(&mut self) -> PResult<Hedge> {
        self.expect(Tok::LParen, "`(`")?;
        let mut items = Vec::new();
        if *self.peek() != Tok::RParen {
            loop {
                items.push(self.item()?);
                if *self.peek() != Tok::Comma {
                    break;
                }
                self.bump();
            }
        }
        self.expect(Tok::RParen, "`,` or `)`")?;
        Ok(Hedge(items))
    }

    fn item(&mut self) -> PResult<Item> {
        match self.peek().clone() {
            Tok::Var(VarKind::Hedge, n) => {
                self.bump();
                Ok(Item::HVar(Var::hedge(&n)))
            }
            _ => Ok(Item::Term(self.term()?)),
        }
    }

    fn term(&mut self) -> PResult<Term> {
        match self.peek().clone() {
            Tok::Var(VarKind::Term, n) => {
                self.bump();
                Ok(Term::Var(Var::term(&n)))
            }
            Tok::Var(VarKind::Func, n) => {
                self.bump();
                let args = if *self.peek() == Tok::LParen { self.args()? } else { Hedge::empty() };
                Ok(Term::App(Functor::Var(Var::func(&n)), args))
            }
            Tok::Var(VarKind::Hedge, _) => self.error("hedge variable where a term is required"),
            Tok::Ident(_) => {
                let name = self.symbol_name()?;
                let args = if *self.peek() == Tok::LParen { self.args()? } else { Hedge::empty() };
                Ok(Term::App(Functor::Sym(Symbol::new(&name)), args))
            }
            other => self.error(format!("expected a term, found {}", describe(&other))),
        }
    }

    fn hedge(&mut self) -> PResult<Hedge> {
        if *self.peek() == Tok::LParen {
            self.args()
        } else {
            Ok(Hedge(vec![self.item()?]))
        }
    }

    fn regex(&mut self) -> PResult<Regex> {
        let mut r = self.regex_cat()?;
        while *self.peek() == Tok::Pipe {
            self.bump();
            r = Regex::choice(r, self.regex_cat()?);
        }
        Ok(r)
    }

    fn regex_cat(&mut self) -> PResult<Regex> {
        let mut r = self.regex_post()?;
        while *self.peek() == (Tok::Dot { eol: false }) {
            self.bump();
            r = Regex::concat(r, self.regex_post()?);
        }
        Ok(r)
    }

    fn regex_post(&mut self) -> PResult<Regex> {
        let mut r = self.regex_prim()?;
        while *self.peek() == Tok::Star {
            self.bump();
            r = Regex::star(r);
        }
        Ok(r)
    }

    fn regex_prim(&mut self) -> PResult<Regex> {
        match self.peek().clone() {
            Tok::Ident(s) if s == "eps" => {
                self.bump();
                Ok(Regex::Eps)
            }
            Tok::Ident(_) => {
                let f = self.symbol_name()?;
                if *self.peek() != Tok::LParen {
                    return Ok(Regex::atom(&f));
                }
                self.bump();
                if *self.peek() == Tok::RParen {
                    self.bump();
                    return Ok(Regex::atom(&f));
                }
                let body = self.regex()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Regex::sym(&f, body))
            }
            Tok::LParen => {
                self.bump();
                let r = self.regex()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(r)
            }
            other => self.error(format!("expected a regular expression, found {}", describe(&other))),
        }
    }

    /// A primitive constraint once its left hedge is parsed.
    fn prim_rest(&mut self, lhs: Hedge) -> PResult<Prim> {
        if *self.peek() == Tok::Eq {
            self.bump();
            let rhs = self.hedge()?;
            Ok(Prim::eq(lhs, rhs, self.sig))
        } else if self.is_ident("in") {
            self.bump();
            Ok(Prim::In(lhs, self.regex()?))
        } else {
            self.error(format!("expected `=` or `in`, found {}", describe(self.peek())))
        }
    }

    fn literal(&mut self) -> PResult<Literal> {
        let start = self.pos;
        let h = self.hedge()?;
        if *self.peek() == Tok::Eq || self.is_ident("in") {
            return Ok(Literal::Prim(self.prim_rest(h)?));
        }
        match h.items() {
            [Item::Term(Term::App(Functor::Sym(p), args))] => {
                let mut ts = Vec::with_capacity(args.len());
                for it in args.items() {
                    match it {
                        Item::Term(t) => ts.push(t.clone()),
                        Item::HVar(v) => {
                            self.pos = start;
                            return self.error(format!("hedge variable {v} in a predicate argument"));
                        }
                    }
                }
                Ok(Literal::Atom(Atom::new(p.name(), ts)))
            }
            _ => self.error(format!("expected `=` or `in`, found {}", describe(self.peek()))),
        }
    }

    fn body(&mut self) -> PResult<Vec<Literal>> {
        let mut out = vec![self.literal()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            out.push(self.literal()?);
        }
        Ok(out)
    }

    fn formula(&mut self) -> PResult<Formula> {
        let mut xs = vec![self.conj()?];
        while self.is_ident("or") {
            self.bump();
            xs.push(self.conj()?);
        }
        Ok(if xs.len() == 1 { xs.pop().unwrap() } else { Formula::Or(xs) })
    }

    fn conj(&mut self) -> PResult<Formula> {
        let mut xs = vec![self.unary()?];
        while *self.peek() == Tok::Amp {
            self.bump();
            xs.push(self.unary()?);
        }
        Ok(if xs.len() == 1 { xs.pop().unwrap() } else { Formula::And(xs) })
    }

    fn unary(&mut self) -> PResult<Formula> {
        let next_is_op = matches!(self.peek_at(1), Tok::Eq | Tok::LParen) || matches!(self.peek_at(1), Tok::Ident(s) if s == "in");
        if self.is_ident("true") && !next_is_op {
            self.bump();
            return Ok(Formula::True);
        }
        if self.is_ident("false") && !next_is_op {
            self.bump();
            return Ok(Formula::False);
        }
        if *self.peek() == Tok::LParen {
            let save = self.pos;
            if let Ok(h) = self.hedge() {
                if *self.peek() == Tok::Eq || self.is_ident("in") {
                    return Ok(Formula::Prim(self.prim_rest(h)?));
                }
            }
            self.pos = save;
            self.bump();
            let f = self.formula()?;
            self.expect(Tok::RParen, "`)`")?;
            return Ok(f);
        }
        let h = self.hedge()?;
        Ok(Formula::Prim(self.prim_rest(h)?))
    }

    fn end(&mut self) -> PResult<()> {
        match self.peek() {
            Tok::Dot { .. } => {
                self.bump();
                Ok(())
            }
            other => self.error(format!("expected `.`, found {}", describe(other))),
        }
    }

    fn at_eof(&self) -> bool {
        *self.peek() == Tok::Eof
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Var(k, n) => format!("`{}{n}`", k.sigil()),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Comma => "`,`".into(),
        Tok::Dot { .. } => "`.`".into(),
        Tok::Pipe => "`|`".into(),
        Tok::Star => "`*`".into(),
        Tok::Amp => "`&`".into(),
        Tok::Eq => "`=`".into(),
        Tok::Neck => "`:-`".into(),
        Tok::Query => "`?-`".into(),
        Tok::Eof => "end of input".into(),
    }
}

/// A parsed source file: the program and any `?-` queries it contains.
#[derive(Clone, Debug, Default)]
pub struct Source {
    pub program: Program,
    pub queries: Vec<Vec<Literal>>,
}

fn collect_hedge_symbols(h: &Hedge, out: &mut Vec<Symbol>) {
    for it in h.items() {
        if let Item::Term(Term::App(f, args)) = it {
            if let Functor::Sym(s) = f {
                out.push(s.clone());
            }
            collect_hedge_symbols(args, out);
        }
    }
}

fn literal_symbols(l: &Literal, out: &mut Vec<Symbol>) {
    match l {
        Literal::Atom(a) => {
            for t in &a.args {
                collect_hedge_symbols(&Hedge::single(t.clone()), out);
            }
        }
        Literal::Prim(Prim::Eq(a, b)) => {
            collect_hedge_symbols(a, out);
            collect_hedge_symbols(b, out);
        }
        Literal::Prim(Prim::FEq(f, g)) => out.extend([f, g].into_iter().filter_map(|x| x.as_sym().cloned())),
        Literal::Prim(Prim::In(h, r)) => {
            collect_hedge_symbols(h, out);
            r.symbols(out);
        }
    }
}

/// Parses a program. Declarations are collected in a first pass so that
/// clauses are normalized against the final signature.
pub fn parse_program(src: &str) -> Result<Source, ParseError> {
    parse_program_with(src, &Signature::new())
}

/// Parses a program on top of previously declared symbols.
pub fn parse_program_with(src: &str, base: &Signature) -> Result<Source, ParseError> {
    let mut sig = base.clone();
    let mut modes = crate::modes::ModeTable::new();
    {
        let empty = Signature::new();
        let mut p = Parser::new(src, &empty)?;
        let mut declared: BTreeMap<Symbol, bool> = BTreeMap::new();
        for s in &sig.unordered {
            declared.insert(s.clone(), true);
        }
        while !p.at_eof() {
            if *p.peek() == Tok::Neck {
                p.bump();
                let kw = p.symbol_name()?;
                match kw.as_str() {
                    "unordered" | "ordered" => {
                        let unordered = kw == "unordered";
                        loop {
                            let f = Symbol::new(&p.symbol_name()?);
                            if let Some(prev) = declared.insert(f.clone(), unordered) {
                                if prev != unordered {
                                    p.pos -= 1;
                                    return p.error(format!("symbol `{f}` declared both ordered and unordered"));
                                }
                            }
                            if *p.peek() != Tok::Comma {
                                break;
                            }
                            p.bump();
                        }
                    }
                    "mode" => {
                        let name = p.symbol_name()?;
                        p.expect(Tok::LParen, "`(`")?;
                        let mut ms = Vec::new();
                        loop {
                            match p.symbol_name()?.as_str() {
                                "i" | "in" | "input" => ms.push(Mode::In),
                                "o" | "out" | "output" => ms.push(Mode::Out),
                                other => {
                                    p.pos -= 1;
                                    return p.error(format!("unknown mode `{other}`; use `i` or `o`"));
                                }
                            }
                            if *p.peek() != Tok::Comma {
                                break;
                            }
                            p.bump();
                        }
                        p.expect(Tok::RParen, "`)`")?;
                        modes.declare(&name, ms);
                    }
                    other => {
                        p.pos -= 1;
                        return p.error(format!("unknown directive `{other}`"));
                    }
                }
                p.end()?;
            } else {
                // Skip to the end of this clause or query.
                while !matches!(p.peek(), Tok::Dot { eol: true } | Tok::Eof) {
                    p.bump();
                }
                p.end()?;
            }
        }
        for (f, unordered) in declared {
            if unordered {
                sig.ordered.remove(&f);
                sig.unordered.insert(f);
            } else {
                sig.ordered.insert(f);
            }
        }
    }

    let mut p = Parser::new(src, &sig)?;
    let mut clauses = Vec::new();
    let mut queries = Vec::new();
    let mut symbols = Vec::new();
    let mut preds: Vec<(Arc<str>, usize, usize, usize)> = Vec::new();
    while !p.at_eof() {
        match p.peek() {
            Tok::Neck => {
                while !matches!(p.peek(), Tok::Dot { .. } | Tok::Eof) {
                    p.bump();
                }
                p.end()?;
            }
            Tok::Query => {
                p.bump();
                let body = p.body()?;
                p.end()?;
                queries.push(body);
            }
            _ => {
                let (line, col) = (p.toks[p.pos].line, p.toks[p.pos].col);
                let head = match p.literal()? {
                    Literal::Atom(a) => a,
                    Literal::Prim(_) => {
                        return Err(ParseError { line, col, msg: "a clause head must be an atom".into() });
                    }
                };
                let body = if *p.peek() == Tok::Neck {
                    p.bump();
                    p.body()?
                } else {
                    Vec::new()
                };
                p.end()?;
                preds.push((head.pred.clone(), head.args.len(), line, col));
                let c = Clause { head, body };
                literal_symbols(&Literal::Atom(c.head.clone()), &mut symbols);
                for l in &c.body {
                    literal_symbols(l, &mut symbols);
                    if let Literal::Atom(a) = l {
                        preds.push((a.pred.clone(), a.args.len(), line, col));
                    }
                }
                clauses.push(c);
            }
        }
    }
    for q in &queries {
        for l in q {
            literal_symbols(l, &mut symbols);
        }
    }
    for (name, arity, line, col) in &preds {
        let moded: Vec<usize> = modes.0.keys().filter(|(n, _)| n == name).map(|(_, a)| *a).collect();
        if !moded.is_empty() && !moded.contains(arity) {
            return Err(ParseError {
                line: *line,
                col: *col,
                msg: format!("{name} used with {arity} arguments but its mode declares {}", moded[0]),
            });
        }
        sig.predicates.insert((name.clone(), *arity));
    }
    for s in symbols {
        sig.ensure(&s);
    }
    Ok(Source { program: Program { sig, clauses, modes }, queries })
}

/// Parses a goal: literals separated by `,`, with optional `?-` and final `.`.
pub fn parse_query(src: &str, sig: &Signature) -> Result<Vec<Literal>, ParseError> {
    let mut p = Parser::new(src, sig)?;
    if *p.peek() == Tok::Query {
        p.bump();
    }
    let body = p.body()?;
    if matches!(p.peek(), Tok::Dot { .. }) {
        p.bump();
    }
    if !p.at_eof() {
        return p.error(format!("unexpected {} after the query", describe(p.peek())));
    }
    Ok(body)
}

/// Parses a constraint formula built with `&`, `or`, `true`, `false`.
pub fn parse_constraint(src: &str, sig: &Signature) -> Result<Formula, ParseError> {
    let mut p = Parser::new(src, sig)?;
    let f = p.formula()?;
    if matches!(p.peek(), Tok::Dot { eol: true }) {
        p.bump();
    }
    if !p.at_eof() {
        return p.error(format!("unexpected {} after the constraint", describe(p.peek())));
    }
    Ok(f)
}

pub fn parse_hedge(src: &str, sig: &Signature) -> Result<Hedge, ParseError> {
    let mut p = Parser::new(src, sig)?;
    let h = p.hedge()?;
    if !p.at_eof() {
        return p.error(format!("unexpected {}", describe(p.peek())));
    }
    Ok(h)
}

pub fn parse_regex(src: &str) -> Result<Regex, ParseError> {
    let sig = Signature::new();
    let mut p = Parser::new(src, &sig)?;
    let r = p.regex()?;
    if !p.at_eof() {
        return p.error(format!("unexpected {}", describe(p.peek())));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_clause() {
        let src = parse_program("rewrite(?x, ?y) :- rule(?x, ?y).\n").unwrap();
        let c = &src.program.clauses[0];
        assert_eq!(c.head, Atom::new("rewrite", vec![Term::var("x"), Term::var("y")]));
        assert_eq!(c.body, vec![Literal::Atom(Atom::new("rule", vec![Term::var("x"), Term::var("y")]))]);
    }

    #[test]
    fn membership_query_with_spaced_concat() {
        let src = parse_program("?- @xs in f(a*) . b*.\n").unwrap();
        let expected = Regex::concat(Regex::sym("f", Regex::star(Regex::atom("a"))), Regex::star(Regex::atom("b")));
        assert_eq!(src.queries, vec![vec![Literal::Prim(Prim::In(Hedge::hvar(Var::hedge("xs")), expected))]]);
    }

    #[test]
    fn regex_operators_associate_left() {
        let r = parse_regex("a | b . c*").unwrap();
        let c = Regex::atom("c");
        assert_eq!(r, Regex::choice(Regex::atom("a"), Regex::concat(Regex::atom("b"), Regex::star(c))));
        assert_eq!(parse_regex("f()").unwrap(), Regex::atom("f"));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_program("p(?x) :- q(?x)\n").unwrap_err();
        assert_eq!((e.line, e.col), (2, 1));
        let e = parse_program("p(@X).\n").unwrap_err();
        assert_eq!(e.line, 1);
        let e = parse_program(":- unordered f.\n:- ordered f.\n").unwrap_err();
        assert_eq!((e.line, e.col), (2, 12));
        let e = parse_program(":- mode p(i).\np(?x, ?y).\n").unwrap_err();
        assert_eq!(e.line, 2);
    }

    #[test]
    fn formulas() {
        let sig = Signature::new();
        let f = parse_constraint("(?x = a or ?x = b) & (@X, a) = (b, a)", &sig).unwrap();
        match f {
            Formula::And(xs) => {
                assert!(matches!(xs[0], Formula::Or(_)));
                assert!(matches!(xs[1], Formula::Prim(Prim::Eq(..))));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(parse_constraint("true", &sig).unwrap(), Formula::True);
    }

    #[test]
    fn functor_equations_normalize() {
        let sig = Signature::new();
        let f = parse_constraint("^F = g", &sig).unwrap();
        assert_eq!(f, Formula::Prim(Prim::FEq(Functor::Var(Var::func("F")), Functor::sym("g"))));
    }
}
