//! Lexer and recursive-descent parser for the engine's surface syntax:
//! formulas, terms, index-set expressions, piecewise sequence literals,
//! real-function expressions and session commands.
//!
//! Grammar sketch:
//!
//! ```text
//! formula := quant | impl
//! quant   := ("exists" | "forall") ident [":=" term] formula
//! impl    := disj ["->" impl]
//! disj    := conj {"\/" conj}
//! conj    := lit {"/\" lit}
//! lit     := "~" lit | atom | "(" formula ")"
//! atom    := term rel term | term "~~" term | ident "(" term ")"
//!          | "st" "(" term "," term ")"
//! rel     := "=" | "#" | "<" | "<=" | ">" | ">="
//! term    := factor {("+" | "-") factor}
//! factor  := unary {("*" | "/") unary}
//! unary   := "-" unary | primary
//! primary := rational | "delta" "(" srational ")" | ident
//!          | "abs" "(" term ")" | "min" "(" term "," term ")"
//!          | "max" "(" term "," term ")" | "seq" "{" pieces "}"
//!          | "(" term ")"
//! set     := spart {("&" | "|" | "\") spart}      (left-assoc, one level)
//! spart   := "res" "(" nat "," nat ")" | "fin" "{" [nat {"," nat}] "}"
//!          | "~" spart | "(" set ")"
//! seqexpr := rational function of `n` with + - * / ^
//! ```
//!
//! Numeric literals `p/q` fold to rationals at parse time.

use std::collections::BTreeMap;


use crate::calculus::{Guard, RealFunc};
use crate::error::{EngineError, Result};
use crate::formula::{Formula, Term};
use crate::index_set::IndexSet;
use crate::ratfunc::RationalFunc;
use crate::rational::{parse_rational, Q};
use crate::seq::RelOp;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Nat(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Arrow,     // ->
    Assign,    // :=
    Models,    // |=
    At,        // @
    Plus,
    Minus,
    Star,
    Slash,
    Backslash, // \
    Caret,     // ^
    Tilde,     // ~
    TildeTilde, // ~~
    Amp,       // &
    Pipe,      // |
    Eq,
    Hash, // #
    Lt,
    Le,
    Gt,
    Ge,
    Wedge, // /\
    Vee,   // \/
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Nat(s) => format!("number `{s}`"),
            other => format!("`{}`", other.text()),
        }
    }

    fn text(&self) -> &'static str {
        match self {
            Tok::Ident(_) | Tok::Nat(_) => "",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Comma => ",",
            Tok::Arrow => "->",
            Tok::Assign => ":=",
            Tok::Models => "|=",
            Tok::At => "@",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::Backslash => "\\",
            Tok::Caret => "^",
            Tok::Tilde => "~",
            Tok::TildeTilde => "~~",
            Tok::Amp => "&",
            Tok::Pipe => "|",
            Tok::Eq => "=",
            Tok::Hash => "#",
            Tok::Lt => "<",
            Tok::Le => "<=",
            Tok::Gt => ">",
            Tok::Ge => ">=",
            Tok::Wedge => "/\\",
            Tok::Vee => "\\/",
        }
    }
}

fn lex(input: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = input.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                i += 1;
            }
            // comment lines never reach the lexer; `#` is disequality
            '#' => {
                toks.push((Tok::Hash, start));
                i += 1;
            }
            '(' => {
                toks.push((Tok::LParen, start));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, start));
                i += 1;
            }
            '{' => {
                toks.push((Tok::LBrace, start));
                i += 1;
            }
            '}' => {
                toks.push((Tok::RBrace, start));
                i += 1;
            }
            '[' => {
                toks.push((Tok::LBracket, start));
                i += 1;
            }
            ']' => {
                toks.push((Tok::RBracket, start));
                i += 1;
            }
            ',' => {
                toks.push((Tok::Comma, start));
                i += 1;
            }
            '@' => {
                toks.push((Tok::At, start));
                i += 1;
            }
            '+' => {
                toks.push((Tok::Plus, start));
                i += 1;
            }
            '*' => {
                toks.push((Tok::Star, start));
                i += 1;
            }
            '^' => {
                toks.push((Tok::Caret, start));
                i += 1;
            }
            '&' => {
                toks.push((Tok::Amp, start));
                i += 1;
            }
            '=' => {
                toks.push((Tok::Eq, start));
                i += 1;
            }
            '-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    toks.push((Tok::Arrow, start));
                    i += 2;
                } else {
                    toks.push((Tok::Minus, start));
                    i += 1;
                }
            }
            ':' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    toks.push((Tok::Assign, start));
                    i += 2;
                } else {
                    return Err(EngineError::Syntax {
                        pos: start,
                        msg: "lone `:`".into(),
                    });
                }
            }
            '|' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    toks.push((Tok::Models, start));
                    i += 2;
                } else {
                    toks.push((Tok::Pipe, start));
                    i += 1;
                }
            }
            '/' => {
                if bytes.get(i + 1) == Some(&b'\\') {
                    toks.push((Tok::Wedge, start));
                    i += 2;
                } else {
                    toks.push((Tok::Slash, start));
                    i += 1;
                }
            }
            '\\' => {
                if bytes.get(i + 1) == Some(&b'/') {
                    toks.push((Tok::Vee, start));
                    i += 2;
                } else {
                    toks.push((Tok::Backslash, start));
                    i += 1;
                }
            }
            '~' => {
                if bytes.get(i + 1) == Some(&b'~') {
                    toks.push((Tok::TildeTilde, start));
                    i += 2;
                } else {
                    toks.push((Tok::Tilde, start));
                    i += 1;
                }
            }
            '<' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    toks.push((Tok::Le, start));
                    i += 2;
                } else {
                    toks.push((Tok::Lt, start));
                    i += 1;
                }
            }
            '>' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    toks.push((Tok::Ge, start));
                    i += 2;
                } else {
                    toks.push((Tok::Gt, start));
                    i += 1;
                }
            }
            '0'..='9' => {
                let mut j = i;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                toks.push((Tok::Nat(input[i..j].to_string()), start));
                i = j;
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let mut j = i;
                while j < bytes.len()
                    && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_')
                {
                    j += 1;
                }
                toks.push((Tok::Ident(input[i..j].to_string()), start));
                i = j;
            }
            other => {
                return Err(EngineError::Syntax {
                    pos: start,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    input_len: usize,
}

impl Parser {
    fn new(input: &str) -> Result<Parser> {
        Ok(Parser {
            toks: lex(input)?,
            pos: 0,
            input_len: input.len(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|(_, p)| *p)
            .unwrap_or(self.input_len)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(EngineError::Syntax {
            pos: self.here(),
            msg: msg.into(),
        })
    }

    fn expect(&mut self, want: Tok) -> Result<()> {
        match self.peek() {
            Some(t) if *t == want => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => {
                let got = t.describe();
                self.fail(format!("expected {}, found {}", want.describe(), got))
            }
            None => self.fail(format!("expected {}, found end of input", want.describe())),
        }
    }

    fn eat(&mut self, want: &Tok) -> bool {
        if self.peek() == Some(want) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            other => {
                let got = other
                    .map(|t| t.describe())
                    .unwrap_or_else(|| "end of input".into());
                self.fail(format!("expected identifier, found {got}"))
            }
        }
    }

    fn nat(&mut self) -> Result<u64> {
        match self.peek() {
            Some(Tok::Nat(s)) => {
                let v = s.parse::<u64>().map_err(|_| EngineError::Syntax {
                    pos: self.here(),
                    msg: format!("number `{s}` is too large"),
                })?;
                self.pos += 1;
                Ok(v)
            }
            other => {
                let got = other
                    .map(|t| t.describe())
                    .unwrap_or_else(|| "end of input".into());
                self.fail(format!("expected a natural number, found {got}"))
            }
        }
    }

    /// Optionally signed rational literal: `p`, `-p`, `p/q`, `-p/q`.
    fn srational(&mut self) -> Result<Q> {
        let neg = self.eat(&Tok::Minus);
        let p = self.nat()?;
        let mut text = p.to_string();
        if self.peek() == Some(&Tok::Slash) {
            if let Some(Tok::Nat(_)) = self.peek2() {
                self.bump();
                let q = self.nat()?;
                text = format!("{p}/{q}");
            }
        }
        let mut v = parse_rational(&text)?;
        if neg {
            v = -v;
        }
        Ok(v)
    }

    // ---- index-set expressions ----

    fn set_expr(&mut self) -> Result<IndexSet> {
        let mut acc = self.set_part()?;
        loop {
            if self.eat(&Tok::Amp) {
                acc = acc.intersect(&self.set_part()?)?;
            } else if self.eat(&Tok::Pipe) {
                acc = acc.union(&self.set_part()?)?;
            } else if self.eat(&Tok::Backslash) {
                acc = acc.difference(&self.set_part()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn set_part(&mut self) -> Result<IndexSet> {
        if self.eat(&Tok::Tilde) {
            return Ok(self.set_part()?.complement());
        }
        if self.eat(&Tok::LParen) {
            let s = self.set_expr()?;
            self.expect(Tok::RParen)?;
            return Ok(s);
        }
        match self.peek() {
            Some(Tok::Ident(name)) if name == "res" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let r = self.nat()?;
                self.expect(Tok::Comma)?;
                let m = self.nat()?;
                self.expect(Tok::RParen)?;
                IndexSet::residue(r, m)
            }
            Some(Tok::Ident(name)) if name == "fin" => {
                self.bump();
                self.expect(Tok::LBrace)?;
                let mut items = Vec::new();
                if self.peek() != Some(&Tok::RBrace) {
                    items.push(self.nat()?);
                    while self.eat(&Tok::Comma) {
                        items.push(self.nat()?);
                    }
                }
                self.expect(Tok::RBrace)?;
                Ok(IndexSet::finite(items))
            }
            _ => self.fail("expected a set expression (`res(r,m)`, `fin{..}`, `~`, `(`)"),
        }
    }

    // ---- rational-function expressions in `n` ----

    fn rf_expr(&mut self) -> Result<RationalFunc> {
        let mut acc = self.rf_factor()?;
        loop {
            if self.eat(&Tok::Plus) {
                acc = acc.add(&self.rf_factor()?);
            } else if self.eat(&Tok::Minus) {
                acc = acc.sub(&self.rf_factor()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn rf_factor(&mut self) -> Result<RationalFunc> {
        let mut acc = self.rf_unary()?;
        loop {
            if self.eat(&Tok::Star) {
                acc = acc.mul(&self.rf_unary()?);
            } else if self.eat(&Tok::Slash) {
                let d = self.rf_unary()?;
                if d.is_zero() {
                    return self.fail("division by the zero expression");
                }
                acc = acc.div(&d)?;
            } else {
                return Ok(acc);
            }
        }
    }

    // unary minus binds looser than `^`, so -n^2 is -(n^2)
    fn rf_unary(&mut self) -> Result<RationalFunc> {
        if self.eat(&Tok::Minus) {
            return Ok(self.rf_unary()?.neg());
        }
        self.rf_power()
    }

    fn rf_power(&mut self) -> Result<RationalFunc> {
        let base = self.rf_primary()?;
        if self.eat(&Tok::Caret) {
            let e = self.nat()?;
            let mut acc = RationalFunc::constant(Q::from_integer(1.into()));
            for _ in 0..e {
                acc = acc.mul(&base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn rf_primary(&mut self) -> Result<RationalFunc> {
        match self.peek() {
            Some(Tok::Nat(_)) => {
                let p = self.nat()?;
                Ok(RationalFunc::constant(Q::from_integer(p.into())))
            }
            Some(Tok::Ident(name)) if name == "n" => {
                self.bump();
                Ok(RationalFunc::var())
            }
            Some(Tok::LParen) => {
                self.bump();
                let e = self.rf_expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            _ => self.fail("expected a sequence expression over `n`"),
        }
    }

    fn seq_literal(&mut self) -> Result<Term> {
        // caller consumed `seq`
        self.expect(Tok::LBrace)?;
        let mut pieces = Vec::new();
        loop {
            let cell = self.set_expr()?;
            self.expect(Tok::Arrow)?;
            let expr = self.rf_expr()?;
            pieces.push((cell, expr));
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(Tok::RBrace)?;
        Ok(Term::SeqLit(pieces))
    }

    // ---- terms ----

    fn term(&mut self) -> Result<Term> {
        let mut acc = self.term_factor()?;
        loop {
            if self.eat(&Tok::Plus) {
                acc = Term::Add(Box::new(acc), Box::new(self.term_factor()?));
            } else if self.eat(&Tok::Minus) {
                acc = Term::Sub(Box::new(acc), Box::new(self.term_factor()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term_factor(&mut self) -> Result<Term> {
        let mut acc = self.term_unary()?;
        loop {
            if self.eat(&Tok::Star) {
                acc = Term::Mul(Box::new(acc), Box::new(self.term_unary()?));
            } else if self.eat(&Tok::Slash) {
                acc = Term::Div(Box::new(acc), Box::new(self.term_unary()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term_unary(&mut self) -> Result<Term> {
        if self.eat(&Tok::Minus) {
            let inner = self.term_unary()?;
            return Ok(match inner {
                Term::Const(q) => Term::Const(-q),
                other => Term::Neg(Box::new(other)),
            });
        }
        self.term_primary()
    }

    fn term_primary(&mut self) -> Result<Term> {
        match self.peek().cloned() {
            Some(Tok::Nat(_)) => {
                let p = self.nat()?;
                // fold `p/q` numeric literals into one rational
                if self.peek() == Some(&Tok::Slash) {
                    if let Some(Tok::Nat(_)) = self.peek2() {
                        self.bump();
                        let q = self.nat()?;
                        if q == 0 {
                            return self.fail("zero denominator in rational literal");
                        }
                        return Ok(Term::Const(Q::new(
                            (p as i64).into(),
                            (q as i64).into(),
                        )));
                    }
                }
                Ok(Term::Const(Q::from_integer((p as i64).into())))
            }
            Some(Tok::LParen) => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Some(Tok::Ident(name)) => match name.as_str() {
                "delta" => {
                    self.bump();
                    self.expect(Tok::LParen)?;
                    let q = self.srational()?;
                    self.expect(Tok::RParen)?;
                    Ok(Term::Const(q))
                }
                "abs" => {
                    self.bump();
                    self.expect(Tok::LParen)?;
                    let t = self.term()?;
                    self.expect(Tok::RParen)?;
                    Ok(Term::Abs(Box::new(t)))
                }
                "min" | "max" => {
                    self.bump();
                    self.expect(Tok::LParen)?;
                    let a = self.term()?;
                    self.expect(Tok::Comma)?;
                    let b = self.term()?;
                    self.expect(Tok::RParen)?;
                    Ok(if name == "min" {
                        Term::Min(Box::new(a), Box::new(b))
                    } else {
                        Term::Max(Box::new(a), Box::new(b))
                    })
                }
                "seq" => {
                    self.bump();
                    self.seq_literal()
                }
                _ => {
                    self.bump();
                    Ok(Term::Var(name))
                }
            },
            _ => self.fail("expected a term"),
        }
    }

    // ---- formulas ----

    fn rel_op(&mut self) -> Option<RelOp> {
        let op = match self.peek()? {
            Tok::Eq => RelOp::Eq,
            Tok::Hash => RelOp::Ne,
            Tok::Lt => RelOp::Lt,
            Tok::Le => RelOp::Le,
            Tok::Gt => RelOp::Gt,
            Tok::Ge => RelOp::Ge,
            _ => return None,
        };
        self.pos += 1;
        Some(op)
    }

    fn formula(&mut self) -> Result<Formula> {
        if let Some(Tok::Ident(kw)) = self.peek() {
            if kw == "exists" || kw == "forall" {
                let is_exists = kw == "exists";
                self.bump();
                let var = self.ident()?;
                let witness = if self.eat(&Tok::Assign) {
                    Some(self.term()?)
                } else {
                    None
                };
                let body = self.formula()?;
                return Ok(if is_exists {
                    Formula::Exists(var, witness, Box::new(body))
                } else {
                    Formula::Forall(var, witness, Box::new(body))
                });
            }
        }
        self.implication()
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.implication()?;
            return Ok(lhs.implies(rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut acc = self.conjunction()?;
        while self.eat(&Tok::Vee) {
            acc = acc.or(self.conjunction()?);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut acc = self.literal()?;
        while self.eat(&Tok::Wedge) {
            acc = acc.and(self.literal()?);
        }
        Ok(acc)
    }

    fn literal(&mut self) -> Result<Formula> {
        if self.eat(&Tok::Tilde) {
            return Ok(self.literal()?.not());
        }
        // `st(...)`, `S(...)` and named predicate applications
        if let (Some(Tok::Ident(name)), Some(Tok::LParen)) = (self.peek(), self.peek2()) {
            let name = name.clone();
            if name == "st" {
                self.bump();
                self.bump();
                let a = self.term()?;
                self.expect(Tok::Comma)?;
                let b = self.term()?;
                self.expect(Tok::RParen)?;
                return Ok(Formula::StandardPart(a, b));
            }
            if !matches!(name.as_str(), "abs" | "min" | "max" | "delta" | "seq") {
                self.bump();
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                return Ok(if name == "S" {
                    Formula::Standard(t)
                } else {
                    Formula::Pred(name, t)
                });
            }
        }
        // parenthesized formula versus parenthesized term: try the atom
        // parse first and fall back
        if self.peek() == Some(&Tok::LParen) {
            let save = self.pos;
            if let Ok(atom) = self.atom() {
                return Ok(atom);
            }
            self.pos = save;
            self.bump();
            let phi = self.formula()?;
            self.expect(Tok::RParen)?;
            return Ok(phi);
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula> {
        let lhs = self.term()?;
        if self.eat(&Tok::TildeTilde) {
            let rhs = self.term()?;
            return Ok(Formula::Close(lhs, rhs));
        }
        match self.rel_op() {
            Some(op) => {
                let rhs = self.term()?;
                Ok(Formula::Rel(lhs, op, rhs))
            }
            None => self.fail("expected a relation symbol after the term"),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn expect_end(&self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(EngineError::Syntax {
                pos: self.here(),
                msg: format!(
                    "unexpected trailing {}",
                    self.peek().map(|t| t.describe()).unwrap_or_default()
                ),
            })
        }
    }

    // ---- filter expressions ----

    fn filter_expr(&mut self) -> Result<FilterExpr> {
        let base = self.ident()?;
        let base = if base == "F0" { None } else { Some(base) };
        let mut extensions = Vec::new();
        while self.eat(&Tok::Plus) {
            extensions.push(self.set_expr()?);
        }
        Ok(FilterExpr { base, extensions })
    }

    // ---- real-function expressions in `x` ----

    fn real_func(&mut self) -> Result<RealFunc> {
        let mut acc = self.real_factor()?;
        loop {
            if self.eat(&Tok::Plus) {
                acc = RealFunc::Add(Box::new(acc), Box::new(self.real_factor()?));
            } else if self.eat(&Tok::Minus) {
                acc = RealFunc::Sub(Box::new(acc), Box::new(self.real_factor()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn real_factor(&mut self) -> Result<RealFunc> {
        let mut acc = self.real_unary()?;
        loop {
            if self.eat(&Tok::Star) {
                acc = RealFunc::Mul(Box::new(acc), Box::new(self.real_unary()?));
            } else if self.eat(&Tok::Slash) {
                acc = RealFunc::Div(Box::new(acc), Box::new(self.real_unary()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn real_unary(&mut self) -> Result<RealFunc> {
        if self.eat(&Tok::Minus) {
            return Ok(RealFunc::Neg(Box::new(self.real_unary()?)));
        }
        match self.peek().cloned() {
            Some(Tok::Nat(_)) => {
                let p = self.nat()?;
                if self.peek() == Some(&Tok::Slash) {
                    if let Some(Tok::Nat(_)) = self.peek2() {
                        self.bump();
                        let q = self.nat()?;
                        if q == 0 {
                            return self.fail("zero denominator in rational literal");
                        }
                        return Ok(RealFunc::Const(Q::new(
                            (p as i64).into(),
                            (q as i64).into(),
                        )));
                    }
                }
                Ok(RealFunc::Const(Q::from_integer((p as i64).into())))
            }
            Some(Tok::LParen) => {
                self.bump();
                let f = self.real_func()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Some(Tok::Ident(name)) => match name.as_str() {
                "x" => {
                    self.bump();
                    Ok(RealFunc::Var)
                }
                "abs" => {
                    self.bump();
                    self.expect(Tok::LParen)?;
                    let f = self.real_func()?;
                    self.expect(Tok::RParen)?;
                    Ok(RealFunc::Abs(Box::new(f)))
                }
                "min" | "max" => {
                    self.bump();
                    self.expect(Tok::LParen)?;
                    let a = self.real_func()?;
                    self.expect(Tok::Comma)?;
                    let b = self.real_func()?;
                    self.expect(Tok::RParen)?;
                    Ok(if name == "min" {
                        RealFunc::Min(Box::new(a), Box::new(b))
                    } else {
                        RealFunc::Max(Box::new(a), Box::new(b))
                    })
                }
                "fun" => {
                    self.bump();
                    self.expect(Tok::LBrace)?;
                    let mut pieces = Vec::new();
                    loop {
                        let guard = self.guard()?;
                        self.expect(Tok::Arrow)?;
                        let body = self.real_func()?;
                        pieces.push((guard, body));
                        if !self.eat(&Tok::Comma) {
                            break;
                        }
                    }
                    self.expect(Tok::RBrace)?;
                    Ok(RealFunc::Piecewise(pieces))
                }
                _ => self.fail(format!(
                    "unknown name `{name}` in a function of `x`"
                )),
            },
            _ => self.fail("expected a function expression over `x`"),
        }
    }

    fn guard(&mut self) -> Result<Guard> {
        if let Some(Tok::Ident(name)) = self.peek() {
            if name == "else" {
                self.bump();
                return Ok(Guard::always());
            }
            if name == "x" {
                // x rel q
                self.bump();
                let op = self
                    .rel_op()
                    .ok_or_else(|| EngineError::Syntax {
                        pos: self.here(),
                        msg: "expected a comparison after `x`".into(),
                    })?;
                let q = self.srational()?;
                return guard_from(None, Some((op, q)), self);
            }
        }
        // q rel x [rel q]
        let lo = self.srational()?;
        let op1 = self
            .rel_op()
            .ok_or_else(|| EngineError::Syntax {
                pos: self.here(),
                msg: "expected a comparison in the guard".into(),
            })?;
        let x = self.ident()?;
        if x != "x" {
            return self.fail("guards compare against `x`");
        }
        if let Some(op2) = self.rel_op() {
            let hi = self.srational()?;
            return guard_from(Some((op1, lo)), Some((op2, hi)), self);
        }
        guard_from(Some((op1, lo)), None, self)
    }
}

fn guard_from(
    left: Option<(RelOp, Q)>,
    right: Option<(RelOp, Q)>,
    p: &Parser,
) -> Result<Guard> {
    // left is `q OP x`, right is `x OP q`
    let mut guard = Guard::always();
    let set = |op: RelOp, q: Q, from_left: bool, guard: &mut Guard| -> Result<()> {
        let op = if from_left {
            // q < x means x > q
            match op {
                RelOp::Lt => RelOp::Gt,
                RelOp::Le => RelOp::Ge,
                RelOp::Gt => RelOp::Lt,
                RelOp::Ge => RelOp::Le,
                other => other,
            }
        } else {
            op
        };
        match op {
            RelOp::Lt => guard.hi = Some((q, true)),
            RelOp::Le => guard.hi = Some((q, false)),
            RelOp::Gt => guard.lo = Some((q, true)),
            RelOp::Ge => guard.lo = Some((q, false)),
            RelOp::Eq => {
                guard.lo = Some((q.clone(), false));
                guard.hi = Some((q, false));
            }
            RelOp::Ne => {
                return Err(EngineError::Syntax {
                    pos: p.here(),
                    msg: "`#` is not allowed in a guard".into(),
                })
            }
        }
        Ok(())
    };
    if let Some((op, q)) = left {
        set(op, q, true, &mut guard)?;
    }
    if let Some((op, q)) = right {
        set(op, q, false, &mut guard)?;
    }
    Ok(guard)
}

/// A filter expression: an optional named base (default the cofinite
/// filter) plus extension sets.
#[derive(Clone, Debug, PartialEq)]
pub struct FilterExpr {
    pub base: Option<String>,
    pub extensions: Vec<IndexSet>,
}

/// Oracle construction syntax.
#[derive(Clone, Debug, PartialEq)]
pub enum UltraSpec {
    Zero,
    Padic { base: u64, digits: Vec<u64> },
}

/// One session command.
#[derive(Clone, Debug, PartialEq)]
pub enum Command {
    Let { name: String, term: Term },
    FilterDef { name: String, expr: FilterExpr },
    Force { filter: FilterExpr, formula: Formula },
    TruthSet { formula: Formula },
    St { term: Term, filter: FilterExpr },
    Halo { a: Term, b: Term, filter: FilterExpr },
    Cont { func: RealFunc, at: Q },
    Internal { name: String, var: String, template: Formula },
    Saturate { chain: Vec<String>, filter: FilterExpr, depth: usize },
    Ultra { name: String, spec: UltraSpec },
    Quotient { name: String, formula: Formula },
    Check { formula: Formula },
    Set { option: String, value: String },
}

pub fn parse_formula(input: &str) -> Result<Formula> {
    let mut p = Parser::new(input)?;
    let phi = p.formula()?;
    p.expect_end()?;
    Ok(phi)
}

pub fn parse_term(input: &str) -> Result<Term> {
    let mut p = Parser::new(input)?;
    let t = p.term()?;
    p.expect_end()?;
    Ok(t)
}

pub fn parse_set(input: &str) -> Result<IndexSet> {
    let mut p = Parser::new(input)?;
    let s = p.set_expr()?;
    p.expect_end()?;
    Ok(s)
}

pub fn parse_seq_expr(input: &str) -> Result<RationalFunc> {
    let mut p = Parser::new(input)?;
    let e = p.rf_expr()?;
    p.expect_end()?;
    Ok(e)
}

pub fn parse_real_func(input: &str) -> Result<RealFunc> {
    let mut p = Parser::new(input)?;
    let f = p.real_func()?;
    p.expect_end()?;
    Ok(f)
}

/// Parse one session command line (comments and blank lines are the
/// session's business).
pub fn parse_command(input: &str) -> Result<Command> {
    let mut p = Parser::new(input)?;
    let head = p.ident()?;
    let cmd = match head.as_str() {
        "let" => {
            let name = p.ident()?;
            p.expect(Tok::Eq)?;
            let term = p.term()?;
            Command::Let { name, term }
        }
        "filter" => {
            let name = p.ident()?;
            p.expect(Tok::Eq)?;
            let expr = p.filter_expr()?;
            Command::FilterDef { name, expr }
        }
        "force" => {
            let filter = p.filter_expr()?;
            p.expect(Tok::Models)?;
            let formula = p.formula()?;
            Command::Force { filter, formula }
        }
        "truthset" => Command::TruthSet {
            formula: p.formula()?,
        },
        "st" => {
            let term = p.term()?;
            p.expect(Tok::At)?;
            let filter = p.filter_expr()?;
            Command::St { term, filter }
        }
        "halo" => {
            let a = p.term()?;
            let b = p.term()?;
            p.expect(Tok::At)?;
            let filter = p.filter_expr()?;
            Command::Halo { a, b, filter }
        }
        "cont" => {
            let func = p.real_func()?;
            p.expect(Tok::At)?;
            let at = p.srational()?;
            Command::Cont { func, at }
        }
        "internal" => {
            let name = p.ident()?;
            p.expect(Tok::Assign)?;
            p.expect(Tok::LBrace)?;
            let var = p.ident()?;
            p.expect(Tok::Pipe)?;
            let template = p.formula()?;
            p.expect(Tok::RBrace)?;
            Command::Internal {
                name,
                var,
                template,
            }
        }
        "saturate" => {
            p.expect(Tok::LBracket)?;
            let mut chain = vec![p.ident()?];
            while p.eat(&Tok::Comma) {
                chain.push(p.ident()?);
            }
            p.expect(Tok::RBracket)?;
            p.expect(Tok::At)?;
            let filter = p.filter_expr()?;
            let kw = p.ident()?;
            if kw != "depth" {
                return p.fail("expected `depth`");
            }
            let depth = p.nat()? as usize;
            Command::Saturate {
                chain,
                filter,
                depth,
            }
        }
        "ultra" => {
            let name = p.ident()?;
            p.expect(Tok::Eq)?;
            let kind = p.ident()?;
            let spec = match kind.as_str() {
                "zero" => UltraSpec::Zero,
                "padic" => {
                    let base = p.nat()?;
                    let mut digits = Vec::new();
                    while let Some(Tok::Nat(_)) = p.peek() {
                        digits.push(p.nat()?);
                    }
                    UltraSpec::Padic { base, digits }
                }
                other => return p.fail(format!("unknown oracle kind `{other}`")),
            };
            Command::Ultra { name, spec }
        }
        "quotient" => {
            let name = p.ident()?;
            p.expect(Tok::Models)?;
            let formula = p.formula()?;
            Command::Quotient { name, formula }
        }
        "check" => Command::Check {
            formula: p.formula()?,
        },
        "set" => {
            let option = p.ident()?;
            let value = match p.bump() {
                Some(Tok::Ident(s)) => s,
                Some(Tok::Nat(s)) => s,
                other => {
                    return Err(EngineError::Syntax {
                        pos: p.here(),
                        msg: format!(
                            "expected an option value, found {}",
                            other.map(|t| t.describe()).unwrap_or_else(|| "end".into())
                        ),
                    })
                }
            };
            Command::Set { option, value }
        }
        other => {
            return Err(EngineError::Syntax {
                pos: 0,
                msg: format!("unknown command `{other}`"),
            })
        }
    };
    p.expect_end()?;
    Ok(cmd)
}

/// Assemble a `seq{..}` literal's pieces into helper form for tests.
pub fn seq_pieces(term: &Term) -> Option<&[(IndexSet, RationalFunc)]> {
    match term {
        Term::SeqLit(pieces) => Some(pieces),
        _ => None,
    }
}

/// Build the template parameter map from plain sequences.
pub fn seq_params(pairs: &[(&str, crate::seq::Seq)]) -> BTreeMap<String, crate::seq::Seq> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}
