//! Abstract syntax of the first-order language the engine decides: terms
//! denoting hyperreal presentations, and formulas over comparison atoms,
//! infinitesimal closeness, standardness, standard-part and internal
//! predicates, with connectives and (optionally witnessed) quantifiers.
//!
//! `Display` emits exactly the surface grammar, so printing and re-parsing
//! is the identity on syntax trees.

use std::fmt;

use crate::index_set::IndexSet;
use crate::ratfunc::RationalFunc;
use crate::rational::{show_rational, Q};
use crate::seq::RelOp;

/// A term denoting a hyperreal presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    /// The constant embedding of a rational.
    Const(Q),
    /// A named binding or quantified variable.
    Var(String),
    /// An inline piecewise literal.
    SeqLit(Vec<(IndexSet, RationalFunc)>),
    Add(Box<Term>, Box<Term>),
    Sub(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
    Div(Box<Term>, Box<Term>),
    Neg(Box<Term>),
    Abs(Box<Term>),
    Min(Box<Term>, Box<Term>),
    Max(Box<Term>, Box<Term>),
}

impl Term {
    pub fn constant(q: Q) -> Term {
        Term::Const(q)
    }

    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    /// Free variable names, in first-occurrence order.
    pub fn free_vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Const(_) | Term::SeqLit(_) => {}
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::Neg(t) | Term::Abs(t) => t.free_vars(out),
            Term::Add(a, b)
            | Term::Sub(a, b)
            | Term::Mul(a, b)
            | Term::Div(a, b)
            | Term::Min(a, b)
            | Term::Max(a, b) => {
                a.free_vars(out);
                b.free_vars(out);
            }
        }
    }

    pub fn mentions(&self, name: &str) -> bool {
        let mut vars = Vec::new();
        self.free_vars(&mut vars);
        vars.iter().any(|v| v == name)
    }
}

/// A formula of the engine's language.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    /// `t R u` for a comparison relation.
    Rel(Term, RelOp, Term),
    /// `t ~~ u`: infinitesimal closeness, relative to the viewpoint.
    Close(Term, Term),
    /// `S(t)`: the presentation is identified with some constant embedding.
    Standard(Term),
    /// `st(t, u)`: `t` is standard and infinitely close to `u`.
    StandardPart(Term, Term),
    /// Application of a named internal predicate.
    Pred(String, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    /// `exists x [:= witness] body`.
    Exists(String, Option<Term>, Box<Formula>),
    /// `forall x [:= witness] body`.
    Forall(String, Option<Term>, Box<Formula>),
}

impl Formula {
    /// Negation; a constructor, not the `!` operator.
    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Formula {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, other: Formula) -> Formula {
        Formula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Formula) -> Formula {
        Formula::Or(Box::new(self), Box::new(other))
    }

    pub fn implies(self, other: Formula) -> Formula {
        Formula::Implies(Box::new(self), Box::new(other))
    }

    /// True when the formula contains a viewpoint-relative atom (`~~`, `S`,
    /// `st`); those have no per-index truth set.
    pub fn has_filter_relative_atoms(&self) -> bool {
        match self {
            Formula::Rel(..) | Formula::Pred(..) => false,
            Formula::Close(..) | Formula::Standard(..) | Formula::StandardPart(..) => true,
            Formula::Not(p) => p.has_filter_relative_atoms(),
            Formula::And(p, q) | Formula::Or(p, q) | Formula::Implies(p, q) => {
                p.has_filter_relative_atoms() || q.has_filter_relative_atoms()
            }
            Formula::Exists(_, _, p) | Formula::Forall(_, _, p) => p.has_filter_relative_atoms(),
        }
    }

    /// Free variables (quantified names are bound in their bodies and in
    /// their own witness terms they are not yet in scope).
    pub fn free_vars(&self) -> Vec<String> {
        fn walk(phi: &Formula, bound: &mut Vec<String>, out: &mut Vec<String>) {
            let term_vars = |t: &Term, bound: &Vec<String>, out: &mut Vec<String>| {
                let mut vs = Vec::new();
                t.free_vars(&mut vs);
                for v in vs {
                    if !bound.contains(&v) && !out.contains(&v) {
                        out.push(v);
                    }
                }
            };
            match phi {
                Formula::Rel(a, _, b) | Formula::Close(a, b) | Formula::StandardPart(a, b) => {
                    term_vars(a, bound, out);
                    term_vars(b, bound, out);
                }
                Formula::Standard(t) | Formula::Pred(_, t) => term_vars(t, bound, out),
                Formula::Not(p) => walk(p, bound, out),
                Formula::And(p, q) | Formula::Or(p, q) | Formula::Implies(p, q) => {
                    walk(p, bound, out);
                    walk(q, bound, out);
                }
                Formula::Exists(x, w, p) | Formula::Forall(x, w, p) => {
                    if let Some(w) = w {
                        term_vars(w, bound, out);
                    }
                    bound.push(x.clone());
                    walk(p, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }
}

// Precedence levels for printing: implication binds loosest, then
// disjunction, conjunction, and negation/atoms.
fn fmt_formula(phi: &Formula, level: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let this = match phi {
        Formula::Implies(..) => 0,
        Formula::Or(..) => 1,
        Formula::And(..) => 2,
        _ => 3,
    };
    let parens = this < level;
    if parens {
        write!(f, "(")?;
    }
    match phi {
        Formula::Rel(a, op, b) => write!(f, "{a} {} {b}", op.symbol())?,
        Formula::Close(a, b) => write!(f, "{a} ~~ {b}")?,
        Formula::Standard(t) => write!(f, "S({t})")?,
        Formula::StandardPart(a, b) => write!(f, "st({a}, {b})")?,
        Formula::Pred(name, t) => write!(f, "{name}({t})")?,
        Formula::Not(p) => {
            write!(f, "~(")?;
            fmt_formula(p, 0, f)?;
            write!(f, ")")?;
        }
        // conjunction and disjunction parse left-associatively, so the
        // right child is printed one level stricter
        Formula::And(p, q) => {
            fmt_formula(p, 2, f)?;
            write!(f, " /\\ ")?;
            fmt_formula(q, 3, f)?;
        }
        Formula::Or(p, q) => {
            fmt_formula(p, 1, f)?;
            write!(f, " \\/ ")?;
            fmt_formula(q, 2, f)?;
        }
        Formula::Implies(p, q) => {
            fmt_formula(p, 1, f)?;
            write!(f, " -> ")?;
            fmt_formula(q, 0, f)?;
        }
        Formula::Exists(x, w, p) | Formula::Forall(x, w, p) => {
            let kw = if matches!(phi, Formula::Exists(..)) {
                "exists"
            } else {
                "forall"
            };
            write!(f, "{kw} {x}")?;
            if let Some(w) = w {
                write!(f, " := {w}")?;
            }
            write!(f, " (")?;
            fmt_formula(p, 0, f)?;
            write!(f, ")")?;
        }
    }
    if parens {
        write!(f, ")")?;
    }
    Ok(())
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_formula(self, 0, f)
    }
}

fn fmt_term(t: &Term, level: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    // levels: 0 additive, 1 multiplicative, 2 unary/primary
    let this = match t {
        Term::Add(..) | Term::Sub(..) => 0,
        Term::Mul(..) | Term::Div(..) => 1,
        _ => 2,
    };
    let parens = this < level;
    if parens {
        write!(f, "(")?;
    }
    match t {
        Term::Const(q) => write!(f, "{}", show_rational(q))?,
        Term::Var(v) => write!(f, "{v}")?,
        Term::SeqLit(pieces) => {
            let body: Vec<String> = pieces
                .iter()
                .map(|(c, e)| format!("{c} -> {e}"))
                .collect();
            write!(f, "seq{{{}}}", body.join(", "))?;
        }
        Term::Add(a, b) => {
            fmt_term(a, 0, f)?;
            write!(f, " + ")?;
            fmt_term(b, 1, f)?;
        }
        Term::Sub(a, b) => {
            fmt_term(a, 0, f)?;
            write!(f, " - ")?;
            fmt_term(b, 1, f)?;
        }
        Term::Mul(a, b) => {
            fmt_term(a, 1, f)?;
            write!(f, " * ")?;
            fmt_term(b, 2, f)?;
        }
        Term::Div(a, b) => {
            fmt_term(a, 1, f)?;
            write!(f, " / ")?;
            fmt_term(b, 2, f)?;
        }
        Term::Neg(a) => {
            write!(f, "-")?;
            fmt_term(a, 2, f)?;
        }
        Term::Abs(a) => write!(f, "abs({a})")?,
        Term::Min(a, b) => write!(f, "min({a}, {b})")?,
        Term::Max(a, b) => write!(f, "max({a}, {b})")?,
    }
    if parens {
        write!(f, ")")?;
    }
    Ok(())
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_term(self, 0, f)
    }
}
