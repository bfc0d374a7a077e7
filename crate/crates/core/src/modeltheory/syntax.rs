use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::LogicError;
use super::arith::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

impl Symbol {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        Symbol { name: name.into(), arity }
    }
}

/// Predicate and function symbols of a language. Equality is always present
/// and is not listed; constants are nullary functions.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(try_from = "RawSignature")]
pub struct Signature {
    predicates: Vec<Symbol>,
    functions: Vec<Symbol>,
}

#[derive(Deserialize)]
struct RawSignature {
    #[serde(default)]
    predicates: Vec<Symbol>,
    #[serde(default)]
    functions: Vec<Symbol>,
}

impl TryFrom<RawSignature> for Signature {
    type Error = LogicError;

    fn try_from(raw: RawSignature) -> Result<Self, LogicError> {
        Signature::new(raw.predicates, raw.functions)
    }
}

impl Signature {
    pub fn new(predicates: Vec<Symbol>, functions: Vec<Symbol>) -> Result<Self, LogicError> {
        let mut seen = BTreeSet::new();
        for s in predicates.iter().chain(&functions) {
            if !is_identifier(&s.name) {
                return Err(LogicError::InvalidStructure(format!("`{}` is not a valid identifier", s.name)));
            }
            if !seen.insert(s.name.as_str()) {
                return Err(LogicError::DuplicateSymbol(s.name.clone()));
            }
        }
        if let Some(p) = predicates.iter().find(|p| p.arity == 0) {
            return Err(LogicError::ArityMismatch { symbol: p.name.clone(), expected: 1, found: 0 });
        }
        Ok(Signature { predicates, functions })
    }

    pub fn predicates(&self) -> &[Symbol] {
        &self.predicates
    }

    pub fn functions(&self) -> &[Symbol] {
        &self.functions
    }

    pub fn predicate(&self, name: &str) -> Option<&Symbol> {
        self.predicates.iter().find(|s| s.name == name)
    }

    pub fn function(&self, name: &str) -> Option<&Symbol> {
        self.functions.iter().find(|s| s.name == name)
    }

    pub fn declares(&self, name: &str) -> bool {
        self.predicate(name).is_some() || self.function(name).is_some()
    }

    /// Checks that `f` only uses declared symbols at their declared arities.
    pub fn check(&self, f: &Formula) -> Result<(), LogicError> {
        match f {
            Formula::Pred(name, args) => {
                let sym = self.predicate(name).ok_or_else(|| LogicError::UnknownSymbol(name.clone()))?;
                check_arity(sym, args.len())?;
                args.iter().try_for_each(|t| self.check_term(t))
            }
            Formula::Eq(a, b) | Formula::Cmp(_, a, b) => {
                self.check_term(a)?;
                self.check_term(b)
            }
            Formula::Not(g) => self.check(g),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                self.check(a)?;
                self.check(b)
            }
            Formula::Forall(v, g) | Formula::Exists(v, g) => {
                if self.declares(v) {
                    return Err(LogicError::DuplicateSymbol(v.clone()));
                }
                self.check(g)
            }
        }
    }

    fn check_term(&self, t: &Term) -> Result<(), LogicError> {
        match t {
            Term::Var(_) | Term::Num(_) => Ok(()),
            Term::App(name, args) => {
                let sym = self.function(name).ok_or_else(|| LogicError::UnknownSymbol(name.clone()))?;
                check_arity(sym, args.len())?;
                args.iter().try_for_each(|a| self.check_term(a))
            }
        }
    }
}

fn check_arity(sym: &Symbol, found: usize) -> Result<(), LogicError> {
    if sym.arity == found {
        Ok(())
    } else {
        Err(LogicError::ArityMismatch { symbol: sym.name.clone(), expected: sym.arity, found })
    }
}

pub(crate) const KEYWORDS: [&str; 5] = ["forall", "exists", "not", "and", "or"];

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !KEYWORDS.contains(&s)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    /// Function application; constants have no arguments.
    App(String, Vec<Term>),
    Num(Rational),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Self {
        Term::App(name.into(), Vec::new())
    }

    pub fn app(name: impl Into<String>, args: Vec<Term>) -> Self {
        Term::App(name.into(), args)
    }

    fn collect_vars(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) if !bound.contains(v) => {
                out.insert(v.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(bound, out)),
            _ => {}
        }
    }
}

/// Built-in order comparisons on rational elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Le,
    Lt,
    Ge,
    Gt,
}

impl CmpOp {
    pub fn as_str(self) -> &'static str {
        match self {
            CmpOp::Le => "<=",
            CmpOp::Lt => "<",
            CmpOp::Ge => ">=",
            CmpOp::Gt => ">",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Pred(String, Vec<Term>),
    Eq(Term, Term),
    Cmp(CmpOp, Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

impl Formula {
    pub fn pred(name: impl Into<String>, args: Vec<Term>) -> Self {
        Formula::Pred(name.into(), args)
    }

    pub fn negate(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn forall(v: impl Into<String>, f: Formula) -> Self {
        Formula::Forall(v.into(), Box::new(f))
    }

    pub fn exists(v: impl Into<String>, f: Formula) -> Self {
        Formula::Exists(v.into(), Box::new(f))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    /// A sentence is a formula with no free variables.
    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn require_sentence(&self) -> Result<(), LogicError> {
        match self.free_vars().into_iter().next() {
            Some(v) => Err(LogicError::FreeVariable(v)),
            None => Ok(()),
        }
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Pred(_, args) => args.iter().for_each(|t| t.collect_vars(bound, out)),
            Formula::Eq(a, b) | Formula::Cmp(_, a, b) => {
                a.collect_vars(bound, out);
                b.collect_vars(bound, out);
            }
            Formula::Not(g) => g.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(v, g) | Formula::Exists(v, g) => {
                bound.push(v.clone());
                g.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    fn is_atomic(&self) -> bool {
        matches!(self, Formula::Pred(..) | Formula::Eq(..) | Formula::Cmp(..) | Formula::Not(_))
    }

    fn fmt_operand(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_atomic() { write!(f, "{self}") } else { write!(f, "({self})") }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Num(r) => write!(f, "{r}"),
            Term::App(name, args) if args.is_empty() => f.write_str(name),
            Term::App(name, args) => {
                write!(f, "{name}(")?;
                write_list(f, args)?;
                f.write_str(")")
            }
        }
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, terms: &[Term]) -> fmt::Result {
    for (i, t) in terms.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{t}")?;
    }
    Ok(())
}

/// Prints in the concrete syntax accepted by [`super::parse_formula`].
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Pred(name, args) => {
                write!(f, "{name}(")?;
                write_list(f, args)?;
                f.write_str(")")
            }
            Formula::Eq(a, b) => write!(f, "{a} = {b}"),
            Formula::Cmp(op, a, b) => write!(f, "{a} {} {b}", op.as_str()),
            Formula::Not(g) => {
                f.write_str("not ")?;
                g.fmt_operand(f)
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                let op = match self {
                    Formula::And(..) => "and",
                    Formula::Or(..) => "or",
                    _ => "->",
                };
                a.fmt_operand(f)?;
                write!(f, " {op} ")?;
                b.fmt_operand(f)
            }
            Formula::Forall(v, g) => write!(f, "forall {v}. {g}"),
            Formula::Exists(v, g) => write!(f, "exists {v}. {g}"),
        }
    }
}
