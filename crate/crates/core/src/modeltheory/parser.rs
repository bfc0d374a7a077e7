//! Recursive-descent parser for sentences.
//!
//! ```text
//! formula  := implies
//! implies  := disjunct ("->" implies)?
//! disjunct := conjunct ("or" conjunct)*
//! conjunct := unary ("and" unary)*
//! unary    := "not" unary
//!           | ("forall" | "exists") ident ("," ident)* "." formula
//!           | "(" formula ")"
//!           | atom
//! atom     := pred "(" terms ")" | term ("=" | "<=" | "<" | ">=" | ">") term
//! term     := rational | ident | func "(" terms ")"
//! ```
//!
//! Whether `ident(...)` is a predicate atom or a function term is decided by
//! the signature, which keeps the grammar LL(1).

use super::LogicError;
use super::arith::{Rational, parse_rational};
use super::syntax::{CmpOp, Formula, KEYWORDS, Signature, Term};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(Rational),
    Kw(&'static str),
    LParen,
    RParen,
    Comma,
    Dot,
    Eq,
    Cmp(CmpOp),
    Arrow,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Num(r) => format!("number `{r}`"),
            Tok::Kw(k) => format!("`{k}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Cmp(op) => format!("`{}`", op.as_str()),
            Tok::Arrow => "`->`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, LogicError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let unexpected = |i: usize| LogicError::Syntax {
        position: i,
        expected: "a token".into(),
        found: format!("`{}`", text[i..].chars().next().unwrap_or(' ')),
    };
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b if b.is_ascii_whitespace() => {
                i += 1;
                continue;
            }
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'.' => Tok::Dot,
            b'=' => Tok::Eq,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Arrow
            }
            b'<' | b'>' => {
                let eq = bytes.get(i + 1) == Some(&b'=');
                if eq {
                    i += 1;
                }
                Tok::Cmp(match (c, eq) {
                    (b'<', true) => CmpOp::Le,
                    (b'<', false) => CmpOp::Lt,
                    (_, true) => CmpOp::Ge,
                    _ => CmpOp::Gt,
                })
            }
            b'-' | b'0'..=b'9' => {
                let mut j = i + 1;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                // fraction or decimal part, only when followed by a digit
                if j + 1 < bytes.len() && (bytes[j] == b'.' || bytes[j] == b'/') && bytes[j + 1].is_ascii_digit() {
                    j += 1;
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                }
                let r = parse_rational(&text[i..j]).ok_or_else(|| unexpected(start))?;
                i = j;
                out.push((start, Tok::Num(r)));
                continue;
            }
            b if b.is_ascii_alphabetic() || b == b'_' => {
                let mut j = i;
                while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                    j += 1;
                }
                let word = &text[i..j];
                i = j;
                let tok = match KEYWORDS.iter().find(|k| **k == word) {
                    Some(k) => Tok::Kw(k),
                    None => Tok::Ident(word.to_string()),
                };
                out.push((start, tok));
                continue;
            }
            _ => return Err(unexpected(i)),
        };
        i += 1;
        out.push((start, tok));
    }
    out.push((text.len(), Tok::Eof));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    sig: &'a Signature,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> LogicError {
        let (position, tok) = &self.toks[self.pos];
        LogicError::Syntax { position: *position, expected: expected.into(), found: tok.describe() }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), LogicError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(what))
        }
    }

    fn formula(&mut self) -> Result<Formula, LogicError> {
        let lhs = self.disjunct()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            return Ok(Formula::implies(lhs, self.formula()?));
        }
        Ok(lhs)
    }

    fn disjunct(&mut self) -> Result<Formula, LogicError> {
        let mut lhs = self.conjunct()?;
        while *self.peek() == Tok::Kw("or") {
            self.bump();
            lhs = Formula::or(lhs, self.conjunct()?);
        }
        Ok(lhs)
    }

    fn conjunct(&mut self) -> Result<Formula, LogicError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Kw("and") {
            self.bump();
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, LogicError> {
        match self.peek().clone() {
            Tok::Kw("not") => {
                self.bump();
                Ok(Formula::negate(self.unary()?))
            }
            Tok::Kw(q @ ("forall" | "exists")) => {
                self.bump();
                let mut vars = vec![self.bound_variable()?];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    vars.push(self.bound_variable()?);
                }
                self.expect(Tok::Dot, "`.` after quantified variables")?;
                let body = self.formula()?;
                Ok(vars
                    .into_iter()
                    .rev()
                    .fold(body, |acc, v| if q == "forall" { Formula::forall(v, acc) } else { Formula::exists(v, acc) }))
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            _ => self.atom(),
        }
    }

    fn bound_variable(&mut self) -> Result<String, LogicError> {
        match self.peek().clone() {
            Tok::Ident(name) if !self.sig.declares(&name) => {
                self.bump();
                Ok(name)
            }
            _ => Err(self.error("a variable name not declared in the signature")),
        }
    }

    fn atom(&mut self) -> Result<Formula, LogicError> {
        if let (Tok::Ident(name), Tok::LParen) = (self.peek().clone(), self.peek2()) {
            if let Some(sym) = self.sig.predicate(&name) {
                let arity = sym.arity;
                self.bump();
                let args = self.arguments()?;
                if args.len() != arity {
                    return Err(LogicError::ArityMismatch { symbol: name, expected: arity, found: args.len() });
                }
                return Ok(Formula::Pred(name, args));
            }
            if self.sig.function(&name).is_none() {
                return Err(LogicError::UnknownSymbol(name));
            }
        }
        let lhs = self.term()?;
        let op = self.bump();
        let rhs = self.term()?;
        match op {
            Tok::Eq => Ok(Formula::Eq(lhs, rhs)),
            Tok::Cmp(op) => Ok(Formula::Cmp(op, lhs, rhs)),
            _ => {
                self.pos -= 1;
                Err(self.error("`=` or a comparison"))
            }
        }
    }

    fn arguments(&mut self) -> Result<Vec<Term>, LogicError> {
        self.expect(Tok::LParen, "`(`")?;
        let mut args = Vec::new();
        if *self.peek() != Tok::RParen {
            args.push(self.term()?);
            while *self.peek() == Tok::Comma {
                self.bump();
                args.push(self.term()?);
            }
        }
        self.expect(Tok::RParen, "`)` or `,`")?;
        Ok(args)
    }

    fn term(&mut self) -> Result<Term, LogicError> {
        match self.peek().clone() {
            Tok::Num(r) => {
                self.bump();
                Ok(Term::Num(r))
            }
            Tok::Ident(name) => {
                if self.sig.predicate(&name).is_some() {
                    return Err(self.error("a term (predicates cannot be used as terms)"));
                }
                self.bump();
                let sym = self.sig.function(&name).cloned();
                let args = if *self.peek() == Tok::LParen {
                    if sym.is_none() {
                        return Err(LogicError::UnknownSymbol(name));
                    }
                    self.arguments()?
                } else {
                    Vec::new()
                };
                match sym {
                    Some(sym) if sym.arity != args.len() => {
                        Err(LogicError::ArityMismatch { symbol: name, expected: sym.arity, found: args.len() })
                    }
                    Some(_) => Ok(Term::App(name, args)),
                    None => Ok(Term::Var(name)),
                }
            }
            _ => Err(self.error("a term")),
        }
    }
}

/// Parses a formula; free variables are allowed.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, LogicError> {
    let mut p = Parser { toks: lex(text)?, pos: 0, sig };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error("end of input"));
    }
    Ok(f)
}

/// Parses a sentence: a formula whose variables are all bound.
pub fn parse_sentence(text: &str, sig: &Signature) -> Result<Formula, LogicError> {
    let f = parse_formula(text, sig)?;
    f.require_sentence()?;
    Ok(f)
}
