//! Tarski satisfaction.

use super::LogicError;
use super::arith::{Arithmetic, Rational};
use super::parser::parse_sentence;
use super::structure::{Element, FunctionInterp, Interpretation, RelationalStructure};
use super::syntax::{CmpOp, Formula, Signature, Term};

#[derive(Debug, Clone, Copy)]
pub struct EvalConfig {
    /// Largest admissible |numerator| and |denominator| in rational arithmetic.
    pub magnitude_bound: i128,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig { magnitude_bound: 10i128.pow(30) }
    }
}

struct Evaluator<'a> {
    structure: &'a RelationalStructure,
    interp: &'a Interpretation,
    arith: Arithmetic,
    env: Vec<(&'a str, Element)>,
}

impl<'a> Evaluator<'a> {
    fn range(&self, var: &str) -> &'a [Element] {
        self.interp.referents(var).unwrap_or_else(|| self.structure.domain())
    }

    fn term(&self, t: &Term) -> Result<Element, LogicError> {
        match t {
            Term::Num(r) => Ok(Element::Num(*r)),
            Term::Var(v) => self
                .env
                .iter()
                .rev()
                .find(|(name, _)| name == v)
                .map(|(_, e)| e.clone())
                .ok_or_else(|| LogicError::FreeVariable(v.clone())),
            Term::App(name, args) => {
                let target = self.interp.target(name).ok_or_else(|| LogicError::UnknownSymbol(name.clone()))?;
                let func = self.structure.function(target).ok_or_else(|| LogicError::UnknownSymbol(target.into()))?;
                let values = args.iter().map(|a| self.term(a)).collect::<Result<Vec<_>, _>>()?;
                match func {
                    FunctionInterp::Table { entries, .. } => entries
                        .get(&values)
                        .cloned()
                        .ok_or_else(|| LogicError::Evaluation(format!("`{name}` is undefined at its arguments"))),
                    FunctionInterp::Arithmetic { expr, .. } => {
                        let nums = values
                            .iter()
                            .map(|e| e.as_rational().ok_or_else(|| non_numeric(name, e)))
                            .collect::<Result<Vec<Rational>, _>>()?;
                        expr.eval(&nums, &self.arith).map(Element::Num)
                    }
                }
            }
        }
    }

    fn eval(&mut self, f: &'a Formula) -> Result<bool, LogicError> {
        match f {
            Formula::Pred(name, args) => {
                let target = self.interp.target(name).ok_or_else(|| LogicError::UnknownSymbol(name.clone()))?;
                let rel = self.structure.relation(target).ok_or_else(|| LogicError::UnknownSymbol(target.into()))?;
                let tuple = args.iter().map(|a| self.term(a)).collect::<Result<Vec<_>, _>>()?;
                Ok(rel.tuples.contains(&tuple))
            }
            Formula::Eq(a, b) => Ok(self.term(a)? == self.term(b)?),
            Formula::Cmp(op, a, b) => {
                let (x, y) = (self.term(a)?, self.term(b)?);
                let (x, y) = match (x.as_rational(), y.as_rational()) {
                    (Some(x), Some(y)) => (x, y),
                    (None, _) => return Err(non_numeric(op.as_str(), &x)),
                    (_, None) => return Err(non_numeric(op.as_str(), &y)),
                };
                Ok(match op {
                    CmpOp::Le => x <= y,
                    CmpOp::Lt => x < y,
                    CmpOp::Ge => x >= y,
                    CmpOp::Gt => x > y,
                })
            }
            Formula::Not(g) => Ok(!self.eval(g)?),
            Formula::And(a, b) => Ok(self.eval(a)? && self.eval(b)?),
            Formula::Or(a, b) => Ok(self.eval(a)? || self.eval(b)?),
            Formula::Implies(a, b) => Ok(!self.eval(a)? || self.eval(b)?),
            Formula::Forall(v, g) => self.quantify(v, g, true),
            Formula::Exists(v, g) => self.quantify(v, g, false),
        }
    }

    /// Universal: conjunction over the range; existential: disjunction.
    fn quantify(&mut self, var: &'a str, body: &'a Formula, universal: bool) -> Result<bool, LogicError> {
        let range = self.range(var);
        if range.is_empty() {
            return Err(LogicError::DomainEmpty);
        }
        for e in range {
            self.env.push((var, e.clone()));
            let holds = self.eval(body);
            self.env.pop();
            if holds? != universal {
                return Ok(!universal);
            }
        }
        Ok(universal)
    }
}

fn non_numeric(context: &str, e: &Element) -> LogicError {
    LogicError::Evaluation(format!("`{context}` needs rational arguments, got `{e}`"))
}

/// Decides whether `structure` (read through `interp`) is a model of `sentence`.
pub fn satisfies(
    structure: &RelationalStructure,
    sentence: &Formula,
    interp: &Interpretation,
) -> Result<bool, LogicError> {
    satisfies_with(structure, sentence, interp, &EvalConfig::default())
}

pub fn satisfies_with(
    structure: &RelationalStructure,
    sentence: &Formula,
    interp: &Interpretation,
    config: &EvalConfig,
) -> Result<bool, LogicError> {
    sentence.require_sentence()?;
    let mut ev = Evaluator { structure, interp, arith: Arithmetic { bound: config.magnitude_bound }, env: Vec::new() };
    ev.eval(sentence)
}

/// A named, ordered list of sentences over one signature.
#[derive(Debug, Clone, PartialEq)]
pub struct Theory {
    pub name: String,
    pub signature: Signature,
    pub sentences: Vec<Formula>,
}

impl Theory {
    pub fn new(name: impl Into<String>, signature: Signature, sentences: Vec<Formula>) -> Result<Self, LogicError> {
        for s in &sentences {
            signature.check(s)?;
            s.require_sentence()?;
        }
        Ok(Theory { name: name.into(), signature, sentences })
    }

    /// One sentence per line; blank lines and `#` comments are skipped.
    pub fn parse(name: impl Into<String>, text: &str, signature: Signature) -> Result<Self, LogicError> {
        let sentences = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| parse_sentence(l, &signature))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Theory { name: name.into(), signature, sentences })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoryVerdict {
    pub per_sentence: Vec<bool>,
}

impl TheoryVerdict {
    /// The structure is a model of the theory when every sentence holds.
    pub fn is_model(&self) -> bool {
        self.per_sentence.iter().all(|&b| b)
    }
}

pub fn check_theory(
    theory: &Theory,
    structure: &RelationalStructure,
    interp: &Interpretation,
) -> Result<TheoryVerdict, LogicError> {
    interp.validate(&theory.signature, structure)?;
    let per_sentence = theory.sentences.iter().map(|s| satisfies(structure, s, interp)).collect::<Result<_, _>>()?;
    Ok(TheoryVerdict { per_sentence })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;
    use crate::modeltheory::{StructureDocument, parse_formula};
    use std::collections::BTreeMap;

    fn orthogonality(structure_json: &str) -> bool {
        let doc = StructureDocument::from_json(structure_json).unwrap();
        let s = parse_sentence("forall v1. forall v2. forall v3. P1(v1,v2) = P2(v3)", &doc.signature).unwrap();
        satisfies(&doc.structure, &s, &doc.interpretation).unwrap()
    }

    #[test]
    fn right_triangle_is_a_model() {
        assert!(orthogonality(bundled::TRIANGLE_345));
    }

    #[test]
    fn non_right_triangle_is_not() {
        // 2^2 + 3^2 = 13, 4^2 = 16
        assert!(!orthogonality(bundled::TRIANGLE_234));
    }

    #[test]
    fn reflexivity_of_equality() {
        let sig = Signature::default();
        let s = parse_sentence("forall v. v = v", &sig).unwrap();
        for n in 1..4 {
            let dom = (0..n).map(|i| Element::token(format!("e{i}"))).collect();
            let st = RelationalStructure::new(dom, BTreeMap::new(), BTreeMap::new()).unwrap();
            assert!(satisfies(&st, &s, &Interpretation::default()).unwrap());
        }
    }

    #[test]
    fn empty_domain_is_rejected() {
        let st = RelationalStructure::new(vec![], BTreeMap::new(), BTreeMap::new()).unwrap();
        let s = parse_sentence("exists v. v = v", &Signature::default()).unwrap();
        assert_eq!(satisfies(&st, &s, &Interpretation::default()), Err(LogicError::DomainEmpty));
        // a quantifier-free sentence needs no domain
        let t = parse_sentence("1 = 1", &Signature::default()).unwrap();
        assert_eq!(satisfies(&st, &t, &Interpretation::default()), Ok(true));
    }

    #[test]
    fn overflow_is_reported() {
        let doc = StructureDocument::from_json(bundled::TRIANGLE_345).unwrap();
        let s = parse_sentence("forall v1. forall v2. forall v3. P1(v1,v2) = P2(v3)", &doc.signature).unwrap();
        let tight = EvalConfig { magnitude_bound: 20 };
        assert_eq!(
            satisfies_with(&doc.structure, &s, &doc.interpretation, &tight),
            Err(LogicError::EvaluationOverflow)
        );
    }

    #[test]
    fn free_variable_is_not_a_sentence() {
        let sig = Signature::default();
        let f = parse_formula("x = x", &sig).unwrap();
        let st = RelationalStructure::new(vec![Element::int(1)], BTreeMap::new(), BTreeMap::new()).unwrap();
        assert_eq!(satisfies(&st, &f, &Interpretation::default()), Err(LogicError::FreeVariable("x".into())));
    }

    #[test]
    fn comparisons_need_numbers() {
        let st = RelationalStructure::new(vec![Element::token("a")], BTreeMap::new(), BTreeMap::new()).unwrap();
        let s = parse_sentence("forall x. x <= 3", &Signature::default()).unwrap();
        assert!(matches!(satisfies(&st, &s, &Interpretation::default()), Err(LogicError::Evaluation(_))));
        let st =
            RelationalStructure::new(vec![Element::int(1), Element::int(2)], BTreeMap::new(), BTreeMap::new()).unwrap();
        assert!(satisfies(&st, &s, &Interpretation::default()).unwrap());
        let s = parse_sentence("exists x. x > 2", &Signature::default()).unwrap();
        assert!(!satisfies(&st, &s, &Interpretation::default()).unwrap());
    }

    #[test]
    fn theory_checks() {
        let sig = Signature::default();
        let t = Theory::parse("taut", "# tautology\nforall v. v = v or not v = v\n", sig).unwrap();
        let st = RelationalStructure::new(vec![Element::int(0)], BTreeMap::new(), BTreeMap::new()).unwrap();
        let verdict = check_theory(&t, &st, &Interpretation::default()).unwrap();
        assert_eq!(verdict.per_sentence, vec![true]);
        assert!(verdict.is_model());

        for (json, expected) in [(bundled::TRIANGLE_345, true), (bundled::TRIANGLE_234, false)] {
            let doc = StructureDocument::from_json(json).unwrap();
            let t = Theory::parse("orthogonality", bundled::ORTHOGONALITY_THEORY, doc.signature.clone()).unwrap();
            let v = check_theory(&t, &doc.structure, &doc.interpretation).unwrap();
            assert_eq!(v.per_sentence, vec![expected]);
        }
    }
}
