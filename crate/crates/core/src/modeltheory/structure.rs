use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Deserialize;
use serde_json::Value;

use super::LogicError;
use super::arith::{ArithExpr, Rational, parse_rational};
use super::syntax::Signature;

/// A domain element: an opaque token or an exact rational.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Num(Rational),
    Token(String),
}

impl Element {
    pub fn int(n: i128) -> Self {
        Element::Num(Rational::from_integer(n))
    }

    pub fn token(s: impl Into<String>) -> Self {
        Element::Token(s.into())
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self {
            Element::Num(r) => Some(*r),
            Element::Token(_) => None,
        }
    }

    fn from_json(v: &Value) -> Result<Self, LogicError> {
        match v {
            Value::Number(n) => parse_rational(&n.to_string())
                .map(Element::Num)
                .ok_or_else(|| LogicError::InvalidStructure(format!("number {n} is not an exact rational literal"))),
            Value::String(s) => Ok(parse_rational(s).map_or_else(|| Element::Token(s.clone()), Element::Num)),
            other => Err(LogicError::InvalidStructure(format!("domain elements are numbers or strings, got {other}"))),
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Num(r) => write!(f, "{r}"),
            Element::Token(t) => f.write_str(t),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub arity: usize,
    pub tuples: BTreeSet<Vec<Element>>,
}

impl Relation {
    pub fn new(arity: usize, tuples: impl IntoIterator<Item = Vec<Element>>) -> Self {
        Relation { arity, tuples: tuples.into_iter().collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FunctionInterp {
    /// Total table over the domain.
    Table { arity: usize, entries: BTreeMap<Vec<Element>, Element> },
    /// Rational arithmetic over the arguments; results may fall outside the domain.
    Arithmetic { params: Vec<String>, expr: ArithExpr, source: String },
}

impl FunctionInterp {
    pub fn arithmetic(params: &[&str], source: &str) -> Result<Self, LogicError> {
        let params: Vec<String> = params.iter().map(|p| p.to_string()).collect();
        let expr = ArithExpr::parse(source, &params)?;
        Ok(FunctionInterp::Arithmetic { params, expr, source: source.to_string() })
    }

    pub fn arity(&self) -> usize {
        match self {
            FunctionInterp::Table { arity, .. } => *arity,
            FunctionInterp::Arithmetic { params, .. } => params.len(),
        }
    }
}

/// A finite domain with named relations and functions over it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationalStructure {
    domain: Vec<Element>,
    relations: BTreeMap<String, Relation>,
    functions: BTreeMap<String, FunctionInterp>,
}

impl RelationalStructure {
    pub fn new(
        domain: Vec<Element>,
        relations: BTreeMap<String, Relation>,
        functions: BTreeMap<String, FunctionInterp>,
    ) -> Result<Self, LogicError> {
        let members: BTreeSet<&Element> = domain.iter().collect();
        if members.len() != domain.len() {
            return Err(LogicError::InvalidStructure("domain elements must be distinct".into()));
        }
        let check_tuple = |name: &str, arity: usize, tuple: &[Element]| {
            if tuple.len() != arity {
                return Err(LogicError::ArityMismatch {
                    symbol: name.to_string(),
                    expected: arity,
                    found: tuple.len(),
                });
            }
            match tuple.iter().find(|e| !members.contains(e)) {
                Some(e) => {
                    Err(LogicError::InvalidStructure(format!("`{name}` mentions {e}, which is not in the domain")))
                }
                None => Ok(()),
            }
        };
        for (name, rel) in &relations {
            for t in &rel.tuples {
                check_tuple(name, rel.arity, t)?;
            }
        }
        for (name, func) in &functions {
            if let FunctionInterp::Table { arity, entries } = func {
                for (args, value) in entries {
                    check_tuple(name, *arity, args)?;
                    check_tuple(name, 1, std::slice::from_ref(value))?;
                }
                let total = (domain.len() as u128).checked_pow(*arity as u32);
                if total != Some(entries.len() as u128) {
                    return Err(LogicError::InvalidStructure(format!("function table `{name}` is not total")));
                }
            }
        }
        Ok(RelationalStructure { domain, relations, functions })
    }

    pub fn domain(&self) -> &[Element] {
        &self.domain
    }

    pub fn relation(&self, name: &str) -> Option<&Relation> {
        self.relations.get(name)
    }

    pub fn function(&self, name: &str) -> Option<&FunctionInterp> {
        self.functions.get(name)
    }

    pub fn relations(&self) -> &BTreeMap<String, Relation> {
        &self.relations
    }

    pub fn functions(&self) -> &BTreeMap<String, FunctionInterp> {
        &self.functions
    }
}

/// Maps signature symbols onto a structure's relations and functions, and
/// optionally fixes the referents a bound variable ranges over.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Interpretation {
    symbols: BTreeMap<String, String>,
    referents: BTreeMap<String, Vec<Element>>,
}

impl Interpretation {
    /// Interprets every symbol by the structure member of the same name.
    pub fn identity(sig: &Signature) -> Self {
        let symbols =
            sig.predicates().iter().chain(sig.functions()).map(|s| (s.name.clone(), s.name.clone())).collect();
        Interpretation { symbols, referents: BTreeMap::new() }
    }

    pub fn map_symbol(mut self, symbol: impl Into<String>, target: impl Into<String>) -> Self {
        self.symbols.insert(symbol.into(), target.into());
        self
    }

    pub fn with_referents(mut self, variable: impl Into<String>, referents: Vec<Element>) -> Self {
        self.referents.insert(variable.into(), referents);
        self
    }

    pub fn target(&self, symbol: &str) -> Option<&str> {
        self.symbols.get(symbol).map(String::as_str)
    }

    pub fn referents(&self, variable: &str) -> Option<&[Element]> {
        self.referents.get(variable).map(Vec::as_slice)
    }

    /// Every symbol is mapped to a member of matching arity; referents lie in the domain.
    pub fn validate(&self, sig: &Signature, structure: &RelationalStructure) -> Result<(), LogicError> {
        for p in sig.predicates() {
            let target = self.target(&p.name).ok_or_else(|| LogicError::UnknownSymbol(p.name.clone()))?;
            let rel = structure.relation(target).ok_or_else(|| LogicError::UnknownSymbol(target.to_string()))?;
            if rel.arity != p.arity {
                return Err(LogicError::ArityMismatch { symbol: p.name.clone(), expected: p.arity, found: rel.arity });
            }
        }
        for f in sig.functions() {
            let target = self.target(&f.name).ok_or_else(|| LogicError::UnknownSymbol(f.name.clone()))?;
            let func = structure.function(target).ok_or_else(|| LogicError::UnknownSymbol(target.to_string()))?;
            if func.arity() != f.arity {
                return Err(LogicError::ArityMismatch {
                    symbol: f.name.clone(),
                    expected: f.arity,
                    found: func.arity(),
                });
            }
        }
        for (v, elems) in &self.referents {
            if let Some(e) = elems.iter().find(|e| !structure.domain().contains(e)) {
                return Err(LogicError::InvalidStructure(format!("referent {e} of `{v}` is not in the domain")));
            }
        }
        Ok(())
    }
}

/// JSON form of a signature together with a structure interpreting it.
///
/// ```json
/// {"signature": {"predicates": [{"name": "R", "arity": 2}], "functions": []},
///  "domain": [3, 4, 5],
///  "relations": {"R": [[3, 4]]},
///  "functions": {"f": {"params": ["a"], "expr": "a*a"},
///                "g": {"table": [[[3], 4], [[4], 5], [[5], 3]]},
///                "c": {"value": 3}},
///  "interpretation": {"R": "R"},
///  "referents": {"v1": [3]}}
/// ```
#[derive(Debug, Clone)]
pub struct StructureDocument {
    pub signature: Signature,
    pub structure: RelationalStructure,
    pub interpretation: Interpretation,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    signature: Signature,
    domain: Vec<Value>,
    #[serde(default)]
    relations: BTreeMap<String, Vec<Vec<Value>>>,
    #[serde(default)]
    functions: BTreeMap<String, RawFunction>,
    #[serde(default)]
    interpretation: BTreeMap<String, String>,
    #[serde(default)]
    referents: BTreeMap<String, Vec<Value>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawFunction {
    Arithmetic { params: Vec<String>, expr: String },
    Table { table: Vec<(Vec<Value>, Value)> },
    Constant { value: Value },
}

fn elements(values: &[Value]) -> Result<Vec<Element>, LogicError> {
    values.iter().map(Element::from_json).collect()
}

impl StructureDocument {
    pub fn from_json(text: &str) -> Result<Self, LogicError> {
        let raw: RawDocument = serde_json::from_str(text)?;
        let sig = raw.signature;
        let mut interp = Interpretation::identity(&sig);
        for (symbol, target) in raw.interpretation {
            if !sig.declares(&symbol) {
                return Err(LogicError::UnknownSymbol(symbol));
            }
            interp = interp.map_symbol(symbol, target);
        }
        for (var, values) in &raw.referents {
            interp = interp.with_referents(var.clone(), elements(values)?);
        }

        let domain = elements(&raw.domain)?;
        let mut relations = BTreeMap::new();
        for (name, tuples) in &raw.relations {
            // arity comes from the predicate interpreted by this relation, else from the tuples
            let declared = sig.predicates().iter().find(|p| interp.target(&p.name) == Some(name.as_str()));
            let arity = match (declared, tuples.first()) {
                (Some(p), _) => p.arity,
                (None, Some(t)) => t.len(),
                (None, None) => {
                    return Err(LogicError::InvalidStructure(format!(
                        "cannot infer the arity of empty relation `{name}`"
                    )));
                }
            };
            let tuples = tuples.iter().map(|t| elements(t)).collect::<Result<Vec<_>, _>>()?;
            relations.insert(name.clone(), Relation::new(arity, tuples));
        }
        // predicates without listed tuples denote the empty relation
        for p in sig.predicates() {
            if let Some(target) = interp.target(&p.name) {
                relations.entry(target.to_string()).or_insert_with(|| Relation::new(p.arity, []));
            }
        }
        let mut functions = BTreeMap::new();
        for (name, f) in raw.functions {
            let interp_fn = match f {
                RawFunction::Arithmetic { params, expr } => {
                    let parsed = ArithExpr::parse(&expr, &params)?;
                    FunctionInterp::Arithmetic { params, expr: parsed, source: expr }
                }
                RawFunction::Table { table } => {
                    let arity = table.first().map_or(0, |(args, _)| args.len());
                    let mut entries = BTreeMap::new();
                    for (args, value) in &table {
                        if entries.insert(elements(args)?, Element::from_json(value)?).is_some() {
                            return Err(LogicError::InvalidStructure(format!("duplicate entry in table `{name}`")));
                        }
                    }
                    FunctionInterp::Table { arity, entries }
                }
                RawFunction::Constant { value } => {
                    let entries = BTreeMap::from([(Vec::new(), Element::from_json(&value)?)]);
                    FunctionInterp::Table { arity: 0, entries }
                }
            };
            functions.insert(name, interp_fn);
        }
        let structure = RelationalStructure::new(domain, relations, functions)?;
        interp.validate(&sig, &structure)?;
        Ok(StructureDocument { signature: sig, structure, interpretation: interp })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_pythagorean_structure() {
        let doc = StructureDocument::from_json(crate::bundled::TRIANGLE_345).unwrap();
        assert_eq!(doc.structure.domain(), &[Element::int(3), Element::int(4), Element::int(5)]);
        assert_eq!(doc.interpretation.referents("v3"), Some(&[Element::int(5)][..]));
        assert!(matches!(doc.structure.function("P1"), Some(FunctionInterp::Arithmetic { .. })));
    }

    #[test]
    fn rejects_tuple_outside_domain() {
        let json = r#"{"signature": {"predicates": [{"name": "R", "arity": 1}]},
                       "domain": ["a"], "relations": {"R": [["b"]]}}"#;
        assert!(matches!(StructureDocument::from_json(json), Err(LogicError::InvalidStructure(_))));
    }

    #[test]
    fn rejects_partial_table() {
        let json = r#"{"signature": {"functions": [{"name": "f", "arity": 1}]},
                       "domain": ["a", "b"], "functions": {"f": {"table": [[["a"], "b"]]}}}"#;
        assert!(matches!(StructureDocument::from_json(json), Err(LogicError::InvalidStructure(_))));
    }

    #[test]
    fn unlisted_predicate_is_empty_and_unlisted_function_is_an_error() {
        let json = r#"{"signature": {"predicates": [{"name": "R", "arity": 1}]}, "domain": ["a"]}"#;
        let doc = StructureDocument::from_json(json).unwrap();
        assert!(doc.structure.relation("R").unwrap().tuples.is_empty());
        let json = r#"{"signature": {"functions": [{"name": "f", "arity": 1}]}, "domain": ["a"]}"#;
        assert_eq!(StructureDocument::from_json(json).unwrap_err(), LogicError::UnknownSymbol("f".into()));
    }

    #[test]
    fn arity_mismatch_between_symbol_and_member() {
        let json = r#"{"signature": {"predicates": [{"name": "R", "arity": 1}]},
                       "domain": ["a"], "relations": {"S": [["a", "a"]]}, "interpretation": {"R": "S"}}"#;
        assert!(matches!(StructureDocument::from_json(json), Err(LogicError::ArityMismatch { .. })));
    }

    #[test]
    fn string_rationals_are_numbers() {
        let json = r#"{"signature": {}, "domain": ["1/2", 0.25, "tok"]}"#;
        let doc = StructureDocument::from_json(json).unwrap();
        assert_eq!(
            doc.structure.domain(),
            &[Element::Num(Rational::new(1, 2)), Element::Num(Rational::new(1, 4)), Element::token("tok")]
        );
    }
}
