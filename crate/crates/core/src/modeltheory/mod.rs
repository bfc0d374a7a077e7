//! First-order predicate calculus with equality over finite structures.
//!
//! Sentences are parsed against a [`Signature`], interpreted into a
//! [`RelationalStructure`] through an [`Interpretation`], and decided by
//! Tarski's compositional truth definition. Quantifiers enumerate the
//! (finite) domain, or the referents chosen for the bound variable when the
//! interpretation fixes them.
//!
//! Numeric domains use exact rationals; function symbols may be interpreted
//! as finite tables or as rational arithmetic over their arguments.

mod arith;
mod enumerate;
mod graph;
mod parser;
mod semantics;
mod structure;
mod syntax;

use thiserror::Error;

pub use arith::{ArithExpr, Rational, parse_rational};
pub use enumerate::{EnumerateConfig, all_structures, enumerate_models, enumerate_models_with};
pub use graph::{ConceptNode, ConceptualGraph, RelationNode, graph_to_sentence};
pub use parser::{parse_formula, parse_sentence};
pub use semantics::{EvalConfig, Theory, TheoryVerdict, check_theory, satisfies, satisfies_with};
pub use structure::{Element, FunctionInterp, Interpretation, Relation, RelationalStructure, StructureDocument};
pub use syntax::{CmpOp, Formula, Signature, Symbol, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("syntax error at offset {position}: expected {expected}, found {found}")]
    Syntax { position: usize, expected: String, found: String },

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("symbol `{symbol}` has arity {expected} but was used with {found} argument(s)")]
    ArityMismatch { symbol: String, expected: usize, found: usize },

    #[error("free variable `{0}` in a position that requires a sentence")]
    FreeVariable(String),

    #[error("symbol `{0}` is declared more than once")]
    DuplicateSymbol(String),

    #[error("quantifier over an empty range of elements")]
    DomainEmpty,

    #[error("rational arithmetic exceeded the magnitude bound")]
    EvaluationOverflow,

    #[error("evaluation error: {0}")]
    Evaluation(String),

    #[error("{what} of {requested} exceeds the cap of {cap}")]
    CapExceeded { what: &'static str, requested: u128, cap: u128 },

    #[error("relation node `{0}` references another relation node")]
    HigherOrderGraph(String),

    #[error("invalid conceptual graph: {0}")]
    InvalidGraph(String),

    #[error("invalid structure: {0}")]
    InvalidStructure(String),

    #[error("malformed document: {0}")]
    Json(String),
}

impl From<serde_json::Error> for LogicError {
    fn from(e: serde_json::Error) -> Self {
        LogicError::Json(e.to_string())
    }
}
