//! Conceptual graphs and their first-order reading.
//!
//! A graph is bipartite: concept nodes `[Type: referent]` and relation nodes
//! `(Relation)` whose ordered arguments are concept nodes. Its meaning is an
//! existential sentence: one variable per concept without a fixed referent,
//! one constant per referent, one monadic type atom per typed concept and one
//! atom per relation node.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::LogicError;
use super::structure::{Element, FunctionInterp, Interpretation, Relation, RelationalStructure};
use super::syntax::{Formula, Signature, Symbol, Term, is_identifier};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConceptNode {
    pub name: String,
    #[serde(rename = "type", default, skip_serializing_if = "Option::is_none")]
    pub type_name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub referent: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationNode {
    pub name: String,
    /// Names of the nodes this relation connects, in argument order.
    pub args: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConceptualGraph {
    #[serde(default)]
    pub concepts: Vec<ConceptNode>,
    #[serde(default)]
    pub relations: Vec<RelationNode>,
}

impl ConceptualGraph {
    pub fn from_json(text: &str) -> Result<Self, LogicError> {
        let g: ConceptualGraph = serde_json::from_str(text)?;
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<(), LogicError> {
        if self.concepts.is_empty() {
            return Err(LogicError::InvalidGraph("a graph needs at least one concept".into()));
        }
        let mut names = BTreeSet::new();
        for n in self.concepts.iter().map(|c| &c.name).chain(self.relations.iter().map(|r| &r.name)) {
            if !names.insert(n.as_str()) {
                return Err(LogicError::InvalidGraph(format!("node `{n}` appears twice")));
            }
        }
        for c in &self.concepts {
            for ident in c.type_name.iter().chain(&c.referent) {
                if !is_identifier(ident) {
                    return Err(LogicError::InvalidGraph(format!("`{ident}` is not a valid identifier")));
                }
            }
        }
        for r in &self.relations {
            if !is_identifier(&r.name) {
                return Err(LogicError::InvalidGraph(format!("`{}` is not a valid identifier", r.name)));
            }
            if r.args.is_empty() {
                return Err(LogicError::InvalidGraph(format!("relation `{}` has no arguments", r.name)));
            }
            for a in &r.args {
                if self.relations.iter().any(|other| other.name == *a) {
                    return Err(LogicError::HigherOrderGraph(r.name.clone()));
                }
                if !self.concepts.iter().any(|c| c.name == *a) {
                    return Err(LogicError::InvalidGraph(format!(
                        "relation `{}` refers to unknown node `{a}`",
                        r.name
                    )));
                }
            }
        }
        Ok(())
    }

    fn signature(&self) -> Result<Signature, LogicError> {
        let mut predicates: Vec<Symbol> = Vec::new();
        let mut add = |name: &str, arity: usize| match predicates.iter().find(|p| p.name == name) {
            Some(p) if p.arity != arity => {
                Err(LogicError::ArityMismatch { symbol: name.to_string(), expected: p.arity, found: arity })
            }
            Some(_) => Ok(()),
            None => {
                predicates.push(Symbol::new(name, arity));
                Ok(())
            }
        };
        for c in &self.concepts {
            if let Some(t) = &c.type_name {
                add(t, 1)?;
            }
        }
        for r in &self.relations {
            add(&r.name, r.args.len())?;
        }
        let mut constants: Vec<Symbol> = Vec::new();
        for c in &self.concepts {
            if let Some(r) = &c.referent
                && !constants.iter().any(|k| k.name == *r)
            {
                constants.push(Symbol::new(r.clone(), 0));
            }
        }
        Signature::new(predicates, constants)
    }

    /// Variable or constant standing for each concept node, by node name.
    fn terms(&self) -> BTreeMap<&str, Term> {
        let mut next = 0;
        self.concepts
            .iter()
            .map(|c| {
                let term = match &c.referent {
                    Some(r) => Term::constant(r.clone()),
                    None => {
                        next += 1;
                        Term::var(format!("v{next}"))
                    }
                };
                (c.name.as_str(), term)
            })
            .collect()
    }

    /// The structure whose elements are the graph's concepts (one per distinct
    /// referent, one per unfixed concept), witnessing satisfiability.
    pub fn canonical_model(&self) -> Result<(Signature, RelationalStructure, Interpretation), LogicError> {
        self.validate()?;
        let sig = self.signature()?;
        let element_of = |c: &ConceptNode| Element::token(c.referent.clone().unwrap_or_else(|| format!("_{}", c.name)));
        let mut domain: Vec<Element> = Vec::new();
        for c in &self.concepts {
            let e = element_of(c);
            if !domain.contains(&e) {
                domain.push(e);
            }
        }
        let by_name: BTreeMap<&str, &ConceptNode> = self.concepts.iter().map(|c| (c.name.as_str(), c)).collect();
        let mut relations: BTreeMap<String, Relation> =
            sig.predicates().iter().map(|p| (p.name.clone(), Relation::new(p.arity, []))).collect();
        for c in &self.concepts {
            if let Some(t) = &c.type_name {
                relations.get_mut(t).unwrap().tuples.insert(vec![element_of(c)]);
            }
        }
        for r in &self.relations {
            let tuple = r.args.iter().map(|a| element_of(by_name[a.as_str()])).collect();
            relations.get_mut(&r.name).unwrap().tuples.insert(tuple);
        }
        let functions = sig
            .functions()
            .iter()
            .map(|k| {
                let entries = BTreeMap::from([(Vec::new(), Element::token(k.name.clone()))]);
                (k.name.clone(), FunctionInterp::Table { arity: 0, entries })
            })
            .collect();
        let st = RelationalStructure::new(domain, relations, functions)?;
        let interp = Interpretation::identity(&sig);
        Ok((sig, st, interp))
    }
}

/// Translates a conceptual graph into its signature and existential sentence.
pub fn graph_to_sentence(g: &ConceptualGraph) -> Result<(Signature, Formula), LogicError> {
    g.validate()?;
    let sig = g.signature()?;
    let terms = g.terms();
    let mut atoms = Vec::new();
    for c in &g.concepts {
        if let Some(t) = &c.type_name {
            atoms.push(Formula::pred(t.clone(), vec![terms[c.name.as_str()].clone()]));
        }
    }
    for r in &g.relations {
        let args = r.args.iter().map(|a| terms[a.as_str()].clone()).collect();
        atoms.push(Formula::pred(r.name.clone(), args));
    }
    let body = atoms.into_iter().reduce(Formula::and).unwrap_or_else(|| {
        let t = terms[g.concepts[0].name.as_str()].clone();
        Formula::Eq(t.clone(), t)
    });
    let vars: Vec<String> = g
        .concepts
        .iter()
        .filter_map(|c| match &terms[c.name.as_str()] {
            Term::Var(v) => Some(v.clone()),
            _ => None,
        })
        .collect();
    let sentence = vars.into_iter().rev().fold(body, |acc, v| Formula::exists(v, acc));
    sig.check(&sentence)?;
    Ok((sig, sentence))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;
    use crate::modeltheory::satisfies;

    #[test]
    fn ecs_graph_shares_the_ecs_term() {
        let g = ConceptualGraph::from_json(bundled::ECS_GRAPH).unwrap();
        let (sig, s) = graph_to_sentence(&g).unwrap();
        assert!(s.is_sentence());
        assert_eq!(
            s.to_string(),
            "exists v1. exists v2. exists v3. (((System(v1) and Emission(v2)) and Engine(v3)) \
             and Controls(v1, v2)) and Provides_Calibrations(v1, v3)"
        );
        assert_eq!(sig.predicate("Controls").unwrap().arity, 2);
    }

    #[test]
    fn single_concept() {
        let g = ConceptualGraph {
            concepts: vec![ConceptNode { name: "x".into(), type_name: Some("T".into()), referent: None }],
            relations: vec![],
        };
        let (_, s) = graph_to_sentence(&g).unwrap();
        assert_eq!(s.to_string(), "exists v1. T(v1)");
    }

    #[test]
    fn referents_become_constants() {
        let g = ConceptualGraph {
            concepts: vec![
                ConceptNode { name: "a".into(), type_name: Some("Engine".into()), referent: Some("ryobi".into()) },
                ConceptNode { name: "b".into(), type_name: None, referent: None },
            ],
            relations: vec![RelationNode { name: "Feeds".into(), args: vec!["b".into(), "a".into()] }],
        };
        let (sig, s) = graph_to_sentence(&g).unwrap();
        assert_eq!(s.to_string(), "exists v1. Engine(ryobi) and Feeds(v1, ryobi)");
        assert_eq!(sig.function("ryobi").unwrap().arity, 0);
    }

    #[test]
    fn relation_over_relation_is_higher_order() {
        let g = ConceptualGraph {
            concepts: vec![ConceptNode { name: "a".into(), type_name: None, referent: None }],
            relations: vec![
                RelationNode { name: "R".into(), args: vec!["a".into()] },
                RelationNode { name: "Includes".into(), args: vec!["R".into()] },
            ],
        };
        assert_eq!(graph_to_sentence(&g), Err(LogicError::HigherOrderGraph("Includes".into())));
    }

    #[test]
    fn conflicting_arity_is_rejected() {
        let g = ConceptualGraph {
            concepts: vec![ConceptNode { name: "a".into(), type_name: None, referent: None }],
            relations: vec![
                RelationNode { name: "R".into(), args: vec!["a".into()] },
                RelationNode { name: "R2".into(), args: vec!["a".into()] },
            ],
        };
        assert!(graph_to_sentence(&g).is_ok());
        let mut bad = g.clone();
        bad.relations[1] = RelationNode { name: "S".into(), args: vec!["a".into(), "a".into()] };
        bad.relations.push(RelationNode { name: "S2".into(), args: vec![] });
        assert!(matches!(graph_to_sentence(&bad), Err(LogicError::InvalidGraph(_))));
    }

    #[test]
    fn canonical_model_satisfies_translation() {
        for json in [bundled::ECS_GRAPH, bundled::CDD_GRAPH] {
            let g = ConceptualGraph::from_json(json).unwrap();
            let (_, s) = graph_to_sentence(&g).unwrap();
            let (_, st, interp) = g.canonical_model().unwrap();
            assert!(st.domain().len() <= g.concepts.len());
            assert!(satisfies(&st, &s, &interp).unwrap());
        }
    }
}
