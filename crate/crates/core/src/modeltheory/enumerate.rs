//! Brute-force enumeration of finite structures.
//!
//! Structures over the canonical domain `e0 .. e{n-1}` are listed in
//! lexicographic order of their symbol encodings, taken in signature order
//! (predicates first, then functions). A predicate of arity `a` is encoded as
//! a bitmask over the `n^a` tuples in lexicographic tuple order, bit 0 being
//! the first tuple; a function is a base-`n` numeral whose digit `i` is the
//! value index at tuple `i`.

use std::collections::BTreeMap;

use super::LogicError;
use super::semantics::satisfies;
use super::structure::{Element, FunctionInterp, Interpretation, Relation, RelationalStructure};
use super::syntax::{Formula, Signature};

#[derive(Debug, Clone, Copy)]
pub struct EnumerateConfig {
    pub max_domain_size: usize,
    pub max_structures: u128,
}

impl Default for EnumerateConfig {
    fn default() -> Self {
        EnumerateConfig { max_domain_size: 4, max_structures: 1 << 22 }
    }
}

fn tuples(n: usize, arity: usize) -> Vec<Vec<usize>> {
    (0..arity).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter()
            .flat_map(|t| {
                (0..n).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect()
    })
}

/// Every structure over a domain of `domain_size` elements, in enumeration order.
pub fn all_structures(
    sig: &Signature,
    domain_size: usize,
    config: &EnumerateConfig,
) -> Result<impl Iterator<Item = RelationalStructure>, LogicError> {
    if domain_size > config.max_domain_size {
        return Err(LogicError::CapExceeded {
            what: "domain size",
            requested: domain_size as u128,
            cap: config.max_domain_size as u128,
        });
    }
    if let Some(f) = sig.functions().iter().find(|f| f.arity > 2) {
        return Err(LogicError::CapExceeded { what: "function arity", requested: f.arity as u128, cap: 2 });
    }
    let domain: Vec<Element> = (0..domain_size).map(|i| Element::token(format!("e{i}"))).collect();

    // (digit radix, number of digits) per symbol, most significant symbol first
    let mut radices = Vec::new();
    for p in sig.predicates() {
        radices.push((2u128, tuples(domain_size, p.arity)));
    }
    for f in sig.functions() {
        radices.push((domain_size as u128, tuples(domain_size, f.arity)));
    }
    let total = radices.iter().try_fold(1u128, |acc, (radix, ts)| {
        let per_symbol = radix.checked_pow(ts.len() as u32)?;
        acc.checked_mul(per_symbol)
    });
    let total = match total {
        Some(t) if t <= config.max_structures => t,
        other => {
            return Err(LogicError::CapExceeded {
                what: "structure count",
                requested: other.unwrap_or(u128::MAX),
                cap: config.max_structures,
            });
        }
    };
    let sig = sig.clone();
    Ok((0..total).map(move |index| {
        let mut rest = index;
        let mut digits_per_symbol = vec![Vec::new(); radices.len()];
        for (slot, (radix, ts)) in radices.iter().enumerate().rev() {
            let mut ds = vec![0usize; ts.len()];
            for d in ds.iter_mut() {
                *d = (rest % radix) as usize;
                rest /= radix;
            }
            digits_per_symbol[slot] = ds;
        }
        let mut relations = BTreeMap::new();
        let mut functions = BTreeMap::new();
        let n_pred = sig.predicates().len();
        for (slot, digits) in digits_per_symbol.iter().enumerate() {
            let ts = &radices[slot].1;
            let to_elems = |t: &[usize]| t.iter().map(|&i| domain[i].clone()).collect::<Vec<_>>();
            if slot < n_pred {
                let p = &sig.predicates()[slot];
                let members = ts.iter().zip(digits).filter(|(_, d)| **d == 1).map(|(t, _)| to_elems(t));
                relations.insert(p.name.clone(), Relation::new(p.arity, members));
            } else {
                let f = &sig.functions()[slot - n_pred];
                let entries = ts.iter().zip(digits).map(|(t, &d)| (to_elems(t), domain[d].clone())).collect();
                functions.insert(f.name.clone(), FunctionInterp::Table { arity: f.arity, entries });
            }
        }
        RelationalStructure::new(domain.clone(), relations, functions).expect("enumerated structures are well formed")
    }))
}

/// All structures of the given domain size that satisfy `sentence`.
pub fn enumerate_models(
    sig: &Signature,
    sentence: &Formula,
    domain_size: usize,
) -> Result<Vec<RelationalStructure>, LogicError> {
    enumerate_models_with(sig, sentence, domain_size, &EnumerateConfig::default())
}

pub fn enumerate_models_with(
    sig: &Signature,
    sentence: &Formula,
    domain_size: usize,
    config: &EnumerateConfig,
) -> Result<Vec<RelationalStructure>, LogicError> {
    sig.check(sentence)?;
    sentence.require_sentence()?;
    let interp = Interpretation::identity(sig);
    let mut models = Vec::new();
    for st in all_structures(sig, domain_size, config)? {
        if satisfies(&st, sentence, &interp)? {
            models.push(st);
        }
    }
    Ok(models)
}
