//! Generators and reference evaluators shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use cdd_core::designspace::{DesignProblem, DesignVariable, ObjectiveConstraint, RankingSpec};
use cdd_core::modeltheory::{Element, Formula, FunctionInterp, Relation, RelationalStructure, Signature, Symbol, Term};
use cdd_core::surface::{DesignPoint, QuadraticResponseSurface};
use rand::Rng;

pub fn random_surface(rng: &mut impl Rng, name: &str, n: usize, zero_prob: f64) -> QuadraticResponseSurface {
    let mut coef = |scale: f64| if rng.gen_bool(zero_prob) { 0.0 } else { rng.gen_range(-scale..scale) };
    let beta0 = coef(5.0);
    let linear = (0..n).map(|_| coef(3.0)).collect();
    let quadratic = (0..n).map(|_| coef(2.0)).collect();
    QuadraticResponseSurface::new(name, "", beta0, linear, quadratic).unwrap()
}

/// A problem with 1..=3 variables, 1..=3 constrained surfaces and a seed with
/// positive slack on every constraint. Bounds are set close enough to the
/// seed value that constraints usually bind inside the ambient box.
pub fn random_problem(rng: &mut impl Rng) -> DesignProblem {
    let n = rng.gen_range(1..=3);
    let variables: Vec<DesignVariable> = (0..n)
        .map(|j| {
            let lo = rng.gen_range(-5.0..5.0);
            let w = rng.gen_range(0.5..10.0);
            DesignVariable::new(format!("x{j}"), "", lo, lo + w).unwrap()
        })
        .collect();
    let seed: Vec<f64> =
        variables.iter().map(|v| v.ambient.lo + v.ambient.width() * rng.gen_range(0.05..0.95)).collect();
    let m = rng.gen_range(1..=3);
    let surfaces: Vec<QuadraticResponseSurface> =
        (0..m).map(|i| random_surface(rng, &format!("z{i}"), n, 0.15)).collect();
    let constraints = surfaces
        .iter()
        .map(|s| {
            let spread: f64 = variables
                .iter()
                .enumerate()
                .map(|(j, v)| s.linear[j].abs() * v.ambient.width() + s.quadratic[j].abs() * v.ambient.width().powi(2))
                .sum();
            let slack = (0.01 + spread * rng.gen_range(0.0..0.3)).max(1e-3);
            ObjectiveConstraint { surface: s.name.clone(), bound: s.evaluate(&seed).unwrap() + slack }
        })
        .collect();
    DesignProblem::new("random", variables, surfaces, constraints, DesignPoint(seed), RankingSpec::Auto, 1e-6).unwrap()
}

/// Finite structure over `{P/1, R/2}` (plus constants `k0..k2`) encoded as
/// bitmasks: bit `i` of `p` is `P(e_i)`, bit `a*n + b` of `r` is `R(e_a, e_b)`.
#[derive(Debug, Clone, Copy)]
pub struct Masks {
    pub n: usize,
    pub p: u64,
    pub r: u64,
}

pub const CONSTANTS: usize = 3;

pub fn element(i: usize) -> Element {
    Element::token(format!("e{i}"))
}

pub fn signature(with_p: bool, with_r: bool, with_constants: bool) -> Signature {
    let mut preds = Vec::new();
    if with_p {
        preds.push(Symbol::new("P", 1));
    }
    if with_r {
        preds.push(Symbol::new("R", 2));
    }
    let consts =
        if with_constants { (0..CONSTANTS).map(|i| Symbol::new(format!("k{i}"), 0)).collect() } else { vec![] };
    Signature::new(preds, consts).unwrap()
}

pub fn structure(sig: &Signature, m: Masks) -> RelationalStructure {
    let domain: Vec<Element> = (0..m.n).map(element).collect();
    let mut relations = BTreeMap::new();
    if sig.predicate("P").is_some() {
        relations.insert(
            "P".to_string(),
            Relation::new(1, (0..m.n).filter(|i| m.p >> i & 1 == 1).map(|i| vec![element(i)])),
        );
    }
    if sig.predicate("R").is_some() {
        let pairs = (0..m.n * m.n).filter(|k| m.r >> k & 1 == 1).map(|k| vec![element(k / m.n), element(k % m.n)]);
        relations.insert("R".to_string(), Relation::new(2, pairs));
    }
    let mut functions = BTreeMap::new();
    for f in sig.functions() {
        let i: usize = f.name[1..].parse().unwrap();
        let entries = BTreeMap::from([(Vec::new(), element(i.min(m.n - 1)))]);
        functions.insert(f.name.clone(), FunctionInterp::Table { arity: 0, entries });
    }
    RelationalStructure::new(domain, relations, functions).unwrap()
}

/// Reference semantics over the bitmask encoding.
pub fn reference_eval(f: &Formula, m: Masks, env: &mut HashMap<String, usize>) -> bool {
    let term = |t: &Term, env: &HashMap<String, usize>| match t {
        Term::Var(v) => env[v],
        Term::App(k, args) if args.is_empty() => k[1..].parse::<usize>().unwrap().min(m.n - 1),
        other => panic!("unsupported term {other:?}"),
    };
    match f {
        Formula::Pred(name, args) if name == "P" => m.p >> term(&args[0], env) & 1 == 1,
        Formula::Pred(name, args) if name == "R" => m.r >> (term(&args[0], env) * m.n + term(&args[1], env)) & 1 == 1,
        Formula::Eq(a, b) => term(a, env) == term(b, env),
        Formula::Not(g) => !reference_eval(g, m, env),
        Formula::And(a, b) => reference_eval(a, m, env) & reference_eval(b, m, env),
        Formula::Or(a, b) => reference_eval(a, m, env) | reference_eval(b, m, env),
        Formula::Implies(a, b) => !reference_eval(a, m, env) | reference_eval(b, m, env),
        Formula::Forall(v, g) | Formula::Exists(v, g) => {
            let universal = matches!(f, Formula::Forall(..));
            let saved = env.get(v).copied();
            let mut acc = universal;
            for e in 0..m.n {
                env.insert(v.clone(), e);
                let holds = reference_eval(g, m, env);
                acc = if universal { acc & holds } else { acc | holds };
            }
            match saved {
                Some(e) => env.insert(v.clone(), e),
                None => env.remove(v),
            };
            acc
        }
        other => panic!("unsupported formula {other:?}"),
    }
}

const VARS: [&str; 3] = ["x", "y", "z"];

fn random_term(rng: &mut impl Rng, with_constants: bool) -> Term {
    if with_constants && rng.gen_bool(0.2) {
        Term::constant(format!("k{}", rng.gen_range(0..CONSTANTS)))
    } else {
        Term::var(VARS[rng.gen_range(0..VARS.len())])
    }
}

/// Random formula over the given predicates; free variables drawn from x, y, z.
pub fn random_formula(rng: &mut impl Rng, depth: u32, with_p: bool, with_r: bool, with_constants: bool) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        let mut kinds = vec![0];
        if with_p {
            kinds.push(1);
        }
        if with_r {
            kinds.push(2);
        }
        return match kinds[rng.gen_range(0..kinds.len())] {
            0 => Formula::Eq(random_term(rng, with_constants), random_term(rng, with_constants)),
            1 => Formula::pred("P", vec![random_term(rng, with_constants)]),
            _ => Formula::pred("R", vec![random_term(rng, with_constants), random_term(rng, with_constants)]),
        };
    }
    let sub = |rng: &mut _| random_formula(rng, depth - 1, with_p, with_r, with_constants);
    match rng.gen_range(0..6) {
        0 => Formula::negate(sub(rng)),
        1 => Formula::and(sub(rng), sub(rng)),
        2 => Formula::or(sub(rng), sub(rng)),
        3 => Formula::implies(sub(rng), sub(rng)),
        4 => Formula::forall(VARS[rng.gen_range(0..3)], sub(rng)),
        _ => Formula::exists(VARS[rng.gen_range(0..3)], sub(rng)),
    }
}

/// Binds every free variable with a random quantifier.
pub fn close(rng: &mut impl Rng, mut f: Formula) -> Formula {
    for v in f.free_vars() {
        f = if rng.gen_bool(0.5) { Formula::forall(v, f) } else { Formula::exists(v, f) };
    }
    f
}

/// Replaces free occurrences of `var` with `t`.
pub fn substitute(f: &Formula, var: &str, t: &Term) -> Formula {
    let st = |x: &Term| match x {
        Term::Var(v) if v == var => t.clone(),
        other => other.clone(),
    };
    match f {
        Formula::Pred(n, args) => Formula::Pred(n.clone(), args.iter().map(st).collect()),
        Formula::Eq(a, b) => Formula::Eq(st(a), st(b)),
        Formula::Cmp(op, a, b) => Formula::Cmp(*op, st(a), st(b)),
        Formula::Not(g) => Formula::negate(substitute(g, var, t)),
        Formula::And(a, b) => Formula::and(substitute(a, var, t), substitute(b, var, t)),
        Formula::Or(a, b) => Formula::or(substitute(a, var, t), substitute(b, var, t)),
        Formula::Implies(a, b) => Formula::implies(substitute(a, var, t), substitute(b, var, t)),
        Formula::Forall(v, _) | Formula::Exists(v, _) if v == var => f.clone(),
        Formula::Forall(v, g) => Formula::forall(v.clone(), substitute(g, var, t)),
        Formula::Exists(v, g) => Formula::exists(v.clone(), substitute(g, var, t)),
    }
}
