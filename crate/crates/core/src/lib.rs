//! Constraint-driven design.
//!
//! Objective constraints `z_i <= c_i` on pure-quadratic response surfaces are
//! pulled back into the design space, where a greedy factor-ranked solver
//! inscribes a maximal axis-aligned box (an orthotope) around a feasible seed.
//! A small first-order model-theory kernel checks sentences and conceptual
//! graphs against finite structures, and the `rosetta` module lays out the
//! objective, design and sensitivity matrices as CSV and SVG reports.

pub mod cli;
pub mod designspace;
pub mod error;
pub mod modeltheory;
pub mod orthotope;
pub mod rosetta;
pub mod surface;

pub use designspace::{
    DesignProblem, DesignVariable, FeasibleRegion, ObjectiveConstraint, RankingSpec, quantify_requirement,
};
pub use error::{Error, Result};
pub use orthotope::{
    Certificate, Orthotope, Ranking, SolveOptions, SolveResult, auto_rank, expand_factor, oracle_solve, solve_greedy,
    solve_greedy_with, verify_maximality,
};
pub use surface::{DesignPoint, Extremum, Interval, QuadraticResponseSurface};

/// Case-study files shipped with the crate.
pub mod bundled {
    /// The three emissions surfaces (CO2, NOx, Soot) over normalized MAF, FRP, EGR.
    pub const EMISSIONS_SURFACES: &str = include_str!("../data/emissions_surfaces.json");
    pub const EMISSIONS: &str = include_str!("../data/emissions.json");
    pub const ADAS: &str = include_str!("../data/adas.json");
    pub const TRIANGLE_345: &str = include_str!("../data/triangle_345.json");
    pub const TRIANGLE_234: &str = include_str!("../data/triangle_234.json");
    pub const ORTHOGONALITY_THEORY: &str = include_str!("../data/orthogonality.theory");
    pub const ECS_GRAPH: &str = include_str!("../data/ecs_graph.json");
    pub const CDD_GRAPH: &str = include_str!("../data/cdd_graph.json");

    /// Bundled problem by file name or stem.
    pub fn problem(name: &str) -> Option<&'static str> {
        match name.trim_end_matches(".json") {
            "emissions" => Some(EMISSIONS),
            "adas" => Some(ADAS),
            _ => None,
        }
    }
}
