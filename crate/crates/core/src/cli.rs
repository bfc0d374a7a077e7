//! The `cdd` command line.
//!
//! Exit codes: 0 success, 2 invalid input, 3 infeasible seed, 4 failed
//! maximality certificate, 5 verification disagreement.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::bundled;
use crate::designspace::{DesignProblem, RankingSpec, quantify_requirement};
use crate::error::Error;
use crate::modeltheory::{ConceptualGraph, StructureDocument, Theory, check_theory, graph_to_sentence};
use crate::orthotope::{
    FaceStatus, OracleOptions, Orthotope, Ranking, Side, SolveOptions, SolveResult, endpoint_gap_in_steps,
    face_epsilons, oracle_solve, solve_greedy_with, verify_maximality,
};
use crate::rosetta::{self, Format};
use crate::surface::DesignPoint;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_INFEASIBLE_SEED: i32 = 3;
pub const EXIT_CERTIFICATE: i32 = 4;
pub const EXIT_DISAGREEMENT: i32 = 5;

/// Oracle volume must reach this fraction of the lattice box.
pub const VOLUME_AGREEMENT: f64 = 0.99;

#[derive(Debug, Parser)]
#[command(
    name = "cdd",
    version,
    about = "Constraint-driven design: maximal orthotopes over quadratic response surfaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate every surface at a design point and report constraint slacks.
    Evaluate {
        #[command(flatten)]
        problem: ProblemArg,
        /// Comma-separated coordinates.
        #[arg(long)]
        point: String,
        #[arg(long)]
        json: bool,
    },
    /// Grow a maximal orthotope around the seed and certify it.
    Solve {
        #[command(flatten)]
        problem: ProblemArg,
        /// Comma-separated permutation of variable indices.
        #[arg(long)]
        ranking: Option<String>,
        /// Replacement seed, comma-separated.
        #[arg(long)]
        seed: Option<String>,
        /// Relative face push used for certification.
        #[arg(long)]
        epsilon: Option<f64>,
        /// Result file, or a directory receiving `{problem}_solution.json`.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Check a stored result against the exact certificate and the lattice oracle.
    Verify {
        #[command(flatten)]
        problem: ProblemArg,
        /// Result JSON written by `solve`.
        result: PathBuf,
        /// Lattice points per axis for the oracle.
        #[arg(long, default_value_t = 201)]
        resolution: usize,
        /// Lattice points per axis for the max-volume search.
        #[arg(long, default_value_t = 21)]
        global_resolution: usize,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Write M, N and Q matrix reports.
    Rosetta {
        #[command(flatten)]
        problem: ProblemArg,
        /// Result JSON whose orthotope is projected into the N matrix.
        #[arg(long)]
        solution: Option<PathBuf>,
        #[arg(long, default_value_t = rosetta::DEFAULT_RESOLUTION)]
        resolution: usize,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long)]
        csv: bool,
        #[arg(long)]
        svg: bool,
    },
    /// Check a theory against a structure, or translate a conceptual graph.
    Logic(LogicArgs),
    /// Turn requirements such as `CO2 <= 30` into objective constraints.
    Quantify {
        #[command(flatten)]
        problem: ProblemArg,
        #[arg(required = true)]
        requirements: Vec<String>,
        /// Write the problem with these constraints in place of its own.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Args)]
pub struct ProblemArg {
    /// Problem JSON file, or the name of a bundled problem (`emissions`, `adas`).
    pub problem: String,
}

#[derive(Debug, Args)]
pub struct LogicArgs {
    /// Theory file, one sentence per line.
    #[arg(requires = "structure", conflicts_with = "graph")]
    pub theory: Option<PathBuf>,
    /// Structure JSON.
    pub structure: Option<PathBuf>,
    /// Conceptual graph JSON to translate.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    #[arg(long)]
    pub json: bool,
}

/// Failure carrying its exit code.
#[derive(Debug)]
struct Exit {
    code: i32,
    message: String,
}

impl From<Error> for Exit {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InfeasibleSeed(_) => EXIT_INFEASIBLE_SEED,
            _ => EXIT_INVALID,
        };
        Exit { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Exit {
    fn from(e: std::io::Error) -> Self {
        Exit { code: EXIT_INVALID, message: e.to_string() }
    }
}

fn invalid(message: impl Into<String>) -> Exit {
    Exit { code: EXIT_INVALID, message: message.into() }
}

type Outcome = std::result::Result<i32, Exit>;

/// Parses arguments, runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Outcome {
    match command {
        Command::Evaluate { problem, point, json } => cmd_evaluate(&problem.problem, &point, json, out),
        Command::Solve { problem, ranking, seed, epsilon, out: path, json } => {
            cmd_solve(&problem.problem, ranking.as_deref(), seed.as_deref(), epsilon, path.as_deref(), json, out)
        }
        Command::Verify { problem, result, resolution, global_resolution, epsilon, json } => {
            cmd_verify(&problem.problem, &result, resolution, global_resolution, epsilon, json, out)
        }
        Command::Rosetta { problem, solution, resolution, out: dir, csv, svg } => {
            cmd_rosetta(&problem.problem, solution.as_deref(), resolution, &dir, csv, svg, out)
        }
        Command::Logic(args) => cmd_logic(&args, out),
        Command::Quantify { problem, requirements, out: path, json } => {
            cmd_quantify(&problem.problem, &requirements, path.as_deref(), json, out)
        }
    }
}

fn read(path: &Path) -> std::result::Result<String, Exit> {
    std::fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))
}

/// Loads a problem file, falling back to the bundled problems by name.
pub fn load_problem(spec: &str) -> crate::error::Result<DesignProblem> {
    let path = Path::new(spec);
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or(spec);
    if path.is_file() {
        let text = std::fs::read_to_string(path)?;
        return DesignProblem::from_json(&text, stem);
    }
    match bundled::problem(spec).filter(|_| !spec.contains(['/', '\\'])) {
        Some(text) => DesignProblem::from_json(text, stem),
        None => Err(Error::Io(std::io::Error::new(std::io::ErrorKind::NotFound, format!("no problem file `{spec}`")))),
    }
}

fn parse_numbers(text: &str) -> std::result::Result<Vec<f64>, Exit> {
    text.split(',')
        .map(|s| {
            let s = s.trim();
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| invalid(format!("`{s}` is not a finite number")))
        })
        .collect()
}

fn to_json_line(value: &serde_json::Value) -> String {
    serde_json::to_string_pretty(value).expect("json values serialize")
}

fn cmd_evaluate(problem: &str, point: &str, json: bool, out: &mut dyn Write) -> Outcome {
    let p = load_problem(problem)?;
    let x = parse_numbers(point)?;
    let pf = p.region().point(&x)?;
    let values = p.surfaces().iter().map(|s| s.evaluate(&x)).collect::<crate::error::Result<Vec<_>>>()?;
    if json {
        let rows: Vec<_> = p
            .surfaces()
            .iter()
            .zip(&values)
            .enumerate()
            .map(|(i, (s, v))| {
                let slack = p.constraints().iter().position(|c| c.surface == s.name).map(|c| pf.slacks[c]);
                json!({"surface": s.name, "value": v, "bound": p.bound_for_surface(i), "slack": slack})
            })
            .collect();
        let doc = json!({"point": x, "objectives": rows, "in_ambient": pf.in_ambient, "feasible": pf.feasible});
        writeln!(out, "{}", to_json_line(&doc))?;
    } else {
        writeln!(out, "{:<12} {:>14} {:>14} {:>14}", "objective", "value", "bound", "slack")?;
        for (i, (s, v)) in p.surfaces().iter().zip(&values).enumerate() {
            let (bound, slack) = match p.bound_for_surface(i) {
                Some(c) => (c.to_string(), (c - v).to_string()),
                None => ("-".into(), "-".into()),
            };
            writeln!(out, "{:<12} {:>14} {:>14} {:>14}", s.name, v, bound, slack)?;
        }
        writeln!(out, "in ambient box: {}", yes_no(pf.in_ambient))?;
        writeln!(out, "feasible: {}", yes_no(pf.feasible))?;
    }
    Ok(EXIT_OK)
}

fn yes_no(b: bool) -> &'static str {
    if b { "yes" } else { "no" }
}

fn describe_box(p: &DesignProblem, o: &Orthotope, out: &mut dyn Write) -> std::io::Result<()> {
    for (v, iv) in p.variables().iter().zip(o.iter()) {
        let unit = if v.unit.is_empty() { String::new() } else { format!(" {}", v.unit) };
        writeln!(out, "  {:<10} [{}, {}]{unit}", v.name, iv.lo, iv.hi)?;
    }
    Ok(())
}

fn cmd_solve(
    problem: &str,
    ranking: Option<&str>,
    seed: Option<&str>,
    epsilon: Option<f64>,
    path: Option<&Path>,
    json: bool,
    out: &mut dyn Write,
) -> Outcome {
    let mut p = load_problem(problem)?;
    if let Some(s) = seed {
        p = p.with_seed(DesignPoint(parse_numbers(s)?))?;
    }
    if let Some(r) = ranking {
        p = p.with_ranking(RankingSpec::Explicit(Ranking::parse(r)?))?;
    }
    if let Some(e) = epsilon.filter(|e| !(e.is_finite() && *e > 0.0)) {
        return Err(invalid(format!("epsilon must be positive, got {e}")));
    }
    let result = solve_greedy_with(&p, &SolveOptions { ranking: None, epsilon })?;
    let text = result.to_json();
    if let Some(path) = path {
        let file = if path.is_dir() { path.join(format!("{}_solution.json", p.name())) } else { path.to_path_buf() };
        std::fs::write(&file, format!("{text}\n"))?;
    }
    if json {
        writeln!(out, "{text}")?;
    } else {
        let names: Vec<&str> = result.ranking.iter().map(|&j| p.variables()[j].name.as_str()).collect();
        writeln!(out, "problem: {}", p.name())?;
        writeln!(out, "ranking: {}", names.join(", "))?;
        writeln!(out, "orthotope:")?;
        describe_box(&p, &result.orthotope, out)?;
        for s in &result.steps {
            writeln!(out, "  step {:<10} lo stopped by {}, hi stopped by {}", s.variable, s.lo_binding, s.hi_binding)?;
        }
        writeln!(out, "maximal: {}", yes_no(result.certificate.is_maximal()))?;
    }
    if result.certificate.is_maximal() { Ok(EXIT_OK) } else { Ok(EXIT_CERTIFICATE) }
}

fn cmd_verify(
    problem: &str,
    result_path: &Path,
    resolution: usize,
    global_resolution: usize,
    epsilon: Option<f64>,
    json: bool,
    out: &mut dyn Write,
) -> Outcome {
    let p = load_problem(problem)?;
    let result = SolveResult::from_json(&read(result_path)?)?;
    let ranking = result.ranking.clone();
    if ranking.len() != p.dimension() || result.orthotope.len() != p.dimension() {
        return Err(invalid("result does not match the problem's dimension"));
    }
    // Oracle first: cap violations are input errors, not disagreements.
    let oracle = oracle_solve(
        &p,
        &OracleOptions { resolution, ranking, global_resolution: Some(global_resolution.min(resolution)) },
    )?;

    let mut problems: Vec<String> = Vec::new();
    let bx = &result.orthotope;
    if !bx.contains_point(p.seed()) {
        problems.push("orthotope does not contain the seed".into());
    }
    let eps = face_epsilons(&p, epsilon.unwrap_or(p.tolerance()));
    let mut faces = Vec::new();
    match p.region().boxed(bx) {
        Err(Error::BoxOutsideAmbient { variable }) => {
            problems.push(format!("interval on {} leaves the ambient box", p.variables()[variable].name))
        }
        Err(e) => return Err(e.into()),
        Ok(check) if !check.feasible => {
            for (c, s) in p.constraints().iter().zip(&check.slacks) {
                if *s < 0.0 {
                    problems.push(format!("orthotope violates `{c}` (slack {s})"));
                }
            }
        }
        Ok(_) => {
            let cert = verify_maximality(&p, bx, &eps)?;
            for f in cert.unblocked() {
                problems.push(format!(
                    "{} face of {} can be pushed out",
                    side_name(f.side),
                    p.variables()[f.variable].name
                ));
            }
            faces = cert.faces;
        }
    }
    let gap = endpoint_gap_in_steps(bx, &oracle.greedy_order, &oracle.steps);
    if gap > 1.0 + 1e-9 {
        problems.push(format!("greedy endpoints differ from the lattice oracle by {gap:.3} grid steps"));
    }
    let ratio = if oracle.greedy_order.volume() > 0.0 { bx.volume() / oracle.greedy_order.volume() } else { 1.0 };
    if ratio < VOLUME_AGREEMENT {
        problems.push(format!("volume is {ratio:.4} of the lattice oracle's"));
    }
    let global_volume = oracle.global.as_ref().map(Orthotope::volume);

    if json {
        let doc = json!({
            "agree": problems.is_empty(),
            "problems": problems,
            "faces": faces,
            "oracle": oracle,
            "endpoint_gap_steps": gap,
            "volume_ratio": ratio,
            "global_volume": global_volume,
            "volume": bx.volume(),
        });
        writeln!(out, "{}", to_json_line(&doc))?;
    } else {
        writeln!(out, "problem: {}", p.name())?;
        writeln!(out, "faces:")?;
        for f in &faces {
            let status = match &f.status {
                FaceStatus::Ambient => "ambient".to_string(),
                FaceStatus::Blocked { surface, .. } => format!("blocked by {surface}"),
                FaceStatus::Unblocked => "UNBLOCKED".to_string(),
            };
            writeln!(out, "  {:<10} {}: {status}", p.variables()[f.variable].name, side_name(f.side))?;
        }
        writeln!(out, "oracle ({} points per axis, refined endpoints):", oracle.resolution)?;
        describe_box(&p, &oracle.greedy_order, out)?;
        writeln!(out, "oracle on the lattice alone:")?;
        describe_box(&p, &oracle.lattice_order, out)?;
        writeln!(out, "largest endpoint gap: {gap:.3} grid steps")?;
        writeln!(out, "volume ratio to oracle: {ratio:.6}")?;
        if let Some(g) = global_volume {
            writeln!(out, "largest lattice box volume: {g} (this box: {})", bx.volume())?;
        }
        for msg in &problems {
            writeln!(out, "violation: {msg}")?;
        }
        writeln!(out, "agreement: {}", yes_no(problems.is_empty()))?;
    }
    if problems.is_empty() { Ok(EXIT_OK) } else { Ok(EXIT_DISAGREEMENT) }
}

fn side_name(side: Side) -> &'static str {
    match side {
        Side::Lo => "lower",
        Side::Hi => "upper",
    }
}

fn cmd_rosetta(
    problem: &str,
    solution: Option<&Path>,
    resolution: usize,
    dir: &Path,
    csv: bool,
    svg: bool,
    out: &mut dyn Write,
) -> Outcome {
    let p = load_problem(problem)?;
    let sol = match solution {
        Some(path) => Some(SolveResult::from_json(&read(path)?)?),
        None => None,
    };
    let report = rosetta::build_report(&p, sol.as_ref(), resolution)?;
    let formats: Vec<Format> = match (csv, svg) {
        (false, false) => vec![Format::Csv, Format::Svg],
        (c, s) => [(c, Format::Csv), (s, Format::Svg)].into_iter().filter(|x| x.0).map(|x| x.1).collect(),
    };
    for f in formats {
        for path in report.emit(f, dir)? {
            writeln!(out, "{}", path.display())?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_logic(args: &LogicArgs, out: &mut dyn Write) -> Outcome {
    if let Some(graph) = &args.graph {
        let g = ConceptualGraph::from_json(&read(graph)?).map_err(Error::from)?;
        let (sig, sentence) = graph_to_sentence(&g).map_err(Error::from)?;
        if args.json {
            let preds: Vec<_> = sig.predicates().iter().map(|s| json!({"name": s.name, "arity": s.arity})).collect();
            let consts: Vec<_> = sig.functions().iter().map(|s| s.name.clone()).collect();
            let doc = json!({"sentence": sentence.to_string(), "predicates": preds, "constants": consts});
            writeln!(out, "{}", to_json_line(&doc))?;
        } else {
            writeln!(out, "{sentence}")?;
        }
        return Ok(EXIT_OK);
    }
    let (Some(theory), Some(structure)) = (&args.theory, &args.structure) else {
        return Err(invalid("logic needs THEORY STRUCTURE or --graph FILE"));
    };
    let doc = StructureDocument::from_json(&read(structure)?).map_err(Error::from)?;
    let name = theory.file_stem().and_then(|s| s.to_str()).unwrap_or("theory");
    let t = Theory::parse(name, &read(theory)?, doc.signature.clone()).map_err(Error::from)?;
    let verdict = check_theory(&t, &doc.structure, &doc.interpretation).map_err(Error::from)?;
    if args.json {
        let rows: Vec<_> = t
            .sentences
            .iter()
            .zip(&verdict.per_sentence)
            .map(|(s, v)| json!({"sentence": s.to_string(), "holds": v}))
            .collect();
        writeln!(out, "{}", to_json_line(&json!({"sentences": rows, "model": verdict.is_model()})))?;
    } else {
        for (s, v) in t.sentences.iter().zip(&verdict.per_sentence) {
            writeln!(out, "{}  {s}", if *v { "true " } else { "false" })?;
        }
        writeln!(out, "model: {}", yes_no(verdict.is_model()))?;
    }
    Ok(EXIT_OK)
}

fn cmd_quantify(
    problem: &str,
    requirements: &[String],
    path: Option<&Path>,
    json: bool,
    out: &mut dyn Write,
) -> Outcome {
    let p = load_problem(problem)?;
    let constraints =
        requirements.iter().map(|r| quantify_requirement(r, &p)).collect::<crate::error::Result<Vec<_>>>()?;
    if let Some(path) = path {
        let updated = p.with_constraints(constraints.clone())?;
        std::fs::write(path, format!("{}\n", updated.to_json()))?;
    }
    if json {
        writeln!(out, "{}", to_json_line(&json!(constraints)))?;
    } else {
        for c in &constraints {
            writeln!(out, "{c}")?;
        }
    }
    Ok(EXIT_OK)
}
