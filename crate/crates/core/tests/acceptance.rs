//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on failure.

mod common;

use std::collections::HashMap;
use std::time::{Duration, Instant};

use cdd_core::bundled;
use cdd_core::cli;
use cdd_core::designspace::{DesignProblem, RankingSpec};
use cdd_core::modeltheory::{
    Formula, Interpretation, StructureDocument, Term, Theory, check_theory, enumerate_models, parse_sentence, satisfies,
};
use cdd_core::orthotope::{
    FaceStatus, OracleOptions, Ranking, endpoint_gap_in_steps, face_epsilons, oracle_solve, solve_greedy,
    verify_maximality,
};
use cdd_core::rosetta;
use cdd_core::surface::{Extremum, Interval, QuadraticResponseSurface};
use common::{Masks, random_formula, random_problem, random_surface, reference_eval};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:?}, limit {limit:?}"))
}

const TABLE: [(&str, [f64; 7]); 3] = [
    ("CO2", [5.97, -1.21, -11.31, -0.07, 0.30, 6.27, 0.03]),
    ("NOx", [-4.01, 6.53, 2.89, -0.24, -2.37, -1.72, 0.03]),
    ("Soot", [1.22, -0.34, -0.42, -0.02, 0.27, 0.27, 0.03]),
];

fn criterion_1() -> Outcome {
    let surfaces: Vec<QuadraticResponseSurface> =
        serde_json::from_str(bundled::EMISSIONS_SURFACES).map_err(|e| e.to_string())?;
    ensure(surfaces.len() == 3, || "expected three surfaces".into())?;
    let origin = [0.0; 3];
    let start = Instant::now();
    for (s, (name, row)) in surfaces.iter().zip(TABLE) {
        ensure(s.name == name, || format!("surface order: {} vs {name}", s.name))?;
        ensure(s.beta0 == row[0] && s.linear[..] == row[1..4] && s.quadratic[..] == row[4..7], || {
            format!("{name} coefficients differ from the table")
        })?;
        let z = s.evaluate(&origin).map_err(|e| e.to_string())?;
        ensure(z == row[0], || format!("{name}(0) = {z}, expected {}", row[0]))?;
        let g = s.gradient(&origin).map_err(|e| e.to_string())?;
        ensure(g[..] == row[1..4], || format!("{name} gradient at origin {g:?}"))?;
    }
    within(start.elapsed(), Duration::from_millis(1))?;
    Ok("origin values and gradients exact".into())
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let h = 1e-4;
    let start = Instant::now();
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let n = rng.gen_range(1..=4);
        let s = random_surface(&mut rng, "z", n, 0.1);
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect();
        let g = s.gradient(&x).map_err(|e| e.to_string())?;
        for j in 0..n {
            let mut up = x.clone();
            let mut down = x.clone();
            up[j] += h;
            down[j] -= h;
            let fd = (s.evaluate(&up).unwrap() - s.evaluate(&down).unwrap()) / (2.0 * h);
            let err = (fd - g[j]).abs() / g[j].abs().max(1.0);
            worst = worst.max(err);
            ensure(err <= 1e-6, || format!("gradient {} vs difference {fd} at {x:?}", g[j]))?;
        }
    }
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("1000 pairs, worst relative error {worst:.2e}"))
}

fn random_box(rng: &mut impl Rng, n: usize) -> Vec<Interval> {
    (0..n)
        .map(|_| {
            let a = rng.gen_range(-10.0..10.0);
            let b = rng.gen_range(-10.0..10.0);
            Interval::new(f64::min(a, b), f64::max(a, b)).unwrap()
        })
        .collect()
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    const GRID: usize = 10_000;
    let start = Instant::now();
    for _ in 0..500 {
        let n = rng.gen_range(1..=4);
        let s = random_surface(&mut rng, "z", n, 0.1);
        let bx = random_box(&mut rng, n);
        let max = s.box_max(&bx).map_err(|e| e.to_string())?;
        for _ in 0..GRID {
            let x: Vec<f64> =
                bx.iter().map(|iv| if iv.width() > 0.0 { rng.gen_range(iv.lo..=iv.hi) } else { iv.lo }).collect();
            let z = s.evaluate(&x).unwrap();
            ensure(z <= max, || format!("interior value {z} exceeds box max {max}"))?;
        }
        // separable grid oracle: the best lattice value per axis, summed
        let mut grid_max = s.beta0;
        let mut allowance = 0.0;
        for (j, iv) in bx.iter().enumerate() {
            let step = iv.width() / (GRID - 1) as f64;
            let best = (0..GRID)
                .map(|k| {
                    let x = if k == GRID - 1 { iv.hi } else { iv.lo + step * k as f64 };
                    s.linear[j] * x + s.quadratic[j] * x * x
                })
                .fold(f64::NEG_INFINITY, f64::max);
            grid_max += best;
            allowance += step * step * s.quadratic[j].abs();
        }
        let roundoff = 1e-12 * (1.0 + grid_max.abs());
        ensure(max >= grid_max - roundoff && max - grid_max <= allowance + roundoff, || {
            format!("box max {max}, grid max {grid_max}, allowance {allowance}")
        })?;
        let (lo, _) = s.box_extremum(&bx, Extremum::Min).map_err(|e| e.to_string())?;
        ensure(lo <= max, || "min above max".into())?;
    }
    within(start.elapsed(), Duration::from_secs(10))?;
    Ok("500 surfaces, no interior point above the bound".into())
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let start = Instant::now();
    let mut worst_gap = 0.0f64;
    let (mut blocked, mut faces) = (0, 0);
    for i in 0..200 {
        let p = random_problem(&mut rng);
        let fail = |what: String| format!("problem {i}: {what}\n{}", p.to_json());
        let r = solve_greedy(&p).map_err(|e| fail(e.to_string()))?;
        ensure(r.orthotope.contains_point(p.seed()), || fail("seed outside".into()))?;
        ensure(p.region().is_box_feasible(&r.orthotope).unwrap(), || fail("box infeasible".into()))?;
        let cert = verify_maximality(&p, &r.orthotope, &face_epsilons(&p, 1e-6)).map_err(|e| fail(e.to_string()))?;
        ensure(cert.is_maximal(), || fail(format!("unblocked faces: {:?}", cert.unblocked().collect::<Vec<_>>())))?;
        faces += cert.faces.len();
        blocked += cert.faces.iter().filter(|f| matches!(f.status, FaceStatus::Blocked { .. })).count();
        let oracle =
            oracle_solve(&p, &OracleOptions { resolution: 201, ranking: r.ranking.clone(), global_resolution: None })
                .map_err(|e| fail(e.to_string()))?;
        let gap = endpoint_gap_in_steps(&r.orthotope, &oracle.greedy_order, &oracle.steps);
        worst_gap = worst_gap.max(gap);
        ensure(gap <= 1.0 + 1e-9, || {
            fail(format!("gap {gap} steps: greedy {:?} oracle {:?}", r.orthotope, oracle.greedy_order))
        })?;
    }
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!(
        "200 problems certified, {blocked} of {faces} faces blocked by constraints, worst oracle gap {worst_gap:.3} steps"
    ))
}

fn criterion_5() -> Outcome {
    let base = DesignProblem::from_json(bundled::ADAS, "adas").map_err(|e| e.to_string())?;
    let base =
        base.with_ranking(RankingSpec::Explicit(Ranking::new(vec![1, 0]).unwrap())).map_err(|e| e.to_string())?;
    let ambient = base.ambient();
    let mut boxes = Vec::new();
    for seed in [[1620.0, 170.0], [1800.0, 170.0]] {
        let p = base.with_seed(cdd_core::surface::DesignPoint(seed.to_vec())).map_err(|e| e.to_string())?;
        let r = solve_greedy(&p).map_err(|e| e.to_string())?;
        ensure(r.certificate.is_maximal(), || format!("seed {seed:?} not certified"))?;
        let cert = verify_maximality(&p, &r.orthotope, &face_epsilons(&p, 1e-6)).map_err(|e| e.to_string())?;
        ensure(cert.is_maximal(), || format!("seed {seed:?} fails re-verification"))?;
        boxes.push(r.orthotope);
    }
    ensure(boxes[0] != boxes[1], || "the two seeds give the same box".into())?;
    let ratio =
        |o: &cdd_core::orthotope::Orthotope| (o[1].width() / ambient[1].width()) / (o[0].width() / ambient[0].width());
    let (tall, balanced) = (ratio(&boxes[0]), ratio(&boxes[1]));
    ensure(tall >= 2.0, || format!("first box torque/speed ratio {tall}"))?;
    ensure((0.5..=2.0).contains(&balanced), || format!("second box torque/speed ratio {balanced}"))?;
    Ok(format!("normalized torque/speed ratios {tall:.2} and {balanced:.2}"))
}

fn run_cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(std::iter::once("cdd").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8_lossy(&out).into_owned(), String::from_utf8_lossy(&err).into_owned())
}

fn criterion_6() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let result = dir.path().join("solution.json");
    let result_s = result.to_str().unwrap();
    let (code, _, err) = run_cli(&["solve", "emissions", "--out", result_s]);
    ensure(code == 0, || format!("solve exited {code}: {err}"))?;
    let (code, out, err) = run_cli(&["verify", "emissions", result_s]);
    ensure(code == 0, || format!("verify exited {code}: {out}{err}"))?;

    let p = DesignProblem::from_json(bundled::EMISSIONS, "emissions").map_err(|e| e.to_string())?;
    let report = rosetta::build_report(&p, None, rosetta::DEFAULT_RESOLUTION).map_err(|e| e.to_string())?;
    let seed = p.seed();
    for (i, (name, row)) in TABLE.iter().enumerate() {
        for j in 0..3 {
            let expected = row[1 + j] + 2.0 * row[4 + j] * seed[j];
            let got = report.q_matrix[i][j];
            ensure((got - expected).abs() <= 4.0 * f64::EPSILON * expected.abs().max(1.0), || {
                format!("Q[{name}][{j}] = {got}, expected {expected}")
            })?;
        }
    }

    let mut outputs = Vec::new();
    for run in ["a", "b"] {
        let target = dir.path().join(run);
        std::fs::create_dir(&target).map_err(|e| e.to_string())?;
        let (code, _, err) =
            run_cli(&["rosetta", "emissions", "--solution", result_s, "--out", target.to_str().unwrap()]);
        ensure(code == 0, || format!("rosetta exited {code}: {err}"))?;
        let mut files: Vec<_> =
            std::fs::read_dir(&target).map_err(|e| e.to_string())?.map(|e| e.unwrap().path()).collect();
        files.sort();
        let contents: Vec<(String, Vec<u8>)> = files
            .iter()
            .map(|f| (f.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(f).unwrap()))
            .collect();
        outputs.push(contents);
    }
    ensure(outputs[0].len() == 6, || format!("expected 6 files, got {}", outputs[0].len()))?;
    ensure(outputs[0] == outputs[1], || "rosetta output differs between runs".into())?;
    Ok("solve/verify exit 0, Q exact, rosetta output reproducible".into())
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let theory_text = bundled::ORTHOGONALITY_THEORY;
    for (json, expected) in [(bundled::TRIANGLE_345, true), (bundled::TRIANGLE_234, false)] {
        let doc = StructureDocument::from_json(json).map_err(|e| e.to_string())?;
        let t = Theory::parse("orthogonality", theory_text, doc.signature.clone()).map_err(|e| e.to_string())?;
        let v = check_theory(&t, &doc.structure, &doc.interpretation).map_err(|e| e.to_string())?;
        ensure(v.is_model() == expected, || format!("triangle model check gave {}", v.is_model()))?;
    }

    // enumeration against the reference evaluator
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (with_p, with_r) in [(true, false), (false, true)] {
        let sig = common::signature(with_p, with_r, false);
        for n in 1..=3usize {
            let tuples = if with_p { n } else { n * n };
            for _ in 0..20 {
                let f = {
                    let f = random_formula(&mut rng, 4, with_p, with_r, false);
                    common::close(&mut rng, f)
                };
                let models = enumerate_models(&sig, &f, n).map_err(|e| e.to_string())?;
                let expected: Vec<u64> = (0..1u64 << tuples)
                    .filter(|&mask| {
                        let m = if with_p { Masks { n, p: mask, r: 0 } } else { Masks { n, p: 0, r: mask } };
                        reference_eval(&f, m, &mut HashMap::new())
                    })
                    .collect();
                let expected: Vec<_> = expected
                    .into_iter()
                    .map(|mask| {
                        let m = if with_p { Masks { n, p: mask, r: 0 } } else { Masks { n, p: 0, r: mask } };
                        common::structure(&sig, m)
                    })
                    .collect();
                ensure(models == expected, || format!("models of `{f}` over {n} elements disagree"))?;
            }
        }
    }

    // compositional laws on random formulas and structures
    let sig = common::signature(true, true, true);
    let interp = Interpretation::identity(&sig);
    for _ in 0..1000 {
        let n = rng.gen_range(1..=3usize);
        let m = Masks { n, p: rng.gen_range(0..1u64 << n), r: rng.gen_range(0..1u64 << (n * n)) };
        let st = common::structure(&sig, m);
        let phi = {
            let f = random_formula(&mut rng, 4, true, true, true);
            common::close(&mut rng, f)
        };
        let psi = {
            let f = random_formula(&mut rng, 3, true, true, true);
            common::close(&mut rng, f)
        };
        let sat = |f: &Formula| satisfies(&st, f, &interp).map_err(|e| format!("{f}: {e}"));
        let a = sat(&phi)?;
        ensure(a == reference_eval(&phi, m, &mut HashMap::new()), || format!("`{phi}` differs from reference"))?;
        ensure(sat(&Formula::negate(phi.clone()))? == !a, || format!("negation law fails on `{phi}`"))?;
        let b = sat(&psi)?;
        ensure(sat(&Formula::and(phi.clone(), psi.clone()))? == (a && b), || {
            format!("conjunction law fails on `{phi}`")
        })?;
        // quantifier expansion through constants naming each element
        let body = random_formula(&mut rng, 3, true, true, true);
        let body = body.free_vars().into_iter().filter(|v| v != "x").fold(body, |f, v| Formula::exists(v, f));
        let instances: Vec<bool> = (0..n)
            .map(|k| sat(&common::substitute(&body, "x", &Term::constant(format!("k{k}")))))
            .collect::<Result<_, _>>()?;
        let all = sat(&Formula::forall("x", body.clone()))?;
        let some = sat(&Formula::exists("x", body.clone()))?;
        ensure(all == instances.iter().all(|&v| v) && some == instances.iter().any(|&v| v), || {
            format!("quantifier expansion fails on `{body}`")
        })?;
    }
    let parsed = parse_sentence("forall x. P(x) or not P(x)", &sig).map_err(|e| e.to_string())?;
    ensure(sat_all(&sig, &parsed), || "excluded middle fails".into())?;
    within(start.elapsed(), Duration::from_secs(30))?;
    Ok("triangles, enumeration and 1000 compositional checks agree".into())
}

fn sat_all(sig: &cdd_core::modeltheory::Signature, f: &Formula) -> bool {
    let interp = Interpretation::identity(sig);
    (1..=3).all(|n| {
        let st = common::structure(sig, Masks { n, p: 0b101, r: 0b1001 });
        satisfies(&st, f, &interp).unwrap()
    })
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 7] = [
        ("1 table coefficients at the origin", criterion_1),
        ("2 analytic gradient", criterion_2),
        ("3 box extrema", criterion_3),
        ("4 random problems certified and match the oracle", criterion_4),
        ("5 ADAS seeds", criterion_5),
        ("6 emissions end to end", criterion_6),
        ("7 model theory", criterion_7),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {name} ({secs:.2}s): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name} ({secs:.2}s): {detail}");
            }
        }
    }
    println!("{} of 7 criteria passed", 7 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
