mod common;

use cdd_core::designspace::{RankingSpec, quantify_requirement};
use cdd_core::orthotope::{Ranking, face_epsilons, solve_greedy, verify_maximality};
use cdd_core::rosetta::build_report;
use cdd_core::surface::{Extremum, Interval};
use proptest::prelude::*;
use rand::SeedableRng;
use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;

fn permutation(rng: &mut ChaCha8Rng, n: usize) -> Ranking {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    Ranking::new(order).unwrap()
}

fn close(a: Interval, b: Interval) -> bool {
    let tol = 1e-9 * (1.0 + a.lo.abs().max(a.hi.abs()));
    (a.lo - b.lo).abs() <= tol && (a.hi - b.hi).abs() <= tol
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn relabelling_variables_relabels_the_box(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = common::random_problem(&mut rng);
        let n = p.dimension();
        let ranking = permutation(&mut rng, n);
        let p = p.with_ranking(RankingSpec::Explicit(ranking)).unwrap();
        let perm = permutation(&mut rng, n);
        let q = p.permute_variables(&perm).unwrap();
        let a = solve_greedy(&p).unwrap();
        let b = solve_greedy(&q).unwrap();
        for k in 0..n {
            prop_assert!(close(b.orthotope[k], a.orthotope[perm[k]]), "{:?} vs {:?}", b.orthotope, a.orthotope);
        }
    }

    #[test]
    fn every_ranking_yields_a_certified_box(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = common::random_problem(&mut rng);
        for _ in 0..2 {
            let r = permutation(&mut rng, p.dimension());
            let p = p.with_ranking(RankingSpec::Explicit(r.clone())).unwrap();
            let result = solve_greedy(&p).unwrap();
            prop_assert_eq!(&result.ranking, &r);
            prop_assert!(result.orthotope.contains_point(p.seed()));
            prop_assert!(p.region().is_box_feasible(&result.orthotope).unwrap());
            prop_assert!(result.certificate.is_maximal());
            let again = verify_maximality(&p, &result.orthotope, &face_epsilons(&p, 1e-6)).unwrap();
            prop_assert!(again.is_maximal());
        }
    }

    #[test]
    fn slacks_shrink_as_factors_expand(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = common::random_problem(&mut rng);
        let result = solve_greedy(&p).unwrap();
        let seed_slacks = p.region().point(p.seed()).unwrap().slacks;
        let mut previous = seed_slacks;
        for step in &result.steps {
            prop_assert!(step.after.contains_interval(&step.before));
            for (now, before) in step.slacks.iter().zip(&previous) {
                prop_assert!(*now <= *before && *now >= 0.0, "{now} after {before}");
            }
            previous = step.slacks.clone();
        }
    }

    #[test]
    fn box_maximum_grows_with_the_box(seed in any::<u64>(), shrink in 0.0f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 1 + (seed % 4) as usize;
        let s = common::random_surface(&mut rng, "z", n, 0.1);
        let outer: Vec<Interval> = (0..n).map(|j| Interval::new(-3.0 - j as f64, 4.0 + j as f64).unwrap()).collect();
        let inner: Vec<Interval> = outer
            .iter()
            .map(|iv| Interval::new(iv.lo + shrink * iv.width() / 3.0, iv.hi - shrink * iv.width() / 3.0).unwrap())
            .collect();
        let (max_in, _) = s.box_extremum(&inner, Extremum::Max).unwrap();
        let (max_out, _) = s.box_extremum(&outer, Extremum::Max).unwrap();
        let (min_in, _) = s.box_extremum(&inner, Extremum::Min).unwrap();
        let (min_out, _) = s.box_extremum(&outer, Extremum::Min).unwrap();
        prop_assert!(max_in <= max_out && min_in >= min_out);
    }

    #[test]
    fn n_matrix_marks_match_point_feasibility(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = common::random_problem(&mut rng);
        let solution = solve_greedy(&p).unwrap();
        let report = build_report(&p, Some(&solution), 7).unwrap();
        let region = p.region();
        for cell in &report.n_cells {
            for s in &cell.points {
                let mut x = p.seed().to_vec();
                x[cell.col] = s.x;
                x[cell.row] = s.y;
                prop_assert_eq!(s.feasible, region.is_point_feasible(&x).unwrap());
            }
            // corners of the projected box, other coordinates at the seed
            let (xi, yi) = cell.rectangles[0];
            for (a, b) in [(xi.lo, yi.lo), (xi.lo, yi.hi), (xi.hi, yi.lo), (xi.hi, yi.hi)] {
                let mut x = p.seed().to_vec();
                x[cell.col] = a;
                x[cell.row] = b;
                prop_assert!(region.is_point_feasible(&x).unwrap());
            }
        }
    }

    #[test]
    fn requirements_round_trip(surface in 0usize..3, bound in -1e6f64..1e6) {
        let p = cdd_core::cli::load_problem("emissions").unwrap();
        let name = &p.surfaces()[surface].name;
        let c = quantify_requirement(&format!("{name} <= {bound}"), &p).unwrap();
        prop_assert_eq!(&c.surface, name);
        prop_assert_eq!(c.bound, bound);
        prop_assert_eq!(quantify_requirement(&c.to_string(), &p).unwrap(), c);
    }
}
