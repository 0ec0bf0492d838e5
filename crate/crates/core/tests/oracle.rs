use tamecover::cli::verify::naive_hurwitz;
use tamecover::field::FieldCtx;
use tamecover::multconst::{count_covers_at, lambda_map, lift, FourPointType};
use tamecover::poly::ProjPoint;
use tamecover::ramify::{analyze_cover, AnalyzeOptions};
use tamecover::symhurwitz::{genus_zero_types, hurwitz_char0, min_formula};
use tamecover::threepoint::{solve_three_point, ThreePointSpec};

#[test]
fn orbit_counts_match_enumeration_up_to_degree_five() {
    for d in 2..=5 {
        for r in 3..=4 {
            for e in genus_zero_types(d, r) {
                assert_eq!(hurwitz_char0(d, &e).unwrap().count, naive_hurwitz(d, &e), "{d} {e:?}");
            }
        }
    }
}

#[test]
fn naive_counts_agree_with_min_formula() {
    for (d, e) in [(3, [2, 2, 2, 2]), (4, [2, 2, 3, 3]), (5, [3, 2, 3, 4]), (5, [2, 2, 4, 4])] {
        assert_eq!(naive_hurwitz(d, &e), min_formula(d, e).unwrap(), "{d} {e:?}");
    }
}

#[test]
fn three_point_covers_reduce_from_q() {
    let q = FieldCtx::rationals();
    for p in [11u64, 13] {
        let fp = FieldCtx::prime(p).unwrap();
        for spec in ThreePointSpec::all_up_to(8) {
            if spec.d as u64 >= p {
                continue;
            }
            let over_q = solve_three_point(&q, &spec).unwrap();
            let direct = solve_three_point(&fp, &spec).unwrap();
            assert_eq!(over_q.cover.reduce_into(&fp).unwrap(), direct.cover, "{spec} mod {p}");
        }
    }
}

#[test]
fn split_fibers_account_for_the_whole_degree() {
    let f7 = FieldCtx::prime(7).unwrap();
    for spec in ThreePointSpec::all_up_to(6) {
        let h = solve_three_point(&f7, &spec).unwrap();
        let a = analyze_cover(&h.cover, &AnalyzeOptions::default()).unwrap();
        assert!(a.complete);
        for fiber in &a.fibers {
            let sum: usize = fiber.points.iter().map(|x| x.index).sum();
            assert!(!fiber.partial, "{spec} over {}", fiber.over);
            assert_eq!(sum, spec.d, "{spec} over {}", fiber.over);
        }
    }
}

/// Every `mu` in F_{p^2} tried directly, against root finding on the fiber.
#[test]
fn fiber_counts_match_exhaustive_lifting() {
    for (p, e) in [(5u64, [3, 2, 3]), (5, [2, 2, 2]), (7, [2, 3, 3])] {
        let fp = FieldCtx::prime(p).unwrap();
        let big = FieldCtx::extension(p, 2).unwrap();
        let t = FourPointType::new(p, e[0], e[1], e[2]).unwrap();
        let lm = lambda_map(&fp, &t).unwrap();
        let map = lm.map.lift_to(&big).unwrap();
        for l in fp.elements().filter(|x| !x.is_zero() && !x.is_one()) {
            let target = ProjPoint::Finite(l.lift_to(&big).unwrap());
            let exhaustive = big
                .elements()
                .map(ProjPoint::Finite)
                .filter(|mu| map.evaluate(mu).unwrap() == target && lift(&lm.base, mu).is_ok())
                .count();
            let counted = count_covers_at(&lm, &ProjPoint::Finite(l.clone()), 2).unwrap();
            assert_eq!(counted, exhaustive, "{t} at lambda = {l}");
        }
    }
}
