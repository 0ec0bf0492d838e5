use tamecover::addconst::{self, AddError};
use tamecover::field::FieldCtx;
use tamecover::multconst::{self, MultError, MuExclusion};
use tamecover::poly::{Mobius, ProjPoint};
use tamecover::ramify::{normalize_cover, RamifyError};
use tamecover::threepoint::{solve_three_point, ThreePointSpec};

fn fin(x: tamecover::field::FieldElem) -> ProjPoint {
    ProjPoint::Finite(x)
}

#[test]
fn normalizing_a_moved_cover_recovers_it() {
    let f11 = FieldCtx::prime(11).unwrap();
    let h = solve_three_point(&f11, &ThreePointSpec::new(3, 2, 4).unwrap()).unwrap();
    let src = [fin(f11.from_i64(2)), fin(f11.from_i64(5)), fin(f11.from_i64(7))];
    let tgt = [fin(f11.from_i64(3)), ProjPoint::Infinity, fin(f11.from_i64(9))];
    let pre = Mobius::from_triple(&f11, &src[0], &src[1], &src[2]).unwrap().inverse();
    let post = Mobius::from_triple(&f11, &tgt[0], &tgt[1], &tgt[2]).unwrap();
    let moved = h.cover.mobius(&pre, &post).unwrap();
    let back = normalize_cover(&moved, [&src[0], &src[1], &src[2]], [&tgt[0], &tgt[1], &tgt[2]]).unwrap();
    assert_eq!(back, h);
}

#[test]
fn normalization_rejects_bad_triples() {
    let f11 = FieldCtx::prime(11).unwrap();
    let h = solve_three_point(&f11, &ThreePointSpec::new(3, 2, 2).unwrap()).unwrap();
    let (z, o) = (fin(f11.zero()), fin(f11.one()));
    let inf = ProjPoint::Infinity;
    assert!(matches!(
        normalize_cover(&h.cover, [&z, &z, &inf], [&z, &z, &inf]),
        Err(RamifyError::DegenerateTriple)
    ));
    assert!(matches!(
        normalize_cover(&h.cover, [&z, &o, &inf], [&o, &z, &inf]),
        Err(RamifyError::MappingMismatch { .. })
    ));
}

#[test]
fn lift_rejects_excluded_points() {
    let f7 = FieldCtx::prime(7).unwrap();
    let t = multconst::FourPointType::new(7, 3, 2, 5).unwrap();
    let lm = multconst::lambda_map(&f7, &t).unwrap();
    for (mu, why) in [
        (fin(f7.zero()), MuExclusion::Zero),
        (fin(f7.one()), MuExclusion::One),
        (ProjPoint::Infinity, MuExclusion::Infinity),
    ] {
        match multconst::lift(&lm.base, &mu) {
            Err(MultError::InvalidMu(got)) => assert_eq!(got, why),
            other => panic!("{mu}: {other:?}"),
        }
    }
}

#[test]
fn inadmissible_types_have_no_covers() {
    let f7 = FieldCtx::prime(7).unwrap();
    let t = multconst::FourPointType::new(7, 2, 5, 5).unwrap();
    assert!(matches!(t.admissible(), Err(MultError::NoCovers { .. })));
    assert_eq!(multconst::p_hurwitz_4pt(&t), 0);
    assert!(multconst::lambda_map(&f7, &t).is_err());
}

#[test]
fn every_small_additive_family_verifies() {
    for p in [5u64, 7, 11, 13] {
        for e3 in 2..=(p as usize - 1) / 2 {
            let e4 = p as usize + 1 - e3;
            let fams = addconst::construct_family(p, e3, e4).unwrap();
            assert!(!fams.is_empty() && fams.len() <= 2, "p={p} e3={e3}");
            for f in &fams {
                f.check_invariants().unwrap();
                f.cover.verify().unwrap();
            }
        }
    }
}

#[test]
fn merging_c_inverts_the_twist() {
    let fam = &addconst::construct_family(7, 2, 6).unwrap()[0];
    let ctx = fam.a.ctx().clone();
    let c = ctx.from_i64(3);
    let t = addconst::additive_twist(&fam.cover, &c).unwrap();
    let c_back = addconst::find_merging_c(&t.g.cover, &ctx.one(), &fam.rho).unwrap();
    let expected = &(-&c) / &(&c + &ctx.one());
    assert_eq!(c_back, expected);
    assert_eq!(addconst::merge(&t).unwrap(), fam.cover);
    assert!(matches!(
        addconst::find_merging_c(&t.g.cover, &ctx.one(), &ctx.one()),
        Err(AddError::InvalidParameters(_))
    ));
}
