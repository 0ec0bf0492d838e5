use proptest::prelude::*;

use tamecover::cli::json::{cover_from_json, cover_json};
use tamecover::field::{FieldCtx, FieldElem};
use tamecover::multconst::{lambda_map, FourPointType};
use tamecover::poly::{roots, Mobius, Poly, ProjPoint};
use tamecover::ramify::{analyze_cover, AnalyzeOptions};
use tamecover::symhurwitz::{hurwitz_char0, Permutation};
use tamecover::threepoint::{solve_three_point, ThreePointSpec};

fn finite_field() -> impl Strategy<Value = FieldCtx> {
    (prop::sample::select(vec![2u64, 3, 5, 7, 11, 13]), 1u32..=3)
        .prop_map(|(p, n)| FieldCtx::extension(p, n).unwrap())
}

fn elems(ctx: FieldCtx, k: usize) -> impl Strategy<Value = Vec<FieldElem>> {
    let q = ctx.order().unwrap();
    prop::collection::vec(0..q, k)
        .prop_map(move |ix| ix.into_iter().map(|i| ctx.element_at(i).unwrap()).collect())
}

fn field_and(k: usize) -> impl Strategy<Value = (FieldCtx, Vec<FieldElem>)> {
    finite_field().prop_flat_map(move |ctx| (Just(ctx.clone()), elems(ctx, k)))
}

fn rational() -> impl Strategy<Value = FieldElem> {
    (-1000i64..1000, 1i64..500).prop_map(|(a, b)| FieldCtx::rationals().from_ratio(a, b).unwrap())
}

fn poly_pair() -> impl Strategy<Value = (Poly, Poly)> {
    finite_field().prop_flat_map(|ctx| {
        let q = ctx.order().unwrap();
        let c = ctx.clone();
        (
            prop::collection::vec(0..q, 0..8),
            prop::collection::vec(0..q, 0..8),
        )
            .prop_map(move |(a, b)| {
                let mk = |v: Vec<u128>| Poly::new(&c, v.into_iter().map(|i| c.element_at(i).unwrap()).collect()).unwrap();
                (mk(a), mk(b))
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn finite_field_axioms((_ctx, v) in field_and(3)) {
        let (a, b, c) = (&v[0], &v[1], &v[2]);
        prop_assert_eq!(a + b, b + a);
        prop_assert_eq!(a * b, b * a);
        prop_assert_eq!(&(a + b) + c, a + &(b + c));
        prop_assert_eq!(&(a * b) * c, a * &(b * c));
        prop_assert_eq!(a * &(b + c), &(a * b) + &(a * c));
        prop_assert!((a - a).is_zero());
        if !a.is_zero() {
            prop_assert!((a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn rational_axioms(a in rational(), b in rational(), c in rational()) {
        prop_assert_eq!(&(a.clone() * b.clone()) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !b.is_zero() {
            prop_assert_eq!(&(&a / &b) * &b, a);
        }
    }

    #[test]
    fn frobenius_is_a_field_automorphism((ctx, v) in field_and(2)) {
        let fr = |x: &FieldElem| x.frobenius().unwrap();
        let (a, b) = (&v[0], &v[1]);
        prop_assert_eq!(fr(&(a + b)), &fr(a) + &fr(b));
        prop_assert_eq!(fr(&(a * b)), &fr(a) * &fr(b));
        let mut x = a.clone();
        for _ in 0..ctx.degree() {
            x = fr(&x);
        }
        prop_assert_eq!(&x, a);
        prop_assert_eq!(a.pow_u(ctx.order().unwrap()), a.clone());
    }

    #[test]
    fn division_gcd_and_derivative_laws((f, g) in poly_pair()) {
        prop_assert_eq!((&f * &g).derivative(), &(&f.derivative() * &g) + &(&f * &g.derivative()));
        if !g.is_zero() {
            let (q, r) = f.divmod(&g).unwrap();
            prop_assert_eq!(&(&q * &g) + &r, f.clone());
            prop_assert!(r.is_zero() || r.deg() < g.deg());
        }
        if !(f.is_zero() && g.is_zero()) {
            let d = f.gcd(&g).unwrap();
            prop_assert!(d.is_monic());
            prop_assert!(f.rem(&d).unwrap().is_zero());
            prop_assert!(g.rem(&d).unwrap().is_zero());
            prop_assert_eq!(d.clone(), g.gcd(&f).unwrap());
        }
    }

    #[test]
    fn roots_of_products_of_linear_factors((ctx, v) in field_and(4)) {
        let f = v.iter().fold(Poly::one(&ctx), |acc, r| &acc * &Poly::linear_root(r));
        let found = roots(&f, ctx.degree()).unwrap();
        let total: usize = found.iter().map(|r| r.multiplicity).sum();
        prop_assert_eq!(total, v.len());
        for r in &v {
            let m = v.iter().filter(|s| *s == r).count();
            prop_assert!(found.iter().any(|x| &x.value == r && x.multiplicity == m));
        }
    }

    #[test]
    fn permutation_group_laws(a in Just((0..5).collect::<Vec<usize>>()).prop_shuffle(),
                              b in Just((0..5).collect::<Vec<usize>>()).prop_shuffle()) {
        let (a, b) = (Permutation::from_images(a).unwrap(), Permutation::from_images(b).unwrap());
        prop_assert!(a.compose(&a.inverse()).is_identity());
        prop_assert_eq!(a.compose(&b).inverse(), b.inverse().compose(&a.inverse()));
        prop_assert_eq!(a.conjugate_by(&b).cycle_type(), a.cycle_type());
    }

    #[test]
    fn hurwitz_count_ignores_class_order(ix in 0usize..12, perm in Just(vec![0usize, 1, 2, 3]).prop_shuffle()) {
        let types: Vec<(usize, Vec<usize>)> = (3..=6)
            .flat_map(|d| tamecover::symhurwitz::genus_zero_types(d, 4).into_iter().map(move |e| (d, e)))
            .collect();
        let (d, e) = &types[ix % types.len()];
        let shuffled: Vec<usize> = perm.iter().map(|&i| e[i]).collect();
        prop_assert_eq!(hurwitz_char0(*d, e).unwrap().count, hurwitz_char0(*d, &shuffled).unwrap().count);
    }
}

fn mobius_from(c: &[FieldElem]) -> Option<Mobius> {
    Mobius::new(c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone()).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ramification_is_mobius_invariant(
        p in prop::sample::select(vec![7u64, 11, 13]),
        ix in 0usize..64,
        raw in prop::collection::vec(0u128..169, 8),
    ) {
        let ctx = FieldCtx::prime(p).unwrap();
        let specs: Vec<ThreePointSpec> = ThreePointSpec::all_up_to(6).into_iter().filter(|s| (s.d as u64) < p).collect();
        let spec = specs[ix % specs.len()];
        let h = solve_three_point(&ctx, &spec).unwrap();
        let c: Vec<FieldElem> = raw.iter().map(|&i| ctx.element_at(i % p as u128).unwrap()).collect();
        let (Some(pre), Some(post)) = (mobius_from(&c[..4]), mobius_from(&c[4..])) else {
            return Ok(());
        };
        let opts = AnalyzeOptions { split_fibers: false, ..AnalyzeOptions::default() };
        let base = analyze_cover(&h.cover, &opts).unwrap();
        let moved = analyze_cover(&h.cover.mobius(&pre, &post).unwrap(), &opts).unwrap();
        prop_assert_eq!(moved.degree, base.degree);
        prop_assert_eq!(moved.ram_type.unordered(), base.ram_type.unordered());
        let mut image: Vec<ProjPoint> = base.branch_points.iter().map(|b| post.apply(b)).collect();
        image.sort();
        prop_assert_eq!(moved.branch_points.clone(), image);
    }

    #[test]
    fn lambda_maps_are_separable(p in prop::sample::select(vec![5u64, 7, 11, 13]), ix in 0usize..1000) {
        let types = FourPointType::admissible_types(p);
        let t = types[ix % types.len()];
        let lm = lambda_map(&FieldCtx::prime(p).unwrap(), &t).unwrap();
        prop_assert!(lm.is_separable());
        prop_assert_eq!(lm.degree, (3 * p as usize - 1 - t.big_e()) / 2);
    }

    #[test]
    fn cover_json_round_trips(p in prop::sample::select(vec![0u64, 5, 7, 11]), ix in 0usize..64) {
        let ctx = if p == 0 { FieldCtx::rationals() } else { FieldCtx::prime(p).unwrap() };
        let specs: Vec<ThreePointSpec> = ThreePointSpec::all_up_to(6)
            .into_iter()
            .filter(|s| p == 0 || (s.d as u64) < p)
            .collect();
        let spec = specs[ix % specs.len()];
        let h = solve_three_point(&ctx, &spec).unwrap();
        let doc = cover_json(&h.cover, &[spec.d]);
        prop_assert_eq!(cover_from_json(&doc).unwrap(), h.cover);
    }
}
