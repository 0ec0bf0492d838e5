//! Check suites. Every check records what was computed next to what was
//! expected; inner errors become failed checks rather than aborting a suite.

use std::collections::BTreeSet;
use std::fmt::Display;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::addconst::{self, AdditiveFamily};
use crate::field::{FieldCtx, FieldElem};
use crate::multconst::{self, BadCase, FourPointType};
use crate::poly::{Mobius, Poly, ProjPoint, RatFunc};
use crate::ramify::{analyze_cover, AnalyzeOptions};
use crate::symhurwitz::{self, Permutation};
use crate::threepoint::{solve_three_point, ThreePointSpec};

pub const DEFAULT_SEED: u64 = 0x5eed_c0de;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub computed: String,
    pub expected: String,
}

impl Check {
    pub fn eq<T: Display + PartialEq>(name: impl Into<String>, computed: T, expected: T) -> Check {
        Check {
            name: name.into(),
            pass: computed == expected,
            computed: computed.to_string(),
            expected: expected.to_string(),
        }
    }

    pub fn holds(name: impl Into<String>, pass: bool, computed: impl Display, expected: impl Display) -> Check {
        Check {
            name: name.into(),
            pass,
            computed: computed.to_string(),
            expected: expected.to_string(),
        }
    }

    fn error(name: impl Into<String>, err: impl Display, expected: impl Display) -> Check {
        Check::holds(name, false, format!("error: {err}"), expected)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    #[value(name = "paper-examples")]
    WorkedExamples,
    Formulas,
    Roundtrip,
    Oracle,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bounds {
    pub primes: Vec<u64>,
    pub d_max: usize,
    pub three_point_d_max: usize,
    pub seed: u64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            primes: vec![5, 7, 11, 13],
            d_max: 8,
            three_point_d_max: 12,
            seed: DEFAULT_SEED,
        }
    }
}

pub fn run_suite(suite: Suite, b: &Bounds) -> Vec<Check> {
    let mut out = Vec::new();
    match suite {
        Suite::WorkedExamples => {
            if b.primes.contains(&5) {
                out.extend(example_b());
            }
            out.extend(example_a(&b.primes));
            out.push(match symhurwitz::hurwitz_char0(5, &[3, 2, 3, 4]) {
                Ok(c) => Check::eq("hurwitz (5; 3,2,3,4)", c.count, 8),
                Err(e) => Check::error("hurwitz (5; 3,2,3,4)", e, 8),
            });
            if b.primes.contains(&5) {
                out.extend(additive_examples());
            }
        }
        Suite::Formulas => {
            out.extend(three_point_uniqueness(b.three_point_d_max));
            out.extend(lambda_degree_sweep(&b.primes));
            out.extend(min_formula_enumeration(b.d_max));
            out.extend(bad_degree_sweep(&b.primes));
            out.extend(additive_existence(&b.primes));
        }
        Suite::Roundtrip => {
            out.extend(lift_roundtrip(&b.primes, 20, b.seed));
            out.extend(additive_roundtrips(&b.primes));
        }
        Suite::Oracle => {
            if b.primes.contains(&5) {
                out.extend(fiber_oracle());
            }
            out.extend(orbit_oracle(b.d_max.min(5)));
            out.extend(property_checks(&b.primes, b.seed));
        }
    }
    out
}

/// The checks behind acceptance criterion `n` (1 to 10).
pub fn criterion(n: usize) -> Vec<Check> {
    let all = [5, 7, 11, 13];
    match n {
        1 => three_point_uniqueness(12),
        2 => example_b(),
        3 => example_a(&all),
        4 => lambda_degree_sweep(&all),
        5 => min_formula_enumeration(8),
        6 => lift_roundtrip(&[5, 7, 11], 20, DEFAULT_SEED),
        7 => fiber_oracle(),
        8 => bad_degree_sweep(&all),
        9 => {
            let mut v = additive_examples();
            v.extend(additive_roundtrips(&[5, 7, 11]));
            v.extend(additive_existence(&[5, 7, 11]));
            v
        }
        10 => property_checks(&all, DEFAULT_SEED),
        _ => vec![Check::holds(format!("criterion {n}"), false, "unknown", "1..=10")],
    }
}

fn fp(p: u64) -> FieldCtx {
    FieldCtx::prime(p).expect("prime")
}

pub fn three_point_uniqueness(max_d: usize) -> Vec<Check> {
    let q = FieldCtx::rationals();
    ThreePointSpec::all_up_to(max_d)
        .par_iter()
        .map(|spec| {
            let name = format!("three-point {spec} over Q");
            match solve_three_point(&q, spec) {
                Ok(h) => Check::eq(name, format!("{:?}", h.indices), format!("{:?}", spec.e)),
                Err(e) => Check::error(name, e, "unique cover"),
            }
        })
        .collect()
}

pub fn example_b() -> Vec<Check> {
    let mut out = Vec::new();
    let q = FieldCtx::rationals();
    let want = RatFunc::new(
        Poly::from_i64s(&q, &[0, 0, 0, 1]),
        Poly::from_i64s(&q, &[-2, 3]),
    )
    .expect("valid");
    let spec = ThreePointSpec::new(3, 2, 2).expect("valid");
    out.push(match solve_three_point(&q, &spec) {
        Ok(h) => Check::eq("three-point (3; 3,2,2) over Q", h.cover.to_text("y"), want.to_text("y")),
        Err(e) => Check::error("three-point (3; 3,2,2) over Q", e, want.to_text("y")),
    });
    let f5 = fp(5);
    let t = FourPointType::new(5, 3, 2, 3).expect("valid");
    match multconst::lambda_map(&f5, &t) {
        Ok(lm) => {
            out.push(Check::eq("deg lambda (5; 3,2,3,4) at p=5", lm.degree, 3));
            let mu = f5.from_ratio(2, 3).expect("invertible");
            out.push(Check::eq(
                "supersingular (5; 3,2,3,4) at p=5",
                fmt_points(&lm.supersingular),
                fmt_points(&[ProjPoint::Finite(mu)]),
            ));
            out.push(Check::eq("2/3 in F_5", f5.from_ratio(2, 3).expect("invertible"), f5.from_i64(4)));
        }
        Err(e) => out.push(Check::error("lambda (5; 3,2,3,4) at p=5", e, "degree 3")),
    }
    out.push(bad_value_check(5, [3, 2, 3], 5));
    out
}

fn fmt_points(xs: &[ProjPoint]) -> String {
    let parts: Vec<String> = xs.iter().map(ToString::to_string).collect();
    format!("{{{}}}", parts.join(", "))
}

fn bad_value_check(p: u64, e: [usize; 3], want: u64) -> Check {
    let sorted = multconst::sort_for_bad_degree(p, e);
    let name = format!("bad degree {e:?} at p={p}");
    match multconst::bad_degree(p, sorted) {
        Ok(b) => Check::eq(name, b.value, want),
        Err(err) => Check::error(name, err, want),
    }
}

pub fn example_a(primes: &[u64]) -> Vec<Check> {
    let mut out = Vec::new();
    for &p in primes {
        let ctx = fp(p);
        let e = [2, 2, p as usize - 3];
        let t = match FourPointType::new(p, e[0], e[1], e[2]) {
            Ok(t) => t,
            Err(err) => {
                out.push(Check::error(format!("type {e:?} at p={p}"), err, "valid"));
                continue;
            }
        };
        match multconst::lambda_map(&ctx, &t) {
            Ok(lm) => {
                out.push(Check::eq(format!("deg lambda {t} at p={p}"), lm.degree, p as usize - 1));
                out.push(Check::eq(
                    format!("supersingular {t} at p={p}"),
                    fmt_points(&lm.supersingular),
                    "{}".to_string(),
                ));
                out.push(Check::eq(format!("deg h2 {t} at p={p}"), lm.base.cover.den().deg(), 0));
                if p == 5 {
                    let want = RatFunc::new(
                        Poly::from_i64s(&ctx, &[0, 0, 0, 1, 2]),
                        Poly::from_i64s(&ctx, &[-3, 1]),
                    )
                    .expect("valid");
                    out.push(Check::eq("lambda (4; 2,2,2,4) at p=5", lm.map.to_text("mu"), want.to_text("mu")));
                }
            }
            Err(err) => out.push(Check::error(format!("lambda {t} at p={p}"), err, "degree p-1")),
        }
        out.push(bad_value_check(p, e, 0));
    }
    out
}

pub fn lambda_degree_sweep(primes: &[u64]) -> Vec<Check> {
    let types: Vec<FourPointType> = primes
        .iter()
        .flat_map(|&p| FourPointType::admissible_types(p))
        .collect();
    types
        .par_iter()
        .map(|t| {
            let p = t.p as usize;
            let name = format!("deg lambda {t} at p={p}");
            let closed = (3 * p - 1 - t.big_e()) / 2;
            let via_tilde = p - t.e[0] + t.d_tilde() - t.e[1];
            match multconst::lambda_map(&fp(t.p), t) {
                Ok(lm) => Check::holds(
                    name,
                    lm.degree == closed && lm.degree == via_tilde,
                    lm.degree,
                    format!("{closed} = {via_tilde}"),
                ),
                Err(e) => Check::error(name, e, closed),
            }
        })
        .collect()
}

pub fn min_formula_enumeration(d_max: usize) -> Vec<Check> {
    let types: Vec<(usize, [usize; 4])> = (2..=d_max)
        .flat_map(|d| {
            symhurwitz::genus_zero_types(d, 4)
                .into_iter()
                .map(move |e| (d, [e[0], e[1], e[2], e[3]]))
        })
        .collect();
    let mut out: Vec<Check> = types
        .par_iter()
        .map(|(d, e)| {
            let name = format!("hurwitz ({d}; {},{},{},{})", e[0], e[1], e[2], e[3]);
            match symhurwitz::verify_min_formula(*d, *e) {
                Ok(c) => Check::eq(name, c.enumerated, c.formula),
                Err(err) => Check::error(name, err, "min e(d+1-e)"),
            }
        })
        .collect();
    out.push(Check::holds(
        format!("four-point genus-0 types with d <= {d_max}"),
        types.len() >= 20,
        types.len(),
        ">= 20",
    ));
    out
}

pub fn bad_degree_sweep(primes: &[u64]) -> Vec<Check> {
    let points: Vec<(u64, [usize; 3])> = primes
        .iter()
        .flat_map(|&p| multconst::bad_degree_types(p).into_iter().map(move |e| (p, e)))
        .collect();
    let mut out: Vec<Check> = points
        .par_iter()
        .flat_map_iter(|&(p, e)| {
            let name = format!("bad degree {e:?} at p={p}");
            let b = match multconst::bad_degree(p, e) {
                Ok(b) => b,
                Err(err) => return vec![Check::error(name, err, "h - h_p")],
            };
            let mut v = vec![Check::eq(name, b.value, b.h - b.h_p)];
            if b.case == BadCase::Mixed {
                let diff = b.h - b.h_p;
                let q = (b.d + 1 - p as usize) as u64;
                v.push(Check::holds(
                    format!("p | h - h_p for {e:?} at p={p}"),
                    diff % p == 0 && diff / p == q,
                    format!("{diff} = {p} * {} + {}", diff / p, diff % p),
                    format!("{p} * {q}"),
                ));
                if b.h_p != 0 && b.h != b.h_p {
                    v.push(match multconst::divisibility_check(p, e) {
                        Ok(dv) => Check::eq(format!("divisibility {e:?} at p={p}"), dv.quotient, q),
                        Err(err) => Check::error(format!("divisibility {e:?} at p={p}"), err, q),
                    });
                }
            }
            v
        })
        .collect();
    out.push(bad_value_check(5, [2, 3, 3], 5));
    out.push(bad_value_check(5, [2, 2, 2], 0));
    let sorted = multconst::sort_for_bad_degree(7, [2, 5, 5]);
    out.push(match multconst::bad_degree(7, sorted) {
        Ok(b) => Check::eq("bad degree [2, 5, 5] at p=7", format!("{} (h_p {})", b.value, b.h_p), "14 (h_p 0)".into()),
        Err(err) => Check::error("bad degree [2, 5, 5] at p=7", err, "14 (h_p 0)"),
    });
    out
}

fn shuffled_elements(ctx: &FieldCtx, seed: u64) -> Vec<FieldElem> {
    let mut xs: Vec<FieldElem> = ctx.elements().collect();
    xs.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    xs
}

/// Lift at up to `per_type` admissible `mu` in F_{p^2} per type, then contract.
pub fn lift_roundtrip(primes: &[u64], per_type: usize, seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    for &p in primes {
        let base = fp(p);
        let big = FieldCtx::extension(p, 2).expect("field");
        let types = FourPointType::admissible_types(p);
        let results: Vec<(Check, usize)> = types
            .par_iter()
            .enumerate()
            .map(|(i, t)| {
                let name = format!("lift/contract {t} at p={p}");
                let lm = match multconst::lambda_map(&base, t) {
                    Ok(lm) => lm,
                    Err(e) => return (Check::error(name, e, "round trip"), 0),
                };
                let h = lm.base.cover.lift_to(&big).expect("subfield");
                let (mut tried, mut exact) = (0, 0);
                for mu in shuffled_elements(&big, seed ^ (p << 32) ^ i as u64) {
                    if tried == per_type {
                        break;
                    }
                    let mu = ProjPoint::Finite(mu);
                    let lifted = match multconst::lift(&lm.base, &mu) {
                        Ok(l) => l,
                        Err(multconst::MultError::InvalidMu(_)) => continue,
                        Err(e) => return (Check::error(name, format!("mu = {mu}: {e}"), "round trip"), tried),
                    };
                    tried += 1;
                    let back = multconst::contract(&lifted.f, &ProjPoint::Finite(lifted.lambda), &mu);
                    if matches!(back, Ok(ref g) if g.cover == h) {
                        exact += 1;
                    }
                }
                (
                    Check::holds(name, tried > 0 && exact == tried, format!("{exact}/{tried}"), format!("{tried}/{tried}")),
                    tried,
                )
            })
            .collect();
        let total: usize = results.iter().map(|(_, n)| n).sum();
        out.extend(results.into_iter().map(|(c, _)| c));
        out.push(Check::holds(format!("valid mu sampled at p={p}"), total >= 20, total, ">= 20"));
    }
    out
}

/// `lambda(mu) = lambda0` has `h_p` admissible solutions away from the
/// critical and supersingular values, and fewer at the supersingular one.
pub fn fiber_oracle() -> Vec<Check> {
    let mut out = Vec::new();
    let f5 = fp(5);
    let f25 = FieldCtx::extension(5, 2).expect("field");
    let t = FourPointType::new(5, 3, 2, 3).expect("valid");
    let lm = match multconst::lambda_map(&f5, &t) {
        Ok(lm) => lm,
        Err(e) => return vec![Check::error("lambda (5; 3,2,3,4) at p=5", e, "degree 3")],
    };
    let ss: Vec<ProjPoint> = lm
        .supersingular
        .iter()
        .map(|x| x.lift_to(&f25).expect("subfield"))
        .collect();
    let mut generic = 0;
    for l in f25.elements().filter(|x| !x.is_zero() && !x.is_one()) {
        let pt = ProjPoint::Finite(l.clone());
        if ss.contains(&pt) || lm.is_critical_value(&l).unwrap_or(true) {
            continue;
        }
        generic += 1;
        let name = format!("fiber count at lambda={l}");
        out.push(match multconst::count_covers_at(&lm, &pt, 6) {
            Ok(n) => Check::eq(name, n, lm.degree),
            Err(e) => Check::error(name, e, lm.degree),
        });
    }
    out.push(Check::holds("generic lambda values in F_25", generic > 0, generic, "> 0"));
    let four = ProjPoint::Finite(f5.from_i64(4));
    out.push(match multconst::count_covers_at(&lm, &four, 6) {
        Ok(n) => Check::holds("fiber count at lambda=4", n == 2 && n < lm.degree, n, "2"),
        Err(e) => Check::error("fiber count at lambda=4", e, 2),
    });
    out
}

fn all_permutations(d: usize) -> Vec<Permutation> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
        if cur.len() == used.len() {
            out.push(Permutation::from_images(cur.clone()).expect("bijection"));
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; d], &mut out);
    out
}

/// Conjugacy classes of transitive tuples with product 1, counted by
/// canonical representatives.
pub fn naive_hurwitz(d: usize, cycles: &[usize]) -> u64 {
    let group = all_permutations(d);
    let classes: Vec<Vec<Permutation>> = cycles[..cycles.len() - 1]
        .iter()
        .map(|&e| symhurwitz::all_cycles(d, e))
        .collect();
    let last = *cycles.last().expect("nonempty");
    let mut seen: BTreeSet<Vec<Vec<usize>>> = BTreeSet::new();
    let mut stack: Vec<(usize, Vec<Permutation>)> = vec![(0, Vec::new())];
    while let Some((k, tuple)) = stack.pop() {
        if k < classes.len() {
            for g in &classes[k] {
                let mut t = tuple.clone();
                t.push(g.clone());
                stack.push((k + 1, t));
            }
            continue;
        }
        let prod = tuple
            .iter()
            .fold(Permutation::identity(d), |acc, g| acc.compose(g));
        let closing = prod.inverse();
        if !closing.is_single_cycle(last) {
            continue;
        }
        let mut full = tuple;
        full.push(closing);
        let refs: Vec<&Permutation> = full.iter().collect();
        if !symhurwitz::is_transitive(d, &refs) {
            continue;
        }
        let canon = group
            .iter()
            .map(|s| full.iter().map(|g| g.conjugate_by(s).images()).collect::<Vec<_>>())
            .min()
            .expect("nonempty group");
        seen.insert(canon);
    }
    seen.len() as u64
}

pub fn orbit_oracle(d_max: usize) -> Vec<Check> {
    let mut cases = Vec::new();
    for d in 2..=d_max {
        for r in 3..=4 {
            for e in symhurwitz::genus_zero_types(d, r) {
                cases.push((d, e));
            }
        }
    }
    cases
        .par_iter()
        .map(|(d, e)| {
            let name = format!("orbit count {d} {e:?}");
            let naive = naive_hurwitz(*d, e);
            match symhurwitz::hurwitz_char0(*d, e) {
                Ok(c) => Check::eq(name, c.count, naive),
                Err(err) => Check::error(name, err, naive),
            }
        })
        .collect()
}

fn random_elem(ctx: &FieldCtx, rng: &mut ChaCha8Rng) -> FieldElem {
    match ctx.order() {
        Some(q) => ctx.element_at(rng.gen_range(0..q)).expect("in range"),
        None => ctx
            .from_ratio(rng.gen_range(-50..=50), rng.gen_range(1..=30))
            .expect("nonzero denominator"),
    }
}

fn random_poly(ctx: &FieldCtx, rng: &mut ChaCha8Rng, max_deg: usize) -> Poly {
    let n = rng.gen_range(0..=max_deg + 1);
    Poly::new(ctx, (0..n).map(|_| random_elem(ctx, rng)).collect()).expect("same field")
}

fn field_axioms(a: &FieldElem, b: &FieldElem, c: &FieldElem) -> bool {
    let one = a.ctx().one();
    let inv_ok = a.is_zero() || &(a * &a.inv().expect("nonzero")) == &one;
    &(a + b) == &(b + a)
        && &(a * b) == &(b * a)
        && &(&(a + b) + c) == &(a + &(b + c))
        && &(&(a * b) * c) == &(a * &(b * c))
        && &(a * &(b + c)) == &(&(a * b) + &(a * c))
        && (a + &(-a)).is_zero()
        && &(a * &one) == a
        && inv_ok
}

fn poly_laws(f: &Poly, g: &Poly) -> bool {
    let leibniz = (f * g).derivative() == &(&f.derivative() * g) + &(f * &g.derivative());
    if f.is_zero() && g.is_zero() {
        return leibniz;
    }
    let gcd = f.gcd(g).expect("not both zero");
    let divides = |h: &Poly| h.is_zero() || h.rem(&gcd).map(|r| r.is_zero()).unwrap_or(false);
    let euclid = g.is_zero() || gcd == g.gcd(&f.rem(g).expect("nonzero")).expect("not both zero");
    leibniz && divides(f) && divides(g) && euclid
}

fn random_mobius(ctx: &FieldCtx, rng: &mut ChaCha8Rng) -> Mobius {
    loop {
        let c: Vec<FieldElem> = (0..4).map(|_| random_elem(ctx, rng)).collect();
        if let Ok(m) = Mobius::new(c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone()) {
            return m;
        }
    }
}

pub fn property_checks(primes: &[u64], seed: u64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let samples = 200;
    let mut fields = vec![FieldCtx::rationals()];
    for &p in primes {
        fields.push(fp(p));
        fields.push(FieldCtx::extension(p, 2).expect("field"));
        fields.push(FieldCtx::extension(p, 3).expect("field"));
    }
    for ctx in &fields {
        let ok = (0..samples)
            .filter(|_| {
                let (a, b, c) = (random_elem(ctx, &mut rng), random_elem(ctx, &mut rng), random_elem(ctx, &mut rng));
                field_axioms(&a, &b, &c)
            })
            .count();
        out.push(Check::eq(format!("field axioms in {ctx}"), ok, samples));
        if ctx.is_finite() {
            let ok = (0..samples)
                .filter(|_| {
                    let (a, b) = (random_elem(ctx, &mut rng), random_elem(ctx, &mut rng));
                    let fr = |x: &FieldElem| x.frobenius().expect("finite");
                    fr(&(&a + &b)) == &fr(&a) + &fr(&b) && fr(&(&a * &b)) == &fr(&a) * &fr(&b)
                })
                .count();
            out.push(Check::eq(format!("frobenius additive in {ctx}"), ok, samples));
        }
        let ok = (0..samples / 4)
            .filter(|_| {
                let (f, g) = (random_poly(ctx, &mut rng, 6), random_poly(ctx, &mut rng, 6));
                poly_laws(&f, &g)
            })
            .count();
        out.push(Check::eq(format!("gcd and derivative laws over {ctx}"), ok, samples / 4));
    }
    for &p in primes {
        let ctx = fp(p);
        let specs: Vec<ThreePointSpec> = ThreePointSpec::all_up_to(p as usize - 1)
            .into_iter()
            .filter(|s| s.d < p as usize)
            .collect();
        let mut ok = 0;
        let mut total = 0;
        for spec in specs.iter().take(12) {
            let Ok(h) = solve_three_point(&ctx, spec) else { continue };
            let opts = AnalyzeOptions {
                split_fibers: false,
                ..AnalyzeOptions::default()
            };
            let Ok(base) = analyze_cover(&h.cover, &opts) else { continue };
            total += 1;
            let (pre, post) = (random_mobius(&ctx, &mut rng), random_mobius(&ctx, &mut rng));
            let moved = h
                .cover
                .mobius(&pre, &post)
                .map_err(crate::Error::from)
                .and_then(|g| Ok(analyze_cover(&g, &opts)?));
            if let Ok(a) = moved {
                if a.ram_type.unordered() == base.ram_type.unordered() && a.branch_points.len() == base.branch_points.len() {
                    ok += 1;
                }
            }
        }
        out.push(Check::holds(format!("mobius invariance of ramification at p={p}"), total > 0 && ok == total, ok, total));
        let types = FourPointType::admissible_types(p);
        let separable = types
            .par_iter()
            .filter(|t| multconst::lambda_map(&ctx, t).map(|lm| lm.is_separable()).unwrap_or(false))
            .count();
        out.push(Check::eq(format!("lambda separable for admissible types at p={p}"), separable, types.len()));
    }
    out
}

fn family_name(f: &AdditiveFamily) -> String {
    format!("family p={} ({},{}) a={}", f.p, f.e3, f.e4, f.a)
}

pub fn additive_examples() -> Vec<Check> {
    let mut out = Vec::new();
    let f5 = fp(5);
    match addconst::construct_family(5, 2, 4) {
        Ok(fams) => {
            out.push(Check::eq("families for p=5 (2,4)", fams.len(), 1));
            let fam = &fams[0];
            out.push(Check::eq(
                "a, rho, c for p=5 (2,4)",
                format!("{}, {}, {}", fam.a, fam.rho, fam.c),
                "3, 4, 2".into(),
            ));
            out.push(merged_type_check(fam));
            match addconst::additive_twist(&fam.cover, &f5.from_i64(2)) {
                Ok(t) => {
                    out.push(Check::eq("twist lambda at c=2, p=5", t.lambda.to_string(), "3".into()));
                    out.push(split_type_check(&t.g.cover, "twist type at c=2, p=5", "(7; 7,4,3,2)"));
                }
                Err(e) => out.push(Check::error("twist at c=2, p=5", e, "lambda 3")),
            }
        }
        Err(e) => out.push(Check::error("families for p=5 (2,4)", e, 1)),
    }
    match addconst::construct_family(7, 3, 5) {
        Ok(fams) => {
            out.push(Check::eq("families for p=7 (3,5)", fams.len(), 2));
            let degs: Vec<u32> = fams.iter().map(|f| f.a.ctx().degree()).collect();
            out.push(Check::eq("field degree of a for p=7 (3,5)", format!("{degs:?}"), "[2, 2]".into()));
            if fams.len() == 2 {
                let conj = fams[0].a.frobenius().ok() == Some(fams[1].a.clone());
                out.push(Check::holds("families for p=7 (3,5) are conjugate", conj, conj, true));
            }
            for fam in &fams {
                out.push(merged_type_check(fam));
            }
        }
        Err(e) => out.push(Check::error("families for p=7 (3,5)", e, 2)),
    }
    out
}

fn merged_type_check(fam: &AdditiveFamily) -> Check {
    let name = format!("merged type of {}", family_name(fam));
    let d = fam.p as usize + 2;
    let want = format!("({d}; [{d}],[3,1,..],[{},{},1])", fam.e4, fam.e3);
    let opts = AnalyzeOptions {
        split_fibers: false,
        ..AnalyzeOptions::default()
    };
    match analyze_cover(fam.f(), &opts) {
        Ok(a) => {
            let mut classes = a.ram_type.classes.clone();
            classes.sort();
            let ok = a.branch_points.len() == 3
                && fam.cover.verify().is_ok()
                && a.index_at(&ProjPoint::Infinity) == Some(d)
                && a.index_at(&ProjPoint::Finite(fam.a.ctx().zero())) == Some(3)
                && a.index_at(&ProjPoint::Finite(fam.a.ctx().one())) == Some(fam.e3)
                && a.index_at(&ProjPoint::Finite(fam.rho.clone())) == Some(fam.e4);
            Check::holds(name, ok, a.ram_type, want)
        }
        Err(e) => Check::error(name, e, want),
    }
}

fn split_type_check(g: &RatFunc, name: &str, want: &str) -> Check {
    let opts = AnalyzeOptions {
        split_fibers: false,
        ..AnalyzeOptions::default()
    };
    match analyze_cover(g, &opts) {
        Ok(a) => Check::eq(name, a.ram_type.unordered().to_string(), want.to_string()),
        Err(e) => Check::error(name, e, want),
    }
}

/// Twist by every admissible `c` in F_p, merge back, twist again.
pub fn additive_roundtrips(primes: &[u64]) -> Vec<Check> {
    let mut out = Vec::new();
    for &p in primes {
        for e3 in 2..=(p as usize - 1) / 2 {
            let e4 = p as usize + 1 - e3;
            let Ok(fams) = addconst::construct_family(p, e3, e4) else { continue };
            for fam in &fams {
                let name = format!("merge/split round trip {}", family_name(fam));
                let (mut tried, mut exact) = (0, 0);
                let mut failure = None;
                for c in fp(p).elements() {
                    let t = match addconst::additive_twist(&fam.cover, &c) {
                        Ok(t) => t,
                        Err(addconst::AddError::ExcludedC(_)) => continue,
                        Err(e) => {
                            failure = Some(format!("c = {c}: {e}"));
                            break;
                        }
                    };
                    tried += 1;
                    let merged = addconst::merge(&t);
                    let again = merged
                        .as_ref()
                        .ok()
                        .and_then(|m| addconst::additive_twist(m, &c).ok());
                    if merged.as_ref().ok() == Some(&fam.cover) && again.as_ref() == Some(&t) {
                        exact += 1;
                    }
                }
                out.push(match failure {
                    Some(f) => Check::error(name, f, "identity"),
                    None => Check::holds(name, tried > 0 && exact == tried, format!("{exact}/{tried}"), format!("{tried}/{tried}")),
                });
            }
        }
    }
    out
}

/// At least one family for every `(p, e3)` with `2 <= e3 <= (p-1)/2`.
pub fn additive_existence(primes: &[u64]) -> Vec<Check> {
    let mut out = Vec::new();
    for &p in primes {
        for e3 in 2..=(p as usize - 1) / 2 {
            let e4 = p as usize + 1 - e3;
            let name = format!("h_p >= 1 for p={p} ({e3},{e4})");
            out.push(match addconst::construct_family(p, e3, e4) {
                Ok(f) => {
                    let hp = addconst::hp_transfer(p, f.len() as u64);
                    Check::holds(name, hp.h_p >= 1, hp, ">= 1")
                }
                Err(e) => Check::error(name, e, ">= 1"),
            });
        }
    }
    out
}

pub fn summary(checks: &[Check]) -> (usize, usize) {
    let passed = checks.iter().filter(|c| c.pass).count();
    (passed, checks.len() - passed)
}
