//! Roots of polynomials over finite fields (with bounded extension search)
//! and over Q.

use num::bigint::Sign;
use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};

use super::{Poly, PolyError};
use crate::field::{FieldCtx, FieldElem, FieldError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Root {
    pub value: FieldElem,
    pub multiplicity: usize,
    /// Absolute degree of the smallest searched field holding the root.
    pub degree: u32,
}

/// Roots of `f` in `F_{p^k}` for every multiple `k` of the base degree up to
/// `max_ext_degree`. Each root is reported once, in the smallest such field,
/// sorted by `(degree, value)`.
pub fn roots(f: &Poly, max_ext_degree: u32) -> Result<Vec<Root>, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let base = f.ctx().clone();
    if !base.is_finite() {
        return Err(FieldError::CharZero.into());
    }
    let p = base.characteristic();
    let n = base.degree();
    let g = f.monic();
    let total = g.deg();
    if total == 0 {
        return Ok(Vec::new());
    }
    let y = Poly::x(&base);
    let mut frob = y.rem(&g)?;
    let mut frob_level = 0u32;
    let mut level_gcds: Vec<(u32, Poly)> = Vec::new();
    let mut found_mult = 0usize;
    let mut out = Vec::new();

    let mut k = n;
    while k <= max_ext_degree && found_mult < total {
        while frob_level < k {
            frob = frob.pow_mod(p as u128, &g)?;
            frob_level += 1;
        }
        let gk = g.gcd(&(&frob - &y))?;
        let mut lower = Poly::one(&base);
        for (j, gj) in &level_gcds {
            if k % j == 0 {
                let common = lower.gcd(gj)?;
                lower = (&lower * gj).div_exact(&common)?;
            }
        }
        let new_part = gk.div_exact(&lower)?;
        level_gcds.push((k, gk));
        if new_part.deg() > 0 {
            let ctx_k = if k == n {
                base.clone()
            } else {
                FieldCtx::extension(p, k)?
            };
            let lifted = new_part.lift_to(&ctx_k)?;
            let f_k = f.lift_to(&ctx_k)?;
            for value in split_linear(&lifted)? {
                let multiplicity = f_k.valuation_at(&value)?;
                found_mult += multiplicity;
                out.push(Root {
                    value,
                    multiplicity,
                    degree: k,
                });
            }
        }
        k += n;
    }
    out.sort_by(|a, b| {
        a.degree
            .cmp(&b.degree)
            .then_with(|| a.value.canonical_cmp(&b.value))
    });
    Ok(out)
}

/// Roots lying in the field of `f` itself, with multiplicities, sorted.
pub fn roots_in_field(f: &Poly) -> Result<Vec<(FieldElem, usize)>, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let ctx = f.ctx().clone();
    if !ctx.is_finite() {
        return rational_roots(f);
    }
    let g = f.monic();
    if g.deg() == 0 {
        return Ok(Vec::new());
    }
    let y = Poly::x(&ctx);
    let mut frob = y.rem(&g)?;
    for _ in 0..ctx.degree() {
        frob = frob.pow_mod(ctx.characteristic() as u128, &g)?;
    }
    let split = g.gcd(&(&frob - &y))?;
    let mut out = Vec::new();
    for r in split_linear(&split)? {
        let m = f.valuation_at(&r)?;
        out.push((r, m));
    }
    out.sort_by(|a, b| a.0.canonical_cmp(&b.0));
    Ok(out)
}

/// Distinct roots of a monic squarefree `g` that splits into linear factors
/// over its own finite field. Deterministic Cantor-Zassenhaus.
pub(crate) fn split_linear(g: &Poly) -> Result<Vec<FieldElem>, PolyError> {
    let ctx = g.ctx().clone();
    let mut out = Vec::new();
    let mut stack = vec![g.monic()];
    let q = ctx.order().expect("finite field");
    let p = ctx.characteristic();
    while let Some(h) = stack.pop() {
        match h.deg() {
            0 => continue,
            1 => {
                out.push(-&h.coeff(0));
                continue;
            }
            _ => {}
        }
        let mut split = None;
        for index in 0..q {
            let a = ctx.element_at(index).expect("index in range");
            let probe = if p == 2 {
                trace_poly(&h, &a)?
            } else {
                let shifted = &Poly::x(&ctx) + &Poly::constant(a);
                &shifted.pow_mod((q - 1) / 2, &h)? - &Poly::one(&ctx)
            };
            let d = h.gcd(&probe)?;
            if d.deg() > 0 && d.deg() < h.deg() {
                split = Some(d);
                break;
            }
        }
        let d = split.expect("a squarefree split polynomial always separates");
        let other = h.div_exact(&d)?;
        stack.push(d);
        stack.push(other);
    }
    out.sort_by(|a, b| a.canonical_cmp(b));
    Ok(out)
}

/// `Tr(a y) mod h` for a field of characteristic 2.
fn trace_poly(h: &Poly, a: &FieldElem) -> Result<Poly, PolyError> {
    let ctx = h.ctx();
    let mut term = Poly::monomial(a.clone(), 1).rem(h)?;
    let mut acc = term.clone();
    for _ in 1..ctx.degree() {
        term = (&term * &term).rem(h)?;
        acc = &acc + &term;
    }
    Ok(acc)
}

const TRIAL_DIVISION_LIMIT: u64 = 10_000_000;

fn divisors(n: &BigInt) -> Result<Vec<BigInt>, PolyError> {
    let mut m = n
        .abs()
        .to_u128()
        .ok_or_else(|| PolyError::FactorLimit(n.to_string()))?;
    let mut factors: Vec<(u128, u32)> = Vec::new();
    let mut d: u128 = 2;
    while d * d <= m {
        if d as u64 > TRIAL_DIVISION_LIMIT {
            return Err(PolyError::FactorLimit(n.to_string()));
        }
        if m % d == 0 {
            let mut e = 0;
            while m % d == 0 {
                m /= d;
                e += 1;
            }
            factors.push((d, e));
        }
        d += 1;
    }
    if m > 1 {
        factors.push((m, 1));
    }
    let mut out = vec![BigInt::one()];
    for (prime, e) in factors {
        let mut next = Vec::new();
        for base in &out {
            let mut v = base.clone();
            for _ in 0..=e {
                next.push(v.clone());
                v *= BigInt::from(prime);
            }
        }
        out = next;
    }
    Ok(out)
}

/// Rational roots with multiplicities, sorted ascending.
pub fn rational_roots(f: &Poly) -> Result<Vec<(FieldElem, usize)>, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let ctx = f.ctx().clone();
    if ctx.is_finite() {
        return roots_in_field(f);
    }
    let g = f.gcd(&f.derivative())?;
    let mut sqfree = f.div_exact(&g)?.monic();
    let mut found = Vec::new();
    if sqfree.deg() == 0 {
        return Ok(Vec::new());
    }
    if sqfree.coeff(0).is_zero() {
        found.push(ctx.zero());
        sqfree = sqfree.div_exact(&Poly::x(&ctx))?;
    }
    if sqfree.deg() > 0 {
        let ints = primitive_integer_coeffs(&sqfree);
        let lead = ints.last().unwrap().clone();
        let constant = ints[0].clone();
        let nums = divisors(&constant)?;
        let dens = divisors(&lead)?;
        for a in &nums {
            for b in &dens {
                if !a.gcd(b).is_one() {
                    continue;
                }
                for sign in [Sign::Plus, Sign::Minus] {
                    let num = BigInt::from_biguint(sign, a.magnitude().clone());
                    let cand = &ctx.from_bigint(&num) / &ctx.from_bigint(b);
                    if sqfree.eval(&cand)?.is_zero() {
                        found.push(cand);
                    }
                }
            }
        }
    }
    found.sort_by(|a, b| a.canonical_cmp(b));
    found.dedup();
    found
        .into_iter()
        .map(|r| {
            let m = f.valuation_at(&r)?;
            Ok((r, m))
        })
        .collect()
}

/// Scale a rational polynomial to coprime integer coefficients with positive
/// leading coefficient.
pub fn primitive_integer_coeffs(f: &Poly) -> Vec<BigInt> {
    let rats: Vec<BigRational> = f
        .coeffs()
        .iter()
        .map(|c| c.as_rational().expect("rational coefficient").clone())
        .collect();
    let lcm = rats
        .iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let mut ints: Vec<BigInt> = rats
        .iter()
        .map(|r| (r * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if !content.is_zero() {
        for c in &mut ints {
            *c = &*c / &content;
        }
    }
    if ints.last().is_some_and(|c| c.is_negative()) {
        for c in &mut ints {
            *c = -&*c;
        }
    }
    ints
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_in_prime_field_with_multiplicity() {
        let f5 = FieldCtx::prime(5).unwrap();
        // (y-1)^2 (y-3)
        let f = &Poly::from_i64s(&f5, &[-1, 1]).pow(2) * &Poly::from_i64s(&f5, &[-3, 1]);
        let rs = roots_in_field(&f).unwrap();
        assert_eq!(rs, vec![(f5.from_i64(1), 2), (f5.from_i64(3), 1)]);
    }

    #[test]
    fn roots_in_extensions() {
        let f5 = FieldCtx::prime(5).unwrap();
        // y^2 - 2 is irreducible over F_5
        let f = &Poly::from_i64s(&f5, &[-2, 0, 1]) * &Poly::from_i64s(&f5, &[-4, 1]);
        let rs = roots(&f, 6).unwrap();
        assert_eq!(rs.len(), 3);
        assert_eq!(rs[0].degree, 1);
        assert_eq!(rs[1].degree, 2);
        let f25 = FieldCtx::extension(5, 2).unwrap();
        for r in &rs[1..] {
            assert_eq!(r.value.ctx(), &f25);
            assert_eq!(&r.value * &r.value, f25.from_i64(2));
        }
        // capped search misses the conjugate pair
        assert_eq!(roots(&f, 1).unwrap().len(), 1);
    }

    #[test]
    fn roots_of_cubic_need_degree_three() {
        let f2 = FieldCtx::prime(2).unwrap();
        let f = Poly::from_i64s(&f2, &[1, 1, 0, 1]);
        let rs = roots(&f, 6).unwrap();
        assert_eq!(rs.len(), 3);
        assert!(rs.iter().all(|r| r.degree == 3 && r.multiplicity == 1));
    }

    #[test]
    fn inseparable_multiplicity() {
        let f3 = FieldCtx::prime(3).unwrap();
        // y^3 - 1 = (y - 1)^3
        let f = Poly::from_i64s(&f3, &[-1, 0, 0, 1]);
        let rs = roots(&f, 4).unwrap();
        assert_eq!(rs.len(), 1);
        assert_eq!(rs[0].multiplicity, 3);
    }

    #[test]
    fn characteristic_two_splitting() {
        let f4 = FieldCtx::extension(2, 2).unwrap();
        let f = Poly::from_i64s(&f4, &[0, -1, 0, 0, 1]);
        let rs = roots_in_field(&f).unwrap();
        assert_eq!(rs.len(), 4);
        assert_eq!(
            rs.iter().map(|(r, _)| r.clone()).collect::<Vec<_>>(),
            f4.elements().collect::<Vec<_>>()
        );
    }

    #[test]
    fn rational_roots_of_integer_polynomial() {
        let q = FieldCtx::rationals();
        // (2y - 3)(y + 1)^2 y
        let f = &(&Poly::from_i64s(&q, &[-3, 2]) * &Poly::from_i64s(&q, &[1, 1]).pow(2))
            * &Poly::x(&q);
        let rs = rational_roots(&f).unwrap();
        assert_eq!(
            rs,
            vec![
                (q.from_i64(-1), 2),
                (q.zero(), 1),
                (q.from_ratio(3, 2).unwrap(), 1)
            ]
        );
        let irreducible = Poly::from_i64s(&q, &[-2, 0, 1]);
        assert!(rational_roots(&irreducible).unwrap().is_empty());
    }
}
