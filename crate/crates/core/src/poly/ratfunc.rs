use std::cmp::Ordering;
use std::fmt;

use super::{Poly, PolyError};
use crate::field::{FieldCtx, FieldElem, FieldError};

/// A point of the projective line.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum ProjPoint {
    Finite(FieldElem),
    Infinity,
}

impl ProjPoint {
    pub fn is_infinity(&self) -> bool {
        matches!(self, ProjPoint::Infinity)
    }

    pub fn finite(&self) -> Option<&FieldElem> {
        match self {
            ProjPoint::Finite(x) => Some(x),
            ProjPoint::Infinity => None,
        }
    }

    pub fn lift_to(&self, target: &FieldCtx) -> Result<ProjPoint, FieldError> {
        match self {
            ProjPoint::Finite(x) => Ok(ProjPoint::Finite(x.lift_to(target)?)),
            ProjPoint::Infinity => Ok(ProjPoint::Infinity),
        }
    }

    /// `inf` or an element of `ctx`.
    pub fn parse(ctx: &FieldCtx, text: &str) -> Result<ProjPoint, FieldError> {
        match text.trim() {
            "inf" | "\u{221e}" | "infinity" => Ok(ProjPoint::Infinity),
            other => Ok(ProjPoint::Finite(ctx.parse(other)?)),
        }
    }
}

impl From<FieldElem> for ProjPoint {
    fn from(x: FieldElem) -> Self {
        ProjPoint::Finite(x)
    }
}

impl PartialOrd for ProjPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Finite points in canonical order, then infinity.
impl Ord for ProjPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ProjPoint::Finite(a), ProjPoint::Finite(b)) => a.canonical_cmp(b),
            (ProjPoint::Finite(_), ProjPoint::Infinity) => Ordering::Less,
            (ProjPoint::Infinity, ProjPoint::Finite(_)) => Ordering::Greater,
            (ProjPoint::Infinity, ProjPoint::Infinity) => Ordering::Equal,
        }
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjPoint::Finite(x) => write!(f, "{x}"),
            ProjPoint::Infinity => write!(f, "inf"),
        }
    }
}

/// `num / den` in lowest terms with `den` monic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self, PolyError> {
        num.check(&den)?;
        if den.is_zero() {
            return Err(PolyError::ZeroDenominator);
        }
        if num.is_zero() {
            let one = Poly::one(den.ctx());
            return Ok(RatFunc { num, den: one });
        }
        let g = num.gcd(&den)?;
        let num = num.div_exact(&g)?;
        let den = den.div_exact(&g)?;
        let lc_inv = den.leading().expect("nonzero").inv()?;
        Ok(RatFunc {
            num: num.scale(&lc_inv),
            den: den.scale(&lc_inv),
        })
    }

    pub fn from_poly(p: Poly) -> Self {
        let one = Poly::one(p.ctx());
        RatFunc { num: p, den: one }
    }

    pub fn constant(c: FieldElem) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn identity(ctx: &FieldCtx) -> Self {
        Self::from_poly(Poly::x(ctx))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn ctx(&self) -> &FieldCtx {
        self.num.ctx()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// `max(deg num, deg den)`; errors for constants.
    pub fn map_degree(&self) -> Result<usize, PolyError> {
        if self.is_constant() {
            return Err(PolyError::ConstantMap);
        }
        Ok(self.num.deg().max(self.den.deg()))
    }

    pub fn try_add(&self, other: &RatFunc) -> Result<RatFunc, PolyError> {
        let num = self.num.try_mul(&other.den)?.try_add(&other.num.try_mul(&self.den)?)?;
        RatFunc::new(num, self.den.try_mul(&other.den)?)
    }

    pub fn try_sub(&self, other: &RatFunc) -> Result<RatFunc, PolyError> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &RatFunc) -> Result<RatFunc, PolyError> {
        RatFunc::new(self.num.try_mul(&other.num)?, self.den.try_mul(&other.den)?)
    }

    pub fn try_div(&self, other: &RatFunc) -> Result<RatFunc, PolyError> {
        if other.num.is_zero() {
            return Err(PolyError::ZeroDenominator);
        }
        RatFunc::new(self.num.try_mul(&other.den)?, self.den.try_mul(&other.num)?)
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, c: &FieldElem) -> RatFunc {
        RatFunc::new(self.num.scale(c), self.den.clone()).expect("same field")
    }

    pub fn add_constant(&self, c: &FieldElem) -> RatFunc {
        RatFunc {
            num: &self.num + &self.den.scale(c),
            den: self.den.clone(),
        }
    }

    /// `self(g)`.
    pub fn compose(&self, g: &RatFunc) -> Result<RatFunc, PolyError> {
        self.num.check(&g.num)?;
        let m = self.num.deg().max(self.den.deg());
        let mut a_pows = vec![Poly::one(self.ctx())];
        let mut b_pows = vec![Poly::one(self.ctx())];
        for i in 0..m {
            a_pows.push(&a_pows[i] * &g.num);
            b_pows.push(&b_pows[i] * &g.den);
        }
        let homogenize = |p: &Poly| {
            p.coeffs()
                .iter()
                .enumerate()
                .fold(Poly::zero(self.ctx()), |acc, (i, c)| {
                    &acc + &(&a_pows[i] * &b_pows[m - i]).scale(c)
                })
        };
        RatFunc::new(homogenize(&self.num), homogenize(&self.den))
    }

    pub fn evaluate(&self, x: &ProjPoint) -> Result<ProjPoint, PolyError> {
        match x {
            ProjPoint::Finite(v) => {
                let d = self.den.eval(v)?;
                if d.is_zero() {
                    Ok(ProjPoint::Infinity)
                } else {
                    Ok(ProjPoint::Finite(&self.num.eval(v)? / &d))
                }
            }
            ProjPoint::Infinity => {
                let (dn, dd) = (self.num.deg(), self.den.deg());
                if self.num.is_zero() {
                    return Ok(ProjPoint::Finite(self.ctx().zero()));
                }
                Ok(match dn.cmp(&dd) {
                    Ordering::Greater => ProjPoint::Infinity,
                    Ordering::Less => ProjPoint::Finite(self.ctx().zero()),
                    Ordering::Equal => ProjPoint::Finite(
                        self.num.leading().unwrap() / self.den.leading().unwrap(),
                    ),
                })
            }
        }
    }

    /// `self(1/y)`.
    pub fn invert_arg(&self) -> RatFunc {
        let m = self.num.deg().max(self.den.deg());
        RatFunc::new(self.num.reversed(m), self.den.reversed(m)).expect("nonzero denominator")
    }

    /// Order of vanishing of `self - self(x)` at `x`, i.e. the ramification index.
    pub fn ord_at(&self, x: &ProjPoint, target: &ProjPoint) -> Result<usize, PolyError> {
        if self.is_constant() {
            return Err(PolyError::ConstantMap);
        }
        let value = self.evaluate(x)?;
        if &value != target {
            return Err(PolyError::ValueMismatch {
                expected: target.to_string(),
                actual: value.to_string(),
            });
        }
        match x {
            ProjPoint::Infinity => self
                .invert_arg()
                .ord_at(&ProjPoint::Finite(self.ctx().zero()), target),
            ProjPoint::Finite(r) => match target {
                ProjPoint::Finite(t) => (&self.num - &self.den.scale(t)).valuation_at(r),
                ProjPoint::Infinity => self.den.valuation_at(r),
            },
        }
    }

    /// `post ∘ self ∘ pre`.
    pub fn mobius(&self, pre: &Mobius, post: &Mobius) -> Result<RatFunc, PolyError> {
        post.to_ratfunc().compose(&self.compose(&pre.to_ratfunc())?)
    }

    pub fn derivative(&self) -> RatFunc {
        let num = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        RatFunc::new(num, &self.den * &self.den).expect("nonzero denominator")
    }

    /// `num' den - num den'`; its roots are the finite critical points.
    pub fn wronskian(&self) -> Poly {
        &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative())
    }

    pub fn lift_to(&self, target: &FieldCtx) -> Result<RatFunc, PolyError> {
        RatFunc::new(self.num.lift_to(target)?, self.den.lift_to(target)?)
    }

    pub fn reduce_into(&self, target: &FieldCtx) -> Result<RatFunc, PolyError> {
        RatFunc::new(self.num.reduce_into(target)?, self.den.reduce_into(target)?)
    }

    pub fn to_text(&self, var: &str) -> String {
        if self.den.is_one() {
            self.num.to_text(var)
        } else {
            format!("({})/({})", self.num.to_text(var), self.den.to_text(var))
        }
    }
}

impl Poly {
    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text("y"))
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc[{}]({})", self.ctx(), self.to_text("y"))
    }
}

/// `x -> (a x + b) / (c x + d)` with `ad - bc != 0`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mobius {
    a: FieldElem,
    b: FieldElem,
    c: FieldElem,
    d: FieldElem,
}

impl Mobius {
    pub fn new(a: FieldElem, b: FieldElem, c: FieldElem, d: FieldElem) -> Result<Self, PolyError> {
        let det = (&a * &d).try_sub(&(&b * &c))?;
        if det.is_zero() {
            return Err(PolyError::SingularMobius);
        }
        Ok(Mobius { a, b, c, d })
    }

    pub fn identity(ctx: &FieldCtx) -> Self {
        Mobius {
            a: ctx.one(),
            b: ctx.zero(),
            c: ctx.zero(),
            d: ctx.one(),
        }
    }

    /// `x -> x + s`
    pub fn translation(s: &FieldElem) -> Self {
        let ctx = s.ctx();
        Mobius {
            a: ctx.one(),
            b: s.clone(),
            c: ctx.zero(),
            d: ctx.one(),
        }
    }

    /// `x -> s x`
    pub fn scaling(s: &FieldElem) -> Result<Self, PolyError> {
        let ctx = s.ctx();
        Self::new(s.clone(), ctx.zero(), ctx.zero(), ctx.one())
    }

    /// The transformation sending `0, 1, inf` to `p0, p1, pinf`.
    pub fn from_triple(
        ctx: &FieldCtx,
        p0: &ProjPoint,
        p1: &ProjPoint,
        pinf: &ProjPoint,
    ) -> Result<Self, PolyError> {
        if p0 == p1 || p0 == pinf || p1 == pinf {
            return Err(PolyError::DegeneratePoints);
        }
        let homog = |p: &ProjPoint| -> Result<(FieldElem, FieldElem), PolyError> {
            match p {
                ProjPoint::Finite(x) => {
                    if x.ctx() != ctx {
                        return Err(FieldError::MixedContexts(
                            ctx.to_string(),
                            x.ctx().to_string(),
                        )
                        .into());
                    }
                    Ok((x.clone(), ctx.one()))
                }
                ProjPoint::Infinity => Ok((ctx.one(), ctx.zero())),
            }
        };
        let (x0, y0) = homog(p0)?;
        let (x1, y1) = homog(p1)?;
        let (xi, yi) = homog(pinf)?;
        // s * pinf + t * p0 = p1, then columns are s*pinf and t*p0
        let det = &(&xi * &y0) - &(&x0 * &yi);
        let s = &(&(&x1 * &y0) - &(&x0 * &y1)) / &det;
        let t = &(&(&xi * &y1) - &(&x1 * &yi)) / &det;
        Self::new(&s * &xi, &t * &x0, &s * &yi, &t * &y0)
    }

    pub fn coefficients(&self) -> [&FieldElem; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn apply(&self, x: &ProjPoint) -> ProjPoint {
        let (u, v) = match x {
            ProjPoint::Finite(x) => (&(&self.a * x) + &self.b, &(&self.c * x) + &self.d),
            ProjPoint::Infinity => (self.a.clone(), self.c.clone()),
        };
        if v.is_zero() {
            ProjPoint::Infinity
        } else {
            ProjPoint::Finite(&u / &v)
        }
    }

    pub fn inverse(&self) -> Mobius {
        Mobius {
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
        }
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &Mobius) -> Mobius {
        Mobius {
            a: &(&self.a * &other.a) + &(&self.b * &other.c),
            b: &(&self.a * &other.b) + &(&self.b * &other.d),
            c: &(&self.c * &other.a) + &(&self.d * &other.c),
            d: &(&self.c * &other.b) + &(&self.d * &other.d),
        }
    }

    pub fn to_ratfunc(&self) -> RatFunc {
        let ctx = self.a.ctx();
        let num = Poly::from_vec(ctx, vec![self.b.clone(), self.a.clone()]);
        let den = Poly::from_vec(ctx, vec![self.d.clone(), self.c.clone()]);
        RatFunc::new(num, den).expect("nonsingular")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fin(x: FieldElem) -> ProjPoint {
        ProjPoint::Finite(x)
    }

    #[test]
    fn reduces_and_normalizes() {
        let q = FieldCtx::rationals();
        let num = Poly::from_i64s(&q, &[-2, 0, 2]);
        let den = Poly::from_i64s(&q, &[-2, 2]);
        let f = RatFunc::new(num, den).unwrap();
        assert_eq!(f.num(), &Poly::from_i64s(&q, &[1, 1]));
        assert!(f.den().is_one());
    }

    #[test]
    fn ord_at_cubic() {
        let q = FieldCtx::rationals();
        // h = 3y^2 - 2y^3
        let h = RatFunc::from_poly(Poly::from_i64s(&q, &[0, 0, 3, -2]));
        let zero = fin(q.zero());
        let one = fin(q.one());
        assert_eq!(h.ord_at(&zero, &zero).unwrap(), 2);
        assert_eq!(h.ord_at(&one, &one).unwrap(), 2);
        assert_eq!(h.ord_at(&ProjPoint::Infinity, &ProjPoint::Infinity).unwrap(), 3);
        assert!(matches!(
            h.ord_at(&one, &zero),
            Err(PolyError::ValueMismatch { .. })
        ));
    }

    #[test]
    fn ord_at_pole() {
        let f5 = FieldCtx::prime(5).unwrap();
        let f = RatFunc::new(Poly::one(&f5), Poly::from_i64s(&f5, &[-1, 1]).pow(3)).unwrap();
        assert_eq!(f.ord_at(&fin(f5.one()), &ProjPoint::Infinity).unwrap(), 3);
        assert_eq!(f.map_degree().unwrap(), 3);
    }

    #[test]
    fn from_triple_maps_points() {
        let f7 = FieldCtx::prime(7).unwrap();
        let pts = [fin(f7.from_i64(3)), ProjPoint::Infinity, fin(f7.from_i64(5))];
        let m = Mobius::from_triple(&f7, &pts[0], &pts[1], &pts[2]).unwrap();
        assert_eq!(m.apply(&fin(f7.zero())), pts[0]);
        assert_eq!(m.apply(&fin(f7.one())), pts[1]);
        assert_eq!(m.apply(&ProjPoint::Infinity), pts[2]);
        let inv = m.inverse();
        assert_eq!(inv.apply(&pts[2]), ProjPoint::Infinity);
        assert_eq!(
            Mobius::from_triple(&f7, &pts[0], &pts[0], &pts[2]).unwrap_err(),
            PolyError::DegeneratePoints
        );
    }

    #[test]
    fn compose_matches_pointwise() {
        let f11 = FieldCtx::prime(11).unwrap();
        let f = RatFunc::new(
            Poly::from_i64s(&f11, &[1, 0, 3]),
            Poly::from_i64s(&f11, &[2, 1]),
        )
        .unwrap();
        let g = RatFunc::new(
            Poly::from_i64s(&f11, &[0, 4]),
            Poly::from_i64s(&f11, &[1, 0, 1]),
        )
        .unwrap();
        let fg = f.compose(&g).unwrap();
        for x in f11.elements() {
            let p = fin(x);
            let lhs = fg.evaluate(&p).unwrap();
            let rhs = f.evaluate(&g.evaluate(&p).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn mobius_normalization_moves_points() {
        let q = FieldCtx::rationals();
        let f = RatFunc::from_poly(Poly::from_i64s(&q, &[0, 0, 1]));
        let pre = Mobius::translation(&q.from_i64(1));
        let g = f.mobius(&pre, &Mobius::identity(&q)).unwrap();
        assert_eq!(g.num(), &Poly::from_i64s(&q, &[1, 2, 1]));
    }
}
