//! Univariate polynomials and reduced rational functions over a [`FieldCtx`].

mod ratfunc;
pub mod roots;

pub use ratfunc::{Mobius, ProjPoint, RatFunc};
pub use roots::{primitive_integer_coeffs, rational_roots, roots, roots_in_field, Root};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::field::{FieldCtx, FieldElem, FieldError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("division is not exact")]
    Inexact,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("map sends the point to {actual}, not {expected}")]
    ValueMismatch { expected: String, actual: String },
    #[error("constant map")]
    ConstantMap,
    #[error("singular Mobius transformation")]
    SingularMobius,
    #[error("points are not pairwise distinct")]
    DegeneratePoints,
    #[error("the zero polynomial")]
    ZeroPolynomial,
    #[error("cannot parse polynomial {0:?}")]
    Parse(String),
    #[error("integer too large for rational root search: {0}")]
    FactorLimit(String),
}

impl PolyError {
    pub fn code(&self) -> &'static str {
        match self {
            PolyError::Field(e) => e.code(),
            PolyError::DivisionByZero => "DivisionByZero",
            PolyError::Inexact => "InexactDivision",
            PolyError::ZeroDenominator => "ZeroDenominator",
            PolyError::ValueMismatch { .. } => "ValueMismatch",
            PolyError::ConstantMap => "ConstantMap",
            PolyError::SingularMobius => "SingularMobius",
            PolyError::DegeneratePoints => "DegeneratePoints",
            PolyError::ZeroPolynomial => "ZeroPolynomial",
            PolyError::Parse(_) => "ParseError",
            PolyError::FactorLimit(_) => "FactorLimit",
        }
    }
}

/// Dense polynomial, ascending coefficients, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    ctx: FieldCtx,
    coeffs: Vec<FieldElem>,
}

impl Poly {
    pub fn new(ctx: &FieldCtx, coeffs: Vec<FieldElem>) -> Result<Self, PolyError> {
        if let Some(bad) = coeffs.iter().find(|c| c.ctx() != ctx) {
            return Err(FieldError::MixedContexts(ctx.to_string(), bad.ctx().to_string()).into());
        }
        Ok(Self::from_vec(ctx, coeffs))
    }

    fn from_vec(ctx: &FieldCtx, mut coeffs: Vec<FieldElem>) -> Self {
        while coeffs.last().is_some_and(FieldElem::is_zero) {
            coeffs.pop();
        }
        Poly {
            ctx: ctx.clone(),
            coeffs,
        }
    }

    pub fn zero(ctx: &FieldCtx) -> Self {
        Poly {
            ctx: ctx.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn one(ctx: &FieldCtx) -> Self {
        Self::constant(ctx.one())
    }

    pub fn constant(c: FieldElem) -> Self {
        let ctx = c.ctx().clone();
        Self::from_vec(&ctx, vec![c])
    }

    /// The variable `y`.
    pub fn x(ctx: &FieldCtx) -> Self {
        Self::monomial(ctx.one(), 1)
    }

    pub fn monomial(c: FieldElem, k: usize) -> Self {
        let ctx = c.ctx().clone();
        let mut coeffs = vec![ctx.zero(); k];
        coeffs.push(c);
        Self::from_vec(&ctx, coeffs)
    }

    /// `y - r`
    pub fn linear_root(r: &FieldElem) -> Self {
        let ctx = r.ctx().clone();
        Self::from_vec(&ctx, vec![-r, ctx.one()])
    }

    pub fn from_i64s(ctx: &FieldCtx, coeffs: &[i64]) -> Self {
        Self::from_vec(ctx, coeffs.iter().map(|&c| ctx.from_i64(c)).collect())
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.ctx.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial counted as 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> Option<&FieldElem> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(FieldElem::is_one)
    }

    fn check(&self, other: &Poly) -> Result<(), PolyError> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(FieldError::MixedContexts(self.ctx.to_string(), other.ctx.to_string()).into())
        }
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect();
        Ok(Self::from_vec(&self.ctx, coeffs))
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| &self.coeff(i) - &other.coeff(i)).collect();
        Ok(Self::from_vec(&self.ctx, coeffs))
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.ctx));
        }
        let mut out = vec![self.ctx.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Ok(Self::from_vec(&self.ctx, out))
    }

    pub fn scale(&self, c: &FieldElem) -> Poly {
        Self::from_vec(&self.ctx, self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiply by `y^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.ctx.zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::from_vec(&self.ctx, coeffs)
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Self::one(&self.ctx);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn divmod(&self, divisor: &Poly) -> Result<(Poly, Poly), PolyError> {
        self.check(divisor)?;
        let lead = divisor.leading().ok_or(PolyError::DivisionByZero)?;
        let lead_inv = lead.inv()?;
        let db = divisor.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        if r.len() <= db {
            return Ok((Self::zero(&self.ctx), self.clone()));
        }
        let mut q = vec![self.ctx.zero(); r.len() - db];
        for shift in (0..q.len()).rev() {
            let c = &r[shift + db] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, b) in divisor.coeffs.iter().enumerate() {
                r[shift + j] = &r[shift + j] - &(&c * b);
            }
            q[shift] = c;
        }
        r.truncate(db);
        Ok((Self::from_vec(&self.ctx, q), Self::from_vec(&self.ctx, r)))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly, PolyError> {
        Ok(self.divmod(divisor)?.1)
    }

    pub fn div_exact(&self, divisor: &Poly) -> Result<Poly, PolyError> {
        let (q, r) = self.divmod(divisor)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(PolyError::Inexact)
        }
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some(lc) => self.scale(&lc.inv().expect("nonzero leading coefficient")),
        }
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check(other)?;
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// Formal derivative (so `d/dy y^p = 0` in characteristic p).
    pub fn derivative(&self) -> Poly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * &self.ctx.from_i64(i as i64))
            .collect();
        Self::from_vec(&self.ctx, coeffs)
    }

    pub fn eval(&self, x: &FieldElem) -> Result<FieldElem, PolyError> {
        if x.ctx() != &self.ctx {
            return Err(FieldError::MixedContexts(self.ctx.to_string(), x.ctx().to_string()).into());
        }
        Ok(self
            .coeffs
            .iter()
            .rev()
            .fold(self.ctx.zero(), |acc, c| &(&acc * x) + c))
    }

    /// Multiplicity of `r` as a root (0 when `r` is not a root).
    pub fn valuation_at(&self, r: &FieldElem) -> Result<usize, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        if r.ctx() != &self.ctx {
            return Err(FieldError::MixedContexts(self.ctx.to_string(), r.ctx().to_string()).into());
        }
        let mut count = 0;
        let mut cur = self.coeffs.clone();
        loop {
            // synthetic division by (y - r)
            let n = cur.len();
            if n <= 1 {
                return Ok(count);
            }
            let mut quotient = vec![self.ctx.zero(); n - 1];
            let mut carry = self.ctx.zero();
            for i in (0..n).rev() {
                let v = &cur[i] + &(&carry * r);
                if i == 0 {
                    if !v.is_zero() {
                        return Ok(count);
                    }
                } else {
                    quotient[i - 1] = v.clone();
                }
                carry = v;
            }
            count += 1;
            cur = quotient;
        }
    }

    /// `self(g)`.
    pub fn compose(&self, g: &Poly) -> Result<Poly, PolyError> {
        self.check(g)?;
        Ok(self
            .coeffs
            .iter()
            .rev()
            .fold(Self::zero(&self.ctx), |acc, c| {
                &(&acc * g) + &Self::constant(c.clone())
            }))
    }

    /// `y^n * self(1/y)`; `n` must be at least the degree.
    pub fn reversed(&self, n: usize) -> Poly {
        let mut coeffs = vec![self.ctx.zero(); n + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[n - i] = c.clone();
        }
        Self::from_vec(&self.ctx, coeffs)
    }

    /// `self^exp mod m`.
    pub fn pow_mod(&self, mut exp: u128, m: &Poly) -> Result<Poly, PolyError> {
        let mut acc = Self::one(&self.ctx).rem(m)?;
        let mut base = self.rem(m)?;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = (&acc * &base).rem(m)?;
            }
            base = (&base * &base).rem(m)?;
            exp >>= 1;
        }
        Ok(acc)
    }

    /// Coefficientwise image in a field containing this one.
    pub fn lift_to(&self, target: &FieldCtx) -> Result<Poly, PolyError> {
        if &self.ctx == target {
            return Ok(self.clone());
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.lift_to(target))
            .collect::<Result<_, _>>()?;
        Ok(Self::from_vec(target, coeffs))
    }

    /// Coefficientwise reduction of a rational polynomial into characteristic p.
    pub fn reduce_into(&self, target: &FieldCtx) -> Result<Poly, PolyError> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.reduce_into(target))
            .collect::<Result<_, _>>()?;
        Ok(Self::from_vec(target, coeffs))
    }

    /// Ascending list of element strings.
    pub fn to_coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(ToString::to_string).collect()
    }

    pub fn from_coeff_strings<S: AsRef<str>>(
        ctx: &FieldCtx,
        coeffs: &[S],
    ) -> Result<Poly, PolyError> {
        let parsed = coeffs
            .iter()
            .map(|s| ctx.parse(s.as_ref()))
            .collect::<Result<_, _>>()?;
        Ok(Self::from_vec(ctx, parsed))
    }

    /// Dense descending text, e.g. `3*y^3 - 2*y^2 + 1`.
    pub fn to_text(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let mag = if negative { -c } else { c.clone() };
            let mut coef = mag.to_string();
            if coef.contains('+') || (i > 0 && coef.contains('/')) {
                coef = format!("({coef})");
            }
            let body = match (i, mag.is_one()) {
                (0, _) => coef,
                (1, true) => var.to_string(),
                (1, false) => format!("{coef}*{var}"),
                (_, true) => format!("{var}^{i}"),
                (_, false) => format!("{coef}*{var}^{i}"),
            };
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }

    /// Parse the format produced by [`Poly::to_text`].
    pub fn parse(ctx: &FieldCtx, text: &str, var: &str) -> Result<Poly, PolyError> {
        let err = || PolyError::Parse(text.to_string());
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut depth = 0i32;
        let mut current = String::new();
        let mut negative = false;
        for ch in text.chars() {
            match ch {
                '(' => {
                    depth += 1;
                    current.push(ch);
                }
                ')' => {
                    depth -= 1;
                    current.push(ch);
                }
                '+' | '-' | '\u{2212}' if depth == 0 => {
                    if !current.trim().is_empty() {
                        terms.push((negative, current.trim().to_string()));
                    } else if !terms.is_empty() || negative {
                        return Err(err());
                    }
                    current.clear();
                    negative = ch != '+';
                }
                _ => current.push(ch),
            }
        }
        if current.trim().is_empty() {
            return Err(err());
        }
        terms.push((negative, current.trim().to_string()));

        let mut result = Poly::zero(ctx);
        for (neg, term) in terms {
            let split = term
                .rsplit_once('*')
                .and_then(|(c, v)| Some((c.trim().to_string(), parse_var_power(v.trim(), var)?)));
            let (coef_str, power) = if let Some(split) = split {
                split
            } else if let Some(k) = parse_var_power(&term, var) {
                ("1".to_string(), k)
            } else {
                (term.clone(), 0)
            };
            let coef_str = coef_str
                .strip_prefix('(')
                .and_then(|s| s.strip_suffix(')'))
                .unwrap_or(&coef_str);
            let mut c = ctx.parse(coef_str).map_err(|_| err())?;
            if neg {
                c = -c;
            }
            result = &result + &Poly::monomial(c, power);
        }
        Ok(result)
    }
}

fn parse_var_power(s: &str, var: &str) -> Option<usize> {
    if s == var {
        return Some(1);
    }
    let exp = s.strip_prefix(var)?.strip_prefix('^')?;
    exp.parse().ok()
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text("y"))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}]({})", self.ctx, self.to_text("y"))
    }
}

macro_rules! poly_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                self.$checked(rhs)
                    .unwrap_or_else(|e| panic!("{}: {e}", stringify!($method)))
            }
        }
        impl $trait<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
    };
}

poly_binop!(Add, add, try_add);
poly_binop!(Sub, sub, try_sub);
poly_binop!(Mul, mul, try_mul);

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::from_vec(&self.ctx, self.coeffs.iter().map(|c| -c).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldCtx {
        FieldCtx::rationals()
    }

    fn fp(p: u64) -> FieldCtx {
        FieldCtx::prime(p).unwrap()
    }

    #[test]
    fn gcd_over_q() {
        let a = Poly::from_i64s(&q(), &[-1, 0, 1]);
        let b = Poly::from_i64s(&q(), &[1, -2, 1]);
        assert_eq!(a.gcd(&b).unwrap(), Poly::from_i64s(&q(), &[-1, 1]));
    }

    #[test]
    fn derivative_kills_pth_powers() {
        let f5 = fp(5);
        let f = Poly::from_i64s(&f5, &[0, 0, 0, 2, 0, 1]);
        assert_eq!(f.derivative(), Poly::from_i64s(&f5, &[0, 0, 1]));
    }

    #[test]
    fn gcd_with_field_polynomial() {
        let f5 = fp(5);
        let a = Poly::from_i64s(&f5, &[0, -1, 0, 0, 0, 1]);
        let b = Poly::from_i64s(&f5, &[1, 0, 1]);
        assert_eq!(a.gcd(&b).unwrap(), b);
        // y^2 + 1 = (y - 2)(y - 3) mod 5
        let prod = &Poly::from_i64s(&f5, &[-2, 1]) * &Poly::from_i64s(&f5, &[-3, 1]);
        assert_eq!(prod, b);
    }

    #[test]
    fn divmod_reconstructs() {
        let f7 = fp(7);
        let a = Poly::from_i64s(&f7, &[3, 1, 4, 1, 5, 2]);
        let b = Poly::from_i64s(&f7, &[2, 0, 3]);
        let (quot, r) = a.divmod(&b).unwrap();
        assert_eq!(&(&quot * &b) + &r, a);
        assert!(r.deg() < b.deg());
        assert_eq!(a.divmod(&Poly::zero(&f7)).unwrap_err(), PolyError::DivisionByZero);
    }

    #[test]
    fn mixed_contexts_rejected() {
        let a = Poly::from_i64s(&fp(5), &[1, 1]);
        let b = Poly::from_i64s(&fp(7), &[1, 1]);
        assert!(matches!(
            a.try_add(&b),
            Err(PolyError::Field(FieldError::MixedContexts(..)))
        ));
    }

    #[test]
    fn valuation_counts_multiplicity() {
        let f = Poly::from_i64s(&q(), &[1, -2, 1]).shift(3);
        assert_eq!(f.valuation_at(&q().zero()).unwrap(), 3);
        assert_eq!(f.valuation_at(&q().one()).unwrap(), 2);
        assert_eq!(f.valuation_at(&q().from_i64(2)).unwrap(), 0);
    }

    #[test]
    fn text_format() {
        let f = Poly::from_i64s(&q(), &[1, 0, -2, 3]);
        assert_eq!(f.to_text("y"), "3*y^3 - 2*y^2 + 1");
        assert_eq!(Poly::parse(&q(), "3*y^3 - 2*y^2 + 1", "y").unwrap(), f);
        let g = Poly::from_i64s(&q(), &[0, -1]);
        assert_eq!(g.to_text("y"), "-y");
        assert_eq!(Poly::parse(&q(), "-y", "y").unwrap(), g);
        let f25 = FieldCtx::extension(5, 2).unwrap();
        let c = f25.parse("4*t+1").unwrap();
        let h = &Poly::monomial(c, 2) + &Poly::one(&f25);
        assert_eq!(h.to_text("y"), "(4*t+1)*y^2 + 1");
        assert_eq!(Poly::parse(&f25, &h.to_text("y"), "y").unwrap(), h);
        let half = Poly::from_vec(&q(), vec![q().zero(), q().parse("1/2").unwrap()]);
        assert_eq!(half.to_text("y"), "(1/2)*y");
        assert_eq!(Poly::parse(&q(), "(1/2)*y", "y").unwrap(), half);
    }

    #[test]
    fn json_coefficients() {
        let f = Poly::from_i64s(&q(), &[1, 0, -2, 3]);
        assert_eq!(f.to_coeff_strings(), vec!["1", "0", "-2", "3"]);
        assert_eq!(
            Poly::from_coeff_strings(&q(), &["1", "0", "-2", "3"]).unwrap(),
            f
        );
    }
}
