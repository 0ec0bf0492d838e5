//! Exact fields: prime fields F_p, extensions F_{p^n} given by an explicit
//! irreducible modulus, and the rationals.
//!
//! Every [`FieldElem`] carries its [`FieldCtx`]. Mixing elements of different
//! fields is an error for the `try_*` methods and a panic for the operator
//! impls, which are meant for code that has already aligned contexts.
//! Embeddings between fields are explicit via [`FieldElem::lift_to`].

pub(crate) mod fp_poly;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

/// Default cap on the absolute extension degree searched by root finding.
pub const DEFAULT_MAX_EXT_DEGREE: u32 = 6;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1, got {0}")]
    InvalidDegree(u32),
    #[error("no irreducible polynomial of degree {n} over F_{p}")]
    NoModulusFound { p: u64, n: u32 },
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements of different fields: {0} and {1}")]
    MixedContexts(String, String),
    #[error("operation requires positive characteristic")]
    CharZero,
    #[error("cannot parse {input:?} as an element of {field}")]
    Parse { input: String, field: String },
    #[error("no embedding of {from} into {to}")]
    NoEmbedding { from: String, to: String },
    #[error("{0} has a denominator divisible by the characteristic")]
    NotIntegral(String),
}

impl FieldError {
    pub fn code(&self) -> &'static str {
        match self {
            FieldError::NotPrime(_) => "NotPrime",
            FieldError::InvalidDegree(_) => "InvalidDegree",
            FieldError::NoModulusFound { .. } => "NoModulusFound",
            FieldError::InvalidModulus(_) => "InvalidModulus",
            FieldError::DivisionByZero => "DivisionByZero",
            FieldError::MixedContexts(..) => "MixedContexts",
            FieldError::CharZero => "CharZero",
            FieldError::Parse { .. } => "ParseError",
            FieldError::NoEmbedding { .. } => "NoEmbedding",
            FieldError::NotIntegral(_) => "NotIntegral",
        }
    }
}

/// Requested field, as accepted by [`make_field`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldSpec {
    Prime(u64),
    Extension { p: u64, n: u32 },
    Rationals,
}

#[derive(Debug, PartialEq, Eq, Hash)]
enum Kind {
    Prime { p: u64 },
    /// Monic modulus, ascending coefficients, degree >= 2.
    Extension { p: u64, modulus: Vec<u64> },
    Rationals,
}

/// A field of computation, cheap to clone and shareable across threads.
#[derive(Clone)]
pub struct FieldCtx(Arc<Kind>);

pub fn make_field(spec: FieldSpec) -> Result<FieldCtx, FieldError> {
    match spec {
        FieldSpec::Prime(p) => FieldCtx::prime(p),
        FieldSpec::Extension { p, n } => FieldCtx::extension(p, n),
        FieldSpec::Rationals => Ok(FieldCtx::rationals()),
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut q = 2u64;
    while q.saturating_mul(q) <= p {
        if p % q == 0 {
            return false;
        }
        q += 1;
    }
    true
}

fn ext_cache() -> &'static Mutex<HashMap<(u64, u32), FieldCtx>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u32), FieldCtx>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

type EmbedKey = (Vec<u64>, Vec<u64>, u64);

fn embed_cache() -> &'static Mutex<HashMap<EmbedKey, FieldElem>> {
    static CACHE: OnceLock<Mutex<HashMap<EmbedKey, FieldElem>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

impl FieldCtx {
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(FieldCtx(Arc::new(Kind::Prime { p })))
    }

    /// F_{p^n} with the deterministic modulus of
    /// [`smallest_irreducible`](fp_poly::smallest_irreducible). `n = 1` gives F_p.
    pub fn extension(p: u64, n: u32) -> Result<Self, FieldError> {
        if n == 0 {
            return Err(FieldError::InvalidDegree(n));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if n == 1 {
            return Self::prime(p);
        }
        if let Some(ctx) = ext_cache().lock().unwrap().get(&(p, n)) {
            return Ok(ctx.clone());
        }
        let modulus =
            fp_poly::smallest_irreducible(p, n).ok_or(FieldError::NoModulusFound { p, n })?;
        let ctx = FieldCtx(Arc::new(Kind::Extension { p, modulus }));
        ext_cache().lock().unwrap().insert((p, n), ctx.clone());
        Ok(ctx)
    }

    /// Extension with a caller-supplied modulus (ascending, monic, irreducible).
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if modulus.len() < 3 {
            return Err(FieldError::InvalidModulus("degree must be at least 2".into()));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(FieldError::InvalidModulus("coefficient out of range".into()));
        }
        if *modulus.last().unwrap() != 1 {
            return Err(FieldError::InvalidModulus("modulus must be monic".into()));
        }
        if !fp_poly::is_irreducible(&modulus, p) {
            return Err(FieldError::InvalidModulus("modulus is reducible".into()));
        }
        Ok(FieldCtx(Arc::new(Kind::Extension { p, modulus })))
    }

    pub fn rationals() -> Self {
        FieldCtx(Arc::new(Kind::Rationals))
    }

    pub fn characteristic(&self) -> u64 {
        match &*self.0 {
            Kind::Prime { p } | Kind::Extension { p, .. } => *p,
            Kind::Rationals => 0,
        }
    }

    /// Degree over the prime field (1 for F_p and for Q).
    pub fn degree(&self) -> u32 {
        match &*self.0 {
            Kind::Extension { modulus, .. } => modulus.len() as u32 - 1,
            _ => 1,
        }
    }

    pub fn is_finite(&self) -> bool {
        !matches!(&*self.0, Kind::Rationals)
    }

    /// Number of elements, for finite fields.
    pub fn order(&self) -> Option<u128> {
        match &*self.0 {
            Kind::Rationals => None,
            _ => (self.characteristic() as u128).checked_pow(self.degree()),
        }
    }

    /// Ascending coefficients of the modulus, for extensions.
    pub fn modulus(&self) -> Option<&[u64]> {
        match &*self.0 {
            Kind::Extension { modulus, .. } => Some(modulus),
            _ => None,
        }
    }

    pub fn prime_field(&self) -> FieldCtx {
        match &*self.0 {
            Kind::Extension { p, .. } => FieldCtx(Arc::new(Kind::Prime { p: *p })),
            _ => self.clone(),
        }
    }

    /// Same prime field and this field's degree divides `other`'s.
    pub fn is_subfield_of(&self, other: &FieldCtx) -> bool {
        if self == other {
            return true;
        }
        match (&*self.0, &*other.0) {
            (Kind::Rationals, Kind::Rationals) => true,
            (Kind::Rationals, _) | (_, Kind::Rationals) => false,
            _ => {
                self.characteristic() == other.characteristic()
                    && other.degree() % self.degree() == 0
            }
        }
    }

    fn elem(&self, repr: Repr) -> FieldElem {
        FieldElem {
            ctx: self.clone(),
            repr,
        }
    }

    pub fn zero(&self) -> FieldElem {
        match &*self.0 {
            Kind::Prime { .. } => self.elem(Repr::Fp(0)),
            Kind::Extension { modulus, .. } => self.elem(Repr::Ext(vec![0; modulus.len() - 1])),
            Kind::Rationals => self.elem(Repr::Q(BigRational::zero())),
        }
    }

    pub fn one(&self) -> FieldElem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, value: i64) -> FieldElem {
        match &*self.0 {
            Kind::Prime { p } => self.elem(Repr::Fp(value.rem_euclid(*p as i64) as u64)),
            Kind::Extension { p, modulus } => {
                let mut coeffs = vec![0; modulus.len() - 1];
                coeffs[0] = (value as i128).rem_euclid(*p as i128) as u64;
                self.elem(Repr::Ext(coeffs))
            }
            Kind::Rationals => self.elem(Repr::Q(BigRational::from_integer(value.into()))),
        }
    }

    pub fn from_bigint(&self, value: &BigInt) -> FieldElem {
        match &*self.0 {
            Kind::Rationals => self.elem(Repr::Q(BigRational::from_integer(value.clone()))),
            _ => {
                let p = BigInt::from(self.characteristic());
                let r = ((value % &p) + &p) % &p;
                self.from_i64(r.to_i64().expect("residue fits"))
            }
        }
    }

    /// `num/den`; in characteristic p the division happens in the field.
    pub fn from_ratio(&self, num: i64, den: i64) -> Result<FieldElem, FieldError> {
        self.from_i64(num).try_div(&self.from_i64(den))
    }

    /// Element of an extension from ascending coefficients in `[0, p)`.
    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElem, FieldError> {
        let p = self.characteristic();
        match &*self.0 {
            Kind::Prime { p } => {
                if coeffs.len() > 1 && coeffs[1..].iter().any(|&c| c != 0) {
                    return Err(FieldError::InvalidModulus("too many coefficients".into()));
                }
                Ok(self.elem(Repr::Fp(coeffs.first().copied().unwrap_or(0) % p)))
            }
            Kind::Extension { modulus, .. } => {
                let n = modulus.len() - 1;
                let reduced: Vec<u64> = coeffs.iter().map(|&c| c % p).collect();
                let mut r = fp_poly::rem(&reduced, modulus, p);
                r.resize(n, 0);
                Ok(self.elem(Repr::Ext(r)))
            }
            Kind::Rationals => Err(FieldError::CharZero),
        }
    }

    /// The class of `t` in an extension.
    pub fn generator(&self) -> Option<FieldElem> {
        match &*self.0 {
            Kind::Extension { .. } => self.from_coeffs(&[0, 1]).ok(),
            _ => None,
        }
    }

    /// The element whose base-p digits (constant term least significant)
    /// spell `index`. Canonical enumeration order of a finite field.
    pub fn element_at(&self, index: u128) -> Option<FieldElem> {
        let q = self.order()?;
        if index >= q {
            return None;
        }
        let p = self.characteristic() as u128;
        let mut rest = index;
        let coeffs: Vec<u64> = (0..self.degree())
            .map(|_| {
                let c = (rest % p) as u64;
                rest /= p;
                c
            })
            .collect();
        self.from_coeffs(&coeffs).ok()
    }

    /// All elements of a finite field in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        let q = self.order().unwrap_or(0);
        (0..q).filter_map(move |i| self.element_at(i))
    }

    /// Parse the element text format: `3` (prime field), `4*t+1` (extension,
    /// descending powers), `-2/3` (rationals).
    pub fn parse(&self, input: &str) -> Result<FieldElem, FieldError> {
        let err = || FieldError::Parse {
            input: input.to_string(),
            field: self.to_string(),
        };
        let s = input.trim();
        if s.is_empty() {
            return Err(err());
        }
        match &*self.0 {
            Kind::Prime { p } => {
                let v: u64 = parse_digits(s).ok_or_else(err)?;
                if v >= *p {
                    return Err(err());
                }
                Ok(self.elem(Repr::Fp(v)))
            }
            Kind::Extension { p, modulus } => {
                let n = modulus.len() - 1;
                let mut coeffs = vec![0u64; n];
                let mut last_power: Option<usize> = None;
                for term in s.split('+') {
                    let (c, power) = parse_ext_term(term.trim()).ok_or_else(err)?;
                    if c >= *p || power >= n || last_power.is_some_and(|lp| power >= lp) {
                        return Err(err());
                    }
                    coeffs[power] = c;
                    last_power = Some(power);
                }
                Ok(self.elem(Repr::Ext(coeffs)))
            }
            Kind::Rationals => {
                let s = s.replace('\u{2212}', "-");
                let (num_str, den_str) = match s.split_once('/') {
                    Some((a, b)) => (a.to_string(), b.to_string()),
                    None => (s.clone(), "1".to_string()),
                };
                let valid_int = |t: &str, signed: bool| {
                    let body = if signed { t.strip_prefix('-').unwrap_or(t) } else { t };
                    !body.is_empty() && body.bytes().all(|b| b.is_ascii_digit())
                };
                if !valid_int(&num_str, true) || !valid_int(&den_str, false) {
                    return Err(err());
                }
                let num: BigInt = num_str.parse().map_err(|_| err())?;
                let den: BigInt = den_str.parse().map_err(|_| err())?;
                if den.is_zero() {
                    return Err(err());
                }
                Ok(self.elem(Repr::Q(BigRational::new(num, den))))
            }
        }
    }
}

fn parse_digits(s: &str) -> Option<u64> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// `c`, `t`, `c*t`, `t^k`, `c*t^k` -> (coefficient, power)
fn parse_ext_term(term: &str) -> Option<(u64, usize)> {
    if let Some(v) = parse_digits(term) {
        return Some((v, 0));
    }
    let (coef, var) = match term.split_once('*') {
        Some((c, v)) => (parse_digits(c.trim())?, v.trim()),
        None => (1, term),
    };
    let power = if var == "t" {
        1
    } else {
        let exp = var.strip_prefix("t^")?;
        let k = parse_digits(exp)? as usize;
        if k < 2 {
            return None;
        }
        k
    };
    Some((coef, power))
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for FieldCtx {}

impl Hash for FieldCtx {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl fmt::Display for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            Kind::Prime { p } => write!(f, "F_{p}"),
            Kind::Extension { p, modulus } => {
                let m = ext_to_string(modulus, "t", true);
                write!(f, "F_{p}^{}[{m}]", modulus.len() - 1)
            }
            Kind::Rationals => write!(f, "Q"),
        }
    }
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Fp(u64),
    /// Ascending coefficients, length exactly n.
    Ext(Vec<u64>),
    Q(BigRational),
}

/// An element of a [`FieldCtx`], always in canonical reduced form.
#[derive(Clone)]
pub struct FieldElem {
    ctx: FieldCtx,
    repr: Repr,
}

fn ext_to_string(coeffs: &[u64], var: &str, allow_unit_coeff: bool) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| {
            let coef = if c == 1 && i > 0 && allow_unit_coeff {
                String::new()
            } else if i > 0 {
                format!("{c}*")
            } else {
                c.to_string()
            };
            match i {
                0 => coef,
                1 => format!("{coef}{var}"),
                _ => format!("{coef}{var}^{i}"),
            }
        })
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join("+")
    }
}

impl FieldElem {
    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Fp(v) => *v == 0,
            Repr::Ext(c) => c.iter().all(|&x| x == 0),
            Repr::Q(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.repr {
            Repr::Fp(v) => *v == 1,
            Repr::Ext(c) => c[0] == 1 && c[1..].iter().all(|&x| x == 0),
            Repr::Q(q) => q.is_one(),
        }
    }

    /// Residue in `[0, p)` when the element lies in the prime field.
    pub fn as_prime_residue(&self) -> Option<u64> {
        match &self.repr {
            Repr::Fp(v) => Some(*v),
            Repr::Ext(c) if c[1..].iter().all(|&x| x == 0) => Some(c[0]),
            _ => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.repr {
            Repr::Q(q) => Some(q),
            _ => None,
        }
    }

    /// Ascending coordinates over F_p (length = field degree); finite fields only.
    pub fn coordinates(&self) -> Option<Vec<u64>> {
        match &self.repr {
            Repr::Fp(v) => Some(vec![*v]),
            Repr::Ext(c) => Some(c.clone()),
            Repr::Q(_) => None,
        }
    }

    /// Position in the canonical enumeration of a finite field.
    pub fn index(&self) -> Option<u128> {
        let p = self.ctx.characteristic() as u128;
        self.coordinates()
            .map(|c| c.iter().rev().fold(0u128, |acc, &x| acc * p + x as u128))
    }

    fn check_ctx(&self, other: &FieldElem) -> Result<(), FieldError> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(FieldError::MixedContexts(
                self.ctx.to_string(),
                other.ctx.to_string(),
            ))
        }
    }

    fn modulus_parts(&self) -> (u64, &[u64]) {
        match &*self.ctx.0 {
            Kind::Extension { p, modulus } => (*p, modulus),
            _ => unreachable!("extension repr in non-extension context"),
        }
    }

    fn with_repr(&self, repr: Repr) -> FieldElem {
        FieldElem {
            ctx: self.ctx.clone(),
            repr,
        }
    }

    fn add_unchecked(&self, other: &FieldElem) -> FieldElem {
        let p = self.ctx.characteristic();
        let repr = match (&self.repr, &other.repr) {
            (Repr::Fp(a), Repr::Fp(b)) => Repr::Fp(fp_poly::add_mod(*a, *b, p)),
            (Repr::Ext(a), Repr::Ext(b)) => Repr::Ext(
                a.iter()
                    .zip(b)
                    .map(|(&x, &y)| fp_poly::add_mod(x, y, p))
                    .collect(),
            ),
            (Repr::Q(a), Repr::Q(b)) => Repr::Q(a + b),
            _ => unreachable!("representation mismatch"),
        };
        self.with_repr(repr)
    }

    fn neg_unchecked(&self) -> FieldElem {
        let p = self.ctx.characteristic();
        let repr = match &self.repr {
            Repr::Fp(a) => Repr::Fp(fp_poly::sub_mod(0, *a, p)),
            Repr::Ext(a) => Repr::Ext(a.iter().map(|&x| fp_poly::sub_mod(0, x, p)).collect()),
            Repr::Q(a) => Repr::Q(-a),
        };
        self.with_repr(repr)
    }

    fn mul_unchecked(&self, other: &FieldElem) -> FieldElem {
        let repr = match (&self.repr, &other.repr) {
            (Repr::Fp(a), Repr::Fp(b)) => {
                Repr::Fp(fp_poly::mul_mod(*a, *b, self.ctx.characteristic()))
            }
            (Repr::Ext(a), Repr::Ext(b)) => {
                let (p, m) = self.modulus_parts();
                let mut a = a.clone();
                let mut b = b.clone();
                fp_poly::trim(&mut a);
                fp_poly::trim(&mut b);
                let mut r = fp_poly::mul_rem(&a, &b, m, p);
                r.resize(m.len() - 1, 0);
                Repr::Ext(r)
            }
            (Repr::Q(a), Repr::Q(b)) => Repr::Q(a * b),
            _ => unreachable!("representation mismatch"),
        };
        self.with_repr(repr)
    }

    pub fn try_add(&self, other: &FieldElem) -> Result<FieldElem, FieldError> {
        self.check_ctx(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn try_sub(&self, other: &FieldElem) -> Result<FieldElem, FieldError> {
        self.check_ctx(other)?;
        Ok(self.add_unchecked(&other.neg_unchecked()))
    }

    pub fn try_mul(&self, other: &FieldElem) -> Result<FieldElem, FieldError> {
        self.check_ctx(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn try_div(&self, other: &FieldElem) -> Result<FieldElem, FieldError> {
        self.check_ctx(other)?;
        Ok(self.mul_unchecked(&other.inv()?))
    }

    pub fn inv(&self) -> Result<FieldElem, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let repr = match &self.repr {
            Repr::Fp(a) => Repr::Fp(
                fp_poly::inv_mod(*a, self.ctx.characteristic()).ok_or(FieldError::DivisionByZero)?,
            ),
            Repr::Ext(a) => {
                let (p, m) = self.modulus_parts();
                let mut a = a.clone();
                fp_poly::trim(&mut a);
                let mut r = fp_poly::inverse_rem(&a, m, p).ok_or(FieldError::DivisionByZero)?;
                r.resize(m.len() - 1, 0);
                Repr::Ext(r)
            }
            Repr::Q(a) => Repr::Q(a.recip()),
        };
        Ok(self.with_repr(repr))
    }

    /// `self^k`; negative exponents go through the inverse.
    pub fn pow(&self, k: i64) -> Result<FieldElem, FieldError> {
        if k < 0 {
            return self.inv()?.pow(-k);
        }
        Ok(self.pow_u(k as u128))
    }

    pub fn pow_u(&self, mut exp: u128) -> FieldElem {
        let mut acc = self.ctx.one();
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            exp >>= 1;
        }
        acc
    }

    /// `a^p`.
    pub fn frobenius(&self) -> Result<FieldElem, FieldError> {
        match self.ctx.characteristic() {
            0 => Err(FieldError::CharZero),
            p => Ok(self.pow_u(p as u128)),
        }
    }

    /// Image of this element in `target`, which must contain this field.
    ///
    /// F_p embeds canonically. An extension F_{p^n} embeds into F_{p^m}
    /// (n | m) by sending `t` to the smallest root of its modulus in the target,
    /// so the embedding is deterministic.
    pub fn lift_to(&self, target: &FieldCtx) -> Result<FieldElem, FieldError> {
        if &self.ctx == target {
            return Ok(self.clone());
        }
        let no_embedding = || FieldError::NoEmbedding {
            from: self.ctx.to_string(),
            to: target.to_string(),
        };
        if !self.ctx.is_subfield_of(target) {
            return Err(no_embedding());
        }
        match &self.repr {
            Repr::Fp(v) => Ok(target.from_i64(*v as i64)),
            Repr::Ext(coeffs) => {
                let theta = embedding_image(&self.ctx, target).ok_or_else(no_embedding)?;
                let mut acc = target.zero();
                for &c in coeffs.iter().rev() {
                    acc = acc.mul_unchecked(&theta).add_unchecked(&target.from_i64(c as i64));
                }
                Ok(acc)
            }
            Repr::Q(_) => Err(no_embedding()),
        }
    }

    /// Reduction of a rational into a field of characteristic p.
    pub fn reduce_into(&self, target: &FieldCtx) -> Result<FieldElem, FieldError> {
        match &self.repr {
            Repr::Q(q) => {
                if !target.is_finite() {
                    return Ok(target.elem(Repr::Q(q.clone())));
                }
                let num = target.from_bigint(q.numer());
                let den = target.from_bigint(q.denom());
                if den.is_zero() {
                    return Err(FieldError::NotIntegral(self.to_string()));
                }
                Ok(num.mul_unchecked(&den.inv()?))
            }
            _ => self.lift_to(target),
        }
    }

    /// Total order within one field: by canonical index for finite fields,
    /// numerically for Q. Elements of different fields order by field first.
    pub fn canonical_cmp(&self, other: &FieldElem) -> Ordering {
        match (&self.repr, &other.repr) {
            (Repr::Q(a), Repr::Q(b)) => a.cmp(b),
            (Repr::Q(_), _) => Ordering::Greater,
            (_, Repr::Q(_)) => Ordering::Less,
            _ => {
                if self.ctx != other.ctx {
                    return (self.ctx.characteristic(), self.ctx.degree())
                        .cmp(&(other.ctx.characteristic(), other.ctx.degree()))
                        .then_with(|| self.ctx.modulus().cmp(&other.ctx.modulus()));
                }
                self.index().cmp(&other.index())
            }
        }
    }
}

/// Image of the generator `t` of `src` (an extension) inside `dst`.
fn embedding_image(src: &FieldCtx, dst: &FieldCtx) -> Option<FieldElem> {
    let src_mod = src.modulus()?.to_vec();
    let dst_mod = dst.modulus()?.to_vec();
    let key = (src_mod.clone(), dst_mod, dst.characteristic());
    if let Some(theta) = embed_cache().lock().unwrap().get(&key) {
        return Some(theta.clone());
    }
    let coeffs: Vec<FieldElem> = src_mod.iter().map(|&c| dst.from_i64(c as i64)).collect();
    let poly = crate::poly::Poly::new(dst, coeffs).ok()?;
    let theta = crate::poly::roots::roots_in_field(&poly).ok()?.into_iter().next()?.0;
    embed_cache().lock().unwrap().insert(key, theta.clone());
    Some(theta)
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.repr == other.repr
    }
}

impl Eq for FieldElem {}

impl Hash for FieldElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.repr.hash(state)
    }
}

impl PartialOrd for FieldElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldElem {
    fn cmp(&self, other: &Self) -> Ordering {
        self.canonical_cmp(other)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Fp(v) => write!(f, "{v}"),
            Repr::Ext(c) => write!(f, "{}", ext_to_string(c, "t", true)),
            Repr::Q(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
        }
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FieldElem {
    /// True for rationals with negative sign; always false in characteristic p.
    pub fn is_negative(&self) -> bool {
        matches!(&self.repr, Repr::Q(q) if q.is_negative())
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&FieldElem> for &FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: &FieldElem) -> FieldElem {
                let f: fn(&FieldElem, &FieldElem) -> Result<FieldElem, FieldError> = $body;
                f(self, rhs).unwrap_or_else(|e| panic!("{}: {e}", stringify!($method)))
            }
        }
        impl $trait<FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: FieldElem) -> FieldElem {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: &FieldElem) -> FieldElem {
                (&self).$method(rhs)
            }
        }
        impl $trait<FieldElem> for &FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: FieldElem) -> FieldElem {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| a.try_add(b));
binop!(Sub, sub, |a, b| a.try_sub(b));
binop!(Mul, mul, |a, b| a.try_mul(b));
binop!(Div, div, |a, b| a.try_div(b));

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        self.neg_unchecked()
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        self.neg_unchecked()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> FieldCtx {
        FieldCtx::prime(p).unwrap()
    }

    #[test]
    fn make_field_examples() {
        assert!(make_field(FieldSpec::Prime(5)).is_ok());
        assert_eq!(
            make_field(FieldSpec::Prime(4)).unwrap_err(),
            FieldError::NotPrime(4)
        );
        let f25 = make_field(FieldSpec::Extension { p: 5, n: 2 }).unwrap();
        assert_eq!(f25.modulus(), Some(&[2u64, 0, 1][..]));
        assert_eq!(f25.order(), Some(25));
    }

    #[test]
    fn modulus_is_deterministic() {
        let a = FieldCtx::extension(7, 3).unwrap();
        ext_cache().lock().unwrap().clear();
        let b = FieldCtx::extension(7, 3).unwrap();
        assert_eq!(a.modulus(), b.modulus());
        assert_eq!(a, b);
    }

    #[test]
    fn prime_field_examples() {
        let f5 = f(5);
        assert_eq!(f5.from_i64(3).inv().unwrap(), f5.from_i64(2));
        let f7 = f(7);
        assert_eq!(f7.from_i64(2).pow(7).unwrap(), f7.from_i64(2));
        assert_eq!(f5.from_i64(4).frobenius().unwrap(), f5.from_i64(4));
        assert_eq!(f5.zero().inv().unwrap_err(), FieldError::DivisionByZero);
        assert_eq!(f5.from_i64(2).pow(-1).unwrap(), f5.from_i64(3));
    }

    #[test]
    fn rational_examples() {
        let q = FieldCtx::rationals();
        let r = q.from_i64(2).try_div(&q.from_i64(3)).unwrap();
        assert_eq!(r.to_string(), "2/3");
        assert_eq!(q.from_i64(4).try_div(&q.from_i64(-6)).unwrap().to_string(), "-2/3");
        assert_eq!(q.parse("-2/3").unwrap(), q.parse("\u{2212}2/3").unwrap());
        assert_eq!(q.parse("4/6").unwrap().to_string(), "2/3");
        assert!(q.parse("1/0").is_err());
        assert_eq!(q.one().frobenius().unwrap_err(), FieldError::CharZero);
    }

    #[test]
    fn frobenius_on_f25() {
        let f25 = FieldCtx::extension(5, 2).unwrap();
        let t = f25.generator().unwrap();
        let expected = f25.parse("4*t").unwrap();
        assert_eq!(t.frobenius().unwrap(), expected);
        // (4t)^2 + 2 = 16*(-2) + 2 = -30 = 0: 4t is the other root of the modulus
        let sq = &expected * &expected;
        assert!((&sq + &f25.from_i64(2)).is_zero());
        for a in f25.elements() {
            assert_eq!(a.frobenius().unwrap().frobenius().unwrap(), a);
        }
    }

    #[test]
    fn mixed_contexts_error() {
        let a = f(5).one();
        let b = f(7).one();
        assert!(matches!(a.try_add(&b), Err(FieldError::MixedContexts(..))));
        let f25 = FieldCtx::extension(5, 2).unwrap();
        assert!(matches!(
            a.try_mul(&f25.one()),
            Err(FieldError::MixedContexts(..))
        ));
    }

    #[test]
    fn text_round_trip() {
        let f25 = FieldCtx::extension(5, 2).unwrap();
        for a in f25.elements() {
            assert_eq!(f25.parse(&a.to_string()).unwrap(), a);
        }
        assert_eq!(f25.parse("4*t+1").unwrap().to_string(), "4*t+1");
        assert!(f25.parse("1+4*t").is_err());
        assert!(f25.parse("5").is_err());
        assert!(f25.parse("t^2").is_err());
        assert!(f(5).parse("5").is_err());
        assert!(f(5).parse("-1").is_err());
    }

    #[test]
    fn lifting_between_fields() {
        let f5 = f(5);
        let f25 = FieldCtx::extension(5, 2).unwrap();
        let f625 = FieldCtx::extension(5, 4).unwrap();
        let x = f5.from_i64(3);
        assert_eq!(x.lift_to(&f25).unwrap(), f25.from_i64(3));
        let t = f25.generator().unwrap();
        let image = t.lift_to(&f625).unwrap();
        // the image still satisfies t^2 + 2 = 0
        assert!((&(&image * &image) + &f625.from_i64(2)).is_zero());
        // the embedding is a ring homomorphism
        for a in f25.elements().step_by(3) {
            for b in f25.elements().step_by(7) {
                let lhs = (&a * &b).lift_to(&f625).unwrap();
                let rhs = &a.lift_to(&f625).unwrap() * &b.lift_to(&f625).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
        let f125 = FieldCtx::extension(5, 3).unwrap();
        assert!(t.lift_to(&f125).is_err());
    }

    #[test]
    fn reduction_of_rationals() {
        let q = FieldCtx::rationals();
        let f5 = f(5);
        let two_thirds = q.parse("2/3").unwrap();
        assert_eq!(two_thirds.reduce_into(&f5).unwrap(), f5.from_i64(4));
        assert!(q.parse("1/5").unwrap().reduce_into(&f5).is_err());
    }

    #[test]
    fn enumeration_is_canonical() {
        let f9 = FieldCtx::extension(3, 2).unwrap();
        let all: Vec<_> = f9.elements().collect();
        assert_eq!(all.len(), 9);
        for (i, a) in all.iter().enumerate() {
            assert_eq!(a.index(), Some(i as u128));
        }
        let mut sorted = all.clone();
        sorted.reverse();
        sorted.sort();
        assert_eq!(sorted, all);
    }
}
