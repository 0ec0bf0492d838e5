//! Polynomial covers of type `(p+2; p+2, 3, e3-e4)` with a merged branch point,
//! and the twist `f -> f + c x^p` that separates it.

use std::fmt;

use crate::field::{is_prime, FieldCtx, FieldElem};
use crate::poly::{self, Poly, PolyError, ProjPoint, RatFunc};
use crate::ramify::{analyze_cover, AnalyzeOptions, NormalizedCover, RamifyError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AddError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("excluded twist parameter ({0})")]
    ExcludedC(String),
    #[error("no admissible root of the quadratic for p = {p}, e3 = {e3}")]
    NoValidRoot { p: u64, e3: usize },
    #[error("x3^p = x4^p")]
    FrobeniusCollision,
    #[error("merging degenerates: {0}")]
    TypeDegenerates(String),
    #[error("rho^p = 1, lambda is constant")]
    DegenerateRho,
    #[error("{what}: computed {computed}, expected {expected}")]
    FormulaMismatch {
        what: String,
        computed: String,
        expected: String,
    },
    #[error("wrong ramification: {0}")]
    TypeMismatch(String),
    #[error(transparent)]
    Ramify(#[from] RamifyError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

impl AddError {
    pub fn code(&self) -> &'static str {
        match self {
            AddError::InvalidParameters(_) => "InvalidParameters",
            AddError::ExcludedC(_) => "ExcludedC",
            AddError::NoValidRoot { .. } => "NoValidRoot",
            AddError::FrobeniusCollision => "FrobeniusCollision",
            AddError::TypeDegenerates(_) => "TypeDegenerates",
            AddError::DegenerateRho => "DegenerateRho",
            AddError::FormulaMismatch { .. } => "FormulaMismatch",
            AddError::TypeMismatch(_) => "TypeMismatch",
            AddError::Ramify(e) => e.code(),
            AddError::Poly(e) => e.code(),
        }
    }
}

impl From<crate::field::FieldError> for AddError {
    fn from(e: crate::field::FieldError) -> Self {
        AddError::Poly(e.into())
    }
}

/// Polynomial `f` with ramification `e1` at inf, `e2` at 0, `e3` at 1 and `e4`
/// at `rho`, where `f(0) = 0` and `f(1) = f(rho) = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergedCover {
    pub f: RatFunc,
    pub rho: FieldElem,
    /// `(e1, e2, e3, e4)` at `(inf, 0, 1, rho)`.
    pub e: [usize; 4],
}

impl MergedCover {
    pub fn ctx(&self) -> &FieldCtx {
        self.f.ctx()
    }

    /// Confirms the four ramification points and the three branch points.
    pub fn verify(&self) -> Result<(), AddError> {
        let ctx = self.ctx();
        let one = ProjPoint::Finite(ctx.one());
        let zero = ProjPoint::Finite(ctx.zero());
        let want = vec![
            (ProjPoint::Infinity, self.e[0], ProjPoint::Infinity),
            (zero.clone(), self.e[1], zero),
            (one.clone(), self.e[2], one.clone()),
            (ProjPoint::Finite(self.rho.clone()), self.e[3], one),
        ];
        check_ramification(&self.f, want, 3)
    }
}

fn check_ramification(
    f: &RatFunc,
    mut want: Vec<(ProjPoint, usize, ProjPoint)>,
    branch_count: usize,
) -> Result<(), AddError> {
    let analysis = analyze_cover(
        f,
        &AnalyzeOptions {
            split_fibers: false,
            ..AnalyzeOptions::default()
        },
    )?;
    let mut found = analysis.ramification_points();
    found.sort();
    want.sort();
    if !analysis.complete
        || !analysis.tame
        || found != want
        || analysis.branch_points.len() != branch_count
    {
        return Err(AddError::TypeMismatch(format!(
            "found type {} with {} branch points",
            analysis.ram_type,
            analysis.branch_points.len()
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdditiveFamily {
    pub p: u64,
    pub e3: usize,
    pub e4: usize,
    pub a: FieldElem,
    pub rho: FieldElem,
    pub c: FieldElem,
    /// `a` lies in `{(e3-2)/2, (2e3-1)/3, -1}`.
    pub a_exceptional: bool,
    pub cover: MergedCover,
}

impl AdditiveFamily {
    pub fn f(&self) -> &RatFunc {
        &self.cover.f
    }

    /// Quadratic, factorization shape and `ord_0 f = 3`, checked directly.
    pub fn check_invariants(&self) -> Result<(), AddError> {
        let ctx = self.a.ctx();
        let e3 = ctx.from_i64(self.e3 as i64);
        let q = &(&(&e3 * &self.a) * &self.a) + &(&(&(&e3 + &e3) * &self.a) + &(&ctx.from_i64(2) - &e3));
        if !q.is_zero() {
            return Err(AddError::FormulaMismatch {
                what: "e3 a^2 + 2 e3 a + 2 - e3".into(),
                computed: q.to_string(),
                expected: "0".into(),
            });
        }
        let f = self.f().num();
        let shape = &(&(&Poly::linear_root(&ctx.one()).pow(self.e3 as u32)
            * &Poly::linear_root(&self.rho).pow(self.e4 as u32))
            * &Poly::linear_root(&self.a))
            .scale(&self.c);
        if &(f - &Poly::one(ctx)) != shape {
            return Err(AddError::FormulaMismatch {
                what: "f - 1 = c (x-1)^e3 (x-rho)^e4 (x-a)".into(),
                computed: (f - &Poly::one(ctx)).to_string(),
                expected: shape.to_string(),
            });
        }
        let ord0 = f.valuation_at(&ctx.zero())?;
        if ord0 != 3 {
            return Err(AddError::FormulaMismatch {
                what: "ord_0 f".into(),
                computed: ord0.to_string(),
                expected: "3".into(),
            });
        }
        let pts = [ctx.zero(), ctx.one(), self.rho.clone(), self.a.clone()];
        for i in 0..4 {
            for j in i + 1..4 {
                if pts[i] == pts[j] {
                    return Err(AddError::TypeDegenerates(format!(
                        "{} = {}",
                        pts[i], pts[j]
                    )));
                }
            }
        }
        Ok(())
    }
}

fn check_family_params(p: u64, e3: usize, e4: usize) -> Result<(), AddError> {
    if p <= 3 || !is_prime(p) {
        return Err(AddError::InvalidParameters(format!("{p} is not a prime > 3")));
    }
    if e3 + e4 != p as usize + 1 {
        return Err(AddError::InvalidParameters(format!(
            "e3 + e4 = {} != p + 1",
            e3 + e4
        )));
    }
    if !(2 <= e3 && e3 < e4 && (e4 as u64) < p) {
        return Err(AddError::InvalidParameters(format!(
            "need 2 <= e3 < e4 < p, got e3 = {e3}, e4 = {e4}"
        )));
    }
    Ok(())
}

/// Roots `a` of `e3 a^2 + 2 e3 a + 2 - e3`, then `rho` from `Q(0) = 0`
/// (cross-checked with `Q'(0) = 0`) and `c` from `f(0) = 0`.
pub fn construct_family(p: u64, e3: usize, e4: usize) -> Result<Vec<AdditiveFamily>, AddError> {
    check_family_params(p, e3, e4)?;
    let fp = FieldCtx::prime(p)?;
    let e3i = e3 as i64;
    let quadratic = Poly::from_i64s(&fp, &[2 - e3i, 2 * e3i, e3i]);
    let mut out = Vec::new();
    for root in poly::roots(&quadratic, 2)? {
        let a = root.value;
        let ctx = a.ctx().clone();
        let one = ctx.one();
        let e3k = ctx.from_i64(e3i);
        let denom = &(&e3k * &a) + &one;
        if denom.is_zero() {
            continue;
        }
        let rho = &(&(&e3k - &one) * &a) / &denom;
        let rho_check = &(&(&e3k - &ctx.from_i64(2)) - &a) / &(&e3k + &one);
        if rho != rho_check {
            return Err(AddError::FormulaMismatch {
                what: format!("rho from Q(0) and Q'(0) at a = {a}"),
                computed: rho.to_string(),
                expected: rho_check.to_string(),
            });
        }
        let pts = [ctx.zero(), one.clone(), rho.clone(), a.clone()];
        let distinct = (0..4).all(|i| (i + 1..4).all(|j| pts[i] != pts[j]));
        if !distinct {
            continue;
        }
        // f(0) = 1 + c (-1)^e3 (-rho)^e4 (-a) = 0
        let at_zero = &(&(-&one).pow_u(e3 as u128) * &(-&rho).pow_u(e4 as u128)) * &(-&a);
        let c = -&at_zero.inv()?;
        let shape = (&(&Poly::linear_root(&one).pow(e3 as u32)
            * &Poly::linear_root(&rho).pow(e4 as u32))
            * &Poly::linear_root(&a))
            .scale(&c);
        let f = RatFunc::from_poly(&shape + &Poly::one(&ctx));
        let exceptional = [
            &(&e3k - &ctx.from_i64(2)) / &ctx.from_i64(2),
            &(&(&e3k + &e3k) - &one) / &ctx.from_i64(3),
            -&one,
        ]
        .contains(&a);
        let cover = MergedCover {
            f,
            rho: rho.clone(),
            e: [p as usize + 2, 3, e3, e4],
        };
        let family = AdditiveFamily {
            p,
            e3,
            e4,
            a,
            rho,
            c,
            a_exceptional: exceptional,
            cover,
        };
        family.check_invariants()?;
        family.cover.verify()?;
        out.push(family);
    }
    if out.is_empty() {
        return Err(AddError::NoValidRoot { p, e3 });
    }
    out.sort_by(|x, y| x.a.canonical_cmp(&y.a));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Twisted {
    /// `(f + c x^p) / (1 + c)`
    pub g: NormalizedCover,
    pub c: FieldElem,
    pub lambda: FieldElem,
    pub rho: FieldElem,
    pub e: [usize; 4],
}

fn frob(x: &FieldElem) -> Result<FieldElem, AddError> {
    Ok(x.frobenius()?)
}

/// Split the merged branch point: ramification points stay put, `rho` moves
/// to `lambda = (1 + c rho^p) / (1 + c)`.
pub fn additive_twist(m: &MergedCover, c: &FieldElem) -> Result<Twisted, AddError> {
    let ctx = m.ctx().clone();
    let c = c.lift_to(&ctx)?;
    let p = ctx.characteristic();
    let one = ctx.one();
    let rho_p = frob(&m.rho)?;
    if c.is_zero() {
        return Err(AddError::ExcludedC("c = 0".into()));
    }
    if (&c + &one).is_zero() {
        return Err(AddError::ExcludedC("c = -1".into()));
    }
    if (&(&c * &rho_p) + &one).is_zero() {
        return Err(AddError::ExcludedC("c = -rho^-p".into()));
    }
    if rho_p.is_one() {
        return Err(AddError::DegenerateRho);
    }
    let twisted = m.f.num() + &Poly::monomial(c.clone(), p as usize);
    let scale = (&c + &one).inv()?;
    let g = RatFunc::new(twisted.scale(&scale), m.f.den().clone())?;
    let lambda = &(&one + &(&c * &rho_p)) * &scale;
    let at_rho = g.evaluate(&ProjPoint::Finite(m.rho.clone()))?;
    if at_rho != ProjPoint::Finite(lambda.clone()) {
        return Err(AddError::FormulaMismatch {
            what: "g(rho)".into(),
            computed: at_rho.to_string(),
            expected: lambda.to_string(),
        });
    }
    let zero = ProjPoint::Finite(ctx.zero());
    let onep = ProjPoint::Finite(one.clone());
    check_ramification(
        &g,
        vec![
            (ProjPoint::Infinity, m.e[0], ProjPoint::Infinity),
            (zero.clone(), m.e[1], zero),
            (onep.clone(), m.e[2], onep),
            (
                ProjPoint::Finite(m.rho.clone()),
                m.e[3],
                ProjPoint::Finite(lambda.clone()),
            ),
        ],
        4,
    )?;
    Ok(Twisted {
        g: NormalizedCover::new(g)?,
        c,
        lambda,
        rho: m.rho.clone(),
        e: m.e,
    })
}

/// The `c'` with `(g + c' x^p)(x3) = (g + c' x^p)(x4)`.
pub fn find_merging_c(g: &RatFunc, x3: &FieldElem, x4: &FieldElem) -> Result<FieldElem, AddError> {
    if x3 == x4 {
        return Err(AddError::InvalidParameters("x3 = x4".into()));
    }
    let (f3, f4) = (frob(x3)?, frob(x4)?);
    if f3 == f4 {
        return Err(AddError::FrobeniusCollision);
    }
    let at = |x: &FieldElem| match g.evaluate(&ProjPoint::Finite(x.clone()))? {
        ProjPoint::Finite(v) => Ok(v),
        ProjPoint::Infinity => Err(AddError::InvalidParameters(format!("{x} is a pole"))),
    };
    let c = &(&at(x4)? - &at(x3)?) / &(&f3 - &f4);
    let merged = g.num() + &Poly::monomial(c.clone(), g.ctx().characteristic() as usize);
    let analysis = analyze_cover(
        &RatFunc::new(merged, g.den().clone())?,
        &AnalyzeOptions {
            split_fibers: false,
            ..AnalyzeOptions::default()
        },
    )?;
    if analysis.branch_points.len() != 3 {
        return Err(AddError::TypeDegenerates(format!(
            "merged map has type {}",
            analysis.ram_type
        )));
    }
    Ok(c)
}

/// Inverse of [`additive_twist`]: merge `1` and `rho` again and rescale so
/// that `1` maps to `1`.
pub fn merge(t: &Twisted) -> Result<MergedCover, AddError> {
    let g = &t.g.cover;
    let ctx = g.ctx().clone();
    let one = ctx.one();
    let c = find_merging_c(g, &one, &t.rho)?;
    let merged = g.num() + &Poly::monomial(c.clone(), ctx.characteristic() as usize);
    let at_one = merged.eval(&one)?;
    let f = RatFunc::new(merged.scale(&at_one.inv()?), g.den().clone())?;
    let m = MergedCover {
        f,
        rho: t.rho.clone(),
        e: t.e,
    };
    m.verify()?;
    Ok(m)
}

/// `c -> (1 + rho^p c) / (1 + c)`, of degree 1.
pub fn lambda_of_c(m: &MergedCover) -> Result<RatFunc, AddError> {
    let ctx = m.ctx();
    let rho_p = frob(&m.rho)?;
    if rho_p.is_one() {
        return Err(AddError::DegenerateRho);
    }
    let lam = RatFunc::new(
        Poly::new(ctx, vec![ctx.one(), rho_p])?,
        Poly::from_i64s(ctx, &[1, 1]),
    )?;
    let deg = lam.map_degree()?;
    if deg != 1 {
        return Err(AddError::FormulaMismatch {
            what: "deg lambda(c)".into(),
            computed: deg.to_string(),
            expected: "1".into(),
        });
    }
    Ok(lam)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HpTransfer {
    pub h_p: u64,
    pub note: Option<String>,
}

impl fmt::Display for HpTransfer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.note {
            Some(n) => write!(f, "{} ({n})", self.h_p),
            None => write!(f, "{}", self.h_p),
        }
    }
}

/// The merged count is the four-point count.
pub fn hp_transfer(p: u64, merged_count: u64) -> HpTransfer {
    HpTransfer {
        h_p: merged_count,
        note: (merged_count == 0).then(|| format!("NoValidRoot: no family at p = {p}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_p5() {
        let fams = construct_family(5, 2, 4).unwrap();
        assert_eq!(fams.len(), 1);
        let f5 = FieldCtx::prime(5).unwrap();
        let fam = &fams[0];
        assert_eq!(fam.a, f5.from_i64(3));
        assert_eq!(fam.rho, f5.from_i64(4));
        assert_eq!(fam.c, f5.from_i64(2));
        assert!(!fam.a_exceptional);
    }

    #[test]
    fn family_p7_conjugate_pair() {
        let fams = construct_family(7, 3, 5).unwrap();
        assert_eq!(fams.len(), 2);
        assert!(fams.iter().all(|f| f.a.ctx().degree() == 2));
        assert_eq!(fams[0].a.frobenius().unwrap(), fams[1].a);
    }

    #[test]
    fn twist_p5() {
        let fam = &construct_family(5, 2, 4).unwrap()[0];
        let f5 = FieldCtx::prime(5).unwrap();
        let t = additive_twist(&fam.cover, &f5.from_i64(2)).unwrap();
        assert_eq!(t.lambda, f5.from_i64(3));
        assert_eq!(t.g.indices, [3, 2, 7]);
        let back = merge(&t).unwrap();
        assert_eq!(back, fam.cover);
        let c = find_merging_c(&t.g.cover, &f5.one(), &fam.rho).unwrap();
        // -c / (1 + c) with c = 2
        assert_eq!(c, f5.from_i64(1));
    }

    #[test]
    fn twist_exclusions() {
        let fam = &construct_family(5, 2, 4).unwrap()[0];
        let f5 = FieldCtx::prime(5).unwrap();
        for bad in [0, -1] {
            assert!(matches!(
                additive_twist(&fam.cover, &f5.from_i64(bad)),
                Err(AddError::ExcludedC(_))
            ));
        }
        // -rho^-p = -1/4 = 1
        assert!(matches!(
            additive_twist(&fam.cover, &f5.from_i64(1)),
            Err(AddError::ExcludedC(_))
        ));
    }

    #[test]
    fn lambda_of_c_is_mobius() {
        let fam = &construct_family(5, 2, 4).unwrap()[0];
        let f5 = FieldCtx::prime(5).unwrap();
        let lam = lambda_of_c(&fam.cover).unwrap();
        assert_eq!(
            lam.evaluate(&ProjPoint::Finite(f5.from_i64(2))).unwrap(),
            ProjPoint::Finite(f5.from_i64(3))
        );
        assert_eq!(
            lam.evaluate(&ProjPoint::Finite(f5.zero())).unwrap(),
            ProjPoint::Finite(f5.one())
        );
    }

    #[test]
    fn parameter_checks() {
        assert!(matches!(
            construct_family(7, 4, 4),
            Err(AddError::InvalidParameters(_))
        ));
        assert_eq!(hp_transfer(5, 1).h_p, 1);
        assert!(hp_transfer(5, 0).note.is_some());
    }
}
