//! Four-point covers of type `(d; e1, e2, e3, p-1)` in characteristic p built
//! from three-point covers, the map `mu -> lambda`, and bad-degree counts.

use std::collections::BTreeSet;
use std::fmt;

use crate::field::{is_prime, FieldCtx, FieldElem, DEFAULT_MAX_EXT_DEGREE};
use crate::poly::{self, Poly, PolyError, ProjPoint, RatFunc};
use crate::ramify::{analyze_cover, AnalyzeOptions, NormalizedCover, RamifyError};
use crate::symhurwitz;
use crate::threepoint::{solve_three_point, ThreePointError, ThreePointSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MuExclusion {
    Zero,
    One,
    Infinity,
    ImageZero,
    ImageOne,
    Pole,
    FixedPoint,
    Degenerate,
}

impl fmt::Display for MuExclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MuExclusion::Zero => "mu-zero",
            MuExclusion::One => "mu-one",
            MuExclusion::Infinity => "mu-infinity",
            MuExclusion::ImageZero => "image-zero",
            MuExclusion::ImageOne => "image-one",
            MuExclusion::Pole => "pole",
            MuExclusion::FixedPoint => "fixed-point",
            MuExclusion::Degenerate => "degenerate",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MultError {
    #[error("invalid type: {0}")]
    InvalidType(String),
    #[error("no covers: {witness}")]
    NoCovers { witness: String },
    #[error("{what}: computed {computed}, formula {expected}")]
    FormulaMismatch {
        what: String,
        computed: String,
        expected: String,
    },
    #[error("invalid mu ({0})")]
    InvalidMu(MuExclusion),
    #[error("mu is not a ramification point over lambda")]
    NotRamifiedHere,
    #[error("index {found} at mu, expected {expected}")]
    WrongIndex { found: usize, expected: usize },
    #[error("branch value {0} is excluded")]
    BranchValueExcluded(String),
    #[error("minimum of e_i(d+1-e_i) is not at e1 for {0:?}")]
    MinNotAtFirst([usize; 3]),
    #[error("hypothesis fails: {0}")]
    HypothesisFails(String),
    #[error("lifted cover has the wrong type: {0}")]
    TypeMismatch(String),
    #[error(transparent)]
    ThreePoint(#[from] ThreePointError),
    #[error(transparent)]
    Ramify(#[from] RamifyError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

impl MultError {
    pub fn code(&self) -> &'static str {
        match self {
            MultError::InvalidType(_) => "InvalidType",
            MultError::NoCovers { .. } => "NoCovers",
            MultError::FormulaMismatch { .. } => "FormulaMismatch",
            MultError::InvalidMu(_) => "InvalidMu",
            MultError::NotRamifiedHere => "NotRamifiedHere",
            MultError::WrongIndex { .. } => "WrongIndex",
            MultError::BranchValueExcluded(_) => "BranchValueExcluded",
            MultError::MinNotAtFirst(_) => "MinNotAtFirst",
            MultError::HypothesisFails(_) => "HypothesisFails",
            MultError::TypeMismatch(_) => "TypeMismatch",
            MultError::ThreePoint(e) => e.code(),
            MultError::Ramify(e) => e.code(),
            MultError::Poly(e) => e.code(),
        }
    }
}

/// `(e1, e2, e3)` with `1 < e_i < p`, `E = e1 + e2 + e3` even; the fourth index
/// is `p - 1` and the degree `d = (E + p - 3) / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FourPointType {
    pub p: u64,
    pub e: [usize; 3],
}

impl FourPointType {
    pub fn new(p: u64, e1: usize, e2: usize, e3: usize) -> Result<Self, MultError> {
        if p < 3 || !is_prime(p) {
            return Err(MultError::InvalidType(format!("{p} is not an odd prime")));
        }
        let e = [e1, e2, e3];
        if let Some(&bad) = e.iter().find(|&&x| x < 2 || x as u64 >= p) {
            return Err(MultError::InvalidType(format!(
                "index {bad} outside 1 < e < {p}"
            )));
        }
        if (e1 + e2 + e3) % 2 != 0 {
            return Err(MultError::InvalidType(format!(
                "E = {} is odd",
                e1 + e2 + e3
            )));
        }
        Ok(FourPointType { p, e })
    }

    pub fn big_e(&self) -> usize {
        self.e.iter().sum()
    }

    pub fn degree(&self) -> usize {
        (self.big_e() + self.p as usize - 3) / 2
    }

    /// `d + 1 - e3`
    pub fn d_tilde(&self) -> usize {
        self.degree() + 1 - self.e[2]
    }

    /// `p + 1 <= E <= p - 1 + 2 min e_i`
    pub fn admissible(&self) -> Result<(), MultError> {
        let p = self.p as usize;
        let big_e = self.big_e();
        let min = *self.e.iter().min().unwrap();
        if big_e < p + 1 {
            return Err(MultError::NoCovers {
                witness: format!("E = {big_e} < p + 1 = {}", p + 1),
            });
        }
        if big_e > p - 1 + 2 * min {
            return Err(MultError::NoCovers {
                witness: format!("E = {big_e} > p - 1 + 2 min e_i = {}", p - 1 + 2 * min),
            });
        }
        Ok(())
    }

    /// The three-point type `(d~; e1, e2, p - e3)`.
    pub fn tilde(&self) -> Result<ThreePointSpec, MultError> {
        if self.e[2] as u64 == self.p - 1 {
            return Err(MultError::InvalidType("e3 = p - 1".into()));
        }
        self.admissible()?;
        Ok(ThreePointSpec::new(
            self.e[0],
            self.e[1],
            self.p as usize - self.e[2],
        )?)
    }

    /// All types with `e3 != p - 1` satisfying the admissibility bounds.
    pub fn admissible_types(p: u64) -> Vec<FourPointType> {
        let mut out = Vec::new();
        for e1 in 2..p as usize {
            for e2 in 2..p as usize {
                for e3 in 2..p as usize - 1 {
                    if let Ok(t) = FourPointType::new(p, e1, e2, e3) {
                        if t.admissible().is_ok() {
                            out.push(t);
                        }
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for FourPointType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}; {},{},{},{})",
            self.degree(),
            self.e[0],
            self.e[1],
            self.e[2],
            self.p - 1
        )
    }
}

/// `(3p - 1 - E) / 2` when admissible, else 0.
pub fn p_hurwitz_4pt(t: &FourPointType) -> u64 {
    match t.admissible() {
        Ok(()) => (3 * t.p - 1 - t.big_e() as u64) / 2,
        Err(_) => 0,
    }
}

#[derive(Debug, Clone)]
pub struct LambdaMap {
    pub t: FourPointType,
    pub base: NormalizedCover,
    pub map: RatFunc,
    pub degree: usize,
    /// `{ r^p : h2(r) = 0 }`, sorted.
    pub supersingular: Vec<ProjPoint>,
    pub max_ext_degree: u32,
}

impl LambdaMap {
    pub fn p(&self) -> u64 {
        self.t.p
    }

    /// The root set of the denominator of the base cover.
    pub fn h2_roots(&self) -> Result<Vec<ProjPoint>, MultError> {
        let den = self.base.cover.den();
        if den.deg() == 0 {
            return Ok(Vec::new());
        }
        let mut out: Vec<ProjPoint> = poly::roots(den, self.max_ext_degree)?
            .into_iter()
            .map(|r| ProjPoint::Finite(r.value))
            .collect();
        out.sort();
        Ok(out)
    }

    /// `lambda(mu)` has a nonzero derivative.
    pub fn is_separable(&self) -> bool {
        !self.map.wronskian().is_zero()
    }

    /// Whether the fiber over `lambda0` has fewer than `degree` points for
    /// reasons other than the base cover: a multiple root or a point at infinity.
    pub fn is_critical_value(&self, lambda0: &FieldElem) -> Result<bool, MultError> {
        let map = self.map.lift_to(lambda0.ctx())?;
        if map.evaluate(&ProjPoint::Infinity)? == ProjPoint::Finite(lambda0.clone()) {
            return Ok(true);
        }
        let fiber = map.num() - &map.den().scale(lambda0);
        Ok(fiber.gcd(&fiber.derivative())?.deg() > 0)
    }
}

pub fn lambda_map(ctx: &FieldCtx, t: &FourPointType) -> Result<LambdaMap, MultError> {
    lambda_map_with(ctx, t, DEFAULT_MAX_EXT_DEGREE)
}

/// `lambda(mu) = mu^p (1 - h(mu)) / (mu^p - h(mu))` for the three-point cover `h`
/// of type `(d~; e1, e2, p - e3)`.
pub fn lambda_map_with(
    ctx: &FieldCtx,
    t: &FourPointType,
    max_ext_degree: u32,
) -> Result<LambdaMap, MultError> {
    if ctx.characteristic() != t.p {
        return Err(MultError::InvalidType(format!(
            "field {ctx} does not have characteristic {}",
            t.p
        )));
    }
    let spec = t.tilde()?;
    let base = solve_three_point(ctx, &spec)?;
    let (n, dn) = (base.cover.num(), base.cover.den());
    let mu_p = Poly::monomial(ctx.one(), t.p as usize);
    let num = &mu_p * &(dn - n);
    let den = &(&mu_p * dn) - n;
    let map = RatFunc::new(num, den)?;
    let degree = map.map_degree()?;
    let p = t.p as usize;
    let expected = (3 * p - 1 - t.big_e()) / 2;
    if degree != expected {
        return Err(MultError::FormulaMismatch {
            what: format!("deg lambda for {t}"),
            computed: degree.to_string(),
            expected: expected.to_string(),
        });
    }
    let via_tilde = p - t.e[0] + t.d_tilde() - t.e[1];
    if degree != via_tilde {
        return Err(MultError::FormulaMismatch {
            what: format!("deg lambda = p - e1 + d~ - e2 for {t}"),
            computed: degree.to_string(),
            expected: via_tilde.to_string(),
        });
    }
    let mut lm = LambdaMap {
        t: *t,
        base,
        map,
        degree,
        supersingular: Vec::new(),
        max_ext_degree,
    };
    let mut ss: Vec<ProjPoint> = lm
        .h2_roots()?
        .into_iter()
        .map(|r| match r {
            ProjPoint::Finite(x) => Ok(ProjPoint::Finite(x.frobenius().map_err(PolyError::from)?)),
            ProjPoint::Infinity => Ok(r),
        })
        .collect::<Result<_, MultError>>()?;
    ss.sort();
    lm.supersingular = ss;
    Ok(lm)
}

/// `h(mu)` checked against the exclusions `mu not in {0, 1, inf}` and
/// `h(mu) not in {0, 1, inf, mu^p}`.
fn check_mu(h: &RatFunc, mu: &ProjPoint) -> Result<FieldElem, MultError> {
    let m = mu.finite().ok_or(MultError::InvalidMu(MuExclusion::Infinity))?;
    if m.is_zero() {
        return Err(MultError::InvalidMu(MuExclusion::Zero));
    }
    if m.is_one() {
        return Err(MultError::InvalidMu(MuExclusion::One));
    }
    let hm = match h.evaluate(mu)? {
        ProjPoint::Infinity => return Err(MultError::InvalidMu(MuExclusion::Pole)),
        ProjPoint::Finite(v) => v,
    };
    if hm.is_zero() {
        return Err(MultError::InvalidMu(MuExclusion::ImageZero));
    }
    if hm.is_one() {
        return Err(MultError::InvalidMu(MuExclusion::ImageOne));
    }
    if hm == m.frobenius().map_err(PolyError::from)? {
        return Err(MultError::InvalidMu(MuExclusion::FixedPoint));
    }
    Ok(hm)
}

/// Lift `h` and `mu` into a common field.
fn align(h: &NormalizedCover, mu: &ProjPoint) -> Result<RatFunc, MultError> {
    match mu {
        ProjPoint::Finite(m) => Ok(h.cover.lift_to(m.ctx())?),
        ProjPoint::Infinity => Ok(h.cover.clone()),
    }
}

#[derive(Debug, Clone)]
pub struct Lifted {
    pub f: NormalizedCover,
    pub lambda: FieldElem,
}

/// `(u - u(0)) / (u(1) - u(0))`
fn renormalize(u: &RatFunc) -> Result<RatFunc, MultError> {
    let ctx = u.ctx();
    let at = |x: FieldElem| match u.evaluate(&ProjPoint::Finite(x))? {
        ProjPoint::Finite(v) => Ok(v),
        ProjPoint::Infinity => Err(MultError::InvalidMu(MuExclusion::Degenerate)),
    };
    let (u0, u1) = (at(ctx.zero())?, at(ctx.one())?);
    let span = &u1 - &u0;
    if span.is_zero() {
        return Err(MultError::InvalidMu(MuExclusion::Degenerate));
    }
    Ok(u.add_constant(&-u0).scale(&span.inv().map_err(PolyError::from)?))
}

/// `w = (y - mu)^p / (h - h(mu))`, normalized; returns the cover and
/// `lambda = f(mu)`.
pub fn lift(h: &NormalizedCover, mu: &ProjPoint) -> Result<Lifted, MultError> {
    lift_with(h, mu, DEFAULT_MAX_EXT_DEGREE)
}

pub fn lift_with(h: &NormalizedCover, mu: &ProjPoint, max_ext_degree: u32) -> Result<Lifted, MultError> {
    let hl = align(h, mu)?;
    let ctx = hl.ctx().clone();
    let p = ctx.characteristic();
    if p == 0 {
        return Err(MultError::InvalidType("characteristic 0".into()));
    }
    let hm = check_mu(&hl, mu)?;
    let m = mu.finite().expect("checked finite");
    let mu_p = m.frobenius().map_err(PolyError::from)?;
    let num = &Poly::linear_root(m).pow(p as u32) * hl.den();
    let den = hl.num() - &hl.den().scale(&hm);
    let w = RatFunc::new(num, den)?;
    let f = renormalize(&w)?;
    let lambda = match f.evaluate(mu)? {
        ProjPoint::Finite(v) => v,
        ProjPoint::Infinity => return Err(MultError::InvalidMu(MuExclusion::Degenerate)),
    };
    let closed = &(&mu_p * &(&ctx.one() - &hm)) / &(&mu_p - &hm);
    if lambda != closed {
        return Err(MultError::FormulaMismatch {
            what: "lambda = mu^p (1 - h(mu)) / (mu^p - h(mu))".into(),
            computed: lambda.to_string(),
            expected: closed.to_string(),
        });
    }
    let f = NormalizedCover::new(f)?;
    let expected = [h.indices[0], h.indices[1], p as usize - h.indices[2]];
    verify_four_point(&f, &expected, mu, &lambda, max_ext_degree)?;
    Ok(Lifted { f, lambda })
}

fn verify_four_point(
    f: &NormalizedCover,
    expected: &[usize; 3],
    mu: &ProjPoint,
    lambda: &FieldElem,
    max_ext_degree: u32,
) -> Result<(), MultError> {
    let analysis = analyze_cover(
        &f.cover,
        &AnalyzeOptions {
            max_ext_degree,
            split_fibers: false,
        },
    )?;
    let ctx = f.ctx();
    let p = ctx.characteristic() as usize;
    let want = [
        (ProjPoint::Finite(ctx.zero()), expected[0], ProjPoint::Finite(ctx.zero())),
        (ProjPoint::Finite(ctx.one()), expected[1], ProjPoint::Finite(ctx.one())),
        (ProjPoint::Infinity, expected[2], ProjPoint::Infinity),
        (mu.clone(), p - 1, ProjPoint::Finite(lambda.clone())),
    ];
    let mut found = analysis.ramification_points();
    found.sort();
    let mut want_sorted = want.to_vec();
    want_sorted.sort();
    if !analysis.complete || !analysis.tame || found != want_sorted {
        return Err(MultError::TypeMismatch(format!(
            "expected indices {expected:?} and {} at mu, found type {}",
            p - 1,
            analysis.ram_type
        )));
    }
    Ok(())
}

/// `g = (y - mu)^p / (f - lambda)`, normalized.
pub fn contract(
    f: &NormalizedCover,
    lambda: &ProjPoint,
    mu: &ProjPoint,
) -> Result<NormalizedCover, MultError> {
    let fc = align(f, mu)?;
    let ctx = fc.ctx().clone();
    let p = ctx.characteristic() as usize;
    let (ProjPoint::Finite(m), ProjPoint::Finite(l)) = (mu, lambda) else {
        return Err(MultError::NotRamifiedHere);
    };
    let l = l.lift_to(&ctx).map_err(PolyError::from)?;
    let lp = ProjPoint::Finite(l.clone());
    if fc.evaluate(mu)? != lp {
        return Err(MultError::NotRamifiedHere);
    }
    let e = fc.ord_at(mu, &lp)?;
    if e == 1 {
        return Err(MultError::NotRamifiedHere);
    }
    if e != p - 1 {
        return Err(MultError::WrongIndex {
            found: e,
            expected: p - 1,
        });
    }
    let num = &Poly::linear_root(m).pow(p as u32) * fc.den();
    let den = fc.num() - &fc.den().scale(&l);
    let g = RatFunc::new(num, den)?;
    Ok(NormalizedCover::new(renormalize(&g)?)?)
}

/// Distinct `mu` over the searched fields with `lambda(mu) = lambda0` that pass
/// the lifting exclusions.
pub fn count_covers_at(
    lm: &LambdaMap,
    lambda0: &ProjPoint,
    max_ext_degree: u32,
) -> Result<usize, MultError> {
    let l = match lambda0 {
        ProjPoint::Finite(l) if !l.is_zero() && !l.is_one() => l,
        _ => return Err(MultError::BranchValueExcluded(lambda0.to_string())),
    };
    let map = lm.map.lift_to(l.ctx())?;
    let fiber = map.num() - &map.den().scale(l);
    if fiber.is_zero() {
        return Err(MultError::BranchValueExcluded(lambda0.to_string()));
    }
    let mut count = 0;
    let mut lifted: Vec<(FieldCtx, RatFunc)> = Vec::new();
    for root in poly::roots(&fiber, max_ext_degree)? {
        let ctx = root.value.ctx().clone();
        let h = match lifted.iter().find(|(c, _)| c == &ctx) {
            Some((_, h)) => h.clone(),
            None => {
                let h = lm.base.cover.lift_to(&ctx)?;
                lifted.push((ctx, h.clone()));
                h
            }
        };
        if check_mu(&h, &ProjPoint::Finite(root.value)).is_ok() {
            count += 1;
        }
    }
    Ok(count)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BadCase {
    /// `d <= p - 1`
    Good,
    /// `p <= d <= p - 2 + e1`
    Mixed,
    /// `d > p - 2 + e1`
    AllBad,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BadDegree {
    pub t: FourPointType,
    pub d: usize,
    pub case: BadCase,
    pub value: u64,
    pub h: u64,
    pub h_p: u64,
}

fn bad_key(d: usize, e: usize) -> usize {
    e * (d + 1 - e)
}

/// Reorder so that `min e_i (d + 1 - e_i)` over the first three indices sits at `e1`.
pub fn sort_for_bad_degree(p: u64, e: [usize; 3]) -> [usize; 3] {
    let d = (e.iter().sum::<usize>() + p as usize - 3) / 2;
    let mut out = e;
    out.sort_by_key(|&x| (bad_key(d, x), x));
    out
}

/// Piecewise bad degree `h - h_p`, checked against the four-point Hurwitz
/// number and `p_hurwitz_4pt`.
pub fn bad_degree(p: u64, e: [usize; 3]) -> Result<BadDegree, MultError> {
    let t = FourPointType::new(p, e[0], e[1], e[2])?;
    let d = t.degree();
    let pu = p as usize;
    if d < pu - 1 {
        return Err(MultError::InvalidType(format!(
            "e4 = {} exceeds the degree {d}",
            pu - 1
        )));
    }
    let min3 = e.iter().map(|&x| bad_key(d, x)).min().unwrap();
    if bad_key(d, e[0]) != min3 {
        return Err(MultError::MinNotAtFirst(e));
    }
    let four = [e[0], e[1], e[2], pu - 1];
    let h = symhurwitz::min_formula(d, four)
        .map_err(|err| MultError::InvalidType(err.to_string()))?;
    let h_p = p_hurwitz_4pt(&t);
    let (case, value) = if d < pu {
        (BadCase::Good, 0)
    } else if d <= pu - 2 + e[0] {
        (BadCase::Mixed, (pu * (d + 1 - pu)) as u64)
    } else {
        (BadCase::AllBad, bad_key(d, e[0]) as u64)
    };
    if h < h_p || value != h - h_p {
        return Err(MultError::FormulaMismatch {
            what: format!("bad degree for {t}"),
            computed: value.to_string(),
            expected: format!("h - h_p = {h} - {h_p}"),
        });
    }
    Ok(BadDegree {
        t,
        d,
        case,
        value,
        h,
        h_p,
    })
}

/// All sorted `(e1, e2, e3)` with a genuine four-point type (`E >= p + 1`).
pub fn bad_degree_types(p: u64) -> Vec<[usize; 3]> {
    let mut seen = BTreeSet::new();
    for e1 in 2..p as usize {
        for e2 in e1..p as usize {
            for e3 in e2..p as usize {
                let Ok(t) = FourPointType::new(p, e1, e2, e3) else {
                    continue;
                };
                if t.big_e() >= p as usize + 1 {
                    seen.insert(sort_for_bad_degree(p, [e1, e2, e3]));
                }
            }
        }
    }
    seen.into_iter().collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Divisibility {
    pub divisible: bool,
    pub quotient: u64,
}

/// In the mixed case `p` divides `h - h_p`, with quotient `d + 1 - p`.
pub fn divisibility_check(p: u64, e: [usize; 3]) -> Result<Divisibility, MultError> {
    let b = bad_degree(p, e)?;
    if b.h == b.h_p || b.h_p == 0 {
        return Err(MultError::HypothesisFails(format!(
            "h = {}, h_p = {}",
            b.h, b.h_p
        )));
    }
    let diff = b.h - b.h_p;
    let divisible = diff % p == 0;
    let quotient = diff / p;
    let expected = (b.d + 1 - p as usize) as u64;
    if !divisible || quotient != expected {
        return Err(MultError::FormulaMismatch {
            what: format!("(h - h_p) / p for {}", b.t),
            computed: format!("{diff}/{p}"),
            expected: expected.to_string(),
        });
    }
    Ok(Divisibility {
        divisible,
        quotient,
    })
}
