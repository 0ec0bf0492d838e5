//! Ramification of rational maps of the projective line: critical points,
//! branch points, fibers, ramification type, genus, normalization.

use std::collections::BTreeMap;
use std::fmt;

use crate::field::{FieldCtx, FieldElem, FieldError, DEFAULT_MAX_EXT_DEGREE};
use crate::poly::{self, Mobius, Poly, PolyError, ProjPoint, RatFunc};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RamifyError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("map is inseparable")]
    Inseparable,
    #[error("invalid ramification type: {0}")]
    InvalidType(String),
    #[error("points of the triple are not pairwise distinct")]
    DegenerateTriple,
    #[error("map sends {point} to {actual}, expected {expected}")]
    MappingMismatch {
        point: String,
        expected: String,
        actual: String,
    },
    #[error("critical points not all found within degree {max_ext_degree} (found {found} of {expected})")]
    ExtensionTooSmall {
        max_ext_degree: u32,
        found: usize,
        expected: usize,
    },
    #[error("cover is not normalized: {0}")]
    NotNormalized(String),
}

impl From<FieldError> for RamifyError {
    fn from(e: FieldError) -> Self {
        RamifyError::Poly(e.into())
    }
}

impl RamifyError {
    pub fn code(&self) -> &'static str {
        match self {
            RamifyError::Poly(e) => e.code(),
            RamifyError::Inseparable => "Inseparable",
            RamifyError::InvalidType(_) => "InvalidType",
            RamifyError::DegenerateTriple => "DegenerateTriple",
            RamifyError::MappingMismatch { .. } => "MappingMismatch",
            RamifyError::ExtensionTooSmall { .. } => "ExtensionTooSmall",
            RamifyError::NotNormalized(_) => "NotNormalized",
        }
    }
}

/// Degree plus one partition of `d` per branch point, in branch-point order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RamType {
    pub d: usize,
    pub classes: Vec<Vec<usize>>,
}

impl RamType {
    /// Parts of each class are sorted into weakly decreasing order.
    pub fn new(d: usize, classes: Vec<Vec<usize>>) -> Result<Self, RamifyError> {
        let mut sorted = Vec::with_capacity(classes.len());
        for mut class in classes {
            if class.contains(&0) {
                return Err(RamifyError::InvalidType(format!("zero part in {class:?}")));
            }
            if class.iter().sum::<usize>() != d {
                return Err(RamifyError::InvalidType(format!(
                    "partition {class:?} does not sum to {d}"
                )));
            }
            class.sort_unstable_by(|a, b| b.cmp(a));
            sorted.push(class);
        }
        Ok(RamType { d, classes: sorted })
    }

    /// Type with one cycle of length `e_i` (padded with fixed points) per branch point.
    pub fn from_single_cycle(d: usize, cycles: &[usize]) -> Result<Self, RamifyError> {
        let classes = cycles
            .iter()
            .map(|&e| {
                if e < 1 || e > d {
                    return Err(RamifyError::InvalidType(format!("cycle length {e} outside 1..={d}")));
                }
                let mut class = vec![e];
                class.extend(std::iter::repeat_n(1, d - e));
                Ok(class)
            })
            .collect::<Result<_, _>>()?;
        Self::new(d, classes)
    }

    /// `(e_1, ..., e_r)` when every class has exactly one part above 1.
    pub fn single_cycle(&self) -> Option<Vec<usize>> {
        self.classes
            .iter()
            .map(|c| (c.iter().filter(|&&e| e > 1).count() == 1).then_some(c[0]))
            .collect()
    }

    pub fn genus(&self) -> Result<usize, RamifyError> {
        genus_from_type(self)
    }

    /// Classes in decreasing order, forgetting which branch point carries which.
    pub fn unordered(&self) -> RamType {
        let mut classes = self.classes.clone();
        classes.sort_unstable_by(|a, b| b.cmp(a));
        RamType { d: self.d, classes }
    }
}

impl fmt::Display for RamType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = match self.single_cycle() {
            Some(es) => es.iter().map(ToString::to_string).collect(),
            None => self
                .classes
                .iter()
                .map(|c| {
                    let parts: Vec<String> = c.iter().map(ToString::to_string).collect();
                    format!("[{}]", parts.join(","))
                })
                .collect(),
        };
        write!(f, "({}; {})", self.d, body.join(","))
    }
}

/// Riemann-Hurwitz: `2g - 2 = -2d + sum_i (d - n_i)`.
pub fn genus_from_type(t: &RamType) -> Result<usize, RamifyError> {
    let d = t.d as i64;
    let defect: i64 = t.classes.iter().map(|c| d - c.len() as i64).sum();
    let twice = defect - 2 * d + 2;
    if twice < 0 || twice % 2 != 0 {
        return Err(RamifyError::InvalidType(format!(
            "Riemann-Hurwitz gives 2g = {twice}"
        )));
    }
    Ok((twice / 2) as usize)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnalyzeOptions {
    pub max_ext_degree: u32,
    /// Also locate the unramified points of each fiber.
    pub split_fibers: bool,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            max_ext_degree: DEFAULT_MAX_EXT_DEGREE,
            split_fibers: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberPoint {
    pub point: ProjPoint,
    pub index: usize,
    pub field_degree: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fiber {
    pub over: ProjPoint,
    pub points: Vec<FiberPoint>,
    /// Not every point of the fiber was located.
    pub partial: bool,
}

#[derive(Debug, Clone)]
pub struct CoverAnalysis {
    pub map: RatFunc,
    pub degree: usize,
    /// Field holding all located ramification points and branch points.
    pub field: FieldCtx,
    pub branch_points: Vec<ProjPoint>,
    pub fibers: Vec<Fiber>,
    pub tame: bool,
    pub ram_type: RamType,
    /// All critical points were found within the extension bound.
    pub complete: bool,
    critical_found: usize,
    critical_expected: usize,
    max_ext_degree: u32,
}

impl CoverAnalysis {
    pub fn require_complete(&self) -> Result<&Self, RamifyError> {
        if self.complete {
            Ok(self)
        } else {
            Err(RamifyError::ExtensionTooSmall {
                max_ext_degree: self.max_ext_degree,
                found: self.critical_found,
                expected: self.critical_expected,
            })
        }
    }

    pub fn fiber_over(&self, b: &ProjPoint) -> Option<&Fiber> {
        self.fibers.iter().find(|f| &f.over == b)
    }

    /// Ramification points (index > 1) with their branch point, in fiber order.
    pub fn ramification_points(&self) -> Vec<(ProjPoint, usize, ProjPoint)> {
        self.fibers
            .iter()
            .flat_map(|f| {
                f.points
                    .iter()
                    .filter(|pt| pt.index > 1)
                    .map(|pt| (pt.point.clone(), pt.index, f.over.clone()))
            })
            .collect()
    }

    /// Index at a given ramification point, if it is one.
    pub fn index_at(&self, x: &ProjPoint) -> Option<usize> {
        self.fibers
            .iter()
            .flat_map(|f| f.points.iter())
            .find(|pt| &pt.point == x)
            .map(|pt| pt.index)
    }
}

/// Smallest `j` with `n | j | k` and `x^(p^j) = x`, where `x` lies in `F_{p^k}`.
fn minimal_degree(x: &FieldElem, base_degree: u32) -> u32 {
    let ctx = x.ctx();
    if !ctx.is_finite() {
        return 1;
    }
    let k = ctx.degree();
    let mut y = x.clone();
    for j in 1..=k {
        y = y.frobenius().expect("finite field");
        if j % base_degree == 0 && k % j == 0 && &y == x {
            return j;
        }
    }
    k
}

fn point_degree(p: &ProjPoint, base_degree: u32) -> u32 {
    match p {
        ProjPoint::Finite(x) => minimal_degree(x, base_degree),
        ProjPoint::Infinity => base_degree,
    }
}

/// Roots of `w` within the chosen working field, plus whether all were found.
fn working_roots(
    w: &Poly,
    max_ext: u32,
) -> Result<(FieldCtx, Vec<(FieldElem, usize)>, bool), RamifyError> {
    let base = w.ctx().clone();
    let total = w.deg();
    if !base.is_finite() {
        let rs = poly::rational_roots(w)?;
        let found: usize = rs.iter().map(|r| r.1).sum();
        return Ok((base, rs, found == total));
    }
    let n = base.degree();
    let all = poly::roots(w, max_ext)?;
    let mut best = (n, 0usize);
    let mut k = n;
    while k <= max_ext.max(n) {
        let captured: usize = all
            .iter()
            .filter(|r| k % r.degree == 0)
            .map(|r| r.multiplicity)
            .sum();
        if captured > best.1 {
            best = (k, captured);
        }
        k += n;
    }
    let field = if best.0 == n {
        base.clone()
    } else {
        FieldCtx::extension(base.characteristic(), best.0)?
    };
    let lifted = w.lift_to(&field)?;
    let rs = poly::roots_in_field(&lifted)?;
    let found: usize = rs.iter().map(|r| r.1).sum();
    Ok((field, rs, found == total))
}

/// Critical points, branch points, fibers and type of a nonconstant map.
pub fn analyze_cover(f: &RatFunc, opts: &AnalyzeOptions) -> Result<CoverAnalysis, RamifyError> {
    let d = f.map_degree()?;
    let w = f.wronskian();
    if w.is_zero() {
        return Err(RamifyError::Inseparable);
    }
    let base = f.ctx().clone();
    let p = base.characteristic();
    let n = base.degree().max(1);
    let (field, critical, complete) = working_roots(&w, opts.max_ext_degree)?;
    let fl = f.lift_to(&field)?;

    // ramification point -> (index, image)
    let mut ramified: Vec<(ProjPoint, usize, ProjPoint)> = Vec::new();
    for (r, _) in &critical {
        let x = ProjPoint::Finite(r.clone());
        let v = fl.evaluate(&x)?;
        let e = fl.ord_at(&x, &v)?;
        if e > 1 {
            ramified.push((x, e, v));
        }
    }
    let v_inf = fl.evaluate(&ProjPoint::Infinity)?;
    let e_inf = fl.ord_at(&ProjPoint::Infinity, &v_inf)?;
    if e_inf > 1 {
        ramified.push((ProjPoint::Infinity, e_inf, v_inf));
    }
    let tame = ramified.iter().all(|(_, e, _)| p == 0 || *e as u64 % p != 0);

    let mut by_branch: BTreeMap<ProjPoint, Vec<FiberPoint>> = BTreeMap::new();
    for (x, e, v) in &ramified {
        by_branch.entry(v.clone()).or_default().push(FiberPoint {
            point: x.clone(),
            index: *e,
            field_degree: point_degree(x, n),
        });
    }

    let mut fibers = Vec::new();
    let mut classes = Vec::new();
    for (over, mut points) in by_branch {
        let mut class: Vec<usize> = points.iter().map(|pt| pt.index).collect();
        let ramified_sum: usize = class.iter().sum();
        class.extend(std::iter::repeat_n(1, d.saturating_sub(ramified_sum)));
        let mut partial = true;
        if opts.split_fibers {
            let (extra, all_found) = unramified_fiber_points(&fl, &over, &points, d, opts, n)?;
            points.extend(extra);
            partial = !all_found;
        } else if ramified_sum == d {
            partial = false;
        }
        points.sort_by(|a, b| b.index.cmp(&a.index).then_with(|| a.point.cmp(&b.point)));
        fibers.push(Fiber {
            over,
            points,
            partial,
        });
        classes.push(class);
    }
    let branch_points = fibers.iter().map(|f| f.over.clone()).collect();
    let ram_type = RamType::new(d, classes)?;
    let critical_found = critical.iter().map(|c| c.1).sum();
    Ok(CoverAnalysis {
        map: f.clone(),
        degree: d,
        field,
        branch_points,
        fibers,
        tame,
        ram_type,
        complete,
        critical_found,
        critical_expected: w.deg(),
        max_ext_degree: opts.max_ext_degree,
    })
}

fn unramified_fiber_points(
    f: &RatFunc,
    over: &ProjPoint,
    ramified: &[FiberPoint],
    d: usize,
    opts: &AnalyzeOptions,
    base_degree: u32,
) -> Result<(Vec<FiberPoint>, bool), RamifyError> {
    let fiber_poly = match over {
        ProjPoint::Finite(b) => f.num() - &f.den().scale(b),
        ProjPoint::Infinity => f.den().clone(),
    };
    let mut out = Vec::new();
    let mut total: usize = ramified.iter().map(|pt| pt.index).sum();
    let is_ramified = |x: &ProjPoint| ramified.iter().any(|pt| &pt.point == x);
    if f.evaluate(&ProjPoint::Infinity)? == *over && !is_ramified(&ProjPoint::Infinity) {
        out.push(FiberPoint {
            point: ProjPoint::Infinity,
            index: 1,
            field_degree: base_degree,
        });
        total += 1;
    }
    if fiber_poly.deg() > 0 {
        let located: Vec<(FieldElem, u32)> = if f.ctx().is_finite() {
            poly::roots(&fiber_poly, opts.max_ext_degree)?
                .into_iter()
                .map(|r| (r.value, r.degree))
                .collect()
        } else {
            poly::rational_roots(&fiber_poly)?
                .into_iter()
                .map(|(r, _)| (r, 1))
                .collect()
        };
        for (x, _) in located {
            let pt = ProjPoint::Finite(x.clone());
            if is_ramified(&pt) {
                continue;
            }
            out.push(FiberPoint {
                field_degree: minimal_degree(&x, base_degree),
                point: pt,
                index: 1,
            });
            total += 1;
        }
    }
    Ok((out, total == d))
}

/// A cover with `f(0) = 0`, `f(1) = 1`, `f(inf) = inf`, and its indices there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedCover {
    pub cover: RatFunc,
    pub indices: [usize; 3],
}

impl NormalizedCover {
    pub fn new(cover: RatFunc) -> Result<Self, RamifyError> {
        let ctx = cover.ctx().clone();
        let pts = [
            ProjPoint::Finite(ctx.zero()),
            ProjPoint::Finite(ctx.one()),
            ProjPoint::Infinity,
        ];
        let mut indices = [0; 3];
        for (i, x) in pts.iter().enumerate() {
            let v = cover.evaluate(x)?;
            if &v != x {
                return Err(RamifyError::NotNormalized(format!("{x} maps to {v}")));
            }
            indices[i] = cover.ord_at(x, x)?;
        }
        Ok(NormalizedCover { cover, indices })
    }

    pub fn ctx(&self) -> &FieldCtx {
        self.cover.ctx()
    }
}

/// Move `source` to `(0, 1, inf)` and `target` to `(0, 1, inf)`.
pub fn normalize_cover(
    f: &RatFunc,
    source: [&ProjPoint; 3],
    target: [&ProjPoint; 3],
) -> Result<NormalizedCover, RamifyError> {
    for (x, t) in source.iter().zip(target.iter()) {
        let v = f.evaluate(x)?;
        if &&v != t {
            return Err(RamifyError::MappingMismatch {
                point: x.to_string(),
                expected: t.to_string(),
                actual: v.to_string(),
            });
        }
    }
    let degenerate = |e: PolyError| match e {
        PolyError::DegeneratePoints => RamifyError::DegenerateTriple,
        other => other.into(),
    };
    let ctx = f.ctx();
    let pre = Mobius::from_triple(ctx, source[0], source[1], source[2]).map_err(degenerate)?;
    let post = Mobius::from_triple(ctx, target[0], target[1], target[2])
        .map_err(degenerate)?
        .inverse();
    NormalizedCover::new(f.mobius(&pre, &post)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fin(x: FieldElem) -> ProjPoint {
        ProjPoint::Finite(x)
    }

    #[test]
    fn square_map_over_f5() {
        let f5 = FieldCtx::prime(5).unwrap();
        let f = RatFunc::from_poly(Poly::from_i64s(&f5, &[0, 0, 1]));
        let a = analyze_cover(&f, &AnalyzeOptions::default()).unwrap();
        assert!(a.tame && a.complete);
        assert_eq!(a.branch_points, vec![fin(f5.zero()), ProjPoint::Infinity]);
        assert_eq!(a.ram_type, RamType::new(2, vec![vec![2], vec![2]]).unwrap());
        assert_eq!(a.fibers[0].points.len(), 1);
        assert!(!a.fibers[0].partial);
    }

    #[test]
    fn cubic_three_point_cover_over_f7() {
        let f7 = FieldCtx::prime(7).unwrap();
        let f = RatFunc::from_poly(Poly::from_i64s(&f7, &[0, 0, 3, -2]));
        let a = analyze_cover(&f, &AnalyzeOptions::default()).unwrap();
        assert_eq!(a.ram_type, RamType::from_single_cycle(3, &[2, 2, 3]).unwrap());
        assert_eq!(
            a.branch_points,
            vec![fin(f7.zero()), fin(f7.one()), ProjPoint::Infinity]
        );
        assert!(a.fibers.iter().all(|f| !f.partial));
        assert_eq!(a.ram_type.genus().unwrap(), 0);
    }

    #[test]
    fn frobenius_power_is_inseparable() {
        let f5 = FieldCtx::prime(5).unwrap();
        let f = RatFunc::from_poly(Poly::monomial(f5.one(), 5));
        assert_eq!(
            analyze_cover(&f, &AnalyzeOptions::default()).unwrap_err(),
            RamifyError::Inseparable
        );
    }

    #[test]
    fn genus_examples() {
        let t = RamType::new(3, vec![vec![2, 1], vec![2, 1], vec![3]]).unwrap();
        assert_eq!(genus_from_type(&t).unwrap(), 0);
        let t = RamType::from_single_cycle(5, &[3, 2, 3, 4]).unwrap();
        assert_eq!(t.classes[3], vec![4, 1]);
        assert_eq!(genus_from_type(&t).unwrap(), 0);
        let t = RamType::from_single_cycle(3, &[2, 2, 2]).unwrap();
        assert!(matches!(genus_from_type(&t), Err(RamifyError::InvalidType(_))));
    }

    #[test]
    fn conjugate_critical_points_need_extension() {
        // y^3 - 3y over F_7 has critical points at y^2 = 1 (split); y^3 + 3y needs F_49
        let f7 = FieldCtx::prime(7).unwrap();
        let f = RatFunc::from_poly(Poly::from_i64s(&f7, &[0, 3, 0, 1]));
        let a = analyze_cover(&f, &AnalyzeOptions::default()).unwrap();
        assert!(a.complete);
        assert_eq!(a.field.degree(), 2);
        let capped = analyze_cover(
            &f,
            &AnalyzeOptions {
                max_ext_degree: 1,
                split_fibers: true,
            },
        )
        .unwrap();
        assert!(!capped.complete);
        assert!(matches!(
            capped.require_complete(),
            Err(RamifyError::ExtensionTooSmall { .. })
        ));
    }

    #[test]
    fn unsplit_fiber_is_partial() {
        let q = FieldCtx::rationals();
        // y^4 - 2y^2 vanishes at +-sqrt(2) besides the double root 0
        let f = RatFunc::from_poly(Poly::from_i64s(&q, &[0, 0, -2, 0, 1]));
        let a = analyze_cover(&f, &AnalyzeOptions::default()).unwrap();
        assert!(a.complete);
        let over_zero = a.fiber_over(&fin(q.zero())).unwrap();
        assert!(over_zero.partial);
        assert_eq!(a.ram_type.classes[1], vec![2, 1, 1]);
        let over_minus_one = a.fiber_over(&fin(q.from_i64(-1))).unwrap();
        assert!(!over_minus_one.partial);
        assert_eq!(over_minus_one.points.len(), 2);
    }

    #[test]
    fn normalization_round_trip() {
        let q = FieldCtx::rationals();
        let h = RatFunc::from_poly(Poly::from_i64s(&q, &[0, 0, 3, -2]));
        let zero = fin(q.zero());
        let one = fin(q.one());
        let inf = ProjPoint::Infinity;
        let same = normalize_cover(&h, [&zero, &one, &inf], [&zero, &one, &inf]).unwrap();
        assert_eq!(same.cover, h);
        assert_eq!(same.indices, [2, 2, 3]);

        let pre = Mobius::new(q.from_i64(2), q.from_i64(1), q.from_i64(1), q.from_i64(3)).unwrap();
        let post = Mobius::new(q.from_i64(1), q.from_i64(5), q.from_i64(-1), q.from_i64(2)).unwrap();
        let scrambled = h.mobius(&pre, &post).unwrap();
        let pinv = pre.inverse();
        let src = [pinv.apply(&zero), pinv.apply(&one), pinv.apply(&inf)];
        let tgt = [post.apply(&zero), post.apply(&one), post.apply(&inf)];
        let back = normalize_cover(
            &scrambled,
            [&src[0], &src[1], &src[2]],
            [&tgt[0], &tgt[1], &tgt[2]],
        )
        .unwrap();
        assert_eq!(back.cover, h);

        assert_eq!(
            normalize_cover(&h, [&zero, &zero, &inf], [&zero, &zero, &inf]).unwrap_err(),
            RamifyError::DegenerateTriple
        );
        assert!(matches!(
            normalize_cover(&h, [&one, &zero, &inf], [&zero, &one, &inf]),
            Err(RamifyError::MappingMismatch { .. })
        ));
    }
}
