//! The normalized genus-0 cover of type `(d; e1, e2, e3)` branched at 0, 1, inf,
//! from the kernel of a linear system.

use std::fmt;

use crate::field::FieldCtx;
use crate::linalg;
use crate::poly::{Poly, PolyError, ProjPoint, RatFunc};
use crate::ramify::{analyze_cover, AnalyzeOptions, NormalizedCover, RamifyError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ThreePointError {
    #[error("invalid three-point type: {0}")]
    InvalidSpec(String),
    #[error("no such cover: {0}")]
    NoSuchCover(String),
    #[error("kernel of dimension {dim} for {spec}")]
    KernelDimensionUnexpected { spec: String, dim: usize },
    #[error(transparent)]
    Ramify(#[from] RamifyError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

impl ThreePointError {
    pub fn code(&self) -> &'static str {
        match self {
            ThreePointError::InvalidSpec(_) => "InvalidSpec",
            ThreePointError::NoSuchCover(_) => "NoSuchCover",
            ThreePointError::KernelDimensionUnexpected { .. } => "KernelDimensionUnexpected",
            ThreePointError::Ramify(e) => e.code(),
            ThreePointError::Poly(e) => e.code(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ThreePointSpec {
    pub e: [usize; 3],
    pub d: usize,
}

impl ThreePointSpec {
    pub fn new(e1: usize, e2: usize, e3: usize) -> Result<Self, ThreePointError> {
        let e = [e1, e2, e3];
        if e.iter().any(|&x| x < 2) {
            return Err(ThreePointError::InvalidSpec(format!(
                "indices {e:?} must be at least 2"
            )));
        }
        let sum = e1 + e2 + e3;
        if sum % 2 == 0 {
            return Err(ThreePointError::InvalidSpec(format!(
                "e1 + e2 + e3 = {sum} is even; genus 0 needs 2d + 1"
            )));
        }
        let d = (sum - 1) / 2;
        if let Some(&big) = e.iter().find(|&&x| x > d) {
            return Err(ThreePointError::InvalidSpec(format!(
                "index {big} exceeds degree {d}"
            )));
        }
        Ok(ThreePointSpec { e, d })
    }

    /// All valid specs of degree at most `max_d`, ordered by `(d, e)`.
    pub fn all_up_to(max_d: usize) -> Vec<ThreePointSpec> {
        let mut out = Vec::new();
        for d in 2..=max_d {
            for e1 in 2..=d {
                for e2 in 2..=d {
                    let Some(e3) = (2 * d + 1).checked_sub(e1 + e2) else {
                        continue;
                    };
                    if let Ok(s) = Self::new(e1, e2, e3) {
                        out.push(s);
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for ThreePointSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; {},{},{})", self.d, self.e[0], self.e[1], self.e[2])
    }
}

/// Unknowns: `A` (degree `d - e1`), `B` (degree `d - e3`), `C` (degree
/// `d - e2`) with `y^e1 A - B - (y - 1)^e2 C = 0`, so `f = y^e1 A / B`.
pub fn solve_three_point(
    ctx: &FieldCtx,
    spec: &ThreePointSpec,
) -> Result<NormalizedCover, ThreePointError> {
    let [e1, e2, e3] = spec.e;
    let d = spec.d;
    let p = ctx.characteristic();
    if p != 0 && d as u64 >= p {
        return Err(ThreePointError::NoSuchCover(format!(
            "degree {d} is not below the characteristic {p}"
        )));
    }
    let (na, nb, nc) = (d - e1 + 1, d - e3 + 1, d - e2 + 1);
    let ncols = na + nb + nc;
    let one_minus = Poly::from_i64s(ctx, &[-1, 1]).pow(e2 as u32);
    let mut rows = vec![vec![ctx.zero(); ncols]; d + 1];
    for i in 0..na {
        rows[i + e1][i] = ctx.one();
    }
    for i in 0..nb {
        rows[i][na + i] = -ctx.one();
    }
    for i in 0..nc {
        for (j, c) in one_minus.coeffs().iter().enumerate() {
            rows[i + j][na + nb + i] = -c;
        }
    }
    let kernel = linalg::kernel(ctx, &rows, ncols);
    if kernel.len() != 1 {
        return Err(ThreePointError::KernelDimensionUnexpected {
            spec: spec.to_string(),
            dim: kernel.len(),
        });
    }
    let v = &kernel[0];
    let lead_b = &v[na + nb - 1];
    if lead_b.is_zero() {
        return Err(ThreePointError::NoSuchCover(format!(
            "{spec}: denominator drops degree"
        )));
    }
    let scale = lead_b.inv().map_err(PolyError::from)?;
    let a = Poly::new(ctx, v[..na].to_vec())?.scale(&scale);
    let b = Poly::new(ctx, v[na..na + nb].to_vec())?.scale(&scale);
    let c = Poly::new(ctx, v[na + nb..].to_vec())?.scale(&scale);

    let degenerate = |why: &str| Err(ThreePointError::NoSuchCover(format!("{spec}: {why}")));
    if a.degree() != Some(d - e1) || c.degree() != Some(d - e2) {
        return degenerate("numerator degree drops");
    }
    if a.coeff(0).is_zero() {
        return degenerate("A(0) = 0");
    }
    if c.eval(&ctx.one())?.is_zero() {
        return degenerate("C(1) = 0");
    }
    let num = a.shift(e1);
    if num.gcd(&b)?.deg() > 0 || (&num - &b).gcd(&b)?.deg() > 0 {
        return degenerate("numerator and denominator share a factor");
    }
    let f = RatFunc::new(num, b)?;
    verify_type(&f, spec)?;
    Ok(NormalizedCover::new(f)?)
}

/// Checks ramification exactly `e1, e2, e3` at `0, 1, inf` over `0, 1, inf`
/// and nowhere else.
fn verify_type(f: &RatFunc, spec: &ThreePointSpec) -> Result<(), ThreePointError> {
    let analysis = analyze_cover(
        f,
        &AnalyzeOptions {
            split_fibers: false,
            ..AnalyzeOptions::default()
        },
    )?;
    analysis.require_complete()?;
    let ctx = f.ctx();
    let expected = [
        (ProjPoint::Finite(ctx.zero()), spec.e[0]),
        (ProjPoint::Finite(ctx.one()), spec.e[1]),
        (ProjPoint::Infinity, spec.e[2]),
    ];
    let found = analysis.ramification_points();
    let ok = analysis.tame
        && analysis.degree == spec.d
        && found.len() == 3
        && expected.iter().all(|(x, e)| {
            found
                .iter()
                .any(|(pt, idx, over)| pt == x && idx == e && over == x)
        });
    if ok {
        Ok(())
    } else {
        Err(ThreePointError::NoSuchCover(format!(
            "{spec}: solution has type {}",
            analysis.ram_type
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_b_over_q() {
        let q = FieldCtx::rationals();
        let h = solve_three_point(&q, &ThreePointSpec::new(3, 2, 2).unwrap()).unwrap();
        let expected = RatFunc::new(
            Poly::from_i64s(&q, &[0, 0, 0, 1]),
            Poly::from_i64s(&q, &[-2, 3]),
        )
        .unwrap();
        assert_eq!(h.cover, expected);
        assert_eq!(h.indices, [3, 2, 2]);
    }

    #[test]
    fn cubic_with_double_points() {
        let q = FieldCtx::rationals();
        let h = solve_three_point(&q, &ThreePointSpec::new(2, 2, 3).unwrap()).unwrap();
        assert_eq!(h.cover, RatFunc::from_poly(Poly::from_i64s(&q, &[0, 0, 3, -2])));
        let one_minus = (&Poly::one(&q) - h.cover.num()).monic();
        let expected = &Poly::from_i64s(&q, &[-1, 1]).pow(2) * &Poly::from_i64s(&q, &[1, 2]);
        assert_eq!(one_minus, expected.monic());
    }

    #[test]
    fn too_large_degree_in_small_characteristic() {
        let f3 = FieldCtx::prime(3).unwrap();
        assert!(matches!(
            solve_three_point(&f3, &ThreePointSpec::new(2, 2, 3).unwrap()),
            Err(ThreePointError::NoSuchCover(_))
        ));
    }

    #[test]
    fn parity_rejected() {
        assert!(matches!(
            ThreePointSpec::new(2, 2, 4),
            Err(ThreePointError::InvalidSpec(_))
        ));
        assert!(matches!(
            ThreePointSpec::new(2, 3, 8),
            Err(ThreePointError::InvalidSpec(_))
        ));
    }

    #[test]
    fn reduction_matches_direct_solve() {
        let q = FieldCtx::rationals();
        let f11 = FieldCtx::prime(11).unwrap();
        for spec in ThreePointSpec::all_up_to(6) {
            let over_q = solve_three_point(&q, &spec).unwrap();
            let direct = solve_three_point(&f11, &spec).unwrap();
            assert_eq!(over_q.cover.reduce_into(&f11).unwrap(), direct.cover, "{spec}");
        }
    }
}
