//! Dense polynomials over F_p on raw residues (ascending coefficients).
//!
//! Used for extension-field moduli and for multiplying/inverting extension
//! elements. Every function expects inputs already reduced into `[0, p)`.

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

pub(crate) fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

pub(crate) fn inv_mod(a: u64, p: u64) -> Option<u64> {
    if a % p == 0 {
        return None;
    }
    let (mut r0, mut r1) = (p as i128, (a % p) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(p as i128) as u64)
}

pub(crate) fn trim(v: &mut Vec<u64>) {
    while let Some(&0) = v.last() {
        v.pop();
    }
}

pub(crate) fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out: Vec<u64> = (0..n)
        .map(|i| {
            sub_mod(
                a.get(i).copied().unwrap_or(0),
                b.get(i).copied().unwrap_or(0),
                p,
            )
        })
        .collect();
    trim(&mut out);
    out
}

pub(crate) fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = add_mod(out[i + j], mul_mod(x, y, p), p);
        }
    }
    trim(&mut out);
    out
}

/// Quotient and remainder; `b` must be nonzero.
pub(crate) fn divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut b = b.to_vec();
    trim(&mut b);
    assert!(!b.is_empty(), "fp_poly::divrem by zero polynomial");
    let mut r = a.to_vec();
    trim(&mut r);
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lead_inv = inv_mod(*b.last().unwrap(), p).expect("leading coefficient invertible");
    let db = b.len() - 1;
    let mut q = vec![0u64; r.len() - db];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let coef = mul_mod(*r.last().unwrap(), lead_inv, p);
        q[shift] = coef;
        for (j, &bj) in b.iter().enumerate() {
            r[shift + j] = sub_mod(r[shift + j], mul_mod(coef, bj, p), p);
        }
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

pub(crate) fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    divrem(a, m, p).1
}

pub(crate) fn monic(a: &[u64], p: u64) -> Vec<u64> {
    match a.last() {
        None => Vec::new(),
        Some(&lc) => {
            let inv = inv_mod(lc, p).expect("nonzero leading coefficient");
            a.iter().map(|&c| mul_mod(c, inv, p)).collect()
        }
    }
}

pub(crate) fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    monic(&x, p)
}

pub(crate) fn mul_rem(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    rem(&mul(a, b, p), m, p)
}

pub(crate) fn pow_rem(base: &[u64], mut exp: u128, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = rem(&[1], m, p);
    let mut b = rem(base, m, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_rem(&acc, &b, m, p);
        }
        b = mul_rem(&b, &b, m, p);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m` (extended Euclid), if `gcd(a, m) = 1`.
pub(crate) fn inverse_rem(a: &[u64], m: &[u64], p: u64) -> Option<Vec<u64>> {
    let mut r0 = m.to_vec();
    let mut r1 = rem(a, m, p);
    let mut s0: Vec<u64> = Vec::new();
    let mut s1: Vec<u64> = vec![1];
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p);
        let s = sub(&s0, &mul(&q, &s1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    if r0.len() != 1 {
        return None;
    }
    let inv = inv_mod(r0[0], p)?;
    let scaled: Vec<u64> = s0.iter().map(|&c| mul_mod(c, inv, p)).collect();
    Some(rem(&scaled, m, p))
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            out.push(q);
            while n % q == 0 {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's irreducibility test for a monic `f` of degree `n >= 1`.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let n = f.len() as u32 - 1;
    if n == 1 {
        return true;
    }
    if f[0] == 0 {
        return false;
    }
    // frob[i] = t^(p^i) mod f
    let t = vec![0, 1];
    let mut frob = vec![rem(&t, f, p)];
    for _ in 0..n {
        let next = pow_rem(frob.last().unwrap(), p as u128, f, p);
        frob.push(next);
    }
    if !sub(&frob[n as usize], &rem(&t, f, p), p).is_empty() {
        return false;
    }
    prime_factors(n).into_iter().all(|q| {
        let diff = sub(&frob[(n / q) as usize], &t, p);
        gcd(f, &diff, p).len() == 1
    })
}

/// The monic irreducible of degree `n` whose non-leading coefficients,
/// read as base-`p` digits with the constant term least significant,
/// form the smallest integer.
pub(crate) fn smallest_irreducible(p: u64, n: u32) -> Option<Vec<u64>> {
    let total = (p as u128).checked_pow(n)?;
    (0..total).find_map(|index| {
        let mut coeffs = Vec::with_capacity(n as usize + 1);
        let mut rest = index;
        for _ in 0..n {
            coeffs.push((rest % p as u128) as u64);
            rest /= p as u128;
        }
        coeffs.push(1);
        is_irreducible(&coeffs, p).then_some(coeffs)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_quadratic_over_f5() {
        assert_eq!(smallest_irreducible(5, 2), Some(vec![2, 0, 1]));
    }

    #[test]
    fn smallest_over_f2() {
        assert_eq!(smallest_irreducible(2, 2), Some(vec![1, 1, 1]));
        assert_eq!(smallest_irreducible(2, 3), Some(vec![1, 1, 0, 1]));
    }

    #[test]
    fn irreducibility_matches_root_scan_for_cubics() {
        // a cubic over F_7 is irreducible iff it has no root
        for index in 0..343u64 {
            let f = vec![index % 7, (index / 7) % 7, index / 49, 1];
            let has_root = (0..7).any(|x| {
                f.iter()
                    .rev()
                    .fold(0, |acc, &c| add_mod(mul_mod(acc, x, 7), c, 7))
                    == 0
            });
            assert_eq!(is_irreducible(&f, 7), !has_root, "{f:?}");
        }
    }

    #[test]
    fn inverse_in_quotient() {
        let m = vec![2, 0, 1];
        let a = vec![1, 4];
        let inv = inverse_rem(&a, &m, 5).unwrap();
        assert_eq!(mul_rem(&a, &inv, &m, 5), vec![1]);
    }
}
