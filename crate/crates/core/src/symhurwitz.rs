//! Hurwitz numbers in characteristic zero by enumerating tuples of cycles in S_d.

use std::fmt;

pub const DEFAULT_DEGREE_CAP: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HurwitzError {
    #[error("degree {d} exceeds the enumeration cap {cap}")]
    DegreeTooLarge { d: usize, cap: usize },
    #[error("cycle length {e} outside 1..={d}")]
    InvalidCycleLength { e: usize, d: usize },
    #[error("need at least 3 branch points, got {0}")]
    TooFewClasses(usize),
    #[error("type is not genus 0: sum of (e_i - 1) is {defect}, expected {expected}")]
    NotGenusZero { defect: usize, expected: usize },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
}

impl HurwitzError {
    pub fn code(&self) -> &'static str {
        match self {
            HurwitzError::DegreeTooLarge { .. } => "DegreeTooLarge",
            HurwitzError::InvalidCycleLength { .. } => "InvalidCycleLength",
            HurwitzError::TooFewClasses(_) => "TooFewClasses",
            HurwitzError::NotGenusZero { .. } => "NotGenusZero",
            HurwitzError::InvalidPermutation(_) => "InvalidPermutation",
        }
    }
}

/// A permutation of `{0, ..., d-1}`. Products compose right to left:
/// `(a * b)(x) = a(b(x))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    pub fn identity(d: usize) -> Self {
        Permutation {
            images: (0..d as u8).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, HurwitzError> {
        let d = images.len();
        let mut seen = vec![false; d];
        for &x in &images {
            if x >= d || seen[x] {
                return Err(HurwitzError::InvalidPermutation(format!("{images:?}")));
            }
            seen[x] = true;
        }
        Ok(Permutation {
            images: images.into_iter().map(|x| x as u8).collect(),
        })
    }

    /// The cycle `c[0] -> c[1] -> ... -> c[0]` in `S_d`.
    pub fn cycle(d: usize, c: &[usize]) -> Result<Self, HurwitzError> {
        let mut images: Vec<usize> = (0..d).collect();
        for (i, &x) in c.iter().enumerate() {
            if x >= d {
                return Err(HurwitzError::InvalidPermutation(format!("{c:?}")));
            }
            images[x] = c[(i + 1) % c.len()];
        }
        Self::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize).collect()
    }

    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other.images.iter().map(|&x| self.images[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u8; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as u8;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    /// `s * self * s^-1`
    pub fn conjugate_by(&self, s: &Permutation) -> Permutation {
        let mut images = vec![0u8; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[s.images[i] as usize] = s.images[x as usize];
        }
        Permutation { images }
    }

    /// Cycle lengths in weakly decreasing order, fixed points included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let d = self.images.len();
        let mut seen = vec![false; d];
        let mut out = Vec::new();
        for start in 0..d {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x] as usize;
                len += 1;
            }
            out.push(len);
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    /// Whether this is a single `e`-cycle (identity when `e = 1`).
    pub fn is_single_cycle(&self, e: usize) -> bool {
        let moved = self
            .images
            .iter()
            .enumerate()
            .filter(|(i, &x)| *i != x as usize)
            .count();
        if e == 1 {
            return moved == 0;
        }
        if moved != e {
            return false;
        }
        let start = self
            .images
            .iter()
            .enumerate()
            .position(|(i, &x)| i != x as usize)
            .expect("moved point");
        let mut len = 1;
        let mut x = self.images[start] as usize;
        while x != start {
            x = self.images[x] as usize;
            len += 1;
        }
        len == e
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.images)
    }
}

/// All `e`-cycles in `S_d`, each listed once.
pub fn all_cycles(d: usize, e: usize) -> Vec<Permutation> {
    if e == 1 {
        return vec![Permutation::identity(d)];
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(e);
    let mut used = vec![false; d];
    for first in 0..d {
        current.push(first);
        used[first] = true;
        extend_cycle(d, e, first, &mut current, &mut used, &mut out);
        used[first] = false;
        current.pop();
    }
    out
}

fn extend_cycle(
    d: usize,
    e: usize,
    first: usize,
    current: &mut Vec<usize>,
    used: &mut [bool],
    out: &mut Vec<Permutation>,
) {
    if current.len() == e {
        out.push(Permutation::cycle(d, current).expect("valid cycle"));
        return;
    }
    // the smallest element leads so each cycle appears once
    for x in first + 1..d {
        if used[x] {
            continue;
        }
        used[x] = true;
        current.push(x);
        extend_cycle(d, e, first, current, used, out);
        current.pop();
        used[x] = false;
    }
}

pub fn is_transitive(d: usize, gens: &[&Permutation]) -> bool {
    let mut parent: Vec<usize> = (0..d).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut components = d;
    for g in gens {
        for x in 0..d {
            let (a, b) = (find(&mut parent, x), find(&mut parent, g.apply(x)));
            if a != b {
                parent[a] = b;
                components -= 1;
            }
        }
    }
    components == 1
}

/// Order of the centralizer in `S_d` of a transitive tuple.
pub fn centralizer_order(d: usize, gens: &[&Permutation]) -> usize {
    // a commuting permutation is fixed by its value at 0
    (0..d)
        .filter(|&target| {
            let mut sigma = vec![usize::MAX; d];
            sigma[0] = target;
            let mut queue = vec![0];
            while let Some(x) = queue.pop() {
                for g in gens {
                    let (gx, gsx) = (g.apply(x), g.apply(sigma[x]));
                    if sigma[gx] == usize::MAX {
                        sigma[gx] = gsx;
                        queue.push(gx);
                    } else if sigma[gx] != gsx {
                        return false;
                    }
                }
            }
            let mut seen = vec![false; d];
            sigma.iter().all(|&s| s != usize::MAX && !std::mem::replace(&mut seen[s], true))
        })
        .count()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleClassCount {
    pub d: usize,
    pub cycle_lengths: Vec<usize>,
    pub count: u64,
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

pub fn hurwitz_char0(d: usize, cycles: &[usize]) -> Result<TupleClassCount, HurwitzError> {
    hurwitz_char0_capped(d, cycles, DEFAULT_DEGREE_CAP)
}

/// Classes of tuples `(g_1, ..., g_r)` of single `e_i`-cycles with product 1
/// generating a transitive subgroup, up to simultaneous conjugation.
pub fn hurwitz_char0_capped(
    d: usize,
    cycles: &[usize],
    cap: usize,
) -> Result<TupleClassCount, HurwitzError> {
    if d > cap {
        return Err(HurwitzError::DegreeTooLarge { d, cap });
    }
    if cycles.len() < 3 {
        return Err(HurwitzError::TooFewClasses(cycles.len()));
    }
    if let Some(&e) = cycles.iter().find(|&&e| e < 1 || e > d) {
        return Err(HurwitzError::InvalidCycleLength { e, d });
    }
    let mut order = cycles.to_vec();
    order.sort_unstable();
    let r = order.len();
    let fixed_len = order[r - 1];
    let solved_len = order[r - 2];
    let fixed = Permutation::cycle(d, &(0..fixed_len).collect::<Vec<_>>())?;
    let fixed_inv = fixed.inverse();
    let pools: Vec<Vec<Permutation>> = order[..r - 2].iter().map(|&e| all_cycles(d, e)).collect();

    // sum over tuples of |Cent(tuple)|, divided by |Cent(fixed)|
    let mut weighted: u64 = 0;
    let mut stack: Vec<&Permutation> = Vec::with_capacity(r);
    walk(&pools, 0, &Permutation::identity(d), &mut stack, &mut |prefix, product| {
        let solved = product.inverse().compose(&fixed_inv);
        if !solved.is_single_cycle(solved_len) {
            return;
        }
        let mut gens: Vec<&Permutation> = prefix.to_vec();
        gens.push(&solved);
        gens.push(&fixed);
        if is_transitive(d, &gens) {
            weighted += centralizer_order(d, &gens) as u64;
        }
    });
    let cent = fixed_len as u64 * factorial(d - fixed_len);
    debug_assert_eq!(weighted % cent, 0);
    Ok(TupleClassCount {
        d,
        cycle_lengths: cycles.to_vec(),
        count: weighted / cent,
    })
}

fn walk<'a, F>(
    pools: &'a [Vec<Permutation>],
    depth: usize,
    product: &Permutation,
    stack: &mut Vec<&'a Permutation>,
    visit: &mut F,
) where
    F: FnMut(&[&'a Permutation], &Permutation),
{
    if depth == pools.len() {
        visit(stack, product);
        return;
    }
    for g in &pools[depth] {
        stack.push(g);
        walk(pools, depth + 1, &product.compose(g), stack, visit);
        stack.pop();
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MinFormulaCheck {
    pub enumerated: u64,
    pub formula: u64,
    pub agree: bool,
}

/// `min_i e_i (d + 1 - e_i)` for a genus-0 single-cycle four-point type.
pub fn min_formula(d: usize, e: [usize; 4]) -> Result<u64, HurwitzError> {
    let defect: usize = e.iter().map(|&x| x.saturating_sub(1)).sum();
    if defect + 2 != 2 * d {
        return Err(HurwitzError::NotGenusZero {
            defect,
            expected: 2 * d - 2,
        });
    }
    if let Some(&bad) = e.iter().find(|&&x| x < 1 || x > d) {
        return Err(HurwitzError::InvalidCycleLength { e: bad, d });
    }
    Ok(e.iter().map(|&x| (x * (d + 1 - x)) as u64).min().unwrap())
}

pub fn verify_min_formula(d: usize, e: [usize; 4]) -> Result<MinFormulaCheck, HurwitzError> {
    let formula = min_formula(d, e)?;
    let enumerated = hurwitz_char0(d, &e)?.count;
    Ok(MinFormulaCheck {
        enumerated,
        formula,
        agree: enumerated == formula,
    })
}

/// All genus-0 single-cycle types with `r` branch points, degree `d`, and
/// `2 <= e_i <= d`, each as a weakly increasing tuple.
pub fn genus_zero_types(d: usize, r: usize) -> Vec<Vec<usize>> {
    fn rec(d: usize, r: usize, min: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for e in min..=d {
            if e - 1 > left {
                break;
            }
            cur.push(e);
            rec(d, r, e, left - (e - 1), cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if d >= 2 {
        rec(d, r, 2, 2 * d - 2, &mut Vec::new(), &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_counts() {
        assert_eq!(all_cycles(5, 3).len(), 20);
        assert_eq!(all_cycles(4, 4).len(), 6);
        assert!(all_cycles(5, 3).iter().all(|c| c.is_single_cycle(3)));
    }

    #[test]
    fn composition_is_right_to_left() {
        let a = Permutation::cycle(3, &[0, 1]).unwrap();
        let b = Permutation::cycle(3, &[1, 2]).unwrap();
        assert_eq!(a.compose(&b).apply(1), 2);
        assert_eq!(a.compose(&b).apply(0), 1);
        assert_eq!(a.compose(&b).cycle_type(), vec![3]);
    }

    #[test]
    fn three_point_examples() {
        assert_eq!(hurwitz_char0(3, &[2, 2, 3]).unwrap().count, 1);
        assert_eq!(hurwitz_char0(3, &[2, 2, 2]).unwrap().count, 0);
    }

    #[test]
    fn four_point_example() {
        assert_eq!(hurwitz_char0(5, &[3, 2, 3, 4]).unwrap().count, 8);
    }

    #[test]
    fn min_formula_checks() {
        let c = verify_min_formula(4, [2, 2, 2, 4]).unwrap();
        assert_eq!((c.enumerated, c.formula, c.agree), (4, 4, true));
        let c = verify_min_formula(5, [2, 3, 3, 4]).unwrap();
        assert_eq!((c.enumerated, c.formula, c.agree), (8, 8, true));
        assert!(matches!(
            verify_min_formula(4, [2, 2, 2, 2]),
            Err(HurwitzError::NotGenusZero { .. })
        ));
    }

    #[test]
    fn errors() {
        assert!(matches!(
            hurwitz_char0(10, &[2, 9, 10]),
            Err(HurwitzError::DegreeTooLarge { .. })
        ));
        assert!(matches!(
            hurwitz_char0(4, &[2, 5, 4]),
            Err(HurwitzError::InvalidCycleLength { e: 5, .. })
        ));
    }

    #[test]
    fn centralizer_of_full_cycle() {
        let c = Permutation::cycle(5, &[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(centralizer_order(5, &[&c]), 5);
    }

    #[test]
    fn genus_zero_type_listing() {
        assert_eq!(genus_zero_types(3, 3), vec![vec![2, 2, 3]]);
        assert!(genus_zero_types(5, 4).contains(&vec![2, 3, 3, 4]));
    }
}
