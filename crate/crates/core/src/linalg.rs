//! Exact nullspace computation by row reduction.

use crate::field::{FieldCtx, FieldElem};

/// Basis of `{x : M x = 0}` for an `rows.len() x ncols` matrix, one vector
/// per free column (free entry 1, other free entries 0).
pub fn kernel(ctx: &FieldCtx, rows: &[Vec<FieldElem>], ncols: usize) -> Vec<Vec<FieldElem>> {
    let mut m: Vec<Vec<FieldElem>> = rows.to_vec();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(pr) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = m[r][col].inv().expect("nonzero pivot");
        for j in col..ncols {
            m[r][j] = &m[r][j] * &inv;
        }
        for i in 0..m.len() {
            if i == r || m[i][col].is_zero() {
                continue;
            }
            let factor = m[i][col].clone();
            for j in col..ncols {
                let delta = &factor * &m[r][j];
                m[i][j] = &m[i][j] - &delta;
            }
        }
        pivots.push(col);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![ctx.zero(); ncols];
            v[free] = ctx.one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -&m[row][free];
            }
            v
        })
        .collect()
}
