//! Operator norms of sparse matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::matrix::OperatorMatrix;
use super::RepError;

/// Blocks up to this dimension are solved by a dense singular value decomposition.
pub const DENSE_LIMIT: usize = 400;

/// Iteration budget for the power method on larger blocks.
pub const POWER_ITERATIONS: usize = 20_000;

/// The largest singular value of `m`, computed per connected block.
pub fn operator_norm(m: &OperatorMatrix<Complex64>, tol: f64) -> Result<f64, RepError> {
    let n = m.dim();
    // Rows are nodes 0..n, columns n..2n.
    let mut parent: Vec<usize> = (0..2 * n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (r, c, _) in m.entries() {
        let (a, b) = (find(&mut parent, r), find(&mut parent, n + c));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut blocks: std::collections::BTreeMap<usize, (Vec<usize>, Vec<usize>)> = Default::default();
    for (r, c, _) in m.entries() {
        let root = find(&mut parent, r);
        let block = blocks.entry(root).or_default();
        block.0.push(r);
        block.1.push(c);
    }
    let mut best: f64 = 0.0;
    for (_, (mut rows, mut cols)) in blocks {
        rows.sort_unstable();
        rows.dedup();
        cols.sort_unstable();
        cols.dedup();
        best = best.max(block_norm(m, &rows, &cols, tol)?);
    }
    Ok(best)
}

fn block_norm(m: &OperatorMatrix<Complex64>, rows: &[usize], cols: &[usize], tol: f64) -> Result<f64, RepError> {
    let col_pos = |c: usize| cols.binary_search(&c).expect("column in block");
    if rows.len().max(cols.len()) <= DENSE_LIMIT {
        let mut dense = DMatrix::<Complex64>::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for &(c, v) in m.row(r) {
                dense[(i, col_pos(c))] = v;
            }
        }
        return Ok(dense.singular_values().iter().copied().fold(0.0, f64::max));
    }
    // Power iteration on M*M restricted to the block.
    let mut v: Vec<Complex64> = (0..cols.len()).map(|j| Complex64::new(1.0 + (j % 7) as f64 * 1e-3, 0.0)).collect();
    normalize(&mut v);
    let mut prev = 0.0;
    for _ in 0..POWER_ITERATIONS {
        let mv: Vec<Complex64> = rows.iter().map(|&r| m.row(r).iter().map(|&(c, x)| x * v[col_pos(c)]).sum()).collect();
        let mut w = vec![Complex64::new(0.0, 0.0); cols.len()];
        for (i, &r) in rows.iter().enumerate() {
            for &(c, x) in m.row(r) {
                w[col_pos(c)] += x.conj() * mv[i];
            }
        }
        let lambda = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if lambda == 0.0 {
            return Ok(0.0);
        }
        v = w;
        normalize(&mut v);
        if (lambda - prev).abs() <= tol * lambda.max(1.0) {
            return Ok(lambda.sqrt());
        }
        prev = lambda;
    }
    Err(RepError::NonConvergence(POWER_ITERATIONS))
}

fn normalize(v: &mut [Complex64]) {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|z| *z /= n);
    }
}
