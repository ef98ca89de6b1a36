//! Sparse square matrices over a named basis.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::{Complex, Complex64};

/// Scalars the engine works over. Integer types give exact identities.
pub trait Scalar:
    Copy
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn conj(self) -> Self;
    fn to_complex(self) -> Complex64;

    fn is_zero(self) -> bool {
        self == Self::zero()
    }
}

impl Scalar for i64 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn conj(self) -> Self {
        self
    }
    fn to_complex(self) -> Complex64 {
        Complex64::new(self as f64, 0.0)
    }
}

impl Scalar for Complex<i64> {
    fn zero() -> Self {
        Complex::new(0, 0)
    }
    fn one() -> Self {
        Complex::new(1, 0)
    }
    fn conj(self) -> Self {
        Complex::conj(&self)
    }
    fn to_complex(self) -> Complex64 {
        Complex64::new(self.re as f64, self.im as f64)
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn conj(self) -> Self {
        Complex::conj(&self)
    }
    fn to_complex(self) -> Complex64 {
        self
    }
}

/// Ordered basis labels. Matrices may only be combined when they share the
/// same `Arc<Basis>`.
#[derive(Debug)]
pub struct Basis {
    labels: Vec<String>,
}

impl Basis {
    pub fn new(labels: Vec<String>) -> Arc<Self> {
        Arc::new(Basis { labels })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

/// A square sparse matrix, stored as rows of `(column, value)` sorted by column.
#[derive(Clone)]
pub struct OperatorMatrix<T> {
    basis: Arc<Basis>,
    rows: Vec<Vec<(usize, T)>>,
}

impl<T: Scalar> fmt::Debug for OperatorMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in row {
                m.entry(&(self.basis.label(r), self.basis.label(*c)), v);
            }
        }
        m.finish()
    }
}

/// A differing entry between two matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct EntryMismatch<T> {
    pub row: usize,
    pub col: usize,
    pub left: T,
    pub right: T,
}

impl<T: Scalar> OperatorMatrix<T> {
    pub fn zeros(basis: &Arc<Basis>) -> Self {
        OperatorMatrix { basis: basis.clone(), rows: vec![Vec::new(); basis.len()] }
    }

    pub fn identity(basis: &Arc<Basis>) -> Self {
        Self::diagonal(basis, (0..basis.len()).map(|i| (i, T::one())))
    }

    pub fn diagonal(basis: &Arc<Basis>, entries: impl IntoIterator<Item = (usize, T)>) -> Self {
        Self::from_triplets(basis, entries.into_iter().map(|(i, v)| (i, i, v)))
    }

    /// Builds from `(row, col, value)`; duplicates are summed, zeros dropped.
    pub fn from_triplets(basis: &Arc<Basis>, entries: impl IntoIterator<Item = (usize, usize, T)>) -> Self {
        let mut rows: Vec<Vec<(usize, T)>> = vec![Vec::new(); basis.len()];
        for (r, c, v) in entries {
            rows[r].push((c, v));
        }
        for row in &mut rows {
            normalize_row(row);
        }
        OperatorMatrix { basis: basis.clone(), rows }
    }

    pub fn basis(&self) -> &Arc<Basis> {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn row(&self, r: usize) -> &[(usize, T)] {
        &self.rows[r]
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        match self.rows[r].binary_search_by_key(&c, |e| e.0) {
            Ok(i) => self.rows[r][i].1,
            Err(_) => T::zero(),
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        self.rows.iter().enumerate().flat_map(|(r, row)| row.iter().map(move |&(c, v)| (r, c, v)))
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    fn check_basis(&self, other: &Self) {
        assert!(Arc::ptr_eq(&self.basis, &other.basis), "matrices live on different bases");
    }

    pub fn adjoint(&self) -> Self {
        let mut rows: Vec<Vec<(usize, T)>> = vec![Vec::new(); self.dim()];
        for (r, row) in self.rows.iter().enumerate() {
            for &(c, v) in row {
                rows[c].push((r, v.conj()));
            }
        }
        OperatorMatrix { basis: self.basis.clone(), rows }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_basis(other);
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut out = Vec::new();
                for &(k, a) in row {
                    out.extend(other.rows[k].iter().map(|&(c, b)| (c, a * b)));
                }
                normalize_row(&mut out);
                out
            })
            .collect();
        OperatorMatrix { basis: self.basis.clone(), rows }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, T::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, -T::one())
    }

    fn combine(&self, other: &Self, sign: T) -> Self {
        self.check_basis(other);
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| {
                let mut out: Vec<(usize, T)> = a.clone();
                out.extend(b.iter().map(|&(c, v)| (c, sign * v)));
                normalize_row(&mut out);
                out
            })
            .collect();
        OperatorMatrix { basis: self.basis.clone(), rows }
    }

    pub fn scale(&self, s: T) -> Self {
        let rows = self
            .rows
            .iter()
            .map(|row| row.iter().map(|&(c, v)| (c, s * v)).filter(|e| !e.1.is_zero()).collect())
            .collect();
        OperatorMatrix { basis: self.basis.clone(), rows }
    }

    /// Applies the matrix to the basis vector `ξ_col`.
    pub fn column(&self, col: usize) -> Vec<(usize, T)> {
        self.rows
            .iter()
            .enumerate()
            .filter_map(|(r, row)| row.binary_search_by_key(&col, |e| e.0).ok().map(|i| (r, row[i].1)))
            .collect()
    }

    /// Only the diagonal entries.
    pub fn diagonal_part(&self) -> Self {
        Self::diagonal(&self.basis, (0..self.dim()).map(|i| (i, self.get(i, i))))
    }

    /// The first entry `(row, col)` in row-major order, with `col` admitted by
    /// `cols`, where the two matrices differ.
    pub fn first_mismatch(&self, other: &Self, cols: impl Fn(usize) -> bool) -> Option<EntryMismatch<T>> {
        self.check_basis(other);
        for (r, (a, b)) in self.rows.iter().zip(&other.rows).enumerate() {
            let mut candidates: Vec<usize> = a.iter().chain(b).map(|e| e.0).filter(|&c| cols(c)).collect();
            candidates.sort_unstable();
            candidates.dedup();
            for c in candidates {
                let (x, y) = (self.get(r, c), other.get(r, c));
                if x != y {
                    return Some(EntryMismatch { row: r, col: c, left: x, right: y });
                }
            }
        }
        None
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> OperatorMatrix<U> {
        let rows = self
            .rows
            .iter()
            .map(|row| row.iter().map(|&(c, v)| (c, f(v))).filter(|e| !e.1.is_zero()).collect())
            .collect();
        OperatorMatrix { basis: self.basis.clone(), rows }
    }

    pub fn to_complex(&self) -> OperatorMatrix<Complex64> {
        self.map(Scalar::to_complex)
    }
}

impl<T: Scalar> PartialEq for OperatorMatrix<T> {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.basis, &other.basis) && self.rows == other.rows
    }
}

fn normalize_row<T: Scalar>(row: &mut Vec<(usize, T)>) {
    row.sort_by_key(|e| e.0);
    let mut out: Vec<(usize, T)> = Vec::with_capacity(row.len());
    for &(c, v) in row.iter() {
        match out.last_mut() {
            Some(last) if last.0 == c => last.1 = last.1 + v,
            _ => out.push((c, v)),
        }
    }
    out.retain(|e| !e.1.is_zero());
    *row = out;
}
