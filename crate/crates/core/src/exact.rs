//! Exact integer linear algebra.
//!
//! Determinants use fraction-free (Bareiss) elimination, and linear systems
//! are solved with its Gauss-Jordan variant so that every intermediate value
//! stays an integer minor of the input. Both routines first run over checked
//! `i128` arithmetic and fall back to [`BigInt`] when an intermediate value
//! overflows, which keeps the small binary games of this crate fast without
//! giving up exactness on large inputs.

use std::fmt;
use std::ops::Index;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("column index {index} is outside 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("expected a vector of length {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("matrix rows must all have length {expected}")]
    NotSquare { expected: usize },
}

/// Dense square matrix of arbitrary-precision integers, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        IntMatrix { n, entries: vec![BigInt::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { BigInt::one() } else { BigInt::zero() })
    }

    pub fn all_ones(n: usize) -> Self {
        IntMatrix { n, entries: vec![BigInt::one(); n * n] }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        IntMatrix { n, entries }
    }

    /// Builds a matrix from rows of machine integers. Every row must have
    /// exactly `rows.len()` entries.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self, ExactError> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            let row = row.as_ref();
            if row.len() != n {
                return Err(ExactError::NotSquare { expected: n });
            }
            entries.extend(row.iter().map(|&v| BigInt::from(v)));
        }
        Ok(IntMatrix { n, entries })
    }

    pub fn from_big_rows(rows: Vec<Vec<BigInt>>) -> Result<Self, ExactError> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(ExactError::NotSquare { expected: n });
            }
            entries.extend(row);
        }
        Ok(IntMatrix { n, entries })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> &BigInt {
        &self.entries[row * self.n + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: BigInt) {
        self.entries[row * self.n + col] = value;
    }

    pub fn row(&self, row: usize) -> &[BigInt] {
        &self.entries[row * self.n..(row + 1) * self.n]
    }

    pub fn column(&self, col: usize) -> Vec<BigInt> {
        (0..self.n).map(|i| self.get(i, col).clone()).collect()
    }

    pub fn rows(&self) -> impl Iterator<Item = &[BigInt]> {
        self.entries.chunks(self.n.max(1)).take(self.n)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    pub fn swap_columns(&self, a: usize, b: usize) -> Self {
        Self::from_fn(self.n, |i, j| {
            let j = if j == a {
                b
            } else if j == b {
                a
            } else {
                j
            };
            self.get(i, j).clone()
        })
    }

    /// Entrywise `self - other`.
    pub fn sub(&self, other: &IntMatrix) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        IntMatrix {
            n: self.n,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        }
    }

    /// Entrywise `self + other`.
    pub fn add(&self, other: &IntMatrix) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        IntMatrix {
            n: self.n,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        }
    }

    /// `M v`
    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.n, "dimension mismatch");
        self.rows()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `vᵀ M`
    pub fn vec_mul(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.n, "dimension mismatch");
        (0..self.n)
            .map(|j| (0..self.n).map(|i| &v[i] * self.get(i, j)).sum())
            .collect()
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.entries.iter().map(|v| v.abs()).max().unwrap_or_else(BigInt::zero)
    }

    pub fn is_binary(&self) -> bool {
        self.entries.iter().all(|v| v.is_zero() || v.is_one())
    }

    pub fn row_sums(&self) -> Vec<BigInt> {
        self.rows().map(|row| row.iter().sum()).collect()
    }

    /// Entries as `i64`, if every one of them fits.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        self.rows()
            .map(|row| row.iter().map(|v| v.to_i64()).collect::<Option<Vec<_>>>())
            .collect()
    }

    pub(crate) fn entries_as<T: FfScalar>(&self) -> Option<Vec<T>> {
        self.entries.iter().map(T::from_big).collect()
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (row, col): (usize, usize)) -> &BigInt {
        self.get(row, col)
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix({}x{}) [", self.n, self.n)?;
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Raised by the checked scalar path when an intermediate value no longer fits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Overflow;

/// Ring operations needed by fraction-free elimination. The `i128`
/// implementation is checked; `BigInt` never fails.
pub(crate) trait FfScalar: Clone + Ord {
    fn from_big(v: &BigInt) -> Option<Self>;
    fn from_i64(v: i64) -> Self;
    fn to_big(&self) -> BigInt;
    /// `(a * b - c * d) / e`, where the division is known to be exact.
    fn cross_div(a: &Self, b: &Self, c: &Self, d: &Self, e: &Self) -> Result<Self, Overflow>;
    fn neg(&self) -> Result<Self, Overflow>;
    /// `self + a * b`.
    fn mul_add(&self, a: &Self, b: &Self) -> Result<Self, Overflow>;

    fn ff_zero() -> Self {
        Self::from_i64(0)
    }
    fn ff_one() -> Self {
        Self::from_i64(1)
    }
    fn ff_is_zero(&self) -> bool {
        *self == Self::ff_zero()
    }
}

impl FfScalar for i128 {
    fn from_big(v: &BigInt) -> Option<Self> {
        v.to_i128()
    }
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn cross_div(a: &Self, b: &Self, c: &Self, d: &Self, e: &Self) -> Result<Self, Overflow> {
        let ab = a.checked_mul(*b).ok_or(Overflow)?;
        let cd = c.checked_mul(*d).ok_or(Overflow)?;
        let diff = ab.checked_sub(cd).ok_or(Overflow)?;
        debug_assert_eq!(diff % e, 0, "inexact fraction-free division");
        diff.checked_div(*e).ok_or(Overflow)
    }
    fn neg(&self) -> Result<Self, Overflow> {
        self.checked_neg().ok_or(Overflow)
    }
    fn mul_add(&self, a: &Self, b: &Self) -> Result<Self, Overflow> {
        a.checked_mul(*b).and_then(|p| self.checked_add(p)).ok_or(Overflow)
    }
}

impl FfScalar for BigInt {
    fn from_big(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn cross_div(a: &Self, b: &Self, c: &Self, d: &Self, e: &Self) -> Result<Self, Overflow> {
        let diff = a * b - c * d;
        debug_assert!(diff.is_multiple_of(e), "inexact fraction-free division");
        Ok(diff / e)
    }
    fn neg(&self) -> Result<Self, Overflow> {
        Ok(-self)
    }
    fn mul_add(&self, a: &Self, b: &Self) -> Result<Self, Overflow> {
        Ok(self + a * b)
    }
}

/// Bareiss determinant of an `n x n` row-major matrix.
pub(crate) fn ff_det<T: FfScalar>(mut m: Vec<T>, n: usize) -> Result<T, Overflow> {
    if n == 0 {
        return Ok(T::ff_one());
    }
    let mut negate = false;
    let mut prev = T::ff_one();
    for k in 0..n {
        if m[k * n + k].ff_is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r * n + k].ff_is_zero()) else {
                return Ok(T::ff_zero());
            };
            for j in 0..n {
                m.swap(k * n + j, r * n + j);
            }
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = T::cross_div(&m[i * n + j], &m[k * n + k], &m[i * n + k], &m[k * n + j], &prev)?;
                m[i * n + j] = v;
            }
        }
        prev = m[k * n + k].clone();
    }
    if negate {
        prev.neg()
    } else {
        Ok(prev)
    }
}

/// Solution of an integer system as a common denominator over integer numerators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct FfSolution<T> {
    pub numerators: Vec<T>,
    /// `det M`; never zero.
    pub denominator: T,
}

/// Fraction-free Gauss-Jordan elimination on the augmented `n x (n + 1)`
/// row-major matrix `[M | b]`. Returns `Ok(None)` when `M` is singular.
pub(crate) fn ff_solve<T: FfScalar>(mut m: Vec<T>, n: usize) -> Result<Option<FfSolution<T>>, Overflow> {
    let w = n + 1;
    let mut prev = T::ff_one();
    let mut negate = false;
    for k in 0..n {
        if m[k * w + k].ff_is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r * w + k].ff_is_zero()) else {
                return Ok(None);
            };
            for j in 0..w {
                m.swap(k * w + j, r * w + j);
            }
            negate = !negate;
        }
        let pivot = m[k * w + k].clone();
        for i in 0..n {
            if i == k {
                continue;
            }
            let factor = m[i * w + k].clone();
            for j in k + 1..w {
                let v = T::cross_div(&m[i * w + j], &pivot, &factor, &m[k * w + j], &prev)?;
                m[i * w + j] = v;
            }
            m[i * w + k] = T::ff_zero();
            if i < k {
                m[i * w + i] = pivot.clone();
            }
        }
        prev = pivot;
    }
    let mut numerators: Vec<T> = (0..n).map(|i| m[i * w + n].clone()).collect();
    if negate {
        for v in numerators.iter_mut() {
            *v = v.neg()?;
        }
        prev = prev.neg()?;
    }
    Ok(Some(FfSolution { numerators, denominator: prev }))
}

/// Runs `ff_solve` in `i128`, then in `BigInt` if that overflows.
pub(crate) fn solve_integer_system(aug: &[BigInt], n: usize) -> Option<FfSolution<BigInt>> {
    if let Some(small) = aug.iter().map(i128::from_big).collect::<Option<Vec<_>>>() {
        if let Ok(res) = ff_solve(small, n) {
            return res.map(|s| FfSolution {
                numerators: s.numerators.iter().map(|v| v.to_big()).collect(),
                denominator: s.denominator.to_big(),
            });
        }
    }
    ff_solve(aug.to_vec(), n).expect("BigInt arithmetic cannot overflow")
}

/// Exact determinant.
pub fn det(m: &IntMatrix) -> BigInt {
    if let Some(small) = m.entries_as::<i128>() {
        if let Ok(d) = ff_det(small, m.n) {
            return d.to_big();
        }
    }
    ff_det(m.entries.clone(), m.n).expect("BigInt arithmetic cannot overflow")
}

/// Copy of `m` with column `i` (1-based) replaced by `b`.
pub fn replace_column(m: &IntMatrix, i: usize, b: &[BigInt]) -> Result<IntMatrix, ExactError> {
    let n = m.dim();
    if i == 0 || i > n {
        return Err(ExactError::IndexOutOfRange { index: i, n });
    }
    if b.len() != n {
        return Err(ExactError::LengthMismatch { expected: n, actual: b.len() });
    }
    let mut out = m.clone();
    for (row, value) in b.iter().enumerate() {
        out.set(row, i - 1, value.clone());
    }
    Ok(out)
}

/// `K(M)`: the sum of all cofactors, computed from its definition as
/// `Σ_i det(M with column i replaced by the all-ones vector)`.
pub fn cofactor_sum(m: &IntMatrix) -> BigInt {
    let ones = vec![BigInt::one(); m.dim()];
    (1..=m.dim())
        .map(|i| det(&replace_column(m, i, &ones).expect("index in range")))
        .sum()
}

/// `K(M) = det(M) · 1ᵀ M⁻¹ 1` with a single solve. `None` when `M` is singular.
pub fn cofactor_sum_by_solve(m: &IntMatrix) -> Option<BigInt> {
    let sol = integer_solve(&m.transpose(), &vec![BigInt::one(); m.dim()])?;
    // det M · Σ (numerators / det M)
    Some(sol.numerators.iter().sum())
}

/// Integer solution of `M x = rhs` as `numerators / denominator` with
/// `denominator = det M`. `None` when `M` is singular.
pub(crate) fn integer_solve(m: &IntMatrix, rhs: &[BigInt]) -> Option<FfSolution<BigInt>> {
    let n = m.dim();
    assert_eq!(rhs.len(), n, "dimension mismatch");
    let mut aug = Vec::with_capacity(n * (n + 1));
    for (row, b) in m.rows().zip(rhs) {
        aug.extend(row.iter().cloned());
        aug.push(b.clone());
    }
    solve_integer_system(&aug, n)
}

/// Unique exact solution of `M x = rhs`.
pub fn solve_exact(m: &IntMatrix, rhs: &[BigRational]) -> Result<Vec<BigRational>, ExactError> {
    let n = m.dim();
    if rhs.len() != n {
        return Err(ExactError::LengthMismatch { expected: n, actual: rhs.len() });
    }
    let scale = rhs.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let scaled: Vec<BigInt> = rhs.iter().map(|r| r.numer() * (&scale / r.denom())).collect();
    let sol = integer_solve(m, &scaled).ok_or(ExactError::SingularMatrix)?;
    let den = sol.denominator * scale;
    Ok(sol
        .numerators
        .into_iter()
        .map(|num| BigRational::new(num, den.clone()))
        .collect())
}
