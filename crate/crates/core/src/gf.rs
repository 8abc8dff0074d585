//! Prime fields GF(q) and dense linear algebra over them.
//!
//! Residues are stored as `u32` values in `[0, q)`. [`PrimeField`] carries the
//! modulus and does the arithmetic; [`FieldElement`] is the self-describing
//! value type for callers that want operator syntax. [`FieldMatrix`] is a dense
//! row-major matrix with deterministic reduced row echelon form and nullspace.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported modulus (exclusive).
pub const MAX_MODULUS: u32 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("modulus {0} is not an odd prime in [3, 65536)")]
    InvalidModulus(u32),
    #[error("division by zero in GF({0})")]
    DivisionByZero(u32),
    #[error("operands live in different fields: GF({0}) and GF({1})")]
    ModulusMismatch(u32, u32),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is singular")]
    Singular,
}

/// The field GF(q) for an odd prime q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct PrimeField {
    q: u32,
}

fn is_prime(q: u32) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= q {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    pub fn new(q: u32) -> Result<Self, FieldError> {
        if !(3..MAX_MODULUS).contains(&q) || !is_prime(q) {
            return Err(FieldError::InvalidModulus(q));
        }
        Ok(Self { q })
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.q
    }

    /// Number of field elements as a `u64`, convenient for enumeration bounds.
    #[inline]
    pub fn order(&self) -> u64 {
        self.q as u64
    }

    #[inline]
    pub fn reduce(&self, v: i64) -> u32 {
        v.rem_euclid(self.q as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.q - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.q as u64) as u32
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a % self.q;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via Fermat, `None` for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a.is_multiple_of(self.q) {
            None
        } else {
            Some(self.pow(a, (self.q - 2) as u64))
        }
    }

    pub fn div(&self, a: u32, b: u32) -> Result<u32, FieldError> {
        let inv = self.inv(b).ok_or(FieldError::DivisionByZero(self.q))?;
        Ok(self.mul(a, inv))
    }

    pub fn element(&self, v: u32) -> FieldElement {
        FieldElement {
            value: v % self.q,
            modulus: self.q,
        }
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        rng.gen_range(0..self.q)
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        rng.gen_range(1..self.q)
    }

    pub fn random_vector<R: Rng + ?Sized>(&self, len: usize, rng: &mut R) -> Vec<u32> {
        (0..len).map(|_| self.random(rng)).collect()
    }
}

impl TryFrom<u32> for PrimeField {
    type Error = FieldError;

    fn try_from(q: u32) -> Result<Self, Self::Error> {
        PrimeField::new(q)
    }
}

impl From<PrimeField> for u32 {
    fn from(f: PrimeField) -> u32 {
        f.q
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.q)
    }
}

/// A residue together with its modulus.
///
/// The operator impls panic when the moduli differ; [`field_arith`] is the
/// checked entry point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u32,
    modulus: u32,
}

impl FieldElement {
    #[inline]
    pub fn value(&self) -> u32 {
        self.value
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn field(&self) -> PrimeField {
        PrimeField { q: self.modulus }
    }

    pub fn inv(&self) -> Result<FieldElement, FieldError> {
        let v = self
            .field()
            .inv(self.value)
            .ok_or(FieldError::DivisionByZero(self.modulus))?;
        Ok(FieldElement {
            value: v,
            modulus: self.modulus,
        })
    }

    pub fn checked_div(&self, rhs: FieldElement) -> Result<FieldElement, FieldError> {
        field_arith(*self, rhs, ArithOp::Div)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn field_arith(a: FieldElement, b: FieldElement, op: ArithOp) -> Result<FieldElement, FieldError> {
    if a.modulus != b.modulus {
        return Err(FieldError::ModulusMismatch(a.modulus, b.modulus));
    }
    let f = a.field();
    let value = match op {
        ArithOp::Add => f.add(a.value, b.value),
        ArithOp::Sub => f.sub(a.value, b.value),
        ArithOp::Mul => f.mul(a.value, b.value),
        ArithOp::Div => f.div(a.value, b.value)?,
    };
    Ok(FieldElement {
        value,
        modulus: a.modulus,
    })
}

macro_rules! impl_op {
    ($tr:ident, $method:ident, $op:expr) => {
        impl $tr for FieldElement {
            type Output = FieldElement;

            fn $method(self, rhs: FieldElement) -> FieldElement {
                field_arith(self, rhs, $op).expect("field elements from different fields")
            }
        }
    };
}

impl_op!(Add, add, ArithOp::Add);
impl_op!(Sub, sub, ArithOp::Sub);
impl_op!(Mul, mul, ArithOp::Mul);

impl Neg for FieldElement {
    type Output = FieldElement;

    fn neg(self) -> FieldElement {
        FieldElement {
            value: self.field().neg(self.value),
            modulus: self.modulus,
        }
    }
}

/// Dense row-major matrix over GF(q).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Result of row reduction: the reduced matrix and the pivot column of each
/// nonzero row (rows `0..pivots.len()`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub matrix: FieldMatrix,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `v` modulo the row space in place, leaving zeros in every
    /// pivot column. The result is the canonical representative of `v`.
    pub fn reduce(&self, v: &mut [u32]) {
        let f = self.matrix.field;
        for (i, &p) in self.pivots.iter().enumerate() {
            let factor = v[p];
            if factor == 0 {
                continue;
            }
            let neg = f.neg(factor);
            for (x, &r) in v[p..].iter_mut().zip(&self.matrix.row(i)[p..]) {
                if r != 0 {
                    *x = f.add(*x, f.mul(neg, r));
                }
            }
        }
    }
}

// Below this many entries the elimination stays on the calling thread.
const PARALLEL_THRESHOLD: usize = 1 << 16;

impl FieldMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from rows, reducing every entry mod q.
    pub fn from_rows(field: PrimeField, rows: &[Vec<u32>]) -> Result<Self, FieldError> {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows_with_cols(field, cols, rows)
    }

    pub fn from_rows_with_cols(field: PrimeField, cols: usize, rows: &[Vec<u32>]) -> Result<Self, FieldError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(FieldError::DimensionMismatch {
                    expected: cols,
                    got: r.len(),
                });
            }
            data.extend(r.iter().map(|&v| v % field.q));
        }
        Ok(Self {
            field,
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.field.q;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn push_row(&mut self, row: &[u32]) -> Result<(), FieldError> {
        if row.len() != self.cols {
            return Err(FieldError::DimensionMismatch {
                expected: self.cols,
                got: row.len(),
            });
        }
        self.data.extend(row.iter().map(|&v| v % self.field.q));
        self.rows += 1;
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> FieldMatrix {
        let mut t = FieldMatrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[u32]) -> Result<Vec<u32>, FieldError> {
        if v.len() != self.cols {
            return Err(FieldError::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        let q = self.field.q as u64;
        Ok((0..self.rows)
            .map(|r| {
                let acc = self
                    .row(r)
                    .iter()
                    .zip(v)
                    .fold(0u64, |acc, (&a, &b)| (acc + a as u64 * b as u64) % q);
                acc as u32
            })
            .collect())
    }

    pub fn mul(&self, other: &FieldMatrix) -> Result<FieldMatrix, FieldError> {
        if self.cols != other.rows {
            return Err(FieldError::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let f = self.field;
        let mut out = FieldMatrix::zeros(f, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let idx = r * other.cols + c;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, other.get(k, c)));
                }
            }
        }
        Ok(out)
    }

    /// Reduced row echelon form.
    ///
    /// Columns are scanned left to right; the pivot for a column is the first
    /// row at or below the current position with a nonzero entry. Zero rows
    /// end up at the bottom, so the output has the input's shape.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        Rref { matrix: m, pivots }
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let (rows, cols) = (self.rows, self.cols);
        let f = self.field;
        let q = f.q as u64;
        let parallel = rows * cols >= PARALLEL_THRESHOLD;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| self.data[i * cols + c] != 0) else {
                continue;
            };
            if p != r {
                for j in c..cols {
                    self.data.swap(p * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(self.data[r * cols + c]).expect("pivot is nonzero");
            if inv != 1 {
                for j in c..cols {
                    let idx = r * cols + j;
                    self.data[idx] = f.mul(self.data[idx], inv);
                }
            }
            let pivot_row: Vec<u32> = self.data[r * cols + c..(r + 1) * cols].to_vec();
            let eliminate = |i: usize, row: &mut [u32]| {
                if i == r {
                    return;
                }
                let factor = row[c];
                if factor == 0 {
                    return;
                }
                let neg = q - factor as u64;
                for (x, &pv) in row[c..].iter_mut().zip(&pivot_row) {
                    if pv != 0 {
                        *x = ((*x as u64 + neg * pv as u64) % q) as u32;
                    }
                }
            };
            if parallel {
                self.data
                    .par_chunks_mut(cols)
                    .enumerate()
                    .for_each(|(i, row)| eliminate(i, row));
            } else {
                self.data
                    .chunks_mut(cols)
                    .enumerate()
                    .for_each(|(i, row)| eliminate(i, row));
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().rank()
    }

    /// Basis of `{v : M v = 0}`, one vector per free column in increasing
    /// column order, with a 1 in that free column.
    pub fn nullspace(&self) -> Vec<Vec<u32>> {
        let Rref { matrix, pivots } = self.rref();
        let f = self.field;
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![0u32; self.cols];
                v[free] = 1;
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = f.neg(matrix.get(i, free));
                }
                v
            })
            .collect()
    }

    /// Copy without the zero rows.
    pub fn nonzero_rows(&self) -> FieldMatrix {
        let mut out = FieldMatrix::zeros(self.field, 0, self.cols);
        for r in 0..self.rows {
            let row = self.row(r);
            if row.iter().any(|&v| v != 0) {
                out.data.extend_from_slice(row);
                out.rows += 1;
            }
        }
        out
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Result<FieldMatrix, FieldError> {
        if self.rows != self.cols {
            return Err(FieldError::DimensionMismatch {
                expected: self.rows,
                got: self.cols,
            });
        }
        let n = self.rows;
        let mut aug = FieldMatrix::zeros(self.field, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.data[r * 2 * n + c] = self.get(r, c);
            }
            aug.data[r * 2 * n + n + r] = 1;
        }
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(FieldError::Singular);
        }
        let mut inv = FieldMatrix::zeros(self.field, n, n);
        for r in 0..n {
            inv.data[r * n..(r + 1) * n].copy_from_slice(&aug.data[r * 2 * n + n..(r + 1) * 2 * n]);
        }
        Ok(inv)
    }

    /// Uniform invertible matrix by rejection sampling.
    pub fn random_invertible<R: Rng + ?Sized>(field: PrimeField, n: usize, rng: &mut R) -> FieldMatrix {
        loop {
            let mut m = FieldMatrix::zeros(field, n, n);
            for v in m.data.iter_mut() {
                *v = field.random(rng);
            }
            if m.is_invertible() {
                return m;
            }
        }
    }
}

/// Solves `A x = b`, returning one solution (free variables set from
/// `free_values`, cycled) or `None` if the system is inconsistent.
pub fn solve_affine(a: &FieldMatrix, b: &[u32], free_values: &[u32]) -> Result<Option<Vec<u32>>, FieldError> {
    if b.len() != a.rows() {
        return Err(FieldError::DimensionMismatch {
            expected: a.rows(),
            got: b.len(),
        });
    }
    let f = a.field();
    let n = a.cols();
    let mut aug = FieldMatrix::zeros(f, a.rows(), n + 1);
    for (r, &br) in b.iter().enumerate() {
        for c in 0..n {
            aug.data[r * (n + 1) + c] = a.get(r, c);
        }
        aug.data[r * (n + 1) + n] = br % f.q;
    }
    let Rref { matrix, pivots } = aug.rref();
    if pivots.last() == Some(&n) {
        return Ok(None);
    }
    let mut x = vec![0u32; n];
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut k = 0;
    for (c, slot) in x.iter_mut().enumerate() {
        if !is_pivot[c] && !free_values.is_empty() {
            *slot = free_values[k % free_values.len()] % f.q;
            k += 1;
        }
    }
    for (i, &p) in pivots.iter().enumerate() {
        let mut v = matrix.get(i, n);
        for c in (p + 1)..n {
            if !is_pivot[c] {
                v = f.sub(v, f.mul(matrix.get(i, c), x[c]));
            }
        }
        x[p] = v;
    }
    Ok(Some(x))
}
