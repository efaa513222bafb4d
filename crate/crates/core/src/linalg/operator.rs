use std::fmt;

use serde::{Deserialize, Serialize};

use super::vector::{check_dims, FinVector};
use super::{one, zero, Scalar};
use crate::error::{Error, Result};

/// A dense complex matrix `out_dim × in_dim`, stored row-major.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<Scalar>>", into = "Vec<Vec<Scalar>>")]
pub struct Operator {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Relative singular-value cutoff below which an operator counts as singular.
const INVERSE_RCOND: f64 = 1e-13;

impl Operator {
    pub fn new(rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyDimension);
        }
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries cannot fill a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|z| !z.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(Error::Shape("ragged matrix rows".into()));
        }
        Self::new(n_rows, n_cols, rows.into_iter().flatten().collect())
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Scalar::new(x, 0.0)).collect())
                .collect(),
        )
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "operator dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::partial_identity(n, n)
    }

    /// The `rows × cols` matrix with ones on the leading diagonal: the
    /// first-coordinates embedding when `rows > cols`, the truncation when
    /// `rows < cols`.
    pub fn partial_identity(rows: usize, cols: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        for k in 0..rows.min(cols) {
            m.data[k * cols + k] = one();
        }
        m
    }

    /// A 1×1 operator.
    pub fn scalar(z: Scalar) -> Self {
        Self::from_entries_unchecked(1, 1, vec![z])
    }

    pub fn diagonal(diag: &[Scalar]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (k, &z) in diag.iter().enumerate() {
            m.data[k * n + k] = z;
        }
        m
    }

    pub(crate) fn from_entries_unchecked(rows: usize, cols: usize, data: Vec<Scalar>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    pub fn out_dim(&self) -> usize {
        self.rows
    }

    pub fn in_dim(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> Scalar {
        self.data[row * self.cols + col]
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        self.data.chunks(self.cols).map(<[_]>::to_vec).collect()
    }

    pub fn apply(&self, x: &FinVector) -> Result<FinVector> {
        check_dims(self.cols, x.dim())?;
        Ok(self.apply_unchecked(x))
    }

    pub(crate) fn apply_unchecked(&self, x: &FinVector) -> FinVector {
        let xs = x.entries();
        FinVector::from_entries_unchecked(
            self.data
                .chunks(self.cols)
                .map(|row| row.iter().zip(xs).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }

    /// `self ∘ rhs`.
    pub fn compose(&self, rhs: &Operator) -> Result<Operator> {
        check_dims(self.cols, rhs.rows)?;
        Ok(self.compose_unchecked(rhs))
    }

    pub(crate) fn compose_unchecked(&self, rhs: &Operator) -> Operator {
        let (n, m, p) = (self.rows, self.cols, rhs.cols);
        let mut out = vec![zero(); n * p];
        for i in 0..n {
            let row = &mut out[i * p..(i + 1) * p];
            for k in 0..m {
                let a = self.data[i * m + k];
                if a == zero() {
                    continue;
                }
                let rhs_row = &rhs.data[k * p..(k + 1) * p];
                for (o, b) in row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Operator::from_entries_unchecked(n, p, out)
    }

    /// The conjugate transpose.
    pub fn adjoint(&self) -> Operator {
        let mut out = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                out.push(self.get(i, j).conj());
            }
        }
        Operator::from_entries_unchecked(self.cols, self.rows, out)
    }

    pub fn scale(&self, s: Scalar) -> Operator {
        Operator::from_entries_unchecked(
            self.rows,
            self.cols,
            self.data.iter().map(|z| z * s).collect(),
        )
    }

    pub fn sub(&self, other: &Operator) -> Result<Operator> {
        self.check_same_shape(other)?;
        Ok(Operator::from_entries_unchecked(
            self.rows,
            self.cols,
            self.data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        ))
    }

    pub fn add(&self, other: &Operator) -> Result<Operator> {
        self.check_same_shape(other)?;
        Ok(Operator::from_entries_unchecked(
            self.rows,
            self.cols,
            self.data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        ))
    }

    fn check_same_shape(&self, other: &Operator) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self - other`; infinite on shape mismatch.
    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `self^k` by repeated squaring.
    pub fn pow(&self, mut k: u64) -> Result<Operator> {
        if !self.is_square() {
            return Err(Error::Shape("power of a non-square operator".into()));
        }
        let mut acc = Operator::identity(self.rows);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.compose_unchecked(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.compose_unchecked(&base);
            }
        }
        Ok(acc)
    }

    /// The Kronecker product `self ⊗ rhs`: `(A⊗B)(u⊗v) = Au ⊗ Bv`.
    pub fn kronecker(&self, rhs: &Operator) -> Operator {
        let rows = self.rows * rhs.rows;
        let cols = self.cols * rhs.cols;
        let mut out = vec![zero(); rows * cols];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        out[(i * rhs.rows + k) * cols + j * rhs.cols + l] = a * rhs.get(k, l);
                    }
                }
            }
        }
        Operator::from_entries_unchecked(rows, cols, out)
    }

    /// Columns `start..end` as a new operator.
    pub fn columns(&self, start: usize, end: usize) -> Operator {
        assert!(start < end && end <= self.cols);
        let mut out = Vec::with_capacity(self.rows * (end - start));
        for row in self.data.chunks(self.cols) {
            out.extend_from_slice(&row[start..end]);
        }
        Operator::from_entries_unchecked(self.rows, end - start, out)
    }

    /// The inverse of a square operator, if it is numerically invertible.
    pub fn inverse(&self) -> Option<Operator> {
        if !self.is_square() {
            return None;
        }
        let d = super::svd::svd(self);
        let max = d.s.first().copied().unwrap_or(0.0);
        if d.s.last().is_none_or(|&s| s <= INVERSE_RCOND * max) {
            return None;
        }
        // V Σ⁻¹ U† = (U Σ⁻¹ V†)†
        let inv = super::svd::Svd {
            u: d.v,
            s: d.s,
            v: d.u,
        };
        Some(inv.recompose_with(|s| 1.0 / s))
    }
}

impl fmt::Debug for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Operator{}x{}", self.rows, self.cols)?;
        f.debug_list().entries(self.data.chunks(self.cols)).finish()
    }
}

impl TryFrom<Vec<Vec<Scalar>>> for Operator {
    type Error = Error;

    fn try_from(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        Self::from_rows(rows)
    }
}

impl From<Operator> for Vec<Vec<Scalar>> {
    fn from(op: Operator) -> Self {
        op.to_rows()
    }
}

/// The conjugate transpose of `g`.
pub fn adjoint(g: &Operator) -> Operator {
    g.adjoint()
}

/// The Kronecker product `a ⊗ b`.
pub fn kronecker(a: &Operator, b: &Operator) -> Operator {
    a.kronecker(b)
}
