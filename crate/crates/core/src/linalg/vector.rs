use std::fmt;

use serde::{Deserialize, Serialize};

use super::Scalar;
use crate::error::{Error, Result};

/// A vector in a finite-dimensional stage space `ℂ^dim`.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Scalar>", into = "Vec<Scalar>")]
pub struct FinVector {
    entries: Vec<Scalar>,
}

impl FinVector {
    pub fn new(entries: Vec<Scalar>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyDimension);
        }
        if entries.iter().any(|z| !z.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { entries })
    }

    pub fn from_real(entries: &[f64]) -> Result<Self> {
        Self::new(entries.iter().map(|&re| Scalar::new(re, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "vector dimension must be positive");
        Self {
            entries: vec![Scalar::new(0.0, 0.0); dim],
        }
    }

    /// The standard basis vector `e_k` (0-based).
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim, "basis index {k} out of range for dimension {dim}");
        let mut v = Self::zeros(dim);
        v.entries[k] = Scalar::new(1.0, 0.0);
        v
    }

    pub(crate) fn from_entries_unchecked(entries: Vec<Scalar>) -> Self {
        debug_assert!(!entries.is_empty());
        Self { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Scalar> {
        self.entries
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, s: Scalar) -> Self {
        Self::from_entries_unchecked(self.entries.iter().map(|z| z * s).collect())
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: Scalar, other: &Self, b: Scalar) -> Result<Self> {
        check_dims(self.dim(), other.dim())?;
        Ok(Self::from_entries_unchecked(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(Scalar::new(1.0, 0.0), other, Scalar::new(-1.0, 0.0))
    }

    /// Tensor product `self ⊗ other`, ordered so that it matches [`Operator::kronecker`].
    ///
    /// [`Operator::kronecker`]: super::Operator::kronecker
    pub fn kronecker(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.entries {
            out.extend(other.entries.iter().map(|b| a * b));
        }
        Self::from_entries_unchecked(out)
    }
}

impl fmt::Debug for FinVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.entries.iter()).finish()
    }
}

impl TryFrom<Vec<Scalar>> for FinVector {
    type Error = Error;

    fn try_from(entries: Vec<Scalar>) -> Result<Self> {
        Self::new(entries)
    }
}

impl From<FinVector> for Vec<Scalar> {
    fn from(v: FinVector) -> Self {
        v.entries
    }
}

pub(crate) fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// The inner product `⟨x|y⟩`, conjugate-linear in `x`.
pub fn inner(x: &FinVector, y: &FinVector) -> Result<Scalar> {
    check_dims(x.dim(), y.dim())?;
    Ok(inner_unchecked(x.entries(), y.entries()))
}

pub(crate) fn inner_unchecked(x: &[Scalar], y: &[Scalar]) -> Scalar {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}
