use serde::Serialize;

use super::family::{FamilyTail, StageFamily};
use super::OmegaChain;
use crate::error::{Error, Result};
use crate::linalg::Operator;

/// A natural transformation `α : C ⇒ D` between ω-chains.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainMorphism {
    source: OmegaChain,
    target: OmegaChain,
    family: StageFamily,
}

impl ChainMorphism {
    /// Checks component shapes on the prefix; naturality is checked by
    /// [`validate_morphism`].
    pub fn new(source: OmegaChain, target: OmegaChain, family: StageFamily) -> Result<Self> {
        let m = Self {
            source,
            target,
            family,
        };
        for n in 0..=m.family.prefix.len() {
            m.component(n)?;
        }
        Ok(m)
    }

    pub fn identity(chain: &OmegaChain) -> Self {
        Self {
            source: chain.clone(),
            target: chain.clone(),
            family: StageFamily::default(),
        }
    }

    pub fn source(&self) -> &OmegaChain {
        &self.source
    }

    pub fn target(&self) -> &OmegaChain {
        &self.target
    }

    pub fn family(&self) -> &StageFamily {
        &self.family
    }

    /// `α_n : C_n → D_n`.
    pub fn component(&self, n: usize) -> Result<Operator> {
        self.family
            .component(n, self.target.stage_dim(n), self.source.stage_dim(n))
    }

    pub(crate) fn shape(&self) -> impl Fn(usize) -> (usize, usize) + '_ {
        |n| (self.target.stage_dim(n), self.source.stage_dim(n))
    }

    /// `self ∘ rhs`. Tails compose in closed form only when both are scaled
    /// identities.
    pub fn compose(&self, rhs: &ChainMorphism) -> Result<ChainMorphism> {
        if rhs.target != self.source {
            return Err(Error::Shape("morphisms are not composable".into()));
        }
        let len = self.family.prefix.len().max(rhs.family.prefix.len());
        let outer = self.family.materialize(len, self.shape())?;
        let inner = rhs.family.materialize(len, rhs.shape())?;
        let tail = match (&outer.tail, &inner.tail) {
            (
                FamilyTail::ScaledIdentity {
                    scale: s1,
                    ratio: r1,
                },
                FamilyTail::ScaledIdentity {
                    scale: s2,
                    ratio: r2,
                },
            ) => FamilyTail::ScaledIdentity {
                scale: s1 * s2,
                ratio: r1 * r2,
            },
            _ => {
                return Err(Error::Unsupported(
                    "composition of non-scalar morphism tails".into(),
                ))
            }
        };
        let prefix = outer
            .prefix
            .iter()
            .zip(&inner.prefix)
            .map(|(b, a)| b.compose(a))
            .collect::<Result<Vec<_>>>()?;
        let composed = ChainMorphism::new(
            rhs.source.clone(),
            self.target.clone(),
            StageFamily { prefix, tail },
        )?;
        // J∘J = J fails when the middle stage is narrower than both ends.
        for n in len..len + 2 {
            let direct = self.component(n)?.compose(&rhs.component(n)?)?;
            if composed.component(n)?.max_abs_diff(&direct)
                > 1e-12 * direct.frobenius_norm().max(1.0)
            {
                return Err(Error::Unsupported(
                    "scaled-identity tails do not compose on these stage dimensions".into(),
                ));
            }
        }
        Ok(composed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SquareFailure {
    pub index: usize,
    pub residual: f64,
}

/// Outcome of checking commuting squares over a window of stages.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NaturalityReport {
    pub checked: usize,
    pub max_residual: f64,
    pub failures: Vec<SquareFailure>,
}

impl NaturalityReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub(crate) fn from_squares(
        depth: usize,
        tol: f64,
        mut square: impl FnMut(usize) -> Result<(Operator, Operator)>,
    ) -> Result<Self> {
        let mut report = NaturalityReport {
            checked: depth,
            max_residual: 0.0,
            failures: vec![],
        };
        for index in 0..depth {
            let (lhs, rhs) = square(index)?;
            let residual = lhs.sub(&rhs)?.frobenius_norm();
            let scale = lhs.frobenius_norm().max(rhs.frobenius_norm()).max(1.0);
            report.max_residual = report.max_residual.max(residual);
            if residual > tol * scale {
                report.failures.push(SquareFailure { index, residual });
            }
        }
        Ok(report)
    }

    pub fn into_result(self) -> Result<Self> {
        match self.failures.first() {
            Some(f) => Err(Error::InvalidMorphism {
                index: f.index,
                residual: f.residual,
            }),
            None => Ok(self),
        }
    }
}

/// Checks `α_{n+1} ∘ c_n = d_n ∘ α_n` for `n < depth`. Residuals are Frobenius
/// norms, compared against `tol · max(1, |lhs|, |rhs|)`.
pub fn validate_morphism(m: &ChainMorphism, depth: usize, tol: f64) -> Result<NaturalityReport> {
    NaturalityReport::from_squares(depth, tol, |n| {
        let lhs = m.component(n + 1)?.compose(&m.source.chain_map(n))?;
        let rhs = m.target.chain_map(n).compose(&m.component(n)?)?;
        Ok((lhs, rhs))
    })
}
