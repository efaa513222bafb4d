use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{one, scalar_pow, Operator, Scalar};

/// Rule generating the components of a stage-indexed family beyond its
/// explicit prefix. `P` below is the prefix length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilyTail {
    /// `α_n = scale · ratio^(n−P) · J`, with `J` the leading partial identity.
    ScaledIdentity { scale: Scalar, ratio: Scalar },
    /// `α_n = α_{P−1} · step^(n−P+1)`; needs a non-empty prefix.
    Power { step: Operator },
    /// `α_n e_k = scale · ratio^(n−P) · (k+1) e_k` (1-based weights), truncated
    /// or zero-padded to the output dimension.
    IndexWeighted { scale: Scalar, ratio: Scalar },
}

/// A family of operators `α_n`, one per stage: the components of a cocone or
/// of a chain morphism.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageFamily {
    pub(crate) prefix: Vec<Operator>,
    pub(crate) tail: FamilyTail,
}

impl StageFamily {
    pub fn new(prefix: Vec<Operator>, tail: FamilyTail) -> Result<Self> {
        match &tail {
            FamilyTail::Power { step } => {
                let Some(last) = prefix.last() else {
                    return Err(Error::InvalidTail(
                        "power tail needs a prefix component".into(),
                    ));
                };
                if !step.is_square() || step.in_dim() != last.in_dim() {
                    return Err(Error::InvalidTail(format!(
                        "power step must be square of dimension {}",
                        last.in_dim()
                    )));
                }
            }
            FamilyTail::ScaledIdentity { scale, ratio }
            | FamilyTail::IndexWeighted { scale, ratio } => {
                if !scale.is_finite() || !ratio.is_finite() {
                    return Err(Error::NonFinite);
                }
            }
        }
        Ok(Self { prefix, tail })
    }

    /// `α_n = scale · ratio^n` on every stage.
    pub fn scaled_identity(scale: Scalar, ratio: Scalar) -> Self {
        Self {
            prefix: vec![],
            tail: FamilyTail::ScaledIdentity { scale, ratio },
        }
    }

    pub fn prefix(&self) -> &[Operator] {
        &self.prefix
    }

    pub fn tail(&self) -> &FamilyTail {
        &self.tail
    }

    /// The component at stage `n`, which must be `out_dim × in_dim`.
    pub fn component(&self, n: usize, out_dim: usize, in_dim: usize) -> Result<Operator> {
        let p = self.prefix.len();
        let op = if n < p {
            self.prefix[n].clone()
        } else {
            match &self.tail {
                FamilyTail::ScaledIdentity { scale, ratio } => {
                    let s = scale * scalar_pow(*ratio, (n - p) as u64);
                    Operator::partial_identity(out_dim, in_dim).scale(s)
                }
                FamilyTail::Power { step } => {
                    let base = &self.prefix[p - 1];
                    if step.in_dim() != in_dim {
                        return Err(Error::Shape(format!(
                            "power tail acts on dimension {} but stage {n} has {in_dim}",
                            step.in_dim()
                        )));
                    }
                    base.compose_unchecked(&step.pow((n + 1 - p) as u64)?)
                }
                FamilyTail::IndexWeighted { scale, ratio } => {
                    let s = scale * scalar_pow(*ratio, (n - p) as u64);
                    let weights: Vec<Scalar> = (0..out_dim.min(in_dim))
                        .map(|k| s * (k + 1) as f64)
                        .collect();
                    let mut m = Operator::partial_identity(out_dim, in_dim);
                    let mut data = m.entries().to_vec();
                    for (k, w) in weights.into_iter().enumerate() {
                        data[k * in_dim + k] = w;
                    }
                    m = Operator::from_entries_unchecked(out_dim, in_dim, data);
                    m
                }
            }
        };
        if op.out_dim() != out_dim || op.in_dim() != in_dim {
            return Err(Error::Shape(format!(
                "component {n} is {}x{}, expected {out_dim}x{in_dim}",
                op.out_dim(),
                op.in_dim()
            )));
        }
        Ok(op)
    }

    /// The same family with its first `len` components made explicit.
    pub(crate) fn materialize(
        &self,
        len: usize,
        shape: impl Fn(usize) -> (usize, usize),
    ) -> Result<StageFamily> {
        let p = self.prefix.len();
        if len <= p {
            return Ok(self.clone());
        }
        let mut prefix = self.prefix.clone();
        for n in p..len {
            let (o, i) = shape(n);
            prefix.push(self.component(n, o, i)?);
        }
        let shift = (len - p) as u64;
        let tail = match &self.tail {
            FamilyTail::ScaledIdentity { scale, ratio } => FamilyTail::ScaledIdentity {
                scale: scale * scalar_pow(*ratio, shift),
                ratio: *ratio,
            },
            FamilyTail::IndexWeighted { scale, ratio } => FamilyTail::IndexWeighted {
                scale: scale * scalar_pow(*ratio, shift),
                ratio: *ratio,
            },
            FamilyTail::Power { step } => FamilyTail::Power { step: step.clone() },
        };
        Ok(StageFamily { prefix, tail })
    }

    /// Multiplies component `n` by `factor(n)`, where the factor is exact on
    /// the prefix and geometric with `tail_ratio` from the prefix end on:
    /// `factor(n) = factor(P−1) · tail_ratio^(n−P+1)` for `n ≥ P`.
    pub(crate) fn rescale(
        &self,
        factor: impl Fn(usize) -> Scalar,
        tail_ratio: Scalar,
    ) -> StageFamily {
        let p = self.prefix.len();
        let prefix = self
            .prefix
            .iter()
            .enumerate()
            .map(|(n, op)| op.scale(factor(n)))
            .collect();
        let at_start = if p == 0 {
            factor(0)
        } else {
            factor(p - 1) * tail_ratio
        };
        let tail = match &self.tail {
            FamilyTail::ScaledIdentity { scale, ratio } => FamilyTail::ScaledIdentity {
                scale: scale * at_start,
                ratio: ratio * tail_ratio,
            },
            FamilyTail::IndexWeighted { scale, ratio } => FamilyTail::IndexWeighted {
                scale: scale * at_start,
                ratio: ratio * tail_ratio,
            },
            FamilyTail::Power { step } => FamilyTail::Power {
                step: step.scale(tail_ratio),
            },
        };
        StageFamily { prefix, tail }
    }
}

impl Default for StageFamily {
    fn default() -> Self {
        Self::scaled_identity(one(), one())
    }
}
