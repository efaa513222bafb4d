//! ω-chains `H₀ → H₁ → H₂ → …` presented by a finite prefix and a tail rule.
//!
//! Stages are indexed from 0. A chain with `K` prefix stages carries `K − 1`
//! explicit maps; map `n` goes from stage `n` to stage `n + 1`, and every map
//! with index `n ≥ K − 1` (the *tail start*) is generated by the tail rule.

mod family;
mod morphism;

pub use family::{FamilyTail, StageFamily};
pub use morphism::{validate_morphism, ChainMorphism, NaturalityReport, SquareFailure};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    classify, scalar_pow, Operator, OperatorClass, OperatorKind, Scalar, DEFAULT_TOL,
};

/// How the maps beyond the explicit prefix are generated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TailRule {
    /// Repeat the last prefix map forever; it must be square.
    RepeatLast,
    /// Identity maps on the last prefix stage.
    Identity,
    /// Scaling by `ratio` between one-dimensional stages.
    ScalarGeometric { ratio: Scalar },
    /// `ℂ^d → ℂ^{d+1}` onto the first `d` coordinates.
    EmbedIncrement,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OmegaChain {
    prefix_dims: Vec<usize>,
    prefix_maps: Vec<Operator>,
    tail: TailRule,
    category: OperatorKind,
}

/// Classification of every explicit map plus one representative tail map.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainReport {
    pub category: OperatorKind,
    pub maps: Vec<MapReport>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MapReport {
    pub index: usize,
    pub class: OperatorClass,
}

impl OmegaChain {
    pub fn new(
        prefix_dims: Vec<usize>,
        prefix_maps: Vec<Operator>,
        tail: TailRule,
        category: OperatorKind,
    ) -> Result<Self> {
        Self::with_tolerance(prefix_dims, prefix_maps, tail, category, DEFAULT_TOL)
    }

    /// Builds the chain, checking shapes and the declared category at `tol`.
    pub fn with_tolerance(
        prefix_dims: Vec<usize>,
        prefix_maps: Vec<Operator>,
        tail: TailRule,
        category: OperatorKind,
        tol: f64,
    ) -> Result<Self> {
        let chain = Self {
            prefix_dims,
            prefix_maps,
            tail,
            category,
        };
        chain.check_shapes()?;
        validate_chain(&chain, tol)?;
        Ok(chain)
    }

    /// A chain of identities on `ℂ^dim`.
    pub fn identity_chain(dim: usize, category: OperatorKind) -> Result<Self> {
        Self::new(vec![dim], vec![], TailRule::Identity, category)
    }

    fn check_shapes(&self) -> Result<()> {
        let dims = &self.prefix_dims;
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::EmptyDimension);
        }
        if self.prefix_maps.len() + 1 != dims.len() {
            return Err(Error::Shape(format!(
                "{} prefix stages need {} maps, found {}",
                dims.len(),
                dims.len() - 1,
                self.prefix_maps.len()
            )));
        }
        for (n, map) in self.prefix_maps.iter().enumerate() {
            if map.in_dim() != dims[n] || map.out_dim() != dims[n + 1] {
                return Err(Error::Shape(format!(
                    "map {n} is {}x{} but stages {n}->{} have dims {}->{}",
                    map.out_dim(),
                    map.in_dim(),
                    n + 1,
                    dims[n],
                    dims[n + 1]
                )));
            }
        }
        match &self.tail {
            TailRule::RepeatLast => match self.prefix_maps.last() {
                None => Err(Error::InvalidTail("repeat_last needs a prefix map".into())),
                Some(m) if !m.is_square() => Err(Error::InvalidTail(
                    "repeat_last needs a square last map".into(),
                )),
                Some(_) => Ok(()),
            },
            TailRule::ScalarGeometric { ratio } => {
                if dims.iter().any(|&d| d != 1) {
                    Err(Error::InvalidTail(
                        "scalar_geometric needs one-dimensional stages".into(),
                    ))
                } else if !ratio.is_finite() {
                    Err(Error::NonFinite)
                } else {
                    Ok(())
                }
            }
            TailRule::Identity | TailRule::EmbedIncrement => Ok(()),
        }
    }

    pub fn prefix_dims(&self) -> &[usize] {
        &self.prefix_dims
    }

    pub fn prefix_maps(&self) -> &[Operator] {
        &self.prefix_maps
    }

    pub fn tail(&self) -> &TailRule {
        &self.tail
    }

    pub fn category(&self) -> OperatorKind {
        self.category
    }

    /// Index of the first map generated by the tail rule.
    pub fn tail_start(&self) -> usize {
        self.prefix_maps.len()
    }

    /// Whether every stage from the tail start on has the same dimension.
    pub fn has_constant_tail_dims(&self) -> bool {
        self.tail != TailRule::EmbedIncrement
    }

    pub fn stage_dim(&self, n: usize) -> usize {
        let k = self.prefix_dims.len();
        if n < k {
            return self.prefix_dims[n];
        }
        let last = self.prefix_dims[k - 1];
        match self.tail {
            TailRule::EmbedIncrement => last + (n - (k - 1)),
            _ => last,
        }
    }

    /// The connecting map `e_n : H_n → H_{n+1}`.
    pub fn chain_map(&self, n: usize) -> Operator {
        if n < self.tail_start() {
            return self.prefix_maps[n].clone();
        }
        let d = self.stage_dim(n);
        match &self.tail {
            TailRule::RepeatLast => self.prefix_maps[self.tail_start() - 1].clone(),
            TailRule::Identity => Operator::identity(d),
            TailRule::ScalarGeometric { ratio } => Operator::scalar(*ratio),
            TailRule::EmbedIncrement => Operator::partial_identity(d + 1, d),
        }
    }

    /// A representative tail map (the map at the tail start).
    pub fn tail_map(&self) -> Operator {
        self.chain_map(self.tail_start())
    }

    /// `e_{n−1} ∘ … ∘ e_m : H_m → H_n`, using closed forms along the tail.
    pub fn composite(&self, m: usize, n: usize) -> Result<Operator> {
        if m > n {
            return Err(Error::PushBackwards {
                index: m,
                target: n,
            });
        }
        let t = self.tail_start();
        let mut acc = Operator::identity(self.stage_dim(m));
        for i in m..n.min(t) {
            acc = self.prefix_maps[i].compose_unchecked(&acc);
        }
        let s = m.max(t);
        if n <= s {
            return Ok(acc);
        }
        let steps = (n - s) as u64;
        let tail = match &self.tail {
            TailRule::RepeatLast => self.prefix_maps[t - 1].pow(steps)?,
            TailRule::Identity => return Ok(acc),
            TailRule::ScalarGeometric { ratio } => Operator::scalar(scalar_pow(*ratio, steps)),
            TailRule::EmbedIncrement => {
                Operator::partial_identity(self.stage_dim(n), self.stage_dim(s))
            }
        };
        Ok(tail.compose_unchecked(&acc))
    }
}

/// Classifies every prefix map and one representative tail map against the
/// chain's declared category.
pub fn validate_chain(chain: &OmegaChain, tol: f64) -> Result<ChainReport> {
    let declared = chain.category;
    let mut maps = Vec::with_capacity(chain.tail_start() + 1);
    for index in 0..=chain.tail_start() {
        let class = classify(&chain.chain_map(index), tol);
        if !class.satisfies(declared) {
            return Err(Error::CategoryViolation {
                index,
                declared: match declared {
                    OperatorKind::Isometry => "isometry",
                    OperatorKind::Contraction => "contraction",
                    OperatorKind::Bounded => "bounded",
                },
                norm: class.norm,
            });
        }
        maps.push(MapReport { index, class });
    }
    Ok(ChainReport {
        category: declared,
        maps,
    })
}
