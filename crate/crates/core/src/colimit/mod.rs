//! The colimit of an ω-chain of contractions.
//!
//! A vector of the colimit is a class `(n, x)` with `x ∈ H_n`, where `(n, x)`
//! is identified with `(m, e_{m←n} x)` for every `m ≥ n`. Classes are combined
//! by pushing both to a common stage. The inner product of two classes is the
//! limit of `⟨x_k|y_k⟩` along the chain; it exists because the norms `|x_k|`
//! are non-increasing and, for a contraction `G`,
//!
//! ```text
//! |⟨x|y⟩ − ⟨Gx|Gy⟩|² ≤ (|x|² − |Gx|²)(|y|² − |Gy|²),
//! ```
//!
//! so `⟨x_k|y_k⟩` is Cauchy. Classes at limit distance zero are identified
//! (see [`is_zero_class`]); the completion is never stored.

mod cocone;
mod split;

pub use cocone::{
    global_bound, induced_apply, induced_restriction_norm, validate_cocone, Cocone, CoconeReport,
    GlobalBound,
};
pub use split::UnitarySplit;

use serde::{Deserialize, Serialize};

use crate::chain::{OmegaChain, TailRule};
use crate::error::{Error, Result};
#[cfg(test)]
use crate::linalg::inner;
use crate::linalg::{check_dims, inner_unchecked, FinVector, Operator, OperatorKind, Scalar};

/// The class `(index, rep)` of `rep ∈ H_index`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColimClass {
    pub index: usize,
    pub rep: FinVector,
}

impl ColimClass {
    pub fn new(chain: &OmegaChain, index: usize, rep: FinVector) -> Result<Self> {
        check_dims(chain.stage_dim(index), rep.dim())?;
        Ok(Self { index, rep })
    }
}

/// The colimit inclusion `ι_n : H_n → L`, `x ↦ (n, x)`.
pub fn inclusion(chain: &OmegaChain, n: usize, x: FinVector) -> Result<ColimClass> {
    ColimClass::new(chain, n, x)
}

/// The representative of `class` at stage `m ≥ class.index`.
pub fn push(chain: &OmegaChain, class: &ColimClass, m: usize) -> Result<ColimClass> {
    if m < class.index {
        return Err(Error::PushBackwards {
            index: class.index,
            target: m,
        });
    }
    check_dims(chain.stage_dim(class.index), class.rep.dim())?;
    let rep = chain.composite(class.index, m)?.apply_unchecked(&class.rep);
    Ok(ColimClass { index: m, rep })
}

/// `a·c1 + b·c2`, formed at the later of the two stages.
pub fn class_combine(
    chain: &OmegaChain,
    a: Scalar,
    c1: &ColimClass,
    b: Scalar,
    c2: &ColimClass,
) -> Result<ColimClass> {
    let m = c1.index.max(c2.index);
    let x = push(chain, c1, m)?.rep;
    let y = push(chain, c2, m)?.rep;
    Ok(ColimClass {
        index: m,
        rep: x.combine(a, &y, b)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimateStatus {
    /// The sequence is eventually constant (or exactly known); error is 0.
    ExactStabilized,
    /// The true limit lies within `error` of `value`.
    Certified,
    /// Produced by a stopping rule; `error` is indicative only.
    Heuristic,
}

/// A limit value with an error radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitEstimate<T = Scalar> {
    pub value: T,
    pub error: f64,
    pub status: EstimateStatus,
    /// Stage at which evaluation stopped.
    pub depth_used: usize,
}

impl<T> LimitEstimate<T> {
    fn exact(value: T, depth_used: usize) -> Self {
        Self {
            value,
            error: 0.0,
            status: EstimateStatus::ExactStabilized,
            depth_used,
        }
    }
}

/// Evaluation parameters for limits without a closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitParams {
    /// Last stage index that may be evaluated.
    pub depth: usize,
    /// Window length of the heuristic stopping rule.
    pub window: usize,
    /// Stop once the window's norm-squared drop (or the certified radius)
    /// falls below this, relative to `max(1, |x||y|)`.
    pub stop_tol: f64,
    /// Relative slack for norm monotonicity.
    pub monotone_tol: f64,
    /// Norms below this identify a class with zero.
    pub zero_threshold: f64,
    /// Use the unitary/decaying split for certified radii on `repeat_last`.
    pub certify: bool,
}

impl Default for LimitParams {
    fn default() -> Self {
        Self {
            depth: 512,
            window: 8,
            stop_tol: 1e-12,
            monotone_tol: 1e-10,
            zero_threshold: 1e-8,
            certify: true,
        }
    }
}

struct Walker<'a> {
    chain: &'a OmegaChain,
    tol: f64,
}

impl Walker<'_> {
    /// Pushes `x` one stage at a time, checking that the norm never grows.
    fn walk(&self, from: usize, x: &FinVector, to: usize) -> Result<FinVector> {
        let mut x = x.clone();
        let mut norm_sqr = x.norm_sqr();
        for n in from..to {
            x = self.chain.chain_map(n).apply_unchecked(&x);
            norm_sqr = self.check(n + 1, norm_sqr, x.norm_sqr())?;
        }
        Ok(x)
    }

    fn check(&self, stage: usize, before: f64, after: f64) -> Result<f64> {
        if after > before * (1.0 + self.tol) + f64::MIN_POSITIVE {
            Err(Error::NotMonotone {
                stage,
                before: before.sqrt(),
                after: after.sqrt(),
            })
        } else {
            Ok(after)
        }
    }
}

/// The limit inner product `⟨(n,x)|(m,y)⟩ = lim_k ⟨x_k|y_k⟩`.
pub fn colim_inner(
    chain: &OmegaChain,
    c1: &ColimClass,
    c2: &ColimClass,
    params: &LimitParams,
) -> Result<LimitEstimate> {
    if chain.category() == OperatorKind::Bounded {
        return Err(Error::BoundedChain);
    }
    check_dims(chain.stage_dim(c1.index), c1.rep.dim())?;
    check_dims(chain.stage_dim(c2.index), c2.rep.dim())?;
    let walker = Walker {
        chain,
        tol: params.monotone_tol,
    };
    let m = c1.index.max(c2.index);
    if chain.category() == OperatorKind::Isometry {
        let x = push(chain, c1, m)?.rep;
        let y = push(chain, c2, m)?.rep;
        return Ok(LimitEstimate::exact(
            inner_unchecked(x.entries(), y.entries()),
            m,
        ));
    }
    let s = m.max(chain.tail_start());
    let x = walker.walk(c1.index, &c1.rep, s)?;
    let y = walker.walk(c2.index, &c2.rep, s)?;
    let at_s = inner_unchecked(x.entries(), y.entries());
    match chain.tail() {
        TailRule::Identity | TailRule::EmbedIncrement => Ok(LimitEstimate::exact(at_s, s)),
        TailRule::ScalarGeometric { ratio } => {
            if is_decaying(*ratio) {
                Ok(LimitEstimate::exact(Scalar::new(0.0, 0.0), s))
            } else {
                Ok(LimitEstimate::exact(at_s, s))
            }
        }
        TailRule::RepeatLast => {
            let g = chain.tail_map();
            let split = if params.certify {
                UnitarySplit::compute(&g)
            } else {
                None
            };
            match split {
                Some(split) if split.rank() == g.in_dim() => Ok(LimitEstimate::exact(at_s, s)),
                Some(split) if split.rank() == 0 => {
                    Ok(LimitEstimate::exact(Scalar::new(0.0, 0.0), s))
                }
                Some(split) => Ok(certified_tail(&walker, &g, &split, x, y, s, params)?),
                None => Ok(heuristic_tail(&walker, &g, x, y, s, params)?),
            }
        }
    }
}

/// Ratios this close to the unit circle are treated as unimodular.
pub const UNIMODULAR_TOL: f64 = 1e-12;

fn is_decaying(ratio: Scalar) -> bool {
    ratio.norm() < 1.0 - UNIMODULAR_TOL
}

fn stop_scale(x: &FinVector, y: &FinVector) -> f64 {
    (x.norm() * y.norm()).max(1.0)
}

fn certified_tail(
    walker: &Walker<'_>,
    g: &Operator,
    split: &UnitarySplit,
    mut x: FinVector,
    mut y: FinVector,
    s: usize,
    params: &LimitParams,
) -> Result<LimitEstimate> {
    let target = params.stop_tol * stop_scale(&x, &y);
    let cap = params.depth.max(s);
    let (mut nx, mut ny) = (x.norm_sqr(), y.norm_sqr());
    let mut n = s;
    loop {
        let radius = split.decaying_part(&x).norm() * split.decaying_part(&y).norm();
        if radius <= target || n >= cap {
            return Ok(LimitEstimate {
                value: inner_unchecked(x.entries(), y.entries()),
                error: radius,
                status: EstimateStatus::Certified,
                depth_used: n,
            });
        }
        x = g.apply_unchecked(&x);
        y = g.apply_unchecked(&y);
        n += 1;
        nx = walker.check(n, nx, x.norm_sqr())?;
        ny = walker.check(n, ny, y.norm_sqr())?;
    }
}

fn heuristic_tail(
    walker: &Walker<'_>,
    g: &Operator,
    mut x: FinVector,
    mut y: FinVector,
    s: usize,
    params: &LimitParams,
) -> Result<LimitEstimate> {
    let w = params.window.max(1);
    let target = params.stop_tol * stop_scale(&x, &y);
    let cap = params.depth.max(s);
    let mut hx = vec![x.norm_sqr()];
    let mut hy = vec![y.norm_sqr()];
    let mut n = s;
    loop {
        let k = n - s;
        let start = k.saturating_sub(w);
        let drop_x = hx[start] - hx[k];
        let drop_y = hy[start] - hy[k];
        if (k >= w && drop_x < target && drop_y < target) || n >= cap {
            return Ok(LimitEstimate {
                value: inner_unchecked(x.entries(), y.entries()),
                error: (drop_x.max(0.0) * drop_y.max(0.0)).sqrt(),
                status: EstimateStatus::Heuristic,
                depth_used: n,
            });
        }
        x = g.apply_unchecked(&x);
        y = g.apply_unchecked(&y);
        n += 1;
        hx.push(walker.check(n, hx[k], x.norm_sqr())?);
        hy.push(walker.check(n, hy[k], y.norm_sqr())?);
    }
}

/// The limit norm `lim_k |x_k|`, the infimum of the norms along the chain.
///
/// `stop_tol` applies to the norm itself rather than its square, so it is
/// squared before evaluating the limit inner product.
pub fn colim_norm(
    chain: &OmegaChain,
    class: &ColimClass,
    params: &LimitParams,
) -> Result<LimitEstimate<f64>> {
    let squared = LimitParams {
        stop_tol: params.stop_tol * params.stop_tol,
        ..*params
    };
    let sq = colim_inner(chain, class, class, &squared)?;
    let v = sq.value.re;
    let e = sq.error;
    let value = v.max(0.0).sqrt();
    let error = if e == 0.0 {
        0.0
    } else {
        ((v + e).max(0.0).sqrt() - value).max(value - (v - e).max(0.0).sqrt())
    };
    Ok(LimitEstimate {
        value,
        error,
        status: sq.status,
        depth_used: sq.depth_used,
    })
}

/// Whether the class has limit norm zero, i.e. is identified with `0`.
///
/// Fails with [`Error::Indeterminate`] when the error interval straddles the
/// threshold, or when a heuristic estimate lands within a factor of ten of it.
pub fn is_zero_class(chain: &OmegaChain, class: &ColimClass, params: &LimitParams) -> Result<bool> {
    let est = colim_norm(chain, class, params)?;
    let thr = params.zero_threshold;
    let near = est.status == EstimateStatus::Heuristic
        && est.value >= thr / 10.0
        && est.value <= thr * 10.0;
    if !near && est.value + est.error < thr {
        Ok(true)
    } else if !near && est.value - est.error >= thr {
        Ok(false)
    } else {
        Err(Error::Indeterminate {
            value: est.value,
            error: est.error,
        })
    }
}

/// An operator `R` with `⟨(n,x)|(n,y)⟩ = ⟨Rx|Ry⟩` for all `x, y ∈ H_n`: the
/// limit Gram form on stage `n` in factored form.
pub fn limit_gram_factor(chain: &OmegaChain, n: usize) -> Result<Operator> {
    if chain.category() == OperatorKind::Bounded {
        return Err(Error::BoundedChain);
    }
    let d = chain.stage_dim(n);
    if chain.category() == OperatorKind::Isometry {
        return Ok(Operator::identity(d));
    }
    let s = n.max(chain.tail_start());
    let to_tail = chain.composite(n, s)?;
    match chain.tail() {
        TailRule::Identity | TailRule::EmbedIncrement => Ok(to_tail),
        TailRule::ScalarGeometric { ratio } if is_decaying(*ratio) => Ok(Operator::zeros(1, d)),
        TailRule::ScalarGeometric { .. } => Ok(to_tail),
        TailRule::RepeatLast => {
            let split = UnitarySplit::compute(&chain.tail_map()).ok_or(Error::AmbiguousSplit)?;
            Ok(split.coordinate_map().compose_unchecked(&to_tail))
        }
    }
}
