//! Spectral norms, the bounded / contraction / isometry classification, and
//! the norm-gap inequality that controls every limit estimate in the crate.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::vector::{check_dims, inner_unchecked, FinVector};
use super::{random, Operator, Scalar};
use crate::error::{Error, Result};

/// Largest dimension for which the spectral norm comes from a full SVD.
pub const SVD_LIMIT: usize = 64;
/// Default relative tolerance for classifying maps.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Negative gaps down to this (relative) size are roundoff and clamp to zero.
pub const GAP_CLAMP: f64 = 1e-10;

const POWER_TOL: f64 = 1e-12;
const POWER_MAX_ITER: usize = 10_000;

/// Singular values of `g`, descending.
pub fn singular_values(g: &Operator) -> Vec<f64> {
    super::svd::singular_values(g)
}

/// The operator norm `|G|`: the largest singular value.
pub fn operator_norm(g: &Operator) -> f64 {
    if g.out_dim().max(g.in_dim()) <= SVD_LIMIT {
        singular_values(g).first().copied().unwrap_or(0.0)
    } else {
        power_norm(g)
    }
}

/// Power iteration on `G†G`.
fn power_norm(g: &Operator) -> f64 {
    let gh = g.adjoint();
    let mut rng = ChaCha8Rng::seed_from_u64(0x005e_ed0f_9019);
    let mut v = random::random_vector(g.in_dim(), &mut rng);
    let mut v_norm = v.norm();
    v = v.scale(Scalar::new(1.0 / v_norm, 0.0));
    let mut estimate = 0.0;
    for _ in 0..POWER_MAX_ITER {
        let w = gh.apply_unchecked(&g.apply_unchecked(&v));
        v_norm = w.norm();
        if v_norm == 0.0 {
            return 0.0;
        }
        let next = v_norm.sqrt();
        v = w.scale(Scalar::new(1.0 / v_norm, 0.0));
        if (next - estimate).abs() <= POWER_TOL * next {
            return next;
        }
        estimate = next;
    }
    estimate
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorKind {
    Isometry,
    Contraction,
    Bounded,
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OperatorKind::Isometry => "isometry",
            OperatorKind::Contraction => "contraction",
            OperatorKind::Bounded => "bounded",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatorClass {
    pub kind: OperatorKind,
    pub norm: f64,
}

impl OperatorClass {
    /// Whether this class is at least as strict as `declared`.
    pub fn satisfies(&self, declared: OperatorKind) -> bool {
        match declared {
            OperatorKind::Bounded => true,
            OperatorKind::Contraction => self.kind != OperatorKind::Bounded,
            OperatorKind::Isometry => self.kind == OperatorKind::Isometry,
        }
    }
}

/// Classifies `g`: isometry when `G†G = I` entrywise within `tol`, else a
/// contraction when `|G| ≤ 1 + tol`, else bounded.
pub fn classify(g: &Operator, tol: f64) -> OperatorClass {
    let norm = operator_norm(g);
    let gram = g.adjoint().compose_unchecked(g);
    let kind = if gram.max_abs_diff(&Operator::identity(g.in_dim())) <= tol {
        OperatorKind::Isometry
    } else if norm <= 1.0 + tol {
        OperatorKind::Contraction
    } else {
        OperatorKind::Bounded
    };
    OperatorClass { kind, norm }
}

fn require_contraction(g: &Operator) -> Result<()> {
    let class = classify(g, DEFAULT_TOL);
    if class.kind == OperatorKind::Bounded {
        Err(Error::NotContraction { norm: class.norm })
    } else {
        Ok(())
    }
}

/// Clamps a computed norm gap `a - b` (with `a = ⟨x|x⟩`) at zero when its
/// negative part is roundoff.
pub(crate) fn clamp_gap(gap: f64, scale: f64) -> Result<f64> {
    if gap >= 0.0 {
        Ok(gap)
    } else if gap >= -GAP_CLAMP * scale.max(1.0) {
        Ok(0.0)
    } else {
        Err(Error::NegativeGap { gap })
    }
}

/// `⟨x|x⟩ − ⟨Gx|Gx⟩` for a contraction `G`.
pub fn gap(g: &Operator, x: &FinVector) -> Result<f64> {
    check_dims(g.in_dim(), x.dim())?;
    require_contraction(g)?;
    gap_unchecked(g, x)
}

fn gap_unchecked(g: &Operator, x: &FinVector) -> Result<f64> {
    let before = x.norm_sqr();
    clamp_gap(before - g.apply_unchecked(x).norm_sqr(), before)
}

/// Both sides of the norm-gap inequality for a contraction `G`:
/// `|⟨x|y⟩ − ⟨Gx|Gy⟩|² ≤ (⟨x|x⟩ − ⟨Gx|Gx⟩)(⟨y|y⟩ − ⟨Gy|Gy⟩)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LemmaCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl LemmaCheck {
    pub fn residual(&self) -> f64 {
        self.lhs - self.rhs
    }
}

pub fn lemma_check(g: &Operator, x: &FinVector, y: &FinVector) -> Result<LemmaCheck> {
    lemma_check_with_tol(g, x, y, DEFAULT_TOL)
}

pub fn lemma_check_with_tol(
    g: &Operator,
    x: &FinVector,
    y: &FinVector,
    tol: f64,
) -> Result<LemmaCheck> {
    check_dims(g.in_dim(), x.dim())?;
    check_dims(g.in_dim(), y.dim())?;
    require_contraction(g)?;
    let gx = g.apply_unchecked(x);
    let gy = g.apply_unchecked(y);
    let diff =
        inner_unchecked(x.entries(), y.entries()) - inner_unchecked(gx.entries(), gy.entries());
    let lhs = diff.norm_sqr();
    let rhs = gap_unchecked(g, x)? * gap_unchecked(g, y)?;
    Ok(LemmaCheck {
        lhs,
        rhs,
        holds: lhs <= rhs + tol,
    })
}

/// An orthonormal basis (as columns) of the null space of `a`, where singular
/// values at most `null_tol` count as zero. Returns `None` when a singular
/// value falls in the ambiguous band `(null_tol, gray_tol)`.
pub(crate) fn null_space(a: &Operator, null_tol: f64, gray_tol: f64) -> Option<Vec<FinVector>> {
    let d = super::svd::svd(a);
    let mut basis = Vec::new();
    for k in 0..a.in_dim() {
        let sigma = d.s.get(k).copied().unwrap_or(0.0);
        if sigma <= null_tol {
            basis.push(FinVector::from_entries_unchecked(d.right_vector(k)));
        } else if sigma < gray_tol {
            return None;
        }
    }
    Some(basis)
}
