//! The unitary part of a contraction on a finite-dimensional space.
//!
//! For a contraction `G` on `ℂ^d` the space splits orthogonally as
//! `H_u ⊕ H_c`, both invariant, with `G` unitary on `H_u` and `Gⁿz → 0` for
//! every `z ∈ H_c`. Hence `⟨Gⁿx|Gⁿy⟩ → ⟨Px|Py⟩` with `P` the projection onto
//! `H_u`, and at any stage `|⟨Gⁿx|Gⁿy⟩ − ⟨Px|Py⟩| ≤ |(1−P)Gⁿx|·|(1−P)Gⁿy|`.

use crate::linalg::{inner_unchecked, null_space, FinVector, Operator, Scalar};

const NULL_TOL: f64 = 1e-10;
const GRAY_TOL: f64 = 1e-6;

/// Orthonormal basis of the unitary part `H_u` of a contraction.
#[derive(Debug, Clone)]
pub struct UnitarySplit {
    dim: usize,
    basis: Vec<FinVector>,
}

impl UnitarySplit {
    /// `H_u` is the largest subspace that `G` maps isometrically into itself.
    /// Starting from the whole space, repeatedly keep the vectors `c` of the
    /// current subspace `Q` with `(1 − QQ†)GQc = 0` and `|GQc| = |c|`.
    ///
    /// Returns `None` when a rank decision falls in the ambiguous band, i.e.
    /// `G` has a mode decaying too slowly to tell apart from a unitary one.
    pub fn compute(g: &Operator) -> Option<Self> {
        assert!(g.is_square(), "unitary split needs a square operator");
        let d = g.in_dim();
        let mut q = Operator::identity(d);
        loop {
            let k = q.in_dim();
            let m = g.compose_unchecked(&q);
            let qh = q.adjoint();
            let leak = m
                .sub(&q.compose_unchecked(&qh.compose_unchecked(&m)))
                .ok()?;
            let defect = m
                .adjoint()
                .compose_unchecked(&m)
                .sub(&Operator::identity(k))
                .ok()?;
            let mut stacked = leak.entries().to_vec();
            stacked.extend_from_slice(defect.entries());
            let a = Operator::from_entries_unchecked(d + k, k, stacked);
            let null = null_space(&a, NULL_TOL, GRAY_TOL)?;
            if null.len() == k {
                let basis = (0..k)
                    .map(|j| {
                        FinVector::from_entries_unchecked((0..d).map(|i| q.get(i, j)).collect())
                    })
                    .collect();
                return Some(Self { dim: d, basis });
            }
            if null.is_empty() {
                return Some(Self {
                    dim: d,
                    basis: vec![],
                });
            }
            let kk = null.len();
            let mut n_data = vec![Scalar::new(0.0, 0.0); k * kk];
            for (j, v) in null.iter().enumerate() {
                for (i, z) in v.entries().iter().enumerate() {
                    n_data[i * kk + j] = *z;
                }
            }
            q = q.compose_unchecked(&Operator::from_entries_unchecked(k, kk, n_data));
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates `Q†x` of the projection onto `H_u`.
    pub fn coordinates(&self, x: &FinVector) -> Vec<Scalar> {
        self.basis
            .iter()
            .map(|b| inner_unchecked(b.entries(), x.entries()))
            .collect()
    }

    /// `(1 − P)x`, the decaying component.
    pub fn decaying_part(&self, x: &FinVector) -> FinVector {
        let mut out = x.entries().to_vec();
        for (b, c) in self.basis.iter().zip(self.coordinates(x)) {
            for (o, z) in out.iter_mut().zip(b.entries()) {
                *o -= c * z;
            }
        }
        FinVector::from_entries_unchecked(out)
    }

    /// `Q†` as an operator (`rank × dim`); a single zero row when `H_u = 0`.
    pub fn coordinate_map(&self) -> Operator {
        if self.basis.is_empty() {
            return Operator::zeros(1, self.dim);
        }
        let data = self
            .basis
            .iter()
            .flat_map(|b| b.entries().iter().map(|z| z.conj()))
            .collect();
        Operator::from_entries_unchecked(self.basis.len(), self.dim, data)
    }
}
