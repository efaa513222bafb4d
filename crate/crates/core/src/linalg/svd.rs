//! Full singular value decomposition, backed by `faer`.

use faer::Mat;

use super::{Operator, Scalar};

/// `G = U Σ V†` with `U`, `V` square unitary and `Σ` descending.
pub(crate) struct Svd {
    pub u: Operator,
    /// `min(out, in)` singular values, descending.
    pub s: Vec<f64>,
    pub v: Operator,
}

fn to_faer(g: &Operator) -> Mat<Scalar> {
    Mat::from_fn(g.out_dim(), g.in_dim(), |i, j| g.get(i, j))
}

fn from_faer(m: faer::MatRef<'_, Scalar>) -> Operator {
    let (rows, cols) = (m.nrows(), m.ncols());
    let data = (0..rows)
        .flat_map(|i| (0..cols).map(move |j| m[(i, j)]))
        .collect();
    Operator::from_entries_unchecked(rows, cols, data)
}

pub(crate) fn svd(g: &Operator) -> Svd {
    let d = to_faer(g).svd().expect("SVD of a finite matrix converges");
    let s = d.S().column_vector().iter().map(|z| z.re).collect();
    Svd {
        u: from_faer(d.U()),
        s,
        v: from_faer(d.V()),
    }
}

pub(crate) fn singular_values(g: &Operator) -> Vec<f64> {
    to_faer(g)
        .singular_values()
        .expect("SVD of a finite matrix converges")
}

impl Svd {
    /// Column `k` of `V`.
    pub fn right_vector(&self, k: usize) -> Vec<Scalar> {
        (0..self.v.out_dim()).map(|i| self.v.get(i, k)).collect()
    }

    /// `U diag(f(σ)) V†`, with the shape of the original operator.
    pub fn recompose_with(&self, f: impl Fn(f64) -> f64) -> Operator {
        let (m, n) = (self.u.out_dim(), self.v.out_dim());
        let mut data = vec![Scalar::new(0.0, 0.0); m * n];
        for (k, &sigma) in self.s.iter().enumerate() {
            let w = f(sigma);
            for i in 0..m {
                let ui = self.u.get(i, k) * w;
                for j in 0..n {
                    data[i * n + j] += ui * self.v.get(j, k).conj();
                }
            }
        }
        Operator::from_entries_unchecked(m, n, data)
    }
}
