use nalgebra::DMatrix;
use rand::Rng as _;
use rand_distr::StandardNormal;

use super::{Bounds, Shift};
use crate::rng::seeded;

/// Dense square matrix stored row-major for allocation-free products.
/// Orthonormal unless built with [`Rotation::sandwich`].
#[derive(Clone, Debug, PartialEq)]
pub struct Rotation {
    dim: usize,
    rows: Vec<f64>,
}

impl Rotation {
    pub fn identity(dim: usize) -> Self {
        let mut rows = vec![0.0; dim * dim];
        for i in 0..dim {
            rows[i * dim + i] = 1.0;
        }
        Self { dim, rows }
    }

    /// `out = R · v`.
    pub fn apply_into(&self, v: &[f64], out: &mut [f64]) {
        for (o, row) in out.iter_mut().zip(self.rows.chunks_exact(self.dim)) {
            *o = row.iter().zip(v).map(|(a, b)| a * b).sum();
        }
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        self.apply_into(v, &mut out);
        out
    }

    pub fn to_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.dim, self.dim, &self.rows)
    }

    fn from_matrix(m: &DMatrix<f64>) -> Self {
        let dim = m.nrows();
        let mut rows = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            rows.extend(m.row(i).iter());
        }
        Self { dim, rows }
    }

    /// `outer · diag(scale) · inner` as a single map.
    pub fn sandwich(outer: &Rotation, scale: &[f64], inner: &Rotation) -> Self {
        let diag = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(scale));
        Self::from_matrix(&(outer.to_matrix() * diag * inner.to_matrix()))
    }
}

/// Haar-distributed orthonormal matrix from a seed: QR of a Gaussian matrix
/// with the signs of R's diagonal folded into Q.
pub fn random_rotation(dim: usize, seed: u64) -> Rotation {
    let mut rng = seeded(seed);
    let g = DMatrix::from_fn(dim, dim, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    Rotation::from_matrix(&q)
}

/// Resolves a shift against the box: seeded shifts land in the inner 80%.
pub fn resolve_shift(shift: &Shift, bounds: &Bounds) -> Vec<f64> {
    match shift {
        Shift::Zero => vec![0.0; bounds.dim()],
        Shift::At(v) => v.clone(),
        Shift::Seeded(seed) => {
            let mut rng = seeded(*seed);
            bounds
                .lo
                .iter()
                .zip(&bounds.hi)
                .map(|(l, h)| {
                    let mid = 0.5 * (l + h);
                    let half = 0.4 * (h - l);
                    rng.random_range(mid - half..=mid + half)
                })
                .collect()
        }
    }
}
