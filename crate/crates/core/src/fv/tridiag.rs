use super::grid::Grid1D;
use crate::error::{Error, Result};

/// Tridiagonal operator stored by diagonals.
///
/// `sub[k]` couples row `k` to `k - 1` (`sub[0]` unused), `sup[k]` couples
/// row `k` to `k + 1` (`sup[n - 1]` unused).
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalOperator {
    pub sub: Vec<f64>,
    pub diag: Vec<f64>,
    pub sup: Vec<f64>,
}

impl TridiagonalOperator {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        assert_eq!(x.len(), n);
        (0..n)
            .map(|k| {
                let mut acc = self.diag[k] * x[k];
                if k > 0 {
                    acc += self.sub[k] * x[k - 1];
                }
                if k + 1 < n {
                    acc += self.sup[k] * x[k + 1];
                }
                acc
            })
            .collect()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.apply(&vec![1.0; self.len()])
    }

    /// Solves `(I + scale * self) x = rhs` in place with the Thomas algorithm.
    ///
    /// `scratch` must have the operator's length. No pivoting: the shifted
    /// diffusion operator is strictly diagonally dominant for `scale >= 0`.
    pub fn solve_shifted(&self, scale: f64, rhs: &mut [f64], scratch: &mut [f64]) {
        let n = self.len();
        debug_assert_eq!(rhs.len(), n);
        debug_assert_eq!(scratch.len(), n);
        let mut denom = 1.0 + scale * self.diag[0];
        debug_assert!(denom > 0.0, "singular shifted system");
        scratch[0] = scale * self.sup[0] / denom;
        rhs[0] /= denom;
        for k in 1..n {
            let a = scale * self.sub[k];
            denom = 1.0 + scale * self.diag[k] - a * scratch[k - 1];
            debug_assert!(denom > 0.0, "singular shifted system");
            scratch[k] = if k + 1 < n { scale * self.sup[k] / denom } else { 0.0 };
            rhs[k] = (rhs[k] - a * rhs[k - 1]) / denom;
        }
        for k in (0..n - 1).rev() {
            rhs[k] -= scratch[k] * rhs[k + 1];
        }
    }
}

/// Central-difference diffusion operator with zero-flux boundary rows.
///
/// Interior rows carry `(-1, 2, -1) / h`, the boundary rows `(1, -1) / h`.
/// The semi-discrete diffusion term of cell `k` is
/// `-(kappa_D / L^2) * (A f)_k / h`.
pub fn assemble_diffusion(grid: &Grid1D) -> Result<TridiagonalOperator> {
    let n = grid.n_cells();
    if n < 3 {
        return Err(Error::GridTooSmall { min: 3, got: n });
    }
    let inv_h = 1.0 / grid.h();
    let mut sub = vec![-inv_h; n];
    let mut diag = vec![2.0 * inv_h; n];
    let mut sup = vec![-inv_h; n];
    sub[0] = 0.0;
    sup[n - 1] = 0.0;
    diag[0] = inv_h;
    diag[n - 1] = inv_h;
    Ok(TridiagonalOperator { sub, diag, sup })
}
