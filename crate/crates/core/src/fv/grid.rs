use crate::error::{Error, Result};

/// Equidistant cell-centred grid on the reference interval `(0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    n_cells: usize,
    h: f64,
    faces: Vec<f64>,
    centers: Vec<f64>,
}

impl Grid1D {
    pub fn new(n_cells: usize) -> Result<Self> {
        if n_cells < 2 {
            return Err(Error::GridTooSmall {
                min: 2,
                got: n_cells,
            });
        }
        let h = 1.0 / n_cells as f64;
        // Faces as k / n so the last one is exactly 1.
        let faces = (0..=n_cells).map(|k| k as f64 / n_cells as f64).collect();
        let centers = (0..n_cells)
            .map(|k| (k as f64 + 0.5) / n_cells as f64)
            .collect();
        Ok(Grid1D {
            n_cells,
            h,
            faces,
            centers,
        })
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Face coordinates `y_{k-1/2}`, `k = 0..=n_cells`.
    pub fn faces(&self) -> &[f64] {
        &self.faces
    }

    pub fn centers(&self) -> &[f64] {
        &self.centers
    }

    /// Grid with twice as many cells; every cell splits in two.
    pub fn refined(&self) -> Grid1D {
        Grid1D::new(2 * self.n_cells).expect("refinement only grows the grid")
    }
}
