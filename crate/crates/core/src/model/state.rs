use serde::{Deserialize, Serialize};

use super::params::NEURITES;

/// Cell averages of the antero- and retrograde densities on one neurite,
/// expressed on the fixed reference interval `(0, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeuriteField {
    pub f_plus: Vec<f64>,
    pub f_minus: Vec<f64>,
}

impl NeuriteField {
    pub fn zeros(n_cells: usize) -> Self {
        Self::uniform(n_cells, 0.0, 0.0)
    }

    pub fn uniform(n_cells: usize, f_plus: f64, f_minus: f64) -> Self {
        NeuriteField {
            f_plus: vec![f_plus; n_cells],
            f_minus: vec![f_minus; n_cells],
        }
    }

    pub fn n_cells(&self) -> usize {
        self.f_plus.len()
    }

    #[inline]
    pub fn rho(&self, k: usize) -> f64 {
        self.f_plus[k] + self.f_minus[k]
    }

    pub fn min_density(&self) -> f64 {
        self.f_plus
            .iter()
            .chain(self.f_minus.iter())
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_rho(&self) -> f64 {
        (0..self.n_cells())
            .map(|k| self.rho(k))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Boundary cell values `(f_plus, f_minus)` next to the soma.
    pub fn soma_trace(&self) -> (f64, f64) {
        (self.f_plus[0], self.f_minus[0])
    }

    /// Boundary cell values `(f_plus, f_minus)` next to the growth cone.
    pub fn tip_trace(&self) -> (f64, f64) {
        let last = self.n_cells() - 1;
        (self.f_plus[last], self.f_minus[last])
    }
}

/// All evolving unknowns at one time level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimState {
    pub fields: [NeuriteField; NEURITES],
    pub lambda_som: f64,
    pub lambda: [f64; NEURITES],
    pub lengths: [f64; NEURITES],
    /// Rate of length change used by the explicit geometric terms of the
    /// next density update.
    pub length_rates: [f64; NEURITES],
    pub time: f64,
}

impl SimState {
    pub fn n_cells(&self) -> usize {
        self.fields[0].n_cells()
    }

    pub fn min_density(&self) -> f64 {
        self.fields
            .iter()
            .map(NeuriteField::min_density)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_rho(&self) -> f64 {
        self.fields
            .iter()
            .map(NeuriteField::max_rho)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// A density profile on `(0, 1)`: a constant, tabulated cell values on an
/// equidistant grid, or `mean + amplitude * cos(pi y)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Profile {
    Constant(f64),
    Table(Vec<f64>),
    Cosine { mean: f64, amplitude: f64 },
}

impl Profile {
    /// Cell averages on `n_cells` cells. Tables are projected by overlap
    /// weighting, which preserves the integral.
    pub fn sample(&self, n_cells: usize) -> Vec<f64> {
        match self {
            Profile::Constant(v) => vec![*v; n_cells],
            Profile::Table(values) => project_cells(values, n_cells),
            Profile::Cosine { mean, amplitude } => {
                let n = n_cells as f64;
                let pi = std::f64::consts::PI;
                (0..n_cells)
                    .map(|k| {
                        let (a, b) = (k as f64 / n, (k + 1) as f64 / n);
                        mean + amplitude * ((pi * b).sin() - (pi * a).sin()) * n / pi
                    })
                    .collect()
            }
        }
    }
}

/// Conservative projection of piecewise-constant cell values onto `n_out`
/// equal cells of the unit interval.
pub fn project_cells(values: &[f64], n_out: usize) -> Vec<f64> {
    let n_in = values.len();
    if n_in == n_out {
        return values.to_vec();
    }
    let (h_in, h_out) = (1.0 / n_in as f64, 1.0 / n_out as f64);
    (0..n_out)
        .map(|i| {
            let (a, b) = (i as f64 * h_out, (i + 1) as f64 * h_out);
            let first = ((a / h_in).floor() as usize).min(n_in - 1);
            let last = (((b / h_in).ceil() as usize).max(first + 1)).min(n_in);
            let mut acc = 0.0;
            for (k, v) in values.iter().enumerate().take(last).skip(first) {
                let lo = (k as f64 * h_in).max(a);
                let hi = ((k + 1) as f64 * h_in).min(b);
                if hi > lo {
                    acc += v * (hi - lo);
                }
            }
            acc / h_out
        })
        .collect()
}

/// Initial data of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InitialData {
    pub lengths: [f64; NEURITES],
    pub lambda_som: f64,
    pub lambda: [f64; NEURITES],
    pub f_plus: [Profile; NEURITES],
    pub f_minus: [Profile; NEURITES],
}

impl InitialData {
    pub fn to_state(&self, n_cells: usize) -> SimState {
        SimState {
            fields: std::array::from_fn(|j| NeuriteField {
                f_plus: self.f_plus[j].sample(n_cells),
                f_minus: self.f_minus[j].sample(n_cells),
            }),
            lambda_som: self.lambda_som,
            lambda: self.lambda,
            lengths: self.lengths,
            length_rates: [0.0; NEURITES],
            time: 0.0,
        }
    }
}
