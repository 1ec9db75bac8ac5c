use crate::error::{Error, Result};

/// Stopping rule for the implicit scalar updates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonSettings {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for NewtonSettings {
    fn default() -> Self {
        NewtonSettings {
            tol: 1e-12,
            max_iter: 50,
        }
    }
}

/// Solves the backward Euler equation `x = base + tau * rate(x)`.
///
/// `rate` returns the value and derivative. Damped Newton first; when the
/// Newton direction is unusable the iteration falls back to the fixed-point
/// map `x <- base + tau * rate(x)`, which contracts for small `tau`.
pub fn solve_backward_euler(
    base: f64,
    tau: f64,
    x0: f64,
    rate: impl Fn(f64) -> (f64, f64),
    settings: NewtonSettings,
    what: &'static str,
) -> Result<f64> {
    let residual = |x: f64| {
        let (r, dr) = rate(x);
        (x - base - tau * r, 1.0 - tau * dr, r)
    };
    let mut x = x0;
    let (mut g, mut dg, mut r) = residual(x);
    for _ in 0..settings.max_iter {
        if g.abs() <= settings.tol * x.abs().max(1.0) {
            return Ok(x);
        }
        let newton = if dg.is_finite() && dg.abs() > 1e-14 {
            Some(-g / dg)
        } else {
            None
        };
        let mut accepted = false;
        if let Some(step) = newton {
            let mut damping = 1.0;
            for _ in 0..30 {
                let trial = x + damping * step;
                let (gt, dgt, rt) = residual(trial);
                if gt.is_finite() && gt.abs() < g.abs() {
                    x = trial;
                    (g, dg, r) = (gt, dgt, rt);
                    accepted = true;
                    break;
                }
                damping *= 0.5;
            }
        }
        if !accepted {
            x = base + tau * r;
            (g, dg, r) = residual(x);
        }
    }
    if g.abs() <= settings.tol * x.abs().max(1.0) {
        Ok(x)
    } else {
        Err(Error::NoConvergence {
            what,
            iterations: settings.max_iter,
            residual: g.abs(),
        })
    }
}
