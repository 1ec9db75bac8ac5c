//! Turning points of sampled time series.

use serde::Serialize;

/// An interior local maximum and the local minimum that follows it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Oscillation {
    pub peak: usize,
    pub trough: usize,
    /// Topographic prominence of the peak.
    pub prominence: f64,
    /// Drop from the peak to the trough.
    pub drop: f64,
}

/// Indices of strict turning points after collapsing plateaus, tagged
/// `true` for maxima. Endpoints are never turning points.
fn turning_points(xs: &[f64]) -> Vec<(usize, bool)> {
    let mut out = Vec::new();
    let mut prev: Option<(usize, f64)> = None;
    let mut rising: Option<bool> = None;
    for (i, &x) in xs.iter().enumerate() {
        let Some((k, last)) = prev else {
            prev = Some((i, x));
            continue;
        };
        if x == last {
            continue;
        }
        let up = x > last;
        if let Some(r) = rising {
            if r != up {
                out.push((k, r));
            }
        }
        rising = Some(up);
        prev = Some((i, x));
    }
    out
}

/// Prominence of the sample at `i`: its height above the higher of the two
/// lowest points reachable before meeting a higher sample on either side.
pub fn prominence(xs: &[f64], i: usize) -> f64 {
    let h = xs[i];
    let mut left = h;
    for &x in xs[..i].iter().rev() {
        if x > h {
            break;
        }
        left = left.min(x);
    }
    let mut right = h;
    for &x in &xs[i + 1..] {
        if x > h {
            break;
        }
        right = right.min(x);
    }
    h - left.max(right)
}

/// First interior maximum with prominence at least `min_prominence` that
/// is followed by an interior minimum at least `min_prominence` below it.
pub fn first_oscillation(xs: &[f64], min_prominence: f64) -> Option<Oscillation> {
    let tp = turning_points(xs);
    for (w, &(peak, is_max)) in tp.iter().enumerate() {
        if !is_max {
            continue;
        }
        let prom = prominence(xs, peak);
        if prom < min_prominence {
            continue;
        }
        let Some(&(trough, _)) = tp[w + 1..].iter().find(|(_, m)| !m) else {
            continue;
        };
        let drop = xs[peak] - xs[trough];
        if drop >= min_prominence {
            return Some(Oscillation {
                peak,
                trough,
                prominence: prom,
                drop,
            });
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn damped_wave() {
        let xs: Vec<f64> = (0..400)
            .map(|i| {
                let t = i as f64 * 0.05;
                1.0 + (-0.1 * t).exp() * t.sin()
            })
            .collect();
        let o = first_oscillation(&xs, 1e-3).unwrap();
        assert!(o.peak < o.trough);
        assert!((o.peak as f64 * 0.05 - 1.47).abs() < 0.1);
        assert!(o.drop > 1.0);
    }

    #[test]
    fn endpoints_and_plateaus() {
        // The maximum sits at the end: not interior.
        assert_eq!(first_oscillation(&[0.0, 1.0, 2.0, 3.0], 1e-3), None);
        // Plateaus count once, at their first sample.
        let xs = [0.0, 1.0, 1.0, 1.0, 0.5, 0.5, 0.7];
        let o = first_oscillation(&xs, 0.1).unwrap();
        assert_eq!((o.peak, o.trough), (1, 4));
        assert!((o.prominence - 0.5).abs() < 1e-15);
    }

    #[test]
    fn small_wiggles_are_ignored() {
        let xs = [0.0, 1.0, 1.0 - 1e-4, 1.0 + 1e-4, 2.0];
        assert_eq!(first_oscillation(&xs, 1e-3), None);
        assert!(first_oscillation(&xs, 1e-5).is_some());
    }

    proptest! {
        #[test]
        fn monotone_series_never_oscillate(steps in prop::collection::vec(0.0f64..1.0, 2..60)) {
            let xs: Vec<f64> = steps.iter().scan(0.0, |s, d| { *s += d; Some(*s) }).collect();
            prop_assert_eq!(first_oscillation(&xs, 0.0), None);
        }

        #[test]
        fn prominence_is_bounded_by_the_range(xs in prop::collection::vec(-5.0f64..5.0, 3..40)) {
            let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min);
            for i in 0..xs.len() {
                let p = prominence(&xs, i);
                prop_assert!(p >= 0.0 && p <= xs[i] - lo + 1e-15);
            }
        }
    }
}
