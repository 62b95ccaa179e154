//! Sinusoid fitting and flatness statistics.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::polarization::wrap_angle;

/// Least-squares fit of `y = A + B·cos(θ + φ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FitResult {
    /// `A`
    pub offset: f64,
    /// `B ≥ 0`
    pub amplitude: f64,
    /// `φ` in `(−π, π]`
    pub phase0: f64,
    /// `B/A`
    pub visibility: f64,
    /// `B/A` again, under the name used for traces that should be flat.
    pub amplitude_fraction: f64,
    /// Standard error of `B` estimated from the residuals.
    pub amplitude_stderr: f64,
    /// Root-mean-square residual.
    pub residual_rms: f64,
}

impl FitResult {
    /// The fit reported for a trace with no counts at all.
    pub fn flat_zero() -> Self {
        FitResult {
            offset: 0.0,
            amplitude: 0.0,
            phase0: 0.0,
            visibility: 0.0,
            amplitude_fraction: 0.0,
            amplitude_stderr: 0.0,
            residual_rms: 0.0,
        }
    }
}

/// Angular extent of the sample phases: `2π` minus the largest gap between
/// neighbouring phases on the circle.
fn phase_span(thetas: &[f64]) -> f64 {
    let mut t: Vec<f64> = thetas.iter().map(|x| x.rem_euclid(TAU)).collect();
    t.sort_by(f64::total_cmp);
    let mut gap = t[0] + TAU - t[t.len() - 1];
    for w in t.windows(2) {
        gap = gap.max(w[1] - w[0]);
    }
    TAU - gap
}

/// Inverse of a symmetric 3×3 matrix, or `None` if it is numerically singular.
fn invert3(m: [[f64; 3]; 3]) -> Option<[[f64; 3]; 3]> {
    let cof = |r0: usize, r1: usize, c0: usize, c1: usize| m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
    let adj = [
        [cof(1, 2, 1, 2), -cof(0, 2, 1, 2), cof(0, 1, 1, 2)],
        [-cof(1, 2, 0, 2), cof(0, 2, 0, 2), -cof(0, 1, 0, 2)],
        [cof(1, 2, 0, 1), -cof(0, 2, 0, 1), cof(0, 1, 0, 1)],
    ];
    let det = m[0][0] * adj[0][0] + m[0][1] * adj[1][0] + m[0][2] * adj[2][0];
    let scale = m.iter().flatten().map(|x| x.abs()).fold(0.0, f64::max);
    if !(det.abs() > 1e-12 * scale.powi(3)) {
        return None;
    }
    Some(adj.map(|row| row.map(|x| x / det)))
}

/// Fits `y = A + B·cos(θ + φ)` by linear least squares on `{1, cos θ, sin θ}`.
///
/// Needs at least four points covering more than half a turn of phase and a
/// positive offset.
pub fn fit_fringe(points: &[(f64, f64)]) -> Result<FitResult> {
    let n = points.len();
    if n < 4 {
        return Err(Error::Fit(format!("need at least 4 points, got {n}")));
    }
    if points.iter().any(|(t, y)| !t.is_finite() || !y.is_finite()) {
        return Err(Error::Fit("non-finite sample".into()));
    }
    let thetas: Vec<f64> = points.iter().map(|p| p.0).collect();
    if phase_span(&thetas) <= PI {
        return Err(Error::Fit("sample phases span no more than π".into()));
    }
    let mut xtx = [[0.0; 3]; 3];
    let mut xty = [0.0; 3];
    for &(t, y) in points {
        let row = [1.0, t.cos(), t.sin()];
        for i in 0..3 {
            xty[i] += row[i] * y;
            for j in 0..3 {
                xtx[i][j] += row[i] * row[j];
            }
        }
    }
    let inv = invert3(xtx).ok_or_else(|| Error::Fit("singular design matrix".into()))?;
    let beta: [f64; 3] = std::array::from_fn(|i| (0..3).map(|j| inv[i][j] * xty[j]).sum());
    let [offset, a, b] = beta;
    if offset <= 0.0 {
        return Err(Error::Fit(format!("fitted offset {offset} is not positive")));
    }
    let rss: f64 = points
        .iter()
        .map(|&(t, y)| {
            let r = y - (offset + a * t.cos() + b * t.sin());
            r * r
        })
        .sum();
    let amplitude = a.hypot(b);
    let sigma2 = if n > 3 { rss / (n - 3) as f64 } else { 0.0 };
    let var_amp = if amplitude > 0.0 {
        sigma2 * (a * a * inv[1][1] + b * b * inv[2][2] + 2.0 * a * b * inv[1][2]) / (amplitude * amplitude)
    } else {
        sigma2 * (inv[1][1] + inv[2][2]) / 2.0
    };
    let ratio = amplitude / offset;
    Ok(FitResult {
        offset,
        amplitude,
        phase0: wrap_angle((-b).atan2(a)),
        visibility: ratio,
        amplitude_fraction: ratio,
        amplitude_stderr: var_amp.max(0.0).sqrt(),
        residual_rms: (rss / n as f64).sqrt(),
    })
}

/// Sample standard deviation over the mean.
pub fn relative_standard_error(values: &[f64]) -> Result<f64> {
    let n = values.len();
    if n < 2 {
        return Err(Error::UndefinedRse(format!("need at least 2 values, got {n}")));
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if !(mean > 0.0) {
        return Err(Error::UndefinedRse(format!("mean {mean} is not positive")));
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    Ok(var.sqrt() / mean)
}

/// `B/A` of the sinusoid fitted to a trace that should be flat.
pub fn residual_phase_amplitude(points: &[(f64, f64)]) -> Result<f64> {
    Ok(fit_fringe(points)?.amplitude_fraction)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn samples(n: usize, f: impl Fn(f64) -> f64) -> Vec<(f64, f64)> {
        (0..n)
            .map(|k| {
                let t = TAU * k as f64 / n as f64;
                (t, f(t))
            })
            .collect()
    }

    #[test]
    fn exact_recovery() {
        let fit = fit_fringe(&samples(16, |t| 4.0 + 2.0 * (t + 0.3).cos())).unwrap();
        assert!((fit.offset - 4.0).abs() < 1e-12);
        assert!((fit.amplitude - 2.0).abs() < 1e-12);
        assert!((fit.phase0 - 0.3).abs() < 1e-12);
        assert!((fit.visibility - 0.5).abs() < 1e-12);
        assert!(fit.residual_rms < 1e-9);
        assert!(fit.amplitude_stderr < 1e-9);
    }

    #[test]
    fn negative_amplitude_folds_into_phase() {
        let fit = fit_fringe(&samples(12, |t| 3.0 - t.cos())).unwrap();
        assert!((fit.amplitude - 1.0).abs() < 1e-12);
        assert!((fit.phase0.abs() - PI).abs() < 1e-12);
    }

    #[test]
    fn fit_errors() {
        assert!(fit_fringe(&samples(3, |t| 1.0 + t.cos())).is_err());
        let narrow: Vec<(f64, f64)> = (0..10).map(|k| (0.1 * k as f64, 1.0)).collect();
        assert!(matches!(fit_fringe(&narrow), Err(Error::Fit(_))));
        assert!(fit_fringe(&samples(8, |_| 0.0)).is_err());
        let repeated = vec![(0.0, 1.0), (0.0, 2.0), (PI, 1.0), (PI, 3.0)];
        assert!(fit_fringe(&repeated).is_err());
        assert!(residual_phase_amplitude(&samples(8, |_| 0.0)).is_err());
    }

    #[test]
    fn phase_span_wraps() {
        assert!((phase_span(&[0.0, 1.0, TAU - 1.0]) - 2.0).abs() < 1e-12);
        assert!((phase_span(&[0.0, 2.0, 4.0]) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn rse() {
        assert_eq!(relative_standard_error(&[5.0; 6]).unwrap(), 0.0);
        let r = relative_standard_error(&[9.0, 11.0]).unwrap();
        assert!((r - 2f64.sqrt() / 10.0).abs() < 1e-15);
        assert!(relative_standard_error(&[1.0]).is_err());
        assert!(relative_standard_error(&[0.0, 0.0]).is_err());
    }
}
