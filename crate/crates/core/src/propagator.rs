//! Exact spectral time evolution and the spreading law
//! `d²⟨r²⟩/dt² = 2` (with `c = 1`).
//!
//! Both helicity amplitudes evolve as `f(k) e^{-ikt}`, so `⟨r²⟩(t)` is an
//! exact quadratic in `t` with leading coefficient one.

use crate::kspace::{fourier_to_position, synthesize_kspace, FieldGrid, Grid, HelicityAmplitudePair};
use crate::moments::{amplitude_moments, variance_position, TRUNCATION_THRESHOLD};
use crate::quadrature::SphericalRule;
use crate::{Error, Result};
use rayon::prelude::*;
use serde::Serialize;
use std::fmt::Write as _;

/// Fewest time samples accepted for a quadratic fit.
pub const MIN_SAMPLES: usize = 5;

/// The position-space field at time `t`, synthesized on the wavevector grid
/// `kgrid` and transformed onto its dual.
pub fn evolve(amps: &HelicityAmplitudePair, kgrid: &Grid, t: f64) -> Result<FieldGrid> {
    fourier_to_position(&synthesize_kspace(amps, kgrid, t)?)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub second_moments: Vec<f64>,
    /// Norm at each time; constant for unitary evolution.
    pub norms: Vec<f64>,
    /// Norm at the first sample.
    pub norm: f64,
    /// Set when the position-space density at the grid boundary exceeded the
    /// truncation threshold at some sampled time.
    pub truncated: bool,
}

impl Trajectory {
    /// `max |N(t)/N(t₀) - 1|`.
    pub fn norm_drift(&self) -> f64 {
        self.norms.iter().map(|n| (n / self.norm - 1.0).abs()).fold(0.0, f64::max)
    }

    pub fn fit(&self) -> Result<QuadraticFit> {
        fit_quadratic(&self.times, &self.second_moments)
    }

    /// Columns `t, second_moment, norm`, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,second_moment,norm\n");
        for i in 0..self.times.len() {
            let _ = writeln!(out, "{:.16e},{:.16e},{:.16e}", self.times[i], self.second_moments[i], self.norms[i]);
        }
        out
    }

    /// Whether the sample at `t = 0` (or the one closest to it) is the
    /// smallest second moment.
    pub fn minimal_at_zero(&self) -> bool {
        let Some(i0) = (0..self.times.len()).min_by(|&a, &b| self.times[a].abs().total_cmp(&self.times[b].abs()))
        else {
            return false;
        };
        let m0 = self.second_moments[i0];
        self.second_moments.iter().all(|&m| m >= m0 * (1.0 - 1e-12))
    }
}

fn check_times(times: &[f64]) -> Result<()> {
    if times.len() < MIN_SAMPLES {
        return Err(Error::Fit(format!("{} time samples given, at least {MIN_SAMPLES} are needed", times.len())));
    }
    if times.iter().any(|t| !t.is_finite()) {
        return Err(Error::Domain("times must be finite".into()));
    }
    Ok(())
}

/// `⟨r²⟩(t)` by evolving on the grid and summing over position space.
pub fn spreading_trajectory(amps: &HelicityAmplitudePair, kgrid: &Grid, times: &[f64]) -> Result<Trajectory> {
    check_times(times)?;
    let samples = times
        .iter()
        .map(|&t| {
            let field = evolve(amps, kgrid, t)?;
            Ok((variance_position(&field)?, field.norm()?, field.boundary_ratio() > TRUNCATION_THRESHOLD))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Trajectory {
        times: times.to_vec(),
        second_moments: samples.iter().map(|s| s.0).collect(),
        norms: samples.iter().map(|s| s.1).collect(),
        norm: samples[0].1,
        truncated: samples.iter().any(|s| s.2),
    })
}

/// `⟨r²⟩(t)` from the evolved amplitudes by spherical quadrature.
pub fn analytic_trajectory(amps: &HelicityAmplitudePair, rule: &SphericalRule, times: &[f64]) -> Result<Trajectory> {
    check_times(times)?;
    let samples = times
        .par_iter()
        .map(|&t| {
            let m = amplitude_moments(&amps.evolved(t), rule)?;
            Ok((m.r2 / m.norm, m.norm))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Trajectory {
        times: times.to_vec(),
        second_moments: samples.iter().map(|s| s.0).collect(),
        norms: samples.iter().map(|s| s.1).collect(),
        norm: samples[0].1,
        truncated: false,
    })
}

/// Least-squares `α + βt + γt²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuadraticFit {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// RMS residual divided by the RMS of the data.
    pub relative_residual: f64,
}

impl QuadraticFit {
    /// `d²/dt² = 2γ`.
    pub fn acceleration(&self) -> f64 {
        2.0 * self.gamma
    }
}

pub fn fit_quadratic(times: &[f64], values: &[f64]) -> Result<QuadraticFit> {
    if times.len() != values.len() {
        return Err(Error::Shape(format!("{} times but {} values", times.len(), values.len())));
    }
    check_times(times)?;
    let n = times.len() as f64;
    let scale = times.iter().fold(0.0_f64, |m, t| m.max(t.abs()));
    if scale == 0.0 {
        return Err(Error::Fit("all sample times coincide".into()));
    }
    // normal equations in s = t/scale
    let mut m = [[0.0; 3]; 3];
    let mut rhs = [0.0; 3];
    for (&t, &v) in times.iter().zip(values) {
        let s = t / scale;
        let basis = [1.0, s, s * s];
        for i in 0..3 {
            rhs[i] += basis[i] * v;
            for j in 0..3 {
                m[i][j] += basis[i] * basis[j];
            }
        }
    }
    let c = solve3(m, rhs).ok_or_else(|| Error::Fit("sample times do not determine a quadratic".into()))?;
    let (alpha, beta, gamma) = (c[0], c[1] / scale, c[2] / (scale * scale));
    let ss: f64 = times.iter().zip(values).map(|(&t, &v)| (alpha + beta * t + gamma * t * t - v).powi(2)).sum();
    let data: f64 = values.iter().map(|v| v * v).sum();
    Ok(QuadraticFit {
        alpha,
        beta,
        gamma,
        relative_residual: (ss / n).sqrt() / (data / n).sqrt().max(f64::MIN_POSITIVE),
    })
}

/// Cramer's rule with a conditioning guard.
fn solve3(m: [[f64; 3]; 3], b: [f64; 3]) -> Option<[f64; 3]> {
    let det = |a: [[f64; 3]; 3]| {
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    };
    let d = det(m);
    let size: f64 = m.iter().flatten().map(|v| v.abs()).fold(0.0, f64::max);
    if d.abs() <= 1e-12 * size.powi(3) {
        return None;
    }
    let mut out = [0.0; 3];
    for (k, o) in out.iter_mut().enumerate() {
        let mut mk = m;
        for i in 0..3 {
            mk[i][k] = b[i];
        }
        *o = det(mk) / d;
    }
    Some(out)
}
