//! The dimensionless radial problem behind the bound,
//!
//! ```text
//! ½ [-∂κ² - (2/κ)∂κ + 2/κ² + κ²] g = γ g
//! ```
//!
//! a three-dimensional oscillator with angular momentum one. Its spectrum is
//! `γₙ = 5/2 + 2n` with eigenfunctions `κ e^{-κ²/2} Lₙ^{3/2}(κ²)`.
//!
//! With `u = κg` the equation becomes `-½u'' + (1/κ² + κ²/2)u = γu`,
//! `u(0) = 0`, discretized by central differences on `κᵢ = ih`,
//! `h = κ_max/(N+1)`, with a Dirichlet wall at `κ_max`. The resulting
//! symmetric tridiagonal matrix is diagonalized by Sturm-sequence bisection
//! and inverse iteration.

use crate::specfun::laguerre_unchecked;
use crate::sum::sum;
use crate::{Error, Result};
use serde::Serialize;
use std::fmt::Write as _;

pub const MIN_POINTS: usize = 200;
pub const MIN_KAPPA_MAX: f64 = 8.0;

/// Largest `|u|` allowed within one unit of the wall, relative to the peak.
const WALL_LEAKAGE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RadialProblem {
    pub kappa_max: f64,
    pub n_points: usize,
}

impl RadialProblem {
    pub fn new(kappa_max: f64, n_points: usize) -> Result<Self> {
        if !(kappa_max >= MIN_KAPPA_MAX) || !kappa_max.is_finite() {
            return Err(Error::Resolution(format!(
                "kappa_max = {kappa_max} is below {MIN_KAPPA_MAX}; the Gaussian tail is not resolved"
            )));
        }
        if n_points < MIN_POINTS {
            return Err(Error::Resolution(format!("n_points = {n_points} is below {MIN_POINTS}")));
        }
        Ok(Self { kappa_max, n_points })
    }

    pub fn step(&self) -> f64 {
        self.kappa_max / (self.n_points + 1) as f64
    }

    /// Interior nodes `κᵢ = ih`, `i = 1..=N`.
    pub fn nodes(&self) -> Vec<f64> {
        let h = self.step();
        (1..=self.n_points).map(|i| i as f64 * h).collect()
    }

    /// The grid with spacing halved: `2N + 1` interior points.
    pub fn refined(&self) -> Self {
        Self { kappa_max: self.kappa_max, n_points: 2 * self.n_points + 1 }
    }
}

impl Default for RadialProblem {
    fn default() -> Self {
        Self { kappa_max: 10.0, n_points: 2000 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RadialSpectrum {
    pub kappa_max: f64,
    pub n_points: usize,
    pub eigenvalues: Vec<f64>,
    /// `‖Hu - γu‖` of each discrete eigenvector, `u` normalized.
    pub residuals: Vec<f64>,
    #[serde(skip)]
    pub kappa: Vec<f64>,
    /// `g(κᵢ)` per state, normalized to `∫κ²g² dκ = 1`, positive near the
    /// origin.
    #[serde(skip)]
    pub eigenfunctions: Vec<Vec<f64>>,
}

impl RadialSpectrum {
    /// Columns `kappa, g0, g1, ...`, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("kappa");
        for n in 0..self.eigenfunctions.len() {
            let _ = write!(out, ",g{n}");
        }
        out.push('\n');
        for (i, k) in self.kappa.iter().enumerate() {
            let _ = write!(out, "{k:.16e}");
            for g in &self.eigenfunctions {
                let _ = write!(out, ",{:.16e}", g[i]);
            }
            out.push('\n');
        }
        out
    }
}

struct Tridiagonal {
    diag: Vec<f64>,
    off: f64,
}

impl Tridiagonal {
    fn radial(problem: &RadialProblem) -> Self {
        let h = problem.step();
        let h2 = h * h;
        let diag = problem.nodes().iter().map(|&k| 1.0 / h2 + 1.0 / (k * k) + 0.5 * k * k).collect();
        Self { diag, off: -0.5 / h2 }
    }

    /// Number of eigenvalues below `x`.
    fn count_below(&self, x: f64) -> usize {
        let e2 = self.off * self.off;
        let mut q = 1.0;
        let mut count = 0;
        for (i, &d) in self.diag.iter().enumerate() {
            q = if i == 0 { d - x } else { d - x - e2 / q };
            if q == 0.0 {
                q = -f64::EPSILON * (d.abs() + self.off.abs());
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn bounds(&self) -> (f64, f64) {
        let r = 2.0 * self.off.abs();
        let lo = self.diag.iter().fold(f64::INFINITY, |m, &d| m.min(d - r));
        let hi = self.diag.iter().fold(f64::NEG_INFINITY, |m, &d| m.max(d + r));
        (lo, hi)
    }

    /// The `j`-th smallest eigenvalue by bisection.
    fn eigenvalue(&self, j: usize) -> f64 {
        let (mut lo, mut hi) = self.bounds();
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > j {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = x.len();
        (0..n)
            .map(|i| {
                let mut v = self.diag[i] * x[i];
                if i > 0 {
                    v += self.off * x[i - 1];
                }
                if i + 1 < n {
                    v += self.off * x[i + 1];
                }
                v
            })
            .collect()
    }

    /// Solves `(T - σ) x = b` by Gaussian elimination with partial pivoting.
    fn solve_shifted(&self, sigma: f64, b: &[f64]) -> Vec<f64> {
        let n = self.diag.len();
        let mut d: Vec<f64> = self.diag.iter().map(|v| v - sigma).collect();
        let mut du = vec![self.off; n.saturating_sub(1)];
        let mut dl = vec![self.off; n.saturating_sub(1)];
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut x = b.to_vec();
        for i in 0..n - 1 {
            if d[i].abs() >= dl[i].abs() {
                let d0 = if d[i] == 0.0 { f64::EPSILON } else { d[i] };
                let m = dl[i] / d0;
                d[i + 1] -= m * du[i];
                x[i + 1] -= m * x[i];
                dl[i] = 0.0;
            } else {
                let m = d[i] / dl[i];
                d[i] = dl[i];
                let tmp = d[i + 1];
                d[i + 1] = du[i] - m * tmp;
                if i + 2 < n {
                    dl[i] = du[i + 1];
                    du[i + 1] *= -m;
                    du2[i] = dl[i];
                } else {
                    dl[i] = 0.0;
                }
                du[i] = tmp;
                x.swap(i, i + 1);
                x[i + 1] -= m * x[i];
            }
        }
        if d[n - 1] == 0.0 {
            d[n - 1] = f64::EPSILON;
        }
        x[n - 1] /= d[n - 1];
        if n > 1 {
            x[n - 2] = (x[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            x[i] = (x[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i];
        }
        x
    }

    fn eigenvector(&self, lambda: f64) -> Vec<f64> {
        let n = self.diag.len();
        let sigma = lambda + 1e-10 * lambda.abs().max(1.0);
        let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 1e-3 * ((i * 7919) % 101) as f64).collect();
        for _ in 0..4 {
            x = self.solve_shifted(sigma, &x);
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            x.iter_mut().for_each(|v| *v /= norm);
        }
        x
    }
}

/// The lowest `n_states` eigenpairs of the discretized radial problem.
pub fn solve_radial(problem: &RadialProblem, n_states: usize) -> Result<RadialSpectrum> {
    let problem = RadialProblem::new(problem.kappa_max, problem.n_points)?;
    if n_states == 0 {
        return Err(Error::Domain("at least one state must be requested".into()));
    }
    let h = problem.step();
    let kappa = problem.nodes();
    let wall = kappa.partition_point(|&k| k < problem.kappa_max - 1.0);
    let t = Tridiagonal::radial(&problem);
    let mut eigenvalues = Vec::with_capacity(n_states);
    let mut residuals = Vec::with_capacity(n_states);
    let mut eigenfunctions = Vec::with_capacity(n_states);
    for j in 0..n_states {
        let lambda = t.eigenvalue(j);
        let mut u = t.eigenvector(lambda);
        let peak = u.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let leak = u[wall..].iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if leak > WALL_LEAKAGE * peak {
            return Err(Error::Resolution(format!(
                "state {j} (γ ≈ {lambda:.4}) reaches the wall at κ_max = {}; \
                 increase kappa_max or request fewer states",
                problem.kappa_max
            )));
        }
        let first = u.iter().find(|v| v.abs() > 1e-3 * peak).copied().unwrap_or(1.0);
        let scale = first.signum() / (h * u.iter().map(|v| v * v).sum::<f64>()).sqrt();
        u.iter_mut().for_each(|v| *v *= scale);
        let hu = t.apply(&u);
        let res = (h * sum(hu.iter().zip(&u).map(|(a, b)| (a - lambda * b).powi(2)))).sqrt();
        eigenvalues.push(lambda);
        residuals.push(res);
        eigenfunctions.push(u.iter().zip(&kappa).map(|(u, k)| u / k).collect());
    }
    Ok(RadialSpectrum {
        kappa_max: problem.kappa_max,
        n_points: problem.n_points,
        eigenvalues,
        residuals,
        kappa,
        eigenfunctions,
    })
}

/// Richardson extrapolation `(4γ_{h/2} - γ_h)/3` over the grid and its
/// refinement with `2N + 1` points.
pub fn richardson(problem: &RadialProblem, n_states: usize) -> Result<Vec<f64>> {
    let coarse = solve_radial(problem, n_states)?;
    let fine = solve_radial(&problem.refined(), n_states)?;
    Ok(coarse.eigenvalues.iter().zip(&fine.eigenvalues).map(|(c, f)| (4.0 * f - c) / 3.0).collect())
}

/// `κ e^{-κ²/2} Lₙ^{3/2}(κ²)`, unnormalized.
pub fn analytic_eigenfunction(n: usize, kappa: f64) -> Result<f64> {
    if !(kappa >= 0.0) || !kappa.is_finite() {
        return Err(Error::Domain(format!("kappa = {kappa} must be finite and non-negative")));
    }
    Ok(kappa * (-kappa * kappa / 2.0).exp() * laguerre_unchecked(n, 1.5, kappa * kappa))
}

/// `γₙ = 5/2 + 2n`.
pub fn analytic_eigenvalue(n: usize) -> f64 {
    2.5 + 2.0 * n as f64
}

/// A radial function sampled at `κᵢ = i·step`, `i = 0, 1, …`, decaying to
/// zero by the last sample.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialSamples {
    pub step: f64,
    pub values: Vec<f64>,
}

impl RadialSamples {
    pub fn from_fn(kappa_max: f64, intervals: usize, g: impl Fn(f64) -> f64) -> Self {
        let step = kappa_max / intervals as f64;
        Self { step, values: (0..=intervals).map(|i| g(i as f64 * step)).collect() }
    }
}

/// `⟨g|H|g⟩/⟨g|g⟩` in the weak form
/// `∫[½u'² + (1/κ² + κ²/2)u²]dκ / ∫u²dκ` with `u = κg`, fourth-order
/// differences and the trapezoidal rule.
pub fn rayleigh_quotient(g: &RadialSamples) -> Result<f64> {
    let n = g.values.len();
    let h = g.step;
    if n < 7 || !(h > 0.0) {
        return Err(Error::Shape("a radial function needs at least 7 samples and a positive step".into()));
    }
    if g.values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("radial samples must be finite".into()));
    }
    let u: Vec<f64> = g.values.iter().enumerate().map(|(i, v)| i as f64 * h * v).collect();
    let du = |i: usize| -> f64 {
        let d = if i < 2 {
            let s = &u[i..i + 5];
            -25.0 * s[0] + 48.0 * s[1] - 36.0 * s[2] + 16.0 * s[3] - 3.0 * s[4]
        } else if i + 2 >= n {
            let s = &u[i - 4..=i];
            25.0 * s[4] - 48.0 * s[3] + 36.0 * s[2] - 16.0 * s[1] + 3.0 * s[0]
        } else {
            u[i - 2] - 8.0 * u[i - 1] + 8.0 * u[i + 1] - u[i + 2]
        };
        d / (12.0 * h)
    };
    let trap = |f: &dyn Fn(usize) -> f64| h * (sum((1..n - 1).map(f)) + 0.5 * (f(0) + f(n - 1)));
    let energy = trap(&|i| {
        let k = i as f64 * h;
        0.5 * du(i).powi(2) + g.values[i].powi(2) + 0.5 * k * k * u[i] * u[i]
    });
    let norm = trap(&|i| u[i] * u[i]);
    if !(norm > 0.0) {
        return Err(Error::DegenerateNorm);
    }
    Ok(energy / norm)
}
