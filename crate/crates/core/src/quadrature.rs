//! Fixed product rules for integrals over wavevector space.
//!
//! The analytic (closure-based) moment path integrates in spherical
//! coordinates: Gauss–Legendre in `k` on `[0, k_max]`, Gauss–Legendre in the
//! polar angle `θ` (not in `cos θ`, so that factors of `sin θ` stay smooth) and
//! the trapezoidal rule in `φ`, which is exact for trigonometric polynomials of
//! degree below the number of azimuthal points.

use std::f64::consts::PI;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Newton iteration on `Pₙ` from the Chebyshev-like initial guesses.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped to `[lo, hi]`.
    pub fn on(&self, lo: f64, hi: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        self.nodes.iter().zip(&self.weights).map(move |(x, w)| (mid + half * x, half * w))
    }

    pub fn integrate(&self, lo: f64, hi: f64, f: impl Fn(f64) -> f64) -> f64 {
        crate::sum::sum(self.on(lo, hi).map(|(x, w)| w * f(x)))
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let d = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Product rule over a ball of radius `k_max` in spherical coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SphericalRule {
    pub radial: usize,
    pub polar: usize,
    pub azimuthal: usize,
}

impl Default for SphericalRule {
    fn default() -> Self {
        Self { radial: 96, polar: 48, azimuthal: 32 }
    }
}

/// One quadrature node: Cartesian wavevector and its volume weight.
#[derive(Clone, Copy, Debug)]
pub struct Node {
    pub k: [f64; 3],
    pub weight: f64,
}

impl SphericalRule {
    /// Unit directions with their solid-angle weights, summing to `4π`.
    pub fn directions(&self) -> Vec<Node> {
        let polar = GaussLegendre::new(self.polar);
        let dphi = 2.0 * PI / self.azimuthal as f64;
        let mut out = Vec::with_capacity(self.polar * self.azimuthal);
        for (theta, w) in polar.on(0.0, PI) {
            let (st, ct) = theta.sin_cos();
            for j in 0..self.azimuthal {
                // half-step offset keeps φ away from the coordinate planes
                let phi = (j as f64 + 0.5) * dphi;
                out.push(Node { k: [st * phi.cos(), st * phi.sin(), ct], weight: w * st * dphi });
            }
        }
        out
    }

    /// All nodes of the rule on the ball `|k| ≤ k_max`. No node lies on the
    /// polar axis or at the origin.
    pub fn nodes(&self, k_max: f64) -> Vec<Node> {
        let radial = GaussLegendre::new(self.radial);
        let dirs = self.directions();
        let mut out = Vec::with_capacity(self.radial * dirs.len());
        for (k, wk) in radial.on(0.0, k_max) {
            for d in &dirs {
                out.push(Node { k: d.k.map(|c| c * k), weight: wk * k * k * d.weight });
            }
        }
        out
    }
}
