//! Helicity amplitudes `f±(k)` as analytic closures with exact derivatives.

use crate::{CVec3, Complex64};
use std::sync::Arc;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// A square-integrable amplitude on wavevector space, together with the
/// derivatives the position-variance integrand needs.
pub trait Amplitude: Send + Sync {
    fn value(&self, k: [f64; 3]) -> Complex64;
    fn gradient(&self, k: [f64; 3]) -> CVec3;
    fn laplacian(&self, k: [f64; 3]) -> Complex64;

    /// Radius beyond which `|f|²` (times any polynomial weight the moments
    /// use) is negligible at double precision. Zero for the zero amplitude.
    fn k_extent(&self) -> f64;
}

/// The pair `(f₊, f₋)` of positive- and negative-helicity amplitudes.
#[derive(Clone)]
pub struct HelicityAmplitudePair {
    pub plus: Arc<dyn Amplitude>,
    pub minus: Arc<dyn Amplitude>,
}

impl std::fmt::Debug for HelicityAmplitudePair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HelicityAmplitudePair").finish_non_exhaustive()
    }
}

impl HelicityAmplitudePair {
    pub fn new(plus: impl Amplitude + 'static, minus: impl Amplitude + 'static) -> Self {
        Self { plus: Arc::new(plus), minus: Arc::new(minus) }
    }

    pub fn plus_only(plus: impl Amplitude + 'static) -> Self {
        Self::new(plus, Zero)
    }

    /// `f± ↦ f∓`.
    pub fn swapped(&self) -> Self {
        Self { plus: self.minus.clone(), minus: self.plus.clone() }
    }

    /// Amplitudes of the field at time `t`: both pick up `e^{-ikt}`.
    pub fn evolved(&self, t: f64) -> Self {
        Self {
            plus: Arc::new(Evolved { inner: self.plus.clone(), t }),
            minus: Arc::new(Evolved { inner: self.minus.clone(), t }),
        }
    }

    /// `f(k) ↦ f(λk)`.
    pub fn dilated(&self, lambda: f64) -> Self {
        Self {
            plus: Arc::new(Dilated { inner: self.plus.clone(), lambda }),
            minus: Arc::new(Dilated { inner: self.minus.clone(), lambda }),
        }
    }

    pub fn k_extent(&self) -> f64 {
        self.plus.k_extent().max(self.minus.k_extent())
    }
}

/// The identically zero amplitude.
#[derive(Clone, Copy, Debug, Default)]
pub struct Zero;

impl Amplitude for Zero {
    fn value(&self, _: [f64; 3]) -> Complex64 {
        ZERO
    }
    fn gradient(&self, _: [f64; 3]) -> CVec3 {
        [ZERO; 3]
    }
    fn laplacian(&self, _: [f64; 3]) -> Complex64 {
        ZERO
    }
    fn k_extent(&self) -> f64 {
        0.0
    }
}

/// `c · k^p = c · kx^p₀ ky^p₁ kz^p₂`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Monomial {
    pub coeff: Complex64,
    pub powers: [u32; 3],
}

/// `f(k) = k⊥^s · P(k) · exp(-w² k² / 2)` with `s ∈ {0, 1}` and `P` a complex
/// polynomial. Covers the saturating amplitudes, the Laguerre radial modes and
/// the randomized test families.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyGaussian {
    pub perp_factor: bool,
    pub terms: Vec<Monomial>,
    pub width: f64,
}

fn powi(x: f64, p: u32) -> f64 {
    x.powi(p as i32)
}

fn dpowi(x: f64, p: u32) -> f64 {
    if p == 0 {
        0.0
    } else {
        p as f64 * powi(x, p - 1)
    }
}

fn d2powi(x: f64, p: u32) -> f64 {
    if p < 2 {
        0.0
    } else {
        (p * (p - 1)) as f64 * powi(x, p - 2)
    }
}

impl PolyGaussian {
    /// `c · k⊥ · exp(-a² k² / 2)`: the amplitude of the saturating fields.
    pub fn saturating(coeff: Complex64, a: f64) -> Self {
        Self { perp_factor: true, terms: vec![Monomial { coeff, powers: [0, 0, 0] }], width: a }
    }

    /// `c · k⊥ · Lₙ^{3/2}(a²k²) · exp(-a² k² / 2)`: the n-th radial mode
    /// `f = k⊥ g_n(ak) / k` of the variational problem.
    pub fn radial_mode(n: usize, coeff: Complex64, a: f64) -> Self {
        let c = crate::specfun::laguerre_coefficients(n, 1.5);
        let mut terms = Vec::new();
        for (j, cj) in c.iter().enumerate() {
            // (a² k²)^j expanded multinomially
            let scale = coeff * cj * a.powi(2 * j as i32);
            for (powers, mult) in expand_k2_power(j) {
                terms.push(Monomial { coeff: scale * mult, powers });
            }
        }
        Self { perp_factor: true, terms, width: a }.simplified()
    }

    pub fn scaled(mut self, c: Complex64) -> Self {
        for t in &mut self.terms {
            t.coeff *= c;
        }
        self
    }

    fn simplified(mut self) -> Self {
        let mut merged: Vec<Monomial> = Vec::new();
        for t in self.terms {
            match merged.iter_mut().find(|m| m.powers == t.powers) {
                Some(m) => m.coeff += t.coeff,
                None => merged.push(t),
            }
        }
        merged.retain(|m| m.coeff != ZERO);
        self.terms = merged;
        self
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|t| t.powers.iter().sum::<u32>()).max().unwrap_or(0) + u32::from(self.perp_factor)
    }

    /// `(P, ∇P, ΔP)` at `k`.
    fn poly(&self, k: [f64; 3]) -> (Complex64, CVec3, Complex64) {
        let mut p = ZERO;
        let mut g = [ZERO; 3];
        let mut l = ZERO;
        for t in &self.terms {
            let [a, b, c] = t.powers;
            let (x, y, z) = (powi(k[0], a), powi(k[1], b), powi(k[2], c));
            p += t.coeff * (x * y * z);
            g[0] += t.coeff * (dpowi(k[0], a) * y * z);
            g[1] += t.coeff * (x * dpowi(k[1], b) * z);
            g[2] += t.coeff * (x * y * dpowi(k[2], c));
            l += t.coeff * (d2powi(k[0], a) * y * z + x * d2powi(k[1], b) * z + x * y * d2powi(k[2], c));
        }
        (p, g, l)
    }

    /// `(Q, ∇Q, ΔQ)` for `Q = P exp(-w²k²/2)`.
    fn gaussian_part(&self, k: [f64; 3]) -> (Complex64, CVec3, Complex64) {
        let b2 = self.width * self.width;
        let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        let e = (-0.5 * b2 * k2).exp();
        let (p, gp, lp) = self.poly(k);
        let q = p * e;
        let gq = std::array::from_fn(|i| (gp[i] - p * (b2 * k[i])) * e);
        let kdotgp = gp[0] * k[0] + gp[1] * k[1] + gp[2] * k[2];
        let lq = (lp - kdotgp * (2.0 * b2) - p * (3.0 * b2) + p * (b2 * b2 * k2)) * e;
        (q, gq, lq)
    }
}

/// Monomials of `(kx² + ky² + kz²)^j` with their multinomial coefficients.
fn expand_k2_power(j: usize) -> Vec<([u32; 3], f64)> {
    let mut out = Vec::new();
    let fact = |n: usize| (1..=n).map(|v| v as f64).product::<f64>();
    for a in 0..=j {
        for b in 0..=(j - a) {
            let c = j - a - b;
            let mult = fact(j) / (fact(a) * fact(b) * fact(c));
            out.push(([2 * a as u32, 2 * b as u32, 2 * c as u32], mult));
        }
    }
    out
}

impl Amplitude for PolyGaussian {
    fn value(&self, k: [f64; 3]) -> Complex64 {
        let (q, _, _) = self.gaussian_part(k);
        if self.perp_factor {
            q * k[0].hypot(k[1])
        } else {
            q
        }
    }

    fn gradient(&self, k: [f64; 3]) -> CVec3 {
        let (q, gq, _) = self.gaussian_part(k);
        if !self.perp_factor {
            return gq;
        }
        let rho = k[0].hypot(k[1]);
        [q * (k[0] / rho) + gq[0] * rho, q * (k[1] / rho) + gq[1] * rho, gq[2] * rho]
    }

    fn laplacian(&self, k: [f64; 3]) -> Complex64 {
        let (q, gq, lq) = self.gaussian_part(k);
        if !self.perp_factor {
            return lq;
        }
        // Δ(ρQ) = Q/ρ + 2∇ρ·∇Q + ρΔQ
        let rho = k[0].hypot(k[1]);
        q / rho + (gq[0] * k[0] + gq[1] * k[1]) * (2.0 / rho) + lq * rho
    }

    fn k_extent(&self) -> f64 {
        if self.terms.is_empty() {
            return 0.0;
        }
        // e^{-w²K²} K^{2d+6} below 1e-40 of its peak scale
        let d = self.degree() as f64 + 3.0;
        let mut kk = 1.0f64;
        for _ in 0..60 {
            kk = (92.0 + 2.0 * d * kk.max(1.0).ln()).sqrt();
        }
        kk / self.width
    }
}

/// `f(k) e^{-i|k|t}`.
#[derive(Clone)]
pub struct Evolved {
    pub inner: Arc<dyn Amplitude>,
    pub t: f64,
}

impl Amplitude for Evolved {
    fn value(&self, k: [f64; 3]) -> Complex64 {
        let kn = norm3(k);
        self.inner.value(k) * Complex64::from_polar(1.0, -kn * self.t)
    }

    fn gradient(&self, k: [f64; 3]) -> CVec3 {
        let kn = norm3(k);
        let ph = Complex64::from_polar(1.0, -kn * self.t);
        let f = self.inner.value(k);
        let g = self.inner.gradient(k);
        let it = Complex64::new(0.0, self.t);
        std::array::from_fn(|i| (g[i] - it * f * (k[i] / kn)) * ph)
    }

    fn laplacian(&self, k: [f64; 3]) -> Complex64 {
        // Δ(f e^{-ikt}) = e^{-ikt} (Δf - 2it k̂·∇f - (2it/k) f - t² f)
        let kn = norm3(k);
        let ph = Complex64::from_polar(1.0, -kn * self.t);
        let f = self.inner.value(k);
        let g = self.inner.gradient(k);
        let l = self.inner.laplacian(k);
        let it = Complex64::new(0.0, self.t);
        let radial = (g[0] * k[0] + g[1] * k[1] + g[2] * k[2]) / kn;
        (l - it * 2.0 * radial - it * f * (2.0 / kn) - f * (self.t * self.t)) * ph
    }

    fn k_extent(&self) -> f64 {
        self.inner.k_extent()
    }
}

/// `f(λk)`.
#[derive(Clone)]
pub struct Dilated {
    pub inner: Arc<dyn Amplitude>,
    pub lambda: f64,
}

impl Amplitude for Dilated {
    fn value(&self, k: [f64; 3]) -> Complex64 {
        self.inner.value(k.map(|c| c * self.lambda))
    }
    fn gradient(&self, k: [f64; 3]) -> CVec3 {
        self.inner.gradient(k.map(|c| c * self.lambda)).map(|g| g * self.lambda)
    }
    fn laplacian(&self, k: [f64; 3]) -> Complex64 {
        self.inner.laplacian(k.map(|c| c * self.lambda)) * (self.lambda * self.lambda)
    }
    fn k_extent(&self) -> f64 {
        self.inner.k_extent() / self.lambda.abs()
    }
}

fn norm3(k: [f64; 3]) -> f64 {
    (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt()
}
