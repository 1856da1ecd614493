//! Closed-form minimal-uncertainty fields.
//!
//! Every saturating field is built from the scalar generator
//!
//! ```text
//! ℱ₊(r,t) = [W(p) - W(q)] / (2ar),   W(ξ) = D(ξ) + i(√π/2) e^{-ξ²}
//! p = (t + r)/(√2a) = l₊,  q = (t - r)/(√2a) = -l₋
//! ℱ₋ = conj(ℱ₊)
//! ```
//!
//! which expands to `(1/2ar)[D(l₊) + D(l₋) + i(√π/2)(e^{-l₊²} - e^{-l₋²})]`,
//! through the second-order operator
//!
//! ```text
//! M = (∂x∂z + i∂y∂t,  ∂y∂z - i∂x∂t,  -∂x² - ∂y²)
//! F = M (C₊ ℱ₊ + C₋* ℱ₋)
//! ```
//!
//! The corresponding helicity amplitudes are
//! `f± = √(π/2) C± k⊥ e^{-a²k²/2}`.
//!
//! For a radial `Φ(r,t)` the operator reduces to three radial functions,
//! `A = Φ_rr/r² - Φ_r/r³`, `B = Φ_r/r` and `R = Φ_rt/r`:
//!
//! ```text
//! MΦ = (xz A + i y R,  yz A - i x R,  -(2B + ρ² A)),   ρ² = x² + y²
//! ```
//!
//! The closed forms divide by up to `r⁵`, so inside `r < 0.2a` everything is
//! evaluated from Taylor series in `r` instead.

use crate::kspace::{HelicityAmplitudePair, PolyGaussian};
use crate::specfun::{dawson_unchecked, SQRT_PI};
use crate::{CVec3, Complex64, Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

/// Radius, in units of `a`, below which series replace the closed forms.
pub const SERIES_RADIUS: f64 = 0.2;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const SERIES_TERMS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Helicity {
    Plus,
    Minus,
}

impl Helicity {
    pub fn sign(self) -> f64 {
        match self {
            Helicity::Plus => 1.0,
            Helicity::Minus => -1.0,
        }
    }
}

/// Scale `a`, helicity coefficients and evaluation time of a saturating
/// field. `a = √(Δr/Δk)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SaturatingFieldSpec {
    pub a: f64,
    pub c_plus: Complex64,
    pub c_minus: Complex64,
    pub t: f64,
}

impl SaturatingFieldSpec {
    pub fn new(a: f64, c_plus: Complex64, c_minus: Complex64, t: f64) -> Result<Self> {
        let spec = Self { a, c_plus, c_minus, t };
        spec.validate()?;
        Ok(spec)
    }

    /// Coefficients reproducing `C e^{-r²/2a²} (y, -x, 0)` at `t = 0`:
    /// `C₊ = -C a⁵/√π`, `C₋ = C* a⁵/√π`.
    ///
    /// With real `C` this is an electric-type field, with imaginary `C` a
    /// magnetic-type one. The map from `C` is not claimed to be the unique
    /// choice of `(C₊, C₋)` with this property.
    pub fn simplest(c: Complex64, a: f64) -> Result<Self> {
        check_scale(a)?;
        let s = a.powi(5) / SQRT_PI;
        Self::new(a, -c * s, c.conj() * s, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        check_scale(self.a)?;
        if !self.t.is_finite() {
            return Err(Error::Domain(format!("time {} is not finite", self.t)));
        }
        let finite = |c: Complex64| c.re.is_finite() && c.im.is_finite();
        if !finite(self.c_plus) || !finite(self.c_minus) {
            return Err(Error::Domain("helicity coefficients must be finite".into()));
        }
        if self.c_plus == Complex64::new(0.0, 0.0) && self.c_minus == Complex64::new(0.0, 0.0) {
            return Err(Error::DegenerateNorm);
        }
        Ok(())
    }

    pub fn at_time(self, t: f64) -> Self {
        Self { t, ..self }
    }

    /// `f± = √(π/2) C± k⊥ e^{-a²k²/2}`, the amplitudes at `t = 0`.
    pub fn amplitudes(&self) -> HelicityAmplitudePair {
        let s = (std::f64::consts::PI / 2.0).sqrt();
        HelicityAmplitudePair::new(
            PolyGaussian::saturating(self.c_plus * s, self.a),
            PolyGaussian::saturating(self.c_minus * s, self.a),
        )
    }
}

impl Default for SaturatingFieldSpec {
    fn default() -> Self {
        Self { a: 1.0, c_plus: Complex64::new(1.0, 0.0), c_minus: Complex64::new(0.0, 0.0), t: 0.0 }
    }
}

fn check_scale(a: f64) -> Result<()> {
    if a > 0.0 && a.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("scale a = {a} must be positive and finite")))
    }
}

fn check_point(r: [f64; 3], t: f64) -> Result<()> {
    if r.iter().all(|x| x.is_finite()) && t.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain("position and time must be finite".into()))
    }
}

/// `l± = (r ± t)/(√2a)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LightConeVars {
    pub l_plus: f64,
    pub l_minus: f64,
}

impl LightConeVars {
    pub fn new(r: f64, t: f64, a: f64) -> Self {
        let s = SQRT_2 * a;
        Self { l_plus: (r + t) / s, l_minus: (r - t) / s }
    }
}

/// `C e^{-r²/2a²} (y, -x, 0)`.
pub fn simplest_field(r: [f64; 3], c: Complex64, a: f64) -> CVec3 {
    let [x, y, z] = r;
    let g = c * (-(x * x + y * y + z * z) / (2.0 * a * a)).exp();
    [g * y, -g * x, Complex64::new(0.0, 0.0)]
}

/// Unitary Fourier transform of [`simplest_field`]:
/// `-i C a⁵ e^{-a²k²/2} (ky, -kx, 0)`.
pub fn simplest_field_kspace(k: [f64; 3], c: Complex64, a: f64) -> CVec3 {
    let [kx, ky, kz] = k;
    let g = -I * c * a.powi(5) * (-(a * a) * (kx * kx + ky * ky + kz * kz) / 2.0).exp();
    [g * ky, -g * kx, Complex64::new(0.0, 0.0)]
}

fn w_fn(xi: f64) -> Complex64 {
    Complex64::new(dawson_unchecked(xi), 0.5 * SQRT_PI * (-xi * xi).exp())
}

/// `W, W', W''` at `ξ`, from `W' = 1 - 2ξW`.
fn w_with_derivatives(xi: f64) -> [Complex64; 3] {
    let w0 = w_fn(xi);
    let w1 = 1.0 - 2.0 * xi * w0;
    let w2 = -2.0 * w0 - 2.0 * xi * w1;
    [w0, w1, w2]
}

/// `W⁽ⁿ⁾(τ)` for `n = 0..=order` from `W⁽ⁿ⁺¹⁾ = -2τW⁽ⁿ⁾ - 2nW⁽ⁿ⁻¹⁾`.
fn w_derivatives(tau: f64, order: usize) -> Vec<Complex64> {
    let mut d = Vec::with_capacity(order + 1);
    d.push(w_fn(tau));
    d.push(1.0 - 2.0 * tau * d[0]);
    for n in 1..order {
        let next = -2.0 * tau * d[n] - 2.0 * n as f64 * d[n - 1];
        d.push(next);
    }
    d
}

/// Radial pieces of the generator: `ℱ₊`, `A`, `B`, `R`.
#[derive(Clone, Copy, Debug)]
struct RadialParts {
    phi: Complex64,
    a: Complex64,
    b: Complex64,
    rt: Complex64,
}

impl RadialParts {
    fn conj(self) -> Self {
        Self { phi: self.phi.conj(), a: self.a.conj(), b: self.b.conj(), rt: self.rt.conj() }
    }

    /// `MΦ`, or with `flip` the operator with negated time-derivative rows.
    fn apply(&self, r: [f64; 3], flip: bool) -> CVec3 {
        let [x, y, z] = r;
        let rt = if flip { -self.rt } else { self.rt };
        [x * z * self.a + I * y * rt, y * z * self.a - I * x * rt, -(2.0 * self.b + (x * x + y * y) * self.a)]
    }
}

fn radial_parts(r: f64, t: f64, a: f64) -> RadialParts {
    let s = SQRT_2 * a;
    if r < SERIES_RADIUS * a {
        radial_parts_series(r, t, a)
    } else {
        let p = (t + r) / s;
        let q = (t - r) / s;
        let [wp, wp1, wp2] = w_with_derivatives(p);
        let [wq, wq1, wq2] = w_with_derivatives(q);
        let g = wp - wq;
        let g_r = (wp1 + wq1) / s;
        let g_rr = (wp2 - wq2) / (s * s);
        let g_t = (wp1 - wq1) / s;
        let g_rt = (wp2 + wq2) / (s * s);
        let (r2, r3) = (r * r, r * r * r);
        let h = 1.0 / (2.0 * a);
        RadialParts {
            phi: g * h / r,
            a: (g_rr / r3 - 3.0 * g_r / (r2 * r2) + 3.0 * g / (r3 * r2)) * h,
            b: (g_r / r2 - g / r3) * h,
            rt: (g_rt / r2 - g_t / r3) * h,
        }
    }
}

/// `ℱ₊ = Σ c_m r^{2m}`, `c_m = W⁽²ᵐ⁺¹⁾(τ) / (a s^{2m+1} (2m+1)!)`, `τ = t/s`,
/// accumulated in powers of `(r/s)²`.
fn radial_parts_series(r: f64, t: f64, a: f64) -> RadialParts {
    let s = SQRT_2 * a;
    let rho2 = (r / s) * (r / s);
    let d = w_derivatives(t / s, 2 * SERIES_TERMS + 2);
    let zero = Complex64::new(0.0, 0.0);
    let (mut phi, mut big_a, mut b, mut rt) = (zero, zero, zero, zero);
    let mut powers = [1.0; SERIES_TERMS + 1];
    for j in 1..=SERIES_TERMS {
        powers[j] = powers[j - 1] * rho2;
    }
    let mut fact = 1.0;
    for m in 0..=SERIES_TERMS {
        if m > 0 {
            fact *= ((2 * m) * (2 * m + 1)) as f64;
        }
        let mf = m as f64;
        phi += d[2 * m + 1] * (powers[m] / fact);
        if m >= 1 {
            let w = 2.0 * mf * powers[m - 1] / fact;
            b += d[2 * m + 1] * w;
            rt += d[2 * m + 2] * w;
        }
        if m >= 2 {
            big_a += d[2 * m + 1] * (2.0 * mf * (2.0 * mf - 2.0) * powers[m - 2] / fact);
        }
    }
    let s2 = s * s;
    RadialParts { phi: phi / (a * s), a: big_a / (a * s * s2 * s2), b: b / (a * s * s2), rt: rt / (a * s2 * s2) }
}

/// Scalar generator `ℱ±(r, t)`, finite at `r = 0` where `ℱ±(0,0) = 1/(√2a²)`.
pub fn scalar_generator(r: f64, t: f64, a: f64, helicity: Helicity) -> Result<Complex64> {
    check_scale(a)?;
    if !(r >= 0.0) || !r.is_finite() || !t.is_finite() {
        return Err(Error::Domain(format!("scalar generator needs finite r ≥ 0 and t, got r = {r}, t = {t}")));
    }
    let phi = radial_parts(r, t, a).phi;
    Ok(match helicity {
        Helicity::Plus => phi,
        Helicity::Minus => phi.conj(),
    })
}

fn norm3(r: [f64; 3]) -> f64 {
    (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt()
}

/// The RS vector `M(C₊ℱ₊ + C₋*ℱ₋)` at position `r` and time `spec.t`.
pub fn saturating_rs_field(r: [f64; 3], spec: &SaturatingFieldSpec) -> Result<CVec3> {
    spec.validate()?;
    check_point(r, spec.t)?;
    let parts = radial_parts(norm3(r), spec.t, spec.a);
    let plus = parts.apply(r, false);
    let minus = parts.conj().apply(r, false);
    let cm = spec.c_minus.conj();
    Ok(std::array::from_fn(|i| spec.c_plus * plus[i] + cm * minus[i]))
}

/// Photon wave functions `(F₊, F₋)` of positive and negative helicity: `M`
/// and the time-row-flipped operator applied to `ℱ₊`.
pub fn photon_wavefunctions(r: [f64; 3], t: f64, a: f64) -> Result<(CVec3, CVec3)> {
    check_scale(a)?;
    check_point(r, t)?;
    let parts = radial_parts(norm3(r), t, a);
    Ok((parts.apply(r, false), parts.apply(r, true)))
}

/// The t = 0 photon wave function components written out in elementary
/// functions, with `D = D(r/√2a)` and `E = e^{-r²/2a²}`:
///
/// ```text
/// a⁵r⁵ Fx = xz[(3a⁴ + 2a²r² + r⁴)D - (√2/2)ar(3a² + r²)] ∓ (√π/2) y r⁵ E
/// a⁵r⁵ Fy = yz[(3a⁴ + 2a²r² + r⁴)D - (√2/2)ar(3a² + r²)] ± (√π/2) x r⁵ E
/// a⁵r⁵ Fz = [2a²z²(a² + r²) - (a⁴ + r⁴)ρ²]D + (√2/2)ar[ρ²(a² + r²) - 2a²z²]
/// ```
///
/// Upper signs for positive helicity. Evaluated independently of the
/// generator route, with its own series near the origin.
pub fn explicit_components(r: [f64; 3], a: f64, helicity: Helicity) -> Result<CVec3> {
    check_scale(a)?;
    check_point(r, 0.0)?;
    let [x, y, z] = r;
    let rn = norm3(r);
    let rho2 = x * x + y * y;
    let e = helicity.sign() * 0.5 * SQRT_PI * (-rn * rn / (2.0 * a * a)).exp() / a.powi(5);
    let (k, fz) = if rn < SERIES_RADIUS * a {
        let u = rn / a;
        let (k, s1, s2) = explicit_series(u);
        let a4 = a.powi(4);
        (k / (a4 * a * a), (s1 + (rho2 / (a * a)) * s2) / a4)
    } else {
        let d = dawson_unchecked(rn / (SQRT_2 * a));
        let (a2, r2) = (a * a, rn * rn);
        let h = FRAC_1_SQRT_2 * a * rn;
        let den = a.powi(5) * r2 * r2 * rn;
        let k = ((3.0 * a2 * a2 + 2.0 * a2 * r2 + r2 * r2) * d - h * (3.0 * a2 + r2)) / den;
        let fz = ((2.0 * a2 * z * z * (a2 + r2) - (a2 * a2 + r2 * r2) * rho2) * d
            + h * (rho2 * (a2 + r2) - 2.0 * a2 * z * z))
            / den;
        (k, fz)
    };
    Ok([Complex64::new(x * z * k - y * e, 0.0), Complex64::new(y * z * k + x * e, 0.0), Complex64::new(fz, 0.0)])
}

/// Series of the explicit components in `u = r/a` for `a = 1`:
/// `K` multiplying `xz`, and `S₁`, `S₂` with `Fz = S₁ + ρ² S₂`.
fn explicit_series(u: f64) -> (f64, f64, f64) {
    const N: usize = 2 * SERIES_TERMS + 8;
    // D(u/√2) = Σ (-1)ⁿ u^{2n+1} / (√2 (2n+1)!!)
    let mut dser = [0.0; N];
    let mut df = 1.0;
    for n in 0..(N - 1) / 2 {
        if n > 0 {
            df *= (2 * n + 1) as f64;
        }
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        dser[2 * n + 1] = sign * FRAC_1_SQRT_2 / df;
    }
    let times = |poly: &[(usize, f64)]| {
        let mut out = [0.0; N];
        for &(p, c) in poly {
            for j in 0..N - p {
                out[j + p] += c * dser[j];
            }
        }
        out
    };
    let plus = |mut v: [f64; N], poly: &[(usize, f64)]| {
        for &(p, c) in poly {
            v[p] += c;
        }
        v
    };
    let h = FRAC_1_SQRT_2;
    let k = plus(times(&[(0, 3.0), (2, 2.0), (4, 1.0)]), &[(1, -3.0 * h), (3, -h)]);
    let n1 = plus(times(&[(0, 2.0), (2, 2.0)]), &[(1, -2.0 * h)]);
    let n2 = plus(times(&[(0, -1.0), (4, -1.0)]), &[(1, h), (3, h)]);
    let eval = |c: &[f64; N], shift: usize| {
        let mut acc = 0.0;
        for j in (shift..N).rev() {
            acc = acc * u + c[j];
        }
        acc
    };
    let diff: [f64; N] = std::array::from_fn(|j| n2[j] - n1[j]);
    (eval(&k, 5), eval(&n1, 3), eval(&diff, 5))
}

/// The t = 0 field of a general spec from the explicit components:
/// `C₊F₊ + C₋*F₋`.
pub fn explicit_field(r: [f64; 3], spec: &SaturatingFieldSpec) -> Result<CVec3> {
    spec.validate()?;
    let fp = explicit_components(r, spec.a, Helicity::Plus)?;
    let fm = explicit_components(r, spec.a, Helicity::Minus)?;
    let cm = spec.c_minus.conj();
    Ok(std::array::from_fn(|i| spec.c_plus * fp[i] + cm * fm[i]))
}

fn check_unit(n: [f64; 3]) -> Result<()> {
    let len = norm3(n);
    if (len - 1.0).abs() <= 1e-12 {
        Ok(())
    } else {
        Err(Error::Domain(format!("axis {n:?} is not a unit vector (length {len})")))
    }
}

fn cross(n: [f64; 3], f: &CVec3) -> CVec3 {
    [n[1] * f[2] - n[2] * f[1], n[2] * f[0] - n[0] * f[2], n[0] * f[1] - n[1] * f[0]]
}

fn dot(n: [f64; 3], f: &CVec3) -> Complex64 {
    n[0] * f[0] + n[1] * f[1] + n[2] * f[2]
}

/// Rotation by `phi` about the unit axis `n`:
/// `F cos φ + n×F sin φ + n(n·F)(1 - cos φ)`.
pub fn rotate(f: CVec3, n: [f64; 3], phi: f64) -> Result<CVec3> {
    check_unit(n)?;
    let (s, c) = phi.sin_cos();
    let nxf = cross(n, &f);
    let nf = dot(n, &f);
    Ok(std::array::from_fn(|i| f[i] * c + nxf[i] * s + n[i] * nf * (1.0 - c)))
}

/// Boost with rapidity `psi` along `n`, a rotation by the imaginary angle
/// `∓iψ`: `F cosh ψ ∓ i n×F sinh ψ + n(n·F)(1 - cosh ψ)`, upper sign for
/// positive helicity.
pub fn boost(f: CVec3, helicity: Helicity, n: [f64; 3], psi: f64) -> Result<CVec3> {
    check_unit(n)?;
    let (ch, sh) = (psi.cosh(), psi.sinh());
    let nxf = cross(n, &f);
    let nf = dot(n, &f);
    let k = -helicity.sign() * I * sh;
    Ok(std::array::from_fn(|i| f[i] * ch + k * nxf[i] + n[i] * nf * (1.0 - ch)))
}
