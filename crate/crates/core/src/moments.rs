//! Second moments of the energy density and the uncertainty product.
//!
//! ```text
//! Δr² = ∫ d³r r² F*·F / ∫ d³r F*·F
//! Δk² = ∫ d³k k² F̃*·F̃ / ∫ d³k F̃*·F̃
//! ```
//!
//! Both are taken about the coordinate origin with no centroid subtraction,
//! so translating a field changes `Δr²`.
//!
//! In terms of the helicity amplitudes, with `N = ∫ d³k (|f₊|² + |f₋|²)`,
//! `w = kz/(k k⊥²)` and `∂φ = kx∂ky - ky∂kx`:
//!
//! ```text
//! N Δr² = ⟨f₊| 1/k⊥² + 2iw∂φ - Δ |f₊⟩ + ⟨f₋| 1/k⊥² - 2iw∂φ - Δ |f₋⟩
//! N Δk² = ∫ d³k k² (|f₊|² + |f₋|²)
//! ```
//!
//! Two evaluation paths exist. The analytic path integrates closures with a
//! spherical product rule; the grid path takes Riemann sums over sampled
//! fields.

use crate::analytic_fields::{saturating_rs_field, SaturatingFieldSpec};
use crate::kspace::fourier::transform_scalar;
use crate::kspace::{
    fourier_to_kspace, fourier_to_position, synthesized_norm, FieldGrid, HelicityAmplitudePair, SampledAmplitudes,
    Space,
};
use crate::quadrature::{GaussLegendre, SphericalRule};
use crate::sum::sum;
use crate::{Complex64, Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// `ΔrΔk ≥ 5/2` for the electromagnetic field.
pub const EM_BOUND: f64 = 2.5;

/// Boundary density, relative to the peak, above which a grid moment is
/// flagged as truncated.
pub const TRUNCATION_THRESHOLD: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VarianceReport {
    pub delta_r2: f64,
    pub delta_k2: f64,
    pub product: f64,
    pub bound: f64,
    pub saturation_ratio: f64,
    pub norm_r: f64,
    pub norm_k: f64,
    #[serde(default)]
    pub warnings: Vec<String>,
}

impl VarianceReport {
    pub fn new(delta_r2: f64, delta_k2: f64, norm_r: f64, norm_k: f64, bound: f64) -> Self {
        let product = (delta_r2 * delta_k2).sqrt();
        Self {
            delta_r2,
            delta_k2,
            product,
            bound,
            saturation_ratio: product / bound,
            norm_r,
            norm_k,
            warnings: Vec::new(),
        }
    }

    /// `|norm_r - norm_k| / norm_r`.
    pub fn plancherel_defect(&self) -> f64 {
        (self.norm_r - self.norm_k).abs() / self.norm_r
    }

    pub fn satisfies_bound(&self, tolerance: f64) -> bool {
        self.product >= self.bound - tolerance
    }

    pub fn is_truncated(&self) -> bool {
        !self.warnings.is_empty()
    }
}

/// Modulus of helicity of a massless particle.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct HelicityValue(f64);

impl HelicityValue {
    pub fn new(h: f64) -> Result<Self> {
        if h >= 0.0 && h.is_finite() {
            Ok(Self(h))
        } else {
            Err(Error::Domain(format!("helicity modulus {h} must be finite and non-negative")))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// `1 + √(1/4 + 2h)`, the bound on `ΔrΔk` for a massless particle of
/// helicity modulus `h`.
pub fn massless_bound(h: f64) -> Result<f64> {
    let h = HelicityValue::new(h)?;
    Ok(1.0 + (0.25 + 2.0 * h.get()).sqrt())
}

fn density_sums(field: &FieldGrid, weight: impl Fn([f64; 3]) -> f64 + Sync) -> (f64, f64) {
    let grid = field.grid;
    let parts: Vec<(f64, f64)> = field
        .values()
        .par_iter()
        .enumerate()
        .map(|(i, v)| {
            let rho: f64 = v.iter().map(|c| c.norm_sqr()).sum();
            (rho, rho * weight(grid.coords(i)))
        })
        .collect();
    (sum(parts.iter().map(|p| p.0)), sum(parts.iter().map(|p| p.1)))
}

fn second_moment(field: &FieldGrid, space: Space) -> Result<f64> {
    if field.space != space {
        return Err(Error::Shape(format!("expected a {space:?} field, got {:?}", field.space)));
    }
    let (n, m) = density_sums(field, |r| r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
    if n > 0.0 && n.is_finite() {
        Ok(m / n)
    } else {
        Err(Error::DegenerateNorm)
    }
}

/// `Δr²` of a position-space field by Riemann sum.
pub fn variance_position(field: &FieldGrid) -> Result<f64> {
    second_moment(field, Space::Position)
}

/// `Δk²` of a wavevector-space field by Riemann sum.
pub fn variance_kspace(field: &FieldGrid) -> Result<f64> {
    second_moment(field, Space::Wavevector)
}

fn truncation_warning(field: &FieldGrid) -> Option<String> {
    let ratio = field.boundary_ratio();
    (ratio > TRUNCATION_THRESHOLD).then(|| {
        let space = match field.space {
            Space::Position => "position",
            Space::Wavevector => "wavevector",
        };
        format!(
            "{space}-space density at the grid boundary is {ratio:.3e} of its peak \
             (threshold {TRUNCATION_THRESHOLD:e}); enlarge the grid"
        )
    })
}

/// Grid-path report. The field may be given in either space; it is
/// transformed to the other.
pub fn uncertainty_product_grid(field: &FieldGrid) -> Result<VarianceReport> {
    let (pos, wav) = match field.space {
        Space::Position => (field.clone(), fourier_to_kspace(field)?),
        Space::Wavevector => (fourier_to_position(field)?, field.clone()),
    };
    let mut report =
        VarianceReport::new(variance_position(&pos)?, variance_kspace(&wav)?, pos.norm()?, wav.norm()?, EM_BOUND);
    report.warnings.extend(truncation_warning(&pos));
    report.warnings.extend(truncation_warning(&wav));
    Ok(report)
}

/// Weighted integrals of the amplitudes over wavevector space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AmplitudeMoments {
    /// `N`
    pub norm: f64,
    /// `N Δk²`
    pub k2: f64,
    /// `N Δr²`
    pub r2: f64,
    /// Imaginary part left in `N Δr²`; zero up to quadrature error.
    pub r2_imag: f64,
}

/// Fraction of `|f|²` allowed within `1e-7` rad of the kz-axis.
const AXIS_WEIGHT_LIMIT: f64 = 1e-8;

fn check_axis_support(amps: &HelicityAmplitudePair, kmax: f64, peak: f64) -> Result<()> {
    let theta: f64 = 1e-7;
    for frac in [0.02, 0.05, 0.1, 0.2, 0.4] {
        let k = frac * kmax;
        for j in 0..4 {
            let phi = 0.3 + j as f64 * std::f64::consts::FRAC_PI_2;
            for cz in [1.0, -1.0] {
                let kv = [k * theta.sin() * phi.cos(), k * theta.sin() * phi.sin(), cz * k * theta.cos()];
                let w = amps.plus.value(kv).norm_sqr().max(amps.minus.value(kv).norm_sqr());
                if w > AXIS_WEIGHT_LIMIT * peak {
                    return Err(Error::SingularIntegrand);
                }
            }
        }
    }
    Ok(())
}

/// `N`, `NΔk²` and `NΔr²` of closure amplitudes by spherical quadrature.
pub fn amplitude_moments(amps: &HelicityAmplitudePair, rule: &SphericalRule) -> Result<AmplitudeMoments> {
    let kmax = amps.k_extent();
    if !(kmax > 0.0) {
        return Err(Error::DegenerateNorm);
    }
    let nodes = rule.nodes(kmax);
    let terms: Vec<[f64; 5]> = nodes
        .par_iter()
        .map(|node| {
            let k = node.k;
            let [kx, ky, kz] = k;
            let kp2 = kx * kx + ky * ky;
            let kn = (kp2 + kz * kz).sqrt();
            let w = kz / (kn * kp2);
            let mut rho = 0.0;
            let mut r2 = Complex64::new(0.0, 0.0);
            for (amp, sign) in [(&amps.plus, 1.0), (&amps.minus, -1.0)] {
                let f = amp.value(k);
                let g = amp.gradient(k);
                let dphi = kx * g[1] - ky * g[0];
                let lap = amp.laplacian(k);
                let op = f / kp2 + Complex64::new(0.0, 2.0 * sign * w) * dphi - lap;
                rho += f.norm_sqr();
                r2 += f.conj() * op;
            }
            let wt = node.weight;
            [wt * rho, wt * rho * kn * kn, wt * r2.re, wt * r2.im, rho]
        })
        .collect();
    let norm = sum(terms.iter().map(|t| t[0]));
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::DegenerateNorm);
    }
    let peak = terms.iter().map(|t| t[4]).fold(0.0, f64::max);
    check_axis_support(amps, kmax, peak)?;
    Ok(AmplitudeMoments {
        norm,
        k2: sum(terms.iter().map(|t| t[1])),
        r2: sum(terms.iter().map(|t| t[2])),
        r2_imag: sum(terms.iter().map(|t| t[3])),
    })
}

/// `Δr²` from the amplitudes through the derivative form.
pub fn variance_position_from_amplitudes(amps: &HelicityAmplitudePair, rule: &SphericalRule) -> Result<f64> {
    let m = amplitude_moments(amps, rule)?;
    Ok(m.r2 / m.norm)
}

/// `Δk²` from the amplitudes.
pub fn variance_kspace_from_amplitudes(amps: &HelicityAmplitudePair, rule: &SphericalRule) -> Result<f64> {
    let m = amplitude_moments(amps, rule)?;
    Ok(m.k2 / m.norm)
}

/// Analytic-path report. `norm_r` is the norm of the synthesized vector field
/// `∫ F̃*·F̃`, `norm_k` the amplitude norm `N`.
pub fn uncertainty_product_amplitudes(amps: &HelicityAmplitudePair, rule: &SphericalRule) -> Result<VarianceReport> {
    let m = amplitude_moments(amps, rule)?;
    let norm_r = synthesized_norm(amps, rule)?;
    Ok(VarianceReport::new(m.r2 / m.norm, m.k2 / m.norm, norm_r, m.norm, EM_BOUND))
}

/// Norm and second moment `(∫|F|², ∫r²|F|²)` of a closed-form saturating field
/// by position-space quadrature: Gauss–Legendre on `[0, 8a]` and on the
/// mapped tail `r = 8a/u`, `u ∈ (0, 1]`.
pub fn closed_form_position_moments(spec: &SaturatingFieldSpec, rule: &SphericalRule) -> Result<(f64, f64)> {
    spec.validate()?;
    let cut = 8.0 * spec.a;
    let dirs = rule.directions();
    let inner = GaussLegendre::new(rule.radial);
    let outer = GaussLegendre::new(rule.radial / 2 + 1);
    let mut radial: Vec<(f64, f64)> = inner.on(0.0, cut).map(|(r, w)| (r, w * r * r)).collect();
    radial.extend(outer.on(0.0, 1.0).map(|(u, w)| {
        let r = cut / u;
        (r, w * r * r * cut / (u * u))
    }));
    let shells = radial
        .par_iter()
        .map(|&(r, wr)| {
            let mut n = 0.0;
            for d in &dirs {
                let f = saturating_rs_field(d.k.map(|c| c * r), spec)?;
                n += d.weight * f.iter().map(|c| c.norm_sqr()).sum::<f64>();
            }
            Ok((wr * n, wr * n * r * r))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((sum(shells.iter().map(|s| s.0)), sum(shells.iter().map(|s| s.1))))
}

/// Analytic-path report for a closed-form saturating field. `norm_r` comes
/// from position-space quadrature of the closed form.
pub fn uncertainty_product_saturating(spec: &SaturatingFieldSpec, rule: &SphericalRule) -> Result<VarianceReport> {
    let m = amplitude_moments(&spec.amplitudes(), rule)?;
    let (norm_r, _) = closed_form_position_moments(&spec.at_time(0.0), rule)?;
    Ok(VarianceReport::new(m.r2 / m.norm, m.k2 / m.norm, norm_r, m.norm, EM_BOUND))
}

/// `Δr²` from amplitudes sampled on a symmetric wavevector grid, with
/// derivatives taken spectrally (multiplication by `-i r` on the conjugate
/// position grid).
pub fn variance_position_sampled(samples: &SampledAmplitudes) -> Result<f64> {
    let kgrid = samples.grid;
    let rgrid = kgrid.dual();
    let n = samples.norm()?;
    let mut total = 0.0;
    for (values, sign) in [(&samples.plus, 1.0), (&samples.minus, -1.0)] {
        let mut pos = values.clone();
        transform_scalar(&mut pos, &kgrid, &rgrid, false)?;
        let derivative = |mult: &dyn Fn([f64; 3]) -> Complex64| -> Result<Vec<Complex64>> {
            let mut d: Vec<Complex64> = pos.iter().enumerate().map(|(i, v)| v * mult(rgrid.coords(i))).collect();
            transform_scalar(&mut d, &rgrid, &kgrid, true)?;
            Ok(d)
        };
        let gx = derivative(&|r| Complex64::new(0.0, -r[0]))?;
        let gy = derivative(&|r| Complex64::new(0.0, -r[1]))?;
        let gz = derivative(&|r| Complex64::new(0.0, -r[2]))?;
        let part = sum((0..kgrid.len()).map(|i| {
            let [kx, ky, kz] = kgrid.coords(i);
            let kp2 = kx * kx + ky * ky;
            let w = kz / ((kp2 + kz * kz).sqrt() * kp2);
            let f = values[i];
            let dphi = kx * gy[i] - ky * gx[i];
            let op = f / kp2 + Complex64::new(0.0, 2.0 * sign * w) * dphi;
            (f.conj() * op).re + gx[i].norm_sqr() + gy[i].norm_sqr() + gz[i].norm_sqr()
        }));
        total += part * kgrid.cell_volume();
    }
    Ok(total / n)
}
