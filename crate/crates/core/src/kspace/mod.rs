//! Wavevector-space core: the helicity polarization frame `e(k)`, helicity
//! amplitudes, sampled fields and the Fourier bridge between representations.
//!
//! The RS field is
//!
//! ```text
//! F(r,t) = (2π)^{-3/2} ∫ d³k e(k) [f₊(k) e^{ik·r - ikt} + f₋*(k) e^{-ik·r + ikt}]
//! F̃(k,t) = e(k) f₊(k) e^{-ikt} + e*(k) f₋*(-k) e^{ikt}
//! ```
//!
//! with `F(r,t) = (2π)^{-3/2} ∫ d³k F̃(k,t) e^{ik·r}`.

pub mod amplitude;
pub mod format;
pub mod fourier;
pub mod grid;

pub use amplitude::{Amplitude, Dilated, Evolved, HelicityAmplitudePair, Monomial, PolyGaussian, Zero};
pub use format::{read_rsf, read_rsf_from, write_rsf, write_rsf_to, Header};
pub use fourier::{fourier_to_kspace, fourier_to_position, transform_to};
pub use grid::{Axis, FieldGrid, Grid, Space};

use crate::quadrature::SphericalRule;
use crate::{CVec3, Complex64, Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Nodes with `k⊥ ≤ AXIS_TOLERANCE · k` count as lying on the kz-axis.
pub const AXIS_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WaveVector {
    pub kx: f64,
    pub ky: f64,
    pub kz: f64,
}

impl WaveVector {
    pub fn new(kx: f64, ky: f64, kz: f64) -> Self {
        Self { kx, ky, kz }
    }

    pub fn magnitude(&self) -> f64 {
        (self.kx * self.kx + self.ky * self.ky + self.kz * self.kz).sqrt()
    }

    pub fn perp(&self) -> f64 {
        self.kx.hypot(self.ky)
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.kx, self.ky, self.kz]
    }
}

impl From<[f64; 3]> for WaveVector {
    fn from(k: [f64; 3]) -> Self {
        Self::new(k[0], k[1], k[2])
    }
}

impl std::ops::Neg for WaveVector {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.kx, -self.ky, -self.kz)
    }
}

/// Positive-helicity polarization vector `e(k)`: unit norm, transverse to
/// `k`, with `i k × e = |k| e` and `e(-k) = e*(k)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolarizationVector(pub CVec3);

impl PolarizationVector {
    pub fn conj(&self) -> Self {
        Self(self.0.map(|c| c.conj()))
    }
}

/// ```text
/// e(k) = [-kx kz + i ky k,  -ky kz - i kx k,  kx² + ky²] / √(2 k² k⊥²)
/// ```
///
/// Undefined on the kz-axis.
pub fn polarization(k: WaveVector) -> Result<PolarizationVector> {
    let kn = k.magnitude();
    let kp = k.perp();
    if !(kp > AXIS_TOLERANCE * kn) || !kn.is_finite() {
        return Err(Error::OnAxis { k_perp: kp, k: kn });
    }
    let s = 1.0 / (std::f64::consts::SQRT_2 * kn * kp);
    Ok(PolarizationVector([
        Complex64::new(-k.kx * k.kz * s, k.ky * kn * s),
        Complex64::new(-k.ky * k.kz * s, -k.kx * kn * s),
        Complex64::new(kp * kp * s, 0.0),
    ]))
}

/// `F̃(k, t)` from the helicity amplitudes at one wavevector.
pub fn field_at(amps: &HelicityAmplitudePair, k: WaveVector, t: f64) -> Result<CVec3> {
    let e = polarization(k)?;
    let kn = k.magnitude();
    let plus = amps.plus.value(k.as_array()) * Complex64::from_polar(1.0, -kn * t);
    let minus = amps.minus.value((-k).as_array()).conj() * Complex64::from_polar(1.0, kn * t);
    Ok(std::array::from_fn(|i| e.0[i] * plus + e.0[i].conj() * minus))
}

/// Samples `F̃(k, t)` on a wavevector grid. No node may sit on the kz-axis;
/// grids built with [`Grid::cubic`] or [`Grid::dual`] and an even count never
/// do.
pub fn synthesize_kspace(amps: &HelicityAmplitudePair, grid: &Grid, t: f64) -> Result<FieldGrid> {
    if !t.is_finite() {
        return Err(Error::Domain(format!("time {t} is not finite")));
    }
    FieldGrid::try_from_fn(Space::Wavevector, *grid, |k| field_at(amps, k.into(), t))
}

/// `N = ∫ d³k (|f₊|² + |f₋|²)` by spherical product quadrature.
pub fn amplitude_norm(amps: &HelicityAmplitudePair, rule: &SphericalRule) -> Result<f64> {
    let kmax = amps.k_extent();
    if kmax <= 0.0 {
        return Err(Error::DegenerateNorm);
    }
    let nodes = rule.nodes(kmax);
    let n = crate::sum::sum(
        nodes
            .par_iter()
            .map(|node| node.weight * (amps.plus.value(node.k).norm_sqr() + amps.minus.value(node.k).norm_sqr()))
            .collect::<Vec<_>>(),
    );
    if n > 0.0 && n.is_finite() {
        Ok(n)
    } else {
        Err(Error::DegenerateNorm)
    }
}

/// `∫ d³k F̃*·F̃` of the synthesized vector field at `t = 0`, by the same
/// quadrature. Equal to [`amplitude_norm`] because `e*·e = 1` and `e·e = 0`.
pub fn synthesized_norm(amps: &HelicityAmplitudePair, rule: &SphericalRule) -> Result<f64> {
    let kmax = amps.k_extent();
    if kmax <= 0.0 {
        return Err(Error::DegenerateNorm);
    }
    let nodes = rule.nodes(kmax);
    let terms = nodes
        .par_iter()
        .map(|node| {
            let v = field_at(amps, node.k.into(), 0.0)?;
            Ok(node.weight * v.iter().map(|c| c.norm_sqr()).sum::<f64>())
        })
        .collect::<Result<Vec<_>>>()?;
    let n = crate::sum::sum(terms);
    if n > 0.0 {
        Ok(n)
    } else {
        Err(Error::DegenerateNorm)
    }
}

/// Amplitudes sampled on a symmetric wavevector grid.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledAmplitudes {
    pub grid: Grid,
    pub plus: Vec<Complex64>,
    pub minus: Vec<Complex64>,
}

impl SampledAmplitudes {
    pub fn sample(amps: &HelicityAmplitudePair, grid: &Grid) -> Result<Self> {
        if !grid.is_symmetric() {
            return Err(Error::Shape("sampled amplitudes need a grid symmetric about k = 0".into()));
        }
        let (plus, minus) = (0..grid.len())
            .into_par_iter()
            .map(|i| {
                let k = grid.coords(i);
                (amps.plus.value(k), amps.minus.value(k))
            })
            .unzip();
        Ok(Self { grid: *grid, plus, minus })
    }

    /// `F̃(k, 0)`; `f₋(-k)` is read from the mirrored node.
    pub fn synthesize(&self) -> Result<FieldGrid> {
        let g = self.grid;
        FieldGrid::try_from_fn(Space::Wavevector, g, |k| {
            let e = polarization(k.into())?;
            // coords → flat index through the mirror of the mirror
            let idx = flat_of(&g, k);
            let p = self.plus[idx];
            let m = self.minus[g.mirror_index(idx)].conj();
            Ok(std::array::from_fn(|i| e.0[i] * p + e.0[i].conj() * m))
        })
    }

    pub fn norm(&self) -> Result<f64> {
        let s = crate::sum::sum(self.plus.iter().zip(&self.minus).map(|(p, m)| p.norm_sqr() + m.norm_sqr()))
            * self.grid.cell_volume();
        if s > 0.0 {
            Ok(s)
        } else {
            Err(Error::DegenerateNorm)
        }
    }
}

fn flat_of(g: &Grid, k: [f64; 3]) -> usize {
    let idx = |a: usize| ((k[a] - g.axes[a].origin) / g.axes[a].spacing).round() as usize;
    g.flat_index(idx(0), idx(1), idx(2))
}

/// `i k × v`, the curl in wavevector space.
pub fn spectral_curl(k: [f64; 3], v: &CVec3) -> CVec3 {
    let i = Complex64::new(0.0, 1.0);
    [i * (v[2] * k[1] - v[1] * k[2]), i * (v[0] * k[2] - v[2] * k[0]), i * (v[1] * k[0] - v[0] * k[1])]
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn polarization_on_coordinate_axes() {
        let s = FRAC_1_SQRT_2;
        let ex = polarization(WaveVector::new(1.0, 0.0, 0.0)).unwrap().0;
        let want = [Complex64::new(0.0, 0.0), Complex64::new(0.0, -s), Complex64::new(s, 0.0)];
        for i in 0..3 {
            assert!(close(ex[i], want[i], 1e-15));
        }
        let ey = polarization(WaveVector::new(0.0, 1.0, 0.0)).unwrap().0;
        let want = [Complex64::new(0.0, s), Complex64::new(0.0, 0.0), Complex64::new(s, 0.0)];
        for i in 0..3 {
            assert!(close(ey[i], want[i], 1e-15));
        }
        let emx = polarization(WaveVector::new(-1.0, 0.0, 0.0)).unwrap();
        let conj = polarization(WaveVector::new(1.0, 0.0, 0.0)).unwrap().conj();
        assert_eq!(emx, conj);
    }

    #[test]
    fn polarization_is_singular_on_kz_axis() {
        assert!(matches!(polarization(WaveVector::new(0.0, 0.0, 2.0)), Err(Error::OnAxis { .. })));
        assert!(matches!(polarization(WaveVector::new(1e-14, 0.0, 2.0)), Err(Error::OnAxis { .. })));
        assert!(matches!(polarization(WaveVector::new(0.0, 0.0, 0.0)), Err(Error::OnAxis { .. })));
        assert!(polarization(WaveVector::new(1e-10, 0.0, 2.0)).is_ok());
    }

    #[test]
    fn positive_helicity_only_at_t0_is_e_times_f() {
        let amps = HelicityAmplitudePair::plus_only(PolyGaussian::saturating(Complex64::new(1.0, 0.5), 1.0));
        let k = WaveVector::new(0.3, -0.8, 0.4);
        let v = field_at(&amps, k, 0.0).unwrap();
        let e = polarization(k).unwrap().0;
        let f = amps.plus.value(k.as_array());
        for i in 0..3 {
            assert!(close(v[i], e[i] * f, 1e-15));
        }
    }

    #[test]
    fn sampled_synthesis_matches_closure_synthesis() {
        let amps = HelicityAmplitudePair::new(
            PolyGaussian::saturating(Complex64::new(1.0, 0.2), 1.0),
            PolyGaussian::radial_mode(1, Complex64::new(0.3, -0.4), 1.2),
        );
        let grid = Grid::cubic(8, 10.0).unwrap().dual();
        let direct = synthesize_kspace(&amps, &grid, 0.0).unwrap();
        let sampled = SampledAmplitudes::sample(&amps, &grid).unwrap().synthesize().unwrap();
        for (a, b) in direct.values().iter().zip(sampled.values()) {
            for i in 0..3 {
                assert!(close(a[i], b[i], 1e-15));
            }
        }
    }

    #[test]
    fn zero_amplitudes_have_degenerate_norm() {
        let amps = HelicityAmplitudePair::new(Zero, Zero);
        assert!(matches!(amplitude_norm(&amps, &SphericalRule::default()), Err(Error::DegenerateNorm)));
        let amps = HelicityAmplitudePair::plus_only(PolyGaussian::saturating(Complex64::new(0.0, 0.0), 1.0));
        assert!(matches!(amplitude_norm(&amps, &SphericalRule::default()), Err(Error::DegenerateNorm)));
    }

    #[test]
    fn doubling_amplitude_quadruples_norm() {
        let rule = SphericalRule::default();
        let one = HelicityAmplitudePair::plus_only(PolyGaussian::saturating(Complex64::new(1.0, 0.0), 1.0));
        let two = HelicityAmplitudePair::plus_only(PolyGaussian::saturating(Complex64::new(2.0, 0.0), 1.0));
        let n1 = amplitude_norm(&one, &rule).unwrap();
        let n2 = amplitude_norm(&two, &rule).unwrap();
        assert!((n2 / n1 - 4.0).abs() < 1e-13);
        assert!((n1 - std::f64::consts::PI.powf(1.5)).abs() < 1e-12);
    }
}
