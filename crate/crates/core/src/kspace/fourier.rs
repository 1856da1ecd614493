//! Unitary continuous-Fourier bridge between position and wavevector grids.
//!
//! Convention (symmetric, both directions):
//!
//! ```text
//! F̃(k) = (2π)^{-3/2} ∫ d³r F(r) e^{-ik·r}
//! F(r)  = (2π)^{-3/2} ∫ d³k F̃(k) e^{+ik·r}
//! ```
//!
//! Each axis is a DFT with phase factors for the (generally non-integer)
//! grid origins, scaled by `Δ/√(2π)`. On a Fourier pair the discrete map is
//! exactly unitary with respect to the cell-volume inner products.

use super::grid::{FieldGrid, Grid, Space};
use crate::{Complex64, Error, Result};
use rayon::prelude::*;
use rustfft::{Fft, FftDirection, FftPlanner};
use std::f64::consts::PI;
use std::sync::Arc;

/// Position → wavevector onto the symmetric dual grid.
pub fn fourier_to_kspace(field: &FieldGrid) -> Result<FieldGrid> {
    if field.space != Space::Position {
        return Err(Error::Shape("fourier_to_kspace expects a position-space field".into()));
    }
    transform_to(field, &field.grid.dual())
}

/// Wavevector → position onto the symmetric dual grid.
pub fn fourier_to_position(field: &FieldGrid) -> Result<FieldGrid> {
    if field.space != Space::Wavevector {
        return Err(Error::Shape("fourier_to_position expects a wavevector-space field".into()));
    }
    transform_to(field, &field.grid.dual())
}

/// Transforms `field` onto an explicit target grid, which must be a Fourier
/// pair of the source grid. The direction follows the field's space tag.
pub fn transform_to(field: &FieldGrid, target: &Grid) -> Result<FieldGrid> {
    let (direction, space) = match field.space {
        Space::Position => (FftDirection::Forward, Space::Wavevector),
        Space::Wavevector => (FftDirection::Inverse, Space::Position),
    };
    let n = field.grid.len();
    let mut comps: [Vec<Complex64>; 3] =
        std::array::from_fn(|c| field.values().iter().map(|v| v[c]).collect::<Vec<_>>());
    let plan = AxisPlans::new(&field.grid, target, direction)?;
    for comp in comps.iter_mut() {
        plan.apply(comp);
    }
    let values = (0..n).map(|i| [comps[0][i], comps[1][i], comps[2][i]]).collect();
    FieldGrid::new(space, *target, values)
}

/// Scalar version of [`transform_to`], used for spectral differentiation of
/// sampled amplitudes. `forward` selects `e^{-ik·r}`.
pub fn transform_scalar(data: &mut [Complex64], src: &Grid, dst: &Grid, forward: bool) -> Result<()> {
    if data.len() != src.len() {
        return Err(Error::Shape(format!("{} samples for a grid of {} nodes", data.len(), src.len())));
    }
    let direction = if forward { FftDirection::Forward } else { FftDirection::Inverse };
    AxisPlans::new(src, dst, direction)?.apply(data);
    Ok(())
}

struct AxisPlan {
    fft: Arc<dyn Fft<f64>>,
    pre: Vec<Complex64>,
    post: Vec<Complex64>,
}

struct AxisPlans {
    counts: [usize; 3],
    axes: [AxisPlan; 3],
}

impl AxisPlans {
    fn new(src: &Grid, dst: &Grid, direction: FftDirection) -> Result<Self> {
        if !src.is_fourier_pair(dst) {
            return Err(Error::Shape(
                "source and target grids are not a Fourier pair (need equal counts and Δk·Δr·n = 2π)".into(),
            ));
        }
        let sign = match direction {
            FftDirection::Forward => -1.0,
            FftDirection::Inverse => 1.0,
        };
        let mut planner = FftPlanner::new();
        let axes = std::array::from_fn(|a| {
            let s = src.axes[a];
            let d = dst.axes[a];
            let n = s.n;
            let nf = n as f64;
            let s_src = s.origin / s.spacing;
            let s_dst = d.origin / d.spacing;
            let phase = |frac: f64| {
                let t = frac.rem_euclid(1.0);
                Complex64::from_polar(1.0, sign * 2.0 * PI * t)
            };
            // exp(σ2πi (m+s_dst)(j+s_src)/n) split into pre(j), DFT, post(m)
            let pre = (0..n).map(|j| phase(s_dst * j as f64 / nf)).collect();
            let scale = s.spacing / (2.0 * PI).sqrt();
            let post = (0..n).map(|m| phase((m as f64 * s_src + s_src * s_dst) / nf) * scale).collect();
            AxisPlan { fft: planner.plan_fft(n, direction), pre, post }
        });
        Ok(Self { counts: src.counts(), axes })
    }

    fn apply(&self, data: &mut [Complex64]) {
        for axis in 0..3 {
            self.apply_axis(data, axis);
        }
    }

    fn apply_axis(&self, data: &mut [Complex64], axis: usize) {
        let [nx, ny, nz] = self.counts;
        let plan = &self.axes[axis];
        let n = self.counts[axis];
        let (stride, starts): (usize, Vec<usize>) = match axis {
            0 => (1, (0..ny * nz).map(|l| l * nx).collect()),
            1 => (nx, (0..nz).flat_map(|k| (0..nx).map(move |i| i + k * nx * ny)).collect()),
            _ => (nx * ny, (0..nx * ny).collect()),
        };
        let shared: &[Complex64] = data;
        let lines: Vec<Vec<Complex64>> = starts
            .par_iter()
            .map(|&s| {
                let mut buf: Vec<Complex64> = (0..n).map(|j| shared[s + j * stride] * plan.pre[j]).collect();
                plan.fft.process(&mut buf);
                for (b, p) in buf.iter_mut().zip(&plan.post) {
                    *b *= p;
                }
                buf
            })
            .collect();
        for (&s, line) in starts.iter().zip(&lines) {
            for (j, v) in line.iter().enumerate() {
                data[s + j * stride] = *v;
            }
        }
    }
}
