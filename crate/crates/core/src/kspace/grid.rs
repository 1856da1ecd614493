use crate::{CVec3, Complex64, Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// One axis of a uniform grid: `coord(i) = origin + i * spacing`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub n: usize,
    pub spacing: f64,
    pub origin: f64,
}

impl Axis {
    /// Axis centred on zero with a half-sample offset when `n` is even, so
    /// that `coord(i) = -coord(n-1-i)`.
    pub fn symmetric(n: usize, spacing: f64) -> Self {
        Self { n, spacing, origin: -0.5 * (n as f64 - 1.0) * spacing }
    }

    pub fn coord(&self, i: usize) -> f64 {
        self.origin + i as f64 * self.spacing
    }

    /// The Fourier-conjugate axis, `Δk = 2π / (n Δr)`, symmetric about zero.
    pub fn dual(&self) -> Self {
        Self::symmetric(self.n, 2.0 * PI / (self.n as f64 * self.spacing))
    }

    pub fn is_symmetric(&self) -> bool {
        let want = -0.5 * (self.n as f64 - 1.0) * self.spacing;
        (self.origin - want).abs() <= 1e-12 * self.spacing.max(want.abs())
    }

    fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Shape(format!("axis needs at least 2 points, got {}", self.n)));
        }
        if !(self.spacing.is_finite() && self.spacing > 0.0) || !self.origin.is_finite() {
            return Err(Error::Shape(format!(
                "axis spacing must be positive and finite (spacing {}, origin {})",
                self.spacing, self.origin
            )));
        }
        Ok(())
    }
}

/// Uniform Cartesian grid, x-index fastest.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub axes: [Axis; 3],
}

impl Grid {
    pub fn new(axes: [Axis; 3]) -> Result<Self> {
        for a in &axes {
            a.validate()?;
        }
        Ok(Self { axes })
    }

    /// Cubic grid of `n³` nodes spanning `extent` per axis, symmetric about 0.
    pub fn cubic(n: usize, extent: f64) -> Result<Self> {
        let axis = Axis::symmetric(n, extent / n as f64);
        Self::new([axis; 3])
    }

    pub fn counts(&self) -> [usize; 3] {
        [self.axes[0].n, self.axes[1].n, self.axes[2].n]
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.n).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cell_volume(&self) -> f64 {
        self.axes.iter().map(|a| a.spacing).product()
    }

    pub fn flat_index(&self, i: usize, j: usize, k: usize) -> usize {
        i + self.axes[0].n * (j + self.axes[1].n * k)
    }

    pub fn coords(&self, flat: usize) -> [f64; 3] {
        let [nx, ny, _] = self.counts();
        let i = flat % nx;
        let j = (flat / nx) % ny;
        let k = flat / (nx * ny);
        [self.axes[0].coord(i), self.axes[1].coord(j), self.axes[2].coord(k)]
    }

    /// Flat index of the node at `-coords(flat)`; only meaningful on
    /// symmetric grids.
    pub fn mirror_index(&self, flat: usize) -> usize {
        let [nx, ny, nz] = self.counts();
        let i = flat % nx;
        let j = (flat / nx) % ny;
        let k = flat / (nx * ny);
        self.flat_index(nx - 1 - i, ny - 1 - j, nz - 1 - k)
    }

    pub fn dual(&self) -> Self {
        Self { axes: [self.axes[0].dual(), self.axes[1].dual(), self.axes[2].dual()] }
    }

    pub fn is_symmetric(&self) -> bool {
        self.axes.iter().all(Axis::is_symmetric)
    }

    /// Whether `other` has matching counts and `Δk Δr n = 2π` on every axis.
    pub fn is_fourier_pair(&self, other: &Grid) -> bool {
        self.axes.iter().zip(&other.axes).all(|(a, b)| {
            a.n == b.n && {
                let p = a.spacing * b.spacing * a.n as f64;
                (p - 2.0 * PI).abs() <= 1e-12 * 2.0 * PI
            }
        })
    }
}

/// Which representation a [`FieldGrid`] holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Position,
    Wavevector,
}

/// A complex 3-vector field sampled on a [`Grid`].
#[derive(Clone, Debug, PartialEq)]
pub struct FieldGrid {
    pub space: Space,
    pub grid: Grid,
    values: Vec<CVec3>,
}

impl FieldGrid {
    pub fn new(space: Space, grid: Grid, values: Vec<CVec3>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Shape(format!("{} values for a grid of {} nodes", values.len(), grid.len())));
        }
        Ok(Self { space, grid, values })
    }

    /// Samples `f` at every node, in parallel.
    pub fn from_fn<F>(space: Space, grid: Grid, f: F) -> Self
    where
        F: Fn([f64; 3]) -> CVec3 + Sync,
    {
        let values = (0..grid.len()).into_par_iter().map(|i| f(grid.coords(i))).collect();
        Self { space, grid, values }
    }

    /// Fallible variant of [`FieldGrid::from_fn`].
    pub fn try_from_fn<F>(space: Space, grid: Grid, f: F) -> Result<Self>
    where
        F: Fn([f64; 3]) -> Result<CVec3> + Sync,
    {
        let values = (0..grid.len()).into_par_iter().map(|i| f(grid.coords(i))).collect::<Result<Vec<_>>>()?;
        Ok(Self { space, grid, values })
    }

    pub fn zeros(space: Space, grid: Grid) -> Self {
        Self { space, grid, values: vec![[Complex64::new(0.0, 0.0); 3]; grid.len()] }
    }

    pub fn values(&self) -> &[CVec3] {
        &self.values
    }

    pub fn into_values(self) -> Vec<CVec3> {
        self.values
    }

    /// `F*·F` at every node.
    pub fn density(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.iter().map(|v| v.iter().map(|c| c.norm_sqr()).sum::<f64>())
    }

    /// `∫ F*·F` as a Riemann sum with cell-volume weights.
    pub fn raw_norm(&self) -> f64 {
        let partial: Vec<f64> = self
            .values
            .par_chunks(4096)
            .map(|chunk| crate::sum::sum(chunk.iter().map(|v| v.iter().map(|c| c.norm_sqr()).sum::<f64>())))
            .collect();
        crate::sum::sum(partial) * self.grid.cell_volume()
    }

    /// Like [`FieldGrid::raw_norm`] but a zero field is an error.
    pub fn norm(&self) -> Result<f64> {
        let n = self.raw_norm();
        if n > 0.0 && n.is_finite() {
            Ok(n)
        } else {
            Err(Error::DegenerateNorm)
        }
    }

    /// Largest density on the outer faces of the grid divided by the largest
    /// density anywhere. Zero for a zero field.
    pub fn boundary_ratio(&self) -> f64 {
        let [nx, ny, nz] = self.grid.counts();
        let dens: Vec<f64> = self.density().collect();
        let peak = dens.iter().cloned().fold(0.0, f64::max);
        if peak == 0.0 {
            return 0.0;
        }
        let mut edge = 0.0f64;
        for (flat, d) in dens.iter().enumerate() {
            let i = flat % nx;
            let j = (flat / nx) % ny;
            let k = flat / (nx * ny);
            if i == 0 || j == 0 || k == 0 || i == nx - 1 || j == ny - 1 || k == nz - 1 {
                edge = edge.max(*d);
            }
        }
        edge / peak
    }
}
