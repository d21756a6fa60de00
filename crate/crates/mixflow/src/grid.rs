//! Uniform cell-centered grids (1D/2D) and pressure fields.

use crate::bounds::degree_condition;
use crate::error::{Error, Result};
use std::io::Write;

/// Uniform grid with cell-centered unknowns.
///
/// Construction is gated by the degree condition `β₂ ≤ 4/(n+2)`: the energy
/// estimates the diagnostics rely on are only valid under it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    dimension: usize,
    extents: [f64; 2],
    cells: [usize; 2],
    spacing: [f64; 2],
}

impl Grid {
    pub fn new_1d(extent: f64, cells: usize, beta2: f64) -> Result<Self> {
        Self::new(1, [extent, 1.0], [cells, 1], beta2)
    }

    pub fn new_2d(extents: [f64; 2], cells: [usize; 2], beta2: f64) -> Result<Self> {
        Self::new(2, extents, cells, beta2)
    }

    fn new(dimension: usize, extents: [f64; 2], cells: [usize; 2], beta2: f64) -> Result<Self> {
        if dimension != 1 && dimension != 2 {
            return Err(Error::Domain(format!("grid dimension must be 1 or 2, got {dimension}")));
        }
        for d in 0..dimension {
            if !(extents[d] > 0.0) {
                return Err(Error::Domain(format!("extent along axis {d} must be positive")));
            }
            if cells[d] < 4 {
                return Err(Error::Domain(format!(
                    "at least 4 cells per axis required, got {} on axis {d}",
                    cells[d]
                )));
            }
        }
        if !degree_condition(beta2, dimension) {
            return Err(Error::Domain(format!(
                "degree condition violated: beta2 = {beta2} > 4/(n+2) for n = {dimension}"
            )));
        }
        let spacing = [
            extents[0] / cells[0] as f64,
            if dimension == 2 { extents[1] / cells[1] as f64 } else { 1.0 },
        ];
        Ok(Self { dimension, extents, cells, spacing })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }
    pub fn extents(&self) -> [f64; 2] {
        self.extents
    }
    pub fn cells(&self) -> [usize; 2] {
        self.cells
    }
    pub fn spacing(&self) -> [f64; 2] {
        self.spacing
    }
    pub fn nx(&self) -> usize {
        self.cells[0]
    }
    pub fn ny(&self) -> usize {
        if self.dimension == 2 {
            self.cells[1]
        } else {
            1
        }
    }
    pub fn n_cells(&self) -> usize {
        self.nx() * self.ny()
    }
    pub fn cell_volume(&self) -> f64 {
        if self.dimension == 2 {
            self.spacing[0] * self.spacing[1]
        } else {
            self.spacing[0]
        }
    }
    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * self.nx() + i
    }
    pub fn cell_center(&self, i: usize, j: usize) -> [f64; 2] {
        [
            (i as f64 + 0.5) * self.spacing[0],
            if self.dimension == 2 { (j as f64 + 0.5) * self.spacing[1] } else { 0.0 },
        ]
    }
}

/// Cell-centered pressure values at one time stamp.
#[derive(Debug, Clone, PartialEq)]
pub struct PressureField {
    grid: Grid,
    values: Vec<f64>,
    time: f64,
}

impl PressureField {
    pub fn new(grid: Grid, values: Vec<f64>, time: f64) -> Result<Self> {
        if values.len() != grid.n_cells() {
            return Err(Error::Shape(format!(
                "field has {} values but the grid has {} cells",
                values.len(),
                grid.n_cells()
            )));
        }
        if !(time >= 0.0) {
            return Err(Error::Domain(format!("time stamp must be nonnegative, got {time}")));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("field values must be finite".into()));
        }
        Ok(Self { grid, values, time })
    }

    pub fn from_fn(grid: Grid, time: f64, f: impl Fn([f64; 2]) -> f64) -> Result<Self> {
        let mut values = Vec::with_capacity(grid.n_cells());
        for j in 0..grid.ny() {
            for i in 0..grid.nx() {
                values.push(f(grid.cell_center(i, j)));
            }
        }
        Self::new(grid, values, time)
    }

    pub fn constant(grid: Grid, value: f64, time: f64) -> Result<Self> {
        Self::new(grid, vec![value; grid.n_cells()], time)
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }
    pub fn time(&self) -> f64 {
        self.time
    }

    pub(crate) fn replace(&self, values: Vec<f64>, time: f64) -> Result<Self> {
        Self::new(self.grid, values, time)
    }

    /// Plain-text snapshot: header lines, then one value per cell, row-major.
    pub fn write_snapshot(&self, w: &mut impl Write) -> Result<()> {
        writeln!(w, "dimension {}", self.grid.dimension())?;
        writeln!(w, "extents {:.16e} {:.16e}", self.grid.extents()[0], self.grid.extents()[1])?;
        writeln!(w, "cells {} {}", self.grid.nx(), self.grid.ny())?;
        writeln!(w, "spacing {:.16e} {:.16e}", self.grid.spacing()[0], self.grid.spacing()[1])?;
        writeln!(w, "time {:.16e}", self.time)?;
        for v in &self.values {
            writeln!(w, "{v:.16e}")?;
        }
        Ok(())
    }
}
