//! Parameter-space grids: the bifurcation measure of a marked point as the
//! distributional Laplacian of its green field, sampled on a rectangle, and
//! a coarse-grid discrepancy for equidistribution checks.
//!
//! Cells are sampled at centers. Rows are computed in parallel but reduced
//! in a fixed order, so the output is bit-identical run to run. The
//! Laplacian uses Neumann (mirror) boundary conditions; cells where the
//! family degenerates are masked and their neighbors fall back to the
//! center value. Negative Laplacian mass (discretization noise near the
//! support) is clamped to zero and reported through `clamped_fraction`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write as _;
use std::path::Path;

use super::green::green_value;
use super::FamilySpec;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Window {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Window {
    fn is_degenerate(&self) -> bool {
        !(self.re_min < self.re_max && self.im_min < self.im_max)
            || !self.re_min.is_finite()
            || !self.re_max.is_finite()
            || !self.im_min.is_finite()
            || !self.im_max.is_finite()
    }
}

/// A discrete measure on a rectangular grid. `masses` is row-major with
/// row 0 along `im_min`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridMeasure {
    pub window: Window,
    pub nx: usize,
    pub ny: usize,
    pub masses: Vec<f64>,
    pub total_mass: f64,
    /// Fraction of the raw |Laplacian| mass on interior cells that sat on
    /// negative cells. The outermost ring is excluded from the statistic:
    /// the mirror boundary condition structurally books the compensating
    /// negative flux there (the full-grid discrete Laplacian sums to zero),
    /// which says nothing about discretization noise. Ring cells are still
    /// clamped like everything else.
    pub clamped_fraction: f64,
    /// Cells where the family could not be evaluated.
    pub masked_cells: usize,
}

impl GridMeasure {
    pub fn cell_center(&self, i: usize, j: usize) -> Complex64 {
        let dx = (self.window.re_max - self.window.re_min) / self.nx as f64;
        let dy = (self.window.im_max - self.window.im_min) / self.ny as f64;
        Complex64::new(
            self.window.re_min + (i as f64 + 0.5) * dx,
            self.window.im_min + (j as f64 + 0.5) * dy,
        )
    }

    /// 16-bit binary PGM, max-normalized; image top row is the im_max side.
    pub fn pgm_bytes(&self) -> Result<Vec<u8>> {
        let peak = self.masses.iter().cloned().fold(0.0_f64, f64::max);
        let mut buf = Vec::with_capacity(32 + 2 * self.masses.len());
        write!(&mut buf, "P5\n{} {}\n65535\n", self.nx, self.ny)?;
        for j in (0..self.ny).rev() {
            for i in 0..self.nx {
                let m = self.masses[j * self.nx + i];
                let v = if peak > 0.0 {
                    ((m / peak) * 65535.0).round().clamp(0.0, 65535.0) as u16
                } else {
                    0
                };
                buf.extend_from_slice(&v.to_be_bytes());
            }
        }
        Ok(buf)
    }

    pub fn write_pgm(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.pgm_bytes()?)?;
        Ok(())
    }

    /// CSV of cell centers and masses with an `x,y,mass` header.
    pub fn csv_string(&self) -> String {
        let mut out = String::from("x,y,mass\n");
        for j in 0..self.ny {
            for i in 0..self.nx {
                let c = self.cell_center(i, j);
                out.push_str(&format!(
                    "{},{},{}\n",
                    c.re,
                    c.im,
                    self.masses[j * self.nx + i]
                ));
            }
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.csv_string())?;
        Ok(())
    }
}

/// Bifurcation measure of a marked point on a window, discretized as the
/// clamped 5-point Laplacian of the green field times the cell area.
pub fn bifurcation_grid(
    family: &FamilySpec,
    marked: &str,
    window: Window,
    resolution: (usize, usize),
    n_iter: usize,
) -> Result<GridMeasure> {
    let (nx, ny) = resolution;
    if window.is_degenerate() {
        return Err(Error::InvalidInput("degenerate grid window".into()));
    }
    if nx < 16 || ny < 16 {
        return Err(Error::InvalidInput(format!(
            "grid resolution {nx}x{ny} is below the 16x16 minimum"
        )));
    }
    // Fail fast on bad marked names instead of masking every cell.
    family.marked_point(marked)?;

    let dx = (window.re_max - window.re_min) / nx as f64;
    let dy = (window.im_max - window.im_min) / ny as f64;

    let field: Vec<Vec<Option<f64>>> = (0..ny)
        .into_par_iter()
        .map(|j| {
            let im = window.im_min + (j as f64 + 0.5) * dy;
            (0..nx)
                .map(|i| {
                    let re = window.re_min + (i as f64 + 0.5) * dx;
                    green_value(family, marked, Complex64::new(re, im), n_iter)
                        .ok()
                        .map(|g| g.value)
                })
                .collect()
        })
        .collect();

    let at = |i: isize, j: isize| -> Option<f64> {
        // Neumann mirror: clamp indices at the window edge.
        let i = i.clamp(0, nx as isize - 1) as usize;
        let j = j.clamp(0, ny as isize - 1) as usize;
        field[j][i]
    };

    let mut masses = vec![0.0; nx * ny];
    let mut masked_cells = 0usize;
    let mut sum_pos = 0.0;
    let mut sum_neg = 0.0;
    for j in 0..ny {
        for i in 0..nx {
            let Some(center) = field[j][i] else {
                masked_cells += 1;
                continue;
            };
            let (i, j) = (i as isize, j as isize);
            let n = |di: isize, dj: isize| at(i + di, j + dj).unwrap_or(center);
            let lap = (n(-1, 0) + n(1, 0) - 2.0 * center) / (dx * dx)
                + (n(0, -1) + n(0, 1) - 2.0 * center) / (dy * dy);
            let m = lap * dx * dy;
            let interior = i > 0 && i < nx as isize - 1 && j > 0 && j < ny as isize - 1;
            if m >= 0.0 {
                masses[j as usize * nx + i as usize] = m;
                if interior {
                    sum_pos += m;
                }
            } else if interior {
                sum_neg += -m;
            }
        }
    }
    let total_abs = sum_pos + sum_neg;
    Ok(GridMeasure {
        window,
        nx,
        ny,
        total_mass: masses.iter().sum(),
        clamped_fraction: if total_abs > 0.0 {
            sum_neg / total_abs
        } else {
            0.0
        },
        masked_cells,
        masses,
    })
}

/// Sup-norm discrepancy between the empirical distribution of `points`
/// and `mu`, both coarsened to a `coarse` x `coarse` block grid over mu's
/// window. Points outside the window are clamped into the edge blocks.
pub fn equidistribution_discrepancy(
    points: &[Complex64],
    mu: &GridMeasure,
    coarse: usize,
) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::InvalidInput("no sample points".into()));
    }
    if coarse == 0 {
        return Err(Error::InvalidInput("coarse grid must be nonempty".into()));
    }
    if !(mu.total_mass > 0.0) {
        return Err(Error::InvalidInput(
            "reference measure has no mass".into(),
        ));
    }
    let w = &mu.window;
    let block = |re: f64, im: f64| -> (usize, usize) {
        let bx = ((re - w.re_min) / (w.re_max - w.re_min) * coarse as f64).floor();
        let by = ((im - w.im_min) / (w.im_max - w.im_min) * coarse as f64).floor();
        (
            (bx as isize).clamp(0, coarse as isize - 1) as usize,
            (by as isize).clamp(0, coarse as isize - 1) as usize,
        )
    };

    let mut mu_frac = vec![0.0; coarse * coarse];
    for j in 0..mu.ny {
        for i in 0..mu.nx {
            let m = mu.masses[j * mu.nx + i];
            if m > 0.0 {
                let c = mu.cell_center(i, j);
                let (bx, by) = block(c.re, c.im);
                mu_frac[by * coarse + bx] += m / mu.total_mass;
            }
        }
    }
    let mut emp = vec![0.0; coarse * coarse];
    let weight = 1.0 / points.len() as f64;
    for p in points {
        let (bx, by) = block(p.re, p.im);
        emp[by * coarse + bx] += weight;
    }
    Ok(mu_frac
        .iter()
        .zip(&emp)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}
