//! Product grids for the flat model: a lattice in the s directions times a
//! polar (R, theta) grid that stays off the cone axis.
//!
//! Radial and s axes are uniform; angles are the full circle sampled at
//! theta_j = 2 pi j / angles, so trapezoid sums in theta are exact on
//! trigonometric polynomials of degree below half the angle count.

use std::f64::consts::PI;

use crate::error::ConeError;
use crate::geometry::Point;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Axis {
    pub start: f64,
    pub step: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(start: f64, step: f64, count: usize) -> Self {
        Axis { start, step, count }
    }

    pub fn value(&self, i: usize) -> f64 {
        self.start + self.step * i as f64
    }

    pub fn last(&self) -> f64 {
        self.value(self.count - 1)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PolarProductGrid {
    pub s_axes: Vec<Axis>,
    pub radial: Axis,
    pub angles: usize,
}

impl PolarProductGrid {
    pub fn new(s_axes: Vec<Axis>, radial: Axis, angles: usize) -> Result<Self, ConeError> {
        if s_axes.is_empty() || angles < 4 {
            return Err(ConeError::BadGrid(format!(
                "need at least one s axis and four angles, got {} and {}",
                s_axes.len(),
                angles
            )));
        }
        for ax in s_axes.iter().chain(std::iter::once(&radial)) {
            if ax.count < 2 || !ax.step.is_finite() || ax.step <= 0.0 {
                return Err(ConeError::BadGrid(format!(
                    "axis with start {} step {} count {} is malformed",
                    ax.start, ax.step, ax.count
                )));
            }
        }
        if radial.start <= 0.0 {
            return Err(ConeError::AxisTouched(radial.start));
        }
        Ok(PolarProductGrid {
            s_axes,
            radial,
            angles,
        })
    }

    pub fn theta(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.angles as f64
    }

    pub fn theta_step(&self) -> f64 {
        2.0 * PI / self.angles as f64
    }

    /// Number of (s, R) columns, each carrying a full angle circle.
    pub fn columns(&self) -> usize {
        self.s_axes.iter().map(|a| a.count).product::<usize>() * self.radial.count
    }

    pub fn len(&self) -> usize {
        self.columns() * self.angles
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Flattened index of (s multi-index, radial index, angle index); the
    /// angle runs fastest, then the radius, then the s axes row major.
    pub fn index(&self, s_idx: &[usize], ri: usize, ti: usize) -> usize {
        let mut flat = 0;
        for (ax, &i) in self.s_axes.iter().zip(s_idx) {
            debug_assert!(i < ax.count);
            flat = flat * ax.count + i;
        }
        (flat * self.radial.count + ri) * self.angles + ti
    }

    pub fn point(&self, s_idx: &[usize], ri: usize, ti: usize) -> Point {
        let s = self
            .s_axes
            .iter()
            .zip(s_idx)
            .map(|(ax, &i)| ax.value(i))
            .collect();
        Point::new(s, self.radial.value(ri), self.theta(ti))
    }

    /// Iterate all s multi-indices in row major order.
    pub fn s_indices(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for ax in &self.s_axes {
            let mut next = Vec::with_capacity(out.len() * ax.count);
            for prefix in &out {
                for i in 0..ax.count {
                    let mut v = prefix.clone();
                    v.push(i);
                    next.push(v);
                }
            }
            out = next;
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GridField {
    pub values: Vec<f64>,
}

impl GridField {
    pub fn zeros(grid: &PolarProductGrid) -> Self {
        GridField {
            values: vec![0.0; grid.len()],
        }
    }

    pub fn from_fn(grid: &PolarProductGrid, f: impl Fn(&Point) -> f64) -> Self {
        let mut values = vec![0.0; grid.len()];
        for s_idx in grid.s_indices() {
            for ri in 0..grid.radial.count {
                for ti in 0..grid.angles {
                    values[grid.index(&s_idx, ri, ti)] = f(&grid.point(&s_idx, ri, ti));
                }
            }
        }
        GridField { values }
    }
}
