//! Finite-difference Laplacian of the degenerate flat model.
//!
//! Upstairs coordinates are (s, R, theta) and the metric is
//! R^2 (dR^2 + R^2 dtheta^2) + |ds|^2, so the volume density is R^3 and the
//! operator in divergence form reads
//! (1/R^3) d_R (R d_R f) + (1/R^4) d^2_theta f + sum_i d^2_{s_i} f.
//! The split form evaluates the same operator as (1/R^2) Delta_z + Delta_s
//! with Delta_z the ordinary polar Laplacian in the z plane.  Both routes use
//! centered second-order stencils; they agree to O(h^2) on smooth fields and
//! exactly on radial quadratics.

use crate::error::ConeError;
use crate::grid::{GridField, PolarProductGrid};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LaplacianForm {
    Divergence,
    Split,
}

/// Apply the flat-model Laplacian to a sampled field.
///
/// Output entries on the first and last slice of every non-periodic axis are
/// left at zero; only interior values are meaningful.  The angle direction is
/// periodic and needs no boundary layer.
pub fn degenerate_laplacian_apply(
    grid: &PolarProductGrid,
    field: &GridField,
    form: LaplacianForm,
) -> Result<GridField, ConeError> {
    if field.values.len() != grid.len() {
        return Err(ConeError::BadGrid(format!(
            "field has {} samples but the grid has {} points",
            field.values.len(),
            grid.len()
        )));
    }
    if grid.radial.start <= 0.0 {
        return Err(ConeError::AxisTouched(grid.radial.start));
    }

    let mut out = GridField::zeros(grid);
    let dr = grid.radial.step;
    let dtheta = grid.theta_step();
    let nr = grid.radial.count;
    let nt = grid.angles;
    let s_indices = grid.s_indices();

    for s_idx in &s_indices {
        let interior_s = s_idx
            .iter()
            .zip(&grid.s_axes)
            .all(|(&i, ax)| i > 0 && i + 1 < ax.count);
        if !interior_s {
            continue;
        }
        for ri in 1..nr.saturating_sub(1) {
            let radius = grid.radial.value(ri);
            for ti in 0..nt {
                let here = field.values[grid.index(s_idx, ri, ti)];
                let up = field.values[grid.index(s_idx, ri + 1, ti)];
                let down = field.values[grid.index(s_idx, ri - 1, ti)];
                let left = field.values[grid.index(s_idx, ri, (ti + nt - 1) % nt)];
                let right = field.values[grid.index(s_idx, ri, (ti + 1) % nt)];

                let radial_term = match form {
                    LaplacianForm::Divergence => {
                        let hi = radius + 0.5 * dr;
                        let lo = radius - 0.5 * dr;
                        (hi * (up - here) - lo * (here - down)) / (dr * dr * radius.powi(3))
                    }
                    LaplacianForm::Split => {
                        let f_rr = (up - 2.0 * here + down) / (dr * dr);
                        let f_r = (up - down) / (2.0 * dr);
                        (f_rr + f_r / radius) / (radius * radius)
                    }
                };
                let angular_term =
                    (left - 2.0 * here + right) / (dtheta * dtheta * radius.powi(4));

                let mut flat_term = 0.0;
                for (axis_no, ax) in grid.s_axes.iter().enumerate() {
                    let mut plus = s_idx.clone();
                    plus[axis_no] += 1;
                    let mut minus = s_idx.clone();
                    minus[axis_no] -= 1;
                    let fp = field.values[grid.index(&plus, ri, ti)];
                    let fm = field.values[grid.index(&minus, ri, ti)];
                    flat_term += (fp - 2.0 * here + fm) / (ax.step * ax.step);
                }

                out.values[grid.index(s_idx, ri, ti)] = radial_term + angular_term + flat_term;
            }
        }
    }
    Ok(out)
}

/// Gradient pairing sum_x <grad f, grad g> dvol over interior cells, used by
/// the weak-form checks.  Derivatives are centered differences and the cell
/// measure is R^3 dR dtheta ds.
pub fn dirichlet_pairing(
    grid: &PolarProductGrid,
    f: &GridField,
    g: &GridField,
) -> Result<f64, ConeError> {
    if f.values.len() != grid.len() || g.values.len() != grid.len() {
        return Err(ConeError::BadGrid(
            "pairing fields must match the grid".to_string(),
        ));
    }
    let dr = grid.radial.step;
    let dtheta = grid.theta_step();
    let nr = grid.radial.count;
    let nt = grid.angles;
    let s_step: f64 = grid.s_axes.iter().map(|a| a.step).product();
    let mut total = 0.0;

    for s_idx in grid.s_indices() {
        let interior_s = s_idx
            .iter()
            .zip(&grid.s_axes)
            .all(|(&i, ax)| i > 0 && i + 1 < ax.count);
        if !interior_s {
            continue;
        }
        for ri in 1..nr.saturating_sub(1) {
            let radius = grid.radial.value(ri);
            let weight = radius.powi(3) * dr * dtheta * s_step;
            for ti in 0..nt {
                let df_r = (f.values[grid.index(&s_idx, ri + 1, ti)]
                    - f.values[grid.index(&s_idx, ri - 1, ti)])
                    / (2.0 * dr);
                let dg_r = (g.values[grid.index(&s_idx, ri + 1, ti)]
                    - g.values[grid.index(&s_idx, ri - 1, ti)])
                    / (2.0 * dr);
                let df_t = (f.values[grid.index(&s_idx, ri, (ti + 1) % nt)]
                    - f.values[grid.index(&s_idx, ri, (ti + nt - 1) % nt)])
                    / (2.0 * dtheta);
                let dg_t = (g.values[grid.index(&s_idx, ri, (ti + 1) % nt)]
                    - g.values[grid.index(&s_idx, ri, (ti + nt - 1) % nt)])
                    / (2.0 * dtheta);

                let mut pair = df_r * dg_r / (radius * radius)
                    + df_t * dg_t / radius.powi(4);
                for (axis_no, ax) in grid.s_axes.iter().enumerate() {
                    let mut plus = s_idx.clone();
                    plus[axis_no] += 1;
                    let mut minus = s_idx.clone();
                    minus[axis_no] -= 1;
                    let dfs = (f.values[grid.index(&plus, ri, ti)]
                        - f.values[grid.index(&minus, ri, ti)])
                        / (2.0 * ax.step);
                    let dgs = (g.values[grid.index(&plus, ri, ti)]
                        - g.values[grid.index(&minus, ri, ti)])
                        / (2.0 * ax.step);
                    pair += dfs * dgs;
                }
                total += pair * weight;
            }
        }
    }
    Ok(total)
}
