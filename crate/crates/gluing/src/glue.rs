use rayon::prelude::*;

use crate::error::GluingError;
use crate::profile::GluingProfile;

const LAMBDA_CAP: f64 = 1_048_576.0;
const MIN_ANNULUS_RINGS: usize = 6;

/// Scalar samples on a uniform polar grid, rings at r = i dr for i = 1..=nr
/// plus a separate value at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarField {
    pub nr: usize,
    pub ntheta: usize,
    pub r_max: f64,
    pub center: f64,
    pub values: Vec<f64>,
}

impl PolarField {
    pub fn from_fn(nr: usize, ntheta: usize, r_max: f64, f: impl Fn(f64, f64) -> f64) -> PolarField {
        assert!(nr >= 2 && ntheta >= 4 && r_max > 0.0);
        let dr = r_max / nr as f64;
        let dtheta = std::f64::consts::TAU / ntheta as f64;
        let mut values = Vec::with_capacity(nr * ntheta);
        for i in 1..=nr {
            for j in 0..ntheta {
                values.push(f(i as f64 * dr, j as f64 * dtheta));
            }
        }
        PolarField {
            nr,
            ntheta,
            r_max,
            center: f(0.0, 0.0),
            values,
        }
    }

    pub fn dr(&self) -> f64 {
        self.r_max / self.nr as f64
    }

    pub fn dtheta(&self) -> f64 {
        std::f64::consts::TAU / self.ntheta as f64
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        if i == 0 {
            self.center
        } else {
            self.values[(i - 1) * self.ntheta + j % self.ntheta]
        }
    }

    pub fn shape_matches(&self, other: &PolarField) -> bool {
        self.nr == other.nr && self.ntheta == other.ntheta && self.r_max == other.r_max
    }

    /// Five point Laplacian at ring i, sector j; valid for 1 <= i <= nr-1.
    pub fn stencil_laplacian(&self, i: usize, j: usize) -> f64 {
        let dr = self.dr();
        let dtheta = self.dtheta();
        let r = i as f64 * dr;
        let c = self.value(i, j);
        let radial = (self.value(i + 1, j) - 2.0 * c + self.value(i - 1, j)) / (dr * dr)
            + (self.value(i + 1, j) - self.value(i - 1, j)) / (2.0 * dr * r);
        let jm = (j + self.ntheta - 1) % self.ntheta;
        let jp = (j + 1) % self.ntheta;
        let angular = (self.value(i, jp) - 2.0 * c + self.value(i, jm)) / (r * r * dtheta * dtheta);
        radial + angular
    }

    fn min_stencil(&self) -> f64 {
        let rows: Vec<f64> = (1..self.nr)
            .into_par_iter()
            .map(|i| {
                let mut m = f64::INFINITY;
                for j in 0..self.ntheta {
                    m = m.min(self.stencil_laplacian(i, j));
                }
                m
            })
            .collect();
        rows.into_iter().fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone)]
pub struct TransitionScan {
    pub lambda: f64,
    pub t_lambda: PolarField,
    pub annulus_min: f64,
    pub annulus_argmin: (usize, usize),
    pub annulus_points: usize,
    pub annulus_rings: usize,
    pub global_min: f64,
}

fn reparam_at(reparam: Option<&(dyn Fn(f64) -> f64 + Sync)>, r: f64) -> f64 {
    match reparam {
        Some(rho) => rho(r),
        None => r,
    }
}

/// Blends f into g through the profile transition at scale lambda and scans
/// the five point Laplacian of the blend.
pub fn transition_laplacian(
    f: &PolarField,
    g: &PolarField,
    p: &GluingProfile,
    reparam: Option<&(dyn Fn(f64) -> f64 + Sync)>,
    lambda: f64,
) -> TransitionScan {
    let dr = f.dr();
    let mut values = Vec::with_capacity(f.nr * f.ntheta);
    for i in 1..=f.nr {
        let x = reparam_at(reparam, i as f64 * dr);
        let w = p.alpha_eval(lambda * x);
        for j in 0..f.ntheta {
            values.push(w * f.value(i, j) + (1.0 - w) * g.value(i, j));
        }
    }
    let w0 = p.alpha_eval(lambda * reparam_at(reparam, 0.0));
    let t = PolarField {
        nr: f.nr,
        ntheta: f.ntheta,
        r_max: f.r_max,
        center: w0 * f.center + (1.0 - w0) * g.center,
        values,
    };

    let rows: Vec<(f64, usize, f64)> = (1..t.nr)
        .into_par_iter()
        .map(|i| {
            let mut ring_min = f64::INFINITY;
            let mut ring_arg = 0;
            for j in 0..t.ntheta {
                let lap = t.stencil_laplacian(i, j);
                if lap < ring_min {
                    ring_min = lap;
                    ring_arg = j;
                }
            }
            let x = reparam_at(reparam, i as f64 * dr);
            (ring_min, ring_arg, lambda * x)
        })
        .collect();

    let mut annulus_min = f64::INFINITY;
    let mut annulus_argmin = (0, 0);
    let mut annulus_points = 0;
    let mut annulus_rings = 0;
    let mut global_min = f64::INFINITY;
    for (idx, (ring_min, ring_arg, scaled)) in rows.iter().enumerate() {
        let i = idx + 1;
        global_min = global_min.min(*ring_min);
        if *scaled >= p.eps && *scaled <= p.eps_prime {
            annulus_rings += 1;
            annulus_points += t.ntheta;
            if *ring_min < annulus_min {
                annulus_min = *ring_min;
                annulus_argmin = (i, *ring_arg);
            }
        }
    }

    TransitionScan {
        lambda,
        t_lambda: t,
        annulus_min,
        annulus_argmin,
        annulus_points,
        annulus_rings,
        global_min,
    }
}

/// Leading form of the blended Laplacian in the scaled radial variable
/// R = lambda r, for a difference g - f = c(theta) r^2 + O(r^3) and an
/// identity radial reparameterization.
pub fn transition_prediction(
    p: &GluingProfile,
    c: f64,
    c_second: f64,
    lap_f: f64,
    big_r: f64,
) -> f64 {
    c * (p.u_second(big_r) * big_r * big_r + 5.0 * p.u_prime(big_r) * big_r)
        + (4.0 * c + c_second) * p.u_eval(big_r)
        + lap_f
}

#[derive(Debug, Clone)]
pub struct SubharmonicReport {
    pub scan: TransitionScan,
    pub lambda_star: Option<f64>,
    /// Smallest ratio 2 (g - f) / r^2 seen on the innermost ring.
    pub hessian_floor: f64,
    /// Worst value of c'' + 4c - (2 - m) c over the innermost ring.
    pub hypothesis_margin: f64,
}

fn first_ring_modes(d: &PolarField) -> (f64, f64) {
    let n = d.ntheta as f64;
    let mut a1 = 0.0;
    let mut b1 = 0.0;
    for j in 0..d.ntheta {
        let theta = j as f64 * d.dtheta();
        a1 += d.value(1, j) * theta.cos();
        b1 += d.value(1, j) * theta.sin();
    }
    (2.0 * a1 / n, 2.0 * b1 / n)
}

/// Verifies the gluing preconditions on the sampled pair and scans the blend,
/// then walks lambda by doubling and bisection until the transition annulus
/// shows a strictly positive Laplacian.
pub fn glue_subharmonic(
    f: &PolarField,
    g: &PolarField,
    p: &GluingProfile,
    reparam: Option<&(dyn Fn(f64) -> f64 + Sync)>,
    m0: f64,
) -> Result<SubharmonicReport, GluingError> {
    p.validate()?;
    if !f.shape_matches(g) {
        return Err(GluingError::GridPrecondition(format!(
            "grids disagree: ({}, {}, {}) vs ({}, {}, {})",
            f.nr, f.ntheta, f.r_max, g.nr, g.ntheta, g.r_max
        )));
    }
    if !(m0 > 0.0) {
        return Err(GluingError::GridPrecondition(format!(
            "hessian floor must be positive, got {}",
            m0
        )));
    }

    let scale = 1.0 + f.center.abs().max(g.center.abs());
    if (f.center - g.center).abs() > 1e-8 * scale {
        return Err(GluingError::GridPrecondition(format!(
            "values at the origin disagree: {} vs {}",
            f.center, g.center
        )));
    }

    let dvals: Vec<f64> = g
        .values
        .iter()
        .zip(f.values.iter())
        .map(|(gv, fv)| gv - fv)
        .collect();
    let d = PolarField {
        nr: f.nr,
        ntheta: f.ntheta,
        r_max: f.r_max,
        center: g.center - f.center,
        values: dvals,
    };
    let r1 = d.dr();
    let (a1, b1) = first_ring_modes(&d);
    let grad_mismatch = (a1 * a1 + b1 * b1).sqrt() / r1;
    let ring_scale = (0..d.ntheta)
        .map(|j| f.value(1, j).abs().max(g.value(1, j).abs()))
        .fold(0.0, f64::max);
    if grad_mismatch > 1e-6 * (1.0 + ring_scale) {
        return Err(GluingError::GridPrecondition(format!(
            "gradients at the origin disagree, first ring mode size {:.3e}",
            grad_mismatch
        )));
    }

    let c_ring: Vec<f64> = (0..d.ntheta).map(|j| d.value(1, j) / (r1 * r1)).collect();
    let hessian_floor = c_ring.iter().map(|c| 2.0 * c).fold(f64::INFINITY, f64::min);
    if hessian_floor < 0.9 * m0 {
        return Err(GluingError::GridPrecondition(format!(
            "radial curvature of the difference falls to {:.6}, below the requested floor {}",
            hessian_floor, m0
        )));
    }

    let min_f = f.min_stencil();
    if !(min_f > 0.0) {
        return Err(GluingError::GridPrecondition(format!(
            "inner potential is not strictly subharmonic on the grid, min Laplacian {:.3e}",
            min_f
        )));
    }
    let min_g = g.min_stencil();
    if !(min_g > 0.0) {
        return Err(GluingError::GridPrecondition(format!(
            "outer potential is not strictly subharmonic on the grid, min Laplacian {:.3e}",
            min_g
        )));
    }

    let dtheta = d.dtheta();
    let mut hypothesis_margin = f64::INFINITY;
    for j in 0..d.ntheta {
        let jm = (j + d.ntheta - 1) % d.ntheta;
        let jp = (j + 1) % d.ntheta;
        let c_second = (c_ring[jp] - 2.0 * c_ring[j] + c_ring[jm]) / (dtheta * dtheta);
        hypothesis_margin =
            hypothesis_margin.min(c_second + 4.0 * c_ring[j] - (2.0 - p.m) * c_ring[j]);
    }

    let scan = transition_laplacian(f, g, p, reparam, p.lambda);

    let rho_max = reparam_at(reparam, 0.98 * f.r_max);
    let mut lambda_star = None;
    if rho_max > 0.0 {
        let mut lambda = p.eps_prime / rho_max;
        let mut prev_fail: Option<f64> = None;
        while lambda <= LAMBDA_CAP {
            let probe = transition_laplacian(f, g, p, reparam, lambda);
            if probe.annulus_rings < MIN_ANNULUS_RINGS {
                break;
            }
            if probe.annulus_min > 0.0 {
                if let Some(mut lo) = prev_fail {
                    let mut hi = lambda;
                    for _ in 0..30 {
                        let mid = 0.5 * (lo + hi);
                        let t = transition_laplacian(f, g, p, reparam, mid);
                        if t.annulus_rings >= MIN_ANNULUS_RINGS && t.annulus_min > 0.0 {
                            hi = mid;
                        } else {
                            lo = mid;
                        }
                    }
                    lambda_star = Some(hi);
                } else {
                    lambda_star = Some(lambda);
                }
                break;
            }
            prev_fail = Some(lambda);
            lambda *= 2.0;
        }
    }

    Ok(SubharmonicReport {
        scan,
        lambda_star,
        hessian_floor,
        hypothesis_margin,
    })
}
