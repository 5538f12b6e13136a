//! Green kernel of the flat cone model, built mode by mode in the angle.
//!
//! Each angular mode k carries a half-line Bessel integral in the dual
//! variable.  Two integral representations are available: one whose decay
//! comes from an outer K factor in the flat separation, one whose decay comes
//! from a nested I and K pair in the radial gap.  They agree on the common
//! validity region and serve as cross-oracles for each other.
//!
//! `green_mode` returns the mode value in the source normalization carrying
//! the prefactor sep^(2 - m/2) / (2 pi^m).  Kernel synthesis uses the
//! delta-normalized spectral coefficients instead, so that minus the model
//! Laplacian applied to the synthesized potential recovers the density.

use std::f64::consts::PI;

use crate::bessel::{bessel_i_scaled, bessel_j, bessel_k_scaled};
use crate::error::ConeError;
use crate::geometry::{ConeGeometry, Point};
use crate::quad::{integrate_half_line, QuadConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeRep {
    /// Outer K factor decaying in the flat separation; needs sep > 0.
    Separation,
    /// Nested I and K factors decaying in the radial gap; needs r < r_prime.
    RadialOrder,
}

#[derive(Clone, Debug)]
pub struct ConeGreenKernel {
    pub geometry: ConeGeometry,
    pub mode_cut: usize,
    pub quadrature: QuadConfig,
    pub weighted_volume: bool,
}

fn scale_tolerance_failure(err: ConeError, factor: f64) -> ConeError {
    match err {
        ConeError::ToleranceFailure {
            estimate,
            error,
            tol,
        } => ConeError::ToleranceFailure {
            estimate: estimate * factor,
            error: error * factor,
            tol,
        },
        other => other,
    }
}

impl ConeGreenKernel {
    pub fn new(geometry: ConeGeometry, mode_cut: usize) -> Result<Self, ConeError> {
        if geometry.beta != 2.0 {
            return Err(ConeError::BadModeArguments(format!(
                "mode orders are half-integers only for cone angle factor 2, got {}",
                geometry.beta
            )));
        }
        if geometry.m < 4 || geometry.m % 2 != 0 || geometry.m > 12 {
            return Err(ConeError::BadModeArguments(format!(
                "ambient dimension must be even, at least 4 and at most 12, got {}",
                geometry.m
            )));
        }
        if mode_cut > 8 {
            return Err(ConeError::BadModeArguments(format!(
                "mode cut {} exceeds the tabulated Bessel order range",
                mode_cut
            )));
        }
        Ok(ConeGreenKernel {
            geometry,
            mode_cut,
            quadrature: QuadConfig::default(),
            weighted_volume: true,
        })
    }

    /// Order of the radial Bessel factors for angular mode k.
    pub fn nu_of_k(&self, k: usize) -> f64 {
        k as f64 / self.geometry.beta
    }

    fn two_nu(&self, k: usize) -> Result<u32, ConeError> {
        if k > 8 {
            return Err(ConeError::BadModeArguments(format!(
                "mode {} is beyond the tabulated Bessel order range",
                k
            )));
        }
        Ok((2.0 * self.nu_of_k(k)).round() as u32)
    }

    fn check_mode_inputs(&self, r: f64, r_prime: f64, r_sep: f64) -> Result<(), ConeError> {
        for (label, v) in [("r", r), ("r_prime", r_prime), ("separation", r_sep)] {
            if !v.is_finite() || v < 0.0 {
                return Err(ConeError::BadModeArguments(format!(
                    "{} must be finite and nonnegative, got {}",
                    label, v
                )));
            }
        }
        if self.geometry.m > 4 && r_sep == 0.0 {
            return Err(ConeError::BadModeArguments(
                "zero flat separation is only supported in the four-dimensional model".to_string(),
            ));
        }
        Ok(())
    }

    /// Bare mode integral, twice the half-line integral, without the source
    /// normalization prefactor.
    fn bare_mode(
        &self,
        k: usize,
        r: f64,
        r_prime: f64,
        r_sep: f64,
        rep: ModeRep,
    ) -> Result<f64, ConeError> {
        self.check_mode_inputs(r, r_prime, r_sep)?;
        match rep {
            ModeRep::Separation => {
                if r_sep <= 0.0 {
                    return Err(ConeError::BadModeArguments(
                        "the separation representation needs a positive flat separation"
                            .to_string(),
                    ));
                }
            }
            ModeRep::RadialOrder => {
                if r >= r_prime {
                    return Err(ConeError::BadModeArguments(format!(
                        "the radial-order representation needs r < r_prime, got {} and {}",
                        r, r_prime
                    )));
                }
            }
        }
        let two_nu = self.two_nu(k)?;
        let outer = (self.geometry.m - 4) as u32;
        let power = 0.5 * self.geometry.m as f64 - 1.0;
        let out = match rep {
            ModeRep::Separation => integrate_half_line(
                |lam| {
                    lam.powf(power)
                        * bessel_k_scaled(outer, r_sep * lam)
                        * (-r_sep * lam).exp()
                        * bessel_j(two_nu, r * lam)
                        * bessel_j(two_nu, r_prime * lam)
                },
                &self.quadrature,
            ),
            ModeRep::RadialOrder => integrate_half_line(
                |lam| {
                    lam.powf(power)
                        * bessel_j(outer, r_sep * lam)
                        * bessel_i_scaled(two_nu, r * lam)
                        * bessel_k_scaled(two_nu, r_prime * lam)
                        * (-(r_prime - r) * lam).exp()
                },
                &self.quadrature,
            ),
        };
        match out {
            Ok(q) => Ok(2.0 * q.value),
            Err(e) => Err(scale_tolerance_failure(e, 2.0)),
        }
    }

    /// Mode value in the source normalization.
    pub fn green_mode(
        &self,
        k: usize,
        r: f64,
        r_prime: f64,
        r_sep: f64,
        rep: ModeRep,
    ) -> Result<f64, ConeError> {
        let m = self.geometry.m as f64;
        let front = r_sep.powf(2.0 - 0.5 * m) / (2.0 * PI.powf(m));
        match self.bare_mode(k, r, r_prime, r_sep, rep) {
            Ok(g) => Ok(front * g),
            Err(e) => Err(scale_tolerance_failure(e, front)),
        }
    }

    /// Spectral weight of mode k in the delta-normalized kernel sum.
    fn spectral_base(&self, k: usize) -> f64 {
        let eps = if k == 0 { 1.0 } else { 2.0 };
        let flat_dim = (self.geometry.m - 2) as f64;
        eps / (4.0 * PI * self.geometry.beta * (2.0 * PI).powf(0.5 * flat_dim))
    }

    fn choose_rep(lo: f64, hi: f64, r_sep: f64) -> Result<ModeRep, ConeError> {
        if hi > lo && (r_sep == 0.0 || hi - lo > r_sep) {
            Ok(ModeRep::RadialOrder)
        } else if r_sep > 0.0 {
            Ok(ModeRep::Separation)
        } else {
            Err(ConeError::BadModeArguments(
                "coincident radii with zero flat separation make the kernel singular".to_string(),
            ))
        }
    }

    /// Full angular coefficient of mode k between radii, delta-normalized,
    /// with the representation picked by whichever decay is faster.
    pub(crate) fn synthesis_mode(
        &self,
        k: usize,
        r_a: f64,
        r_b: f64,
        r_sep: f64,
    ) -> Result<f64, ConeError> {
        let (lo, hi) = if r_a <= r_b { (r_a, r_b) } else { (r_b, r_a) };
        let rep = Self::choose_rep(lo, hi, r_sep)?;
        let g = self.bare_mode(k, lo, hi, r_sep, rep)?;
        let m = self.geometry.m as f64;
        Ok(self.spectral_base(k) * r_sep.powf(2.0 - 0.5 * m) * g)
    }

    /// Kernel value between two points in cone coordinates.  The radial
    /// arguments fed to the mode integrals are half the coordinate radii:
    /// the squared-radius coordinate runs twice as fast as arclength, and it
    /// is the arclength radius that separates variables in the cone metric.
    pub fn kernel_value(&self, x: &Point, y: &Point) -> Result<f64, ConeError> {
        let flat_dim = self.geometry.m - 2;
        if x.s.len() != flat_dim || y.s.len() != flat_dim {
            return Err(ConeError::BadModeArguments(format!(
                "points must carry {} flat coordinates",
                flat_dim
            )));
        }
        let r_sep = x
            .s
            .iter()
            .zip(&y.s)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        let dtheta = x.angle - y.angle;
        let mut total = 0.0;
        for k in 0..=self.mode_cut {
            total += self.synthesis_mode(k, 0.5 * x.radial, 0.5 * y.radial, r_sep)?
                * (k as f64 * dtheta).cos();
        }
        Ok(total)
    }

    /// Kernel value between two points upstairs, pulled back through the
    /// squaring map.
    pub fn gtilde_value(&self, x_up: &Point, y_up: &Point) -> Result<f64, ConeError> {
        let x = self.geometry.pi2_pushforward(x_up);
        let y = self.geometry.pi2_pushforward(y_up);
        self.kernel_value(&x, &y)
    }
}
