use serde::{Deserialize, Serialize};

use crate::error::GluingError;

fn default_lambda() -> f64 {
    1.0
}

/// Cutoff profile combining a linear core, an exponential bump, a reflection
/// across the peak, and a cubic ramp that returns the running integral to zero.
///
/// The density is
///
///   htilde(x) = 2x + (a b / (x - eps)^3) exp(-b / (x - eps)^2)
///
/// for eps <= x <= x0, with htilde(x) = 2x below eps. On [x0, 2 x0] the
/// density is reflected, htilde(x) = htilde(2 x0 - x), and beyond 2 x0 a
/// cubic ramp drains the accumulated integral so that the primitive
/// h(x) = integral of htilde from 0 to x vanishes identically past eps_prime.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GluingProfile {
    pub a: f64,
    pub b: f64,
    pub eps: f64,
    pub eps_prime: f64,
    pub m: f64,
    pub x0: f64,
    #[serde(default = "default_lambda")]
    pub lambda: f64,
}

impl GluingProfile {
    pub fn validate(&self) -> Result<(), GluingError> {
        if !(self.m > 0.0 && self.m < 2.0) {
            return Err(GluingError::BadSlope(self.m));
        }
        let mut complaints: Vec<String> = Vec::new();
        if !(self.a < 0.0) {
            complaints.push(format!("a must be negative, got {}", self.a));
        }
        if !(self.b > 0.0) {
            complaints.push(format!("b must be positive, got {}", self.b));
        }
        if !(self.eps > 0.0) {
            complaints.push(format!("eps must be positive, got {}", self.eps));
        }
        if !(self.x0 > self.eps && self.x0 < self.eps + self.peak_offset_bound()) {
            complaints.push(format!(
                "x0 = {} must lie in ({}, {})",
                self.x0,
                self.eps,
                self.eps + self.peak_offset_bound()
            ));
        }
        if !(self.eps_prime > 2.0 * self.x0) {
            complaints.push(format!(
                "eps_prime = {} must exceed twice the peak location {}",
                self.eps_prime,
                2.0 * self.x0
            ));
        }
        if !(self.lambda > 0.0) {
            complaints.push(format!("lambda must be positive, got {}", self.lambda));
        }
        if complaints.is_empty() {
            Ok(())
        } else {
            Err(GluingError::BadProfile(complaints.join("; ")))
        }
    }

    /// Upper bound sqrt(2b/3) on how far the peak can sit beyond eps.
    pub fn peak_offset_bound(&self) -> f64 {
        (2.0 * self.b / 3.0).sqrt()
    }

    fn bump(&self, x: f64) -> f64 {
        let y = x - self.eps;
        if y <= 0.0 {
            return 0.0;
        }
        (self.a * self.b / y.powi(3)) * (-self.b / (y * y)).exp()
    }

    fn bump_prime(&self, x: f64) -> f64 {
        let y = x - self.eps;
        if y <= 0.0 {
            return 0.0;
        }
        (self.a * self.b / y.powi(6)) * (2.0 * self.b - 3.0 * y * y) * (-self.b / (y * y)).exp()
    }

    /// Value of the primitive at the peak, in closed form.
    pub fn h_peak(&self) -> f64 {
        let y0 = self.x0 - self.eps;
        self.x0 * self.x0 + 0.5 * self.a * (-self.b / (y0 * y0)).exp()
    }

    fn tail_width(&self) -> f64 {
        self.eps_prime - 2.0 * self.x0
    }

    pub fn htilde_eval(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        if x <= self.x0 {
            return 2.0 * x + self.bump(x);
        }
        if x <= 2.0 * self.x0 {
            let mirror = 2.0 * self.x0 - x;
            return 2.0 * mirror + self.bump(mirror);
        }
        if x < self.eps_prime {
            let w = self.tail_width();
            let t = (x - 2.0 * self.x0) / w;
            return -24.0 * self.h_peak() / w * t * (1.0 - t) * (1.0 - t);
        }
        0.0
    }

    pub fn htilde_prime(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        if x <= self.x0 {
            return 2.0 + self.bump_prime(x);
        }
        if x <= 2.0 * self.x0 {
            let mirror = 2.0 * self.x0 - x;
            return -(2.0 + self.bump_prime(mirror));
        }
        if x < self.eps_prime {
            let w = self.tail_width();
            let t = (x - 2.0 * self.x0) / w;
            return -24.0 * self.h_peak() / (w * w) * (1.0 - t) * (1.0 - 3.0 * t);
        }
        0.0
    }

    /// Closed form of the primitive h(x) = integral of htilde over [0, x].
    pub fn h_eval(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if x <= self.eps {
            return x * x;
        }
        if x <= self.x0 {
            let y = x - self.eps;
            return x * x + 0.5 * self.a * (-self.b / (y * y)).exp();
        }
        if x <= 2.0 * self.x0 {
            return 2.0 * self.h_peak() - self.h_eval(2.0 * self.x0 - x);
        }
        if x < self.eps_prime {
            let w = self.tail_width();
            let t = (x - 2.0 * self.x0) / w;
            let ramp = 6.0 * t * t - 8.0 * t * t * t + 3.0 * t * t * t * t;
            return 2.0 * self.h_peak() * (1.0 - ramp);
        }
        0.0
    }

    /// u = (x^2 - h) / x^2, the increasing transition from 0 to 1.
    pub fn u_eval(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        1.0 - self.h_eval(x) / (x * x)
    }

    pub fn alpha_eval(&self, x: f64) -> f64 {
        1.0 - self.u_eval(x)
    }

    pub fn u_prime(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        -self.htilde_eval(x) / (x * x) + 2.0 * self.h_eval(x) / (x * x * x)
    }

    pub fn u_second(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let x2 = x * x;
        -self.htilde_prime(x) / x2 + 4.0 * self.htilde_eval(x) / (x2 * x)
            - 6.0 * self.h_eval(x) / (x2 * x2)
    }

    /// Residual of the stationarity identity the peak location solves,
    /// exp(-b/y0^2) = (-2/(a b)) y0^6 / (2b - 3 y0^2) with y0 = x0 - eps.
    pub fn x0_residual(&self) -> f64 {
        let y0 = self.x0 - self.eps;
        let lhs = (-self.b / (y0 * y0)).exp();
        let rhs = (-2.0 / (self.a * self.b)) * y0.powi(6) / (2.0 * self.b - 3.0 * y0 * y0);
        (lhs - rhs).abs()
    }
}
