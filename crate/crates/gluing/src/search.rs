use crate::check::property_check;
use crate::error::GluingError;
use crate::profile::GluingProfile;

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub b: f64,
    pub a_start: f64,
    pub a_doublings: u32,
    /// The bump amplitude is grown until the slope deficit reaches this value,
    /// which must exceed 2 for the peak equation to have a root.
    pub peak_target: f64,
    pub eps_start: f64,
    pub eps_doublings: u32,
    pub grid_n: usize,
    pub lambda: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            b: 1.0,
            a_start: 1.0,
            a_doublings: 60,
            peak_target: 4.0,
            eps_start: 1.0,
            eps_doublings: 30,
            grid_n: 2048,
            lambda: 1.0,
        }
    }
}

/// Slope deficit of the density per unit amplitude at offset y past eps.
fn psi(b: f64, y: f64) -> f64 {
    if y <= 0.0 {
        return 0.0;
    }
    b * (2.0 * b - 3.0 * y * y) * (-b / (y * y)).exp() / y.powi(6)
}

/// Searches for profile parameters realizing a given target slope m.
///
/// The amplitude |a| is doubled until the density develops a stationary
/// point, whose offset is then pinned by bisection. The shift eps is doubled
/// until the two grid inequalities controlling the slope bound on the rising
/// stretch and the area bound on the reflected stretch hold, and the
/// candidate is accepted only once the full property report passes.
pub fn find_parameters(m: f64, cfg: &SearchConfig) -> Result<GluingProfile, GluingError> {
    if !(m > 0.0 && m < 2.0) {
        return Err(GluingError::BadSlope(m));
    }
    let b = cfg.b;
    let y_sup = (2.0 * b / 3.0).sqrt();

    let scan_n = 4096;
    let mut psi_max = 0.0;
    let mut y_at_max = 0.5 * y_sup;
    for i in 0..scan_n {
        let y = (i as f64 + 0.5) / scan_n as f64 * y_sup;
        let v = psi(b, y);
        if v > psi_max {
            psi_max = v;
            y_at_max = y;
        }
    }

    let mut a_abs = cfg.a_start;
    let mut doublings = 0;
    while a_abs * psi_max < cfg.peak_target {
        if doublings >= cfg.a_doublings {
            return Err(GluingError::SearchExhausted {
                inequality: "stationarity of the density peak",
                worst_x: y_at_max,
                margin: a_abs * psi_max - 2.0,
            });
        }
        a_abs *= 2.0;
        doublings += 1;
    }

    let slope = |y: f64| 2.0 - a_abs * psi(b, y);
    let mut lo = 1e-8 * y_sup;
    let mut hi = y_at_max;
    let mut k = 0;
    while slope(lo) <= 0.0 && k < 60 {
        lo *= 0.5;
        k += 1;
    }
    debug_assert!(slope(lo) > 0.0 && slope(hi) < 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if slope(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let y0 = 0.5 * (lo + hi);

    let mut last: (&'static str, f64, f64) = ("rising-stretch slope bound", 0.0, 0.0);
    for round in 0..=cfg.eps_doublings {
        let eps = cfg.eps_start * (1u64 << round.min(62)) as f64;
        let x0 = eps + y0;

        let mut ok = true;
        let mut worst = f64::INFINITY;
        let mut worst_at = 0.0;
        for i in 0..cfg.grid_n {
            let y = (i as f64 + 0.5) / cfg.grid_n as f64 * y0;
            let margin = (4.0 * b * b - 6.0 * b * y * y) * eps * eps
                + (8.0 * b * b * y - 12.0 * b * y * y * y) * eps
                + (-(2.0 - m) * y.powi(6) + 4.0 * b * b * y * y - 6.0 * b * y.powi(4));
            if margin < worst {
                worst = margin;
                worst_at = eps + y;
            }
        }
        if worst < 0.0 {
            ok = false;
            last = ("rising-stretch slope bound", worst_at, worst);
        }

        if ok {
            let e0 = (-b / (y0 * y0)).exp();
            let a = -a_abs;
            for i in 0..cfg.grid_n {
                let x = x0 + (i as f64 + 0.5) / cfg.grid_n as f64 * x0;
                let s = 2.0 * x0 - x - eps;
                let mut rhs = -2.0 * a * e0;
                if s > 0.0 {
                    let es = (-b / (s * s)).exp();
                    rhs += a * es + a * b * x * es / s.powi(3);
                }
                let margin = 4.0 * x0 * (x - x0) - rhs;
                if margin < worst {
                    worst = margin;
                    worst_at = x;
                }
            }
            if worst < 0.0 {
                ok = false;
                last = ("reflected-stretch area bound", worst_at, worst);
            }
        }

        if ok {
            let y0x = x0 - eps;
            let h_peak = x0 * x0 - 0.5 * a_abs * (-b / (y0x * y0x)).exp();
            let w = (48.0 * h_peak / m).sqrt();
            let candidate = GluingProfile {
                a: -a_abs,
                b,
                eps,
                eps_prime: 2.0 * x0 + w,
                m,
                x0,
                lambda: cfg.lambda,
            };
            candidate.validate()?;
            let report = property_check(&candidate, cfg.grid_n.max(2048));
            if report.pass() {
                return Ok(candidate);
            }
            let (name, margin) = report.worst_failure();
            last = (name, margin.at_x, margin.value);
        }
    }

    Err(GluingError::SearchExhausted {
        inequality: last.0,
        worst_x: last.1,
        margin: last.2,
    })
}
