use crate::profile::GluingProfile;

#[derive(Debug, Clone, Copy)]
pub struct Margin {
    pub value: f64,
    pub at_x: f64,
}

impl Margin {
    fn worst() -> Margin {
        Margin {
            value: f64::INFINITY,
            at_x: 0.0,
        }
    }

    fn absorb(&mut self, value: f64, at_x: f64) {
        if value < self.value {
            self.value = value;
            self.at_x = at_x;
        }
    }
}

/// Pointwise verification report for a cutoff profile.
///
/// Deviation fields measure how far an identity is from holding and should be
/// near zero; margin fields measure the slack in an inequality and should be
/// nonnegative. The curvature and monotonicity margins recompute the
/// primitive by adaptive quadrature, independently of the closed form used
/// for the slope and area margins.
#[derive(Debug, Clone)]
pub struct PropertyReport {
    pub grid_n: usize,
    pub linear_below_eps: f64,
    pub vanishes_beyond_cutoff: f64,
    pub slope_bound_signed: Margin,
    pub slope_bound_abs: Margin,
    pub integral_vanishes: f64,
    pub area_positivity: Margin,
    pub curvature_bound: Margin,
    pub monotone_ratio: Margin,
    pub convexity: Margin,
    pub u_min: f64,
    pub u_max: f64,
    pub u_monotone: Margin,
    /// Minimum of u measured strictly inside the support, past the zone just
    /// beyond eps where the bump is smaller than one ulp of x^2 and the
    /// computed u collapses to zero in double precision. Halfway to the peak
    /// the bump is the fourth power of its peak value, roughly 1e-12, which
    /// double precision still resolves against 1.
    pub u_positive_inside: f64,
    pub quadrature_deviation: f64,
    pub peak_residual: f64,
    pub junction_slope: f64,
    pub reflection_defect: f64,
}

impl PropertyReport {
    pub fn pass(&self) -> bool {
        self.failures().is_empty()
    }

    pub fn failures(&self) -> Vec<(&'static str, Margin)> {
        let mut out = Vec::new();
        let dev = |name: &'static str, value: f64, tol: f64, at: f64, out: &mut Vec<_>| {
            if !(value <= tol) {
                out.push((name, Margin { value: tol - value, at_x: at }));
            }
        };
        dev("linear core", self.linear_below_eps, 1e-10, 0.0, &mut out);
        dev(
            "support bound",
            self.vanishes_beyond_cutoff,
            1e-12,
            0.0,
            &mut out,
        );
        dev(
            "vanishing total integral",
            self.integral_vanishes,
            1e-8,
            0.0,
            &mut out,
        );
        dev(
            "quadrature agreement",
            self.quadrature_deviation,
            1e-7,
            0.0,
            &mut out,
        );
        dev("peak stationarity", self.peak_residual, 1e-10, 0.0, &mut out);
        dev("peak junction slope", self.junction_slope, 1e-8, 0.0, &mut out);
        dev(
            "reflection symmetry",
            self.reflection_defect,
            1e-12,
            0.0,
            &mut out,
        );
        let margin = |name: &'static str, m: Margin, tol: f64, out: &mut Vec<_>| {
            if !(m.value >= -tol) {
                out.push((name, m));
            }
        };
        margin(
            "rising-stretch slope bound",
            self.slope_bound_signed,
            1e-10,
            &mut out,
        );
        margin("reflected-stretch area bound", self.area_positivity, 1e-10, &mut out);
        margin("curvature bound", self.curvature_bound, 1e-6, &mut out);
        margin("monotone ratio", self.monotone_ratio, 1e-6, &mut out);
        margin("convexity of the complement", self.convexity, 1e-10, &mut out);
        margin("transition monotonicity", self.u_monotone, 1e-8, &mut out);
        if !(self.u_min >= -1e-10 && self.u_max <= 1.0 + 1e-10) {
            out.push((
                "transition range",
                Margin {
                    value: self.u_min.min(1.0 - self.u_max),
                    at_x: 0.0,
                },
            ));
        }
        if !(self.u_positive_inside > 0.0) {
            out.push((
                "transition positivity inside the support",
                Margin {
                    value: self.u_positive_inside,
                    at_x: 0.0,
                },
            ));
        }
        out
    }

    pub fn worst_failure(&self) -> (&'static str, Margin) {
        self.failures()
            .into_iter()
            .min_by(|a, b| a.1.value.partial_cmp(&b.1.value).unwrap())
            .unwrap_or(("none", Margin { value: f64::INFINITY, at_x: 0.0 }))
    }

    pub fn to_csv(&self) -> String {
        let mut rows = String::from("property,value,at_x\n");
        let push = |name: &str, value: f64, at: f64, rows: &mut String| {
            rows.push_str(&format!("{},{:.12e},{:.12e}\n", name, value, at));
        };
        push("linear_core_deviation", self.linear_below_eps, 0.0, &mut rows);
        push(
            "support_deviation",
            self.vanishes_beyond_cutoff,
            0.0,
            &mut rows,
        );
        push(
            "slope_bound_signed_margin",
            self.slope_bound_signed.value,
            self.slope_bound_signed.at_x,
            &mut rows,
        );
        push(
            "slope_bound_abs_margin",
            self.slope_bound_abs.value,
            self.slope_bound_abs.at_x,
            &mut rows,
        );
        push("total_integral", self.integral_vanishes, 0.0, &mut rows);
        push(
            "area_positivity_margin",
            self.area_positivity.value,
            self.area_positivity.at_x,
            &mut rows,
        );
        push(
            "curvature_bound_margin",
            self.curvature_bound.value,
            self.curvature_bound.at_x,
            &mut rows,
        );
        push(
            "monotone_ratio_margin",
            self.monotone_ratio.value,
            self.monotone_ratio.at_x,
            &mut rows,
        );
        push(
            "convexity_margin",
            self.convexity.value,
            self.convexity.at_x,
            &mut rows,
        );
        push("u_min", self.u_min, 0.0, &mut rows);
        push("u_max", self.u_max, 0.0, &mut rows);
        push(
            "u_monotone_margin",
            self.u_monotone.value,
            self.u_monotone.at_x,
            &mut rows,
        );
        push("u_positive_inside", self.u_positive_inside, 0.0, &mut rows);
        push(
            "quadrature_deviation",
            self.quadrature_deviation,
            0.0,
            &mut rows,
        );
        push("peak_residual", self.peak_residual, 0.0, &mut rows);
        push("junction_slope", self.junction_slope, 0.0, &mut rows);
        push("reflection_defect", self.reflection_defect, 0.0, &mut rows);
        rows
    }
}

fn simpson(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
    let mid = 0.5 * (a + b);
    let fm = f(mid);
    ((b - a) / 6.0 * (fa + 4.0 * fm + fb), mid, fm)
}

fn adaptive_step(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    whole: f64,
    mid: f64,
    fm: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let (left, lm, flm) = simpson(f, a, fa, mid, fm);
    let (right, rm, frm) = simpson(f, mid, fm, b, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adaptive_step(f, a, fa, mid, fm, left, lm, flm, 0.5 * tol, depth - 1)
        + adaptive_step(f, mid, fm, b, fb, right, rm, frm, 0.5 * tol, depth - 1)
}

/// Adaptive Simpson quadrature with Richardson correction.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let (whole, mid, fm) = simpson(f, a, fa, b, fb);
    adaptive_step(f, a, fa, b, fb, whole, mid, fm, tol, 40)
}

/// Evaluates every profile property on a midpoint grid over [0, 1.05 eps'].
pub fn property_check(p: &GluingProfile, grid_n: usize) -> PropertyReport {
    let n = grid_n.max(1000);
    let span = 1.05 * p.eps_prime;
    let density = |x: f64| p.htilde_eval(x);

    let mut report = PropertyReport {
        grid_n: n,
        linear_below_eps: 0.0,
        vanishes_beyond_cutoff: 0.0,
        slope_bound_signed: Margin::worst(),
        slope_bound_abs: Margin::worst(),
        integral_vanishes: 0.0,
        area_positivity: Margin::worst(),
        curvature_bound: Margin::worst(),
        monotone_ratio: Margin::worst(),
        convexity: Margin::worst(),
        u_min: f64::INFINITY,
        u_max: f64::NEG_INFINITY,
        u_monotone: Margin::worst(),
        u_positive_inside: f64::INFINITY,
        quadrature_deviation: 0.0,
        peak_residual: p.x0_residual(),
        junction_slope: p.htilde_prime(p.x0).abs(),
        reflection_defect: 0.0,
    };

    let mut h_quad = 0.0;
    let mut prev_x = 0.0;
    for i in 0..n {
        let x = (i as f64 + 0.5) / n as f64 * span;
        h_quad += integrate(&density, prev_x, x, 1e-10 * (x - prev_x) / span);
        prev_x = x;

        let ht = p.htilde_eval(x);
        let htp = p.htilde_prime(x);
        let h = p.h_eval(x);
        let u = p.u_eval(x);

        if x < p.eps {
            let dev = (ht - 2.0 * x).abs();
            if dev > report.linear_below_eps {
                report.linear_below_eps = dev;
            }
        }
        if x > p.eps_prime {
            let dev = ht.abs();
            if dev > report.vanishes_beyond_cutoff {
                report.vanishes_beyond_cutoff = dev;
            }
        }

        let bound_closed = p.m + (2.0 - p.m) * h / (x * x);
        report.slope_bound_signed.absorb(bound_closed - htp, x);
        report.slope_bound_abs.absorb(bound_closed - htp.abs(), x);
        report.area_positivity.absorb(2.0 * h - x * ht, x);

        let bound_quad = p.m + (2.0 - p.m) * h_quad / (x * x);
        report.curvature_bound.absorb(bound_quad - htp, x);
        report.monotone_ratio.absorb(2.0 * h_quad - x * ht, x);
        report.convexity.absorb(2.0 - htp, x);

        report.u_min = report.u_min.min(u);
        report.u_max = report.u_max.max(u);
        report.u_monotone.absorb(p.u_prime(x), x);
        let y0 = p.x0 - p.eps;
        if x > p.eps + 0.5 * y0 && x <= p.eps_prime {
            report.u_positive_inside = report.u_positive_inside.min(u);
        }

        let dev = (h_quad - h).abs();
        if dev > report.quadrature_deviation {
            report.quadrature_deviation = dev;
        }
    }

    report.integral_vanishes = integrate(&density, 0.0, p.eps_prime, 1e-11).abs();

    let mut reflection = 0.0_f64;
    for k in 1..64 {
        let t = k as f64 / 64.0 * (p.x0 - p.eps).min(p.x0);
        reflection = reflection.max((p.htilde_eval(p.x0 + t) - p.htilde_eval(p.x0 - t)).abs());
    }
    report.reflection_defect = reflection;

    report
}
