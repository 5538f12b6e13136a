use num_complex::Complex;
use rayon::prelude::*;

use crate::error::GluingError;
use crate::profile::GluingProfile;

type C64 = Complex<f64>;

const LAMBDA_CAP: f64 = 1_048_576.0;

#[derive(Debug, Clone)]
pub struct KahlerGlueReport {
    pub lambda: f64,
    pub lambda_star: Option<f64>,
    pub min_tangential: f64,
    pub min_full_off_divisor: f64,
    pub order_estimate: f64,
    pub samples: usize,
}

fn eval4(phi: &dyn Fn(C64, C64) -> f64, x: &[f64; 4]) -> f64 {
    phi(C64::new(x[0], x[1]), C64::new(x[2], x[3]))
}

/// Complex 2x2 Hessian d^2 phi / du_a dubar_b by central differences, with
/// coordinate steps (hw, hw, hz, hz).
fn complex_hessian(
    phi: &dyn Fn(C64, C64) -> f64,
    at: &[f64; 4],
    hw: f64,
    hz: f64,
) -> [[C64; 2]; 2] {
    let step = [hw, hw, hz, hz];
    let f0 = eval4(phi, at);
    let mut second = [[0.0_f64; 4]; 4];
    for p in 0..4 {
        let mut xp = *at;
        xp[p] += step[p];
        let mut xm = *at;
        xm[p] -= step[p];
        second[p][p] = (eval4(phi, &xp) - 2.0 * f0 + eval4(phi, &xm)) / (step[p] * step[p]);
    }
    for p in 0..4 {
        for q in (p + 1)..4 {
            let mut xpp = *at;
            xpp[p] += step[p];
            xpp[q] += step[q];
            let mut xpm = *at;
            xpm[p] += step[p];
            xpm[q] -= step[q];
            let mut xmp = *at;
            xmp[p] -= step[p];
            xmp[q] += step[q];
            let mut xmm = *at;
            xmm[p] -= step[p];
            xmm[q] -= step[q];
            let mixed = (eval4(phi, &xpp) - eval4(phi, &xpm) - eval4(phi, &xmp)
                + eval4(phi, &xmm))
                / (4.0 * step[p] * step[q]);
            second[p][q] = mixed;
            second[q][p] = mixed;
        }
    }
    let mut h = [[C64::new(0.0, 0.0); 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            let (xa, ya) = (2 * a, 2 * a + 1);
            let (xb, yb) = (2 * b, 2 * b + 1);
            let re = 0.25 * (second[xa][xb] + second[ya][yb]);
            let im = 0.25 * (second[xa][yb] - second[ya][xb]);
            h[a][b] = C64::new(re, im);
        }
    }
    h
}

fn min_eigenvalue(h: &[[C64; 2]; 2]) -> f64 {
    let d0 = h[0][0].re;
    let d1 = h[1][1].re;
    let off = h[0][1].norm_sqr();
    0.5 * (d0 + d1) - (0.25 * (d0 - d1) * (d0 - d1) + off).sqrt()
}

fn w_samples() -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0)];
    for k in 0..5 {
        let phase = std::f64::consts::TAU * k as f64 / 5.0;
        out.push(C64::from_polar(0.07, phase));
    }
    out
}

struct PositivityScan {
    min_tangential: f64,
    min_full: f64,
    samples: usize,
}

fn scan_positivity(
    phi0: &(dyn Fn(C64, C64) -> f64 + Sync),
    phi1: &(dyn Fn(C64, C64) -> f64 + Sync),
    p: &GluingProfile,
    lambda: f64,
) -> PositivityScan {
    let blended = move |w: C64, z: C64| {
        let beta = p.alpha_eval(lambda * z.norm());
        let base = phi0(w, z);
        base + beta * (phi1(w, z) - base)
    };

    let n_radii = 28;
    let t_lo = p.eps / (8.0 * lambda);
    let t_hi = 1.05 * p.eps_prime / lambda;
    let ratio = (t_hi / t_lo).powf(1.0 / (n_radii - 1) as f64);
    let mut radii = vec![0.0];
    for k in 0..n_radii {
        radii.push(t_lo * ratio.powi(k as i32));
    }
    let divisor_gap = t_lo * 0.999;

    let n_phases = 12;
    let ws = w_samples();
    let hz_cap = 0.02 * (p.eps_prime - p.eps) / lambda;

    let per_radius: Vec<(f64, f64, usize)> = radii
        .par_iter()
        .map(|&t| {
            let mut tang = f64::INFINITY;
            let mut full = f64::INFINITY;
            let mut count = 0;
            let hz = (1e-3 * (t + 1.0)).min(hz_cap).max(1e-9);
            for jp in 0..n_phases {
                let phase = std::f64::consts::TAU * jp as f64 / n_phases as f64;
                let z = C64::from_polar(t, phase);
                for w in &ws {
                    let at = [w.re, w.im, z.re, z.im];
                    let hw = 1e-4 * (1.0 + w.norm());
                    let h = complex_hessian(&blended, &at, hw, hz);
                    tang = tang.min(h[0][0].re);
                    if t > divisor_gap {
                        full = full.min(min_eigenvalue(&h));
                    }
                    count += 1;
                }
                if t == 0.0 {
                    break;
                }
            }
            (tang, full, count)
        })
        .collect();

    let mut scan = PositivityScan {
        min_tangential: f64::INFINITY,
        min_full: f64::INFINITY,
        samples: 0,
    };
    for (tang, full, count) in per_radius {
        scan.min_tangential = scan.min_tangential.min(tang);
        scan.min_full = scan.min_full.min(full);
        scan.samples += count;
    }
    scan
}

/// Checks that the difference of the two potentials vanishes to second order
/// along the divisor, then scans the complex Hessian of the blended potential
/// over the transition annulus, doubling lambda until both the tangential
/// entry and the full matrix turn positive.
pub fn glue_kahler_check(
    phi0: &(dyn Fn(C64, C64) -> f64 + Sync),
    phi1: &(dyn Fn(C64, C64) -> f64 + Sync),
    p: &GluingProfile,
) -> Result<KahlerGlueReport, GluingError> {
    p.validate()?;
    let lambda0 = p.lambda.max(1.0);

    let probe = |t: f64| -> f64 {
        let mut worst = 0.0_f64;
        for jp in 0..8 {
            let phase = std::f64::consts::TAU * jp as f64 / 8.0;
            let z = C64::from_polar(t, phase);
            for w in w_samples() {
                worst = worst.max((phi1(w, z) - phi0(w, z)).abs());
            }
        }
        worst
    };
    let t1 = 0.3 * p.eps / lambda0;
    let m1 = probe(t1);
    let m2 = probe(t1 / 8.0);
    let order_estimate = if m1 <= 1e-13 {
        f64::INFINITY
    } else {
        (m1 / m2.max(1e-300)).ln() / 8f64.ln()
    };
    if order_estimate < 1.9 {
        return Err(GluingError::VanishingOrder(order_estimate));
    }

    let base = scan_positivity(phi0, phi1, p, lambda0);

    let mut lambda_star = None;
    let mut lambda = lambda0;
    let mut star_scan = None;
    while lambda <= LAMBDA_CAP {
        let s = scan_positivity(phi0, phi1, p, lambda);
        if s.min_tangential > 0.0 && s.min_full > 0.0 {
            lambda_star = Some(lambda);
            star_scan = Some(s);
            break;
        }
        lambda *= 2.0;
    }

    let reported = star_scan.unwrap_or(base);
    Ok(KahlerGlueReport {
        lambda: lambda0,
        lambda_star,
        min_tangential: reported.min_tangential,
        min_full_off_divisor: reported.min_full,
        order_estimate,
        samples: reported.samples,
    })
}
