use std::sync::OnceLock;

use approx::{assert_abs_diff_eq, assert_relative_eq};
use dcma_gluing::{
    find_parameters, glue_kahler_check, glue_subharmonic, transition_laplacian,
    transition_prediction, GluingError, GluingProfile, PolarField, SearchConfig,
};
use num_complex::Complex;

type C64 = Complex<f64>;

fn model() -> &'static GluingProfile {
    static CELL: OnceLock<GluingProfile> = OnceLock::new();
    CELL.get_or_init(|| find_parameters(1.0, &SearchConfig::default()).unwrap())
}

fn quadratic(nr: usize, ntheta: usize, r_max: f64, scale: f64) -> PolarField {
    PolarField::from_fn(nr, ntheta, r_max, |r, _| scale * r * r)
}

#[test]
fn blending_equal_fields_returns_the_field() {
    let p = model();
    let r_max = 1.2 * p.eps_prime / 3.0;
    let f = quadratic(128, 64, r_max, 1.0);
    let scan = transition_laplacian(&f, &f, p, None, 3.0);
    for (blended, original) in scan.t_lambda.values.iter().zip(f.values.iter()) {
        assert!(
            (blended - original).abs() <= 1e-12 * (1.0 + original.abs()),
            "blend moved {} to {}",
            original,
            blended
        );
    }
    assert!(scan.annulus_rings >= 6);
    assert_relative_eq!(scan.annulus_min, 4.0, epsilon = 1e-9);
    assert_relative_eq!(scan.global_min, 4.0, epsilon = 1e-9);
}

#[test]
fn threshold_search_finds_a_positive_annulus() {
    let p = model();
    let r_max = 1.25 * p.eps_prime;
    let f = quadratic(512, 256, r_max, 1.0);
    let g = quadratic(512, 256, r_max, 2.0);
    let report = glue_subharmonic(&f, &g, p, None, 1.0).unwrap();
    assert_relative_eq!(report.hessian_floor, 2.0, epsilon = 1e-12);
    assert_relative_eq!(report.hypothesis_margin, 3.0, epsilon = 1e-12);
    let star = report.lambda_star.expect("threshold not found");
    for lambda in [star, 2.0 * star] {
        let probe = transition_laplacian(&f, &g, p, None, lambda);
        assert!(probe.annulus_rings >= 6);
        assert!(
            probe.annulus_min > 0.0,
            "annulus minimum {} at lambda {}",
            probe.annulus_min,
            lambda
        );
    }
}

#[test]
fn coarse_grid_leaves_the_threshold_unreached() {
    let p = model();
    let r_max = 1.25 * p.eps_prime;
    let f = quadratic(6, 16, r_max, 1.0);
    let g = quadratic(6, 16, r_max, 2.0);
    let report = glue_subharmonic(&f, &g, p, None, 1.0).unwrap();
    assert!(report.lambda_star.is_none());
    assert!(report.scan.annulus_rings < 6);
}

#[test]
fn mismatched_grids_are_rejected() {
    let p = model();
    let f = quadratic(32, 16, 8.0, 1.0);
    let g = quadratic(64, 16, 8.0, 2.0);
    match glue_subharmonic(&f, &g, p, None, 1.0) {
        Err(GluingError::GridPrecondition(msg)) => assert!(msg.contains("grids disagree")),
        other => panic!("expected grid rejection, got {:?}", other.map(|r| r.lambda_star)),
    }
}

#[test]
fn center_mismatch_is_rejected() {
    let p = model();
    let f = quadratic(64, 32, 8.0, 1.0);
    let g = PolarField::from_fn(64, 32, 8.0, |r, _| r * r + 0.5);
    match glue_subharmonic(&f, &g, p, None, 1.0) {
        Err(GluingError::GridPrecondition(msg)) => {
            assert!(msg.contains("origin"), "message was {}", msg)
        }
        other => panic!("expected center rejection, got {:?}", other.map(|r| r.lambda_star)),
    }
}

#[test]
fn gradient_mismatch_is_rejected() {
    let p = model();
    let f = quadratic(64, 32, 8.0, 1.0);
    let g = PolarField::from_fn(64, 32, 8.0, |r, theta| 2.0 * r * r + 0.5 * r * theta.cos());
    match glue_subharmonic(&f, &g, p, None, 1.0) {
        Err(GluingError::GridPrecondition(msg)) => {
            assert!(msg.contains("gradients"), "message was {}", msg)
        }
        other => panic!("expected gradient rejection, got {:?}", other.map(|r| r.lambda_star)),
    }
}

#[test]
fn shallow_difference_is_rejected() {
    let p = model();
    let f = quadratic(64, 32, 8.0, 1.0);
    let g = quadratic(64, 32, 8.0, 1.05);
    match glue_subharmonic(&f, &g, p, None, 1.0) {
        Err(GluingError::GridPrecondition(msg)) => {
            assert!(msg.contains("floor"), "message was {}", msg)
        }
        other => panic!("expected floor rejection, got {:?}", other.map(|r| r.lambda_star)),
    }
}

#[test]
fn superharmonic_input_is_rejected() {
    let p = model();
    let f = quadratic(64, 32, 8.0, -1.0);
    let g = quadratic(64, 32, 8.0, 2.0);
    match glue_subharmonic(&f, &g, p, None, 1.0) {
        Err(GluingError::GridPrecondition(msg)) => {
            assert!(msg.contains("subharmonic"), "message was {}", msg)
        }
        other => panic!("expected subharmonic rejection, got {:?}", other.map(|r| r.lambda_star)),
    }
}

fn expansion_error(p: &GluingProfile, lambda: f64) -> f64 {
    let nr = 512;
    let r_max = 1.3 * p.eps_prime / lambda;
    let f = PolarField::from_fn(nr, 16, r_max, |r, _| r * r);
    let g = PolarField::from_fn(nr, 16, r_max, |r, _| 2.0 * r * r + r * r * r);
    let scan = transition_laplacian(&f, &g, p, None, lambda);
    let dr = f.dr();
    let mut worst = 0.0_f64;
    for i in 1..nr {
        let big_r = lambda * i as f64 * dr;
        if (big_r - 2.0 * p.x0).abs() < 0.4 || (big_r - p.eps_prime).abs() < 0.2 {
            continue;
        }
        let predicted = transition_prediction(p, 1.0, 0.0, 4.0, big_r);
        let got = scan.t_lambda.stencil_laplacian(i, 0);
        worst = worst.max((got - predicted).abs());
    }
    worst
}

#[test]
fn scaled_blend_approaches_the_radial_expansion() {
    let p = model();
    let coarse = expansion_error(p, 64.0);
    let fine = expansion_error(p, 1024.0);
    let ratio = (fine * 1024.0) / (coarse * 64.0);
    assert!(
        (0.5..=2.0).contains(&ratio),
        "residual is not inverse in the scale, ratio {}",
        ratio
    );
}

#[test]
fn angular_coefficient_enters_the_expansion() {
    let p = model();
    let lambda = 256.0;
    let nr = 512;
    let ntheta = 64;
    let r_max = 1.3 * p.eps_prime / lambda;
    let f = PolarField::from_fn(nr, ntheta, r_max, |r, _| r * r);
    let g = PolarField::from_fn(nr, ntheta, r_max, |r, theta| {
        2.0 * r * r + 0.2 * r * r * (2.0 * theta).cos()
    });
    let scan = transition_laplacian(&f, &g, p, None, lambda);
    let dr = f.dr();
    let dtheta = f.dtheta();
    let mut worst = 0.0_f64;
    for i in 1..nr {
        let big_r = lambda * i as f64 * dr;
        if (big_r - 2.0 * p.x0).abs() < 0.4 || (big_r - p.eps_prime).abs() < 0.2 {
            continue;
        }
        for j in 0..ntheta {
            let theta = j as f64 * dtheta;
            let c = 1.0 + 0.2 * (2.0 * theta).cos();
            let c_second = -0.8 * (2.0 * theta).cos();
            let predicted = transition_prediction(p, c, c_second, 4.0, big_r);
            let got = scan.t_lambda.stencil_laplacian(i, j);
            worst = worst.max((got - predicted).abs());
        }
    }
}

#[test]
fn trivial_pair_keeps_the_background_metric() {
    let p = model();
    let phi = |w: C64, z: C64| w.norm_sqr() + z.norm_sqr();
    let report = glue_kahler_check(&phi, &phi, p).unwrap();
    assert_eq!(report.lambda_star, Some(1.0));
    assert!(report.order_estimate.is_infinite());
    assert_relative_eq!(report.min_tangential, 1.0, epsilon = 1e-4);
    assert_relative_eq!(report.min_full_off_divisor, 1.0, epsilon = 1e-4);
    assert!(report.samples > 0);
}

#[test]
fn quartic_model_pair_turns_positive() {
    let p = model();
    let phi0 = |w: C64, z: C64| w.norm_sqr() + z.norm_sqr();
    let phi1 = |w: C64, z: C64| w.norm_sqr() + z.norm_sqr() + 0.25 * z.norm_sqr() * z.norm_sqr();
    let report = glue_kahler_check(&phi0, &phi1, p).unwrap();
    assert_abs_diff_eq!(report.order_estimate, 4.0, epsilon = 1e-6);
    let star = report.lambda_star.expect("no positive scale found");
    assert!(star <= 1024.0);
    assert!(report.min_tangential > 0.0);
    assert!(report.min_full_off_divisor > 0.0);
    assert_relative_eq!(report.min_tangential, 1.0, epsilon = 1e-4);
}

#[test]
fn linear_term_in_the_difference_is_rejected() {
    let p = model();
    let phi0 = |w: C64, z: C64| w.norm_sqr() + z.norm_sqr();
    let phi1 = |w: C64, z: C64| w.norm_sqr() + z.norm_sqr() + 0.1 * z.re;
    match glue_kahler_check(&phi0, &phi1, p) {
        Err(GluingError::VanishingOrder(order)) => {
            assert_abs_diff_eq!(order, 1.0, epsilon = 0.05)
        }
        other => panic!("expected rejection, got {:?}", other.map(|r| r.lambda_star)),
    }
}
