use dcma_series::{C64, TruncatedBiSeries, WPolynomial};
use dcma_solver::{
    certify, certify_at, delta_seq, delta_seq_rational, theta_seq, u_closed_form, u_fit, u_roots,
    SolverError,
};
use num::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn big(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

#[test]
fn delta_values_match_the_explicit_formula() {
    let d = delta_seq(1.0, 2.0, 1);
    assert_eq!(d[0], -3.0);
    assert_eq!(d[1], -7.0);
    let d = delta_seq(1.0, 0.0, 5);
    assert_eq!(d[5], -6.0);
}

#[test]
fn delta_satisfies_its_recurrence_exactly_in_rational_arithmetic() {
    for (c, m) in [(big(1, 1), big(2, 1)), (big(3, 7), big(5, 6)), (big(2, 9), big(0, 1))] {
        let d = delta_seq_rational(&c, &m, 40);
        for k in 1..40usize {
            let coeff = big((2 * (k + 1) + 1) as i64, (k + 1) as i64);
            let lhs = &d[k + 1] - coeff * &d[k] + &d[k - 1];
            let rhs = &c + big((k + 2) as i64, 4) * &m;
            assert_eq!(lhs, rhs, "recurrence defect at k = {k}");
        }
    }
}

#[test]
fn delta_float_mirrors_the_rational_values() {
    let df = delta_seq(3.0 / 7.0, 5.0 / 6.0, 30);
    let dr = delta_seq_rational(&big(3, 7), &big(5, 6), 30);
    for k in 0..=30usize {
        let approx = dr[k].numer().to_string().parse::<f64>().unwrap()
            / dr[k].denom().to_string().parse::<f64>().unwrap();
        assert!((df[k] - approx).abs() < 1e-9 * (1.0 + approx.abs()));
    }
}

#[test]
fn theta_rollout_matches_hand_values() {
    let t = theta_seq(1.0, 1.0, 2);
    assert_eq!(t[2], 1.5);
    assert!(theta_seq(0.0, 0.0, 10).iter().all(|x| *x == 0.0));
}

#[test]
fn slack_sequences_stay_below_the_homogeneous_majorant() {
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let init0 = rng.gen_range(0.0..2.0);
        let init1 = rng.gen_range(init0..init0 + 2.0);
        let theta = theta_seq(init0, init1, 60);
        let mut eta = vec![init0, init1];
        for k in 1..60usize {
            let coeff = 2.0 + 1.0 / ((k + 1) as f64);
            let slack = rng.gen_range(0.0..1.0);
            eta.push(coeff * eta[k] - eta[k - 1] - slack);
        }
        for k in 0..=60usize {
            assert!(
                eta[k] <= theta[k] + 1e-9 * (1.0 + theta[k].abs()),
                "seed {seed}: slack sequence escapes at k = {k}"
            );
        }
    }
}

#[test]
fn dominance_gaps_grow_through_the_recurrence_step() {
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(100 + seed);
        for k in 1..30usize {
            let a_prev = rng.gen_range(-1.0..1.0);
            let a_cur = rng.gen_range(-1.0..1.0);
            let gap_prev = rng.gen_range(0.01..1.0);
            let gap_cur = rng.gen_range(gap_prev..gap_prev + 1.0);
            let b_prev = a_prev + gap_prev;
            let b_cur = a_cur + gap_cur;
            let coeff = 2.0 + 1.0 / ((k + 1) as f64);
            let stepped = (coeff * b_cur - b_prev) - (coeff * a_cur - a_prev);
            assert!(
                stepped > b_cur - a_cur,
                "seed {seed}, k {k}: the gap must grow"
            );
        }
    }
}

#[test]
fn u_roots_and_closed_form_match_hand_values() {
    let (rp, rm) = u_roots(1);
    assert!((rp - 2.0).abs() < 1e-14);
    assert!((rm - 0.5).abs() < 1e-14);
    assert!((u_closed_form(1, 1.0, 0.0, 3) - 8.0).abs() < 1e-12);
}

#[test]
fn u_closed_form_solves_the_frozen_recurrence() {
    for seed in 0..10u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(200 + seed);
        let a = rng.gen_range(-1.0..1.0);
        let b = rng.gen_range(-1.0..1.0);
        for k0 in [1usize, 2, 5, 11] {
            let coeff = 2.0 + 1.0 / ((k0 + 1) as f64);
            let j = 10;
            let residual = u_closed_form(k0, a, b, j + 1) - coeff * u_closed_form(k0, a, b, j)
                + u_closed_form(k0, a, b, j - 1);
            assert!(residual.abs() <= 1e-12, "seed {seed}, k0 {k0}: {residual:e}");
        }
    }
}

#[test]
fn u_fit_reproduces_its_anchors() {
    let (a, b) = u_fit(3, 2.25, 4.5);
    assert!((u_closed_form(3, a, b, 2) - 2.25).abs() < 1e-12);
    assert!((u_closed_form(3, a, b, 3) - 4.5).abs() < 1e-12);
}

fn flat_solution(orders: usize) -> TruncatedBiSeries<C64> {
    let cap = 2;
    let mut phi = TruncatedBiSeries::zero(orders, orders, 1, cap);
    phi.set_coeff(0, 0, WPolynomial::monomial(1, cap, vec![1, 1], C64::new(1.0, 0.0)).unwrap())
        .unwrap();
    phi.set_coeff(2, 2, WPolynomial::constant(1, cap, C64::new(0.25, 0.0)))
        .unwrap();
    phi.check_reality();
    phi
}

/// Series with interior coefficients rho^-(k+l-2), the Taylor data of a
/// product of geometric series in z/rho and zbar/rho.
fn geometric_solution(orders: usize, rho: f64) -> TruncatedBiSeries<C64> {
    let cap = 2;
    let mut phi = TruncatedBiSeries::zero(orders, orders, 1, cap);
    phi.set_coeff(0, 0, WPolynomial::monomial(1, cap, vec![1, 1], C64::new(1.0, 0.0)).unwrap())
        .unwrap();
    for k in 1..=orders {
        for l in 1..=orders {
            let v = rho.powi(-((k + l) as i32 - 2));
            phi.set_coeff(k, l, WPolynomial::constant(1, cap, C64::new(v, 0.0)))
                .unwrap();
        }
    }
    phi.check_reality();
    phi
}

#[test]
fn flat_solution_certifies_just_above_its_single_root() {
    let phi = flat_solution(6);
    let root = 0.25f64.powf(0.25);

    let cert = certify(&phi, 1.0, 1, 1e3).unwrap();
    assert!(
        cert.r > root - 1e-9 && cert.r < 0.76,
        "expected a radius just above {root}, got {}",
        cert.r
    );
    assert!((cert.empirical_roots[2] - root).abs() < 1e-9);
    for (l, r) in cert.empirical_roots.iter().enumerate() {
        if l != 2 {
            assert_eq!(*r, 0.0, "only the l = 2 column carries a coefficient");
        }
    }

    assert!(certify_at(&phi, 1.0, 1, 0.72).is_some());
    assert!(certify_at(&phi, 1.0, 1, 5.0).is_some());
    assert!(certify_at(&phi, 1.0, 1, 0.5).is_none());
}

#[test]
fn certification_is_monotone_in_the_radius() {
    let flat = flat_solution(6);
    let geo = geometric_solution(14, 0.5);
    for phi in [&flat, &geo] {
        let cert = certify(phi, 1.0, 1, 1e3).unwrap();
        let mut r = cert.r;
        for _ in 0..40 {
            r *= 1.05;
            assert!(
                certify_at(phi, 1.0, 1, r).is_some(),
                "radius {r} above the certified one must also certify"
            );
        }
    }
}

#[test]
fn geometric_families_certify_near_the_reciprocal_radius() {
    for rho in [0.5f64, 2.0] {
        let phi = geometric_solution(20, rho);
        let cert = certify(&phi, 1.0, 1, 1e3).unwrap();
        let target = 1.0 / rho;
        assert!(
            cert.r >= target / 2.0 && cert.r <= target * 2.0,
            "rho = {rho}: certified {} against expected {target}",
            cert.r
        );
    }
}

#[test]
fn factorially_corrupted_coefficients_defeat_every_radius() {
    let cap = 2;
    let mut phi = TruncatedBiSeries::zero(100, 1, 1, cap);
    phi.set_coeff(0, 0, WPolynomial::monomial(1, cap, vec![1, 1], C64::new(1.0, 0.0)).unwrap())
        .unwrap();
    let mut factorial = 1.0f64;
    for k in 1..=100usize {
        factorial *= k as f64;
        let v = factorial * 12f64.powi(k as i32);
        phi.set_coeff(k, 1, WPolynomial::constant(1, cap, C64::new(v, 0.0)))
            .unwrap();
    }
    match certify(&phi, 1.0, 1, 1e3) {
        Err(SolverError::NoCertifyingRadius { rmax }) => assert_eq!(rmax, 1e3),
        other => panic!("expected certification failure, got {:?}", other.map(|c| c.r)),
    }
}

#[test]
fn certificate_sequences_satisfy_their_defining_identities() {
    let phi = geometric_solution(16, 0.5);
    let cert = certify(&phi, 1.0, 1, 1e3).unwrap();
    let r = cert.r;
    let ll = cert.column;
    let m = ll - 1;

    for (k, a) in cert.a_seq.iter().enumerate() {
        assert_eq!(*a, phi.coeff(k, ll).max_abs());
        let recon = cert.alpha[k] * r.powi((k + ll) as i32);
        assert!((a - recon).abs() <= 1e-9 * (1.0 + a.abs()));
    }

    let alpha_prev: Vec<f64> = (0..=phi.kmax())
        .map(|k| phi.coeff(k, m).max_abs() / r.powi((k + m) as i32))
        .collect();
    let mut acc = 0.0;
    for k in 0..=phi.kmax() {
        acc += alpha_prev[k];
        assert!((cert.beta[k] - acc).abs() <= 1e-9 * (1.0 + acc.abs()));
    }
    acc = 0.0;
    for k in 0..=phi.kmax() {
        acc += cert.beta[k];
        assert!((cert.gamma[k] - acc).abs() <= 1e-9 * (1.0 + acc.abs()));
        assert!((cert.eta[k] - (cert.gamma[k] - cert.delta[k])).abs() <= 1e-9);
        if k >= 2 {
            let second = cert.gamma[k] - 2.0 * cert.gamma[k - 1] + cert.gamma[k - 2];
            assert!(
                (second - alpha_prev[k]).abs() <= 1e-9 * (1.0 + alpha_prev[k].abs()),
                "second difference of gamma recovers the summand at k = {k}"
            );
        }
    }

    let expected_delta = delta_seq(cert.c, m as f64, phi.kmax());
    assert_eq!(cert.delta, expected_delta);
    assert_eq!(cert.n, phi.kmax() + 1);
}

#[test]
fn certify_rejects_a_bad_anchor_index() {
    let phi = flat_solution(6);
    match certify(&phi, 1.0, 0, 1e3) {
        Err(SolverError::BadCertifyAnchor { .. }) => {}
        other => panic!("expected anchor rejection, got {:?}", other.map(|c| c.r)),
    }
}
