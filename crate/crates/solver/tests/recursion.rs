use dcma_series::{inner_product_d, C64, CRat, TruncatedBiSeries, WPolynomial};
use dcma_solver::{
    assemble_metric_jet, det_cofactor, divisor_determinant, normal_form_check, positivity_scan,
    residual_check, series_det_leibniz, solve_recursion, BoundaryData, RhsJet, SolverError,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rat(p: i64, q: i64) -> CRat {
    CRat::ratio(p, q)
}

fn rmono(nw: usize, cap: usize, mono: &[u8], p: i64, q: i64) -> WPolynomial<CRat> {
    WPolynomial::monomial(nw, cap, mono.to_vec(), rat(p, q)).unwrap()
}

fn cmono(nw: usize, cap: usize, mono: &[u8], re: f64) -> WPolynomial<C64> {
    WPolynomial::monomial(nw, cap, mono.to_vec(), C64::new(re, 0.0)).unwrap()
}

fn abs_w2_rational(cap: usize) -> WPolynomial<CRat> {
    rmono(1, cap, &[1, 1], 1, 1)
}

fn flat_rhs_rational(orders: (usize, usize), cap: usize) -> RhsJet<CRat> {
    let mut rhs = RhsJet::new(orders, 1, cap);
    rhs.set(1, 1, WPolynomial::constant(1, cap, rat(1, 1))).unwrap();
    rhs
}

fn random_real_series(seed: u64, kk: usize, nw: usize, cap: usize) -> TruncatedBiSeries<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = TruncatedBiSeries::zero(kk, kk, nw, cap);
    for k in 0..=kk {
        for l in 0..=kk {
            let mut p = WPolynomial::zero(nw, cap);
            for _ in 0..4 {
                let mono: Vec<u8> = (0..2 * nw).map(|_| rng.gen_range(0..=1u8)).collect();
                if mono.iter().map(|e| *e as usize).sum::<usize>() > cap {
                    continue;
                }
                let c = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                p = p
                    .add(&WPolynomial::monomial(nw, cap, mono.clone(), c).unwrap())
                    .unwrap();
            }
            if !p.is_zero() {
                s.set_coeff(k, l, p).unwrap();
            }
        }
    }
    let sym = s.add(&s.conj()).unwrap();
    assert!(sym.clone().check_reality());
    sym
}

#[test]
fn jet_of_flat_potential_matches_hand_derivatives() {
    let mut phi = TruncatedBiSeries::zero(3, 3, 1, 2);
    phi.set_coeff(0, 0, cmono(1, 2, &[1, 1], 1.0)).unwrap();
    phi.set_coeff(2, 2, WPolynomial::constant(1, 2, C64::new(0.25, 0.0)))
        .unwrap();
    phi.check_reality();

    let jet = assemble_metric_jet(&phi).unwrap();
    assert_eq!(jet.n(), 2);
    jet.hermitian_check().unwrap();

    let tangential = jet.entry(0, 0);
    assert_eq!(tangential.coeff(0, 0).value_at_origin(), C64::new(1.0, 0.0));
    assert_eq!(tangential.coeffs().count(), 1);

    assert!(jet.entry(0, 1).is_zero());
    assert!(jet.entry(1, 0).is_zero());

    let normal = jet.entry(1, 1);
    assert_eq!(normal.coeff(1, 1).value_at_origin(), C64::new(1.0, 0.0));
    assert_eq!(normal.coeffs().count(), 1);
}

#[test]
fn jet_rejects_non_real_potential() {
    let mut phi = TruncatedBiSeries::zero(2, 2, 1, 2);
    phi.set_coeff(1, 0, WPolynomial::constant(1, 2, C64::new(0.0, 1.0)))
        .unwrap();
    match assemble_metric_jet(&phi) {
        Err(SolverError::NonRealPotential(_)) => {}
        other => panic!("expected reality rejection, got {other:?}"),
    }
}

#[test]
fn cofactor_determinant_matches_leibniz_on_random_jets() {
    for seed in 0..5u64 {
        for nw in [1usize, 2] {
            let phi = random_real_series(seed * 10 + nw as u64, 3, nw, 3);
            let jet = assemble_metric_jet(&phi).unwrap();
            let n = jet.n();
            let shape = jet.shape();
            let mat: Vec<Vec<TruncatedBiSeries<C64>>> = (0..n)
                .map(|i| (0..n).map(|j| jet.entry(i, j).clone()).collect())
                .collect();
            let dense = series_det_leibniz(&mat, shape).unwrap();
            let cof = det_cofactor(&jet).unwrap();
            let diff = dense.sub(&cof).unwrap().max_abs();
            assert!(
                diff < 1e-10,
                "cofactor and permutation determinants disagree by {diff} (seed {seed}, nw {nw})"
            );
        }
    }
}

#[test]
fn flat_model_interior_coefficient_is_exact_in_rational_arithmetic() {
    let cap = 4;
    let bd = BoundaryData::restriction_only(abs_w2_rational(cap), 6, 6);
    let rhs = flat_rhs_rational((5, 5), cap);
    let phi = solve_recursion(&bd, &rhs, (6, 6)).unwrap();

    assert_eq!(
        phi.coeff(2, 2),
        WPolynomial::constant(1, cap, rat(1, 4)),
        "the single interior coefficient is exactly one quarter"
    );
    for ((k, l), _) in phi.coeffs() {
        let interior = *k >= 1 && *l >= 1;
        if interior {
            assert_eq!((*k, *l), (2, 2), "no other interior coefficient appears");
        }
    }
    assert!(phi.is_real());
    assert_eq!(residual_check(&phi, &rhs).unwrap(), 0.0);
}

#[test]
fn flat_model_float_residual_is_below_tolerance() {
    let cap = 4;
    let b00 = cmono(1, cap, &[1, 1], 1.0);
    let bd = BoundaryData::restriction_only(b00, 6, 6);
    let mut rhs = RhsJet::new((5, 5), 1, cap);
    rhs.set(1, 1, WPolynomial::constant(1, cap, C64::new(1.0, 0.0)))
        .unwrap();
    let phi = solve_recursion(&bd, &rhs, (6, 6)).unwrap();
    assert!((phi.coeff(2, 2).value_at_origin() - C64::new(0.25, 0.0)).norm() < 1e-15);
    assert!(residual_check(&phi, &rhs).unwrap() < 1e-12);
}

fn recomposition_star() -> TruncatedBiSeries<CRat> {
    let cap = 4;
    let mut phi = TruncatedBiSeries::zero(5, 5, 1, cap);
    let b00 = abs_w2_rational(cap)
        .add(&rmono(1, cap, &[2, 2], 1, 8))
        .unwrap();
    phi.set_coeff(0, 0, b00).unwrap();
    phi.set_coeff(1, 0, rmono(1, cap, &[0, 2], 1, 6)).unwrap();
    phi.set_coeff(0, 1, rmono(1, cap, &[2, 0], 1, 6)).unwrap();
    phi.set_coeff(
        1,
        1,
        WPolynomial::constant(1, cap, rat(1, 3))
            .add(&rmono(1, cap, &[1, 1], 1, 5))
            .unwrap(),
    )
    .unwrap();
    phi.set_coeff(2, 1, rmono(1, cap, &[1, 0], 1, 7)).unwrap();
    phi.set_coeff(1, 2, rmono(1, cap, &[0, 1], 1, 7)).unwrap();
    phi.set_coeff(2, 2, WPolynomial::constant(1, cap, rat(1, 4)))
        .unwrap();
    phi.set_coeff(3, 2, rmono(1, cap, &[0, 1], 1, 9)).unwrap();
    phi.set_coeff(2, 3, rmono(1, cap, &[1, 0], 1, 9)).unwrap();
    assert!(phi.check_reality());
    phi
}

#[test]
fn recomposition_recovers_a_prescribed_interior_exactly() {
    let star = recomposition_star();
    let jet = assemble_metric_jet(&star).unwrap();
    let det = det_cofactor(&jet).unwrap();
    let rhs = RhsJet::from_series(&det);

    let bd = BoundaryData {
        b00: star.coeff(0, 0),
        bk0: (1..=5).map(|k| star.coeff(k, 0)).collect(),
        b0l: (1..=5).map(|l| star.coeff(0, l)).collect(),
    };
    let solved = solve_recursion(&bd, &rhs, (5, 5)).unwrap();
    assert_eq!(solved, star, "interior coefficients are pinned uniquely");
    assert_eq!(residual_check(&solved, &rhs).unwrap(), 0.0);
}

#[test]
fn recursion_is_deterministic() {
    let star = recomposition_star();
    let det = det_cofactor(&assemble_metric_jet(&star).unwrap()).unwrap();
    let rhs = RhsJet::from_series(&det);
    let bd = BoundaryData {
        b00: star.coeff(0, 0),
        bk0: (1..=5).map(|k| star.coeff(k, 0)).collect(),
        b0l: (1..=5).map(|l| star.coeff(0, l)).collect(),
    };
    let a = solve_recursion(&bd, &rhs, (5, 5)).unwrap();
    let b = solve_recursion(&bd, &rhs, (5, 5)).unwrap();
    assert_eq!(a, b);
}

/// Independent rollout of the closed-form coefficient recursion in the
/// regime where the tangential block stays identically equal to the
/// divisor metric: boundary slices at most linear in w, constant
/// right-hand side slices, divisor metric |w|^2. Expanding the block
/// determinant along the normal row and column and collecting the (k,l)
/// coefficient gives
///
///   B_{k+1,l+1} = rhs_{k,l} / ((k+1)(l+1))
///     + sum_{r+p=k, s+q=l} (r+1)(q+1)/((k+1)(l+1))
///         g0^{ij} (d B_{p,q+1} / dw_i) (d B_{r+1,s} / dwbar_j),
///
/// the correction entering with the sign the cofactor identity forces.
/// The defect-correction solver must reproduce this rollout exactly.
#[test]
fn defect_correction_matches_closed_form_rollout() {
    let cap = 3;
    let kk = 3usize;
    let b00 = abs_w2_rational(cap);
    let bk0: Vec<WPolynomial<CRat>> = vec![
        rmono(1, cap, &[1, 0], 1, 3)
            .add(&rmono(1, cap, &[0, 1], 1, 4))
            .unwrap(),
        WPolynomial::constant(1, cap, rat(1, 5)).add(&rmono(1, cap, &[0, 1], -1, 6)).unwrap(),
        rmono(1, cap, &[1, 0], 2, 7),
    ];
    let bd = BoundaryData::symmetrize(b00.clone(), bk0);

    let mut rhs = RhsJet::new((kk - 1, kk - 1), 1, cap);
    let rhs_vals = [
        [(0i64, 1i64), (1, 2), (-1, 3)],
        [(1, 2), (2, 3), (1, 4)],
        [(-1, 3), (1, 4), (1, 6)],
    ];
    for k in 0..kk {
        for l in 0..kk {
            let (p, q) = rhs_vals[k][l];
            if p != 0 {
                rhs.set(k, l, WPolynomial::constant(1, cap, rat(p, q))).unwrap();
            }
        }
    }

    let solved = solve_recursion(&bd, &rhs, (kk, kk)).unwrap();

    let identity = vec![vec![WPolynomial::constant(1, cap, rat(1, 1))]];
    let mut table: Vec<Vec<WPolynomial<CRat>>> =
        vec![vec![WPolynomial::zero(1, cap); kk + 1]; kk + 1];
    table[0][0] = bd.b00.clone();
    for k in 1..=kk {
        table[k][0] = bd.bk0[k - 1].clone();
        table[0][k] = bd.b0l[k - 1].clone();
    }
    for s in 0..=2 * (kk - 1) {
        for k in 0..kk {
            if s < k {
                break;
            }
            let l = s - k;
            if l >= kk {
                continue;
            }
            let lead = rat(1, ((k + 1) * (l + 1)) as i64);
            let mut b_next = rhs.get(k, l).scale(&lead);
            for r in 0..=k {
                let p = k - r;
                for s2 in 0..=l {
                    let q = l - s2;
                    let pairing =
                        inner_product_d(&table[r + 1][s2], &table[p][q + 1], &identity).unwrap();
                    let weight = rat((((r + 1) * (q + 1)) as i64), (((k + 1) * (l + 1)) as i64));
                    b_next = b_next.add(&pairing.scale(&weight)).unwrap();
                }
            }
            table[k + 1][l + 1] = b_next;
        }
    }

    for k in 1..=kk {
        for l in 1..=kk {
            assert_eq!(
                solved.coeff(k, l),
                table[k][l],
                "closed-form rollout disagrees at ({k}, {l})"
            );
        }
    }
}

#[test]
fn degenerate_divisor_metric_is_rejected() {
    let cap = 3;
    let b00 = rmono(1, cap, &[1, 0], 1, 1)
        .add(&rmono(1, cap, &[0, 1], 1, 1))
        .unwrap();
    let bd = BoundaryData::restriction_only(b00, 2, 2);
    let rhs = RhsJet::new((1, 1), 1, cap);
    match solve_recursion(&bd, &rhs, (2, 2)) {
        Err(SolverError::DegenerateDivisorMetric { .. }) => {}
        other => panic!("expected degeneracy rejection, got {other:?}"),
    }
}

#[test]
fn missing_rhs_orders_are_rejected() {
    let cap = 3;
    let bd = BoundaryData::restriction_only(abs_w2_rational(cap), 6, 6);
    let rhs = flat_rhs_rational((2, 2), cap);
    match solve_recursion(&bd, &rhs, (6, 6)) {
        Err(SolverError::InsufficientRhsOrders { supplied, required }) => {
            assert_eq!(supplied, (2, 2));
            assert_eq!(required, (5, 5));
        }
        other => panic!("expected order rejection, got {other:?}"),
    }
}

#[test]
fn divisor_normal_form_survives_the_recursion() {
    let cap = 4;
    let kk = 4usize;
    let b00 = abs_w2_rational(cap);
    let b10 = rmono(1, cap, &[2, 0], 1, 6)
        .add(&rmono(1, cap, &[1, 1], 1, 5))
        .unwrap()
        .add(&rmono(1, cap, &[3, 1], 1, 11))
        .unwrap();
    let mut bk0 = vec![WPolynomial::zero(1, cap); kk];
    bk0[0] = b10;
    bk0[1] = rmono(1, cap, &[2, 0], -1, 9);
    let bd = BoundaryData::symmetrize(b00, bk0);

    let mut rhs = RhsJet::new((kk - 1, kk - 1), 1, cap);
    for k in 0..kk {
        for l in 0..kk {
            if k + l == 0 {
                continue;
            }
            let num = 1 + ((k * 3 + l * 5) % 4) as i64;
            rhs.set(
                k,
                l,
                WPolynomial::constant(1, cap, rat(num, (k + l + 2) as i64)),
            )
            .unwrap();
        }
    }

    let phi = solve_recursion(&bd, &rhs, (kk, kk)).unwrap();
    let report = normal_form_check(&phi).unwrap();
    let by_name = |needle: &str| -> f64 {
        report
            .conditions
            .iter()
            .filter(|c| c.name.contains(needle))
            .map(|c| c.magnitude)
            .fold(0.0, f64::max)
    };

    assert_eq!(by_name("B_(1,0)"), 0.0);
    assert_eq!(by_name("B_(0,1)"), 0.0);
    assert_eq!(by_name("B_(1,1) at 0"), 0.0);
    assert_eq!(by_name("dw_0 B_(1,1)"), 0.0);
    assert_eq!(by_name("dwbar_0 B_(1,1)"), 0.0);
    assert!(!phi.coeff(1, 1).is_zero(), "the slice itself need not vanish");
}

#[test]
fn normal_form_flags_offending_boundary_slice() {
    let cap = 2;
    let mut phi = TruncatedBiSeries::zero(2, 2, 1, cap);
    phi.set_coeff(1, 0, rmono(1, cap, &[0, 1], 1, 3)).unwrap();
    phi.set_coeff(0, 1, rmono(1, cap, &[1, 0], 1, 3)).unwrap();
    let report = normal_form_check(&phi).unwrap();
    assert!((report.max_violation() - 1.0 / 3.0).abs() < 1e-15);
    assert!(!report.satisfied(1e-12));
}

#[test]
fn positivity_scan_sees_divisor_degeneracy_and_tangential_positivity() {
    let mut phi = TruncatedBiSeries::zero(3, 3, 1, 2);
    phi.set_coeff(0, 0, cmono(1, 2, &[1, 1], 1.0)).unwrap();
    phi.set_coeff(2, 2, WPolynomial::constant(1, 2, C64::new(0.25, 0.0)))
        .unwrap();
    phi.check_reality();
    let jet = assemble_metric_jet(&phi).unwrap();
    let w_samples = vec![vec![C64::new(0.3, 0.1)]];

    let with_divisor = positivity_scan(&jet, &[0.0, 0.1, 0.5], &w_samples);
    assert!(with_divisor.min_full.abs() < 1e-12);
    assert!((with_divisor.min_tangential - 1.0).abs() < 1e-12);

    let off_divisor = positivity_scan(&jet, &[0.1, 0.5], &w_samples);
    assert!((off_divisor.min_full - 0.01).abs() < 1e-9);
}

#[test]
fn divisor_determinant_reads_the_tangential_hessian() {
    let cap = 4;
    let b00 = abs_w2_rational(cap)
        .add(&rmono(1, cap, &[2, 2], 1, 4))
        .unwrap();
    let q = divisor_determinant(&b00).unwrap();
    assert_eq!(q.value_at_origin(), rat(1, 1));
    assert_eq!(q.coeff(&[1, 1]), rat(1, 1));
}
