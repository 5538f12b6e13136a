//! Order-by-order solution of the degenerate Monge-Ampere coefficient
//! recursion.
//!
//! The potential is sought as Phi = sum B_{k,l} z^k zbar^l with the
//! divisor data B_{0,0}, B_{k,0}, B_{0,l} prescribed. Matching the series
//! of det(g_jet(Phi)) against a prescribed right-hand side determines the
//! interior coefficients: at the (k,l) slot of the determinant the single
//! new unknown B_{k+1,l+1} enters linearly, multiplied by
//! (k+1)(l+1) Q(w) where Q is the z-constant slice of the tangential
//! Hessian determinant of B_{0,0}. Everything else at that slot is
//! already determined by earlier diagonals, so sweeping diagonals
//! k+l = 0, 1, 2, ... and correcting each slot by the current defect
//! solves the system exactly, one pass per diagonal.

use std::collections::BTreeMap;

use dcma_series::{C64, Coeff, TruncatedBiSeries, WPolynomial};
use nalgebra::{Complex, DMatrix};

use crate::error::SolverError;
use crate::jet::{assemble_jet_unchecked, det_cofactor, poly_matrix_det, tangential_hessian, MetricJet};

const DEGENERACY_TOL: f64 = 1e-12;

/// Divisor-side data of the potential: the restriction B_{0,0} and the
/// pure z and zbar slices.
#[derive(Debug, Clone)]
pub struct BoundaryData<T: Coeff> {
    /// Restriction of the potential to the divisor.
    pub b00: WPolynomial<T>,
    /// B_{k,0} for k = 1, 2, ... in order.
    pub bk0: Vec<WPolynomial<T>>,
    /// B_{0,l} for l = 1, 2, ... in order.
    pub b0l: Vec<WPolynomial<T>>,
}

impl<T: Coeff> BoundaryData<T> {
    /// Data with vanishing pure slices, the common normalized situation.
    pub fn restriction_only(b00: WPolynomial<T>, kmax: usize, lmax: usize) -> Self {
        let zero = WPolynomial::zero(b00.nw(), b00.degree_cap());
        BoundaryData {
            b00,
            bk0: vec![zero.clone(); kmax],
            b0l: vec![zero; lmax],
        }
    }

    /// Fills the zbar slices as conjugates of the z slices, which is what
    /// reality of the potential requires.
    pub fn symmetrize(b00: WPolynomial<T>, bk0: Vec<WPolynomial<T>>) -> Self {
        let b0l = bk0.iter().map(|b| b.conj()).collect();
        BoundaryData { b00, bk0, b0l }
    }
}

/// Prescribed determinant series, the right-hand side of the recursion.
/// Entries absent from the map are zero.
#[derive(Debug, Clone)]
pub struct RhsJet<T: Coeff> {
    orders: (usize, usize),
    nw: usize,
    degree_cap: usize,
    coeffs: BTreeMap<(usize, usize), WPolynomial<T>>,
}

impl<T: Coeff> RhsJet<T> {
    pub fn new(orders: (usize, usize), nw: usize, degree_cap: usize) -> Self {
        RhsJet {
            orders,
            nw,
            degree_cap,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn orders(&self) -> (usize, usize) {
        self.orders
    }

    pub fn nw(&self) -> usize {
        self.nw
    }

    pub fn degree_cap(&self) -> usize {
        self.degree_cap
    }

    pub fn set(&mut self, k: usize, l: usize, value: WPolynomial<T>) -> Result<(), SolverError> {
        if k > self.orders.0 || l > self.orders.1 {
            return Err(SolverError::InsufficientRhsOrders {
                supplied: self.orders,
                required: (k, l),
            });
        }
        if value.nw() != self.nw || value.degree_cap() != self.degree_cap {
            return Err(SolverError::BoundaryShape {
                expected: (self.nw, self.degree_cap),
                got: (value.nw(), value.degree_cap()),
            });
        }
        if value.is_zero() {
            self.coeffs.remove(&(k, l));
        } else {
            self.coeffs.insert((k, l), value);
        }
        Ok(())
    }

    pub fn get(&self, k: usize, l: usize) -> WPolynomial<T> {
        self.coeffs
            .get(&(k, l))
            .cloned()
            .unwrap_or_else(|| WPolynomial::zero(self.nw, self.degree_cap))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &WPolynomial<T>)> {
        self.coeffs.iter()
    }

    /// Reads the right-hand side off an existing series, keeping its
    /// guaranteed window as the declared orders.
    pub fn from_series(s: &TruncatedBiSeries<T>) -> Self {
        let mut rhs = RhsJet::new((s.kmax(), s.lmax()), s.nw(), s.degree_cap());
        for ((k, l), b) in s.coeffs() {
            rhs.coeffs.insert((*k, *l), b.clone());
        }
        rhs
    }
}

/// Z-constant slice of the tangential Hessian determinant of the divisor
/// restriction, the quantity that must stay invertible for the recursion
/// to proceed.
pub fn divisor_determinant<T: Coeff>(b00: &WPolynomial<T>) -> Result<WPolynomial<T>, SolverError> {
    let h = tangential_hessian(b00)?;
    Ok(poly_matrix_det(&h, b00.nw(), b00.degree_cap())?)
}

/// Solves for the interior coefficients B_{k+1,l+1}, 0 <= k < orders.0,
/// 0 <= l < orders.1, so that the determinant of the assembled jet
/// matches `rhs` on the window (orders.0 - 1, orders.1 - 1).
pub fn solve_recursion<T: Coeff>(
    bd: &BoundaryData<T>,
    rhs: &RhsJet<T>,
    orders: (usize, usize),
) -> Result<TruncatedBiSeries<T>, SolverError> {
    let (kk, ll) = orders;
    assert!(kk >= 1 && ll >= 1, "target orders must be at least (1, 1)");
    let nw = bd.b00.nw();
    let cap = bd.b00.degree_cap();

    for side in bd.bk0.iter().chain(bd.b0l.iter()) {
        if side.nw() != nw || side.degree_cap() != cap {
            return Err(SolverError::BoundaryShape {
                expected: (nw, cap),
                got: (side.nw(), side.degree_cap()),
            });
        }
    }
    if bd.bk0.len() != kk || bd.b0l.len() != ll {
        return Err(SolverError::BoundaryOrders {
            expected: (kk, ll),
            got: (bd.bk0.len(), bd.b0l.len()),
        });
    }
    if rhs.orders.0 + 1 < kk || rhs.orders.1 + 1 < ll {
        return Err(SolverError::InsufficientRhsOrders {
            supplied: rhs.orders,
            required: (kk - 1, ll - 1),
        });
    }
    if rhs.nw != nw || rhs.degree_cap != cap {
        return Err(SolverError::BoundaryShape {
            expected: (nw, cap),
            got: (rhs.nw, rhs.degree_cap),
        });
    }

    let q = divisor_determinant(&bd.b00)?;
    let q0 = q.value_at_origin();
    if q0.is_zero() || q0.abs() < DEGENERACY_TOL {
        return Err(SolverError::DegenerateDivisorMetric {
            modulus: q0.abs(),
            threshold: DEGENERACY_TOL,
        });
    }
    let q_inv = q.invert(DEGENERACY_TOL)?;

    let mut phi = TruncatedBiSeries::zero(kk, ll, nw, cap);
    phi.set_coeff(0, 0, bd.b00.clone())?;
    for (k, b) in bd.bk0.iter().enumerate() {
        phi.set_coeff(k + 1, 0, b.clone())?;
    }
    for (l, b) in bd.b0l.iter().enumerate() {
        phi.set_coeff(0, l + 1, b.clone())?;
    }

    for s in 0..=(kk - 1) + (ll - 1) {
        let jet = assemble_jet_unchecked(&phi)?;
        let det = det_cofactor(&jet)?;
        for k in 0..kk {
            if s < k {
                break;
            }
            let l = s - k;
            if l >= ll {
                continue;
            }
            let defect = rhs.get(k, l).sub(&det.coeff(k, l))?;
            if defect.is_zero() {
                continue;
            }
            let scale = T::one().div_nat(((k + 1) * (l + 1)) as u64);
            let b_next = defect.mul(&q_inv)?.scale(&scale);
            phi.set_coeff(k + 1, l + 1, b_next)?;
        }
    }

    phi.check_reality();
    Ok(phi)
}

/// Largest coefficient magnitude of det(jet(phi)) - rhs over the window
/// both sides cover. Zero means the recursion solved its equation
/// exactly at the stored truncation.
pub fn residual_check<T: Coeff>(
    phi: &TruncatedBiSeries<T>,
    rhs: &RhsJet<T>,
) -> Result<f64, SolverError> {
    let jet = assemble_jet_unchecked(phi)?;
    let det = det_cofactor(&jet)?;
    let kk = det.kmax().min(rhs.orders.0);
    let ll = det.lmax().min(rhs.orders.1);
    let mut worst = 0.0f64;
    for k in 0..=kk {
        for l in 0..=ll {
            let diff = det.coeff(k, l).sub(&rhs.get(k, l))?;
            worst = worst.max(diff.max_abs());
        }
    }
    Ok(worst)
}

/// One checked quantity of the divisor normal form.
#[derive(Debug, Clone)]
pub struct NormalFormEntry {
    pub name: String,
    pub magnitude: f64,
}

/// Collection of normal-form quantities that an adapted coordinate
/// choice makes vanish at the base point.
#[derive(Debug, Clone)]
pub struct NormalFormReport {
    pub conditions: Vec<NormalFormEntry>,
}

impl NormalFormReport {
    pub fn max_violation(&self) -> f64 {
        self.conditions
            .iter()
            .map(|c| c.magnitude)
            .fold(0.0, f64::max)
    }

    pub fn satisfied(&self, tol: f64) -> bool {
        self.max_violation() <= tol
    }
}

/// Evaluates at the base point the quantities that vanish in adapted
/// coordinates: the wbar-gradient of B_{1,0} (and conjugate), the value
/// and w-gradient of B_{1,1}, and the value and w-gradient of B_{2,1}
/// (and conjugates), as far as the window of `phi` reaches.
pub fn normal_form_check<T: Coeff>(
    phi: &TruncatedBiSeries<T>,
) -> Result<NormalFormReport, SolverError> {
    let nw = phi.nw();
    let mut conditions = Vec::new();
    let mut push = |name: String, value: T| {
        conditions.push(NormalFormEntry {
            name,
            magnitude: value.abs(),
        });
    };

    if phi.kmax() >= 1 {
        let b10 = phi.coeff(1, 0);
        for i in 0..nw {
            push(
                format!("dwbar_{i} B_(1,0) at 0"),
                b10.diff_wbar(i)?.value_at_origin(),
            );
        }
    }
    if phi.lmax() >= 1 {
        let b01 = phi.coeff(0, 1);
        for i in 0..nw {
            push(
                format!("dw_{i} B_(0,1) at 0"),
                b01.diff_w(i)?.value_at_origin(),
            );
        }
    }
    if phi.kmax() >= 1 && phi.lmax() >= 1 {
        let b11 = phi.coeff(1, 1);
        push("B_(1,1) at 0".to_string(), b11.value_at_origin());
        for i in 0..nw {
            push(
                format!("dw_{i} B_(1,1) at 0"),
                b11.diff_w(i)?.value_at_origin(),
            );
            push(
                format!("dwbar_{i} B_(1,1) at 0"),
                b11.diff_wbar(i)?.value_at_origin(),
            );
        }
    }
    if phi.kmax() >= 2 && phi.lmax() >= 1 {
        let b21 = phi.coeff(2, 1);
        push("B_(2,1) at 0".to_string(), b21.value_at_origin());
        for i in 0..nw {
            push(
                format!("dw_{i} B_(2,1) at 0"),
                b21.diff_w(i)?.value_at_origin(),
            );
        }
    }
    if phi.kmax() >= 1 && phi.lmax() >= 2 {
        let b12 = phi.coeff(1, 2);
        push("B_(1,2) at 0".to_string(), b12.value_at_origin());
        for i in 0..nw {
            push(
                format!("dwbar_{i} B_(1,2) at 0"),
                b12.diff_wbar(i)?.value_at_origin(),
            );
        }
    }

    Ok(NormalFormReport { conditions })
}

/// Smallest eigenvalues seen over a sampling sweep of the metric.
#[derive(Debug, Clone, Copy)]
pub struct PositivityScan {
    /// Minimum eigenvalue of the full matrix over all sample points.
    pub min_full: f64,
    /// Minimum eigenvalue of the tangential block over all sample points.
    pub min_tangential: f64,
}

const SCAN_PHASES: usize = 8;

fn min_eigenvalue(m: &DMatrix<Complex<f64>>) -> f64 {
    if m.nrows() == 0 {
        return f64::INFINITY;
    }
    m.clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}

/// Sweeps |z| over `radii` (eight phases each) and w over `w_samples`,
/// recording the smallest eigenvalue of the evaluated metric and of its
/// tangential block. Degeneracy on the divisor shows up as min_full = 0
/// when radius 0 is included while the tangential block stays positive.
pub fn positivity_scan<T: Coeff>(
    jet: &MetricJet<T>,
    radii: &[f64],
    w_samples: &[Vec<C64>],
) -> PositivityScan {
    let nw = jet.n() - 1;
    let mut min_full = f64::INFINITY;
    let mut min_tangential = f64::INFINITY;
    for w in w_samples {
        for &r in radii {
            for p in 0..SCAN_PHASES {
                let angle = 2.0 * std::f64::consts::PI * (p as f64) / (SCAN_PHASES as f64);
                let z = C64::new(r * angle.cos(), r * angle.sin());
                let m = jet.eval_matrix(w, z);
                min_full = min_full.min(min_eigenvalue(&m));
                let tang = m.view((0, 0), (nw, nw)).into_owned();
                min_tangential = min_tangential.min(min_eigenvalue(&tang));
                if r == 0.0 {
                    break;
                }
            }
        }
    }
    PositivityScan {
        min_full,
        min_tangential,
    }
}
