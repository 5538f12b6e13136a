//! Truncated polynomials in the divisor directions.
//!
//! A `WPolynomial` is a polynomial in the 2*nw commuting variables
//! (w_1..w_nw, wbar_1..wbar_nw), truncated at a total degree cap `d`.
//! Terms with exactly zero coefficient are never stored, so equality of
//! term maps is canonical equality.

use crate::error::SeriesError;
use crate::scalar::Coeff;
use std::collections::BTreeMap;

/// Exponent vector of length `2*nw`: first the w-exponents, then the
/// wbar-exponents.
pub type Mono = Vec<u8>;

fn total_degree(mono: &[u8]) -> usize {
    mono.iter().map(|&e| e as usize).sum()
}

/// Polynomial in (w, wbar) with total degree at most `degree_cap`.
#[derive(Clone, PartialEq, Debug)]
pub struct WPolynomial<T: Coeff> {
    nw: usize,
    degree_cap: usize,
    terms: BTreeMap<Mono, T>,
}

impl<T: Coeff> WPolynomial<T> {
    pub fn zero(nw: usize, degree_cap: usize) -> Self {
        WPolynomial {
            nw,
            degree_cap,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nw: usize, degree_cap: usize, value: T) -> Self {
        let mut p = Self::zero(nw, degree_cap);
        if !value.is_zero() {
            p.terms.insert(vec![0; 2 * nw], value);
        }
        p
    }

    /// Single term `value * w^a wbar^b` where `mono = [a.., b..]`.
    pub fn monomial(nw: usize, degree_cap: usize, mono: Mono, value: T) -> Result<Self, SeriesError> {
        if mono.len() != 2 * nw {
            return Err(SeriesError::BadMonomial {
                expected: 2 * nw,
                got: mono.len(),
            });
        }
        if total_degree(&mono) > degree_cap {
            return Err(SeriesError::DegreeOverflow {
                degree: total_degree(&mono),
                cap: degree_cap,
            });
        }
        let mut p = Self::zero(nw, degree_cap);
        if !value.is_zero() {
            p.terms.insert(mono, value);
        }
        Ok(p)
    }

    pub fn nw(&self) -> usize {
        self.nw
    }

    pub fn degree_cap(&self) -> usize {
        self.degree_cap
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &T)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mono: &[u8]) -> T {
        self.terms.get(mono).cloned().unwrap_or_else(T::zero)
    }

    /// Constant term, the value at w = 0.
    pub fn value_at_origin(&self) -> T {
        self.coeff(&vec![0u8; 2 * self.nw])
    }

    fn check_shape(&self, other: &Self) -> Result<(), SeriesError> {
        if self.nw != other.nw || self.degree_cap != other.degree_cap {
            return Err(SeriesError::PolyShapeMismatch {
                left: (self.nw, self.degree_cap),
                right: (other.nw, other.degree_cap),
            });
        }
        Ok(())
    }

    fn insert_canonical(&mut self, mono: Mono, value: T) {
        if value.is_zero() || total_degree(&mono) > self.degree_cap {
            return;
        }
        self.terms.insert(mono, value);
    }

    fn accumulate(&mut self, mono: &[u8], value: T) {
        if value.is_zero() || total_degree(mono) > self.degree_cap {
            return;
        }
        match self.terms.get_mut(mono) {
            Some(c) => {
                let sum = c.add(&value);
                if sum.is_zero() {
                    self.terms.remove(mono);
                } else {
                    *c = sum;
                }
            }
            None => {
                self.terms.insert(mono.to_vec(), value);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.accumulate(m, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.nw, self.degree_cap);
        for (m, c) in &self.terms {
            out.insert_canonical(m.clone(), c.neg());
        }
        out
    }

    pub fn scale(&self, factor: &T) -> Self {
        let mut out = Self::zero(self.nw, self.degree_cap);
        if factor.is_zero() {
            return out;
        }
        for (m, c) in &self.terms {
            out.insert_canonical(m.clone(), c.mul(factor));
        }
        out
    }

    /// Product truncated at the shared degree cap.
    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_shape(other)?;
        let mut out = Self::zero(self.nw, self.degree_cap);
        for (ma, ca) in &self.terms {
            let da = total_degree(ma);
            for (mb, cb) in &other.terms {
                if da + total_degree(mb) > self.degree_cap {
                    continue;
                }
                let mono: Mono = ma.iter().zip(mb.iter()).map(|(&x, &y)| x + y).collect();
                out.accumulate(&mono, ca.mul(cb));
            }
        }
        Ok(out)
    }

    /// Formal derivative with respect to `w_i` (0-based).
    pub fn diff_w(&self, i: usize) -> Result<Self, SeriesError> {
        self.diff_slot(i)
    }

    /// Formal derivative with respect to `wbar_i` (0-based).
    pub fn diff_wbar(&self, i: usize) -> Result<Self, SeriesError> {
        self.diff_slot(self.nw + i)
    }

    fn diff_slot(&self, slot: usize) -> Result<Self, SeriesError> {
        if slot >= 2 * self.nw {
            return Err(SeriesError::UnknownVariable { index: slot });
        }
        let mut out = Self::zero(self.nw, self.degree_cap);
        for (m, c) in &self.terms {
            let e = m[slot];
            if e == 0 {
                continue;
            }
            let mut mono = m.clone();
            mono[slot] = e - 1;
            out.insert_canonical(mono, c.mul_nat(e as u64));
        }
        Ok(out)
    }

    /// Conjugation: swaps the w and wbar exponent blocks and conjugates
    /// every coefficient.
    pub fn conj(&self) -> Self {
        let mut out = Self::zero(self.nw, self.degree_cap);
        for (m, c) in &self.terms {
            let mut mono = vec![0u8; 2 * self.nw];
            for i in 0..self.nw {
                mono[i] = m[self.nw + i];
                mono[self.nw + i] = m[i];
            }
            out.insert_canonical(mono, c.conj());
        }
        out
    }

    /// Drops every term of total degree above `new_cap` and lowers the cap.
    pub fn truncate_degree(&self, new_cap: usize) -> Self {
        let mut out = Self::zero(self.nw, new_cap.min(self.degree_cap));
        for (m, c) in &self.terms {
            out.insert_canonical(m.clone(), c.clone());
        }
        out
    }

    /// Largest coefficient modulus; zero polynomial gives 0.
    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.abs()).fold(0.0, f64::max)
    }

    /// Evaluates at a numeric point, substituting wbar_i = conj(w_i).
    pub fn eval(&self, w: &[crate::scalar::C64]) -> crate::scalar::C64 {
        assert_eq!(w.len(), self.nw, "evaluation point dimension");
        let mut acc = crate::scalar::C64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut term = c.to_c64();
            for i in 0..self.nw {
                for _ in 0..m[i] {
                    term *= w[i];
                }
                for _ in 0..m[self.nw + i] {
                    term *= w[i].conj();
                }
            }
            acc += term;
        }
        acc
    }

    /// Truncated multiplicative inverse around a nonzero constant term:
    /// writes `p = c (1 + q)` and expands `1/p` as a geometric series in
    /// `q` up to the degree cap. Fails when `|p(0)|` is below `tol`.
    pub fn invert(&self, tol: f64) -> Result<Self, SeriesError> {
        let c0 = self.value_at_origin();
        if c0.abs() < tol || c0.is_zero() {
            return Err(SeriesError::NonInvertibleConstant { modulus: c0.abs() });
        }
        let c0_inv = c0.try_recip().expect("nonzero constant term");
        let mut tail = self.clone();
        tail.terms.remove(&vec![0u8; 2 * self.nw]);
        let q = tail.scale(&c0_inv).neg();
        let mut acc = Self::constant(self.nw, self.degree_cap, T::one());
        let mut power = Self::constant(self.nw, self.degree_cap, T::one());
        for _ in 0..self.degree_cap {
            power = power.mul(&q)?;
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power)?;
        }
        Ok(acc.scale(&c0_inv))
    }
}

/// Hermitian-pairing gradient contraction on the divisor:
/// `sum_{i,j} g0inv[i][j] * (d v / d w_i) * (d u / d wbar_j)`.
///
/// `g0inv` must be Hermitian as a matrix of polynomials, meaning
/// `g0inv[j][i] = conj(g0inv[i][j])` termwise.
pub fn inner_product_d<T: Coeff>(
    u: &WPolynomial<T>,
    v: &WPolynomial<T>,
    g0_inv: &[Vec<WPolynomial<T>>],
) -> Result<WPolynomial<T>, SeriesError> {
    let nw = u.nw();
    if g0_inv.len() != nw || g0_inv.iter().any(|row| row.len() != nw) {
        return Err(SeriesError::MatrixShape {
            expected: nw,
            got: g0_inv.len(),
        });
    }
    for i in 0..nw {
        for j in 0..nw {
            if g0_inv[j][i] != g0_inv[i][j].conj() {
                return Err(SeriesError::NotHermitian { row: j, col: i });
            }
        }
    }
    let mut acc = WPolynomial::zero(nw, u.degree_cap());
    for i in 0..nw {
        let dv = v.diff_w(i)?;
        if dv.is_zero() {
            continue;
        }
        for j in 0..nw {
            let du = u.diff_wbar(j)?;
            if du.is_zero() {
                continue;
            }
            acc = acc.add(&g0_inv[i][j].mul(&dv)?.mul(&du)?)?;
        }
    }
    Ok(acc)
}
