//! Truncated bivariate series in (z, zbar) with polynomial coefficients.
//!
//! A series stores coefficients B_{k,l}(w, wbar) for 0 <= k <= K and
//! 0 <= l <= L, representing sum B_{k,l} z^k zbar^l. The window (K, L) is
//! the guaranteed-accurate order range: operations that lose accuracy in
//! an order (differentiation in z or zbar) shrink the window of their
//! result rather than silently keeping stale orders.

use crate::error::SeriesError;
use crate::poly::WPolynomial;
use crate::scalar::{C64, Coeff};
use std::collections::BTreeMap;

/// Differentiation variable for a series.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Var {
    Z,
    ZBar,
    /// w_i, 0-based.
    W(usize),
    /// wbar_i, 0-based.
    WBar(usize),
}

/// Truncated series sum_{k<=K, l<=L} B_{k,l}(w, wbar) z^k zbar^l.
#[derive(Clone, Debug)]
pub struct TruncatedBiSeries<T: Coeff> {
    kmax: usize,
    lmax: usize,
    nw: usize,
    degree_cap: usize,
    real: bool,
    coeffs: BTreeMap<(usize, usize), WPolynomial<T>>,
}

impl<T: Coeff> PartialEq for TruncatedBiSeries<T> {
    /// Equality of shape and coefficient maps. The reality flag is a
    /// derived property and does not participate.
    fn eq(&self, other: &Self) -> bool {
        self.shape() == other.shape() && self.coeffs == other.coeffs
    }
}

/// Partition of a series into terms without zbar (hol), without z
/// (antihol), and genuinely mixed terms. The constant term lives in the
/// hol part.
#[derive(Clone, Debug)]
pub struct SeriesSplit<T: Coeff> {
    pub hol: TruncatedBiSeries<T>,
    pub antihol: TruncatedBiSeries<T>,
    pub mixed: TruncatedBiSeries<T>,
}

impl<T: Coeff> TruncatedBiSeries<T> {
    pub fn zero(kmax: usize, lmax: usize, nw: usize, degree_cap: usize) -> Self {
        TruncatedBiSeries {
            kmax,
            lmax,
            nw,
            degree_cap,
            real: true,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn kmax(&self) -> usize {
        self.kmax
    }
    pub fn lmax(&self) -> usize {
        self.lmax
    }
    pub fn nw(&self) -> usize {
        self.nw
    }
    pub fn degree_cap(&self) -> usize {
        self.degree_cap
    }

    /// Whether the reality symmetry B_{l,k} = conj(B_{k,l}) is flagged.
    /// The flag is maintained conservatively by arithmetic and can be
    /// re-derived from the coefficients with `check_reality`.
    pub fn is_real(&self) -> bool {
        self.real
    }

    pub fn shape(&self) -> (usize, usize, usize, usize) {
        (self.kmax, self.lmax, self.nw, self.degree_cap)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: usize, l: usize) -> WPolynomial<T> {
        self.coeffs
            .get(&(k, l))
            .cloned()
            .unwrap_or_else(|| WPolynomial::zero(self.nw, self.degree_cap))
    }

    pub fn coeff_ref(&self, k: usize, l: usize) -> Option<&WPolynomial<T>> {
        self.coeffs.get(&(k, l))
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&(usize, usize), &WPolynomial<T>)> {
        self.coeffs.iter()
    }

    /// Replaces one coefficient. Clears the reality flag unless the
    /// series stays symmetric, which callers can re-assert via
    /// `check_reality`.
    pub fn set_coeff(
        &mut self,
        k: usize,
        l: usize,
        value: WPolynomial<T>,
    ) -> Result<(), SeriesError> {
        if k > self.kmax || l > self.lmax {
            return Err(SeriesError::IndexOutOfWindow {
                k,
                l,
                kmax: self.kmax,
                lmax: self.lmax,
            });
        }
        if value.nw() != self.nw || value.degree_cap() != self.degree_cap {
            return Err(SeriesError::PolyShapeMismatch {
                left: (self.nw, self.degree_cap),
                right: (value.nw(), value.degree_cap()),
            });
        }
        if value.is_zero() {
            self.coeffs.remove(&(k, l));
        } else {
            self.coeffs.insert((k, l), value);
        }
        self.real = false;
        Ok(())
    }

    /// Verifies B_{l,k} = conj(B_{k,l}) termwise and stores the result in
    /// the reality flag.
    pub fn check_reality(&mut self) -> bool {
        let real = self.reality_violation().is_none();
        self.real = real;
        real
    }

    /// First index pair violating the reality symmetry, if any.
    pub fn reality_violation(&self) -> Option<(usize, usize)> {
        for ((k, l), b) in &self.coeffs {
            if *k > self.lmax || *l > self.kmax {
                return Some((*k, *l));
            }
            if self.coeff(*l, *k) != b.conj() {
                return Some((*k, *l));
            }
        }
        None
    }

    fn check_shape(&self, other: &Self) -> Result<(), SeriesError> {
        if self.shape() != other.shape() {
            return Err(SeriesError::ShapeMismatch {
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(())
    }

    fn insert_canonical(&mut self, k: usize, l: usize, value: WPolynomial<T>) {
        if k > self.kmax || l > self.lmax || value.is_zero() {
            return;
        }
        self.coeffs.insert((k, l), value);
    }

    /// Coefficientwise sum. Requires identical shapes.
    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_shape(other)?;
        let mut out = self.clone();
        out.real = self.real && other.real;
        for ((k, l), b) in &other.coeffs {
            let sum = out.coeff(*k, *l).add(b)?;
            if sum.is_zero() {
                out.coeffs.remove(&(*k, *l));
            } else {
                out.coeffs.insert((*k, *l), sum);
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.kmax, self.lmax, self.nw, self.degree_cap);
        out.real = self.real;
        for ((k, l), b) in &self.coeffs {
            out.insert_canonical(*k, *l, b.neg());
        }
        out
    }

    pub fn scale(&self, factor: &T) -> Self {
        let mut out = Self::zero(self.kmax, self.lmax, self.nw, self.degree_cap);
        out.real = false;
        for ((k, l), b) in &self.coeffs {
            out.insert_canonical(*k, *l, b.scale(factor));
        }
        out
    }

    /// Cauchy product truncated to the shared window. Requires identical
    /// shapes.
    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_shape(other)?;
        let mut acc: BTreeMap<(usize, usize), WPolynomial<T>> = BTreeMap::new();
        for ((ka, la), a) in &self.coeffs {
            for ((kb, lb), b) in &other.coeffs {
                let (k, l) = (ka + kb, la + lb);
                if k > self.kmax || l > self.lmax {
                    continue;
                }
                let prod = a.mul(b)?;
                if prod.is_zero() {
                    continue;
                }
                match acc.get_mut(&(k, l)) {
                    Some(c) => *c = c.add(&prod)?,
                    None => {
                        acc.insert((k, l), prod);
                    }
                }
            }
        }
        acc.retain(|_, v| !v.is_zero());
        let mut out = Self::zero(self.kmax, self.lmax, self.nw, self.degree_cap);
        out.real = self.real && other.real;
        out.coeffs = acc;
        Ok(out)
    }

    /// Formal derivative. Differentiating in z shrinks the guaranteed
    /// window to (K-1, L); in zbar to (K, L-1). Either one clears the
    /// reality flag; a z followed by a zbar derivative restores it, which
    /// `check_reality` detects.
    pub fn diff(&self, var: Var) -> Result<Self, SeriesError> {
        match var {
            Var::Z => {
                let kmax = self.kmax.saturating_sub(1);
                let mut out = Self::zero(kmax, self.lmax, self.nw, self.degree_cap);
                out.real = false;
                for ((k, l), b) in &self.coeffs {
                    if *k == 0 {
                        continue;
                    }
                    out.insert_canonical(k - 1, *l, b.scale(&T::from_i64(*k as i64)));
                }
                Ok(out)
            }
            Var::ZBar => {
                let lmax = self.lmax.saturating_sub(1);
                let mut out = Self::zero(self.kmax, lmax, self.nw, self.degree_cap);
                out.real = false;
                for ((k, l), b) in &self.coeffs {
                    if *l == 0 {
                        continue;
                    }
                    out.insert_canonical(*k, l - 1, b.scale(&T::from_i64(*l as i64)));
                }
                Ok(out)
            }
            Var::W(i) => {
                if i >= self.nw {
                    return Err(SeriesError::UnknownVariable { index: i });
                }
                let mut out = Self::zero(self.kmax, self.lmax, self.nw, self.degree_cap);
                out.real = false;
                for ((k, l), b) in &self.coeffs {
                    out.insert_canonical(*k, *l, b.diff_w(i)?);
                }
                Ok(out)
            }
            Var::WBar(i) => {
                if i >= self.nw {
                    return Err(SeriesError::UnknownVariable { index: i });
                }
                let mut out = Self::zero(self.kmax, self.lmax, self.nw, self.degree_cap);
                out.real = false;
                for ((k, l), b) in &self.coeffs {
                    out.insert_canonical(*k, *l, b.diff_wbar(i)?);
                }
                Ok(out)
            }
        }
    }

    /// Conjugate series: coefficients conjugated and (k, l) swapped, so
    /// that conj(sum B_{k,l} z^k zbar^l) = sum conj(B_{k,l}) zbar^k z^l.
    /// The window swaps accordingly.
    pub fn conj(&self) -> Self {
        let mut out = Self::zero(self.lmax, self.kmax, self.nw, self.degree_cap);
        out.real = self.real;
        for ((k, l), b) in &self.coeffs {
            out.insert_canonical(*l, *k, b.conj());
        }
        out
    }

    /// Restricts the guaranteed window, dropping coefficients above it.
    pub fn restrict(&self, kmax: usize, lmax: usize) -> Self {
        let mut out = Self::zero(kmax.min(self.kmax), lmax.min(self.lmax), self.nw, self.degree_cap);
        out.real = false;
        for ((k, l), b) in &self.coeffs {
            out.insert_canonical(*k, *l, b.clone());
        }
        if self.real {
            out.check_reality();
        }
        out
    }

    /// Lowers the coefficient degree cap, dropping higher-degree terms.
    /// Differentiating a truncated product in a w-direction is exact only
    /// up to one degree below the cap, so consumers of such derivatives
    /// compare after truncating to the guaranteed degree.
    pub fn truncate_degree(&self, new_cap: usize) -> Self {
        let mut out = Self::zero(self.kmax, self.lmax, self.nw, new_cap.min(self.degree_cap));
        out.real = false;
        for ((k, l), b) in &self.coeffs {
            out.insert_canonical(*k, *l, b.truncate_degree(new_cap));
        }
        if self.real {
            out.check_reality();
        }
        out
    }

    /// Widens the window without adding information; new orders are zero.
    pub fn embed(&self, kmax: usize, lmax: usize) -> Self {
        assert!(kmax >= self.kmax && lmax >= self.lmax, "embed only widens");
        let mut out = Self::zero(kmax, lmax, self.nw, self.degree_cap);
        out.real = false;
        for ((k, l), b) in &self.coeffs {
            out.insert_canonical(*k, *l, b.clone());
        }
        out
    }

    /// Splits into hol (l = 0, includes the constant), antihol (k = 0,
    /// l > 0) and mixed (k > 0 and l > 0) parts.
    pub fn hol_split(&self) -> SeriesSplit<T> {
        let mut hol = Self::zero(self.kmax, self.lmax, self.nw, self.degree_cap);
        let mut antihol = hol.clone();
        let mut mixed = hol.clone();
        hol.real = false;
        antihol.real = false;
        mixed.real = false;
        for ((k, l), b) in &self.coeffs {
            if *l == 0 {
                hol.insert_canonical(*k, *l, b.clone());
            } else if *k == 0 {
                antihol.insert_canonical(*k, *l, b.clone());
            } else {
                mixed.insert_canonical(*k, *l, b.clone());
            }
        }
        SeriesSplit { hol, antihol, mixed }
    }

    /// Largest coefficient modulus across all stored terms.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().map(|b| b.max_abs()).fold(0.0, f64::max)
    }

    /// Evaluates numerically at (w, z), substituting conjugates for the
    /// barred variables.
    pub fn eval(&self, w: &[C64], z: C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for ((k, l), b) in &self.coeffs {
            let mut term = b.eval(w);
            for _ in 0..*k {
                term *= z;
            }
            for _ in 0..*l {
                term *= z.conj();
            }
            acc += term;
        }
        acc
    }
}

impl<T: Coeff> SeriesSplit<T> {
    /// Exact reconstruction hol + antihol + mixed.
    pub fn reassemble(&self) -> Result<TruncatedBiSeries<T>, SeriesError> {
        self.hol.add(&self.antihol)?.add(&self.mixed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::C64;

    type S = TruncatedBiSeries<C64>;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn constant_poly(nw: usize, d: usize, x: f64) -> WPolynomial<C64> {
        WPolynomial::constant(nw, d, c(x))
    }

    /// 1 + z + zbar + z zbar with unit coefficients.
    fn sample(kmax: usize, lmax: usize) -> S {
        let mut s = S::zero(kmax, lmax, 1, 2);
        for (k, l) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            s.set_coeff(k, l, constant_poly(1, 2, 1.0)).unwrap();
        }
        s.check_reality();
        s
    }

    #[test]
    fn add_and_cancel() {
        let s = sample(2, 2);
        let z = s.sub(&s).unwrap();
        assert!(z.is_zero());
        let back = s.add(&z).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn product_expands_binomials() {
        let mut a = S::zero(2, 2, 1, 2);
        a.set_coeff(0, 0, constant_poly(1, 2, 1.0)).unwrap();
        a.set_coeff(1, 0, constant_poly(1, 2, 1.0)).unwrap();
        let mut b = S::zero(2, 2, 1, 2);
        b.set_coeff(0, 0, constant_poly(1, 2, 1.0)).unwrap();
        b.set_coeff(0, 1, constant_poly(1, 2, 1.0)).unwrap();
        let p = a.mul(&b).unwrap();
        assert_eq!(p, sample(2, 2));
    }

    #[test]
    fn truncation_drops_high_orders() {
        let mut a = S::zero(1, 1, 1, 2);
        a.set_coeff(1, 0, constant_poly(1, 2, 1.0)).unwrap();
        let mut b = S::zero(1, 1, 1, 2);
        b.set_coeff(0, 1, constant_poly(1, 2, 1.0)).unwrap();
        let ab = a.mul(&b).unwrap();
        assert_eq!(ab.coeff(1, 1), constant_poly(1, 2, 1.0));
        let a2 = a.mul(&a).unwrap();
        assert!(a2.is_zero(), "z^2 with K=1 truncates away");
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let a = sample(2, 2);
        let b = sample(3, 2);
        assert!(matches!(a.add(&b), Err(SeriesError::ShapeMismatch { .. })));
    }

    #[test]
    fn diff_shifts_and_scales() {
        let mut s = S::zero(3, 2, 1, 2);
        s.set_coeff(2, 1, constant_poly(1, 2, 1.0)).unwrap();
        let d = s.diff(Var::Z).unwrap();
        assert_eq!(d.kmax(), 2);
        assert_eq!(d.coeff(1, 1), constant_poly(1, 2, 2.0));
        let dz = s.diff(Var::ZBar).unwrap();
        assert_eq!(dz.lmax(), 1);
        assert_eq!(dz.coeff(2, 0), constant_poly(1, 2, 1.0));
        assert!(s.diff(Var::W(0)).unwrap().is_zero());
    }

    #[test]
    fn diffbar_of_pure_z_vanishes() {
        let mut s = S::zero(2, 2, 1, 2);
        s.set_coeff(1, 0, constant_poly(1, 2, 1.0)).unwrap();
        assert!(s.diff(Var::ZBar).unwrap().is_zero());
    }

    #[test]
    fn split_partitions_and_reassembles() {
        let s = sample(2, 2);
        let split = s.hol_split();
        assert_eq!(split.hol.coeff(0, 0), constant_poly(1, 2, 1.0));
        assert_eq!(split.hol.coeff(1, 0), constant_poly(1, 2, 1.0));
        assert!(split.hol.coeff(0, 1).is_zero());
        assert_eq!(split.antihol.coeff(0, 1), constant_poly(1, 2, 1.0));
        assert!(split.antihol.coeff(0, 0).is_zero());
        assert_eq!(split.mixed.coeff(1, 1), constant_poly(1, 2, 1.0));
        assert_eq!(split.reassemble().unwrap(), s);
    }

    #[test]
    fn purely_holomorphic_input_has_no_mixed_part() {
        let mut s = S::zero(3, 3, 1, 2);
        s.set_coeff(0, 0, constant_poly(1, 2, 2.0)).unwrap();
        s.set_coeff(2, 0, constant_poly(1, 2, 3.0)).unwrap();
        let split = s.hol_split();
        assert!(split.mixed.is_zero());
        assert!(split.antihol.is_zero());
    }

    #[test]
    fn reality_flag_tracks_symmetry() {
        let mut s = S::zero(2, 2, 1, 2);
        s.set_coeff(1, 0, constant_poly(1, 2, 1.0)).unwrap();
        assert!(!s.check_reality(), "z alone is not real");
        s.set_coeff(0, 1, constant_poly(1, 2, 1.0)).unwrap();
        assert!(s.check_reality(), "z + zbar is real");
        let sum = s.add(&s).unwrap();
        assert!(sum.is_real());
        let prod = s.mul(&s).unwrap();
        assert!(prod.is_real());
    }

    #[test]
    fn mixed_laplacian_preserves_reality() {
        let s = sample(3, 3);
        let mut dd = s.diff(Var::Z).unwrap().diff(Var::ZBar).unwrap();
        assert!(dd.check_reality());
    }

    #[test]
    fn eval_matches_direct_sum() {
        let s = sample(2, 2);
        let z = C64::new(0.2, 0.1);
        let got = s.eval(&[C64::new(0.0, 0.0)], z);
        let expect = c(1.0) + z + z.conj() + z * z.conj();
        assert!((got - expect).norm() < 1e-15);
    }
}
