//! Coefficient scalars for series arithmetic.
//!
//! Two fields are supported: `C64` (complex double precision, the default)
//! and `CRat` (complex numbers with exact rational real and imaginary
//! parts). The rational field exists so that model problems with rational
//! Taylor data can be solved with zero residual, separating rounding error
//! from method error.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{Signed, ToPrimitive, Zero};
use std::fmt;

/// Complex double-precision scalar, the default coefficient field.
pub type C64 = num::complex::Complex<f64>;

/// Coefficient field for polynomials and series.
///
/// Implementations must behave as a commutative field with conjugation.
/// `is_zero` is exact for `CRat` and exact-bitwise for `C64`; canonical
/// forms drop exactly-zero terms only.
pub trait Coeff: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    /// Builds the scalar closest to `re + i*im`. Exact for `C64`; for
    /// `CRat` the doubles are converted exactly (every finite double is
    /// rational).
    fn from_f64_pair(re: f64, im: f64) -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn conj(&self) -> Self;
    fn is_zero(&self) -> bool;
    /// Multiplicative inverse; `None` for zero.
    fn try_recip(&self) -> Option<Self>;
    /// Modulus as a double (lossy for `CRat`; used for norms and
    /// thresholds, never for exactness decisions).
    fn abs(&self) -> f64;
    fn to_c64(&self) -> C64;

    fn mul_nat(&self, n: u64) -> Self {
        self.mul(&Self::from_i64(n as i64))
    }
    fn div_nat(&self, n: u64) -> Self {
        let inv = Self::from_i64(n as i64)
            .try_recip()
            .expect("division by a positive integer");
        self.mul(&inv)
    }
}

impl Coeff for C64 {
    fn zero() -> Self {
        C64::new(0.0, 0.0)
    }
    fn one() -> Self {
        C64::new(1.0, 0.0)
    }
    fn from_i64(n: i64) -> Self {
        C64::new(n as f64, 0.0)
    }
    fn from_f64_pair(re: f64, im: f64) -> Self {
        C64::new(re, im)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        num::complex::Complex::conj(self)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn try_recip(&self) -> Option<Self> {
        if Coeff::is_zero(self) {
            None
        } else {
            Some(self.finv())
        }
    }
    fn abs(&self) -> f64 {
        self.norm()
    }
    fn to_c64(&self) -> C64 {
        *self
    }
}

/// Complex scalar with exact rational components.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl CRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        CRat { re, im }
    }

    /// `num/den` as a real rational.
    pub fn ratio(num: i64, den: i64) -> Self {
        CRat {
            re: BigRational::new(BigInt::from(num), BigInt::from(den)),
            im: BigRational::zero(),
        }
    }

    /// Exact squared modulus, `re^2 + im^2`.
    pub fn abs_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }
}

fn rational_from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

/// Parses either a plain fraction `p/q`, an integer, or a finite decimal
/// such as `-0.125`. Decimals convert exactly (power-of-ten denominator).
pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let num: BigInt = p.trim().parse().map_err(|e| format!("bad numerator {p:?}: {e}"))?;
        let den: BigInt = q.trim().parse().map_err(|e| format!("bad denominator {q:?}: {e}"))?;
        if den.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(BigRational::new(num, den));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let negative = int_part.trim_start().starts_with('-');
        let int: BigInt = if int_part.is_empty() || int_part == "-" {
            BigInt::zero()
        } else {
            int_part.parse().map_err(|e| format!("bad integer part {int_part:?}: {e}"))?
        };
        if frac_part.is_empty() {
            return Ok(BigRational::from_integer(int));
        }
        let digits: BigInt = frac_part
            .parse()
            .map_err(|e| format!("bad fractional part {frac_part:?}: {e}"))?;
        if digits.is_negative() {
            return Err(format!("misplaced sign in {s:?}"));
        }
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let frac = BigRational::new(digits, scale);
        let whole = BigRational::from_integer(int);
        Ok(if negative { whole - frac } else { whole + frac })
    } else {
        let int: BigInt = s.parse().map_err(|e| format!("bad rational {s:?}: {e}"))?;
        Ok(BigRational::from_integer(int))
    }
}

/// Renders a rational exactly: integers plainly, everything else as `p/q`.
pub fn format_rational(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

impl Coeff for CRat {
    fn zero() -> Self {
        CRat {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }
    fn one() -> Self {
        CRat {
            re: BigRational::from_integer(BigInt::from(1)),
            im: BigRational::zero(),
        }
    }
    fn from_i64(n: i64) -> Self {
        CRat {
            re: BigRational::from_integer(BigInt::from(n)),
            im: BigRational::zero(),
        }
    }
    fn from_f64_pair(re: f64, im: f64) -> Self {
        CRat {
            re: rational_from_f64(re),
            im: rational_from_f64(im),
        }
    }
    fn add(&self, rhs: &Self) -> Self {
        CRat {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
    fn sub(&self, rhs: &Self) -> Self {
        CRat {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
    fn mul(&self, rhs: &Self) -> Self {
        CRat {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
    fn neg(&self) -> Self {
        CRat {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
    fn conj(&self) -> Self {
        CRat {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn try_recip(&self) -> Option<Self> {
        let d = self.abs_sq();
        if d.is_zero() {
            return None;
        }
        Some(CRat {
            re: &self.re / &d,
            im: -&self.im / &d,
        })
    }
    fn abs(&self) -> f64 {
        self.abs_sq().to_f64().map(f64::sqrt).unwrap_or(f64::INFINITY)
    }
    fn to_c64(&self) -> C64 {
        C64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_round_trip_parsing() {
        for s in ["3", "-4", "1/3", "-7/2", "0.25", "-0.125", "2.5"] {
            let r = parse_rational(s).unwrap();
            let back = parse_rational(&format_rational(&r)).unwrap();
            assert_eq!(r, back, "{s}");
        }
        assert_eq!(parse_rational("0.25").unwrap(), BigRational::new(1.into(), 4.into()));
        assert_eq!(parse_rational("-0.5").unwrap(), BigRational::new((-1).into(), 2.into()));
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn rational_field_ops_are_exact() {
        let a = CRat::ratio(1, 3);
        let b = CRat::ratio(1, 6);
        let sum = a.add(&b);
        assert_eq!(sum, CRat::ratio(1, 2));
        let prod = a.mul(&b);
        assert_eq!(prod, CRat::ratio(1, 18));
        let inv = a.try_recip().unwrap();
        assert_eq!(a.mul(&inv), Coeff::one());
        assert!(CRat::zero().try_recip().is_none());
    }

    #[test]
    fn complex_rational_conjugation() {
        let z = CRat::new(
            BigRational::new(1.into(), 2.into()),
            BigRational::new(3.into(), 4.into()),
        );
        let zz = z.mul(&z.conj());
        assert_eq!(zz.im, BigRational::zero());
        assert_eq!(zz.re, z.abs_sq());
    }

    #[test]
    fn float_from_f64_is_exact() {
        let x = CRat::from_f64_pair(0.375, -1.5);
        assert_eq!(x.re, BigRational::new(3.into(), 8.into()));
        assert_eq!(x.im, BigRational::new((-3).into(), 2.into()));
    }
}
