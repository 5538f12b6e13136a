//! Truncated bivariate power series with polynomial coefficients.
//!
//! The central object is a truncated expansion
//!
//! ```text
//! Phi(w, z) = sum_{0<=k<=K, 0<=l<=L} B_{k,l}(w, wbar) z^k zbar^l
//! ```
//!
//! where each coefficient `B_{k,l}` is a polynomial in the divisor
//! directions (w_1..w_nw, wbar_1..wbar_nw) truncated at a total degree
//! cap. Such expansions carry local Kahler potentials near a divisor
//! {z = 0}, and the z, zbar orders play an asymmetric role: solving a
//! degenerate Monge-Ampere equation fixes the mixed coefficients
//! (k, l >= 1) from the boundary slices B_{k,0}, B_{0,l}.
//!
//! Design points:
//!
//! * Canonical form: zero coefficients are never stored, at either the
//!   polynomial-term or the series-coefficient level, so `==` is
//!   mathematical equality of truncations.
//! * Window tracking: every series knows the (K, L) range it is accurate
//!   to; z and zbar derivatives shrink the window of their result.
//! * Two scalar fields: `C64` doubles for production runs and `CRat`
//!   exact complex rationals for residual-zero oracle tests.
//! * Reality: a real potential satisfies B_{l,k} = conj(B_{k,l]) with the
//!   conjugation swapping w and wbar; the flag is tracked conservatively
//!   and can be recomputed exactly.
//!
//! # Example
//!
//! ```
//! use dcma_series::{TruncatedBiSeries, WPolynomial, C64, Var};
//!
//! // Phi = |z|^2, i.e. B_{1,1} = 1.
//! let mut phi = TruncatedBiSeries::<C64>::zero(2, 2, 1, 2);
//! let one = WPolynomial::constant(1, 2, C64::new(1.0, 0.0));
//! phi.set_coeff(1, 1, one.clone()).unwrap();
//!
//! // The mixed second derivative d/dz d/dzbar recovers the constant 1.
//! let g = phi.diff(Var::Z).unwrap().diff(Var::ZBar).unwrap();
//! assert_eq!(g.coeff(0, 0), one);
//! ```

mod error;
mod json;
mod poly;
mod scalar;
mod series;

pub use error::SeriesError;
pub use json::{
    JsonScalar, NumJson, SeriesJson, TermJson, series_from_json, series_from_str, series_to_json,
    series_to_string,
};
pub use poly::{Mono, WPolynomial, inner_product_d};
pub use scalar::{C64, CRat, Coeff, format_rational, parse_rational};
pub use series::{SeriesSplit, TruncatedBiSeries, Var};
