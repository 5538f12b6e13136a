//! Local solver for the degenerate Monge-Ampere coefficient problem.
//!
//! From divisor boundary data and a prescribed determinant series this
//! crate assembles the induced metric jet, solves for the interior
//! series coefficients order by order, and certifies the growth of the
//! resulting family with an explicit scalar majorant chain.
//!
//! ```
//! use dcma_series::{TruncatedBiSeries, WPolynomial, C64};
//! use dcma_solver::{solve_recursion, residual_check, BoundaryData, RhsJet};
//!
//! // Divisor metric |w|^2, boundary slices zero, determinant z zbar:
//! // the flat model. Its only interior coefficient is B_{2,2} = 1/4.
//! let b00 = WPolynomial::monomial(1, 4, vec![1, 1], C64::new(1.0, 0.0)).unwrap();
//! let bd = BoundaryData::restriction_only(b00, 4, 4);
//! let mut rhs = RhsJet::new((3, 3), 1, 4);
//! rhs.set(1, 1, WPolynomial::constant(1, 4, C64::new(1.0, 0.0))).unwrap();
//! let phi = solve_recursion(&bd, &rhs, (4, 4)).unwrap();
//! assert_eq!(phi.coeff(2, 2).value_at_origin(), C64::new(0.25, 0.0));
//! assert!(residual_check(&phi, &rhs).unwrap() < 1e-12);
//! ```

mod error;
mod jet;
mod majorant;
mod recursion;

pub use error::SolverError;
pub use jet::{
    assemble_jet_unchecked, assemble_metric_jet, det_cofactor, poly_matrix_det,
    poly_matrix_inverse, series_det_leibniz, series_matrix_det, tangential_hessian, MetricJet,
};
pub use majorant::{
    certify, certify_at, default_c, delta_seq, delta_seq_rational, theta_seq, u_closed_form,
    u_fit, u_roots, MajorantCertificate, DEFAULT_R_MAX,
};
pub use recursion::{
    divisor_determinant, normal_form_check, positivity_scan, residual_check, solve_recursion,
    BoundaryData, NormalFormEntry, NormalFormReport, PositivityScan, RhsJet,
};
