//! Error types for jet assembly and the coefficient recursion.

use dcma_series::SeriesError;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum SolverError {
    #[error("potential must be a real series (reality symmetry fails at {0:?})")]
    NonRealPotential((usize, usize)),

    #[error("tangential metric determinant at the base point has modulus {modulus:.3e}, below the invertibility threshold {threshold:.1e}")]
    DegenerateDivisorMetric { modulus: f64, threshold: f64 },

    #[error("right-hand side supplied through orders {supplied:?} but orders {required:?} are needed")]
    InsufficientRhsOrders {
        supplied: (usize, usize),
        required: (usize, usize),
    },

    #[error("boundary data shape (nw, d) = {got:?} does not match (nw, d) = {expected:?}")]
    BoundaryShape {
        expected: (usize, usize),
        got: (usize, usize),
    },

    #[error("boundary data lists {got:?} side coefficients, target orders need {expected:?}")]
    BoundaryOrders {
        expected: (usize, usize),
        got: (usize, usize),
    },

    #[error("certificate column index k0 = {k0} outside 1..={kmax}")]
    BadCertifyAnchor { k0: usize, kmax: usize },

    #[error("metric jet is not Hermitian at entry ({row}, {col})")]
    JetNotHermitian { row: usize, col: usize },

    #[error("no radius on the grid up to {rmax} certifies the coefficient growth")]
    NoCertifyingRadius { rmax: f64 },

    #[error(transparent)]
    Series(#[from] SeriesError),
}
