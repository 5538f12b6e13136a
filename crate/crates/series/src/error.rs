//! Error types for series and polynomial arithmetic.

use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum SeriesError {
    #[error("monomial has {got} exponents, expected {expected}")]
    BadMonomial { expected: usize, got: usize },

    #[error("monomial total degree {degree} exceeds cap {cap}")]
    DegreeOverflow { degree: usize, cap: usize },

    #[error("polynomial shapes differ: (nw, d) = {left:?} vs {right:?}")]
    PolyShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("series shapes differ: (K, L, nw, d) = {left:?} vs {right:?}")]
    ShapeMismatch {
        left: (usize, usize, usize, usize),
        right: (usize, usize, usize, usize),
    },

    #[error("coefficient index ({k}, {l}) outside window ({kmax}, {lmax})")]
    IndexOutOfWindow {
        k: usize,
        l: usize,
        kmax: usize,
        lmax: usize,
    },

    #[error("unknown variable slot {index}")]
    UnknownVariable { index: usize },

    #[error("matrix is {got}x{got}, expected {expected}x{expected}")]
    MatrixShape { expected: usize, got: usize },

    #[error("matrix entry ({row}, {col}) breaks Hermitian symmetry")]
    NotHermitian { row: usize, col: usize },

    #[error("constant term modulus {modulus:.3e} too small to invert")]
    NonInvertibleConstant { modulus: f64 },

    #[error("series is not real: coefficient ({k}, {l}) is not the conjugate image of ({l}, {k})")]
    NotReal { k: usize, l: usize },

    #[error("json structure invalid: {reason}")]
    Json { reason: String },
}
