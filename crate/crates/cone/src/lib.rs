mod apply;
mod bessel;
mod error;
mod geometry;
mod green;
mod grid;
mod laplacian;
mod quad;

pub use apply::{green_apply, GreenApplyOutcome};
pub use bessel::{bessel_i, bessel_i_scaled, bessel_j, bessel_k, bessel_k_scaled};
pub use error::ConeError;
pub use geometry::{ConeGeometry, Point};
pub use green::{ConeGreenKernel, ModeRep};
pub use grid::{Axis, GridField, PolarProductGrid};
pub use laplacian::{degenerate_laplacian_apply, dirichlet_pairing, LaplacianForm};
pub use quad::{integrate, integrate_half_line, QuadConfig, QuadOutcome, QuadRule};
