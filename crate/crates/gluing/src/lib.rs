//! Cutoff profiles with verified inequalities and grid level gluing checks.
//!
//! The profile is a compactly supported density whose primitive interpolates
//! between x^2 near the origin and 0 past a cutoff, with slope and area
//! inequalities that make the induced transition function usable for gluing
//! subharmonic potentials and Kahler metrics.
//!
//! ```
//! use dcma_gluing::{find_parameters, property_check, SearchConfig};
//!
//! let profile = find_parameters(1.0, &SearchConfig::default()).unwrap();
//! let x = 0.5 * profile.eps;
//! assert_eq!(profile.htilde_eval(x), 2.0 * x);
//! assert!(property_check(&profile, 2048).pass());
//! ```

mod check;
mod error;
mod glue;
mod kahler;
mod profile;
mod search;

pub use check::{integrate, property_check, Margin, PropertyReport};
pub use error::GluingError;
pub use glue::{
    glue_subharmonic, transition_laplacian, transition_prediction, PolarField, SubharmonicReport,
    TransitionScan,
};
pub use kahler::{glue_kahler_check, KahlerGlueReport};
pub use profile::GluingProfile;
pub use search::{find_parameters, SearchConfig};
