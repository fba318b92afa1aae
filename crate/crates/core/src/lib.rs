//! Certification engine for anticanonically embedded quasi-smooth log del
//! Pezzo surfaces `X_d` in weighted projective 3-space.
//!
//! All bounds are exact rationals. A surface is described by its weights and
//! by which coefficients of its equation vanish; everything else is generic.

pub mod certify;
pub mod cli;
pub mod error;
pub mod exact;
pub mod quasismooth;
pub mod search;
pub mod wps;

pub use error::{Error, Result};
pub use exact::{Rat, Q};
