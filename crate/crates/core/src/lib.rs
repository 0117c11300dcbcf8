//! Minimal free resolutions of generalized mixed product ideals.
//!
//! The crate is organised bottom-up:
//!
//! * [`monomial`]: exponent vectors, block-partitioned variable contexts and
//!   monomial ideal arithmetic.
//! * [`complex`]: multigraded free complexes over `Q[x]`, Taylor complexes,
//!   minimalization, strands, Betti tables and chain-map lifting.
//! * [`gmpi`]: generalized mixed product ideals, the induced complex of
//!   ideals, the double complex of tensor-product resolutions and its total
//!   complex.
//! * [`families`]: example families and seeded random instances.
//! * [`verify`]: an independent oracle and the theorem checks.
//! * [`document`]: the JSON instance format.

pub mod complex;
pub mod document;
pub mod error;
pub mod families;
pub mod gmpi;
pub mod linalg;
pub mod monomial;
pub mod verify;

pub use error::{Error, Result};
