//! The Diophantine monoid `M_m` attached to Fermat varieties of degree `m`,
//! its indecomposable elements, and the Hodge-label combinatorics built on it.

pub mod characters;
pub mod cycles;
pub mod error;
pub mod hilbert;
pub mod lattice;
pub mod monoid;

pub use error::{Error, Result};
