//! Spectral solver and verification toolkit for PT-symmetric quantum star graphs.
//!
//! * [`graph`]: star graph geometry, grids, composite Simpson quadrature.
//! * [`boundary`]: boundary-condition matrices, trace vectors, inner products, skew forms.
//! * [`spectral`]: secular equation, root finding, normalized eigenmodes.
//! * [`dynamics`]: spectral time evolution and vertex probability currents.
//! * [`cli`]: the `ptgraph` command-line front end.

pub mod boundary;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod graph;
pub mod linalg;
pub mod spectral;

pub use error::{Error, Result};
