//! Scattering lengths, energy bounds and condensation certificates for dilute
//! Bose gases on hyperbolic surfaces and three-manifolds.
//!
//! The crate is organized bottom-up:
//!
//! - [`geometry`]: points, distances and the radial volume measure of `H^d`.
//! - [`scattering`]: the zero-energy two-body problem and the scattering length.
//! - [`bounds`]: diluteness parameter, energy upper bounds, condensate fraction.
//! - [`manifolds`]: volumes and spectral gaps of the supported manifold families,
//!   and the certificate that ties everything together.
//! - [`oracles`]: independent finite-difference checks used by tests and `verify`.

pub mod bounds;
pub mod error;
pub mod geometry;
pub mod manifolds;
pub mod oracles;
pub mod quadrature;
pub mod scattering;

pub use error::{Error, Result};
pub use geometry::Dimension;
pub use scattering::{Potential, RadialProfile, ScatteringParams, ScatteringSolution, SolverOptions};
