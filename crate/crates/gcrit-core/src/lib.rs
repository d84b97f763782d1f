//! Two-sided bounds on the critical coupling of attractive central
//! potentials.
//!
//! For an attractive potential V(r) = -g v(r) with v >= 0, the crate
//! brackets the critical strength g_c at which the first l-wave bound state
//! appears. It provides:
//!
//! * convergent sequences of upper limits from iterating the zero-energy
//!   Birman-Schwinger kernel (power, Kellogg and Kolomy quotients),
//! * a two-sided ladder of lower and upper limits built from the origin
//!   slope and the large-r limit of the iterated zero-energy functions,
//! * classic closed-form and variational limits (Glaser, Calogero, trace
//!   and Rayleigh-quotient bounds),
//! * the Taylor coefficients of the zero-energy Jost function and of its
//!   reciprocal, with their convolution and log-concavity identities,
//! * an independent shooting oracle with Bessel-function closed forms for
//!   the square well and the exponential well.
//!
//! All radial integrals run on shared spectral panel grids (see
//! [`quadrature`]), so iterated quantities stay coherent to machine
//! precision and the monotonicity of every sequence survives
//! discretization.

pub mod classic_bounds;
pub mod error;
pub mod jost;
pub mod kernel;
pub mod optimize;
pub mod oracle;
pub mod potential;
pub mod quadrature;
pub mod sequences;
pub mod special;

pub use error::{Error, Result};
pub use kernel::{BsOperator, GridFunction, Representation};
pub use potential::{
    make_exponential, make_r_exponential, make_square_well, reduce_to_s_wave, AngularMomentum,
    PotentialShape,
};
pub use quadrature::{build_grid, integrate, QuadratureScheme, RadialGrid};
pub use sequences::{BoundSequence, Bracket, Direction, Method};
