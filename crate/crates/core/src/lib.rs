//! Exact p-adic arithmetic and a verification toolkit for the rational
//! dynamical system `f(x) = a x^2 / (b x + 1)` over `Q_p`.
//!
//! - [`padic`]: valuations, canonical digits, Hensel roots, balls and
//!   spheres, Haar measure, seeded sampling.
//! - [`dynamics`]: fixed points and multipliers, the case split by the
//!   norm of `2a - b`, attractor and Siegel-disk radii, orbits, basins,
//!   preimages and period-two points.
//! - [`ergodicity`]: the normalized map `x^2 / (b x + 1)` on spheres around
//!   its indifferent fixed point, the residue model and the invariant set
//!   that witnesses non-ergodicity.
//! - [`verify`]: verification suites shared by the CLI.

pub mod dynamics;
pub mod ergodicity;
pub mod error;
pub mod instances;
pub mod padic;
pub mod verify;

pub use error::{Error, Result};
