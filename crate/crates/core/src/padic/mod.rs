//! Exact arithmetic in `Q_p` over arbitrary-precision rationals.
//!
//! Every scalar is a reduced rational carried with its [`PrimeContext`].
//! Norms are never materialized as floats: all comparisons go through
//! [`ExtValuation`], where a larger valuation means a smaller norm.

mod context;
mod expansion;
mod hensel;
mod rational;
mod region;
mod sample;

pub use context::{is_prime, PrimeContext, DEFAULT_PRECISION};
pub use expansion::{canonical_digits, CanonicalExpansion};
pub use hensel::{quadratic_residual, solve_quadratic, sqrt_hensel, QUADRATIC_EXTRA_DIGITS};
pub use rational::{p_power, ExtValuation, PadicRational};
pub use region::{measure, HaarMeasure, RegionKind, UltrametricRegion};
pub use sample::{
    random_digits, rng_from_seed, sample_region_with, sample_sphere, sample_sphere_with, SampleRng,
};

pub(crate) use rational::mod_inverse;
