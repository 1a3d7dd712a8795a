//! The rational map `f(x) = a x^2 / (b x + 1)` over `Q_p`: evaluation,
//! fixed-point classification, basin regions, orbits and periodic points.

mod classify;
mod gamma;
mod map;
mod orbit;
mod roots;

pub use classify::{
    classify, classify_profile, multiplier_nature, radius_sequences, region_report, Case, CaseTag,
    ExceptionalSpheres, FixedPointNature, NormProfile, RadiusSequences, RegionReport, SphereHit,
    X2Role,
};
pub use gamma::{
    brute_force_bound, gamma_radius, symbolic_bound, GammaCondition, GammaRadius, RadiusBound,
    BRUTE_FORCE_TERMS,
};
pub use map::{
    apply, apply2, delta_identities, derivative, multiplier,
    nth_derivative_at_fixed_point, DeltaResiduals, FixedPoint, MapParams,
};
pub use orbit::{
    basin_test, basin_test_with, iterate, siegel_invariance_test, sphere_exit_step, BasinConfig,
    BasinOutcome, IterateConfig, Precision, SiegelReport, SphereExit, StopRule, TerminalEvent,
    Trajectory, DEFAULT_CONVERGENCE_THRESHOLD, DEFAULT_ESCAPE_WINDOW,
};
pub use roots::{
    factorization_residuals, period2_cubic, period2_numerator, period2_points, period2_quotient,
    preimages, x2_factor, FactorizationResiduals, Poly, RootCheck,
};
