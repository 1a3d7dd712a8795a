//! Non-ergodicity of `x^2/(bx+1)` on spheres around its indifferent fixed
//! point when `|b|_p < 1`.
//!
//! A point `y` of `S_rho(x2)` moves exactly `rho` under `f` and returns
//! within `r0 = rho |b|_p` after two steps, so the two balls of radius `r0`
//! around `y` and `f(y)` are swapped by `f`. Their union is invariant with
//! measure strictly between zero and that of the sphere. Invariance is
//! confirmed by sweeping residue classes mod `p^k`.

mod checks;
mod instance;
mod residue;
mod verdict;

pub use checks::{
    ball_image_check, conjugation_residual, displacement_check, second_iterate_bound,
    second_iterate_identity_residual, second_iterate_identity_residual_uncorrected,
    DisplacementCheck, SecondIterateCheck,
};
pub use instance::SphereInstance;
pub use residue::ResidueModel;
pub use verdict::{
    build_invariant_set, ergodicity_verdict, forward_closure, invariance_check, BallVariant,
    CandidateOutcome, ClosureViolation, ErgodicityReport, InvarianceResult,
    InvariantSetCandidate, Verdict,
};
