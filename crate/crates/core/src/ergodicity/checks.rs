use serde::{Deserialize, Serialize};

use super::instance::SphereInstance;
use super::residue::ResidueModel;
use crate::dynamics::{apply, apply2, MapParams};
use crate::error::{Error, Result};
use crate::padic::{ExtValuation, PadicRational, RegionKind, UltrametricRegion};

/// Whether `f` maps a ball inside the sphere onto the ball of the same
/// radius around the image of its center, decided over residues mod `p^k`.
/// Both inclusions are checked, as is the residue of `f(center)`.
pub fn ball_image_check(inst: &SphereInstance, ball: &UltrametricRegion, k: u32) -> Result<bool> {
    if ball.kind == RegionKind::Sphere {
        return Err(Error::InvalidRegion("expected a ball, got a sphere".into()));
    }
    inst.require_on_sphere(&ball.center)?;
    if ball.exponent <= inst.m() {
        return Err(Error::Precondition(format!(
            "{ball} is not smaller than rho = {}^-{}",
            inst.p(),
            inst.m()
        )));
    }
    if (k as i64) < ball.exponent + 2 {
        return Err(Error::Precondition(format!(
            "residue exponent {k} is below {} for {ball}",
            ball.exponent + 2
        )));
    }
    let model = ResidueModel::new(inst, k)?;
    let image_center = apply(inst.map(), &ball.center)?;
    let target = UltrametricRegion::new(ball.kind, image_center.clone(), ball.exponent);
    let mut image = std::collections::BTreeSet::new();
    for r in model.residues_in(ball)? {
        image.insert(model.transition(&r)?);
    }
    let target_set = model.residues_in(&target)?;
    Ok(image == target_set && image.contains(&model.residue_of(&image_center)?))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisplacementCheck {
    /// `valuation(f(y) - y)`.
    pub valuation: ExtValuation,
    /// `|f(y) - y| = rho`.
    pub equals_rho: bool,
}

/// Points of the sphere move exactly distance `rho`, so `B_r(y)` and
/// `B_r(f(y))` are disjoint for every `r < rho`.
pub fn displacement_check(inst: &SphereInstance, y: &PadicRational) -> Result<DisplacementCheck> {
    inst.require_on_sphere(y)?;
    let valuation = (&apply(inst.map(), y)? - y).valuation();
    Ok(DisplacementCheck {
        valuation,
        equals_rho: valuation == ExtValuation::Finite(inst.m()),
    })
}

/// `(f(f(x)) - x)(x - P) - (1-b)/b [f(x)/((f(x) - P) b) (x + 1) + x](x - x2)`,
/// identically zero.
pub fn second_iterate_identity_residual(
    inst: &SphereInstance,
    x: &PadicRational,
) -> Result<PadicRational> {
    second_iterate_residual_with(inst, x, false)
}

/// The same identity with `x - P` in place of `f(x) - P` inside the
/// bracket. This form is not an identity; kept as a diagnostic.
pub fn second_iterate_identity_residual_uncorrected(
    inst: &SphereInstance,
    x: &PadicRational,
) -> Result<PadicRational> {
    second_iterate_residual_with(inst, x, true)
}

fn second_iterate_residual_with(
    inst: &SphereInstance,
    x: &PadicRational,
    uncorrected: bool,
) -> Result<PadicRational> {
    let m = inst.map();
    let x = m.lift(x);
    let fx = apply(m, &x)?;
    let ffx = apply(m, &fx)?;
    let b = inst.b();
    let one = x.sibling_int(1);
    let p = inst.pole();
    let lhs = (&ffx - &x) * (&x - p);
    let shifted = if uncorrected { &x - p } else { &fx - p };
    let bracket = fx.checked_div(&(shifted * b))? * (&x + &one) + &x;
    let rhs = (&one - b).checked_div(b)? * bracket * (&x - inst.x2());
    Ok(lhs - rhs)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SecondIterateCheck {
    /// `valuation(f(f(y)) - y)`.
    pub valuation: ExtValuation,
    /// `|f(f(y)) - y| <= r0`.
    pub within_r0: bool,
    /// `|f(f(y)) - y| < r0`.
    pub strict: bool,
}

/// Two steps return within `r0 = rho |b|` of the start.
pub fn second_iterate_bound(inst: &SphereInstance, y: &PadicRational) -> Result<SecondIterateCheck> {
    inst.require_on_sphere(y)?;
    let valuation = (&apply2(inst.map(), y)? - y).valuation();
    let r0 = inst.r0_exponent();
    Ok(SecondIterateCheck {
        valuation,
        within_r0: valuation.at_least(r0),
        strict: valuation.at_least(r0 + 1),
    })
}

/// `S(f(S^-1(x))) - h(x)` with `S(x) = a x`, `f(x) = x^2/(bx+1)` and
/// `h(x) = x^2/(bx+a)`. Zero whenever defined.
pub fn conjugation_residual(
    a: &PadicRational,
    b: &PadicRational,
    x: &PadicRational,
) -> Result<PadicRational> {
    if a.is_zero() {
        return Err(Error::InvalidParams("a = 0 gives no conjugacy".into()));
    }
    let normalized = MapParams::new(a.sibling_int(1), b.clone())?;
    let pre = x.checked_div(a)?;
    let conjugated = a * &apply(&normalized, &pre)?;
    let den = b * x + a;
    if den.is_zero() {
        return Err(Error::PoleHit);
    }
    let h = x.square().checked_div(&den)?;
    Ok(conjugated - h)
}
