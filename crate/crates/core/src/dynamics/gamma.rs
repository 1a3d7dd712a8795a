//! Radii from the Taylor-coefficient condition
//! `max_n |f^(n)(x0)/n!|_p r^(n-1) < 1`.
//!
//! A radius `r = p^(-s)`, `s` real, is admissible when every term has
//! valuation `v(c_n) + s (n - 1) > 0`. The admissible `s` form a ray; its
//! endpoint is an integer for this map and is either included (`attained`)
//! or not. In both cases the open ball of the endpoint radius lies in the
//! union of admissible balls.

use serde::{Deserialize, Serialize};

use super::classify::{classify, FixedPointNature, NormProfile};
use super::map::{derivative, factorial, multiplier, FixedPoint, MapParams};
use crate::error::{Error, Result};
use crate::padic::{ExtValuation, UltrametricRegion};

/// Upper end of the brute-force scan over `n`.
pub const BRUTE_FORCE_TERMS: u32 = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GammaCondition {
    /// Attractor of `x1`; terms `n >= 1` at `x1`.
    Gamma1,
    /// Siegel disk of an indifferent `x2`; terms `n >= 2` at `x2`.
    Gamma2,
    /// Attractor of an attracting `x2`; terms `n >= 1` at `x2`.
    Gamma3,
}

impl GammaCondition {
    pub fn fixed_point(&self) -> FixedPoint {
        match self {
            GammaCondition::Gamma1 => FixedPoint::X1,
            GammaCondition::Gamma2 | GammaCondition::Gamma3 => FixedPoint::X2,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GammaCondition::Gamma1 => "Gamma1",
            GammaCondition::Gamma2 => "Gamma2",
            GammaCondition::Gamma3 => "Gamma3",
        }
    }
}

/// Endpoint of the admissible radii: `r* = p^(-exponent)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RadiusBound {
    pub exponent: i64,
    pub attained: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaRadius {
    pub condition: GammaCondition,
    pub symbolic: RadiusBound,
    pub brute_force: RadiusBound,
    /// `B_{r*}(x0)`.
    pub region: UltrametricRegion,
}

impl GammaRadius {
    pub fn agrees(&self) -> bool {
        self.symbolic == self.brute_force
    }
}

pub fn gamma_radius(m: &MapParams, condition: GammaCondition) -> Result<GammaRadius> {
    let nature = classify(m).tag.nature();
    match (condition, nature) {
        (GammaCondition::Gamma1, _)
        | (GammaCondition::Gamma2, FixedPointNature::Indifferent)
        | (GammaCondition::Gamma3, FixedPointNature::Attracting) => {}
        _ => {
            return Err(Error::WrongCase(format!(
                "{} does not apply when x2 is {:?}",
                condition.name(),
                nature
            )))
        }
    }
    let symbolic = symbolic_bound(&NormProfile::of(m), condition);
    let brute_force = brute_force_bound(m, condition, BRUTE_FORCE_TERMS)?;
    let region = UltrametricRegion::open_ball(
        m.fixed_point(condition.fixed_point()),
        symbolic.exponent,
    );
    Ok(GammaRadius {
        condition,
        symbolic,
        brute_force,
        region,
    })
}

/// From the closed-form derivatives the term valuations are linear in `n`,
/// `v(c_n) = (n - 1) K + L` for `n >= 2`:
///
/// - at `x1`: `K = v(b)`, `L = v(a) - v(b)`;
/// - at `x2`: `K = v(b) + v(a-b) - v(a)`, `L = 2 v(a-b) - v(a) - v(b)`.
///
/// Admissibility is `s > -K - L/(n-1)` for all `n >= 2`. For `L < 0` the
/// binding term is `n = 2` and the endpoint `-(K + L)` is excluded; for
/// `L > 0` the bound `-K` is approached but never reached, so it is
/// included; for `L = 0` every term binds at `-K`, excluded.
pub fn symbolic_bound(n: &NormProfile, condition: GammaCondition) -> RadiusBound {
    let (k, l) = match condition {
        GammaCondition::Gamma1 => (n.v_b, n.v_a - n.v_b),
        GammaCondition::Gamma2 | GammaCondition::Gamma3 => (
            n.v_b + n.v_a_minus_b - n.v_a,
            2 * n.v_a_minus_b - n.v_a - n.v_b,
        ),
    };
    match l.signum() {
        -1 => RadiusBound {
            exponent: -(k + l),
            attained: false,
        },
        1 => RadiusBound {
            exponent: -k,
            attained: true,
        },
        _ => RadiusBound {
            exponent: -k,
            attained: false,
        },
    }
}

/// Evaluates `c_n = f^(n)(x0)/n!` exactly from the general derivative
/// formula for `n <= terms` and scans integer exponents for the first one
/// admissible from below.
pub fn brute_force_bound(
    m: &MapParams,
    condition: GammaCondition,
    terms: u32,
) -> Result<RadiusBound> {
    let x0 = m.fixed_point(condition.fixed_point());
    let first = match condition {
        GammaCondition::Gamma2 => None,
        GammaCondition::Gamma1 | GammaCondition::Gamma3 => {
            let c1 = multiplier(m, condition.fixed_point());
            Some(c1.valuation())
        }
    };
    if let Some(v) = first {
        if v <= ExtValuation::Finite(0) {
            return Err(Error::WrongCase(format!(
                "{}: first-order term has norm >= 1",
                condition.name()
            )));
        }
    }
    let mut vals: Vec<(i64, i64)> = Vec::with_capacity(terms as usize);
    for n in 2..=terms {
        let c = derivative(m, &x0, n)?;
        let c = c.sibling(c.value() / num_rational::BigRational::from_integer(factorial(n)));
        if let ExtValuation::Finite(v) = c.valuation() {
            vals.push((n as i64, v));
        }
    }
    let admissible_below = |s: i64| vals.iter().all(|&(n, v)| v + s * (n - 1) >= 0);
    let admissible_at = |s: i64| vals.iter().all(|&(n, v)| v + s * (n - 1) > 0);

    let spread = vals.iter().map(|&(_, v)| v.abs()).max().unwrap_or(0) + 2;
    let mut lo = -spread;
    let mut hi = spread;
    while admissible_below(lo) {
        lo -= spread;
    }
    while !admissible_below(hi) {
        hi += spread;
    }
    // smallest s admissible from below, by bisection on the monotone predicate
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if admissible_below(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(RadiusBound {
        exponent: hi,
        attained: admissible_at(hi),
    })
}
