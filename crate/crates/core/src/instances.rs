//! Demonstration parameters, one per case realizable in `Q_p`, and seeded
//! generators of random parameters and points.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use crate::dynamics::{CaseTag, MapParams};
use crate::error::Result;
use crate::padic::{p_power, random_digits, PadicRational, PrimeContext};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuiltinInstance {
    pub name: &'static str,
    pub p: u32,
    pub a: i64,
    pub b: i64,
    pub case: CaseTag,
    /// How the expected case was established.
    pub provenance: &'static str,
}

impl BuiltinInstance {
    pub fn params(&self, precision: u32) -> Result<MapParams> {
        MapParams::from_ints(PrimeContext::new(self.p, precision)?, self.a, self.b)
    }
}

pub const BUILTIN_INSTANCES: [BuiltinInstance; 8] = [
    BuiltinInstance {
        name: "repelling",
        p: 5,
        a: 5,
        b: 1,
        case: CaseTag::Repelling1a,
        provenance: "classification oracle",
    },
    BuiltinInstance {
        name: "siegel-2a",
        p: 3,
        a: 1,
        b: 3,
        case: CaseTag::Indifferent2a,
        provenance: "classification oracle",
    },
    BuiltinInstance {
        name: "siegel-2b-inner",
        p: 3,
        a: 1,
        b: 4,
        case: CaseTag::Indifferent2b,
        provenance: "classification oracle; |a-b| < |b|",
    },
    BuiltinInstance {
        name: "siegel-2b-outer",
        p: 5,
        a: 1,
        b: 3,
        case: CaseTag::Indifferent2b,
        provenance: "classification oracle; |a-b| = |b|",
    },
    BuiltinInstance {
        name: "siegel-2c",
        p: 2,
        a: 1,
        b: 3,
        case: CaseTag::Indifferent2c,
        provenance: "classification oracle",
    },
    BuiltinInstance {
        name: "attracting-3a",
        p: 2,
        a: 1,
        b: 4,
        case: CaseTag::Attracting3a,
        provenance: "classification oracle",
    },
    BuiltinInstance {
        name: "attracting-3b",
        p: 3,
        a: 1,
        b: 5,
        case: CaseTag::Attracting3b,
        provenance: "classification oracle",
    },
    BuiltinInstance {
        name: "attracting-3b-p2",
        p: 2,
        a: 1,
        b: 6,
        case: CaseTag::Attracting3b,
        provenance: "classification oracle",
    },
];

/// `±p^v u` with `v` in `[v_min, v_max]` and `u` a unit below `p^4`.
pub fn random_scalar<R: Rng + ?Sized>(
    rng: &mut R,
    ctx: PrimeContext,
    v_min: i64,
    v_max: i64,
) -> PadicRational {
    let v = rng.gen_range(v_min..=v_max);
    let mut u = random_digits(rng, ctx.p(), 4, true);
    if rng.gen_bool(0.5) {
        u = -u;
    }
    PadicRational::new(ctx, p_power(ctx.p(), v) * BigRational::from_integer(u))
}

/// A nonzero rational `±p^v n/d` with `n, d` units below `p^4`.
pub fn random_point<R: Rng + ?Sized>(rng: &mut R, ctx: PrimeContext, v_min: i64, v_max: i64) -> PadicRational {
    let n = random_scalar(rng, ctx, v_min, v_max);
    let d: BigInt = random_digits(rng, ctx.p(), 4, true);
    n.sibling(n.value() / BigRational::from_integer(d))
}

/// Random `(a, b)` with `a != 0`, `b != 0` and `a != b`.
pub fn random_params<R: Rng + ?Sized>(rng: &mut R, ctx: PrimeContext) -> MapParams {
    loop {
        let a = random_scalar(rng, ctx, -3, 3);
        let b = random_scalar(rng, ctx, -3, 3);
        if let Ok(m) = MapParams::new(a, b) {
            return m;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::classify;
    use crate::padic::rng_from_seed;

    #[test]
    fn builtins_have_their_case() {
        for inst in BUILTIN_INSTANCES {
            let m = inst.params(32).unwrap();
            let case = classify(&m);
            assert_eq!(case.tag, inst.case, "{}", inst.name);
            assert!(case.realizable_in_qp);
        }
        // every realizable case is demonstrated
        for tag in CaseTag::ALL {
            let realizable = [2, 3, 5].iter().any(|&p| tag.realizable_in_qp(p));
            assert_eq!(realizable, BUILTIN_INSTANCES.iter().any(|i| i.case == tag));
        }
    }

    #[test]
    fn random_scalars_have_requested_valuation() {
        let ctx = PrimeContext::new(7, 16).unwrap();
        let mut rng = rng_from_seed(5);
        for _ in 0..200 {
            let x = random_scalar(&mut rng, ctx, -3, 3);
            let v = x.valuation().finite().unwrap();
            assert!((-3..=3).contains(&v));
            let y = random_point(&mut rng, ctx, 0, 0);
            assert_eq!(y.valuation().finite(), Some(0));
        }
        let m = random_params(&mut rng, ctx);
        assert!(m.a() != m.b());
    }
}
