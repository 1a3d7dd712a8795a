use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{mod_inverse, p_power, PadicRational};

/// `x = p^gamma * (d_0 + d_1 p + d_2 p^2 + ...)` truncated to `N` digits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalExpansion {
    pub p: u32,
    pub gamma: i64,
    pub digits: Vec<u32>,
}

impl CanonicalExpansion {
    /// `p^gamma * Σ digits[j] p^j` as an exact rational.
    pub fn partial_sum(&self) -> BigRational {
        let p = BigInt::from(self.p);
        let mut acc = BigInt::zero();
        for &d in self.digits.iter().rev() {
            acc = acc * &p + BigInt::from(d);
        }
        BigRational::from_integer(acc) * p_power(self.p, self.gamma)
    }
}

/// Canonical digit expansion to the context's precision. Zero maps to
/// `gamma = 0` with all-zero digits.
pub fn canonical_digits(x: &PadicRational) -> CanonicalExpansion {
    let ctx = x.ctx();
    let n = ctx.precision();
    let Some((gamma, unit)) = x.unit_part() else {
        return CanonicalExpansion {
            p: ctx.p(),
            gamma: 0,
            digits: vec![0; n as usize],
        };
    };
    let modulus = ctx.p_pow(n);
    let inv = mod_inverse(unit.denom(), &modulus).expect("unit denominator");
    let mut r = (unit.numer() * inv).mod_floor(&modulus);
    let p = ctx.p_big();
    let mut digits = Vec::with_capacity(n as usize);
    for _ in 0..n {
        let (q, d) = r.div_rem(&p);
        digits.push(d.to_u32().expect("digit below p"));
        r = q;
    }
    CanonicalExpansion {
        p: ctx.p(),
        gamma,
        digits,
    }
}
