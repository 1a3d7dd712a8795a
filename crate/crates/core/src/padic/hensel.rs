use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::rational::{is_perfect_square, mod_inverse, p_power, PadicRational};
use crate::error::{Error, Result};

/// Extra digits carried by [`solve_quadratic`] beyond the context
/// precision, on top of the valuation spread of the coefficients.
pub const QUADRATIC_EXTRA_DIGITS: u32 = 8;

/// Square root in `Q_p` for odd `p`.
///
/// Exact rational squares come back exactly (the non-negative root).
/// Otherwise the result is `p^(v/2) * t` with `t` an integer Hensel lift
/// satisfying `valuation(r^2 - x) >= valuation(x) + N`; the lift starts
/// from the smaller of the two roots mod `p`. `None` when `x` is not a
/// square in `Q_p`.
pub fn sqrt_hensel(x: &PadicRational) -> Result<Option<PadicRational>> {
    sqrt_to_depth(x, x.ctx().precision())
}

pub(crate) fn sqrt_to_depth(x: &PadicRational, depth: u32) -> Result<Option<PadicRational>> {
    let ctx = x.ctx();
    if ctx.p() == 2 {
        return Err(Error::UnsupportedPrime(2));
    }
    let Some((v, unit)) = x.unit_part() else {
        return Ok(Some(x.clone()));
    };
    if let (Some(n), Some(d)) = (
        is_perfect_square(x.value().numer()),
        is_perfect_square(x.value().denom()),
    ) {
        return Ok(Some(x.sibling(BigRational::new(n, d))));
    }
    if v.is_odd() {
        return Ok(None);
    }
    let modulus = ctx.p_pow(depth);
    let inv = mod_inverse(unit.denom(), &modulus).expect("unit denominator");
    let u = (unit.numer() * inv).mod_floor(&modulus);

    let p = ctx.p() as u64;
    let u_mod_p = (&u % BigInt::from(p)).to_u64().expect("residue below p");
    let Some(r0) = sqrt_mod_prime(u_mod_p, p) else {
        return Ok(None);
    };
    let t = hensel_lift(BigInt::from(r0.min(p - r0)), &u, ctx.p(), depth);
    Ok(Some(x.sibling(BigRational::from_integer(t) * p_power(ctx.p(), v / 2))))
}

/// Lifts `r` with `r^2 ≡ u (mod p)` to a root mod `p^depth` by Newton
/// steps that double the number of correct digits.
fn hensel_lift(mut r: BigInt, u: &BigInt, p: u32, depth: u32) -> BigInt {
    let p_big = BigInt::from(p);
    let mut k = 1u32;
    while k < depth {
        k = (2 * k).min(depth);
        let m = num_traits::pow(p_big.clone(), k as usize);
        let f = (&r * &r - u).mod_floor(&m);
        let df = mod_inverse(&(BigInt::from(2) * &r), &m).expect("2r is a unit for odd p");
        r = (&r - f * df).mod_floor(&m);
    }
    r
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        e >>= 1;
    }
    acc
}

/// Tonelli–Shanks. `n` must be reduced mod the odd prime `p`.
pub(crate) fn sqrt_mod_prime(n: u64, p: u64) -> Option<u64> {
    if n == 0 {
        return Some(0);
    }
    if pow_mod(n, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(n, (p + 1) / 4, p));
    }
    let mut q = p - 1;
    let mut s = 0u32;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2u64;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(n, q, p);
    let mut r = pow_mod(n, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 1u32;
        let mut t2 = mul_mod(t, t, p);
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1u64 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Roots of `A x^2 + B x + C` in `Q_p` for odd `p`, in ascending rational
/// order.
///
/// A zero discriminant gives the double root once. A discriminant that is
/// a rational square gives exact roots. Otherwise the square root is lifted
/// to `N + QUADRATIC_EXTRA_DIGITS + |v(A)| + |v(D)|` digits, which makes
/// every returned root satisfy `valuation(A r^2 + B r + C) >= N` (no guard
/// digits are given up) and places it within `p^-(N + 8)` of a true root.
pub fn solve_quadratic(
    a: &PadicRational,
    b: &PadicRational,
    c: &PadicRational,
) -> Result<Vec<PadicRational>> {
    a.check_ctx(b)?;
    a.check_ctx(c)?;
    let ctx = a.ctx();
    if ctx.p() == 2 {
        return Err(Error::UnsupportedPrime(2));
    }
    if a.is_zero() {
        return Err(Error::DegenerateLeadingCoefficient);
    }
    let disc = b.square() - a * c * a.sibling_int(4);
    let two_a = a * &a.sibling_int(2);
    let neg_b = -b;
    if disc.is_zero() {
        return Ok(vec![neg_b.checked_div(&two_a)?]);
    }
    let va = a.valuation().finite().expect("a != 0");
    let vd = disc.valuation().finite().expect("disc != 0");
    let depth = ctx.precision() + QUADRATIC_EXTRA_DIGITS + va.unsigned_abs() as u32 + vd.unsigned_abs() as u32;
    let Some(s) = sqrt_to_depth(&disc, depth)? else {
        return Ok(Vec::new());
    };
    let mut roots = vec![
        (&neg_b + &s).checked_div(&two_a)?,
        (&neg_b - &s).checked_div(&two_a)?,
    ];
    roots.sort_by(|x, y| x.value().cmp(y.value()));
    Ok(roots)
}

/// `A r^2 + B r + C`.
pub fn quadratic_residual(
    a: &PadicRational,
    b: &PadicRational,
    c: &PadicRational,
    r: &PadicRational,
) -> PadicRational {
    a * &r.square() + b * r + c
}
