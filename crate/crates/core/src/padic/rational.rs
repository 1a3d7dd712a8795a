use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::context::PrimeContext;
use crate::error::{Error, Result};

/// Valuation on `Q ∪ {0}`: `Infinity` is the valuation of zero.
///
/// The derived ordering puts every finite value below `Infinity`, which is
/// what norm comparisons need: a larger valuation is a smaller norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ExtValuation {
    Finite(i64),
    Infinity,
}

impl ExtValuation {
    pub fn is_finite(&self) -> bool {
        matches!(self, ExtValuation::Finite(_))
    }

    pub fn finite(&self) -> Option<i64> {
        match self {
            ExtValuation::Finite(v) => Some(*v),
            ExtValuation::Infinity => None,
        }
    }

    /// Valuation of a product.
    pub fn plus(self, other: ExtValuation) -> ExtValuation {
        match (self, other) {
            (ExtValuation::Finite(a), ExtValuation::Finite(b)) => ExtValuation::Finite(a + b),
            _ => ExtValuation::Infinity,
        }
    }

    pub fn shift(self, by: i64) -> ExtValuation {
        match self {
            ExtValuation::Finite(a) => ExtValuation::Finite(a + by),
            ExtValuation::Infinity => ExtValuation::Infinity,
        }
    }

    /// `true` iff the norm is at most `p^(-k)`.
    pub fn at_least(&self, k: i64) -> bool {
        *self >= ExtValuation::Finite(k)
    }

    /// Norm `p^(-v)` as an exact rational; zero for `Infinity`.
    pub fn norm(&self, p: u32) -> BigRational {
        match self {
            ExtValuation::Finite(v) => p_power(p, -*v),
            ExtValuation::Infinity => BigRational::zero(),
        }
    }
}

impl fmt::Display for ExtValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtValuation::Finite(v) => write!(f, "{v}"),
            ExtValuation::Infinity => f.write_str("inf"),
        }
    }
}

/// `p^e` for any integer `e` as an exact rational.
pub fn p_power(p: u32, e: i64) -> BigRational {
    let mag = num_traits::pow(BigInt::from(p), e.unsigned_abs() as usize);
    if e >= 0 {
        BigRational::from_integer(mag)
    } else {
        BigRational::new(BigInt::one(), mag)
    }
}

/// Splits `n != 0` as `p^k * m` with `p ∤ m`.
pub(crate) fn split_p_power(n: &BigInt, p: &BigInt) -> (i64, BigInt) {
    debug_assert!(!n.is_zero());
    let mut k = 0i64;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return (k, m);
        }
        m = q;
        k += 1;
    }
}

/// Inverse of `a` modulo `m`, normalized into `[0, m)`.
pub(crate) fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

/// An exact rational number interpreted in `Q_p`.
///
/// `num_rational` keeps the value reduced with a positive denominator after
/// every operation, so valuations are read directly off numerator and
/// denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PadicRational {
    value: BigRational,
    ctx: PrimeContext,
}

impl PadicRational {
    pub fn new(ctx: PrimeContext, value: BigRational) -> Self {
        Self { value, ctx }
    }

    pub fn from_int(ctx: PrimeContext, n: i64) -> Self {
        Self::new(ctx, BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(ctx: PrimeContext, n: BigInt) -> Self {
        Self::new(ctx, BigRational::from_integer(n))
    }

    pub fn from_frac(ctx: PrimeContext, num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::new(
            ctx,
            BigRational::new(BigInt::from(num), BigInt::from(den)),
        ))
    }

    /// `p^e * unit`.
    pub fn from_power(ctx: PrimeContext, e: i64, unit: BigRational) -> Self {
        Self::new(ctx, p_power(ctx.p(), e) * unit)
    }

    pub fn zero(ctx: PrimeContext) -> Self {
        Self::new(ctx, BigRational::zero())
    }

    pub fn one(ctx: PrimeContext) -> Self {
        Self::new(ctx, BigRational::one())
    }

    /// A value in the same context.
    pub fn sibling(&self, value: BigRational) -> Self {
        Self::new(self.ctx, value)
    }

    pub fn sibling_int(&self, n: i64) -> Self {
        Self::from_int(self.ctx, n)
    }

    pub fn ctx(&self) -> PrimeContext {
        self.ctx
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn into_value(self) -> BigRational {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn valuation(&self) -> ExtValuation {
        if self.value.is_zero() {
            return ExtValuation::Infinity;
        }
        let p = self.ctx.p_big();
        let (vn, _) = split_p_power(self.value.numer(), &p);
        let (vd, _) = split_p_power(self.value.denom(), &p);
        ExtValuation::Finite(vn - vd)
    }

    /// `(γ, u)` with `x = p^γ u` and `u` a p-adic unit. `None` for zero.
    pub fn unit_part(&self) -> Option<(i64, BigRational)> {
        if self.value.is_zero() {
            return None;
        }
        let p = self.ctx.p_big();
        let (vn, n) = split_p_power(self.value.numer(), &p);
        let (vd, d) = split_p_power(self.value.denom(), &p);
        Some((vn - vd, BigRational::new(n, d)))
    }

    /// The norm as an exact rational. Only for display; decisions go
    /// through [`ExtValuation`].
    pub fn norm(&self) -> BigRational {
        self.valuation().norm(self.ctx.p())
    }

    /// Compares `|self|_p` with `|other|_p`.
    pub fn norm_compare(&self, other: &Self) -> Result<Ordering> {
        self.check_ctx(other)?;
        Ok(other.valuation().cmp(&self.valuation()))
    }

    /// p-adic distance `valuation(self - other)`.
    pub fn distance_valuation(&self, other: &Self) -> ExtValuation {
        (self - other).valuation()
    }

    pub fn check_ctx(&self, other: &Self) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch {
                left: self.ctx,
                right: other.ctx,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        Ok(self.sibling(&self.value + &other.value))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        Ok(self.sibling(&self.value - &other.value))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        Ok(self.sibling(&self.value * &other.value))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.sibling(&self.value / &other.value))
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.sibling(self.value.recip()))
    }

    pub fn pow(&self, e: i32) -> Result<Self> {
        if e < 0 && self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.sibling(num_traits::Pow::pow(&self.value, e)))
    }

    pub fn square(&self) -> Self {
        self.sibling(&self.value * &self.value)
    }

    /// Rounds to absolute precision `p^k`: returns `y` with
    /// `valuation(self - y) >= k` whose denominator is a power of `p`
    /// and whose numerator is below `p^(k + e)`, `p^e` being that
    /// denominator.
    pub fn truncate(&self, k: i64) -> Self {
        let Some((v, _)) = self.unit_part() else {
            return self.clone();
        };
        if v >= k {
            return Self::zero(self.ctx);
        }
        let p = self.ctx.p_big();
        // x = numer / (p^e * den_unit) in lowest terms, so x * p^e is
        // p-integral and is reduced mod p^(k+e).
        let (e, den_unit) = split_p_power(self.value.denom(), &p);
        let modulus = num_traits::pow(p.clone(), (k + e) as usize);
        let inv = mod_inverse(&den_unit, &modulus).expect("unit denominator");
        let t = (self.value.numer() * inv).mod_floor(&modulus);
        let den = num_traits::pow(p, e as usize);
        self.sibling(BigRational::new(t, den))
    }

    /// Residue of a p-integral value modulo `p^k`, in `[0, p^k)`.
    pub fn residue(&self, k: u32) -> Result<BigInt> {
        if self.valuation() < ExtValuation::Finite(0) {
            return Err(Error::Precondition(format!(
                "{self} is not p-integral; no residue mod p^{k}"
            )));
        }
        let modulus = self.ctx.p_pow(k);
        let inv = mod_inverse(self.value.denom(), &modulus).expect("denominator is a p-unit");
        Ok((self.value.numer() * inv).mod_floor(&modulus))
    }
}

impl fmt::Display for PadicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.value.denom().is_one() {
            write!(f, "{}", self.value.numer())
        } else {
            write!(f, "{}/{}", self.value.numer(), self.value.denom())
        }
    }
}

impl fmt::Debug for PadicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (p={})", self, self.ctx.p())
    }
}

// Operator forms panic on a context mismatch; use the `checked_*` methods
// where the inputs are not already known to share a context.
macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&PadicRational> for &PadicRational {
            type Output = PadicRational;
            fn $method(self, rhs: &PadicRational) -> PadicRational {
                self.$checked(rhs).expect("p-adic context mismatch")
            }
        }
        impl $trait<PadicRational> for PadicRational {
            type Output = PadicRational;
            fn $method(self, rhs: PadicRational) -> PadicRational {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&PadicRational> for PadicRational {
            type Output = PadicRational;
            fn $method(self, rhs: &PadicRational) -> PadicRational {
                (&self).$method(rhs)
            }
        }
        impl $trait<PadicRational> for &PadicRational {
            type Output = PadicRational;
            fn $method(self, rhs: PadicRational) -> PadicRational {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &PadicRational {
    type Output = PadicRational;
    fn neg(self) -> PadicRational {
        self.sibling(-&self.value)
    }
}

impl Neg for PadicRational {
    type Output = PadicRational;
    fn neg(self) -> PadicRational {
        -&self
    }
}

impl PartialOrd for PadicRational {
    /// Archimedean order of the underlying rationals, only meaningful
    /// within one context. Used for canonical sorting of root lists.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.ctx != other.ctx {
            return None;
        }
        Some(self.value.cmp(&other.value))
    }
}

/// Sign-agnostic helper for callers building values from integers.
pub(crate) fn is_perfect_square(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u32) -> PrimeContext {
        PrimeContext::new(p, 16).unwrap()
    }

    fn q(p: u32, n: i64, d: i64) -> PadicRational {
        PadicRational::from_frac(ctx(p), n, d).unwrap()
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(q(3, 0, 1).valuation(), ExtValuation::Infinity);
        assert_eq!(q(3, 9, 2).valuation(), ExtValuation::Finite(2));
        assert_eq!(q(5, 7, 25).valuation(), ExtValuation::Finite(-2));
    }

    #[test]
    fn norm_compare_examples() {
        assert_eq!(q(3, 3, 1).norm_compare(&q(3, 1, 1)), Ok(Ordering::Less));
        assert_eq!(q(3, 2, 1).norm_compare(&q(3, 4, 1)), Ok(Ordering::Equal));
        assert_eq!(q(2, 2, 1).norm_compare(&q(2, 4, 1)), Ok(Ordering::Greater));
        assert!(matches!(
            q(2, 2, 1).norm_compare(&q(3, 2, 1)),
            Err(Error::ContextMismatch { .. })
        ));
    }

    #[test]
    fn arithmetic_examples() {
        let s = q(5, 1, 5) + q(5, 4, 5);
        assert_eq!(s, q(5, 1, 1));
        assert_eq!(s.valuation(), ExtValuation::Finite(0));

        let m = q(3, 3, 1) * q(3, 1, 9);
        assert_eq!(m, q(3, 1, 3));
        assert_eq!(m.valuation(), ExtValuation::Finite(-1));

        // |1| = |2| in Q_3 and the sum drops in norm
        let t = q(3, 1, 1) + q(3, 2, 1);
        assert_eq!(t.valuation(), ExtValuation::Finite(1));

        assert_eq!(q(3, 1, 1).checked_div(&q(3, 0, 1)), Err(Error::DivisionByZero));
        assert_eq!(q(3, 0, 1).recip(), Err(Error::DivisionByZero));
        assert_eq!(PadicRational::from_frac(ctx(3), 1, 0), Err(Error::DivisionByZero));
    }

    #[test]
    fn ext_valuation_order_and_norm() {
        assert!(ExtValuation::Finite(1_000_000) < ExtValuation::Infinity);
        assert!(ExtValuation::Finite(-3) < ExtValuation::Finite(2));
        assert_eq!(
            ExtValuation::Finite(2).plus(ExtValuation::Infinity),
            ExtValuation::Infinity
        );
        assert_eq!(
            ExtValuation::Finite(2).norm(3),
            BigRational::new(1.into(), 9.into())
        );
        assert_eq!(ExtValuation::Infinity.norm(3), BigRational::zero());
        assert_eq!(ExtValuation::Finite(-2).to_string(), "-2");
        assert_eq!(ExtValuation::Infinity.to_string(), "inf");
    }

    #[test]
    fn truncate_keeps_value_mod_p_power() {
        for &(n, d) in &[(1, 7), (-1, 2), (5, 3), (7, 250), (-13, 45)] {
            let x = q(5, n, d);
            for k in -3..10 {
                let t = x.truncate(k);
                assert!((&x - &t).valuation().at_least(k), "x={x} k={k} t={t}");
                let (e, _) = split_p_power(t.value().denom(), &BigInt::from(5));
                assert_eq!(BigInt::from(5).pow(e as u32), t.value().denom().clone());
            }
        }
        assert!(q(5, 25, 3).truncate(2).is_zero());
    }

    #[test]
    fn residue_of_integral_values() {
        assert_eq!(q(3, -1, 2).residue(3).unwrap(), BigInt::from(13)); // 2*13 = 26 = -1 mod 27
        assert_eq!(q(7, 10, 1).residue(1).unwrap(), BigInt::from(3));
        assert!(q(3, 1, 3).residue(2).is_err());
    }
}
