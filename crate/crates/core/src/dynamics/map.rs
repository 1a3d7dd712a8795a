use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::{PadicRational, PrimeContext};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FixedPoint {
    /// `x1 = 0`, always superattracting.
    X1,
    /// `x2 = 1/(a - b)`.
    X2,
}

impl fmt::Display for FixedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FixedPoint::X1 => "x1",
            FixedPoint::X2 => "x2",
        })
    }
}

/// Parameters of `f(x) = a x^2 / (b x + 1)` with `a, b != 0` and `a != b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapParams {
    a: PadicRational,
    b: PadicRational,
    pole: PadicRational,
    x2: PadicRational,
}

impl MapParams {
    pub fn new(a: PadicRational, b: PadicRational) -> Result<Self> {
        a.check_ctx(&b)?;
        if a.is_zero() {
            return Err(Error::InvalidParams("a must be nonzero".into()));
        }
        if b.is_zero() {
            return Err(Error::InvalidParams("b must be nonzero".into()));
        }
        if a == b {
            return Err(Error::InvalidParams("a and b must differ".into()));
        }
        let pole = -b.recip()?;
        let x2 = (&a - &b).recip()?;
        Ok(Self { a, b, pole, x2 })
    }

    pub fn from_ints(ctx: PrimeContext, a: i64, b: i64) -> Result<Self> {
        Self::new(PadicRational::from_int(ctx, a), PadicRational::from_int(ctx, b))
    }

    pub fn ctx(&self) -> PrimeContext {
        self.a.ctx()
    }

    pub fn p(&self) -> u32 {
        self.a.ctx().p()
    }

    pub fn a(&self) -> &PadicRational {
        &self.a
    }

    pub fn b(&self) -> &PadicRational {
        &self.b
    }

    /// `P = -1/b`.
    pub fn pole(&self) -> &PadicRational {
        &self.pole
    }

    pub fn x1(&self) -> PadicRational {
        PadicRational::zero(self.ctx())
    }

    pub fn x2(&self) -> &PadicRational {
        &self.x2
    }

    pub fn fixed_point(&self, which: FixedPoint) -> PadicRational {
        match which {
            FixedPoint::X1 => self.x1(),
            FixedPoint::X2 => self.x2.clone(),
        }
    }

    pub fn in_domain(&self, x: &PadicRational) -> bool {
        x != &self.pole
    }

    /// The same map over a context with a different digit budget.
    pub fn with_precision(&self, precision: u32) -> Result<Self> {
        let ctx = self.ctx().with_precision(precision)?;
        Self::new(
            PadicRational::new(ctx, self.a.value().clone()),
            PadicRational::new(ctx, self.b.value().clone()),
        )
    }

    pub fn lift(&self, x: &PadicRational) -> PadicRational {
        PadicRational::new(self.ctx(), x.value().clone())
    }

    pub fn constant(&self, n: i64) -> PadicRational {
        PadicRational::from_int(self.ctx(), n)
    }
}

impl fmt::Display for MapParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={} a={} b={}", self.p(), self.a, self.b)
    }
}

/// `f(x)`, exactly.
pub fn apply(m: &MapParams, x: &PadicRational) -> Result<PadicRational> {
    if !m.in_domain(x) {
        return Err(Error::PoleHit);
    }
    let den = &(m.b() * x) + &m.constant(1);
    (m.a() * &x.square()).checked_div(&den)
}

/// `f(f(x))`.
pub fn apply2(m: &MapParams, x: &PadicRational) -> Result<PadicRational> {
    apply(m, &apply(m, x)?)
}

pub(crate) fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// The `n`-th derivative of `f` at `x`, from the partial-fraction form
/// `f(x) = (a/b) (x - 1/b + 1/(b^2 (x + 1/b)))`.
pub fn derivative(m: &MapParams, x: &PadicRational, n: u32) -> Result<PadicRational> {
    if n == 0 {
        return apply(m, x);
    }
    let shifted = x + &m.b().recip()?;
    if shifted.is_zero() {
        return Err(Error::PoleHit);
    }
    let a_over_b = m.a().checked_div(m.b())?;
    if n == 1 {
        let b2s2 = m.b().square() * shifted.square();
        return Ok(&a_over_b * &(m.constant(1) - b2s2.recip()?));
    }
    let sign = if n % 2 == 0 { 1 } else { -1 };
    let coeff = m.a().checked_div(&m.b().pow(3)?)?;
    let fact = x.sibling(BigRational::from_integer(factorial(n) * sign));
    (&coeff * &fact).checked_div(&shifted.pow(n as i32 + 1)?)
}

/// `f'(x1) = 0`, `f'(x2) = (2a - b)/a`.
pub fn multiplier(m: &MapParams, which: FixedPoint) -> PadicRational {
    match which {
        FixedPoint::X1 => m.x1(),
        FixedPoint::X2 => {
            let two_a = m.a() * &m.constant(2);
            (&two_a - m.b()).checked_div(m.a()).expect("a != 0")
        }
    }
}

/// Closed forms for `n >= 2`:
/// `f^(n)(x1) = (-1)^n n! a b^(n-2)` and
/// `f^(n)(x2) = (-1)^n n! a^(-n) b^(n-2) (a - b)^(n+1)`.
pub fn nth_derivative_at_fixed_point(
    m: &MapParams,
    n: u32,
    which: FixedPoint,
) -> Result<PadicRational> {
    if n < 2 {
        return Err(Error::Precondition(format!(
            "closed form needs n >= 2, got {n}"
        )));
    }
    let sign = if n % 2 == 0 { 1 } else { -1 };
    let signed_fact = m.a().sibling(BigRational::from_integer(factorial(n) * sign));
    let b_pow = m.b().pow(n as i32 - 2)?;
    Ok(match which {
        FixedPoint::X1 => signed_fact * m.a() * b_pow,
        FixedPoint::X2 => {
            let a_pow = m.a().pow(-(n as i32))?;
            let amb_pow = (m.a() - m.b()).pow(n as i32 + 1)?;
            signed_fact * a_pow * b_pow * amb_pow
        }
    })
}

/// Residuals (left side minus right side) of the four rational identities
/// tying `f` to its pole and fixed points. All are zero on the domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaResiduals {
    /// `f(x)(x - P) = (a/b) x^2`
    pub pole_scaling: PadicRational,
    /// `(f(x) - x)(x - P) = ((a - b)/b) x (x - x2)`
    pub displacement: PadicRational,
    /// `(f(x) - x2)(x - P) = (a/b)(x + 1/a)(x - x2)`
    pub x2_distance: PadicRational,
    /// `(f(x) - x2)(1 + ((a - b) b / a)(x - x2)) = (a - b)(x - x2)(x + 1/a)`
    pub x2_distance_alt: PadicRational,
}

impl DeltaResiduals {
    pub fn all_zero(&self) -> bool {
        self.pole_scaling.is_zero()
            && self.displacement.is_zero()
            && self.x2_distance.is_zero()
            && self.x2_distance_alt.is_zero()
    }
}

pub fn delta_identities(m: &MapParams, x: &PadicRational) -> Result<DeltaResiduals> {
    let fx = apply(m, x)?;
    let a = m.a();
    let b = m.b();
    let x2 = m.x2();
    let x_minus_p = x - m.pole();
    let x_minus_x2 = x - x2;
    let a_over_b = a.checked_div(b)?;
    let x_plus_inv_a = x + &a.recip()?;
    let a_minus_b = a - b;

    let pole_scaling = &fx * &x_minus_p - &a_over_b * &x.square();
    let displacement =
        (&fx - x) * &x_minus_p - a_minus_b.checked_div(b)? * x * &x_minus_x2;
    let x2_distance =
        (&fx - x2) * &x_minus_p - &a_over_b * &x_plus_inv_a * &x_minus_x2;
    let bracket = m.constant(1) + (&a_minus_b * b).checked_div(a)? * &x_minus_x2;
    let x2_distance_alt = (&fx - x2) * bracket - &a_minus_b * &x_minus_x2 * &x_plus_inv_a;

    Ok(DeltaResiduals {
        pole_scaling,
        displacement,
        x2_distance,
        x2_distance_alt,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(p: u32, a: i64, b: i64) -> MapParams {
        MapParams::from_ints(PrimeContext::new(p, 32).unwrap(), a, b).unwrap()
    }

    fn q(m: &MapParams, n: i64, d: i64) -> PadicRational {
        PadicRational::from_frac(m.ctx(), n, d).unwrap()
    }

    #[test]
    fn constructor_rejects_degenerate_parameters() {
        let ctx = PrimeContext::new(3, 8).unwrap();
        assert!(matches!(MapParams::from_ints(ctx, 0, 1), Err(Error::InvalidParams(_))));
        assert!(matches!(MapParams::from_ints(ctx, 1, 0), Err(Error::InvalidParams(_))));
        assert!(matches!(MapParams::from_ints(ctx, 2, 2), Err(Error::InvalidParams(_))));
        let other = PrimeContext::new(5, 8).unwrap();
        assert!(matches!(
            MapParams::new(PadicRational::one(ctx), PadicRational::from_int(other, 3)),
            Err(Error::ContextMismatch { .. })
        ));
    }

    #[test]
    fn apply_examples() {
        let m = params(3, 1, 3);
        assert!(apply(&m, &m.x1()).unwrap().is_zero());
        assert_eq!(&apply(&m, m.x2()).unwrap(), m.x2());
        assert_eq!(m.x2(), &q(&m, -1, 2));
        assert_eq!(apply(&m, &q(&m, 1, 1)).unwrap(), q(&m, 1, 4));
        assert_eq!(apply(&m, &q(&m, -1, 3)), Err(Error::PoleHit));
    }

    #[test]
    fn multiplier_examples() {
        let m = params(3, 1, 3);
        assert!(multiplier(&m, FixedPoint::X1).is_zero());
        let lambda = multiplier(&m, FixedPoint::X2);
        assert_eq!(lambda, q(&m, -1, 1));
        assert_eq!(lambda.valuation().finite(), Some(0));
        assert_eq!(derivative(&m, m.x2(), 1).unwrap(), lambda);

        let m = params(2, 1, 4);
        let lambda = multiplier(&m, FixedPoint::X2);
        assert_eq!(lambda, q(&m, -2, 1));
        assert_eq!(lambda.valuation().finite(), Some(1));
        assert_eq!(derivative(&m, m.x2(), 1).unwrap(), lambda);
        assert!(derivative(&m, &m.x1(), 1).unwrap().is_zero());
    }

    #[test]
    fn closed_form_derivatives() {
        let m = params(3, 1, 3);
        assert_eq!(
            nth_derivative_at_fixed_point(&m, 2, FixedPoint::X1).unwrap(),
            q(&m, 2, 1)
        );
        assert_eq!(
            nth_derivative_at_fixed_point(&m, 3, FixedPoint::X1).unwrap(),
            q(&m, -18, 1)
        );
        assert_eq!(
            nth_derivative_at_fixed_point(&m, 2, FixedPoint::X2).unwrap(),
            q(&m, -16, 1)
        );
        for n in 2..=8 {
            for which in [FixedPoint::X1, FixedPoint::X2] {
                assert_eq!(
                    nth_derivative_at_fixed_point(&m, n, which).unwrap(),
                    derivative(&m, &m.fixed_point(which), n).unwrap()
                );
            }
        }
        assert!(nth_derivative_at_fixed_point(&m, 1, FixedPoint::X1).is_err());
        assert_eq!(derivative(&m, m.pole(), 3), Err(Error::PoleHit));
    }

    /// Finite-difference oracle: the second derivative of a rational map at
    /// a point is the limit of second differences, and for rationals the
    /// quotient `(f(x+h) - 2f(x) + f(x-h))/h^2` tends to it as `h -> 0` in R.
    #[test]
    fn second_derivative_matches_real_finite_differences() {
        let m = params(5, 2, 7);
        let f = |x: f64| 2.0 * x * x / (7.0 * x + 1.0);
        for &(n, d) in &[(1i64, 3i64), (2, 1), (-3, 11)] {
            let x = q(&m, n, d);
            let exact = derivative(&m, &x, 2).unwrap();
            let xf = n as f64 / d as f64;
            let h = 1e-4;
            let fd = (f(xf + h) - 2.0 * f(xf) + f(xf - h)) / (h * h);
            let ex = num_traits::ToPrimitive::to_f64(exact.value()).unwrap();
            assert!((fd - ex).abs() < 1e-3 * ex.abs().max(1.0), "{fd} vs {ex}");
        }
    }

    #[test]
    fn delta_identity_examples() {
        let m = params(3, 1, 3);
        let x1 = delta_identities(&m, &m.x1()).unwrap();
        assert!(x1.all_zero());
        let x2 = delta_identities(&m, m.x2()).unwrap();
        assert!(x2.all_zero());
        let one = q(&m, 1, 1);
        // f(1)(1 + 1/3) = (1/4)(4/3) = 1/3 = (a/b) 1^2
        let fx = apply(&m, &one).unwrap();
        assert_eq!(fx * (&one - m.pole()), q(&m, 1, 3));
        assert!(delta_identities(&m, &one).unwrap().all_zero());
        assert_eq!(delta_identities(&m, m.pole()), Err(Error::PoleHit));
    }
}
