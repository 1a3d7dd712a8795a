use super::map::{apply, apply2, MapParams};
use crate::error::{Error, Result};
use crate::padic::{solve_quadratic, ExtValuation, PadicRational};

/// Polynomial with coefficients listed from the constant term up.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    pub coeffs: Vec<PadicRational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<PadicRational>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn eval(&self, x: &PadicRational) -> PadicRational {
        let mut acc = x.sibling_int(0);
        for c in self.coeffs.iter().rev() {
            acc = &acc * x + c;
        }
        acc
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let zero = self.coeffs[0].sibling_int(0);
        let mut out = vec![zero; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::new(out)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = self.coeffs[0].sibling_int(0);
        let out = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).unwrap_or(&zero);
                let b = other.coeffs.get(i).unwrap_or(&zero);
                a - b
            })
            .collect();
        Poly::new(out)
    }
}

/// `Q(x) = a(a+b) x^2 + (a+b) x + 1`, whose roots are the points of exact
/// period two.
pub fn period2_quotient(m: &MapParams) -> Poly {
    let a = m.a();
    let s = a + m.b();
    Poly::new(vec![m.constant(1), s.clone(), a * &s])
}

/// `(a-b) x - 1`, whose root is `x2`.
pub fn x2_factor(m: &MapParams) -> Poly {
    Poly::new(vec![m.constant(-1), m.a() - m.b()])
}

/// `a(a^2-b^2) x^3 - b(a+b) x^2 - 2b x - 1`.
pub fn period2_cubic(m: &MapParams) -> Poly {
    let (a, b) = (m.a(), m.b());
    Poly::new(vec![
        m.constant(-1),
        -(b * &m.constant(2)),
        -(b * &(a + b)),
        a * &(&a.square() - &b.square()),
    ])
}

/// Numerator of `f(f(x)) - x` over `(bx+1)(abx^2+bx+1)`:
/// `a^3 x^4 - x (bx+1)(abx^2+bx+1)`.
pub fn period2_numerator(m: &MapParams) -> Poly {
    let (a, b) = (m.a(), m.b());
    let x = Poly::new(vec![m.constant(0), m.constant(1)]);
    let lin = Poly::new(vec![m.constant(1), b.clone()]);
    let quad = Poly::new(vec![m.constant(1), b.clone(), a * b]);
    let quartic = Poly::new(vec![
        m.constant(0),
        m.constant(0),
        m.constant(0),
        m.constant(0),
        a.pow(3).expect("a != 0"),
    ]);
    quartic.sub(&x.mul(&lin).mul(&quad))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorizationResiduals {
    /// `((a-b)x - 1) Q(x)` minus the cubic.
    pub cubic: Poly,
    /// `x ((a-b)x - 1) Q(x)` minus the numerator of `f(f(x)) - x`.
    pub numerator: Poly,
}

impl FactorizationResiduals {
    pub fn all_zero(&self) -> bool {
        self.cubic.is_zero() && self.numerator.is_zero()
    }
}

pub fn factorization_residuals(m: &MapParams) -> FactorizationResiduals {
    let product = x2_factor(m).mul(&period2_quotient(m));
    let x = Poly::new(vec![m.constant(0), m.constant(1)]);
    FactorizationResiduals {
        cubic: product.sub(&period2_cubic(m)),
        numerator: x.mul(&product).sub(&period2_numerator(m)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootCheck {
    pub root: PadicRational,
    /// `valuation(image - target)`; infinite for exact roots.
    pub residual: ExtValuation,
}

/// Points of exact period two in `Q_p`: the roots of `Q` that are not fixed.
/// For `b = 3a` the only root of `Q` is `x2`, which is dropped.
pub fn period2_points(m: &MapParams) -> Result<Vec<RootCheck>> {
    if (m.a() + m.b()).is_zero() {
        return Err(Error::DegenerateParams("a + b = 0 leaves no quadratic factor".into()));
    }
    let q = period2_quotient(m);
    let roots = solve_quadratic(&q.coeffs[2], &q.coeffs[1], &q.coeffs[0])?;
    let mut out = Vec::new();
    for r in roots {
        if r == m.x1() || &r == m.x2() || !m.in_domain(&r) {
            continue;
        }
        let image = apply2(m, &r)?;
        out.push(RootCheck {
            residual: (&image - &r).valuation(),
            root: r,
        });
    }
    Ok(out)
}

/// Solutions of `f(x) = y`, that is `a x^2 - b y x - y = 0`.
pub fn preimages(m: &MapParams, y: &PadicRational) -> Result<Vec<RootCheck>> {
    let y = m.lift(y);
    let roots = solve_quadratic(m.a(), &-(m.b() * &y), &-y.clone())?;
    roots
        .into_iter()
        .map(|r| {
            let image = apply(m, &r)?;
            Ok(RootCheck {
                residual: (&image - &y).valuation(),
                root: r,
            })
        })
        .collect()
}
