use crate::dynamics::MapParams;
use crate::error::{Error, Result};
use crate::padic::{HaarMeasure, PadicRational, PrimeContext, UltrametricRegion};

/// The normalized map `f(x) = x^2/(bx+1)` with `|b|_p < 1`, restricted to
/// the sphere `S_rho(x2)` with `rho = p^-m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SphereInstance {
    map: MapParams,
    m: i64,
    v_b: i64,
}

impl SphereInstance {
    pub fn new(b: PadicRational, m: i64) -> Result<Self> {
        let ctx = b.ctx();
        if ctx.p() == 2 {
            return Err(Error::UnsupportedPrime(2));
        }
        let v_b = match b.valuation().finite() {
            Some(v) if v >= 1 => v,
            _ => {
                return Err(Error::InvalidParams(format!(
                    "need 0 < |b| < 1, got b = {b}"
                )))
            }
        };
        if m < 1 {
            return Err(Error::InvalidParams(format!("need m >= 1, got {m}")));
        }
        let map = MapParams::new(b.sibling_int(1), b)?;
        Ok(Self { map, m, v_b })
    }

    pub fn from_ints(ctx: PrimeContext, b: i64, m: i64) -> Result<Self> {
        Self::new(PadicRational::from_int(ctx, b), m)
    }

    pub fn ctx(&self) -> PrimeContext {
        self.map.ctx()
    }

    pub fn p(&self) -> u32 {
        self.map.p()
    }

    pub fn b(&self) -> &PadicRational {
        self.map.b()
    }

    pub fn map(&self) -> &MapParams {
        &self.map
    }

    /// `rho = p^-m`.
    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn v_b(&self) -> i64 {
        self.v_b
    }

    /// `1/(1-b)`.
    pub fn x2(&self) -> &PadicRational {
        self.map.x2()
    }

    pub fn pole(&self) -> &PadicRational {
        self.map.pole()
    }

    /// `r0 = rho |b|_p = p^-(m + v(b))`.
    pub fn r0_exponent(&self) -> i64 {
        self.m + self.v_b
    }

    /// One guard digit beyond what ball membership at `r0` needs.
    pub fn default_residue_exponent(&self) -> u32 {
        (self.r0_exponent() + 3) as u32
    }

    pub fn sphere(&self) -> UltrametricRegion {
        UltrametricRegion::sphere(self.x2().clone(), self.m)
    }

    pub fn sphere_measure(&self) -> HaarMeasure {
        self.sphere().measure()
    }

    pub fn on_sphere(&self, y: &PadicRational) -> bool {
        self.sphere().contains(y)
    }

    pub(crate) fn require_on_sphere(&self, y: &PadicRational) -> Result<()> {
        if self.on_sphere(y) {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "{y} is not on the sphere {}",
                self.sphere()
            )))
        }
    }
}
