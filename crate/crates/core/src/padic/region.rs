use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{p_power, ExtValuation, PadicRational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegionKind {
    OpenBall,
    ClosedBall,
    Sphere,
}

/// A ball or sphere around `center` with radius `p^(-exponent)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UltrametricRegion {
    pub kind: RegionKind,
    pub center: PadicRational,
    pub exponent: i64,
}

impl UltrametricRegion {
    pub fn new(kind: RegionKind, center: PadicRational, exponent: i64) -> Self {
        Self {
            kind,
            center,
            exponent,
        }
    }

    pub fn open_ball(center: PadicRational, exponent: i64) -> Self {
        Self::new(RegionKind::OpenBall, center, exponent)
    }

    pub fn closed_ball(center: PadicRational, exponent: i64) -> Self {
        Self::new(RegionKind::ClosedBall, center, exponent)
    }

    pub fn sphere(center: PadicRational, exponent: i64) -> Self {
        Self::new(RegionKind::Sphere, center, exponent)
    }

    pub fn p(&self) -> u32 {
        self.center.ctx().p()
    }

    /// Radius `p^(-exponent)` as an exact rational.
    pub fn radius(&self) -> BigRational {
        p_power(self.p(), -self.exponent)
    }

    pub fn contains(&self, x: &PadicRational) -> bool {
        let d = (x - &self.center).valuation();
        let m = ExtValuation::Finite(self.exponent);
        match self.kind {
            RegionKind::OpenBall => d > m,
            RegionKind::ClosedBall => d >= m,
            RegionKind::Sphere => d == m,
        }
    }

    /// The smallest exponent `e` such that membership only depends on the
    /// residue class of `x - center` modulo `p^e`.
    pub fn resolution_exponent(&self) -> i64 {
        match self.kind {
            RegionKind::OpenBall | RegionKind::Sphere => self.exponent + 1,
            RegionKind::ClosedBall => self.exponent,
        }
    }

    /// Decides set equality from the centers alone. Balls of one radius
    /// coincide iff either center lies in the other ball; spheres of one
    /// radius coincide iff the centers are strictly closer than the radius.
    pub fn same_set(&self, other: &Self) -> bool {
        if self.kind != other.kind || self.exponent != other.exponent {
            return false;
        }
        match self.kind {
            RegionKind::OpenBall | RegionKind::ClosedBall => self.contains(&other.center),
            RegionKind::Sphere => {
                (&self.center - &other.center).valuation() > ExtValuation::Finite(self.exponent)
            }
        }
    }

    /// The `p` closed balls of exponent `l + 1` partitioning a closed ball
    /// of exponent `l`. `None` for other kinds.
    pub fn closed_children(&self) -> Option<Vec<UltrametricRegion>> {
        if self.kind != RegionKind::ClosedBall {
            return None;
        }
        let step = self.center.sibling(p_power(self.p(), self.exponent));
        Some(
            (0..self.p())
                .map(|j| {
                    let c = &self.center + &(&step * &step.sibling_int(j as i64));
                    UltrametricRegion::closed_ball(c, self.exponent + 1)
                })
                .collect(),
        )
    }

    pub fn measure(&self) -> HaarMeasure {
        measure(self)
    }
}

impl fmt::Display for UltrametricRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.kind {
            RegionKind::OpenBall => "B",
            RegionKind::ClosedBall => "Bbar",
            RegionKind::Sphere => "S",
        };
        write!(f, "{tag}[{}^{}]({})", self.p(), -self.exponent, self.center)
    }
}

/// Haar measure normalized so the closed unit ball has measure one.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HaarMeasure(pub BigRational);

impl HaarMeasure {
    pub fn zero() -> Self {
        HaarMeasure(BigRational::zero())
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl std::ops::Add for HaarMeasure {
    type Output = HaarMeasure;
    fn add(self, rhs: HaarMeasure) -> HaarMeasure {
        HaarMeasure(self.0 + rhs.0)
    }
}

impl std::iter::Sum for HaarMeasure {
    fn sum<I: Iterator<Item = HaarMeasure>>(iter: I) -> Self {
        iter.fold(HaarMeasure::zero(), |a, b| a + b)
    }
}

impl fmt::Display for HaarMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn measure(region: &UltrametricRegion) -> HaarMeasure {
    let p = region.p();
    let l = region.exponent;
    HaarMeasure(match region.kind {
        RegionKind::ClosedBall => p_power(p, -l),
        RegionKind::OpenBall => p_power(p, -l - 1),
        RegionKind::Sphere => {
            p_power(p, -l) * (BigRational::one() - BigRational::new(1.into(), p.into()))
        }
    })
}
