use std::fmt;

use serde::{Deserialize, Serialize};

use super::map::{FixedPoint, MapParams};
use crate::error::{Error, Result};
use crate::padic::{ExtValuation, PadicRational, UltrametricRegion};

/// Nature of `x2` from `|f'(x2)|_p = |2a - b|_p / |a|_p` against one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FixedPointNature {
    Repelling,
    Indifferent,
    Attracting,
}

/// The seven sub-cases of the split on `|2a|_p`, `|b|_p` and `|2a - b|_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseTag {
    /// `|a| < |b|`.
    Repelling1a,
    /// `p > 2`, `|2a| > |b|`.
    Indifferent2a,
    /// `p > 2`, `|2a| = |b|`, `|2a - b| = |a|`.
    Indifferent2b,
    /// `p = 2`, `|a| = |b|`.
    Indifferent2c,
    /// `p = 2`, `|2a| > |b|`.
    Attracting3a,
    /// `|2a| = |b|`, `|2a - b| < |a|`.
    Attracting3b,
    /// `p = 2`, `|2a| < |b| < |a|`.
    Attracting3c,
}

impl CaseTag {
    pub const ALL: [CaseTag; 7] = [
        CaseTag::Repelling1a,
        CaseTag::Indifferent2a,
        CaseTag::Indifferent2b,
        CaseTag::Indifferent2c,
        CaseTag::Attracting3a,
        CaseTag::Attracting3b,
        CaseTag::Attracting3c,
    ];

    pub fn nature(&self) -> FixedPointNature {
        match self {
            CaseTag::Repelling1a => FixedPointNature::Repelling,
            CaseTag::Indifferent2a | CaseTag::Indifferent2b | CaseTag::Indifferent2c => {
                FixedPointNature::Indifferent
            }
            CaseTag::Attracting3a | CaseTag::Attracting3b | CaseTag::Attracting3c => {
                FixedPointNature::Attracting
            }
        }
    }

    /// Whether some `a, b in Q_p` fall in this case. Norms in `Q_p` lie in
    /// `p^Z`, and at `p = 2` we have `|2a| = |a|/2`, which leaves no room for
    /// `|2a| < |b| < |a|`.
    pub fn realizable_in_qp(&self, p: u32) -> bool {
        match self {
            CaseTag::Repelling1a | CaseTag::Attracting3b => true,
            CaseTag::Indifferent2a | CaseTag::Indifferent2b => p > 2,
            CaseTag::Indifferent2c | CaseTag::Attracting3a => p == 2,
            CaseTag::Attracting3c => false,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CaseTag::Repelling1a => "Repelling_1a",
            CaseTag::Indifferent2a => "Indifferent_2a",
            CaseTag::Indifferent2b => "Indifferent_2b",
            CaseTag::Indifferent2c => "Indifferent_2c",
            CaseTag::Attracting3a => "Attracting_3a",
            CaseTag::Attracting3b => "Attracting_3b",
            CaseTag::Attracting3c => "Attracting_3c",
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Case {
    pub tag: CaseTag,
    pub realizable_in_qp: bool,
}

/// The valuations every case decision is made from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormProfile {
    pub p: u32,
    pub v_a: i64,
    pub v_b: i64,
    pub v_2a: i64,
    pub v_a_minus_b: i64,
    /// Infinite when `b = 2a` (superattracting `x2`).
    pub v_2a_minus_b: ExtValuation,
}

impl NormProfile {
    pub fn of(m: &MapParams) -> Self {
        let two_a = m.a() * &m.constant(2);
        let fin = |x: &PadicRational| x.valuation().finite().expect("nonzero");
        NormProfile {
            p: m.p(),
            v_a: fin(m.a()),
            v_b: fin(m.b()),
            v_2a: fin(&two_a),
            v_a_minus_b: fin(&(m.a() - m.b())),
            v_2a_minus_b: (&two_a - m.b()).valuation(),
        }
    }
}

pub fn classify(m: &MapParams) -> Case {
    classify_profile(&NormProfile::of(m))
}

pub fn classify_profile(n: &NormProfile) -> Case {
    let va = ExtValuation::Finite(n.v_a);
    let tag = if n.v_2a_minus_b < va {
        CaseTag::Repelling1a
    } else if n.v_2a_minus_b == va {
        if n.p == 2 {
            CaseTag::Indifferent2c
        } else if n.v_2a < n.v_b {
            CaseTag::Indifferent2a
        } else {
            CaseTag::Indifferent2b
        }
    } else if n.v_2a < n.v_b {
        CaseTag::Attracting3a
    } else if n.v_2a == n.v_b {
        CaseTag::Attracting3b
    } else {
        CaseTag::Attracting3c
    };
    Case {
        tag,
        realizable_in_qp: tag.realizable_in_qp(n.p),
    }
}

/// Nature of `x2` read directly off the multiplier's valuation.
pub fn multiplier_nature(m: &MapParams) -> FixedPointNature {
    match super::map::multiplier(m, FixedPoint::X2).valuation() {
        ExtValuation::Finite(v) if v < 0 => FixedPointNature::Repelling,
        ExtValuation::Finite(0) => FixedPointNature::Indifferent,
        _ => FixedPointNature::Attracting,
    }
}

/// Radius exponents (radius `p^(-e)`) of `r_n = |b|^(n-1)/|a|^n` and
/// `l_{n+1} = |a|^n/|b|^(n+1)`, `l_0 = 0`, for `n = 0..=n_max`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RadiusSequences {
    pub r: Vec<i64>,
    pub l: Vec<ExtValuation>,
}

pub fn radius_sequences(m: &MapParams, n_max: usize) -> Result<RadiusSequences> {
    let case = classify(m);
    if case.tag != CaseTag::Repelling1a {
        return Err(Error::WrongCase(format!(
            "radius sequences need a repelling x2, got {}",
            case.tag
        )));
    }
    let n = NormProfile::of(m);
    let r = (0..=n_max as i64)
        .map(|k| (k - 1) * n.v_b - k * n.v_a)
        .collect();
    let l = (0..=n_max as i64)
        .map(|j| {
            if j == 0 {
                ExtValuation::Infinity
            } else {
                let k = j - 1;
                ExtValuation::Finite(k * n.v_a - (k + 1) * n.v_b)
            }
        })
        .collect();
    Ok(RadiusSequences { r, l })
}

/// The spheres `S_{r_i}(x1)`, `i >= 1`, and `S_{l_j}(P)`, `j >= 0`, left
/// out of the guaranteed part of `A(x1)` in the repelling case. Both
/// exponent sequences are arithmetic with step `d = v(a) - v(b) > 0`, so
/// membership is decided exactly for all `i, j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExceptionalSpheres {
    pub pole: PadicRational,
    pub v_b: i64,
    pub step: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SphereHit {
    /// `|x| = r_n`.
    AroundX1(u64),
    /// `|x - P| = l_j`; `j = 0` is the pole itself.
    AroundPole(u64),
}

impl ExceptionalSpheres {
    pub fn hit(&self, x: &PadicRational) -> Option<SphereHit> {
        // r_n exponent is -v(b) - n d
        if let Some(v) = x.valuation().finite() {
            let gap = -self.v_b - v;
            if gap >= self.step && gap % self.step == 0 {
                return Some(SphereHit::AroundX1((gap / self.step) as u64));
            }
        }
        // l_j exponent is -v(b) + (j - 1) d for j >= 1
        match (x - &self.pole).valuation() {
            ExtValuation::Infinity => Some(SphereHit::AroundPole(0)),
            ExtValuation::Finite(v) => {
                let gap = v + self.v_b;
                if gap >= 0 && gap % self.step == 0 {
                    Some(SphereHit::AroundPole((gap / self.step + 1) as u64))
                } else {
                    None
                }
            }
        }
    }

    /// Membership in the part of `A(x1)` the exclusions guarantee. Inside
    /// `B_{r0}(x1)` nothing is excluded; the spheres around `P` only matter
    /// on `|x| = r0`.
    pub fn guaranteed(&self, x: &PadicRational) -> bool {
        match x.valuation() {
            ExtValuation::Infinity => true,
            ExtValuation::Finite(v) if v > -self.v_b => true,
            ExtValuation::Finite(v) if v < -self.v_b => {
                !matches!(self.hit(x), Some(SphereHit::AroundX1(_)))
            }
            ExtValuation::Finite(_) => !matches!(self.hit(x), Some(SphereHit::AroundPole(_))),
        }
    }

    pub fn r_sphere(&self, n: u64, x1: PadicRational) -> UltrametricRegion {
        UltrametricRegion::sphere(x1, -self.v_b - n as i64 * self.step)
    }

    pub fn l_sphere(&self, j: u64) -> Option<UltrametricRegion> {
        (j >= 1).then(|| {
            UltrametricRegion::sphere(self.pole.clone(), -self.v_b + (j as i64 - 1) * self.step)
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum X2Role {
    Attractor,
    SiegelDisk,
    RepellerNone,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionReport {
    pub case: Case,
    /// Open ball around `x1` inside its basin.
    pub attractor_x1: UltrametricRegion,
    pub x2_role: X2Role,
    /// Attractor or Siegel disk of `x2`; `None` when `x2` repels.
    pub x2_region: Option<UltrametricRegion>,
    /// Present in the repelling case only.
    pub exceptional: Option<ExceptionalSpheres>,
    /// Short name of the governing result, for reports.
    pub rule: &'static str,
}

/// Regions prescribed for each case, all open balls:
///
/// | case | `A(x1)` | `x2` |
/// |------|---------|------|
/// | 1a | `B_{r0}(x1)` plus everything off the exceptional spheres | repeller |
/// | 2a | `B_{r1}(x1)` | Siegel disk `B_{r1}(x2)` |
/// | 2b, 2c | `B_{r0}(x1)` | Siegel disk `B_{1/|a-b|}(x2)` |
/// | 3a, 3b at `p = 2` | `B_{r1}(x1)` | attractor `B_{r1}(x2)` |
/// | 3b at `p > 2`, 3c | `B_{r0}(x1)` | attractor `B_{r0}(x2)` |
///
/// with `r0 = 1/|b|` and `r1 = 1/|a|`.
pub fn region_report(m: &MapParams) -> RegionReport {
    let case = classify(m);
    let n = NormProfile::of(m);
    let r0 = -n.v_b;
    let r1 = -n.v_a;
    let x1 = m.x1();
    let x2 = m.x2().clone();
    let ball = UltrametricRegion::open_ball;
    match case.tag {
        CaseTag::Repelling1a => RegionReport {
            case,
            attractor_x1: ball(x1, r0),
            x2_role: X2Role::RepellerNone,
            x2_region: None,
            exceptional: Some(ExceptionalSpheres {
                pole: m.pole().clone(),
                v_b: n.v_b,
                step: n.v_a - n.v_b,
            }),
            rule: "repelling: basin contains D minus exceptional spheres",
        },
        CaseTag::Indifferent2a => RegionReport {
            case,
            attractor_x1: ball(x1, r1),
            x2_role: X2Role::SiegelDisk,
            x2_region: Some(ball(x2, r1)),
            exceptional: None,
            rule: "indifferent |2a|>|b|: A(x1)=B_r1(x1), SI(x2)=B_r1(x2)",
        },
        CaseTag::Indifferent2b | CaseTag::Indifferent2c => RegionReport {
            case,
            attractor_x1: ball(x1, r0),
            x2_role: X2Role::SiegelDisk,
            x2_region: Some(ball(x2, -n.v_a_minus_b)),
            exceptional: None,
            rule: "indifferent |a|=|b|: A(x1)=B_r0(x1), SI(x2)=B_{1/|a-b|}(x2)",
        },
        CaseTag::Attracting3a => RegionReport {
            case,
            attractor_x1: ball(x1, r1),
            x2_role: X2Role::Attractor,
            x2_region: Some(ball(x2, r1)),
            exceptional: None,
            rule: "attracting p=2 |2a|>|b|: A(x1)=B_r1(x1), A(x2)=B_r1(x2)",
        },
        CaseTag::Attracting3b if m.p() == 2 => RegionReport {
            case,
            attractor_x1: ball(x1, r1),
            x2_role: X2Role::Attractor,
            x2_region: Some(ball(x2, r1)),
            exceptional: None,
            rule: "attracting p=2 |2a|=|b|: A(x1)=B_r1(x1), A(x2)=B_r1(x2)",
        },
        CaseTag::Attracting3b | CaseTag::Attracting3c => RegionReport {
            case,
            attractor_x1: ball(x1, r0),
            x2_role: X2Role::Attractor,
            x2_region: Some(ball(x2, r0)),
            exceptional: None,
            rule: "attracting |2a|=|b|: A(x1)=B_r0(x1), A(x2)=B_r0(x2)",
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::PrimeContext;

    fn params(p: u32, a: i64, b: i64) -> MapParams {
        MapParams::from_ints(PrimeContext::new(p, 32).unwrap(), a, b).unwrap()
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify(&params(5, 5, 1)).tag, CaseTag::Repelling1a);
        assert_eq!(classify(&params(3, 1, 3)).tag, CaseTag::Indifferent2a);
        assert_eq!(classify(&params(2, 1, 4)).tag, CaseTag::Attracting3a);
        assert_eq!(classify(&params(3, 1, 4)).tag, CaseTag::Indifferent2b);
        assert_eq!(classify(&params(5, 1, 3)).tag, CaseTag::Indifferent2b);
        assert_eq!(classify(&params(2, 1, 3)).tag, CaseTag::Indifferent2c);
        assert_eq!(classify(&params(3, 1, 5)).tag, CaseTag::Attracting3b);
        assert_eq!(classify(&params(2, 1, 6)).tag, CaseTag::Attracting3b);
        // b = 2a: multiplier zero
        assert_eq!(classify(&params(7, 1, 2)).tag, CaseTag::Attracting3b);
        for (p, a, b) in [(5, 5, 1), (3, 1, 3), (2, 1, 4), (3, 1, 5), (2, 1, 3)] {
            let m = params(p, a, b);
            assert!(classify(&m).realizable_in_qp);
            assert_eq!(classify(&m).tag.nature(), multiplier_nature(&m));
        }
    }

    #[test]
    fn symbolic_three_c_is_never_realizable() {
        for p in [2, 3, 5, 7] {
            assert!(!CaseTag::Attracting3c.realizable_in_qp(p));
        }
        // a profile that cannot come from Q_2 still classifies symbolically
        let profile = NormProfile {
            p: 2,
            v_a: 0,
            v_b: 1,
            v_2a: 2,
            v_a_minus_b: 0,
            v_2a_minus_b: ExtValuation::Finite(1),
        };
        let case = classify_profile(&profile);
        assert_eq!(case.tag, CaseTag::Attracting3c);
        assert!(!case.realizable_in_qp);
    }

    #[test]
    fn radius_sequence_examples() {
        let m = params(5, 5, 1);
        let s = radius_sequences(&m, 6).unwrap();
        for (n, &e) in s.r.iter().enumerate() {
            assert_eq!(e, -(n as i64));
        }
        assert_eq!(s.l[0], ExtValuation::Infinity);
        assert_eq!(s.l[1], ExtValuation::Finite(0));
        assert_eq!(s.l[3], ExtValuation::Finite(2));
        // r0 = 1/|b|, r1 = 1/|a|
        let m = params(3, 9, 1);
        let s = radius_sequences(&m, 2).unwrap();
        assert_eq!(s.r[0], 0);
        assert_eq!(s.r[1], -2);
        assert!(matches!(
            radius_sequences(&params(3, 1, 3), 3),
            Err(Error::WrongCase(_))
        ));
    }

    #[test]
    fn region_report_examples() {
        let m = params(3, 1, 3);
        let r = region_report(&m);
        assert_eq!(r.x2_role, X2Role::SiegelDisk);
        let disk = r.x2_region.unwrap();
        assert_eq!(disk.center, PadicRational::from_frac(m.ctx(), -1, 2).unwrap());
        assert_eq!(disk.exponent, 0);
        assert_eq!(r.attractor_x1.exponent, 0);

        let m = params(5, 5, 1);
        let r = region_report(&m);
        assert_eq!(r.x2_role, X2Role::RepellerNone);
        let ex = r.exceptional.unwrap();
        assert_eq!(ex.pole, m.constant(-1));
        assert_eq!(r.attractor_x1.exponent, 0);

        let m = params(3, 1, 5);
        let r = region_report(&m);
        assert_eq!(r.x2_role, X2Role::Attractor);
        assert_eq!(r.x2_region.unwrap().exponent, 0);
        assert_eq!(r.attractor_x1.exponent, 0);
    }

    #[test]
    fn exceptional_sphere_membership() {
        // d = 2: r_n = 25^n, l_j = 25^-(j-1)
        let m = params(5, 25, 1);
        let ex = region_report(&m).exceptional.unwrap();
        let q = |n: i64, d: i64| PadicRational::from_frac(m.ctx(), n, d).unwrap();
        assert_eq!(ex.hit(&q(1, 25)), Some(SphereHit::AroundX1(1)));
        assert_eq!(ex.hit(&q(3, 625)), Some(SphereHit::AroundX1(2)));
        assert_eq!(ex.hit(&q(1, 5)), None);
        assert_eq!(ex.hit(&q(2, 125)), None);
        assert_eq!(ex.hit(&q(-1, 1)), Some(SphereHit::AroundPole(0)));
        assert_eq!(ex.hit(&q(1, 1)), Some(SphereHit::AroundPole(1)));
        assert_eq!(ex.hit(&q(24, 1)), Some(SphereHit::AroundPole(2)));
        assert_eq!(ex.hit(&q(4, 1)), None);
        assert!(ex.r_sphere(2, m.x1()).contains(&q(3, 625)));
        assert!(ex.l_sphere(2).unwrap().contains(&q(24, 1)));
        assert!(ex.l_sphere(0).is_none());
        assert!(ex.guaranteed(&q(1, 5)));
        assert!(!ex.guaranteed(&q(1, 25)));
        assert!(ex.guaranteed(&q(5, 1)));
        assert!(!ex.guaranteed(&q(1, 1)));
        assert!(ex.guaranteed(&q(4, 1)));
        assert!(!ex.guaranteed(&q(-1, 1)));
    }
}
