use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::checks::{displacement_check, second_iterate_bound};
use super::instance::SphereInstance;
use super::residue::ResidueModel;
use crate::dynamics::apply;
use crate::error::{Error, Result};
use crate::padic::{p_power, sample_sphere, PadicRational, UltrametricRegion};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BallVariant {
    OpenBalls,
    ClosedBalls,
}

impl BallVariant {
    pub const BOTH: [BallVariant; 2] = [BallVariant::ClosedBalls, BallVariant::OpenBalls];

    pub fn name(&self) -> &'static str {
        match self {
            BallVariant::OpenBalls => "open",
            BallVariant::ClosedBalls => "closed",
        }
    }

    pub fn ball(&self, center: PadicRational, exponent: i64) -> UltrametricRegion {
        match self {
            BallVariant::OpenBalls => UltrametricRegion::open_ball(center, exponent),
            BallVariant::ClosedBalls => UltrametricRegion::closed_ball(center, exponent),
        }
    }
}

/// `A = B_{r0}(y) ∪ B_{r0}(f(y))` for a point `y` of the sphere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantSetCandidate {
    pub y: PadicRational,
    pub variant: BallVariant,
    pub balls: [UltrametricRegion; 2],
    pub measure: BigRational,
    pub sphere_measure: BigRational,
}

impl InvariantSetCandidate {
    pub fn ratio(&self) -> BigRational {
        &self.measure / &self.sphere_measure
    }

    /// `0 < mu(A) < mu(S)`.
    pub fn is_proper(&self) -> bool {
        !self.measure.is_zero() && self.measure < self.sphere_measure
    }

    pub fn saturates(&self) -> bool {
        self.measure >= self.sphere_measure
    }

    pub fn complement_measure(&self) -> BigRational {
        &self.sphere_measure - &self.measure
    }
}

pub fn build_invariant_set(
    inst: &SphereInstance,
    y: &PadicRational,
    variant: BallVariant,
) -> Result<InvariantSetCandidate> {
    inst.require_on_sphere(y)?;
    let fy = apply(inst.map(), y)?;
    let r0 = inst.r0_exponent();
    let balls = [variant.ball(y.clone(), r0), variant.ball(fy.clone(), r0)];
    let moved = displacement_check(inst, y)?;
    // the balls meet iff the centers are within the ball radius
    if !moved.equals_rho || moved.valuation.at_least(balls[0].resolution_exponent()) {
        return Err(Error::DisjointnessFailure(format!(
            "{} and {} intersect: valuation(f(y) - y) = {}",
            balls[0], balls[1], moved.valuation
        )));
    }
    let measure = balls[0].measure().0 + balls[1].measure().0;
    Ok(InvariantSetCandidate {
        y: y.clone(),
        variant,
        balls,
        measure,
        sphere_measure: inst.sphere_measure().0,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureViolation {
    pub residue: BigInt,
    pub image: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvarianceResult {
    pub forward_closed: bool,
    /// Residues of the set that were mapped.
    pub checked: usize,
    pub violations: Vec<ClosureViolation>,
}

pub fn invariance_check(
    inst: &SphereInstance,
    candidate: &InvariantSetCandidate,
    k: u32,
) -> Result<InvarianceResult> {
    forward_closure(inst, &candidate.balls, k)
}

/// Whether every residue of the union of `regions` maps back into it.
pub fn forward_closure(
    inst: &SphereInstance,
    regions: &[UltrametricRegion],
    k: u32,
) -> Result<InvarianceResult> {
    if (k as i64) < inst.r0_exponent() + 2 {
        return Err(Error::Precondition(format!(
            "residue exponent {k} is below r0 exponent + 2 = {}",
            inst.r0_exponent() + 2
        )));
    }
    let model = ResidueModel::new(inst, k)?;
    let mut members = std::collections::BTreeSet::new();
    for region in regions {
        members.extend(model.residues_in(region)?);
    }
    let mut violations = Vec::new();
    for r in &members {
        let image = model.transition(r)?;
        if !members.contains(&image) {
            violations.push(ClosureViolation {
                residue: r.clone(),
                image,
            });
        }
    }
    Ok(InvarianceResult {
        forward_closed: violations.is_empty(),
        checked: members.len(),
        violations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    NonErgodicWitnessFound,
    NoWitnessAtThisResolution,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateOutcome {
    pub seed: u64,
    pub candidate: InvariantSetCandidate,
    pub invariance: InvarianceResult,
}

impl CandidateOutcome {
    pub fn is_witness(&self) -> bool {
        self.invariance.forward_closed && self.candidate.is_proper()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErgodicityReport {
    pub p: u32,
    pub b: PadicRational,
    pub m: i64,
    pub r0_exponent: i64,
    pub k: u32,
    pub sphere_measure: BigRational,
    pub displacement_failures: usize,
    pub bound_failures: usize,
    /// Centers with `|f(f(y)) - y| < r0`.
    pub strict_bounds: usize,
    pub soundness_mismatches: usize,
    pub outcomes: Vec<CandidateOutcome>,
    /// Some closed-ball candidate fills the whole sphere.
    pub closed_saturates: bool,
    /// Cycle lengths of the residue transition on the sphere, ascending.
    pub cycle_lengths: Vec<usize>,
    /// Measure of the smallest residue cycle as a union of balls of
    /// exponent `k`. That union is invariant, so a value below the sphere
    /// measure is a non-ergodicity witness independent of the two-ball
    /// candidates.
    pub cycle_measure: BigRational,
    pub verdict: Verdict,
}

impl ErgodicityReport {
    pub fn witness(&self) -> Option<&CandidateOutcome> {
        self.outcomes.iter().find(|o| o.is_witness())
    }

    /// The transition is a single cycle through the whole sphere.
    pub fn transitive(&self) -> bool {
        self.cycle_lengths.len() == 1
    }

    pub fn variant_closed(&self, variant: BallVariant) -> bool {
        self.outcomes
            .iter()
            .filter(|o| o.candidate.variant == variant)
            .all(|o| o.invariance.forward_closed)
    }
}

/// Builds both candidates around one sampled center per seed and decides
/// whether any is a forward-closed set of intermediate measure.
pub fn ergodicity_verdict(
    inst: &SphereInstance,
    seeds: &[u64],
    k: Option<u32>,
) -> Result<ErgodicityReport> {
    let k = k.unwrap_or_else(|| inst.default_residue_exponent());
    let model = ResidueModel::new(inst, k)?;
    let sphere = inst.sphere();
    let mut centers = Vec::with_capacity(seeds.len());
    for &seed in seeds {
        centers.push((seed, sample_sphere(&sphere, seed)?));
    }
    let ys: Vec<_> = centers.iter().map(|(_, y)| y.clone()).collect();
    let soundness_mismatches = model.soundness_mismatches(inst, &ys)?.len();

    let mut displacement_failures = 0;
    let mut bound_failures = 0;
    let mut strict_bounds = 0;
    let mut outcomes = Vec::new();
    for (seed, y) in &centers {
        if !displacement_check(inst, y)?.equals_rho {
            displacement_failures += 1;
        }
        let bound = second_iterate_bound(inst, y)?;
        bound_failures += usize::from(!bound.within_r0);
        strict_bounds += usize::from(bound.strict);
        for variant in BallVariant::BOTH {
            let candidate = build_invariant_set(inst, y, variant)?;
            let invariance = invariance_check(inst, &candidate, k)?;
            outcomes.push(CandidateOutcome {
                seed: *seed,
                candidate,
                invariance,
            });
        }
    }
    let closed_saturates = outcomes
        .iter()
        .any(|o| o.candidate.variant == BallVariant::ClosedBalls && o.candidate.saturates());
    let mut cycle_lengths: Vec<usize> = model.cycles()?.iter().map(Vec::len).collect();
    cycle_lengths.sort_unstable();
    let ball = p_power(inst.p(), -(k as i64));
    let cycle_measure = ball * BigRational::from_integer(cycle_lengths[0].into());
    let verdict = if outcomes.iter().any(|o| o.is_witness()) {
        Verdict::NonErgodicWitnessFound
    } else {
        Verdict::NoWitnessAtThisResolution
    };
    Ok(ErgodicityReport {
        p: inst.p(),
        b: inst.b().clone(),
        m: inst.m(),
        r0_exponent: inst.r0_exponent(),
        k,
        sphere_measure: inst.sphere_measure().0,
        displacement_failures,
        bound_failures,
        strict_bounds,
        soundness_mismatches,
        outcomes,
        closed_saturates,
        cycle_lengths,
        cycle_measure,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::PrimeContext;

    fn inst(p: u32, b: i64, m: i64) -> SphereInstance {
        SphereInstance::from_ints(PrimeContext::new(p, 32).unwrap(), b, m).unwrap()
    }

    fn frac(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn candidate_measures() {
        let i = inst(5, 5, 1);
        let y = sample_sphere(&i.sphere(), 0).unwrap();
        let closed = build_invariant_set(&i, &y, BallVariant::ClosedBalls).unwrap();
        assert_eq!(closed.measure, frac(2, 25));
        assert_eq!(closed.sphere_measure, frac(4, 25));
        assert_eq!(closed.ratio(), frac(1, 2));
        assert_eq!(&closed.measure + &closed.complement_measure(), closed.sphere_measure);
        let open = build_invariant_set(&i, &y, BallVariant::OpenBalls).unwrap();
        assert_eq!(open.measure, frac(2, 125));

        let i = inst(3, 3, 1);
        let y = sample_sphere(&i.sphere(), 0).unwrap();
        let closed = build_invariant_set(&i, &y, BallVariant::ClosedBalls).unwrap();
        assert_eq!(closed.measure, frac(2, 9));
        assert!(closed.saturates() && !closed.is_proper());
    }

    #[test]
    fn two_ball_sets() {
        // f(f(y)) stays at distance rho from y, so the pair of r0-balls is
        // not closed under f
        let i = inst(5, 5, 1);
        let y = sample_sphere(&i.sphere(), 7).unwrap();
        let c = build_invariant_set(&i, &y, BallVariant::ClosedBalls).unwrap();
        let r = invariance_check(&i, &c, 4).unwrap();
        assert!(!r.forward_closed);
        assert_eq!(r.checked, 50);
        assert_eq!(r.violations.len(), 25);
        assert!(matches!(invariance_check(&i, &c, 3), Err(Error::Precondition(_))));

        let i = inst(3, 3, 1);
        let y = sample_sphere(&i.sphere(), 7).unwrap();
        let c = build_invariant_set(&i, &y, BallVariant::OpenBalls).unwrap();
        let r = invariance_check(&i, &c, 4).unwrap();
        assert!(r.forward_closed);
        assert_eq!(c.measure, frac(2, 27));
    }

    #[test]
    fn one_ball_is_not_closed() {
        let i = inst(5, 5, 1);
        let y = sample_sphere(&i.sphere(), 7).unwrap();
        let c = build_invariant_set(&i, &y, BallVariant::ClosedBalls).unwrap();
        let r = forward_closure(&i, &c.balls[..1], 4).unwrap();
        assert!(!r.forward_closed);
        assert_eq!(r.violations.len(), r.checked);
        let model = ResidueModel::new(&i, 4).unwrap();
        for v in &r.violations {
            assert!(model.in_region(&c.balls[1], &v.image).unwrap());
        }
    }

    #[test]
    fn verdicts() {
        let r = ergodicity_verdict(&inst(5, 5, 1), &[1, 2, 3], Some(4)).unwrap();
        assert_eq!(r.verdict, Verdict::NoWitnessAtThisResolution);
        assert!(r.transitive());
        assert_eq!(r.cycle_measure, r.sphere_measure);
        assert_eq!(r.displacement_failures + r.soundness_mismatches, 0);
        assert_eq!(r.bound_failures, 3);
        let again = ergodicity_verdict(&inst(5, 5, 1), &[9, 10], Some(4)).unwrap();
        assert_eq!(again.verdict, r.verdict);

        let r = ergodicity_verdict(&inst(3, 9, 1), &[1], None).unwrap();
        assert_eq!(r.verdict, Verdict::NoWitnessAtThisResolution);
        assert_eq!(r.sphere_measure, frac(6, 27));
        assert!(r.transitive());

        let r = ergodicity_verdict(&inst(3, 3, 1), &[1, 2], None).unwrap();
        assert!(r.closed_saturates);
        assert_eq!(r.verdict, Verdict::NonErgodicWitnessFound);
        let w = r.witness().unwrap();
        assert_eq!(w.candidate.variant, BallVariant::OpenBalls);
        assert_eq!(w.candidate.ratio(), frac(1, 3));

        let r = ergodicity_verdict(&inst(7, 7, 1), &[1], None).unwrap();
        assert_eq!(r.verdict, Verdict::NoWitnessAtThisResolution);
        assert_eq!(r.cycle_lengths.len(), 2);
        assert_eq!(&r.cycle_measure / &r.sphere_measure, frac(1, 2));
    }
}
