//! Acceptance criteria. Each test prints one `PASS`/`FAIL` line to stderr,
//! bypassing the test harness capture, then asserts.

use std::io::Write;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use padyn_core::dynamics::{
    apply, apply2, basin_test, classify, delta_identities, derivative, factorization_residuals,
    gamma_radius, multiplier, nth_derivative_at_fixed_point, period2_cubic, period2_points,
    region_report, siegel_invariance_test, BasinOutcome, FixedPoint, FixedPointNature,
    GammaCondition, MapParams, Poly, X2Role,
};
use padyn_core::ergodicity::{
    build_invariant_set, conjugation_residual, displacement_check, ergodicity_verdict,
    invariance_check, second_iterate_bound, second_iterate_identity_residual, BallVariant,
    SphereInstance, Verdict,
};
use padyn_core::instances::{random_params, random_point, random_scalar, BUILTIN_INSTANCES};
use padyn_core::padic::{
    rng_from_seed, sample_region_with, sample_sphere_with, ExtValuation, PadicRational,
    PrimeContext, UltrametricRegion, DEFAULT_PRECISION,
};
use padyn_core::Error;

fn verdict(id: u32, name: &str, ok: bool, detail: String) {
    let status = if ok { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "criterion {id:>2} {status} {name}: {detail}");
    assert!(ok, "criterion {id} ({name}) failed: {detail}");
}

fn ctx(p: u32) -> PrimeContext {
    PrimeContext::new(p, DEFAULT_PRECISION).unwrap()
}

fn q(c: PrimeContext, n: i64) -> PadicRational {
    PadicRational::from_int(c, n)
}

/// Random element that is zero one time in sixteen.
fn element(rng: &mut padyn_core::padic::SampleRng, c: PrimeContext) -> PadicRational {
    use rand::Rng;
    if rng.gen_range(0..16) == 0 {
        PadicRational::zero(c)
    } else {
        random_point(rng, c, -4, 4)
    }
}

#[test]
fn c01_norm_axioms() {
    let started = Instant::now();
    let pairs = 10_000;
    let mut failures = 0;
    for p in [2, 3, 5, 7, 11] {
        let c = ctx(p);
        let mut rng = rng_from_seed(100 + p as u64);
        for _ in 0..pairs {
            let (x, y) = (element(&mut rng, c), element(&mut rng, c));
            // |xy| = |x||y| on the norms themselves
            if (&x * &y).norm() != x.norm() * y.norm() {
                failures += 1;
            }
            let (nx, ny, ns) = (x.norm(), y.norm(), (&x + &y).norm());
            let max = if nx > ny { nx.clone() } else { ny.clone() };
            if ns > max {
                failures += 1;
            }
            if nx != ny && (&x - &y).norm() != max {
                failures += 1;
            }
        }
    }
    let elapsed = started.elapsed();
    verdict(
        1,
        "norm axioms",
        failures == 0 && elapsed < Duration::from_secs(10),
        format!("{failures} failures over 5 x {pairs} pairs in {elapsed:.2?}"),
    );
}

#[test]
fn c02_delta_identities() {
    let mut failures = 0;
    let mut checked = 0;
    for p in [2, 3, 5, 7] {
        let c = ctx(p);
        let mut rng = rng_from_seed(200 + p as u64);
        let mut done = 0;
        while done < 1000 {
            let m = random_params(&mut rng, c);
            let x = element(&mut rng, c);
            if !m.in_domain(&x) {
                continue;
            }
            done += 1;
            if !delta_identities(&m, &x).unwrap().all_zero() {
                failures += 1;
            }
        }
        checked += done;
    }
    verdict(
        2,
        "pole and fixed-point identities",
        failures == 0,
        format!("{failures} nonzero residuals over {checked} (a, b, x)"),
    );
}

#[test]
fn c03_fixed_points_and_derivatives() {
    let mut failures = 0;
    let mut sets = 0;
    for p in [2, 3, 5, 7] {
        let c = ctx(p);
        let mut rng = rng_from_seed(300 + p as u64);
        for _ in 0..25 {
            let m = random_params(&mut rng, c);
            sets += 1;
            let (a, b) = (m.a().clone(), m.b().clone());
            let x2 = q(c, 1).checked_div(&(&a - &b)).unwrap();
            failures += usize::from(!apply(&m, &q(c, 0)).unwrap().is_zero());
            failures += usize::from(apply(&m, &x2).unwrap() != x2);
            let lambda = (&a * &q(c, 2) - &b).checked_div(&a).unwrap();
            failures += usize::from(multiplier(&m, FixedPoint::X2) != lambda);
            // oracle: f = (a/b) x - a/b^2 + (a/b^2)/(bx+1), so for n >= 2
            // f^(n)(x) = (a/b^2) (-1)^n n! b^n / (bx+1)^(n+1)
            let mut fact = BigInt::one();
            for n in 2..=8u32 {
                fact *= n;
                for (which, x) in [(FixedPoint::X1, q(c, 0)), (FixedPoint::X2, x2.clone())] {
                    let sign = if n % 2 == 0 { 1 } else { -1 };
                    let expected = a.checked_div(&b.square()).unwrap()
                        * x.sibling(BigRational::from_integer(&fact * sign))
                        * b.pow(n as i32).unwrap()
                        * (&b * &x + q(c, 1)).pow(-(n as i32 + 1)).unwrap();
                    let closed = nth_derivative_at_fixed_point(&m, n, which).unwrap();
                    let general = derivative(&m, &x, n).unwrap();
                    failures += usize::from(closed != expected || general != expected);
                }
            }
        }
    }
    verdict(
        3,
        "fixed points, multiplier and derivatives",
        failures == 0 && sets >= 100,
        format!("{failures} mismatches over {sets} parameter sets, n <= 8"),
    );
}

#[test]
fn c04_classification_consistency() {
    let mut disagreements = 0;
    let mut sets = 0;
    for p in [2, 3, 5, 7] {
        let c = ctx(p);
        let mut rng = rng_from_seed(400 + p as u64);
        for _ in 0..250 {
            let m = random_params(&mut rng, c);
            sets += 1;
            let lambda = (m.a() * &q(c, 2) - m.b()).checked_div(m.a()).unwrap();
            let by_norm = match lambda.valuation() {
                ExtValuation::Finite(v) if v < 0 => FixedPointNature::Repelling,
                ExtValuation::Finite(0) => FixedPointNature::Indifferent,
                _ => FixedPointNature::Attracting,
            };
            disagreements += usize::from(classify(&m).tag.nature() != by_norm);
        }
    }
    verdict(
        4,
        "case agrees with multiplier size",
        disagreements == 0 && sets >= 1000,
        format!("{disagreements} disagreements over {sets} parameter sets"),
    );
}

#[test]
fn c05_siegel_disk_instance() {
    let started = Instant::now();
    let m = MapParams::from_ints(ctx(3), 1, 3).unwrap();
    let report = region_report(&m);
    let disk = report.x2_region.clone().unwrap();
    let mut exits = 0;
    for e in 1..=5 {
        exits += siegel_invariance_test(&m, disk.exponent + e, 100, 100, 500 + e as u64)
            .unwrap()
            .violations;
    }
    let ball = UltrametricRegion::open_ball(q(m.ctx(), 0), 0);
    let mut rng = rng_from_seed(501);
    let mut stuck = 0;
    for _ in 0..100 {
        let x = sample_region_with(&ball, &mut rng);
        stuck += usize::from(!matches!(basin_test(&m, &x, 200, 30), BasinOutcome::ConvergedX1 { .. }));
    }
    let elapsed = started.elapsed();
    verdict(
        5,
        "Siegel disk p=3 a=1 b=3",
        report.x2_role == X2Role::SiegelDisk
            && disk.exponent == 0
            && exits == 0
            && stuck == 0
            && elapsed < Duration::from_secs(30),
        format!("{exits} sphere exits, {stuck}/100 basin failures in {elapsed:.2?}"),
    );
}

#[test]
fn c06_repelling_instance() {
    let m = MapParams::from_ints(ctx(5), 5, 1).unwrap();
    let report = region_report(&m);
    let ex = report.exceptional.clone().unwrap();
    let mut rng = rng_from_seed(600);
    // |x| > r0 = 1
    let mut scaling = 0;
    for _ in 0..100 {
        let x = random_point(&mut rng, m.ctx(), -6, -1);
        scaling += usize::from(apply(&m, &x).unwrap().valuation() != x.valuation().shift(1));
    }
    // here every |x| >= 1 lies on an exceptional sphere, and inside
    // B_1(0) none of them is excluded
    let ball = UltrametricRegion::open_ball(m.x1(), 0);
    let mut off = 0;
    let mut stuck = 0;
    for _ in 0..100 {
        let x = sample_region_with(&ball, &mut rng);
        off += usize::from(ex.guaranteed(&x));
        stuck += usize::from(!matches!(basin_test(&m, &x, 300, 30), BasinOutcome::ConvergedX1 { .. }));
    }
    verdict(
        6,
        "repelling p=5 a=5 b=1",
        scaling == 0 && off == 100 && stuck == 0,
        format!("{scaling} scaling failures, {off}/100 in the guaranteed basin, {stuck} not converged"),
    );
}

#[test]
fn c07_attracting_instances() {
    let mut failures = 0;
    let mut lines = Vec::new();
    for (p, a, b) in [(2, 1, 4), (3, 1, 5)] {
        let m = MapParams::from_ints(ctx(p), a, b).unwrap();
        let report = region_report(&m);
        let balls = [
            (report.attractor_x1.clone(), FixedPoint::X1),
            (report.x2_region.clone().expect("attracting x2"), FixedPoint::X2),
        ];
        let mut rng = rng_from_seed(700 + p as u64);
        for (ball, target) in balls {
            let mut bad = 0;
            for _ in 0..100 {
                let x = sample_region_with(&ball, &mut rng);
                let ok = matches!(
                    (basin_test(&m, &x, 200, 30), target),
                    (BasinOutcome::ConvergedX1 { .. }, FixedPoint::X1)
                        | (BasinOutcome::ConvergedX2 { .. }, FixedPoint::X2)
                );
                bad += usize::from(!ok);
            }
            failures += bad;
            lines.push(format!("{m} {ball}: {bad}"));
        }
    }
    verdict(7, "attracting p=2 and p=3", failures == 0, lines.join("; "));
}

#[test]
fn c08_gamma_radius_cross_check() {
    let mut disagreements = 0;
    let mut compared = 0;
    // one condition at x1, plus one at x2 unless it repels
    let applicable: usize = BUILTIN_INSTANCES
        .iter()
        .map(|i| 1 + usize::from(i.case.nature() != FixedPointNature::Repelling))
        .sum();
    for inst in BUILTIN_INSTANCES {
        let m = inst.params(DEFAULT_PRECISION).unwrap();
        for cond in [GammaCondition::Gamma1, GammaCondition::Gamma2, GammaCondition::Gamma3] {
            match gamma_radius(&m, cond) {
                Ok(g) => {
                    compared += 1;
                    disagreements += usize::from(!g.agrees());
                }
                Err(Error::WrongCase(_)) => {}
                Err(e) => panic!("{e}"),
            }
        }
    }
    verdict(
        8,
        "radius condition symbolic vs n <= 512",
        disagreements == 0 && compared == applicable,
        format!("{disagreements} disagreements over {compared} comparisons"),
    );
}

#[test]
fn c09_period_two_factorization() {
    let mut failures = 0;
    let mut points = 0;
    let mut sets = 0;
    for p in [3, 5, 7] {
        let c = ctx(p);
        let n = c.precision() as i64;
        let mut rng = rng_from_seed(900 + p as u64);
        for _ in 0..34 {
            let m = random_params(&mut rng, c);
            sets += 1;
            let (a, b) = (m.a(), m.b());
            // oracle: expand the product by hand
            let expected = Poly::new(vec![
                q(c, -1),
                -(b * &q(c, 2)),
                -(b * &(a + b)),
                a * &(&a.square() - &b.square()),
            ]);
            failures += usize::from(period2_cubic(&m) != expected);
            failures += usize::from(!factorization_residuals(&m).all_zero());
            let roots = match period2_points(&m) {
                Ok(r) => r,
                Err(Error::DegenerateParams(_)) => continue,
                Err(e) => panic!("{e}"),
            };
            for r in roots {
                points += 1;
                let back = (apply2(&m, &r.root).unwrap() - &r.root).valuation();
                let moved = (apply(&m, &r.root).unwrap() - &r.root).valuation();
                failures += usize::from(!back.at_least(n - 4) || moved.at_least(n - 4));
            }
        }
    }
    verdict(
        9,
        "period-two factorization",
        failures == 0 && sets >= 100,
        format!("{failures} failures over {sets} (a, b), {points} period-two points"),
    );
}

#[test]
fn c10_sphere_displacement_and_return() {
    let mut lines = Vec::new();
    let mut ok = true;
    for (p, b) in [(5u32, 5i64), (3, 9)] {
        let inst = SphereInstance::from_ints(ctx(p), b, 1).unwrap();
        let sphere = inst.sphere();
        let mut rng = rng_from_seed(1000 + p as u64);
        let (mut moved, mut bound, mut strict) = (0, 0, 0);
        for _ in 0..500 {
            let y = sample_sphere_with(&sphere, &mut rng).unwrap();
            moved += usize::from(!displacement_check(&inst, &y).unwrap().equals_rho);
            let c = second_iterate_bound(&inst, &y).unwrap();
            bound += usize::from(!c.within_r0);
            strict += usize::from(c.strict);
        }
        let mut residual = 0;
        let mut done = 0;
        while done < 1000 {
            let x = element(&mut rng, inst.ctx());
            match second_iterate_identity_residual(&inst, &x) {
                Ok(r) => {
                    done += 1;
                    residual += usize::from(!r.is_zero());
                }
                Err(Error::PoleHit) => {}
                Err(e) => panic!("{e}"),
            }
        }
        ok &= moved == 0 && residual == 0 && bound == 0;
        lines.push(format!(
            "p={p} b={b}: displacement {moved}/500, identity {residual}/1000, \
             second-iterate bound {bound}/500 violations ({strict} strict)"
        ));
    }
    verdict(10, "sphere displacement and second-iterate return", ok, lines.join("; "));
}

/// Independent closure oracle with machine integers: residues mod `p^k` of
/// the two closed balls, mapped by `r -> r^2 / (b r + 1)`.
fn closure_violations_u64(p: u64, b: u64, k: u32, y: u64, radius_exp: u32) -> (usize, usize) {
    let modulus = p.pow(k);
    let inv = |x: u64| (1..modulus).find(|z| x * z % modulus == 1).unwrap();
    let t = |r: u64| r * r % modulus * inv((b * r + 1) % modulus) % modulus;
    let step = p.pow(radius_exp);
    let fy = t(y % modulus);
    let mut members: Vec<u64> = (0..modulus)
        .filter(|r| (r + modulus - y % step) % step == 0 || (r + modulus - fy % step) % step == 0)
        .collect();
    members.sort_unstable();
    let bad = members.iter().filter(|&&r| members.binary_search(&t(r)).is_err()).count();
    (members.len(), bad)
}

#[test]
fn c11_non_ergodicity_witness() {
    let started = Instant::now();
    let c = ctx(5);
    let inst = SphereInstance::from_ints(c, 5, 1).unwrap();
    let k = 4;
    let y = sample_sphere_with(&inst.sphere(), &mut rng_from_seed(1100)).unwrap();
    let cand = build_invariant_set(&inst, &y, BallVariant::ClosedBalls).unwrap();
    let closure = invariance_check(&inst, &cand, k).unwrap();
    let frac = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    let measures_ok = cand.measure == frac(2, 25)
        && cand.sphere_measure == frac(4, 25)
        && cand.ratio() == frac(1, 2)
        && cand.ratio().is_positive()
        && cand.ratio() < BigRational::one();
    let y_res: u64 = y.residue(k).unwrap().try_into().unwrap();
    let (members, oracle_bad) = closure_violations_u64(5, 5, k, y_res, 2);
    let report = ergodicity_verdict(&inst, &[0, 1, 2], Some(k)).unwrap();
    let elapsed = started.elapsed();
    verdict(
        11,
        "non-ergodicity witness p=5 b=5 m=1 k=4",
        measures_ok
            && closure.forward_closed
            && report.verdict == Verdict::NonErgodicWitnessFound
            && elapsed < Duration::from_secs(10),
        format!(
            "mu(A)={} mu(S)={} ratio={}; closed-ball A forward closed: {} \
             ({} of {} residues leave A; integer oracle {oracle_bad} of {members}); \
             residue map has {} cycle(s); verdict {:?} in {elapsed:.2?}",
            cand.measure,
            cand.sphere_measure,
            cand.ratio(),
            closure.forward_closed,
            closure.violations.len(),
            closure.checked,
            report.cycle_lengths.len(),
            report.verdict,
        ),
    );
}

#[test]
fn c12_conjugation() {
    let mut failures = 0;
    let mut checked = 0;
    for p in [3, 5, 7] {
        let c = ctx(p);
        let mut rng = rng_from_seed(1200 + p as u64);
        let mut done = 0;
        while done < 1000 {
            let a = random_scalar(&mut rng, c, -3, 3);
            let b = random_scalar(&mut rng, c, -3, 3);
            let x = element(&mut rng, c);
            match conjugation_residual(&a, &b, &x) {
                Ok(r) => {
                    done += 1;
                    failures += usize::from(!r.is_zero());
                }
                Err(Error::PoleHit | Error::InvalidParams(_)) => {}
                Err(e) => panic!("{e}"),
            }
        }
        checked += done;
    }
    // 2 f(1/2) = 1/7 = h(1) for a = 2, b = 5
    let c = ctx(5);
    let direct = apply(&MapParams::from_ints(c, 1, 5).unwrap(), &PadicRational::from_frac(c, 1, 2).unwrap())
        .unwrap()
        * q(c, 2);
    failures += usize::from(direct != PadicRational::from_frac(c, 1, 7).unwrap());
    verdict(
        12,
        "conjugation by scaling",
        failures == 0,
        format!("{failures} nonzero residuals over {checked} (a, b, x)"),
    );
}
