use num_rational::BigRational;

use padyn_core::dynamics::{
    classify, gamma_radius, iterate, multiplier, region_report, FixedPoint, GammaCondition,
    IterateConfig, MapParams, NormProfile, Precision, StopRule, TerminalEvent,
};
use padyn_core::ergodicity::ergodicity_verdict;
use padyn_core::instances::BUILTIN_INSTANCES;
use padyn_core::padic::{ExtValuation, PadicRational, UltrametricRegion};
use padyn_core::verify::{run_suite, tally, Suite, SuiteOptions};
use padyn_core::Error;

use crate::config::{parse_rational, ExperimentConfig};
use crate::report::Report;
use crate::CliError;

/// What a command produced, plus whether every check in it passed.
pub struct Outcome {
    pub report: Report,
    pub summary: String,
    pub passed: bool,
}

fn kv(report: &mut Report, key: &str, value: impl ToString) {
    report.push(vec![key.to_string(), value.to_string()]);
}

fn norm(v: ExtValuation, p: u32) -> BigRational {
    v.norm(p)
}

fn region_cells(r: &UltrametricRegion) -> [String; 3] {
    [r.to_string(), r.exponent.to_string(), r.measure().to_string()]
}

pub fn list_instances() -> Outcome {
    let mut report = Report::new(&["name", "p", "a", "b", "case", "provenance"]);
    for i in BUILTIN_INSTANCES {
        report.push(vec![
            i.name.into(),
            i.p.to_string(),
            i.a.to_string(),
            i.b.to_string(),
            i.case.name().into(),
            i.provenance.into(),
        ]);
    }
    let summary = report.to_table();
    Outcome {
        report,
        summary,
        passed: true,
    }
}

pub fn cmd_classify(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let m = cfg.map()?;
    let case = classify(&m);
    let n = NormProfile::of(&m);
    let regions = region_report(&m);
    let p = m.p();
    let mut r = Report::new(&["quantity", "value"]);
    kv(&mut r, "params", &m);
    kv(&mut r, "case", case.tag);
    kv(&mut r, "realizable_in_qp", case.realizable_in_qp);
    kv(&mut r, "x2_nature", format!("{:?}", case.tag.nature()));
    kv(&mut r, "x1", m.x1());
    kv(&mut r, "x2", m.x2());
    kv(&mut r, "pole", m.pole());
    kv(&mut r, "multiplier_x1", multiplier(&m, FixedPoint::X1));
    kv(&mut r, "multiplier_x2", multiplier(&m, FixedPoint::X2));
    kv(&mut r, "v_a", n.v_a);
    kv(&mut r, "v_b", n.v_b);
    kv(&mut r, "v_2a_minus_b", n.v_2a_minus_b);
    kv(&mut r, "v_a_minus_b", n.v_a_minus_b);
    kv(&mut r, "norm_a", norm(ExtValuation::Finite(n.v_a), p));
    kv(&mut r, "norm_b", norm(ExtValuation::Finite(n.v_b), p));
    kv(&mut r, "norm_2a_minus_b", norm(n.v_2a_minus_b, p));
    kv(&mut r, "attractor_x1", &regions.attractor_x1);
    kv(&mut r, "x2_role", format!("{:?}", regions.x2_role));
    match &regions.x2_region {
        Some(region) => {
            kv(&mut r, "x2_region", region);
            kv(&mut r, "x2_radius_exponent", region.exponent);
        }
        None => {
            kv(&mut r, "x2_region", "none");
            kv(&mut r, "x2_radius_exponent", "none");
        }
    }
    kv(&mut r, "rule", regions.rule);
    let summary = r.to_table();
    Ok(Outcome {
        report: r,
        summary,
        passed: true,
    })
}

pub fn cmd_regions(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let m = cfg.map()?;
    let regions = region_report(&m);
    let mut r = Report::new(&["name", "region", "exponent", "measure", "detail"]);
    let push = |r: &mut Report, name: &str, region: &UltrametricRegion, detail: String| {
        let [a, b, c] = region_cells(region);
        r.push(vec![name.into(), a, b, c, detail]);
    };
    push(&mut r, "attractor_x1", &regions.attractor_x1, regions.rule.into());
    if let Some(region) = &regions.x2_region {
        push(&mut r, "x2_region", region, format!("{:?}", regions.x2_role));
    }
    for condition in [GammaCondition::Gamma1, GammaCondition::Gamma2, GammaCondition::Gamma3] {
        match gamma_radius(&m, condition) {
            Ok(g) => push(
                &mut r,
                &format!("radius_{}", condition.name().to_lowercase()),
                &g.region,
                format!(
                    "symbolic={} attained={} brute_force={} attained={} agrees={}",
                    g.symbolic.exponent,
                    g.symbolic.attained,
                    g.brute_force.exponent,
                    g.brute_force.attained,
                    g.agrees()
                ),
            ),
            Err(Error::WrongCase(_)) => {}
            Err(e) => return Err(e.into()),
        }
    }
    if let Some(ex) = &regions.exceptional {
        for n in 1..=3 {
            push(&mut r, &format!("exceptional_r{n}"), &ex.r_sphere(n, m.x1()), "excluded".into());
        }
        for j in 1..=3 {
            if let Some(s) = ex.l_sphere(j) {
                push(&mut r, &format!("exceptional_l{j}"), &s, "excluded".into());
            }
        }
    }
    let summary = format!("{m}  case {}\n{}", regions.case.tag, r.to_table());
    Ok(Outcome {
        report: r,
        summary,
        passed: true,
    })
}

fn parse_start(m: &MapParams, s: &str) -> Result<PadicRational, CliError> {
    Ok(match s.trim() {
        "x1" => m.x1(),
        "x2" => m.x2().clone(),
        "pole" | "P" => m.pole().clone(),
        other => PadicRational::new(m.ctx(), parse_rational(other)?),
    })
}

pub fn cmd_orbit(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let m = cfg.map()?;
    let start = cfg
        .start
        .as_deref()
        .ok_or_else(|| CliError::Config("orbit needs a start point --start".into()))?;
    let x0 = parse_start(&m, start)?;
    let regions = region_report(&m);
    let traj = iterate(
        &m,
        &x0,
        &IterateConfig::new(cfg.iters(), StopRule::None, Precision::context_default(&m)),
    );
    let pole_step = match traj.terminal_event {
        TerminalEvent::PoleHit { step } => Some(step),
        _ => None,
    };
    let mut r = Report::new(&[
        "step",
        "value",
        "val_to_x1",
        "val_to_x2",
        "in_attractor_x1",
        "in_x2_region",
        "event",
    ]);
    for (step, x) in traj.points.iter().enumerate() {
        let in_x2 = match &regions.x2_region {
            Some(region) => region.contains(x).to_string(),
            None => "none".into(),
        };
        let event = if pole_step == Some(step) { "pole" } else { "" };
        r.push(vec![
            step.to_string(),
            x.to_string(),
            (x - &m.x1()).valuation().to_string(),
            (x - m.x2()).valuation().to_string(),
            regions.attractor_x1.contains(x).to_string(),
            in_x2,
            event.into(),
        ]);
    }
    let end = match traj.terminal_event {
        TerminalEvent::PoleHit { step } => format!("pole hit at step {step}"),
        _ => format!("completed {} steps", traj.steps()),
    };
    let summary = format!("{m}  start {x0}  {end}\n{}", r.to_table());
    Ok(Outcome {
        report: r,
        summary,
        passed: true,
    })
}

/// Centers sampled for the two-ball candidates when `--samples` is unset.
pub const DEFAULT_CANDIDATE_CENTERS: usize = 3;

pub fn cmd_ergodicity(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let inst = cfg.sphere_instance()?;
    let centers = cfg.samples.unwrap_or(DEFAULT_CANDIDATE_CENTERS) as u64;
    let seeds: Vec<u64> = (0..centers).map(|j| cfg.seed() + j).collect();
    let rep = ergodicity_verdict(&inst, &seeds, cfg.residue_exp)?;
    let mut r = Report::new(&["quantity", "value"]);
    kv(&mut r, "p", rep.p);
    kv(&mut r, "b", &rep.b);
    kv(&mut r, "sphere_exp", rep.m);
    kv(&mut r, "r0_exp", rep.r0_exponent);
    kv(&mut r, "residue_exp", rep.k);
    kv(&mut r, "sphere_measure", &rep.sphere_measure);
    kv(&mut r, "centers", seeds.len());
    kv(&mut r, "displacement_failures", rep.displacement_failures);
    kv(&mut r, "second_iterate_bound_failures", rep.bound_failures);
    kv(&mut r, "second_iterate_strict", rep.strict_bounds);
    kv(&mut r, "residue_soundness_mismatches", rep.soundness_mismatches);
    for o in &rep.outcomes {
        let tag = format!("seed{}_{}", o.seed, o.candidate.variant.name());
        kv(&mut r, &format!("{tag}_center"), &o.candidate.y);
        kv(&mut r, &format!("{tag}_measure"), &o.candidate.measure);
        kv(&mut r, &format!("{tag}_ratio"), o.candidate.ratio());
        kv(&mut r, &format!("{tag}_forward_closed"), o.invariance.forward_closed);
        kv(
            &mut r,
            &format!("{tag}_violations"),
            format!("{}/{}", o.invariance.violations.len(), o.invariance.checked),
        );
    }
    kv(&mut r, "closed_saturates", rep.closed_saturates);
    kv(&mut r, "residue_cycles", rep.cycle_lengths.len());
    let lengths: Vec<String> = rep.cycle_lengths.iter().map(usize::to_string).collect();
    kv(&mut r, "residue_cycle_lengths", lengths.join(" "));
    kv(&mut r, "smallest_cycle_measure", &rep.cycle_measure);
    kv(&mut r, "verdict", format!("{:?}", rep.verdict));
    let witness = match rep.witness() {
        Some(o) => format!("seed {} {} balls ratio {}", o.seed, o.candidate.variant.name(), o.candidate.ratio()),
        None => "none".into(),
    };
    kv(&mut r, "witness", &witness);
    let summary = format!(
        "p={} b={} m={} k={}\nverdict {:?}\nwitness {witness}\nresidue cycles {}\n",
        rep.p,
        rep.b,
        rep.m,
        rep.k,
        rep.verdict,
        rep.cycle_lengths.len()
    );
    Ok(Outcome {
        report: r,
        summary,
        passed: true,
    })
}

pub fn suite_options(cfg: &ExperimentConfig) -> Result<SuiteOptions, CliError> {
    let mut opts = SuiteOptions {
        seed: cfg.seed(),
        samples: cfg.samples(),
        iterations: cfg.iters(),
        precision: cfg.precision(),
        residue_exponent: cfg.residue_exp,
        ..SuiteOptions::default()
    };
    if cfg.sphere_exp.is_some() {
        opts.sphere = Some(cfg.sphere_instance()?);
    } else if cfg.has_map() {
        opts.params = Some(cfg.map()?);
    }
    Ok(opts)
}

pub fn cmd_verify(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let suite: Suite = cfg
        .suite
        .as_deref()
        .unwrap_or("all")
        .parse()
        .map_err(|e| match e {
            Error::InvalidParams(msg) => CliError::Config(msg),
            other => other.into(),
        })?;
    let opts = suite_options(cfg)?;
    let records = run_suite(suite, &opts)?;
    let mut r = Report::new(&[
        "suite", "check", "instance", "trials", "failures", "expected", "observed", "passed",
    ]);
    for rec in &records {
        r.push(vec![
            rec.suite.clone(),
            rec.check.clone(),
            rec.instance.clone(),
            rec.trials.to_string(),
            rec.failures.to_string(),
            rec.expected.clone(),
            rec.observed.clone(),
            if rec.passed { "PASS" } else { "FAIL" }.into(),
        ]);
    }
    let (passed, failed) = tally(&records);
    let summary = format!(
        "{}suite {suite}: {passed} passed, {failed} failed\n",
        r.to_table()
    );
    Ok(Outcome {
        report: r,
        summary,
        passed: failed == 0,
    })
}
