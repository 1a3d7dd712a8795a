use serde::{Deserialize, Serialize};

use super::classify::{region_report, X2Role};
use super::map::{apply, FixedPoint, MapParams};
use crate::error::{Error, Result};
use crate::padic::{sample_sphere_with, rng_from_seed, ExtValuation, PadicRational, UltrametricRegion};

/// Default convergence threshold on `valuation(x - target)`.
pub const DEFAULT_CONVERGENCE_THRESHOLD: i64 = 30;
/// Consecutive non-improving steps before an orbit counts as escaped.
pub const DEFAULT_ESCAPE_WINDOW: usize = 10;

/// How successive points are stored.
///
/// Exact iteration doubles the height of the rational every step, so long
/// runs round each image to absolute precision `p^k`: then
/// `valuation(points[j+1] - f(points[j])) >= k` and every step is still an
/// exact evaluation of `f` at a genuine point of `Q_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Precision {
    Exact,
    Absolute(i64),
}

impl Precision {
    pub fn context_default(m: &MapParams) -> Self {
        Precision::Absolute(m.ctx().precision() as i64)
    }

    fn round(&self, x: PadicRational) -> PadicRational {
        match self {
            Precision::Exact => x,
            Precision::Absolute(k) => x.truncate(*k),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StopRule {
    None,
    /// Stop once `valuation(x - x1)` or `valuation(x - x2)` reaches the
    /// threshold.
    Converged { threshold: i64 },
    /// Stop once `valuation(x - target) >= threshold`.
    Near {
        target: PadicRational,
        threshold: i64,
    },
    Enters(UltrametricRegion),
    Leaves(UltrametricRegion),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TerminalEvent {
    Completed,
    /// `points[step]` is the pole.
    PoleHit { step: usize },
    ConvergedTo { target: FixedPoint, step: usize },
    /// A `Near`, `Enters` or `Leaves` rule fired at `points[step]`.
    Stopped { step: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    pub start: PadicRational,
    /// `points[0]` is the start.
    pub points: Vec<PadicRational>,
    pub reference: PadicRational,
    /// `valuation(points[j] - reference)`.
    pub valuations: Vec<ExtValuation>,
    pub precision: Precision,
    pub terminal_event: TerminalEvent,
}

impl Trajectory {
    pub fn last(&self) -> &PadicRational {
        self.points.last().expect("trajectory has a start point")
    }

    pub fn steps(&self) -> usize {
        self.points.len() - 1
    }

    pub fn distances_to(&self, target: &PadicRational) -> Vec<ExtValuation> {
        self.points.iter().map(|x| (x - target).valuation()).collect()
    }
}

#[derive(Debug, Clone)]
pub struct IterateConfig {
    pub n_max: usize,
    pub stop: StopRule,
    pub precision: Precision,
    /// Defaults to `x1`.
    pub reference: Option<PadicRational>,
}

impl IterateConfig {
    pub fn new(n_max: usize, stop: StopRule, precision: Precision) -> Self {
        Self {
            n_max,
            stop,
            precision,
            reference: None,
        }
    }
}

fn stop_fires(m: &MapParams, rule: &StopRule, x: &PadicRational, step: usize) -> Option<TerminalEvent> {
    match rule {
        StopRule::None => None,
        StopRule::Converged { threshold } => {
            if x.valuation().at_least(*threshold) {
                Some(TerminalEvent::ConvergedTo { target: FixedPoint::X1, step })
            } else if (x - m.x2()).valuation().at_least(*threshold) {
                Some(TerminalEvent::ConvergedTo { target: FixedPoint::X2, step })
            } else {
                None
            }
        }
        StopRule::Near { target, threshold } => (x - target)
            .valuation()
            .at_least(*threshold)
            .then_some(TerminalEvent::Stopped { step }),
        StopRule::Enters(r) => r.contains(x).then_some(TerminalEvent::Stopped { step }),
        StopRule::Leaves(r) => (!r.contains(x)).then_some(TerminalEvent::Stopped { step }),
    }
}

pub fn iterate(m: &MapParams, x0: &PadicRational, config: &IterateConfig) -> Trajectory {
    let reference = config.reference.clone().unwrap_or_else(|| m.x1());
    let mut points = vec![x0.clone()];
    let mut terminal = stop_fires(m, &config.stop, x0, 0);
    if terminal.is_none() {
        terminal = Some(TerminalEvent::Completed);
        for step in 0..config.n_max {
            let x = &points[step];
            let next = match apply(m, x) {
                Ok(y) => config.precision.round(y),
                Err(_) => {
                    terminal = Some(TerminalEvent::PoleHit { step });
                    break;
                }
            };
            let fired = stop_fires(m, &config.stop, &next, step + 1);
            points.push(next);
            if fired.is_some() {
                terminal = fired;
                break;
            }
        }
    }
    // a pole at the last recorded point is still reported
    if terminal == Some(TerminalEvent::Completed) && !m.in_domain(points.last().unwrap()) {
        terminal = Some(TerminalEvent::PoleHit { step: points.len() - 1 });
    }
    let valuations = points.iter().map(|x| (x - &reference).valuation()).collect();
    Trajectory {
        start: x0.clone(),
        points,
        reference,
        valuations,
        precision: config.precision,
        terminal_event: terminal.expect("set above"),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BasinOutcome {
    ConvergedX1 { step: usize },
    ConvergedX2 { step: usize },
    /// Distances to both fixed points failed to shrink for a full window,
    /// or the orbit hit the pole.
    Escaped { step: usize, pole: bool },
    Undecided,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasinConfig {
    pub n_max: usize,
    pub threshold: i64,
    pub window: usize,
    pub precision: Precision,
}

impl BasinConfig {
    pub fn new(m: &MapParams, n_max: usize, threshold: i64) -> Self {
        Self {
            n_max,
            threshold,
            window: DEFAULT_ESCAPE_WINDOW,
            precision: Precision::context_default(m),
        }
    }
}

pub fn basin_test(m: &MapParams, x: &PadicRational, n_max: usize, threshold: i64) -> BasinOutcome {
    basin_test_with(m, x, &BasinConfig::new(m, n_max, threshold))
}

pub fn basin_test_with(m: &MapParams, x: &PadicRational, cfg: &BasinConfig) -> BasinOutcome {
    let x2 = m.x2();
    let mut cur = x.clone();
    let mut stalled = 0usize;
    let mut d1 = cur.valuation();
    let mut d2 = (&cur - x2).valuation();
    for step in 0..=cfg.n_max {
        if d1.at_least(cfg.threshold) {
            return BasinOutcome::ConvergedX1 { step };
        }
        if d2.at_least(cfg.threshold) {
            return BasinOutcome::ConvergedX2 { step };
        }
        if step == cfg.n_max {
            break;
        }
        let next = match apply(m, &cur) {
            Ok(y) => cfg.precision.round(y),
            Err(_) => return BasinOutcome::Escaped { step, pole: true },
        };
        let n1 = next.valuation();
        let n2 = (&next - x2).valuation();
        if n1 <= d1 && n2 <= d2 {
            stalled += 1;
            if stalled >= cfg.window {
                return BasinOutcome::Escaped { step: step + 1, pole: false };
            }
        } else {
            stalled = 0;
        }
        cur = next;
        d1 = n1;
        d2 = n2;
    }
    BasinOutcome::Undecided
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SphereExit {
    pub sample: usize,
    pub step: usize,
    pub start: PadicRational,
    pub valuation: ExtValuation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SiegelReport {
    pub sphere: UltrametricRegion,
    pub samples: usize,
    pub iterations: usize,
    pub violations: usize,
    pub exits: Vec<SphereExit>,
}

/// First step at which the orbit of `x` leaves the sphere of exponent
/// `exponent` around `x2`, within `iterations` steps.
pub fn sphere_exit_step(
    m: &MapParams,
    x: &PadicRational,
    exponent: i64,
    iterations: usize,
) -> Option<(usize, ExtValuation)> {
    let target = ExtValuation::Finite(exponent);
    let precision = Precision::context_default(m);
    let mut cur = x.clone();
    for step in 1..=iterations {
        cur = match apply(m, &cur) {
            Ok(y) => precision.round(y),
            Err(_) => return Some((step, (m.pole() - m.x2()).valuation())),
        };
        let d = (&cur - m.x2()).valuation();
        if d != target {
            return Some((step, d));
        }
    }
    None
}

/// Samples the sphere `S_{p^-e}(x2)` and counts orbits that leave it.
/// The sphere must lie inside the Siegel disk of an indifferent `x2`.
pub fn siegel_invariance_test(
    m: &MapParams,
    sphere_exponent: i64,
    samples: usize,
    iterations: usize,
    seed: u64,
) -> Result<SiegelReport> {
    let report = region_report(m);
    let disk = match (report.x2_role, report.x2_region) {
        (X2Role::SiegelDisk, Some(disk)) => disk,
        _ => {
            return Err(Error::WrongCase(format!(
                "{} has no Siegel disk at x2",
                report.case.tag
            )))
        }
    };
    if sphere_exponent <= disk.exponent {
        return Err(Error::WrongCase(format!(
            "sphere exponent {sphere_exponent} is not inside the disk {disk}"
        )));
    }
    let sphere = UltrametricRegion::sphere(m.x2().clone(), sphere_exponent);
    let mut rng = rng_from_seed(seed);
    let mut exits = Vec::new();
    for sample in 0..samples {
        let x = sample_sphere_with(&sphere, &mut rng)?;
        if let Some((step, valuation)) = sphere_exit_step(m, &x, sphere_exponent, iterations) {
            exits.push(SphereExit {
                sample,
                step,
                start: x,
                valuation,
            });
        }
    }
    Ok(SiegelReport {
        sphere,
        samples,
        iterations,
        violations: exits.len(),
        exits,
    })
}
