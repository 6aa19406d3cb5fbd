//! Seeded configuration sampling, invariance trials with wall resampling,
//! and the reports written as JSON.
//!
//! Every trial draws from its own substream of a ChaCha8 generator: the
//! generator is seeded with the run seed and the stream is the trial index,
//! so a trial can be replayed on its own and trials can run in any order.

use std::time::Instant;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::identities::{run_suite, IdentityReport, Suite};
use crate::lattice::{rank, Degree, IntVector};
use crate::linalg::{q, Q};
use crate::plane::{classical_count_oracle, rc_invariant, structure_check, Engine, PointConfig, RcResult, StructureReport};
use crate::ring::{lambda_push, GroupRingValue, LaurentZ, RefinedValue};
use crate::spatial::invariant::{spatial_invariants, SpatialResult};
use crate::spatial::{annihilator, choose_projection, generic_against, perturb_subspace, AffineConstraintConfig, ProjectionSetup};
use crate::trees::VType;

/// Coordinates of sampled points lie in `[-COORD_BOUND, COORD_BOUND]`.
pub const COORD_BOUND: i64 = 1_000_000;

/// Default number of resamples allowed per trial.
pub const DEFAULT_MAX_RESAMPLE: usize = 32;

/// Stream reserved for choosing the projection of a spatial run.
const PROJECTION_STREAM: u64 = u64::MAX;

/// Generator of trial `stream` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn coord(rng: &mut ChaCha8Rng) -> i64 {
    rng.gen_range(-COORD_BOUND..=COORD_BOUND)
}

/// `n` distinct integer points of the plane.
pub fn sample_plane_points(n: usize, rng: &mut ChaCha8Rng) -> PointConfig {
    loop {
        let pts: Vec<[i64; 2]> = (0..n).map(|_| [coord(rng), coord(rng)]).collect();
        let cfg = PointConfig::from_ints(&pts);
        if cfg.distinct() {
            return cfg;
        }
    }
}

/// A point `x0` and `n - 1` anchors in `R^m`, each anchor carrying the
/// subspace `L` of the setup, or an independent perturbation of it of size
/// `perturb`. A perturbed subspace is redrawn (up to `budget` times) until
/// its quotient map is generic for `degree`.
pub fn sample_spatial_config(
    degree: &Degree,
    setup: &ProjectionSetup,
    perturb: Option<&Q>,
    budget: usize,
    rng: &mut ChaCha8Rng,
) -> Result<AffineConstraintConfig> {
    let (m, n) = (setup.m(), degree.len() - 1);
    let point = |rng: &mut ChaCha8Rng| (0..m).map(|_| q(coord(rng))).collect::<Vec<Q>>();
    let x0 = point(rng);
    let anchors: Vec<Vec<Q>> = (1..n).map(|_| point(rng)).collect();
    let mut cfg = AffineConstraintConfig::with_subspace(x0, anchors, setup);
    if let Some(eps) = perturb {
        for dirs in cfg.subspace_directions.iter_mut() {
            *dirs = generic_perturbation(degree, setup, eps, budget, rng)?;
        }
    }
    Ok(cfg)
}

fn generic_perturbation(degree: &Degree, setup: &ProjectionSetup, eps: &Q, budget: usize, rng: &mut ChaCha8Rng) -> Result<Vec<IntVector>> {
    for _ in 0..=budget {
        let dirs = perturb_subspace(&setup.l_basis, eps, rng)?;
        if rank(&dirs) == dirs.len() && generic_against(&annihilator(&dirs, setup.m())?, degree)?.is_none() {
            return Ok(dirs);
        }
    }
    Err(Error::ResampleBudget(budget))
}

/// What to sample.
#[derive(Clone, Debug)]
pub enum SampleKind<'a> {
    Plane { n: usize },
    Spatial { degree: &'a Degree, setup: &'a ProjectionSetup, perturb: Option<Q> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum SampledConfig {
    Plane(PointConfig),
    Spatial(AffineConstraintConfig),
}

/// The first configuration of trial 0 of a run seeded with `seed`.
pub fn sample_config(kind: &SampleKind<'_>, seed: u64) -> Result<SampledConfig> {
    let mut rng = trial_rng(seed, 0);
    Ok(match kind {
        SampleKind::Plane { n } => SampledConfig::Plane(sample_plane_points(*n, &mut rng)),
        SampleKind::Spatial { degree, setup, perturb } => SampledConfig::Spatial(sample_spatial_config(
            degree,
            setup,
            perturb.as_ref(),
            DEFAULT_MAX_RESAMPLE,
            &mut rng,
        )?),
    })
}

/// Draw configurations from `rng` until `eval` does not hit a wall. Returns
/// the configuration, the value and the number of rejected draws.
fn with_resample<C: Clone, T>(
    budget: usize,
    rng: &mut ChaCha8Rng,
    mut draw: impl FnMut(&mut ChaCha8Rng) -> Result<C>,
    mut eval: impl FnMut(&C) -> Result<T>,
) -> Result<(C, T, usize)> {
    for rejected in 0..=budget {
        let c = draw(rng)?;
        match eval(&c) {
            Ok(v) => return Ok((c, v, rejected)),
            Err(Error::Wall(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::ResampleBudget(budget))
}

/// Common settings of a multi-trial run.
#[derive(Clone, Copy, Debug)]
pub struct RunSettings {
    pub seed: u64,
    pub trials: usize,
    pub max_resample: usize,
    /// Record wall-clock times; off by default so that reports are
    /// reproducible byte for byte.
    pub timing: bool,
}

impl Default for RunSettings {
    fn default() -> Self {
        RunSettings { seed: 1, trials: 2, max_resample: DEFAULT_MAX_RESAMPLE, timing: false }
    }
}

fn timed<T>(timing: bool, f: impl FnOnce() -> Result<T>) -> Result<(T, Option<u64>)> {
    let start = Instant::now();
    let v = f()?;
    Ok((v, timing.then(|| start.elapsed().as_millis() as u64)))
}

fn all_equal<T: PartialEq>(xs: &[T]) -> bool {
    xs.windows(2).all(|w| w[0] == w[1])
}

/// One plane trial.
#[derive(Clone, Debug, Serialize)]
pub struct PlaneTrial {
    pub seed: u64,
    pub stream: u64,
    pub resamples: usize,
    pub points: PointConfig,
    pub invariant: RefinedValue,
    pub labeled_total: RefinedValue,
    pub curve_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

/// Report of `RC_y` over several configurations.
#[derive(Clone, Debug, Serialize)]
pub struct PlaneReport {
    pub invariant: RefinedValue,
    pub labeled_total: RefinedValue,
    pub curve_count: usize,
    pub trials_agree: bool,
    pub values: Vec<RefinedValue>,
    pub curve_counts: Vec<usize>,
    pub resamples: Vec<usize>,
    /// Shape of the invariant, when the degree has no even vector.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub structure: Option<StructureReport>,
    pub trials: Vec<PlaneTrial>,
    /// Curves of the first trial; kept out of the JSON.
    #[serde(skip)]
    pub first: Option<RcResult>,
}

/// `RC_y(Δ, vt)` on `settings.trials` configurations. When `points` is
/// given it is used as the first configuration (without resampling).
pub fn plane_trials(
    degree: &Degree,
    vt: &VType,
    engine: Engine,
    settings: &RunSettings,
    points: Option<&PointConfig>,
) -> Result<PlaneReport> {
    if settings.trials == 0 {
        return Err(Error::Invalid("at least one trial is required".into()));
    }
    let n = vt.n();
    let runs: Vec<Result<(PlaneTrial, RcResult)>> = (0..settings.trials as u64)
        .into_par_iter()
        .map(|stream| {
            let mut rng = trial_rng(settings.seed, stream);
            let fixed = points.filter(|_| stream == 0);
            let ((cfg, r, resamples), elapsed_ms) = timed(settings.timing, || match fixed {
                Some(p) => rc_invariant(degree, vt, p, engine).map(|r| (p.clone(), r, 0)),
                None => with_resample(
                    settings.max_resample,
                    &mut rng,
                    |rng| Ok(sample_plane_points(n, rng)),
                    |c| rc_invariant(degree, vt, c, engine),
                ),
            })?;
            let trial = PlaneTrial {
                seed: settings.seed,
                stream,
                resamples,
                points: cfg,
                invariant: r.invariant.clone(),
                labeled_total: r.labeled_total.clone(),
                curve_count: r.curve_count(),
                elapsed_ms,
            };
            Ok((trial, r))
        })
        .collect();
    let mut trials = Vec::new();
    let mut first = None;
    for run in runs {
        let (t, r) = run?;
        first.get_or_insert(r);
        trials.push(t);
    }
    let values: Vec<RefinedValue> = trials.iter().map(|t| t.invariant.clone()).collect();
    let structure = if degree.has_even_vector() { None } else { structure_check(&values[0], degree, vt).ok() };
    Ok(PlaneReport {
        invariant: values[0].clone(),
        labeled_total: trials[0].labeled_total.clone(),
        curve_count: trials[0].curve_count,
        trials_agree: all_equal(&values),
        curve_counts: trials.iter().map(|t| t.curve_count).collect(),
        resamples: trials.iter().map(|t| t.resamples).collect(),
        values,
        structure,
        trials,
        first,
    })
}

/// One trial of the classical count.
#[derive(Clone, Debug, Serialize)]
pub struct OracleTrial {
    pub seed: u64,
    pub stream: u64,
    pub resamples: usize,
    pub points: PointConfig,
    pub count: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub count: u128,
    pub trials_agree: bool,
    pub counts: Vec<u128>,
    pub resamples: Vec<usize>,
    pub trials: Vec<OracleTrial>,
}

/// The classical weighted count on `settings.trials` configurations.
pub fn oracle_trials(degree: &Degree, settings: &RunSettings, points: Option<&PointConfig>) -> Result<OracleReport> {
    if settings.trials == 0 {
        return Err(Error::Invalid("at least one trial is required".into()));
    }
    let n = degree.len().saturating_sub(1);
    let trials: Vec<OracleTrial> = (0..settings.trials as u64)
        .into_par_iter()
        .map(|stream| {
            let mut rng = trial_rng(settings.seed, stream);
            let fixed = points.filter(|_| stream == 0);
            let ((cfg, count, resamples), elapsed_ms) = timed(settings.timing, || match fixed {
                Some(p) => classical_count_oracle(degree, p).map(|c| (p.clone(), c, 0)),
                None => with_resample(
                    settings.max_resample,
                    &mut rng,
                    |rng| Ok(sample_plane_points(n, rng)),
                    |c| classical_count_oracle(degree, c),
                ),
            })?;
            Ok(OracleTrial { seed: settings.seed, stream, resamples, points: cfg, count, elapsed_ms })
        })
        .collect::<Result<_>>()?;
    let counts: Vec<u128> = trials.iter().map(|t| t.count).collect();
    Ok(OracleReport {
        count: counts[0],
        trials_agree: all_equal(&counts),
        resamples: trials.iter().map(|t| t.resamples).collect(),
        counts,
        trials,
    })
}

/// One spatial trial.
#[derive(Clone, Debug, Serialize)]
pub struct SpatialTrial {
    pub seed: u64,
    pub stream: u64,
    pub resamples: usize,
    pub config: AffineConstraintConfig,
    pub si: GroupRingValue,
    pub si_reduced: RefinedValue,
    /// `λ_*(SI)` for each requested `λ`, in order.
    pub lambda_pushes: Vec<LaurentZ>,
    pub curve_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

/// Report of `SI` and `SI^red` over several configurations.
#[derive(Clone, Debug, Serialize)]
pub struct SpatialReport {
    pub si: GroupRingValue,
    pub si_reduced: RefinedValue,
    pub curve_count: usize,
    /// `SI`, `SI^red` and every `λ_*(SI)` agree across trials.
    pub trials_agree: bool,
    pub projection: ProjectionSetup,
    pub lambdas: Vec<Vec<i64>>,
    pub lambda_pushes: Vec<LaurentZ>,
    pub curve_counts: Vec<usize>,
    pub resamples: Vec<usize>,
    pub trials: Vec<SpatialTrial>,
    /// Curves of the first trial; kept out of the JSON.
    #[serde(skip)]
    pub first: Option<SpatialResult>,
}

/// The projection of a spatial run: the given one (completed and checked),
/// or one sampled from the reserved stream of the seed.
pub fn spatial_projection(degree: &Degree, given: Option<ProjectionSetup>, settings: &RunSettings) -> Result<ProjectionSetup> {
    match given {
        Some(s) => {
            let s = s.completed()?;
            s.check_generic(degree)?;
            Ok(s)
        }
        None => choose_projection(degree, &mut trial_rng(settings.seed, PROJECTION_STREAM), settings.max_resample),
    }
}

/// `SI` and `SI^red` on `settings.trials` configurations sharing the
/// projection `setup`; with `perturb`, every subspace `L_i` is an
/// independent perturbation of `L`.
pub fn spatial_trials(
    degree: &Degree,
    setup: &ProjectionSetup,
    perturb: Option<&Q>,
    lambdas: &[Vec<i64>],
    settings: &RunSettings,
) -> Result<SpatialReport> {
    if settings.trials == 0 {
        return Err(Error::Invalid("at least one trial is required".into()));
    }
    let runs: Vec<Result<(SpatialTrial, SpatialResult)>> = (0..settings.trials as u64)
        .into_par_iter()
        .map(|stream| {
            let mut rng = trial_rng(settings.seed, stream);
            let ((cfg, r, resamples), elapsed_ms) = timed(settings.timing, || {
                with_resample(
                    settings.max_resample,
                    &mut rng,
                    |rng| sample_spatial_config(degree, setup, perturb, settings.max_resample, rng),
                    |c| spatial_invariants(degree, setup, c),
                )
            })?;
            let lambda_pushes = lambdas.iter().map(|l| lambda_push(&r.si, l)).collect::<Result<_>>()?;
            let trial = SpatialTrial {
                seed: settings.seed,
                stream,
                resamples,
                config: cfg,
                si: r.si.clone(),
                si_reduced: r.si_reduced.clone(),
                lambda_pushes,
                curve_count: r.curve_count(),
                elapsed_ms,
            };
            Ok((trial, r))
        })
        .collect();
    let mut trials = Vec::new();
    let mut first = None;
    for run in runs {
        let (t, r) = run?;
        first.get_or_insert(r);
        trials.push(t);
    }
    let key = |t: &SpatialTrial| (t.si.clone(), t.si_reduced.clone(), t.lambda_pushes.clone());
    let keys: Vec<_> = trials.iter().map(key).collect();
    Ok(SpatialReport {
        si: trials[0].si.clone(),
        si_reduced: trials[0].si_reduced.clone(),
        curve_count: trials[0].curve_count,
        trials_agree: all_equal(&keys),
        projection: setup.clone(),
        lambdas: lambdas.to_vec(),
        lambda_pushes: trials[0].lambda_pushes.clone(),
        curve_counts: trials.iter().map(|t| t.curve_count).collect(),
        resamples: trials.iter().map(|t| t.resamples).collect(),
        trials,
        first,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentitiesRun {
    pub seed: u64,
    pub samples: usize,
    pub all_pass: bool,
    pub reports: Vec<IdentityReport>,
}

/// The identity suite with seeded samples.
pub fn identity_run(suite: Suite, seed: u64, samples: usize) -> IdentitiesRun {
    let reports = run_suite(suite, seed, samples);
    IdentitiesRun { seed, samples, all_pass: reports.iter().all(IdentityReport::ok), reports }
}

/// Deterministic pretty JSON of a report, with a trailing newline.
pub fn to_json<T: Serialize>(v: &T) -> Result<String> {
    serde_json::to_string_pretty(v).map(|s| s + "\n").map_err(|e| Error::Invalid(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    #[test]
    fn sampling_is_deterministic() {
        let a = sample_config(&SampleKind::Plane { n: 2 }, 1).unwrap();
        assert_eq!(a, sample_config(&SampleKind::Plane { n: 2 }, 1).unwrap());
        let SampledConfig::Plane(p) = a else { panic!() };
        assert!(p.len() == 2 && p.distinct());
        let bound = Q::from_integer(COORD_BOUND.into());
        assert!(p.points.iter().flatten().all(|c| c.is_integer() && c.abs() <= bound));
        assert_ne!(sample_plane_points(2, &mut trial_rng(1, 0)), sample_plane_points(2, &mut trial_rng(1, 1)));

        let setup = ProjectionSetup::from_l_basis(vec![IntVector(vec![3, -7, 11])]).unwrap();
        let line = Degree::new(3, vec![vec![-1, 0, 0], vec![0, -1, 0], vec![0, 0, -1], vec![1, 1, 1]]);
        let kind = SampleKind::Spatial { degree: &line, setup: &setup, perturb: None };
        let SampledConfig::Spatial(c) = sample_config(&kind, 7).unwrap() else { panic!() };
        assert_eq!((c.x0.len(), c.subspace_anchors.len()), (3, 2));
    }

    #[test]
    fn line_trials_agree() {
        let settings = RunSettings { seed: 3, trials: 5, ..Default::default() };
        let r = plane_trials(&Degree::projective(1), &VType::trivalent(3), Engine::Search, &settings, None).unwrap();
        assert!(r.trials_agree);
        assert_eq!(r.invariant, RefinedValue::constant(1));
        assert_eq!(r.values.len(), 5);
        let o = oracle_trials(&Degree::projective(1), &settings, None).unwrap();
        assert!(o.trials_agree && o.count == 1);
        let again = plane_trials(&Degree::projective(1), &VType::trivalent(3), Engine::Search, &settings, None).unwrap();
        assert_eq!(to_json(&r).unwrap(), to_json(&again).unwrap());
    }

    #[test]
    fn exhausted_budget() {
        let mut rng = trial_rng(1, 0);
        let r: Result<(u8, (), usize)> = with_resample(3, &mut rng, |_| Ok(0u8), |_| Err(Error::Wall("always".into())));
        assert_eq!(r.unwrap_err(), Error::ResampleBudget(3));
    }
}
