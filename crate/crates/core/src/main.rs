//! `refine`: refined counts of tropical curves from the command line.
//!
//! Exit codes: 0 on success with agreeing trials, 1 on invalid input, 2 when
//! the wall-resample budget is exhausted, 3 when trials disagree (all values
//! and configurations are printed to stderr).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde::de::DeserializeOwned;
use serde::Serialize;

use refine_core::error::Error;
use refine_core::harness::{
    identity_run, oracle_trials, plane_trials, spatial_projection, spatial_trials, to_json, RunSettings,
    DEFAULT_MAX_RESAMPLE,
};
use refine_core::identities::Suite;
use refine_core::lattice::Degree;
use refine_core::linalg::Q;
use refine_core::plane::{Engine, PointConfig};
use refine_core::spatial::ProjectionSetup;
use refine_core::svg::render_plane_curves;
use refine_core::trees::{for_each_site_set, tree_shapes, Mark, TreeEdge, VType};

#[derive(Parser, Debug)]
#[command(name = "refine", version, about = "Refined counts of rational tropical curves with exact arithmetic")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Run seed; trial `t` draws from substream `t` of this seed.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Number of configurations to evaluate.
    #[arg(long, global = true, default_value_t = 2)]
    trials: usize,
    /// Also write the JSON report to this file.
    #[arg(long, global = true, value_name = "OUT")]
    json: Option<PathBuf>,
    /// Resamples allowed per trial when a configuration lies on a wall.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_RESAMPLE, value_name = "N")]
    max_resample: usize,
    /// Record wall-clock time per trial in the report (breaks byte-for-byte
    /// reproducibility of the JSON).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Refined count `RC_y` of plane curves through points.
    Plane {
        #[arg(long)]
        degree: PathBuf,
        /// V-type JSON; trivalent with edge marks when omitted.
        #[arg(long)]
        vtype: Option<PathBuf>,
        /// Use these points for the first trial.
        #[arg(long)]
        points: Option<PathBuf>,
        /// Write the curves of the first trial as JSON files into this directory.
        #[arg(long, value_name = "DIR")]
        emit_curves: Option<PathBuf>,
        /// Draw the curves of the first trial.
        #[arg(long, value_name = "FILE")]
        svg: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Engine::Search)]
        engine: Engine,
    },
    /// Group-ring count `SI` of curves in `R^m` through a point and affine
    /// subspaces of codimension two.
    Spatial {
        #[arg(long)]
        degree: PathBuf,
        /// Projection JSON `{"l_basis": [...]}`; sampled from the seed when omitted.
        #[arg(long)]
        projection: Option<PathBuf>,
        /// Perturb every subspace independently by this amount (`p/q` or decimal).
        #[arg(long = "perturb-L", value_name = "EPS")]
        perturb_l: Option<String>,
        /// Linear functional on the wedge coordinates, e.g. "1,0,0"; repeatable.
        #[arg(long, allow_hyphen_values = true)]
        lambda: Vec<String>,
    },
    /// Exact checks of the wall-crossing identities on seeded samples.
    Identities {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Classical weighted count of trivalent plane curves, by direct ray
    /// intersection.
    Oracle {
        #[arg(long)]
        degree: PathBuf,
        #[arg(long)]
        points: Option<PathBuf>,
    },
    /// Census of the marked types of a degree and V-type.
    Types {
        #[arg(long)]
        degree: PathBuf,
        #[arg(long)]
        vtype: Option<PathBuf>,
        /// List at most this many site choices.
        #[arg(long, default_value_t = 50)]
        limit: usize,
    },
}

enum Failure {
    Input(String),
    Budget(String),
    Disagreement(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ResampleBudget(_) => Failure::Budget(e.to_string()),
            e => Failure::Input(e.to_string()),
        }
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn parse_rational(s: &str) -> Result<Q, Failure> {
    let bad = || Failure::Input(format!("not a rational number: {s}"));
    if let Some((int, frac)) = s.split_once('.') {
        let digits = format!("{int}{frac}");
        let num: BigInt = digits.parse().map_err(|_| bad())?;
        return Ok(Q::new(num, BigInt::from(10).pow(frac.len() as u32)));
    }
    s.parse::<Q>().map_err(|_| bad())
}

fn parse_lambda(s: &str) -> Result<Vec<i64>, Failure> {
    s.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| Failure::Input(format!("bad functional: {s}"))))
        .collect()
}

fn load_vtype(path: Option<&PathBuf>, degree: &Degree) -> Result<VType, Failure> {
    path.map_or_else(|| Ok(VType::trivalent(degree.len())), |p| read_json(p))
}

/// A tree shape with one choice of sites; every ordering of the points over
/// the sites is a labeled type.
#[derive(Serialize)]
struct TypeRecord {
    edges: Vec<TreeEdge>,
    marks: Vec<Mark>,
}

#[derive(Serialize)]
struct TypesReport {
    degree: Degree,
    vtype: VType,
    shapes: usize,
    site_sets: usize,
    labeled_types: u128,
    listed: Vec<TypeRecord>,
}

fn emit(global: &Global, json: &str) -> Result<(), Failure> {
    print!("{json}");
    if let Some(p) = &global.json {
        write_file(p, json)?;
    }
    Ok(())
}

fn disagreement<T: Serialize>(what: &str, values: &T, configs: &T) -> Failure {
    let show = |v: &T| serde_json::to_string(v).unwrap_or_default();
    Failure::Disagreement(format!("trials disagree on {what}\nvalues: {}\nconfigurations: {}", show(values), show(configs)))
}

fn run(cli: Cli) -> Result<(), Failure> {
    let g = &cli.global;
    let settings = RunSettings { seed: g.seed, trials: g.trials, max_resample: g.max_resample, timing: g.timing };
    match &cli.command {
        Command::Plane { degree, vtype, points, emit_curves, svg, engine } => {
            let degree: Degree = read_json(degree)?;
            let vt = load_vtype(vtype.as_ref(), &degree)?;
            let pts: Option<PointConfig> = points.as_deref().map(read_json).transpose()?;
            let report = plane_trials(&degree, &vt, *engine, &settings, pts.as_ref())?;
            emit(g, &to_json(&report)?)?;
            let first = report.first.as_ref().expect("at least one trial");
            if let Some(dir) = emit_curves {
                fs::create_dir_all(dir).map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
                for (i, (c, w)) in first.curves.iter().enumerate() {
                    let record = serde_json::json!({ "curve": c.to_json(), "multiplicity": w });
                    let text = serde_json::to_string_pretty(&record).map_err(|e| Failure::Input(e.to_string()))?;
                    write_file(&dir.join(format!("curve_{i:04}.json")), &(text + "\n"))?;
                }
            }
            if let Some(path) = svg {
                write_file(path, &render_plane_curves(&first.curves, &report.trials[0].points))?;
            }
            if !report.trials_agree {
                let configs: Vec<_> = report.trials.iter().map(|t| serde_json::to_value(&t.points).unwrap_or_default()).collect();
                let values: Vec<_> = report.values.iter().map(|v| serde_json::to_value(v).unwrap_or_default()).collect();
                return Err(disagreement("RC", &values, &configs));
            }
        }
        Command::Spatial { degree, projection, perturb_l, lambda } => {
            let degree: Degree = read_json(degree)?;
            let given: Option<ProjectionSetup> = projection.as_deref().map(read_json).transpose()?;
            let setup = spatial_projection(&degree, given, &settings)?;
            let eps = perturb_l.as_deref().map(parse_rational).transpose()?;
            let lambdas = lambda.iter().map(|s| parse_lambda(s)).collect::<Result<Vec<_>, _>>()?;
            let report = spatial_trials(&degree, &setup, eps.as_ref(), &lambdas, &settings)?;
            emit(g, &to_json(&report)?)?;
            if !report.trials_agree {
                let configs: Vec<_> = report.trials.iter().map(|t| serde_json::to_value(&t.config).unwrap_or_default()).collect();
                let values: Vec<_> = report
                    .trials
                    .iter()
                    .map(|t| serde_json::json!({ "si": t.si, "si_reduced": t.si_reduced, "lambda_pushes": t.lambda_pushes }))
                    .collect();
                return Err(disagreement("SI", &values, &configs));
            }
        }
        Command::Identities { suite, samples } => {
            let report = identity_run(*suite, g.seed, *samples);
            emit(g, &to_json(&report)?)?;
            if !report.all_pass {
                let failures: Vec<_> = report.reports.iter().map(|r| serde_json::to_value(&r.failures).unwrap_or_default()).collect();
                let names: Vec<_> = report.reports.iter().map(|r| serde_json::Value::from(r.identity.clone())).collect();
                return Err(disagreement("the identities", &failures, &names));
            }
        }
        Command::Oracle { degree, points } => {
            let degree: Degree = read_json(degree)?;
            let pts: Option<PointConfig> = points.as_deref().map(read_json).transpose()?;
            let report = oracle_trials(&degree, &settings, pts.as_ref())?;
            emit(g, &to_json(&report)?)?;
            if !report.trials_agree {
                let configs: Vec<_> = report.trials.iter().map(|t| serde_json::to_value(&t.points).unwrap_or_default()).collect();
                let values: Vec<_> = report.counts.iter().map(|c| serde_json::Value::from(c.to_string())).collect();
                return Err(disagreement("the classical count", &values, &configs));
            }
        }
        Command::Types { degree, vtype, limit } => {
            let degree: Degree = read_json(degree)?;
            degree.check(false)?;
            let vt = load_vtype(vtype.as_ref(), &degree)?;
            vt.check(degree.len())?;
            let shapes = tree_shapes(degree.len(), &vt.valency_census()).len();
            let mut site_sets = 0usize;
            let mut listed = Vec::new();
            for_each_site_set(degree.len(), &vt, |_, _| true, |shape, sites| {
                site_sets += 1;
                if listed.len() < *limit {
                    listed.push(TypeRecord { edges: shape.edges.clone(), marks: sites.to_vec() });
                }
            });
            let orderings: u128 = (1..=vt.n() as u128).product();
            let report = TypesReport { degree, vtype: vt, shapes, site_sets, labeled_types: site_sets as u128 * orderings, listed };
            emit(g, &to_json(&report)?)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Disagreement(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(3)
        }
    }
}
