//! Acceptance run: one PASS/FAIL line per criterion, with the individual
//! checks indented below it. Exits non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use refine_core::harness::{identity_run, plane_trials, spatial_projection, spatial_trials, PlaneReport, RunSettings};
use refine_core::identities::Suite;
use refine_core::lattice::{Degree, IntVector};
use refine_core::plane::{classical_count_oracle, rc_invariant, structure_check, Engine};
use refine_core::ring::{
    bracket_minus, bracket_plus, group_vertex_weight, lambda_push, mu_plus, GroupRingValue, LaurentZ, RefinedValue,
};
use refine_core::spatial::{apply, ProjectionSetup, SpatialResult};
use refine_core::trees::VType;

struct Criterion {
    id: &'static str,
    title: &'static str,
    checks: Vec<(bool, String)>,
    elapsed: Duration,
}

impl Criterion {
    fn new(id: &'static str, title: &'static str) -> Self {
        Criterion { id, title, checks: Vec::new(), elapsed: Duration::ZERO }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) -> bool {
        self.checks.push((ok, what.into()));
        ok
    }

    fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.0)
    }

    fn print(&self) {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        println!("{} {verdict}  {} ({:.1} s)", self.id, self.title, self.elapsed.as_secs_f64());
        for (ok, what) in &self.checks {
            println!("    [{}] {what}", if *ok { " ok " } else { "FAIL" });
        }
    }
}

fn v(x: &[i64]) -> IntVector {
    IntVector::new(x.to_vec())
}

fn lz(terms: &[(i64, i128)]) -> LaurentZ {
    LaurentZ::from_terms(terms.iter().copied())
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn seconds(d: Duration) -> String {
    format!("{:.1} s", d.as_secs_f64())
}

/// `μ⁺` straight from its definition, in input order and without memo.
fn reference_mu(a: &[[i64; 2]]) -> RefinedValue {
    let det = |x: [i64; 2], y: [i64; 2]| x[0] * y[1] - x[1] * y[0];
    match a.len() {
        2 => RefinedValue::one(),
        3 => bracket_plus(det(a[0], a[1]).abs()),
        r => {
            let mut total = RefinedValue::zero();
            for i in 0..r {
                for j in i + 1..r {
                    let mut rest: Vec<[i64; 2]> = (0..r).filter(|&k| k != i && k != j).map(|k| a[k]).collect();
                    rest.push([a[i][0] + a[j][0], a[i][1] + a[j][1]]);
                    total = &total + &(&reference_mu(&rest) * &bracket_plus(det(a[i], a[j]).abs()));
                }
            }
            total
        }
    }
}

fn permutations(a: &[[i64; 2]]) -> Vec<Vec<[i64; 2]>> {
    if a.len() <= 1 {
        return vec![a.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..a.len() {
        let mut rest = a.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

fn a1() -> Criterion {
    let mut c = Criterion::new("A1", "bracket and mu+ suite, order independence");
    let start = Instant::now();
    c.check(bracket_minus(1) == LaurentZ::one(), "[1]- = 1");
    c.check(bracket_minus(3) == lz(&[(2, 1), (0, 1), (-2, 1)]), "[3]- = z^2 + 1 + z^-2");
    c.check(bracket_minus(-2) == lz(&[(1, -1), (-1, -1)]), "[-2]- = -(z + z^-1)");
    c.check(bracket_minus(0).is_zero(), "[0]- = 0");
    c.check(bracket_plus(1) == RefinedValue::one(), "[1]+ = 1");
    c.check(bracket_plus(3) == RefinedValue::from_laurent(lz(&[(2, 1), (0, -1), (-2, 1)])), "[3]+ = z^2 - 1 + z^-2");
    let b0 = bracket_plus(0);
    c.check(b0.numerator() == &LaurentZ::constant(2) && b0.den_k() == 1, "[0]+ = 2 / (z + z^-1)");
    let mu = |a: &[[i64; 2]]| mu_plus(&a.iter().map(|x| v(x)).collect::<Vec<_>>()).unwrap();
    c.check([[2, -3], [1, 0], [0, 5]].iter().all(|&x| mu(&[x, [-x[0], -x[1]]]).is_one()), "mu+(a, -a) = 1");
    c.check(mu(&[[1, 0], [0, 1], [-1, -1]]).is_one(), "mu+((1,0),(0,1),(-1,-1)) = 1");
    let four = mu(&[[1, 0], [0, 1], [-1, 0], [0, -1]]);
    let expected = &RefinedValue::constant(4) + &RefinedValue::new(LaurentZ::constant(8), 2);
    c.check(four == expected, format!("mu+ of the four unit vectors = 4 + 8/(z+z^-1)^2 (got {four})"));
    c.check(four.at_one() == rat(6), "... and equals 6 at y = 1");
    c.check(RefinedValue::from_laurent(bracket_minus(3)).at_one() == rat(3), "[3]- at y = 1 is 3");
    c.check(RefinedValue::from_laurent(bracket_minus(3)).at_minus_one() == Ok((rat(-1), rat(0))), "[3]- at y = -1 is -1");
    let g = group_vertex_weight(&v(&[1, 0, 0]), &v(&[0, 1, 0])).unwrap();
    let g_swapped = group_vertex_weight(&v(&[0, 1, 0]), &v(&[1, 0, 0])).unwrap();
    c.check(g.len() == 2 && g_swapped == g.scale(-1), "group vertex weight: two terms, antisymmetric");
    c.check(group_vertex_weight(&v(&[1, 0, 0]), &v(&[2, 0, 0])).is_err(), "group vertex weight of collinear vectors is an error");
    c.check(lambda_push(&g, &[0, 0, 0]).unwrap().is_zero(), "lambda = 0 sends z^w - z^-w to 0");
    c.check(lambda_push(&g, &[3, 0, 0]).unwrap() == lz(&[(3, 1), (-3, -1)]), "lambda(w) = 3 gives z^3 - z^-3");
    let d = lz(&[(1, 1), (-1, -1)]);
    let bracket_laws = (-50..=50).all(|a| {
        &bracket_minus(a) * &d == lz(&[(a, 1), (-a, -1)]) && bracket_plus(a).numerator_at(1) == lz(&[(a, 1), (-a, 1)])
    });
    c.check(bracket_laws, "[a]-(z - z^-1) = z^a - z^-a and [a]+(z + z^-1) = z^a + z^-a for |a| <= 50");

    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut tuples, mut perms, mut bad) = (0, 0, Vec::new());
    while tuples < 200 {
        let r = rng.gen_range(2..=5usize);
        let mut a: Vec<[i64; 2]> = (0..r - 1).map(|_| [rng.gen_range(-3..=3), rng.gen_range(-3..=3)]).collect();
        let s = a.iter().fold([0, 0], |s, x| [s[0] + x[0], s[1] + x[1]]);
        if s[0].abs() > 3 || s[1].abs() > 3 {
            continue;
        }
        a.push([-s[0], -s[1]]);
        tuples += 1;
        let base = mu(&a);
        if base != reference_mu(&a) || !base.is_palindromic() {
            bad.push(a.clone());
        }
        for p in permutations(&a) {
            perms += 1;
            if mu(&p) != base || reference_mu(&p) != base {
                bad.push(p);
            }
        }
    }
    c.check(bad.is_empty(), format!("{tuples} seeded balanced tuples, {perms} orderings agree with each other and with the plain recursion; mismatches: {bad:?}"));
    c.elapsed = start.elapsed();
    c.check(c.elapsed < Duration::from_secs(10), format!("runtime {} < 10 s", seconds(c.elapsed)));
    c
}

fn a2() -> Criterion {
    let mut c = Criterion::new("A2", "identity suite, 100 samples each");
    let start = Instant::now();
    let run = identity_run(Suite::All, 1, 100);
    for r in &run.reports {
        let extra = r.resolution.map(|e| format!(", sign reading {e:?}")).unwrap_or_default();
        c.check(
            r.passed == 100 && r.failures.is_empty() && r.skipped == 0,
            format!("{}: {} passed, {} failed, {} skipped{extra}", r.identity, r.passed, r.failures.len(), r.skipped),
        );
    }
    c.check(run.reports.len() == 3, "all three relations were run");
    c.elapsed = start.elapsed();
    c.check(c.elapsed < Duration::from_secs(30), format!("runtime {} < 30 s", seconds(c.elapsed)));
    c
}

struct PlaneRun {
    label: &'static str,
    degree: Degree,
    vt: VType,
    report: PlaneReport,
    elapsed: Duration,
}

fn plane(label: &'static str, degree: Degree, vt: VType, seed: u64, trials: usize) -> Result<PlaneRun, String> {
    let settings = RunSettings { seed, trials, ..Default::default() };
    let start = Instant::now();
    let report = plane_trials(&degree, &vt, Engine::Search, &settings, None).map_err(|e| format!("{label}: {e}"))?;
    Ok(PlaneRun { label, degree, vt, report, elapsed: start.elapsed() })
}

fn vt(m: &[(usize, usize)], n: &[(usize, usize)]) -> VType {
    VType::from_pairs(m, n)
}

fn a3(runs: &mut Vec<PlaneRun>) -> Criterion {
    let mut c = Criterion::new("A3", "plane counts for degrees 1, 2, 3");
    let start = Instant::now();
    let cases = [
        ("degree 1", 1, vt(&[(1, 1)], &[(0, 2)]), RefinedValue::one()),
        ("degree 2", 2, vt(&[(1, 4)], &[(0, 5)]), RefinedValue::one()),
        ("degree 3", 3, vt(&[(1, 7)], &[(0, 8)]), RefinedValue::from_laurent(lz(&[(2, 1), (0, 10), (-2, 1)]))),
    ];
    for (label, k, vtype, expected) in cases {
        match plane(label, Degree::projective(k), vtype, 11, 1) {
            Ok(run) => {
                c.check(
                    run.report.invariant == expected,
                    format!(
                        "{label}: RC = {} (expected {expected}), {} labeled curves, {}",
                        run.report.invariant,
                        run.report.curve_count,
                        seconds(run.elapsed)
                    ),
                );
                if k == 3 {
                    c.check(run.elapsed < Duration::from_secs(600), "degree 3 within 10 min");
                }
                runs.push(run);
            }
            Err(e) => {
                c.check(false, e);
            }
        }
    }
    c.elapsed = start.elapsed();
    c
}

fn a4(runs: &[PlaneRun]) -> Criterion {
    let mut c = Criterion::new("A4", "value at y = 1 against the classical count; degree 3 at y = -1");
    let start = Instant::now();
    let expected = [1u128, 1, 12];
    for (run, want) in runs.iter().take(3).zip(expected) {
        let pts = &run.report.trials[0].points;
        match classical_count_oracle(&run.degree, pts) {
            Ok(count) => {
                let at_one = run.report.invariant.at_one();
                c.check(
                    count == want && at_one == BigRational::from_integer(BigInt::from(count)),
                    format!("{}: oracle {count} (expected {want}), RC at y = 1 is {at_one}", run.label),
                );
            }
            Err(e) => {
                c.check(false, format!("{}: oracle failed: {e}", run.label));
            }
        }
    }
    if let Some(cubic) = runs.get(2) {
        let w = cubic.report.invariant.at_minus_one();
        c.check(w == Ok((rat(8), rat(0))), format!("degree 3 at y = -1: {w:?} (expected 8)"));
    }
    c.elapsed = start.elapsed();
    c
}

fn a5(runs: &mut Vec<PlaneRun>) -> Criterion {
    let mut c = Criterion::new("A5", "invariance over 5 configurations");
    let start = Instant::now();
    let cases = [
        ("degree 2 trivalent", vt(&[(1, 4)], &[(0, 5)])),
        ("degree 2 with a 4-valent vertex", vt(&[(1, 2), (2, 1)], &[(0, 4)])),
        ("degree 2 with a marked vertex", vt(&[(1, 3)], &[(0, 3), (1, 1)])),
    ];
    for (label, vtype) in cases {
        match plane(label, Degree::projective(2), vtype, 5, 5) {
            Ok(run) => {
                let values: Vec<String> = run.report.values.iter().map(|v| v.to_string()).collect();
                c.check(
                    run.report.trials_agree && run.report.values.len() == 5,
                    format!(
                        "{label}: values {values:?}, curves {:?}, resamples {:?}, {}",
                        run.report.curve_counts,
                        run.report.resamples,
                        seconds(run.elapsed)
                    ),
                );
                c.check(run.elapsed < Duration::from_secs(300), format!("{label} within 5 min"));
                runs.push(run);
            }
            Err(e) => {
                c.check(false, e);
            }
        }
    }
    c.elapsed = start.elapsed();
    c
}

fn a6(runs: &[PlaneRun]) -> Criterion {
    let mut c = Criterion::new("A6", "shape F(y + 1/y) / (y + 2 + 1/y)^k of the plane invariants");
    let start = Instant::now();
    for run in runs {
        for (i, value) in run.report.values.iter().enumerate() {
            match structure_check(value, &run.degree, &run.vt) {
                Ok(s) => {
                    c.check(
                        s.passes,
                        format!(
                            "{} #{i}: F = {:?}, k = {} (bound {}), deg F = {} (expected {})",
                            run.label, s.f_coeffs, s.k, s.k_bound, s.deg_f, s.expected_deg_f
                        ),
                    );
                }
                Err(e) => {
                    c.check(false, format!("{} #{i}: {e}", run.label));
                }
            }
        }
    }
    if let Some(cubic) = runs.iter().find(|r| r.label == "degree 3") {
        let s = structure_check(&cubic.report.invariant, &cubic.degree, &cubic.vt);
        c.check(
            s.as_ref().is_ok_and(|s| s.f_coeffs == vec![10, 1] && s.k == 0 && s.deg_f == 1 && s.expected_deg_f == 1),
            format!("degree 3: F(u) = u + 10, k = 0, deg F = 1 = 1 + (9 - 9)/2 + 0 ({s:?})"),
        );
    }
    c.elapsed = start.elapsed();
    c
}

fn line3() -> Degree {
    Degree::new(3, vec![vec![-1, 0, 0], vec![0, -1, 0], vec![0, 0, -1], vec![1, 1, 1]])
}

/// `SI^red` against the plane count of the projected degree through the
/// projected points, curve by curve.
fn cross_check(c: &mut Criterion, label: &str, degree: Degree, seed: u64) -> Option<SpatialResult> {
    let settings = RunSettings { seed, trials: 1, ..Default::default() };
    let start = Instant::now();
    let setup = ProjectionSetup::from_l_basis(vec![v(&[0, 0, 1])]).and_then(|s| s.completed());
    let outcome = setup.and_then(|setup| {
        let report = spatial_trials(&degree, &setup, None, &[], &settings)?;
        let psi = setup.psi()?;
        let plane_degree = Degree { m: 2, vectors: degree.vectors.iter().map(|a| apply(&psi, a)).collect() };
        let pts = report.trials[0].config.projected(&setup)?;
        let plane = rc_invariant(&plane_degree, &VType::trivalent(degree.len()), &pts, Engine::Search)?;
        Ok((report, plane_degree, plane))
    });
    match outcome {
        Ok((report, plane_degree, plane)) => {
            let first = report.first.expect("one trial");
            let spatial_factors: BTreeMap<_, _> = first
                .curves
                .iter()
                .map(|s| (s.curve.ty.canonical_key(), RefinedValue::from_laurent(s.reduced.clone())))
                .collect();
            let plane_factors: BTreeMap<_, _> = plane.curves.iter().map(|(e, w)| (e.ty.canonical_key(), w.clone())).collect();
            c.check(
                first.si_reduced == plane.invariant && spatial_factors == plane_factors,
                format!(
                    "{label}: projected degree {:?}; SI^red = {} and plane RC = {}; {} labeled curves in space, {} in the plane, factors agree curve by curve: {} ({})",
                    plane_degree.vectors,
                    first.si_reduced,
                    plane.invariant,
                    first.curves.len(),
                    plane.curves.len(),
                    spatial_factors == plane_factors,
                    seconds(start.elapsed())
                ),
            );
            Some(first)
        }
        Err(e) => {
            c.check(false, format!("{label}: {e}"));
            None
        }
    }
}

fn a7(spatial: &mut Vec<(String, GroupRingValue, usize)>) -> Criterion {
    let mut c = Criterion::new("A7", "curves in space: line in R^3, invariance, reduction to the plane");
    let start = Instant::now();
    let degree = line3();
    let settings = RunSettings { seed: 7, trials: 5, ..Default::default() };
    let lambdas = vec![vec![1, 0, 0], vec![2, -1, 3], vec![0, 5, 1]];
    let outcome = spatial_projection(&degree, None, &settings)
        .and_then(|setup| spatial_trials(&degree, &setup, None, &lambdas, &settings).map(|r| (setup, r)));
    match outcome {
        Ok((setup, r)) => {
            let counts = &r.curve_counts;
            c.check(
                counts.iter().all(|&k| k == 1),
                format!("exactly one contributing curve per configuration: observed {counts:?} (L = {:?})", setup.l_basis),
            );
            let si_equal = r.trials.iter().all(|t| t.si == r.si);
            let red_equal = r.trials.iter().all(|t| t.si_reduced == r.si_reduced);
            c.check(si_equal && red_equal, format!("SI and SI^red equal over 5 configurations: SI = {}, SI^red = {}", r.si, r.si_reduced));
            let pushes_equal = r.trials.iter().all(|t| t.lambda_pushes == r.lambda_pushes);
            let shown: Vec<String> = r.lambda_pushes.iter().map(|p| p.to_string()).collect();
            c.check(pushes_equal, format!("lambda pushes equal over 5 configurations for {lambdas:?}: {shown:?}"));
            spatial.push(("line in R^3".into(), r.si.clone(), degree.len() - 1));

            let eps = BigRational::new(BigInt::from(1), BigInt::from(1000));
            match spatial_trials(&degree, &setup, Some(&eps), &lambdas, &RunSettings { seed: 8, ..settings }) {
                Ok(p) => {
                    c.check(
                        p.trials_agree && p.si == r.si && p.si_reduced == r.si_reduced,
                        format!("independently perturbed L_i (size 1/1000) give the same SI and SI^red, curves {:?}", p.curve_counts),
                    );
                }
                Err(e) => {
                    c.check(false, format!("perturbed subspaces: {e}"));
                }
            }
        }
        Err(e) => {
            c.check(false, format!("line in R^3: {e}"));
        }
    }
    let lift1 = Degree::new(3, vec![vec![-1, 0, 1], vec![0, -1, 2], vec![1, 1, -3]]);
    if let Some(r) = cross_check(&mut c, "planar lift of degree 1", lift1.clone(), 21) {
        spatial.push(("planar lift of degree 1".into(), r.si, lift1.len() - 1));
    }
    let mut lift2 = Vec::new();
    for a in [vec![-1, 0, 1], vec![0, -1, 2], vec![1, 1, -3]] {
        lift2.push(a.clone());
        lift2.push(a);
    }
    let lift2 = Degree::new(3, lift2);
    let t2 = Instant::now();
    if let Some(r) = cross_check(&mut c, "planar lift of degree 2", lift2.clone(), 22) {
        spatial.push(("planar lift of degree 2".into(), r.si, lift2.len() - 1));
    }
    c.check(t2.elapsed() < Duration::from_secs(600), "degree 2 cross-check within 10 min");
    c.elapsed = start.elapsed();
    c
}

fn a8(runs: &[PlaneRun], spatial: &[(String, GroupRingValue, usize)]) -> Criterion {
    let mut c = Criterion::new("A8", "symmetry under z -> 1/z");
    let start = Instant::now();
    for run in runs {
        c.check(
            run.report.values.iter().all(RefinedValue::is_palindromic),
            format!("{}: {} value(s) palindromic", run.label, run.report.values.len()),
        );
    }
    for (label, si, n) in spatial {
        let sign = if (n - 1) % 2 == 0 { 1 } else { -1 };
        c.check(
            si.negate_exponents() == si.scale(sign),
            format!("{label}: SI maps to {sign} * SI under exponent negation (n = {n})"),
        );
    }
    c.elapsed = start.elapsed();
    c
}

fn run_cli(args: &[&str], json: &Path) -> Result<(Vec<u8>, Vec<u8>), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_refine"))
        .args(args)
        .arg("--json")
        .arg(json)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)));
    }
    let file = std::fs::read(json).map_err(|e| e.to_string())?;
    Ok((out.stdout, file))
}

fn a9() -> Criterion {
    let mut c = Criterion::new("A9", "byte-identical JSON from repeated runs");
    let start = Instant::now();
    let dir = tempfile::tempdir().expect("temporary directory");
    let write = |name: &str, text: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, text).expect("write input");
        p.to_string_lossy().into_owned()
    };
    let d2 = write("d2.json", r#"{"m": 2, "vectors": [[-1,0],[-1,0],[0,-1],[0,-1],[1,1],[1,1]]}"#);
    let vt2 = write("vt2.json", r#"{"m_bar": {"1": 4}, "n_bar": {"0": 5}}"#);
    let l3 = write("l3.json", r#"{"m": 3, "vectors": [[-1,0,0],[0,-1,0],[0,0,-1],[1,1,1]]}"#);
    let runs: [(&str, Vec<&str>); 4] = [
        ("plane", vec!["--seed", "9", "--trials", "3", "plane", "--degree", &d2, "--vtype", &vt2]),
        ("oracle", vec!["--seed", "9", "--trials", "3", "oracle", "--degree", &d2]),
        ("spatial", vec!["--seed", "9", "--trials", "3", "spatial", "--degree", &l3, "--lambda", "1,2,3", "--perturb-L", "0.001"]),
        ("identities", vec!["--seed", "9", "identities", "--suite", "all", "--samples", "25"]),
    ];
    for (name, args) in runs {
        let first = run_cli(&args, &dir.path().join(format!("{name}-1.json")));
        let second = run_cli(&args, &dir.path().join(format!("{name}-2.json")));
        match (first, second) {
            (Ok((out1, file1)), Ok((out2, file2))) => {
                c.check(
                    file1 == file2 && out1 == out2 && out1 == file1 && !file1.is_empty(),
                    format!("refine {name}: {} bytes, identical across runs and between stdout and file", file1.len()),
                );
            }
            (a, b) => {
                c.check(false, format!("refine {name}: {:?} / {:?}", a.err(), b.err()));
            }
        }
    }
    c.elapsed = start.elapsed();
    c
}

fn main() {
    let mut criteria = Vec::new();
    let emit = |c: Criterion, all: &mut Vec<Criterion>| {
        c.print();
        all.push(c);
    };
    emit(a1(), &mut criteria);
    emit(a2(), &mut criteria);
    let mut counts = Vec::new();
    emit(a3(&mut counts), &mut criteria);
    emit(a4(&counts), &mut criteria);
    let mut invariance = Vec::new();
    emit(a5(&mut invariance), &mut criteria);
    counts.extend(invariance);
    emit(a6(&counts), &mut criteria);
    let mut spatial = Vec::new();
    emit(a7(&mut spatial), &mut criteria);
    emit(a8(&counts, &spatial), &mut criteria);
    emit(a9(), &mut criteria);
    let failed: Vec<&str> = criteria.iter().filter(|c| !c.passed()).map(|c| c.id).collect();
    println!();
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", criteria.len());
    } else {
        println!("acceptance: {} of {} criteria pass; failing: {}", criteria.len() - failed.len(), criteria.len(), failed.join(", "));
        std::process::exit(1);
    }
}
