//! Exact checks of the wall-crossing identities behind the invariance of the
//! refined counts, over seeded random integer vectors.

use itertools::Itertools;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{wedge, IntVector};
use crate::ring::{bracket_minus, mu_plus, GroupRingValue, RefinedValue};

type V2 = [i64; 2];

fn v2(v: &IntVector) -> Result<V2> {
    if v.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: v.dim() });
    }
    Ok([v.0[0], v.0[1]])
}

fn iv(v: V2) -> IntVector {
    IntVector::new(v.to_vec())
}

fn add(a: V2, b: V2) -> V2 {
    [a[0] + b[0], a[1] + b[1]]
}

fn neg(a: V2) -> V2 {
    [-a[0], -a[1]]
}

fn sum(vs: impl IntoIterator<Item = V2>) -> V2 {
    vs.into_iter().fold([0, 0], add)
}

fn det(a: V2, b: V2) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

fn mu(vs: &[V2]) -> Result<RefinedValue> {
    mu_plus(&vs.iter().map(|&v| iv(v)).collect::<Vec<_>>())
}

fn bm(alpha: i64) -> RefinedValue {
    RefinedValue::from_laurent(bracket_minus(alpha))
}

/// Left-hand side of the marked-split relation; it must vanish.
///
/// With `i₂ = 0` this is `Σ_j [a₀∧a_j]⁻ μ⁺(a₀+a_j, (a_k)_{k≠j})`. With
/// `i₂ ≥ 1` it runs over the splittings `I ⊔ J` of the other vectors with
/// `|I| = i₁`, `|J| = i₂+1`, summing `[a₀∧a₀']⁻ μ⁺(a₀-a₀', a_I) μ⁺(a₀', a_J)`
/// where `a₀' = -Σ_J a_s`: the unmarked vertex enters with its incoming edge
/// and the new edge merged, exactly as `a₀+a_j` does when `i₂ = 0`.
pub fn marked_split_residual(a0: &IntVector, others: &[IntVector], i1: usize, i2: usize) -> Result<RefinedValue> {
    split_residual(a0, others, i1, i2, SplitForm::Merged)
}

/// How the `i₂ ≥ 1` relation is written out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitForm {
    /// `[a₀∧a₀']⁻ μ⁺(a₀-a₀', a_I) μ⁺(a₀', a_J)`.
    Merged,
    /// `Σ_{k∈I} [a₀∧a_k]⁻ μ⁺(a₀+a_k, -a₀', a_{I∖k}) μ⁺(a₀', a_J)`, the same
    /// sum after splitting the first factor with the `i₂ = 0` relation.
    Expanded,
    /// `[a₀∧a₀']⁻ μ⁺(a₀, -a₀', a_I) μ⁺(a₀', a_J)` with the three-slot tuple
    /// kept apart; this reading does not vanish in general.
    Unmerged,
}

/// Residual of the marked-split relation written in the form `form`.
pub fn split_residual(a0: &IntVector, others: &[IntVector], i1: usize, i2: usize, form: SplitForm) -> Result<RefinedValue> {
    let a0 = v2(a0)?;
    let others = others.iter().map(v2).collect::<Result<Vec<_>>>()?;
    if i1 < 1 || others.len() != i1 + i2 + 1 {
        return Err(Error::DimensionMismatch { expected: i1.max(1) + i2 + 1, got: others.len() });
    }
    if add(a0, sum(others.iter().copied())) != [0, 0] {
        return Err(Error::Unbalanced);
    }
    let mut total = RefinedValue::zero();
    if i2 == 0 {
        for j in 0..others.len() {
            let mut a = vec![add(a0, others[j])];
            a.extend(others.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &v)| v));
            total = &total + &(&bm(det(a0, others[j])) * &mu(&a)?);
        }
        return Ok(total);
    }
    for jset in (0..others.len()).combinations(i2 + 1) {
        let a0p = neg(sum(jset.iter().map(|&s| others[s])));
        let iset: Vec<usize> = (0..others.len()).filter(|s| !jset.contains(s)).collect();
        let mut b = vec![a0p];
        b.extend(jset.iter().map(|&s| others[s]));
        let mu_b = mu(&b)?;
        let first = match form {
            SplitForm::Merged | SplitForm::Unmerged => {
                let mut a = if form == SplitForm::Merged { vec![add(a0, neg(a0p))] } else { vec![a0, neg(a0p)] };
                a.extend(iset.iter().map(|&s| others[s]));
                &bm(det(a0, a0p)) * &mu(&a)?
            }
            SplitForm::Expanded => {
                let mut acc = RefinedValue::zero();
                for &k in &iset {
                    let mut a = vec![add(a0, others[k]), neg(a0p)];
                    a.extend(iset.iter().filter(|&&s| s != k).map(|&s| others[s]));
                    acc = &acc + &(&bm(det(a0, others[k])) * &mu(&a)?);
                }
                acc
            }
        };
        total = &total + &(&first * &mu_b);
    }
    Ok(total)
}

/// Whether the marked-split relation holds exactly; for `i₂ ≥ 1` both the
/// merged and the expanded forms must vanish.
pub fn check_marked_split(a0: &IntVector, others: &[IntVector], i1: usize, i2: usize) -> Result<bool> {
    if !marked_split_residual(a0, others, i1, i2)?.is_zero() {
        return Ok(false);
    }
    Ok(i2 == 0 || split_residual(a0, others, i1, i2, SplitForm::Expanded)?.is_zero())
}

/// Reading of the signs `ε_j` in the vertex-collision relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EpsilonRule {
    /// `ε_j = sign(a_j ∧ (a_{j1} + a_{j2}))`, read off the merged edge.
    Literal,
    /// `ε_j = sign(a_{j1} ∧ a_{j2})` with `(j, j1, j2)` a cyclic shift of
    /// `(1, 2, 3)`.
    Cyclic,
}

impl EpsilonRule {
    pub const ALL: [EpsilonRule; 2] = [EpsilonRule::Literal, EpsilonRule::Cyclic];

    fn sign(self, aj: V2, aj1: V2, aj2: V2) -> i64 {
        match self {
            EpsilonRule::Literal => det(aj, add(aj1, aj2)).signum(),
            EpsilonRule::Cyclic => det(aj1, aj2).signum(),
        }
    }
}

/// Left-hand side of the vertex-collision relation for incoming `a₁, a₂, a₃`
/// and the remaining vectors `(a_k)_{k∈K}` under the sign rule `rule`:
/// `Σ_j ε_j [|a_{j1}∧a_{j2}|]⁻ (Σ_k [a_j∧a_k]⁻ μ⁺(A_k) + [a_j∧(-a_{j1}-a_{j2})]⁻ μ⁺(A))`.
pub fn vertex_collision_residual(incoming: &[IntVector; 3], outgoing: &[IntVector], rule: EpsilonRule) -> Result<RefinedValue> {
    let a = incoming.iter().map(v2).collect::<Result<Vec<_>>>()?;
    let k = outgoing.iter().map(v2).collect::<Result<Vec<_>>>()?;
    if k.is_empty() {
        return Err(Error::TooShort(3));
    }
    if sum(a.iter().chain(&k).copied()) != [0, 0] {
        return Err(Error::Unbalanced);
    }
    if (0..3).any(|i| det(a[i], a[(i + 1) % 3]) == 0) {
        return Err(Error::Collinear);
    }
    let merged_all = sum(a.iter().copied());
    if merged_all == [0, 0] {
        // the three incoming edges cancel: no merged edge to resolve into
        return Err(Error::ZeroVector);
    }
    let mut big_a = vec![merged_all];
    big_a.extend(k.iter().copied());
    let mu_a = mu(&big_a)?;
    let mut total = RefinedValue::zero();
    for j in 0..3 {
        let (aj, aj1, aj2) = (a[j], a[(j + 1) % 3], a[(j + 2) % 3]);
        let merged = add(aj1, aj2);
        let mut inner = &bm(det(aj, neg(merged))) * &mu_a;
        for kk in 0..k.len() {
            let mut ak = vec![merged, add(aj, k[kk])];
            ak.extend(k.iter().enumerate().filter(|&(l, _)| l != kk).map(|(_, &v)| v));
            inner = &inner + &(&bm(det(aj, k[kk])) * &mu(&ak)?);
        }
        let eps = rule.sign(aj, aj1, aj2);
        total = &total + &(&bm(det(aj1, aj2).abs()).scale(i128::from(eps)) * &inner);
    }
    Ok(total)
}

/// Verdict of the vertex-collision check: which sign readings vanish.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CollisionVerdict {
    pub vanishing: Vec<EpsilonRule>,
}

impl CollisionVerdict {
    /// The relation holds when exactly one sign reading makes it vanish.
    pub fn holds(&self) -> bool {
        self.vanishing.len() == 1
    }

    pub fn resolution(&self) -> Option<EpsilonRule> {
        if self.holds() {
            self.vanishing.first().copied()
        } else {
            None
        }
    }
}

/// Tries both sign readings; a zero vector or non-generic input (a vanishing
/// wedge among the incoming vectors) is an error.
pub fn check_vertex_collision(incoming: &[IntVector; 3], outgoing: &[IntVector]) -> Result<CollisionVerdict> {
    if incoming.iter().chain(outgoing).any(IntVector::is_zero) {
        return Err(Error::ZeroVector);
    }
    let mut vanishing = Vec::new();
    for rule in EpsilonRule::ALL {
        if vertex_collision_residual(incoming, outgoing, rule)?.is_zero() {
            vanishing.push(rule);
        }
    }
    Ok(CollisionVerdict { vanishing })
}

/// `z^{a∧b} - z^{b∧a}` in `Z[Λ²Z^m]` (zero when `a ∥ b`).
fn binomial(a: &IntVector, b: &IntVector) -> Result<GroupRingValue> {
    let w = wedge(a, b)?;
    let mut v = GroupRingValue::monomial(w.clone(), 1);
    v.add_term(w.neg(), -1);
    Ok(v)
}

fn vsum(vs: &[&IntVector]) -> IntVector {
    let m = vs[0].dim();
    IntVector::new((0..m).map(|i| vs.iter().map(|v| v.0[i]).sum()).collect())
}

/// Outcome of the trifurcation check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrifurcationVerdict {
    /// `f(a₁,a₂) f(a₁+a₂,a₃) = f(a₂,a₃) f(a₁,a₂+a₃) + f(a₃,a₁) f(a₂,a₁+a₃)`.
    pub main: bool,
    /// `f(a₁,a₂) f(a₃,a₄) + f(a₂,a₃) f(a₁,a₄) + f(a₃,a₁) f(a₂,a₄) = 0`.
    pub companion: bool,
    /// For `a₁ ∥ a₃` or `a₂ ∥ a₄`: the vanishing term is zero and the two
    /// remaining ones agree. `None` when neither pair is parallel.
    pub parallel: Option<bool>,
}

impl TrifurcationVerdict {
    pub fn holds(&self) -> bool {
        self.main && self.companion && self.parallel.unwrap_or(true)
    }
}

/// Checks the three resolutions of a 4-valent vertex with incoming
/// `a₁, a₂, a₃` and `a₄ = -(a₁+a₂+a₃)`, with `f(a,b) = z^{a∧b} - z^{b∧a}`.
pub fn check_trifurcation(a1: &IntVector, a2: &IntVector, a3: &IntVector) -> Result<TrifurcationVerdict> {
    if a1.dim() != a2.dim() || a1.dim() != a3.dim() {
        return Err(Error::DimensionMismatch { expected: a1.dim(), got: a2.dim().max(a3.dim()) });
    }
    let a4 = vsum(&[a1, a2, a3]).scale(-1);
    let lhs = &binomial(a1, a2)? * &binomial(&vsum(&[a1, a2]), a3)?;
    let t1 = &binomial(a2, a3)? * &binomial(a1, &vsum(&[a2, a3]))?;
    let t2 = &binomial(a3, a1)? * &binomial(a2, &vsum(&[a1, a3]))?;
    let main = lhs == &t1 + &t2;
    let companion = (&(&(&binomial(a1, a2)? * &binomial(a3, &a4)?) + &(&binomial(a2, a3)? * &binomial(a1, &a4)?))
        + &(&binomial(a3, a1)? * &binomial(a2, &a4)?))
        .is_zero();
    let p13 = wedge(a1, a3)?.is_zero();
    let p24 = wedge(a2, &a4)?.is_zero();
    // a₁ ∥ a₃ kills f(a₃,a₁); a₂ ∥ a₄ kills f(a₂,a₁+a₃) = -f(a₂,a₄)
    let parallel = (p13 || p24).then(|| t2.is_zero() && lhs == t1);
    Ok(TrifurcationVerdict { main, companion, parallel })
}

/// Which relations to sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    All,
    MarkedSplit,
    VertexCollision,
    Trifurcation,
}

/// A failing or rejected sample, with everything needed to replay it.
#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub sample: usize,
    pub vectors: Vec<IntVector>,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub identity: String,
    pub samples: usize,
    pub passed: usize,
    pub skipped: usize,
    /// Sign reading of the vertex-collision relation, when it was resolved
    /// the same way on every sample.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolution: Option<EpsilonRule>,
    pub failures: Vec<Witness>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub skipped_samples: Vec<Witness>,
}

impl IdentityReport {
    fn new(identity: &str, samples: usize) -> Self {
        IdentityReport {
            identity: identity.into(),
            samples,
            passed: 0,
            skipped: 0,
            resolution: None,
            failures: Vec::new(),
            skipped_samples: Vec::new(),
        }
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty() && self.passed + self.skipped == self.samples
    }

    fn record(&mut self, sample: usize, vectors: Vec<IntVector>, outcome: Result<Option<String>>) {
        match outcome {
            Ok(None) => self.passed += 1,
            Ok(Some(detail)) => self.failures.push(Witness { sample, vectors, detail }),
            Err(e) => {
                self.skipped += 1;
                self.skipped_samples.push(Witness { sample, vectors, detail: e.to_string() });
            }
        }
    }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn random_nonzero(rng: &mut ChaCha8Rng, bound: i64) -> V2 {
    loop {
        let v = [rng.gen_range(-bound..=bound), rng.gen_range(-bound..=bound)];
        if v != [0, 0] {
            return v;
        }
    }
}

/// Random balanced tuples `a₀, a₁, …` with `i₁ + i₂ + 2 ≤ 6` vectors and
/// entries of the free vectors in `[-4, 4]`.
pub fn run_marked_split(seed: u64, samples: usize) -> IdentityReport {
    let mut rng = rng_for(seed, 1);
    let mut report = IdentityReport::new("marked-split", samples);
    for s in 0..samples {
        let total = rng.gen_range(3..=6usize);
        let i1 = rng.gen_range(1..=total - 2);
        let i2 = total - 2 - i1;
        let (a0, others) = loop {
            let others: Vec<V2> = (0..total - 1).map(|_| random_nonzero(&mut rng, 4)).collect();
            let a0 = neg(sum(others.iter().copied()));
            if a0 != [0, 0] {
                break (a0, others);
            }
        };
        let mut vectors = vec![iv(a0)];
        vectors.extend(others.iter().map(|&v| iv(v)));
        let outcome = check_marked_split(&vectors[0], &vectors[1..], i1, i2).and_then(|ok| {
            Ok((!ok).then(|| format!("i1 = {i1}, i2 = {i2}")))
        });
        report.record(s, vectors, outcome);
    }
    report
}

/// Random incoming triples with pairwise independent vectors and up to six
/// vectors in total; entries in `[-5, 5]`.
pub fn run_vertex_collision(seed: u64, samples: usize) -> IdentityReport {
    let mut rng = rng_for(seed, 2);
    let mut report = IdentityReport::new("vertex-collision", samples);
    let mut resolutions = Vec::new();
    for s in 0..samples {
        let r = rng.gen_range(3..=6usize);
        let vectors = loop {
            let a: Vec<V2> = (0..3).map(|_| random_nonzero(&mut rng, 5)).collect();
            if (0..3).any(|i| det(a[i], a[(i + 1) % 3]) == 0) || sum(a.iter().copied()) == [0, 0] {
                continue;
            }
            let mut k: Vec<V2> = (0..r - 3).map(|_| random_nonzero(&mut rng, 5)).collect();
            let last = neg(sum(a.iter().chain(&k).copied()));
            if last == [0, 0] {
                continue;
            }
            k.push(last);
            break a.into_iter().chain(k).map(iv).collect::<Vec<_>>();
        };
        let incoming = [vectors[0].clone(), vectors[1].clone(), vectors[2].clone()];
        let outcome = check_vertex_collision(&incoming, &vectors[3..]).map(|v| {
            resolutions.push(v.resolution());
            (!v.holds()).then(|| format!("vanishing sign readings: {:?}", v.vanishing))
        });
        report.record(s, vectors, outcome);
    }
    if let Some(first) = resolutions.first().copied().flatten() {
        if resolutions.iter().all(|r| *r == Some(first)) {
            report.resolution = Some(first);
        }
    }
    report
}

/// Random triples in `[-5, 5]²`; every fourth sample is forced into
/// `a₁ ∥ a₃` and every fourth (offset by one) into `a₂ ∥ a₄`.
pub fn run_trifurcation(seed: u64, samples: usize) -> IdentityReport {
    let mut rng = rng_for(seed, 3);
    let mut report = IdentityReport::new("trifurcation", samples);
    for s in 0..samples {
        let a1 = random_nonzero(&mut rng, 5);
        let a2 = random_nonzero(&mut rng, 5);
        let a3 = match s % 4 {
            2 => {
                let k = [-2, -1, 1, 2][rng.gen_range(0..4)];
                [k * a1[0], k * a1[1]]
            }
            3 => {
                let t = rng.gen_range(-2..=2i64);
                neg(add(a1, [(1 + t) * a2[0], (1 + t) * a2[1]]))
            }
            _ => random_nonzero(&mut rng, 5),
        };
        let vectors = vec![iv(a1), iv(a2), iv(a3)];
        let outcome = check_trifurcation(&vectors[0], &vectors[1], &vectors[2])
            .map(|v| (!v.holds()).then(|| format!("{v:?}")));
        report.record(s, vectors, outcome);
    }
    report
}

/// Runs the selected relations on `samples` seeded samples each.
pub fn run_suite(suite: Suite, seed: u64, samples: usize) -> Vec<IdentityReport> {
    let mut out = Vec::new();
    if matches!(suite, Suite::All | Suite::MarkedSplit) {
        out.push(run_marked_split(seed, samples));
    }
    if matches!(suite, Suite::All | Suite::VertexCollision) {
        out.push(run_vertex_collision(seed, samples));
    }
    if matches!(suite, Suite::All | Suite::Trifurcation) {
        out.push(run_trifurcation(seed, samples));
    }
    out
}


#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn vec2() -> impl Strategy<Value = IntVector> {
        (-5i64..=5, -5i64..=5).prop_map(|(x, y)| IntVector::new(vec![x, y]))
    }

    proptest! {
        // non-generic draws are rejected, so allow for many rejects
        #![proptest_config(ProptestConfig { max_global_rejects: 1 << 20, ..ProptestConfig::default() })]

        #[test]
        fn trifurcation_holds_everywhere(a1 in vec2(), a2 in vec2(), a3 in vec2()) {
            prop_assert!(check_trifurcation(&a1, &a2, &a3).unwrap().holds());
        }

        #[test]
        fn collision_verdict_is_symmetric(a1 in vec2(), a2 in vec2(), a3 in vec2(), k in vec2()) {
            let last = vsum(&[&a1, &a2, &a3, &k]).scale(-1);
            let v = check_vertex_collision(&[a1.clone(), a2.clone(), a3.clone()], &[k.clone(), last.clone()]);
            prop_assume!(v.is_ok());
            let v = v.unwrap();
            prop_assert_eq!(v.resolution(), Some(EpsilonRule::Cyclic));
            let w = check_vertex_collision(&[a2, a1, a3], &[k, last]).unwrap();
            prop_assert_eq!(w, v);
        }
    }
}
