//! Curves in `R^m` (`m ≥ 3`) through one point and `n - 1` affine subspaces
//! of codimension two: projections, constraint configurations and solving.

pub mod invariant;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::curve::{interiority, EmbeddedCurve, Interiority, SiteSystem};
use crate::error::{Error, Result};
use crate::lattice::{directing_set, rank, Degree, IntVector};
use crate::linalg::{primitive_integer, Matrix, Q};
use crate::plane::{qpoint, qvec, root_for, PointConfig, SolveOutcome};
use crate::trees::MarkedTreeType;

pub use invariant::{si_invariant, si_reduced, spatial_invariants, SpatialCurve, SpatialResult};

/// A quotient map `Z^m -> Z^2`, given by two integer rows.
pub type Psi = [IntVector; 2];

/// The subspace `L` and the projection `Ψ: R^m -> R^m / L ≅ R^2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectionSetup {
    /// Integer basis of `L` (`m - 2` vectors).
    pub l_basis: Vec<IntVector>,
    /// Rows spanning the annihilator of `L`; computed when omitted.
    #[serde(default)]
    pub psi_matrix: Vec<IntVector>,
    /// Number of sampled candidates rejected before this one.
    #[serde(default)]
    pub rejected: usize,
}

fn to_i64(x: &BigInt) -> Result<i64> {
    x.to_i64().ok_or_else(|| Error::Invalid("integer overflow in a projection".into()))
}

/// Integer rows spanning the annihilator of the span of `basis` in `Z^m`.
pub fn annihilator(basis: &[IntVector], m: usize) -> Result<Psi> {
    if basis.iter().any(|b| b.dim() != m) {
        return Err(Error::DimensionMismatch { expected: m, got: basis.iter().map(IntVector::dim).find(|&d| d != m).unwrap_or(0) });
    }
    if rank(basis) != m - 2 || basis.len() != m - 2 {
        return Err(Error::Invalid(format!("a subspace basis must consist of {} independent vectors", m - 2)));
    }
    let mut a = Matrix::zeros(basis.len(), m);
    for (r, b) in basis.iter().enumerate() {
        for (c, &x) in b.0.iter().enumerate() {
            a.set_int(r, c, x);
        }
    }
    let k = a.kernel();
    let row = |v: &[Q]| -> Result<IntVector> { Ok(IntVector(primitive_integer(v).iter().map(to_i64).collect::<Result<_>>()?)) };
    Ok([row(&k[0])?, row(&k[1])?])
}

/// `Ψ(v)` for an integer vector.
pub fn apply(psi: &Psi, v: &IntVector) -> IntVector {
    IntVector(psi.iter().map(|r| r.0.iter().zip(&v.0).map(|(a, b)| a * b).sum()).collect())
}

/// `Ψ(x)` for a rational point.
pub fn apply_q(psi: &Psi, x: &[Q]) -> Vec<Q> {
    psi.iter()
        .map(|r| r.0.iter().zip(x).fold(Q::zero(), |acc, (&a, b)| acc + b * Q::from_integer(a.into())))
        .collect()
}

impl ProjectionSetup {
    /// Setup for the span of `l_basis`, with `Ψ` computed.
    pub fn from_l_basis(l_basis: Vec<IntVector>) -> Result<Self> {
        let m = l_basis.first().map_or(0, IntVector::dim);
        let psi = annihilator(&l_basis, m)?;
        Ok(ProjectionSetup { l_basis, psi_matrix: psi.to_vec(), rejected: 0 })
    }

    pub fn m(&self) -> usize {
        self.psi_matrix.first().or(self.l_basis.first()).map_or(0, IntVector::dim)
    }

    /// Fill in `Ψ` if absent and check that it kills `L` and has rank 2.
    pub fn completed(mut self) -> Result<Self> {
        if self.psi_matrix.is_empty() {
            let m = self.l_basis.first().map_or(0, IntVector::dim);
            self.psi_matrix = annihilator(&self.l_basis, m)?.to_vec();
        }
        let psi = self.psi()?;
        let m = self.m();
        if m < 3 || self.l_basis.len() != m - 2 || rank(&self.l_basis) != m - 2 {
            return Err(Error::Invalid("L must be spanned by m - 2 independent vectors, m ≥ 3".into()));
        }
        if self.l_basis.iter().any(|b| !apply(&psi, b).is_zero()) || rank(&psi) != 2 {
            return Err(Error::Invalid("the projection must have rank 2 and vanish on L".into()));
        }
        Ok(self)
    }

    pub fn psi(&self) -> Result<Psi> {
        match self.psi_matrix.as_slice() {
            [a, b] if a.dim() == b.dim() => Ok([a.clone(), b.clone()]),
            _ => Err(Error::Invalid("the projection needs exactly two rows of equal length".into())),
        }
    }

    /// `ψ(Ψ(a), Ψ(b))` with the standard area form.
    pub fn form(&self, a: &IntVector, b: &IntVector) -> Result<i64> {
        let psi = self.psi()?;
        Ok(apply(&psi, a).det2(&apply(&psi, b)))
    }

    /// A pair of directing vectors that are independent in `R^m` but
    /// collinear after projection, if any.
    pub fn genericity_witness(&self, degree: &Degree) -> Result<Option<(IntVector, IntVector)>> {
        let psi = self.psi()?;
        generic_against(&psi, degree)
    }

    pub fn check_generic(&self, degree: &Degree) -> Result<()> {
        match self.genericity_witness(degree)? {
            None => Ok(()),
            Some((a, b)) => Err(Error::NonGenericProjection(format!("{a:?} and {b:?} become collinear"))),
        }
    }
}

/// The pairwise condition over the directing set for a quotient map.
pub fn generic_against(psi: &Psi, degree: &Degree) -> Result<Option<(IntVector, IntVector)>> {
    let a: Vec<IntVector> = directing_set(degree).into_iter().collect();
    let images: Vec<IntVector> = a.iter().map(|v| apply(psi, v)).collect();
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if rank(&[a[i].clone(), a[j].clone()]) == 2 && images[i].det2(&images[j]) == 0 {
                return Ok(Some((a[i].clone(), a[j].clone())));
            }
        }
    }
    Ok(None)
}

/// Sample `L` with small integer basis vectors until the projection is
/// generic for the degree. Deterministic in the generator state.
pub fn choose_projection(degree: &Degree, rng: &mut ChaCha8Rng, budget: usize) -> Result<ProjectionSetup> {
    check_spatial_degree(degree)?;
    let m = degree.m;
    for rejected in 0..budget {
        let basis: Vec<IntVector> = (0..m - 2).map(|_| IntVector((0..m).map(|_| rng.gen_range(-5..=5)).collect())).collect();
        let Ok(mut setup) = ProjectionSetup::from_l_basis(basis) else { continue };
        if setup.genericity_witness(degree)?.is_none() {
            setup.rejected = rejected;
            return Ok(setup);
        }
    }
    Err(Error::ResampleBudget(budget))
}

/// Degrees accepted in `R^m`: balanced, nonzero, `m ≥ 3`, spanning at least
/// a plane (a degree inside a plane is allowed; its curves stay in a plane).
pub fn check_spatial_degree(degree: &Degree) -> Result<()> {
    degree.check(false)?;
    if degree.m < 3 {
        return Err(Error::DimensionMismatch { expected: 3, got: degree.m });
    }
    if rank(&degree.vectors) < 2 {
        return Err(Error::Invalid("the degree must span at least a plane".into()));
    }
    if degree.len() < 3 {
        return Err(Error::TooShort(degree.len()));
    }
    Ok(())
}

/// The point `x0` for the first marked point and the affine subspaces
/// `anchor_i + L_i` for the others.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineConstraintConfig {
    #[serde(with = "qpoint")]
    pub x0: Vec<Q>,
    #[serde(with = "qvec")]
    pub subspace_anchors: Vec<Vec<Q>>,
    /// Integer basis of each `L_i`.
    pub subspace_directions: Vec<Vec<IntVector>>,
}

impl AffineConstraintConfig {
    /// Every `L_i` equal to the `L` of the setup.
    pub fn with_subspace(x0: Vec<Q>, anchors: Vec<Vec<Q>>, setup: &ProjectionSetup) -> Self {
        let dirs = vec![setup.l_basis.clone(); anchors.len()];
        AffineConstraintConfig { x0, subspace_anchors: anchors, subspace_directions: dirs }
    }

    /// Number of marked points.
    pub fn n(&self) -> usize {
        self.subspace_anchors.len() + 1
    }

    pub fn m(&self) -> usize {
        self.x0.len()
    }

    /// Quotient map of each `L_i`.
    pub fn quotients(&self) -> Result<Vec<Psi>> {
        let m = self.m();
        self.subspace_directions.iter().map(|b| annihilator(b, m)).collect()
    }

    /// The image under `Ψ` of `x0` and of the anchors, as a plane
    /// configuration.
    pub fn projected(&self, setup: &ProjectionSetup) -> Result<PointConfig> {
        let psi = setup.psi()?;
        let mut points = vec![apply_q(&psi, &self.x0)];
        points.extend(self.subspace_anchors.iter().map(|a| apply_q(&psi, a)));
        Ok(PointConfig { points })
    }

    fn check(&self, degree: &Degree) -> Result<()> {
        if self.n() != degree.len() - 1 {
            return Err(Error::DimensionMismatch { expected: degree.len() - 1, got: self.n() });
        }
        if self.subspace_directions.len() != self.subspace_anchors.len() {
            return Err(Error::Invalid("one subspace per anchor is required".into()));
        }
        let m = degree.m;
        if self.m() != m || self.subspace_anchors.iter().any(|a| a.len() != m) {
            return Err(Error::DimensionMismatch { expected: m, got: self.m() });
        }
        Ok(())
    }
}

/// Perturb each basis vector of `L` to `b + eps * r` with `r` a random
/// vector with entries in `{-1, 0, 1}`, scaled back to integers.
pub fn perturb_subspace(l_basis: &[IntVector], eps: &Q, rng: &mut ChaCha8Rng) -> Result<Vec<IntVector>> {
    l_basis
        .iter()
        .map(|b| {
            let v: Vec<Q> = b.0.iter().map(|&x| Q::from_integer(x.into()) + eps * Q::from_integer(rng.gen_range(-1i64..=1).into())).collect();
            Ok(IntVector(primitive_integer(&v).iter().map(to_i64).collect::<Result<_>>()?))
        })
        .collect()
}

/// The square evaluation system of a trivalent type: all coordinates of the
/// first point, and two quotient coordinates for each other point.
/// `site_of[p]` is the site carrying point `p`.
pub fn spatial_matrix(sys: &SiteSystem, site_of: &[usize], quotients: &[Psi]) -> Matrix {
    let m = sys.m;
    let mut a = Matrix::zeros(m + 2 * (site_of.len() - 1), sys.n_unknowns);
    for (k, row) in sys.rows[site_of[0]].iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            if v != 0 {
                a.set_int(k, c, v);
            }
        }
    }
    for (i, &s) in site_of.iter().enumerate().skip(1) {
        for (r, prow) in quotients[i - 1].iter().enumerate() {
            for c in 0..sys.n_unknowns {
                let v: i64 = (0..m).map(|k| prow.0[k] * sys.rows[s][k][c]).sum();
                if v != 0 {
                    a.set_int(m + 2 * (i - 1) + r, c, v);
                }
            }
        }
    }
    a
}

/// Right-hand side matching [`spatial_matrix`].
pub fn spatial_rhs(cfg: &AffineConstraintConfig, quotients: &[Psi]) -> Vec<Q> {
    let mut b = cfg.x0.clone();
    for (a, psi) in cfg.subspace_anchors.iter().zip(quotients) {
        b.extend(apply_q(psi, a));
    }
    b
}

/// Solve the evaluation system of a trivalent type with all points on edges.
pub fn solve_spatial(t: &MarkedTreeType, cfg: &AffineConstraintConfig) -> Result<SolveOutcome> {
    let n = t.n_points();
    if cfg.n() != n {
        return Err(Error::DimensionMismatch { expected: n, got: cfg.n() });
    }
    let quotients = cfg.quotients()?;
    solve_with(t, cfg, &quotients)
}

pub(crate) fn solve_with(t: &MarkedTreeType, cfg: &AffineConstraintConfig, quotients: &[Psi]) -> Result<SolveOutcome> {
    let n = t.n_points();
    let sys = SiteSystem::new(&t.shape, &t.directions, &t.marks, root_for(t));
    let rows = sys.m + 2 * (n - 1);
    if sys.n_unknowns != rows {
        return Err(Error::DimensionMismatch { expected: rows, got: sys.n_unknowns });
    }
    let site_of: Vec<usize> = (0..n).collect();
    let a = spatial_matrix(&sys, &site_of, quotients);
    let Some(u) = a.solve(&spatial_rhs(cfg, quotients)) else { return Ok(SolveOutcome::Singular) };
    Ok(match interiority(&t.shape, &t.marks, &sys, &u) {
        Interiority::Outside => SolveOutcome::Outside,
        Interiority::Boundary => SolveOutcome::Wall,
        Interiority::Interior => SolveOutcome::Solution(Box::new(EmbeddedCurve::from_solution(t.clone(), &sys, &u))),
    })
}
