//! The spatial invariants: `SI` in `Z[Λ²Z^m]` and its reduction `SI^red`.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::Zero;

use super::{check_spatial_degree, solve_with, spatial_matrix, spatial_rhs, AffineConstraintConfig, ProjectionSetup, Psi};
use crate::curve::{interiority, regular_orientation, EmbeddedCurve, Interiority, SiteSystem};
use crate::error::{Error, Result};
use crate::lattice::Degree;
use crate::linalg::{Matrix, Q};
use crate::plane::SolveOutcome;
use crate::ring::{bracket_minus, group_vertex_weight, GroupRingValue, LaurentZ, RefinedValue};
use crate::trees::{bounded_component_free, edge_directions, for_each_site_set, MarkedTreeType, Node, VType};

/// A solved labeled curve with its two weights.
#[derive(Clone, Debug)]
pub struct SpatialCurve {
    pub curve: EmbeddedCurve,
    pub weight: GroupRingValue,
    pub reduced: LaurentZ,
}

#[derive(Clone, Debug)]
pub struct SpatialResult {
    pub si: GroupRingValue,
    pub si_reduced: RefinedValue,
    pub labeled_si: GroupRingValue,
    pub labeled_reduced: RefinedValue,
    /// Solved labeled curves, sorted by type.
    pub curves: Vec<SpatialCurve>,
    pub symmetry_factor: u64,
}

impl SpatialResult {
    /// Number of contributing unlabeled curves.
    pub fn curve_count(&self) -> usize {
        self.curves.len() / self.symmetry_factor as usize
    }
}

/// Weights of one regular curve: the product over vertices of
/// `z^{a1∧a2} - z^{a2∧a1}` and of `[ψ(Ψa1, Ψa2)]⁻`, with the incoming
/// edges ordered so that `ψ(Ψa1, Ψa2) > 0`.
pub fn curve_weights(t: &MarkedTreeType, setup: &ProjectionSetup) -> Result<(GroupRingValue, LaurentZ)> {
    let o = regular_orientation(t).map_err(|f| Error::Wall(format!("solved curve is not regular: {f:?}")))?;
    let mut weight = GroupRingValue::unit(t.directions[0].dim());
    let mut reduced = LaurentZ::constant(1);
    for v in 0..t.shape.n_vertices {
        let inc = &o.incoming[v];
        if inc.len() != 2 || t.shape.valency(v) != 3 {
            return Err(Error::BadOrientation { vertex: v, incoming: inc.len() });
        }
        let mut a1 = t.direction_at(inc[0], Node::Vertex(v));
        let mut a2 = t.direction_at(inc[1], Node::Vertex(v));
        let mut f = setup.form(&a1, &a2)?;
        if f == 0 {
            return Err(Error::NonGenericProjection(format!("incoming {a1:?}, {a2:?} project to collinear vectors")));
        }
        if f < 0 {
            std::mem::swap(&mut a1, &mut a2);
            f = -f;
        }
        weight = &weight * &group_vertex_weight(&a1, &a2)?;
        reduced = &reduced * &bracket_minus(f);
    }
    Ok((weight, reduced))
}

/// Labeled types through the constraints, by solving every site set of the
/// trivalent census without bounded components.
fn solved_types(degree: &Degree, cfg: &AffineConstraintConfig, quotients: &[Psi]) -> Result<Vec<MarkedTreeType>> {
    let n = cfg.n();
    let vt = VType::trivalent(degree.len());
    let uniform = quotients.windows(2).all(|w| w[0] == w[1]);
    let b = spatial_rhs(cfg, quotients);
    let m = degree.m;
    let mut found = Vec::new();
    let mut failure: Option<Error> = None;
    for_each_site_set(degree.len(), &vt, bounded_component_free, |shape, sites| {
        if failure.is_some() {
            return;
        }
        let directions = std::sync::Arc::new(edge_directions(shape, degree));
        let sys = SiteSystem::new(shape, &directions, sites, 0);
        for s0 in 0..n {
            let others: Vec<usize> = (0..n).filter(|&s| s != s0).collect();
            // with equal quotients the matrix only depends on the first site
            let inverse: Option<Option<Matrix>> = uniform.then(|| {
                let site_of: Vec<usize> = std::iter::once(s0).chain(others.iter().copied()).collect();
                spatial_matrix(&sys, &site_of, quotients).inverse()
            });
            if let Some(None) = inverse {
                continue;
            }
            for perm in others.iter().copied().permutations(n - 1) {
                // point i + 1 sits at site perm[i]
                let site_of: Vec<usize> = std::iter::once(s0).chain(perm.iter().copied()).collect();
                let u = match &inverse {
                    Some(Some(inv)) => {
                        // rows are ordered by site: move each point's equations there
                        let mut rhs = vec![Q::zero(); b.len()];
                        rhs[..m].clone_from_slice(&b[..m]);
                        for (i, &s) in perm.iter().enumerate() {
                            let slot = others.iter().position(|&o| o == s).unwrap();
                            rhs[m + 2 * slot..m + 2 * slot + 2].clone_from_slice(&b[m + 2 * i..m + 2 * i + 2]);
                        }
                        inv.mul_vec(&rhs)
                    }
                    _ => match spatial_matrix(&sys, &site_of, quotients).solve(&b) {
                        Some(u) => u,
                        None => continue,
                    },
                };
                match interiority(shape, sites, &sys, &u) {
                    Interiority::Outside => continue,
                    Interiority::Boundary => {
                        failure = Some(Error::Wall("solution on a cell boundary".into()));
                        return;
                    }
                    Interiority::Interior => {}
                }
                found.push(MarkedTreeType {
                    shape: shape.clone(),
                    marks: site_of.iter().map(|&s| sites[s]).collect(),
                    directions: directions.clone(),
                });
            }
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(found),
    }
}

/// Key of a type with leaf labels replaced by their degree vectors: labeled
/// curves in one orbit of the relabeling group share it.
fn unlabeled_key(t: &MarkedTreeType, degree: &Degree) -> Vec<(usize, Vec<(Vec<usize>, u64)>)> {
    let classes: Vec<usize> = degree.vectors.iter().map(|v| degree.vectors.iter().position(|w| w == v).unwrap()).collect();
    let mut key: Vec<(usize, Vec<(Vec<usize>, u64)>)> = t
        .canonical_key()
        .into_iter()
        .map(|(p, branches)| {
            let mut b: Vec<(Vec<usize>, u64)> = branches
                .into_iter()
                .map(|(leaves, pts)| {
                    let mut c: Vec<usize> = (0..degree.len()).filter(|&i| leaves >> i & 1 == 1).map(|i| classes[i]).collect();
                    c.sort_unstable();
                    (c, pts)
                })
                .collect();
            b.sort_unstable();
            (p, b)
        })
        .collect();
    key.sort_unstable();
    key
}

/// `SI` and `SI^red` of the configuration, each divided by `|G|`.
pub fn spatial_invariants(degree: &Degree, setup: &ProjectionSetup, cfg: &AffineConstraintConfig) -> Result<SpatialResult> {
    check_spatial_degree(degree)?;
    if setup.m() != degree.m {
        return Err(Error::DimensionMismatch { expected: degree.m, got: setup.m() });
    }
    setup.check_generic(degree)?;
    cfg.check(degree)?;
    let quotients = cfg.quotients()?;
    let mut curves = Vec::new();
    for t in solved_types(degree, cfg, &quotients)? {
        let c = match solve_with(&t, cfg, &quotients)? {
            SolveOutcome::Solution(c) => *c,
            SolveOutcome::Wall => return Err(Error::Wall("solution on a cell boundary".into())),
            _ => return Err(Error::Invalid("a solved cell does not solve with its own root".into())),
        };
        let (weight, reduced) = curve_weights(&c.ty, setup)?;
        curves.push(SpatialCurve { curve: c, weight, reduced });
    }
    curves.sort_by_cached_key(|c| c.curve.ty.canonical_key());
    let g = crate::trees::symmetry_factor(degree);
    let mut orbits: BTreeMap<_, u64> = BTreeMap::new();
    for c in &curves {
        *orbits.entry(unlabeled_key(&c.curve.ty, degree)).or_default() += 1;
    }
    if orbits.values().any(|&k| k < g) {
        return Err(Error::NontrivialAutomorphism);
    }
    if orbits.values().any(|&k| k > g) {
        return Err(Error::Invalid("more labeled curves of one class than relabelings".into()));
    }
    let labeled_si = curves.iter().fold(GroupRingValue::default(), |acc, c| &acc + &c.weight);
    let labeled_reduced = RefinedValue::from_laurent(curves.iter().fold(LaurentZ::zero(), |acc, c| &acc + &c.reduced));
    let coeff = g as crate::ring::Coeff;
    Ok(SpatialResult {
        si: labeled_si.div_exact(coeff)?,
        si_reduced: labeled_reduced.div_exact(coeff)?,
        labeled_si,
        labeled_reduced,
        curves,
        symmetry_factor: g,
    })
}

/// `SI` of the configuration.
pub fn si_invariant(degree: &Degree, setup: &ProjectionSetup, cfg: &AffineConstraintConfig) -> Result<GroupRingValue> {
    spatial_invariants(degree, setup, cfg).map(|r| r.si)
}

/// `SI^red` of the configuration.
pub fn si_reduced(degree: &Degree, setup: &ProjectionSetup, cfg: &AffineConstraintConfig) -> Result<RefinedValue> {
    spatial_invariants(degree, setup, cfg).map(|r| r.si_reduced)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::IntVector;
    use crate::linalg::q;
    use crate::plane::{rc_invariant, Engine};
    use crate::ring::lambda_push;

    fn line3() -> Degree {
        Degree::new(3, vec![vec![-1, 0, 0], vec![0, -1, 0], vec![0, 0, -1], vec![1, 1, 1]])
    }

    fn setup() -> ProjectionSetup {
        ProjectionSetup::from_l_basis(vec![IntVector(vec![3, -7, 11])]).unwrap()
    }

    fn cfg(s: &ProjectionSetup, pts: &[[i64; 3]]) -> AffineConstraintConfig {
        let qv = |p: &[i64; 3]| p.iter().map(|&x| q(x)).collect::<Vec<_>>();
        AffineConstraintConfig::with_subspace(qv(&pts[0]), pts[1..].iter().map(qv).collect(), s)
    }

    #[test]
    fn line_in_space() {
        let s = setup();
        let a = spatial_invariants(&line3(), &s, &cfg(&s, &[[17, -5, 3], [-40, 23, 11], [9, 31, -27]])).unwrap();
        let b = spatial_invariants(&line3(), &s, &cfg(&s, &[[-311, 87, 4], [52, -19, 230], [-77, 140, 61]])).unwrap();
        // the number of curves varies, the invariants do not
        assert_eq!((a.curve_count(), b.curve_count()), (3, 2));
        assert_eq!(a.si, b.si);
        assert_eq!(a.si_reduced, b.si_reduced);
        // two vertices per curve, hence even under exponent negation
        assert_eq!(a.si.negate_exponents(), a.si);
        assert_eq!(a.si.coeff_sum(), 0);
        for c in &a.curves {
            assert_eq!(c.weight.len(), 4);
        }
        for lambda in [[1, 0, 0], [2, -1, 3], [0, 5, 1]] {
            assert_eq!(lambda_push(&a.si, &lambda).unwrap(), lambda_push(&b.si, &lambda).unwrap());
        }
    }

    #[test]
    fn perturbed_subspaces_agree() {
        let s = setup();
        let base = cfg(&s, &[[17, -5, 3], [-40, 23, 11], [9, 31, -27]]);
        let mut moved = base.clone();
        moved.subspace_directions = vec![vec![IntVector(vec![301, -700, 1099])], vec![IntVector(vec![300, -699, 1100])]];
        let a = spatial_invariants(&line3(), &s, &base).unwrap();
        let b = spatial_invariants(&line3(), &s, &moved).unwrap();
        assert_eq!(a.si, b.si);
        assert_eq!(a.si_reduced, b.si_reduced);
    }

    /// With every `L_i = L`, `SI^red` is the plane count of the projected
    /// degree through the projected points.
    #[test]
    fn reduction_matches_plane_count() {
        let d = Degree::new(3, vec![vec![-1, 0, 2], vec![0, -1, -3], vec![1, 1, 1]]);
        let s = ProjectionSetup::from_l_basis(vec![IntVector(vec![0, 0, 1])]).unwrap();
        let c = cfg(&s, &[[3, 7, 1], [-20, 11, 5]]);
        let r = spatial_invariants(&d, &s, &c).unwrap();
        let pd = Degree::new(2, d.vectors.iter().map(|v| super::super::apply(&s.psi().unwrap(), v).0).collect());
        let plane = rc_invariant(&pd, &VType::trivalent(3), &c.projected(&s).unwrap(), Engine::Search).unwrap();
        assert_eq!(r.si_reduced, plane.invariant);
        assert_eq!(r.curves.len(), plane.curve_count());
    }
}
