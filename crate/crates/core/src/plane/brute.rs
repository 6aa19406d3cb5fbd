//! Exhaustive route: solve every type of the census. Slow, but independent of
//! the guided search, so it serves to cross-check it on small degrees.

use itertools::Itertools;
use num_traits::Zero;

use super::{contribution, PointConfig};
use crate::curve::{interiority, EmbeddedCurve, Interiority, SiteSystem};
use crate::error::{Error, Result};
use crate::lattice::Degree;
use crate::linalg::Q;
use crate::ring::RefinedValue;
use crate::trees::{bounded_component_free, edge_directions, for_each_site_set, MarkedTreeType, TreeShape, VType};

/// Every solved curve of the census through `cfg` with its multiplicity.
/// With `prune`, site sets leaving a bounded component are skipped up front;
/// without it, such cells must come out singular or unsolved.
pub fn brute_force_curves(
    degree: &Degree,
    vt: &VType,
    cfg: &PointConfig,
    prune: bool,
) -> Result<Vec<(EmbeddedCurve, RefinedValue)>> {
    vt.check_rc(degree.len())?;
    let n = vt.n();
    if cfg.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: cfg.len() });
    }
    let mut found = Vec::new();
    let mut failure: Option<Error> = None;
    let keep = |shape: &TreeShape, sites: &[crate::trees::Site]| !prune || bounded_component_free(shape, sites);
    for_each_site_set(degree.len(), vt, keep, |shape, sites| {
        if failure.is_some() {
            return;
        }
        let directions = std::sync::Arc::new(edge_directions(shape, degree));
        let sys = SiteSystem::new(shape, &directions, sites, 0);
        let Some(inv) = sys.plane_matrix().inverse() else { return };
        for perm in (0..n).permutations(n) {
            // point p sits at site perm[p]
            let mut b = vec![Q::zero(); 2 * n];
            for (p, &s) in perm.iter().enumerate() {
                b[2 * s] = cfg.points[p][0].clone();
                b[2 * s + 1] = cfg.points[p][1].clone();
            }
            let u = inv.mul_vec(&b);
            match interiority(shape, sites, &sys, &u) {
                Interiority::Outside => continue,
                Interiority::Boundary => {
                    failure = Some(Error::Wall("solution on a cell boundary".into()));
                    return;
                }
                Interiority::Interior => {}
            }
            let t = MarkedTreeType {
                shape: shape.clone(),
                marks: perm.iter().map(|&s| sites[s]).collect(),
                directions: directions.clone(),
            };
            match contribution(&t, cfg) {
                Ok(Some(c)) => found.push(c),
                Ok(None) => {
                    failure = Some(Error::Invalid("cell solved with one root but not another".into()));
                    return;
                }
                Err(e) => {
                    failure = Some(e);
                    return;
                }
            }
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(found),
    }
}
