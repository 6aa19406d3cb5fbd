//! The refined cuspidal invariant of a configuration.

use serde::Serialize;

use super::{brute::brute_force_curves, contribution, search::regular_types, PointConfig};
use crate::curve::EmbeddedCurve;
use crate::error::{Error, Result};
use crate::lattice::Degree;
use crate::ring::RefinedValue;
use crate::trees::{symmetry_factor, VType};

/// How the contributing curves are found.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    /// Guided ray search over regular curves.
    #[default]
    Search,
    /// Solve every type of the census (small degrees only).
    Brute,
}

/// Invariant together with the labeled curves it was summed from.
#[derive(Clone, Debug)]
pub struct RcResult {
    pub invariant: RefinedValue,
    pub labeled_total: RefinedValue,
    /// Solved labeled curves with their multiplicities, sorted by type.
    pub curves: Vec<(EmbeddedCurve, RefinedValue)>,
}

impl RcResult {
    pub fn curve_count(&self) -> usize {
        self.curves.len()
    }
}

/// `RC_y(Δ, vt)` for one configuration: the sum of the curve multiplicities
/// over the labeled degree, divided by `|G|`.
pub fn rc_invariant(degree: &Degree, vt: &VType, cfg: &PointConfig, engine: Engine) -> Result<RcResult> {
    degree.check(true)?;
    if degree.m != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: degree.m });
    }
    vt.check_rc(degree.len())?;
    if cfg.len() != vt.n() {
        return Err(Error::DimensionMismatch { expected: vt.n(), got: cfg.len() });
    }
    if !cfg.distinct() {
        return Err(Error::Wall("coinciding points".into()));
    }
    let mut curves = match engine {
        Engine::Brute => brute_force_curves(degree, vt, cfg, true)?,
        Engine::Search => {
            let mut out = Vec::new();
            for t in regular_types(degree, vt, cfg)? {
                match contribution(&t, cfg)? {
                    Some(c) => out.push(c),
                    None => return Err(Error::Invalid("a curve found by the search does not solve".into())),
                }
            }
            out
        }
    };
    curves.sort_by_cached_key(|(c, _)| c.ty.canonical_key());
    let labeled_total: RefinedValue = curves.iter().map(|(_, w)| w.clone()).sum();
    let invariant = labeled_total.div_exact(i128::from(symmetry_factor(degree)))?;
    Ok(RcResult { invariant, labeled_total, curves })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane::classical_count_oracle;
    use crate::ring::LaurentZ;
    use num_rational::BigRational;

    fn delta(k: usize) -> Degree {
        Degree::projective(k)
    }

    fn cfg(pts: &[[i64; 2]]) -> PointConfig {
        PointConfig::from_ints(pts)
    }

    const PTS: [[i64; 2]; 8] = [
        [3017, 17389],
        [-41203, 5711],
        [29947, -13063],
        [-7411, -31337],
        [53129, 23957],
        [-19661, 47221],
        [11813, -59107],
        [67247, -3391],
    ];

    #[test]
    fn line_and_conic() {
        for k in [1, 2] {
            let d = delta(k);
            let vt = VType::trivalent(d.len());
            let c = cfg(&PTS[..d.len() - 1]);
            for engine in [Engine::Search, Engine::Brute] {
                if k == 2 && engine == Engine::Brute {
                    continue;
                }
                let r = rc_invariant(&d, &vt, &c, engine).unwrap();
                assert_eq!(r.invariant, RefinedValue::constant(1), "k = {k}, {engine:?}");
            }
            assert_eq!(classical_count_oracle(&d, &c).unwrap(), 1);
        }
    }

    #[test]
    fn search_matches_brute_force() {
        let degrees = [
            Degree::new(2, vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]]),
            Degree::new(2, vec![vec![-1, 0], vec![-1, 0], vec![0, -1], vec![2, 1]]),
            Degree::new(2, vec![vec![1, 0], vec![0, 1], vec![-2, -1], vec![1, 0], vec![0, -1], vec![0, 1]]),
        ];
        for d in &degrees {
            let l = d.len();
            let mut vts = vec![VType::trivalent(l)];
            if l == 4 {
                vts.push(VType::from_pairs(&[(2, 1)], &[(0, 2)]));
                vts.push(VType::from_pairs(&[(1, 1)], &[(0, 1), (1, 1)]));
            }
            for vt in vts {
                let c = cfg(&PTS[..vt.n()]);
                let a = rc_invariant(d, &vt, &c, Engine::Search).unwrap();
                let b = rc_invariant(d, &vt, &c, Engine::Brute).unwrap();
                let keys = |r: &RcResult| r.curves.iter().map(|(c, _)| c.ty.canonical_key()).collect::<Vec<_>>();
                assert_eq!(keys(&a), keys(&b), "{d:?} {vt:?}");
                assert_eq!(a.labeled_total, b.labeled_total);
                let unpruned = brute_force_curves(d, &vt, &c, false).unwrap();
                assert_eq!(unpruned.len(), b.curves.len());
            }
        }
    }

    #[test]
    fn oracle_matches_value_at_one() {
        let d = Degree::new(2, vec![vec![1, 0], vec![0, 1], vec![-2, -1], vec![1, 0], vec![0, -1], vec![0, 1]]);
        let c = cfg(&PTS[..5]);
        let r = rc_invariant(&d, &VType::trivalent(6), &c, Engine::Search).unwrap();
        let o = classical_count_oracle(&d, &c).unwrap();
        assert_eq!(r.invariant.at_one(), BigRational::from_integer((o as i64).into()));
        assert!(r.invariant.as_laurent().is_some_and(LaurentZ::is_palindromic));
    }
}
