//! Plane curves through points: solving cells, regularity, refined cuspidal
//! multiplicities and the invariant `RC_y`.

pub mod brute;
pub mod invariant;
pub mod oracle;
pub mod search;
pub mod structure;

use serde::{Deserialize, Serialize};

use crate::curve::{interiority, regular_orientation, EmbeddedCurve, Interiority, RegularOrientation, SiteSystem};
use crate::error::{Error, Result};
use crate::lattice::IntVector;
use crate::linalg::{q, Q};
use crate::ring::{bracket_minus, mu_plus, LaurentZ, RefinedValue};
use crate::trees::{Mark, MarkedTreeType, Node};

pub use invariant::{rc_invariant, Engine, RcResult};
pub use oracle::classical_count_oracle;
pub use structure::{structure_check, StructureReport};

/// Exact point configuration; coordinates are written as strings `"p/q"` in
/// JSON, and integers are accepted on input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointConfig {
    #[serde(with = "qvec")]
    pub points: Vec<Vec<Q>>,
}

impl PointConfig {
    pub fn from_ints(points: &[[i64; 2]]) -> Self {
        PointConfig { points: points.iter().map(|p| vec![q(p[0]), q(p[1])]).collect() }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn distinct(&self) -> bool {
        (0..self.len()).all(|i| (i + 1..self.len()).all(|j| self.points[i] != self.points[j]))
    }
}

/// Serde helpers writing rational vectors as decimal strings.
pub mod qvec {
    use super::Q;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    /// A coordinate on input: an integer or a string `"p/q"`.
    #[derive(Deserialize)]
    #[serde(untagged)]
    pub(crate) enum Coord {
        Int(i64),
        Str(String),
    }

    impl Coord {
        pub(crate) fn into_q<E: serde::de::Error>(self) -> Result<Q, E> {
            match self {
                Coord::Int(i) => Ok(super::q(i)),
                Coord::Str(s) => s.parse::<Q>().map_err(E::custom),
            }
        }
    }

    pub fn serialize<S: Serializer>(v: &[Vec<Q>], s: S) -> Result<S::Ok, S::Error> {
        let strs: Vec<Vec<String>> = v.iter().map(|p| p.iter().map(|c| c.to_string()).collect()).collect();
        strs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Q>>, D::Error> {
        let raw: Vec<Vec<Coord>> = Vec::deserialize(d)?;
        raw.into_iter().map(|p| p.into_iter().map(Coord::into_q).collect()).collect()
    }
}

/// Serde helpers writing a single rational vector as decimal strings.
pub mod qpoint {
    use super::qvec::Coord;
    use super::Q;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Q], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|c| c.to_string()).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
        let raw: Vec<Coord> = Vec::deserialize(d)?;
        raw.into_iter().map(Coord::into_q).collect()
    }
}

/// Result of solving one cell against a configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Solution(Box<EmbeddedCurve>),
    /// The system is invertible but its solution violates the cell inequalities.
    Outside,
    /// The system is singular: the cell is not enumeratively essential.
    Singular,
    /// The solution lies on the boundary of the cell: the configuration is on a wall.
    Wall,
}

/// Root vertex used for a type: the vertex at or next to point 1.
pub fn root_for(t: &MarkedTreeType) -> usize {
    match t.marks.first() {
        Some(Mark::Vertex(v)) => *v,
        Some(Mark::Edge { edge, .. }) => t.shape.edges[*edge].tail,
        None => 0,
    }
}

/// Solve the evaluation system of a plane type for the given points.
pub fn solve_plane(t: &MarkedTreeType, cfg: &PointConfig) -> Result<SolveOutcome> {
    let n = t.n_points();
    if cfg.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: cfg.len() });
    }
    let sys = SiteSystem::new(&t.shape, &t.directions, &t.marks, root_for(t));
    if sys.m != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: sys.m });
    }
    if sys.n_unknowns != 2 * n {
        return Err(Error::DimensionMismatch { expected: 2 * n, got: sys.n_unknowns });
    }
    let b: Vec<Q> = cfg.points.iter().flatten().cloned().collect();
    let Some(u) = sys.plane_matrix().solve(&b) else { return Ok(SolveOutcome::Singular) };
    Ok(match interiority(&t.shape, &t.marks, &sys, &u) {
        Interiority::Outside => SolveOutcome::Outside,
        Interiority::Boundary => SolveOutcome::Wall,
        Interiority::Interior => SolveOutcome::Solution(Box::new(EmbeddedCurve::from_solution(t.clone(), &sys, &u))),
    })
}

fn det(a: &IntVector, b: &IntVector) -> i64 {
    a.det2(b)
}

/// Refined cuspidal multiplicity of internal vertex `v`.
pub fn rcm_vertex(t: &MarkedTreeType, o: &RegularOrientation, v: usize) -> Result<RefinedValue> {
    let at = Node::Vertex(v);
    if t.point_at_vertex(v).is_some() {
        let dirs: Vec<IntVector> = t.shape.incident[v].iter().map(|&e| t.direction_at(e, at)).collect();
        return mu_plus(&dirs);
    }
    if o.incoming[v].len() != 2 {
        return Err(Error::BadOrientation { vertex: v, incoming: o.incoming[v].len() });
    }
    let a1 = t.direction_at(o.incoming[v][0], at);
    let a2 = t.direction_at(o.incoming[v][1], at);
    let m = RefinedValue::from_laurent(bracket_minus(det(&a1, &a2).abs()));
    if o.outgoing[v].len() == 1 {
        return Ok(m);
    }
    let mut rest = vec![&a1 + &a2];
    rest.extend(o.outgoing[v].iter().map(|&e| t.direction_at(e, at)));
    Ok(&m * &mu_plus(&rest)?)
}

/// Product of the vertex multiplicities of a regular curve.
pub fn curve_multiplicity(t: &MarkedTreeType, o: &RegularOrientation) -> Result<RefinedValue> {
    let mut acc = RefinedValue::from_laurent(LaurentZ::constant(1));
    for v in 0..t.shape.n_vertices {
        acc = &acc * &rcm_vertex(t, o, v)?;
    }
    Ok(acc)
}

/// Solve, orient and weigh one type. `Ok(None)` when the type contributes
/// nothing; `Err(Wall)` when the configuration is degenerate for it.
pub fn contribution(t: &MarkedTreeType, cfg: &PointConfig) -> Result<Option<(EmbeddedCurve, RefinedValue)>> {
    match solve_plane(t, cfg)? {
        SolveOutcome::Outside | SolveOutcome::Singular => Ok(None),
        SolveOutcome::Wall => Err(Error::Wall("solution on a cell boundary".into())),
        SolveOutcome::Solution(c) => {
            let o = regular_orientation(&c.ty)
                .map_err(|f| Error::Wall(format!("solved curve is not regular: {f:?}")))?;
            let w = curve_multiplicity(&c.ty, &o)?;
            Ok(Some((*c, w)))
        }
    }
}
