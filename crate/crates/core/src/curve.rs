//! Embedded curves: the affine parametrization of a marked type by root
//! position, finite edge lengths and point offsets; interiority of solutions;
//! and the regular orientation of the complement of the points.

use num_traits::Zero;
use serde::Serialize;

use crate::lattice::{wedge, IntVector};
use crate::linalg::{Matrix, Q};
use crate::trees::{Mark, MarkedTreeType, Node, Site, TreeShape};

/// Path from `root` to every internal vertex as `(edge, +1 | -1)`, the sign
/// telling whether the edge is traversed from tail to head.
pub fn root_paths(shape: &TreeShape, root: usize) -> Vec<Vec<(usize, i64)>> {
    let mut paths: Vec<Option<Vec<(usize, i64)>>> = vec![None; shape.n_vertices];
    paths[root] = Some(Vec::new());
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        let here = paths[v].clone().unwrap_or_default();
        for &e in &shape.incident[v] {
            if let Node::Vertex(w) = shape.other_end(e, Node::Vertex(v)) {
                if paths[w].is_none() {
                    let mut p = here.clone();
                    p.push((e, if shape.edges[e].tail == v { 1 } else { -1 }));
                    paths[w] = Some(p);
                    stack.push(w);
                }
            }
        }
    }
    paths.into_iter().map(|p| p.expect("disconnected tree")).collect()
}

/// Affine parametrization of the points of a type. Unknowns are ordered as
/// root coordinates, finite edge lengths, then offsets of edge points.
#[derive(Clone, Debug)]
pub struct SiteSystem {
    pub m: usize,
    pub root: usize,
    pub n_unknowns: usize,
    /// Column of each finite edge length (`None` for ends).
    pub length_col: Vec<Option<usize>>,
    /// Column of each edge site's offset (`None` for vertex sites).
    pub offset_col: Vec<Option<usize>>,
    /// `rows[s]` is the `m × n_unknowns` integer matrix giving site `s`.
    pub rows: Vec<Vec<Vec<i64>>>,
    /// Path from the root to each internal vertex: `(edge, +1 | -1)`.
    pub paths: Vec<Vec<(usize, i64)>>,
}

impl SiteSystem {
    pub fn new(shape: &TreeShape, directions: &[IntVector], sites: &[Site], root: usize) -> Self {
        let m = directions[0].dim();
        let mut length_col = vec![None; shape.edges.len()];
        let mut col = m;
        for e in shape.finite_edges() {
            length_col[e] = Some(col);
            col += 1;
        }
        let mut offset_col = vec![None; sites.len()];
        for (s, site) in sites.iter().enumerate() {
            if let Mark::Edge { .. } = site {
                offset_col[s] = Some(col);
                col += 1;
            }
        }
        let n_unknowns = col;
        let paths = root_paths(shape, root);
        let vertex_rows = |v: usize| -> Vec<Vec<i64>> {
            let mut rows = vec![vec![0i64; n_unknowns]; m];
            for (k, row) in rows.iter_mut().enumerate() {
                row[k] = 1;
                for &(e, sign) in &paths[v] {
                    row[length_col[e].unwrap()] += sign * directions[e].0[k];
                }
            }
            rows
        };
        let rows = sites
            .iter()
            .enumerate()
            .map(|(s, site)| match *site {
                Mark::Vertex(v) => vertex_rows(v),
                Mark::Edge { edge, .. } => {
                    let mut r = vertex_rows(shape.edges[edge].tail);
                    let c = offset_col[s].unwrap();
                    for (k, row) in r.iter_mut().enumerate() {
                        row[c] += directions[edge].0[k];
                    }
                    r
                }
            })
            .collect();
        SiteSystem { m, root, n_unknowns, length_col, offset_col, rows, paths }
    }

    /// The square system of a plane type: both coordinates of every site.
    pub fn plane_matrix(&self) -> Matrix {
        let mut a = Matrix::zeros(self.rows.len() * self.m, self.n_unknowns);
        for (s, rows) in self.rows.iter().enumerate() {
            for (k, row) in rows.iter().enumerate() {
                for (c, &v) in row.iter().enumerate() {
                    if v != 0 {
                        a.set_int(s * self.m + k, c, v);
                    }
                }
            }
        }
        a
    }
}

/// Where a solution of a cell's linear system lies relative to the cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Interiority {
    Interior,
    /// Some length or offset is negative, or offsets are out of order.
    Outside,
    /// No strict violation, but some length, offset or offset gap vanishes.
    Boundary,
}

/// Classify a solution vector against the cell inequalities: positive finite
/// lengths, and `0 < s_1 < s_2 < … (< length)` for the points on each edge.
pub fn interiority(shape: &TreeShape, sites: &[Site], sys: &SiteSystem, u: &[Q]) -> Interiority {
    let mut boundary = false;
    let mut check = |lo: &Q, hi: &Q| {
        if hi < lo {
            return false;
        }
        if hi == lo {
            boundary = true;
        }
        true
    };
    let zero = Q::zero();
    for e in shape.finite_edges() {
        if !check(&zero, &u[sys.length_col[e].unwrap()]) {
            return Interiority::Outside;
        }
    }
    for e in 0..shape.edges.len() {
        let mut on_edge: Vec<(usize, &Q)> = sites
            .iter()
            .enumerate()
            .filter_map(|(s, site)| match *site {
                Mark::Edge { edge, slot } if edge == e => Some((slot, &u[sys.offset_col[s].unwrap()])),
                _ => None,
            })
            .collect();
        if on_edge.is_empty() {
            continue;
        }
        on_edge.sort_by_key(|&(slot, _)| slot);
        let mut prev = &zero;
        for &(_, off) in &on_edge {
            if !check(prev, off) {
                return Interiority::Outside;
            }
            prev = off;
        }
        if let Some(c) = sys.length_col[e] {
            if !check(prev, &u[c]) {
                return Interiority::Outside;
            }
        }
    }
    if boundary {
        Interiority::Boundary
    } else {
        Interiority::Interior
    }
}

/// A solved curve: a marked type with exact metric data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddedCurve {
    pub ty: MarkedTreeType,
    pub root_vertex: usize,
    pub root_position: Vec<Q>,
    /// Lengths of finite edges; `None` for ends.
    pub edge_lengths: Vec<Option<Q>>,
    /// Offset of each edge point from the tail of its edge; `None` for
    /// points at vertices.
    pub marked_offsets: Vec<Option<Q>>,
}

impl EmbeddedCurve {
    /// Assemble from a solution of the system built with `sites = ty.marks`.
    pub fn from_solution(ty: MarkedTreeType, sys: &SiteSystem, u: &[Q]) -> Self {
        let root_position = u[..sys.m].to_vec();
        let edge_lengths = sys.length_col.iter().map(|c| c.map(|c| u[c].clone())).collect();
        let marked_offsets = sys.offset_col.iter().map(|c| c.map(|c| u[c].clone())).collect();
        EmbeddedCurve { ty, root_vertex: sys.root, root_position, edge_lengths, marked_offsets }
    }

    pub fn dim(&self) -> usize {
        self.root_position.len()
    }

    /// Position of internal vertex `v`, by walking from the root.
    pub fn vertex_position(&self, v: usize) -> Vec<Q> {
        let mut pos = self.root_position.clone();
        for (e, sign) in root_paths(&self.ty.shape, self.root_vertex).swap_remove(v) {
            let len = self.edge_lengths[e].as_ref().expect("finite edge without length");
            for (k, c) in pos.iter_mut().enumerate() {
                *c += len * Q::from_integer((sign * self.ty.directions[e].0[k]).into());
            }
        }
        pos
    }

    /// Image of point `p`.
    pub fn point_position(&self, p: usize) -> Vec<Q> {
        match self.ty.marks[p] {
            Mark::Vertex(v) => self.vertex_position(v),
            Mark::Edge { edge, .. } => {
                let base = self.vertex_position(self.ty.shape.edges[edge].tail);
                let off = self.marked_offsets[p].as_ref().unwrap();
                base.iter()
                    .zip(&self.ty.directions[edge].0)
                    .map(|(b, &d)| b + off * Q::from_integer(d.into()))
                    .collect()
            }
        }
    }

    pub fn to_json(&self) -> CurveJson {
        let s = |q: &Q| q.to_string();
        CurveJson {
            shape: (*self.ty.shape).clone(),
            marks: self.ty.marks.clone(),
            directions: (*self.ty.directions).clone(),
            root_vertex: self.root_vertex,
            root_position: self.root_position.iter().map(s).collect(),
            vertex_positions: (0..self.ty.shape.n_vertices)
                .map(|v| self.vertex_position(v).iter().map(s).collect())
                .collect(),
            edge_lengths: self.edge_lengths.iter().map(|l| l.as_ref().map(s)).collect(),
            marked_offsets: self.marked_offsets.iter().map(|o| o.as_ref().map(s)).collect(),
        }
    }
}

/// JSON form of a solved curve, with rationals written as `"p/q"` strings.
#[derive(Clone, Debug, Serialize)]
pub struct CurveJson {
    pub shape: TreeShape,
    pub marks: Vec<Mark>,
    pub directions: Vec<IntVector>,
    pub root_vertex: usize,
    pub root_position: Vec<String>,
    pub vertex_positions: Vec<Vec<String>>,
    pub edge_lengths: Vec<Option<String>>,
    pub marked_offsets: Vec<Option<String>>,
}

/// Orientation of the complement of the points: points are sources, ends
/// point to infinity, unmarked vertices have exactly two incoming edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularOrientation {
    /// Incoming edges at each internal vertex (empty for marked vertices).
    pub incoming: Vec<Vec<usize>>,
    /// Outgoing edges at each internal vertex.
    pub outgoing: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrientationFailure {
    /// A piece of the complement has no end.
    BoundedComponent,
    /// An unmarked vertex ends up with a number of incoming edges other than 2.
    Incoming { vertex: usize, count: usize },
    /// Propagation stops with edges left unoriented.
    Stalled,
    /// The two incoming edges at a vertex are parallel.
    Collinear { vertex: usize },
}

/// Regular orientation of a type (it depends only on the combinatorics and
/// the edge directions).
pub fn regular_orientation(t: &MarkedTreeType) -> Result<RegularOrientation, OrientationFailure> {
    let shape = &t.shape;
    let nv = shape.n_vertices;
    let marked: Vec<bool> = (0..nv).map(|v| t.point_at_vertex(v).is_some()).collect();
    // into_head[e]: Some(true) when e flows tail -> head near the head,
    // for the pieces adjacent to each endpoint
    // at_tail[e] = Some(true) if e is incoming at its tail vertex
    let mut in_at_tail: Vec<Option<bool>> = vec![None; shape.edges.len()];
    let mut in_at_head: Vec<Option<bool>> = vec![None; shape.edges.len()];
    for (e, edge) in shape.edges.iter().enumerate() {
        let pts = t.points_on_edge(e);
        let head_vertex = match edge.head {
            Node::Vertex(h) => Some(h),
            Node::Leaf(_) => None,
        };
        let tail_marked = marked[edge.tail];
        let head_marked = head_vertex.is_some_and(|h| marked[h]);
        match pts.len() {
            0 => {
                if tail_marked && head_marked {
                    return Err(OrientationFailure::BoundedComponent);
                }
                if tail_marked || head_vertex.is_none() {
                    in_at_tail[e] = Some(false);
                    in_at_head[e] = Some(true);
                } else if head_marked {
                    in_at_tail[e] = Some(true);
                    in_at_head[e] = Some(false);
                }
            }
            1 => {
                if tail_marked || head_marked {
                    return Err(OrientationFailure::BoundedComponent);
                }
                in_at_tail[e] = Some(true);
                in_at_head[e] = Some(true);
            }
            _ => return Err(OrientationFailure::BoundedComponent),
        }
    }
    let count_in = |v: usize, at_tail: &[Option<bool>], at_head: &[Option<bool>]| -> (usize, usize) {
        let mut incoming = 0;
        let mut unknown = 0;
        for &e in &shape.incident[v] {
            let s = if shape.edges[e].tail == v { at_tail[e] } else { at_head[e] };
            match s {
                Some(true) => incoming += 1,
                None => unknown += 1,
                Some(false) => {}
            }
        }
        (incoming, unknown)
    };
    loop {
        let mut changed = false;
        for v in (0..nv).filter(|&v| !marked[v]) {
            let (incoming, unknown) = count_in(v, &in_at_tail, &in_at_head);
            if incoming > 2 {
                return Err(OrientationFailure::Incoming { vertex: v, count: incoming });
            }
            if incoming == 2 && unknown > 0 {
                for &e in &shape.incident[v] {
                    if shape.edges[e].tail == v && in_at_tail[e].is_none() {
                        in_at_tail[e] = Some(false);
                        in_at_head[e] = Some(true);
                    } else if shape.edges[e].tail != v && in_at_head[e].is_none() {
                        in_at_head[e] = Some(false);
                        in_at_tail[e] = Some(true);
                    }
                }
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let mut incoming = vec![Vec::new(); nv];
    let mut outgoing = vec![Vec::new(); nv];
    for v in 0..nv {
        for &e in &shape.incident[v] {
            let s = if shape.edges[e].tail == v { in_at_tail[e] } else { in_at_head[e] };
            match s {
                Some(true) => incoming[v].push(e),
                Some(false) => outgoing[v].push(e),
                None => return Err(OrientationFailure::Stalled),
            }
        }
        if !marked[v] {
            if incoming[v].len() != 2 {
                return Err(OrientationFailure::Incoming { vertex: v, count: incoming[v].len() });
            }
            let a = t.direction_at(incoming[v][0], Node::Vertex(v));
            let b = t.direction_at(incoming[v][1], Node::Vertex(v));
            if wedge(&a, &b).map(|w| w.is_zero()).unwrap_or(true) {
                return Err(OrientationFailure::Collinear { vertex: v });
            }
        } else if !incoming[v].is_empty() {
            return Err(OrientationFailure::Incoming { vertex: v, count: incoming[v].len() });
        }
    }
    Ok(RegularOrientation { incoming, outgoing })
}
