//! Combinatorial types of marked rational tropical curves.

pub mod shape;
pub mod types;
pub mod vtype;

use std::sync::Arc;

use serde::Serialize;

use crate::lattice::{Degree, IntVector};
pub use shape::{tree_shapes, Node, TreeEdge, TreeShape};
pub use types::{bounded_component_free, enumerate_types, for_each_site_set, Site};
pub use vtype::VType;

/// Position of a marked point on a type: inside an edge (with its rank along
/// the edge, counted from the tail) or at an internal vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Mark {
    Edge { edge: usize, slot: usize },
    Vertex(usize),
}

/// A leaf-labeled tree together with the placement of the ordered marked
/// points and the edge directions induced by the labeled degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MarkedTreeType {
    pub shape: Arc<TreeShape>,
    /// `marks[i]` is the position of point `i`.
    pub marks: Vec<Mark>,
    /// Directing vector of every edge, centered at its tail.
    pub directions: Arc<Vec<IntVector>>,
}

impl MarkedTreeType {
    pub fn new(shape: Arc<TreeShape>, marks: Vec<Mark>, degree: &Degree) -> Self {
        let directions = Arc::new(edge_directions(&shape, degree));
        MarkedTreeType { shape, marks, directions }
    }

    pub fn n_points(&self) -> usize {
        self.marks.len()
    }

    /// Directing vector of edge `e` centered at its endpoint `at`.
    pub fn direction_at(&self, e: usize, at: Node) -> IntVector {
        if at == Node::Vertex(self.shape.edges[e].tail) {
            self.directions[e].clone()
        } else {
            -&self.directions[e]
        }
    }

    /// The point sitting at vertex `v`, if any.
    pub fn point_at_vertex(&self, v: usize) -> Option<usize> {
        self.marks.iter().position(|m| *m == Mark::Vertex(v))
    }

    /// Points on edge `e`, ordered by slot.
    pub fn points_on_edge(&self, e: usize) -> Vec<usize> {
        let mut pts: Vec<(usize, usize)> = self
            .marks
            .iter()
            .enumerate()
            .filter_map(|(p, m)| match *m {
                Mark::Edge { edge, slot } if edge == e => Some((slot, p)),
                _ => None,
            })
            .collect();
        pts.sort_unstable();
        pts.into_iter().map(|(_, p)| p).collect()
    }

    /// Census of this type: `(m_bar, n_bar)`.
    pub fn vtype(&self) -> VType {
        let mut m = std::collections::BTreeMap::new();
        let mut n = std::collections::BTreeMap::new();
        for v in 0..self.shape.n_vertices {
            let i = self.shape.valency(v) - 2;
            let target = if self.point_at_vertex(v).is_some() { &mut n } else { &mut m };
            *target.entry(i).or_insert(0) += 1;
        }
        let n0 = self.marks.iter().filter(|m| matches!(m, Mark::Edge { .. })).count();
        n.insert(0, n0);
        VType::new(m, n)
    }

    /// The tree subdivided at edge marks. Nodes are leaves `0..L`, internal
    /// vertices `L..L+V`, then one node per edge mark; the second component
    /// gives the point carried by each node.
    pub fn subdivided(&self) -> (Vec<Vec<usize>>, Vec<Option<usize>>) {
        let shape = &self.shape;
        let (l, v) = (shape.n_leaves, shape.n_vertices);
        let node = |n: Node| match n {
            Node::Leaf(i) => i,
            Node::Vertex(i) => l + i,
        };
        let mut adj = vec![Vec::new(); l + v];
        let mut point = vec![None; l + v];
        for x in 0..v {
            point[l + x] = self.point_at_vertex(x);
        }
        for (e, edge) in shape.edges.iter().enumerate() {
            let mut prev = l + edge.tail;
            for p in self.points_on_edge(e) {
                let id = adj.len();
                adj.push(Vec::new());
                point.push(Some(p));
                adj[prev].push(id);
                adj[id].push(prev);
                prev = id;
            }
            let h = node(edge.head);
            adj[prev].push(h);
            adj[h].push(prev);
        }
        (adj, point)
    }

    /// Description independent of vertex numbering: for every non-leaf node of
    /// the subdivided tree, its point (if any) and the sorted
    /// `(leaf mask, point mask)` pairs of the branches around it.
    pub fn canonical_key(&self) -> Vec<(usize, Vec<(u64, u64)>)> {
        let (adj, point) = self.subdivided();
        let l = self.shape.n_leaves;
        let branch = |from: usize, start: usize| -> (u64, u64) {
            let (mut leaves, mut pts) = (0u64, 0u64);
            let mut stack = vec![(start, from)];
            while let Some((x, parent)) = stack.pop() {
                if x < l {
                    leaves |= 1 << x;
                }
                if let Some(p) = point[x] {
                    pts |= 1 << p;
                }
                stack.extend(adj[x].iter().filter(|&&y| y != parent).map(|&y| (y, x)));
            }
            (leaves, pts)
        };
        let mut key: Vec<(usize, Vec<(u64, u64)>)> = (l..adj.len())
            .map(|x| {
                let mut b: Vec<(u64, u64)> = adj[x].iter().map(|&y| branch(x, y)).collect();
                b.sort_unstable();
                (point[x].unwrap_or(usize::MAX), b)
            })
            .collect();
        key.sort_unstable();
        key
    }
}

/// Direction of every edge at its tail: the sum of the labeled degree vectors
/// over the leaves on the head side.
pub fn edge_directions(shape: &TreeShape, degree: &Degree) -> Vec<IntVector> {
    shape.head_masks.iter().map(|&mask| degree.mask_sum(mask)).collect()
}

/// Directing vector of edge `e` of `t` centered at `endpoint`.
pub fn edge_direction(t: &MarkedTreeType, e: usize, endpoint: Node) -> IntVector {
    t.direction_at(e, endpoint)
}

/// `|G| = Π_b (multiplicity of b)!`.
pub fn symmetry_factor(d: &Degree) -> u64 {
    d.multiplicities().values().map(|&k| (1..=k as u64).product::<u64>()).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    #[test]
    fn symmetry_factors() {
        assert_eq!(symmetry_factor(&Degree::new(2, vec![vec![1, 0], vec![0, 1], vec![-1, -1]])), 1);
        assert_eq!(symmetry_factor(&Degree::projective(2)), 8);
        assert_eq!(symmetry_factor(&Degree::projective(3)), 216);
    }

    #[test]
    fn directions_balance() {
        let d = Degree::new(2, vec![vec![1, 0], vec![0, 1], vec![-2, 1], vec![1, -2]]);
        for shape in tree_shapes(4, &BTreeMap::from([(3, 2)])) {
            let t = MarkedTreeType::new(Arc::new(shape), vec![], &d);
            for e in 0..d.len() {
                assert_eq!(edge_direction(&t, e, Node::Vertex(t.shape.edges[e].tail)), d.vectors[e]);
            }
            for v in 0..t.shape.n_vertices {
                let s = t.shape.incident[v]
                    .iter()
                    .fold(IntVector::zero(2), |acc, &e| &acc + &t.direction_at(e, Node::Vertex(v)));
                assert!(s.is_zero());
            }
            for e in t.shape.finite_edges() {
                let edge = t.shape.edges[e];
                assert_eq!(t.direction_at(e, edge.head), -&t.direction_at(e, Node::Vertex(edge.tail)));
                // the central edge points to the sum of the leaves beyond it
                assert_eq!(t.directions[e], d.mask_sum(t.shape.head_masks[e]));
            }
        }
    }
}
