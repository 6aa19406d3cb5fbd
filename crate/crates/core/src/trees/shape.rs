//! Leaf-labeled trees with a prescribed census of internal valencies,
//! generated by inserting leaves one at a time.

use std::collections::BTreeMap;

use serde::Serialize;

/// Endpoint of a tree edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Node {
    Leaf(usize),
    Vertex(usize),
}

/// An edge oriented from `tail` to `head`. The tail is always an internal
/// vertex; for finite edges the tail has the smaller index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TreeEdge {
    pub tail: usize,
    pub head: Node,
}

/// A leaf-labeled tree. Edge `i < n_leaves` is the end carrying leaf `i`;
/// the remaining edges are finite, sorted by `(tail, head)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeShape {
    pub n_leaves: usize,
    pub n_vertices: usize,
    pub edges: Vec<TreeEdge>,
    /// Leaves on the head side of each edge, as a bitmask.
    #[serde(skip)]
    pub head_masks: Vec<u64>,
    /// Incident edges of each internal vertex.
    #[serde(skip)]
    pub incident: Vec<Vec<usize>>,
}

impl TreeShape {
    /// Build from an unordered edge list over `Node`s.
    pub fn from_edges(n_leaves: usize, n_vertices: usize, raw: &[(Node, Node)]) -> Self {
        let mut ends = vec![None; n_leaves];
        let mut finite = Vec::new();
        for &(a, b) in raw {
            match (a, b) {
                (Node::Vertex(v), Node::Leaf(l)) | (Node::Leaf(l), Node::Vertex(v)) => {
                    ends[l] = Some(TreeEdge { tail: v, head: Node::Leaf(l) })
                }
                (Node::Vertex(u), Node::Vertex(w)) => {
                    finite.push(TreeEdge { tail: u.min(w), head: Node::Vertex(u.max(w)) })
                }
                _ => panic!("edge between two leaves"),
            }
        }
        finite.sort_by_key(|e| (e.tail, e.head));
        let mut edges: Vec<TreeEdge> = ends.into_iter().map(|e| e.expect("leaf without edge")).collect();
        edges.extend(finite);
        let mut shape = TreeShape { n_leaves, n_vertices, edges, head_masks: Vec::new(), incident: Vec::new() };
        shape.index();
        shape
    }

    fn index(&mut self) {
        let mut incident = vec![Vec::new(); self.n_vertices];
        for (i, e) in self.edges.iter().enumerate() {
            incident[e.tail].push(i);
            if let Node::Vertex(h) = e.head {
                incident[h].push(i);
            }
        }
        self.incident = incident;
        self.head_masks = (0..self.edges.len()).map(|e| self.side_mask(e)).collect();
    }

    /// Leaves reachable from the head of `e` without crossing `e`.
    fn side_mask(&self, e: usize) -> u64 {
        let mut mask = 0u64;
        let mut stack = vec![(self.edges[e].head, e)];
        while let Some((node, from)) = stack.pop() {
            match node {
                Node::Leaf(l) => mask |= 1 << l,
                Node::Vertex(v) => {
                    for &f in &self.incident[v] {
                        if f != from {
                            stack.push((self.other_end(f, Node::Vertex(v)), f));
                        }
                    }
                }
            }
        }
        mask
    }

    pub fn other_end(&self, e: usize, node: Node) -> Node {
        let edge = self.edges[e];
        if node == Node::Vertex(edge.tail) {
            edge.head
        } else {
            Node::Vertex(edge.tail)
        }
    }

    pub fn is_end(&self, e: usize) -> bool {
        e < self.n_leaves
    }

    pub fn valency(&self, v: usize) -> usize {
        self.incident[v].len()
    }

    pub fn finite_edges(&self) -> std::ops::Range<usize> {
        self.n_leaves..self.edges.len()
    }

    /// Leaves on the far side of `e` as seen from its endpoint `from`.
    pub fn far_mask(&self, e: usize, from: Node) -> u64 {
        if from == Node::Vertex(self.edges[e].tail) {
            self.head_masks[e]
        } else {
            self.all_leaves() & !self.head_masks[e]
        }
    }

    pub fn all_leaves(&self) -> u64 {
        (1u64 << self.n_leaves) - 1
    }

    /// Splits of the finite edges, normalized to the side without leaf 0.
    /// A tree is determined by this set.
    pub fn split_key(&self) -> Vec<u64> {
        let mut key: Vec<u64> = self
            .finite_edges()
            .map(|e| {
                let m = self.head_masks[e];
                if m & 1 == 1 {
                    self.all_leaves() & !m
                } else {
                    m
                }
            })
            .collect();
        key.sort_unstable();
        key
    }
}

/// All leaf-labeled trees on `n_leaves` leaves whose internal vertices have
/// exactly the valencies in `census` (valency -> count).
pub fn tree_shapes(n_leaves: usize, census: &BTreeMap<usize, usize>) -> Vec<TreeShape> {
    assert!(n_leaves >= 3 && n_leaves <= 63, "tree shapes need 3..=63 leaves");
    if census.keys().any(|&d| d < 3) {
        return Vec::new();
    }
    let target_ge = |t: usize| census.iter().filter(|(&d, _)| d >= t).map(|(_, &c)| c).sum::<usize>();
    let max_deg = census.keys().copied().max().unwrap_or(3);
    let target: Vec<usize> = (0..=max_deg + 1).map(target_ge).collect();
    let mut out = Vec::new();
    let edges = vec![
        (Node::Vertex(0), Node::Leaf(0)),
        (Node::Vertex(0), Node::Leaf(1)),
        (Node::Vertex(0), Node::Leaf(2)),
    ];
    grow(n_leaves, 3, edges, vec![3], &target, census, &mut out);
    out
}

fn feasible(degrees: &[usize], target_ge: &[usize]) -> bool {
    let max_t = target_ge.len() - 1;
    for t in 3..=max_t {
        let have = degrees.iter().filter(|&&d| d >= t).count();
        if have > target_ge[t] {
            return false;
        }
    }
    degrees.iter().all(|&d| d < max_t)
}

fn grow(
    n_leaves: usize,
    next: usize,
    edges: Vec<(Node, Node)>,
    degrees: Vec<usize>,
    target_ge: &[usize],
    census: &BTreeMap<usize, usize>,
    out: &mut Vec<TreeShape>,
) {
    if !feasible(&degrees, target_ge) {
        return;
    }
    if next == n_leaves {
        let mut have = BTreeMap::new();
        for &d in &degrees {
            *have.entry(d).or_insert(0usize) += 1;
        }
        if &have == census {
            out.push(TreeShape::from_edges(n_leaves, degrees.len(), &edges));
        }
        return;
    }
    let leaf = Node::Leaf(next);
    // subdivide an edge with a new trivalent vertex
    for i in 0..edges.len() {
        let (a, b) = edges[i];
        let x = Node::Vertex(degrees.len());
        let mut e2 = edges.clone();
        e2[i] = (a, x);
        e2.push((x, b));
        e2.push((x, leaf));
        let mut d2 = degrees.clone();
        d2.push(3);
        grow(n_leaves, next + 1, e2, d2, target_ge, census, out);
    }
    // attach to an existing vertex
    for v in 0..degrees.len() {
        let mut e2 = edges.clone();
        e2.push((Node::Vertex(v), leaf));
        let mut d2 = degrees.clone();
        d2[v] += 1;
        grow(n_leaves, next + 1, e2, d2, target_ge, census, out);
    }
}
