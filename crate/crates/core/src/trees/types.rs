//! Enumeration of marked types: tree shapes, sites for the marked points,
//! and assignments of the ordered points to the sites.

use std::sync::Arc;

use itertools::Itertools;

use super::shape::{tree_shapes, Node, TreeShape};
use super::vtype::VType;
use super::{Mark, MarkedTreeType};
use crate::error::Result;
use crate::lattice::Degree;

/// A place for one marked point; the same representation as [`Mark`].
pub type Site = Mark;

/// Visit every tree shape of the census together with every unordered choice
/// of sites for the points: `n_i` distinct vertices of valency `i + 2` and a
/// multiset of `n_0` edges (repeated edges get consecutive slots). Site sets
/// rejected by `keep` are skipped.
pub fn for_each_site_set<K, F>(n_leaves: usize, vt: &VType, keep: K, mut visit: F)
where
    K: Fn(&TreeShape, &[Site]) -> bool,
    F: FnMut(&Arc<TreeShape>, &[Site]),
{
    let n0 = vt.n0();
    for shape in tree_shapes(n_leaves, &vt.valency_census()) {
        let shape = Arc::new(shape);
        let vertex_choices: Vec<Vec<Vec<usize>>> = vt
            .n_bar
            .iter()
            .filter(|(&i, _)| i >= 1)
            .map(|(&i, &c)| {
                let pool: Vec<usize> = (0..shape.n_vertices).filter(|&v| shape.valency(v) == i + 2).collect();
                pool.into_iter().combinations(c).collect()
            })
            .collect();
        let vertex_sets: Vec<Vec<usize>> = if vertex_choices.is_empty() {
            vec![Vec::new()]
        } else {
            vertex_choices.into_iter().multi_cartesian_product().map(|c| c.concat()).collect()
        };
        for vs in &vertex_sets {
            for edges in (0..shape.edges.len()).combinations_with_replacement(n0) {
                let mut sites: Vec<Site> = vs.iter().map(|&v| Mark::Vertex(v)).collect();
                let mut prev: Option<usize> = None;
                let mut slot = 0;
                for &e in &edges {
                    slot = if prev == Some(e) { slot + 1 } else { 0 };
                    prev = Some(e);
                    sites.push(Mark::Edge { edge: e, slot });
                }
                if keep(&shape, &sites) {
                    visit(&shape, &sites);
                }
            }
        }
    }
}

/// Every marked type of the labeled degree with census `vt`: each site set
/// combined with each bijection from the ordered points to the sites.
pub fn enumerate_types<K, F>(degree: &Degree, vt: &VType, keep: K, mut visit: F) -> Result<()>
where
    K: Fn(&TreeShape, &[Site]) -> bool,
    F: FnMut(MarkedTreeType),
{
    vt.check(degree.len())?;
    let n = vt.n();
    for_each_site_set(degree.len(), vt, keep, |shape, sites| {
        let directions = Arc::new(super::edge_directions(shape, degree));
        for perm in (0..n).permutations(n) {
            let marks = perm.iter().map(|&s| sites[s]).collect();
            visit(MarkedTreeType { shape: shape.clone(), marks, directions: directions.clone() });
        }
    });
    Ok(())
}

/// `true` when every component of the curve minus the sites contains an end.
/// A bounded component cannot be oriented with the points as sources, so such
/// site sets never carry regular curves.
pub fn bounded_component_free(shape: &TreeShape, sites: &[Site]) -> bool {
    let l = shape.n_leaves;
    let mut parent: Vec<usize> = (0..l + shape.n_vertices).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    let marked_vertex = |v: usize| sites.contains(&Mark::Vertex(v));
    let node_id = |n: Node| -> Option<usize> {
        match n {
            Node::Leaf(i) => Some(i),
            Node::Vertex(v) if !marked_vertex(v) => Some(l + v),
            Node::Vertex(_) => None,
        }
    };
    for (e, edge) in shape.edges.iter().enumerate() {
        let on_edge = sites.iter().filter(|s| matches!(s, Mark::Edge { edge, .. } if *edge == e)).count();
        let tail = node_id(Node::Vertex(edge.tail));
        let head = node_id(edge.head);
        // pieces strictly between two removed points are bounded
        if on_edge >= 2 {
            return false;
        }
        if on_edge == 0 {
            match (tail, head) {
                (Some(a), Some(b)) => {
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    parent[ra] = rb;
                }
                (None, None) => return false,
                _ => {}
            }
        } else {
            // one point on the edge: each side piece hangs off its endpoint
            if tail.is_none() || head.is_none() {
                return false;
            }
        }
    }
    let mut has_leaf = vec![false; parent.len()];
    for i in 0..l {
        let r = find(&mut parent, i);
        has_leaf[r] = true;
    }
    (0..shape.n_vertices)
        .filter(|&v| !marked_vertex(v))
        .all(|v| {
            let r = find(&mut parent, l + v);
            has_leaf[r]
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn line() -> Degree {
        Degree::new(2, vec![vec![-1, 0], vec![0, -1], vec![1, 1]])
    }

    #[test]
    fn three_ends_two_points() {
        let mut types = Vec::new();
        enumerate_types(&line(), &VType::trivalent(3), |_, _| true, |t| types.push(t)).unwrap();
        // ordered points on 3 edges: 3 * 4 = 12 placements
        assert_eq!(types.len(), 12);
        let keys: BTreeSet<_> = types.iter().map(|t| t.canonical_key()).collect();
        assert_eq!(keys.len(), 12);
        for t in &types {
            assert_eq!(t.vtype(), VType::trivalent(3));
        }
    }

    #[test]
    fn four_leaves_unmarked() {
        let d = Degree::new(2, vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]]);
        let vt = VType::from_pairs(&[(1, 2)], &[]);
        let mut count = 0;
        enumerate_types(&d, &vt, |_, _| true, |_| count += 1).unwrap();
        assert_eq!(count, 3);
    }

    #[test]
    fn counts_match_structure() {
        let d = Degree::new(2, vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]]);
        for vt in [
            VType::trivalent(4),
            VType::from_pairs(&[(2, 1)], &[(0, 2)]),
            VType::from_pairs(&[(1, 1)], &[(0, 1), (1, 1)]),
        ] {
            let mut seen = BTreeSet::new();
            let mut total = 0usize;
            enumerate_types(&d, &vt, |_, _| true, |t| {
                assert_eq!(t.vtype(), vt);
                assert_eq!(t.shape.edges.len() - t.shape.n_leaves, vt.finite_edges());
                assert_eq!(t.shape.n_vertices, vt.vertex_count());
                seen.insert(t.canonical_key());
                total += 1;
            })
            .unwrap();
            assert_eq!(seen.len(), total, "duplicate types for {vt:?}");
        }
    }

    #[test]
    fn rising_factorial_placements() {
        // n0 ordered points on E edges of one tree: E (E+1) ... (E+n0-1)
        let d = Degree::new(2, vec![vec![1, 0], vec![0, 1], vec![-1, 0], vec![0, -1]]);
        let vt = VType::from_pairs(&[(1, 2)], &[(0, 3)]);
        let mut count = 0usize;
        enumerate_types(&d, &vt, |_, _| true, |_| count += 1).unwrap();
        let e = 5usize;
        assert_eq!(count, 3 * e * (e + 1) * (e + 2));
    }

    #[test]
    fn bounded_components() {
        let shape = &tree_shapes(4, &std::collections::BTreeMap::from([(3, 2)]))[0];
        let finite = shape.n_leaves;
        // two points on the finite edge enclose a bounded piece
        let two = [Mark::Edge { edge: finite, slot: 0 }, Mark::Edge { edge: finite, slot: 1 }];
        assert!(!bounded_component_free(shape, &two));
        // one point on every end leaves the two vertices without ends
        let ends: Vec<Site> = (0..4).map(|e| Mark::Edge { edge: e, slot: 0 }).collect();
        assert!(!bounded_component_free(shape, &ends));
        let ok = [Mark::Edge { edge: 0, slot: 0 }, Mark::Edge { edge: finite, slot: 0 }];
        assert!(bounded_component_free(shape, &ok));
    }
}
