//! Integer lattice algebra: vectors, wedge products, degrees and Newton polygons.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An integer vector in `Z^m`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntVector(pub Vec<i64>);

impl IntVector {
    pub fn new(entries: Vec<i64>) -> Self {
        IntVector(entries)
    }

    pub fn zero(m: usize) -> Self {
        IntVector(vec![0; m])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn scale(&self, k: i64) -> Self {
        IntVector(self.0.iter().map(|x| x * k).collect())
    }

    /// gcd of the entries; the lattice length of the vector.
    pub fn content(&self) -> i64 {
        self.0.iter().fold(0i64, |g, &x| g.gcd(&x))
    }

    /// 2x2 determinant; only meaningful for `m = 2`.
    pub fn det2(&self, other: &IntVector) -> i64 {
        self.0[0] * other.0[1] - self.0[1] * other.0[0]
    }
}

impl fmt::Debug for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl<'a> Add for &'a IntVector {
    type Output = IntVector;
    fn add(self, rhs: &IntVector) -> IntVector {
        IntVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl<'a> Sub for &'a IntVector {
    type Output = IntVector;
    fn sub(self, rhs: &IntVector) -> IntVector {
        IntVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl<'a> Neg for &'a IntVector {
    type Output = IntVector;
    fn neg(self) -> IntVector {
        IntVector(self.0.iter().map(|a| -a).collect())
    }
}

/// Element of `Λ²Z^m`, coordinates in the basis `e_i ∧ e_j`, `i < j`, in
/// lexicographic order of `(i, j)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WedgeIndex(pub Vec<i64>);

impl WedgeIndex {
    pub fn zero(m: usize) -> Self {
        WedgeIndex(vec![0; m * (m - 1) / 2])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn neg(&self) -> Self {
        WedgeIndex(self.0.iter().map(|x| -x).collect())
    }

    pub fn add(&self, other: &WedgeIndex) -> Self {
        WedgeIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Debug for WedgeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

pub fn wedge(a: &IntVector, b: &IntVector) -> Result<WedgeIndex> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: b.dim() });
    }
    let m = a.dim();
    let mut out = Vec::with_capacity(m * (m.saturating_sub(1)) / 2);
    for i in 0..m {
        for j in i + 1..m {
            out.push(a.0[i] * b.0[j] - a.0[j] * b.0[i]);
        }
    }
    Ok(WedgeIndex(out))
}

/// A balanced multiset of nonzero integer vectors, kept in a fixed order so it
/// doubles as the labeled degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Degree {
    pub m: usize,
    pub vectors: Vec<IntVector>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeReport {
    pub dimension_ok: bool,
    pub nonzero: bool,
    pub balanced: bool,
    pub span_dim: usize,
    pub nondegenerate: bool,
    pub valid: bool,
}

impl Degree {
    pub fn new(m: usize, vectors: Vec<Vec<i64>>) -> Self {
        Degree { m, vectors: vectors.into_iter().map(IntVector).collect() }
    }

    /// `k` copies each of `(-1,0)`, `(0,-1)`, `(1,1)`: plane curves of degree `k`.
    pub fn projective(k: usize) -> Self {
        let mut v = Vec::new();
        for _ in 0..k {
            v.push(vec![-1, 0]);
        }
        for _ in 0..k {
            v.push(vec![0, -1]);
        }
        for _ in 0..k {
            v.push(vec![1, 1]);
        }
        Degree::new(2, v)
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn sum(&self) -> IntVector {
        self.vectors.iter().fold(IntVector::zero(self.m), |acc, v| &acc + v)
    }

    /// Sum of the vectors whose indices are set in `mask`.
    pub fn mask_sum(&self, mask: u64) -> IntVector {
        let mut acc = IntVector::zero(self.m);
        for (i, v) in self.vectors.iter().enumerate() {
            if mask >> i & 1 == 1 {
                for (a, b) in acc.0.iter_mut().zip(&v.0) {
                    *a += b;
                }
            }
        }
        acc
    }

    pub fn validate(&self, require_nondegenerate: bool) -> DegreeReport {
        let dimension_ok = self.vectors.iter().all(|v| v.dim() == self.m);
        let nonzero = self.vectors.iter().all(|v| !v.is_zero());
        let balanced = dimension_ok && self.sum().is_zero();
        let span_dim = if dimension_ok { rank(&self.vectors) } else { 0 };
        let nondegenerate = span_dim == self.m;
        let valid = dimension_ok && nonzero && balanced && (!require_nondegenerate || nondegenerate);
        DegreeReport { dimension_ok, nonzero, balanced, span_dim, nondegenerate, valid }
    }

    /// Validation that returns the first failure as an error.
    pub fn check(&self, require_nondegenerate: bool) -> Result<()> {
        let r = self.validate(require_nondegenerate);
        if !r.dimension_ok {
            return Err(Error::Invalid("degree vectors have the wrong dimension".into()));
        }
        if !r.nonzero {
            return Err(Error::ZeroVector);
        }
        if !r.balanced {
            return Err(Error::Unbalanced);
        }
        if require_nondegenerate && !r.nondegenerate {
            return Err(Error::Invalid(format!("degenerate degree: span dimension {}", r.span_dim)));
        }
        Ok(())
    }

    /// Multiplicities of the distinct vectors.
    pub fn multiplicities(&self) -> BTreeMap<IntVector, usize> {
        let mut counts = BTreeMap::new();
        for v in &self.vectors {
            *counts.entry(v.clone()).or_insert(0) += 1;
        }
        counts
    }

    pub fn has_even_vector(&self) -> bool {
        self.vectors.iter().any(|v| v.0.iter().all(|x| x % 2 == 0))
    }
}

/// Rank of a set of integer vectors, by fraction-free elimination.
pub fn rank(vectors: &[IntVector]) -> usize {
    let mut rows: Vec<Vec<i128>> = vectors.iter().map(|v| v.0.iter().map(|&x| x as i128).collect()).collect();
    let cols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let (a, b) = (rows[r][c], rows[i][c]);
                for k in 0..cols {
                    rows[i][k] = rows[i][k] * a - rows[r][k] * b;
                }
                let g = rows[i].iter().fold(0i128, |g, &x| g.gcd(&x));
                if g > 1 {
                    rows[i].iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        r += 1;
    }
    r
}

/// All sums of nonempty proper sub-multisets of the degree, zero removed.
pub fn directing_set(d: &Degree) -> BTreeSet<IntVector> {
    let distinct: Vec<(IntVector, usize)> = d.multiplicities().into_iter().collect();
    let total = d.len();
    let mut out = BTreeSet::new();
    let mut counts = vec![0usize; distinct.len()];
    loop {
        let size: usize = counts.iter().sum();
        if size > 0 && size < total {
            let mut s = IntVector::zero(d.m);
            for ((v, _), &c) in distinct.iter().zip(&counts) {
                s = &s + &v.scale(c as i64);
            }
            if !s.is_zero() {
                out.insert(s);
            }
        }
        // odometer over 0..=multiplicity
        let mut i = 0;
        while i < counts.len() {
            if counts[i] < distinct[i].1 {
                counts[i] += 1;
                break;
            }
            counts[i] = 0;
            i += 1;
        }
        if i == counts.len() {
            break;
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticePolygon {
    pub vertices: Vec<(i64, i64)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NewtonPolygon {
    pub polygon: LatticePolygon,
    pub twice_area: i64,
    pub interior: i64,
    pub boundary: i64,
}

fn half_plane(v: &IntVector) -> u8 {
    let (x, y) = (v.0[0], v.0[1]);
    if y > 0 || (y == 0 && x > 0) {
        0
    } else {
        1
    }
}

/// Counterclockwise angular order starting from the positive x-axis. Parallel
/// vectors compare equal, so a stable sort keeps their input order.
pub fn angle_cmp(a: &IntVector, b: &IntVector) -> Ordering {
    half_plane(a).cmp(&half_plane(b)).then_with(|| 0.cmp(&a.det2(b)))
}

pub fn newton_polygon(d: &Degree) -> Result<NewtonPolygon> {
    if d.m != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: d.m });
    }
    d.check(false)?;
    let mut sorted = d.vectors.clone();
    sorted.sort_by(angle_cmp);
    // rotate by pi/2 clockwise: (x, y) -> (y, -x)
    let edges: Vec<(i64, i64)> = sorted.iter().map(|v| (v.0[1], -v.0[0])).collect();
    let mut pts = Vec::with_capacity(edges.len());
    let (mut x, mut y) = (0i64, 0i64);
    for &(dx, dy) in &edges {
        pts.push((x, y));
        x += dx;
        y += dy;
    }
    let boundary: i64 = edges.iter().map(|&(dx, dy)| dx.gcd(&dy)).sum();
    let mut twice_area = 0i64;
    for i in 0..pts.len() {
        let (x0, y0) = pts[i];
        let (x1, y1) = pts[(i + 1) % pts.len()];
        twice_area += x0 * y1 - x1 * y0;
    }
    let twice_area = twice_area.abs();
    // keep corners only
    let n = pts.len();
    let mut vertices: Vec<(i64, i64)> = (0..n)
        .filter(|&i| {
            let (px, py) = pts[(i + n - 1) % n];
            let (cx, cy) = pts[i];
            let (nx, ny) = pts[(i + 1) % n];
            (cx - px) * (ny - cy) - (cy - py) * (nx - cx) != 0
        })
        .map(|i| pts[i])
        .collect();
    if let Some(&min) = vertices.iter().min() {
        let start = vertices.iter().position(|&p| p == min).unwrap_or(0);
        vertices.rotate_left(start);
        vertices.iter_mut().for_each(|p| *p = (p.0 - min.0, p.1 - min.1));
    }
    let (interior, boundary_pts) = if twice_area == 0 {
        (0, boundary / 2 + 1)
    } else {
        ((twice_area - boundary + 2) / 2, boundary)
    };
    Ok(NewtonPolygon { polygon: LatticePolygon { vertices }, twice_area, interior, boundary: boundary_pts })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> IntVector {
        IntVector(x.to_vec())
    }

    #[test]
    fn wedge_basics() {
        assert!(wedge(&v(&[3, 5]), &v(&[3, 5])).unwrap().is_zero());
        assert_eq!(wedge(&v(&[1, 0]), &v(&[0, 1])).unwrap().0, vec![1]);
        assert_eq!(wedge(&v(&[1, 0, 0]), &v(&[0, 1, 0])).unwrap().0, vec![1, 0, 0]);
        assert!(matches!(wedge(&v(&[1, 0]), &v(&[1, 0, 0])), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn degree_validation() {
        let r = Degree::new(2, vec![vec![1, 0], vec![0, 1], vec![-1, -1]]).validate(true);
        assert!(r.valid && r.nondegenerate);
        let r = Degree::new(2, vec![vec![1, 0], vec![-1, 0]]).validate(true);
        assert!(r.balanced && !r.nondegenerate && !r.valid);
        let r = Degree::new(2, vec![vec![1, 0], vec![0, 1]]).validate(false);
        assert!(!r.balanced && !r.valid);
    }

    #[test]
    fn directing_set_of_plane_line() {
        let d = Degree::new(2, vec![vec![1, 0], vec![0, 1], vec![-1, -1]]);
        let got = directing_set(&d);
        let want: BTreeSet<_> =
            [[1, 0], [-1, 0], [0, 1], [0, -1], [1, 1], [-1, -1]].iter().map(|x| v(x)).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn directing_set_of_space_line() {
        let d = Degree::new(3, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![-1, -1, -1]]);
        // oracle: 14 proper nonempty index subsets
        let mut want = BTreeSet::new();
        for mask in 1u64..15 {
            let s = d.mask_sum(mask);
            if !s.is_zero() {
                want.insert(s);
            }
        }
        let got = directing_set(&d);
        assert_eq!(got, want);
        // ±e_i, ±(e_i + e_j) and ±(e_1 + e_2 + e_3)
        assert_eq!(got.len(), 14);
        assert!(got.contains(&v(&[1, 1, 0])) && got.contains(&v(&[0, -1, -1])) && got.contains(&v(&[1, 1, 1])));
    }

    #[test]
    fn newton_polygons() {
        let p1 = newton_polygon(&Degree::new(2, vec![vec![-1, 0], vec![0, -1], vec![1, 1]])).unwrap();
        assert_eq!((p1.interior, p1.boundary), (0, 3));
        assert_eq!(p1.polygon.vertices.len(), 3);
        let p3 = newton_polygon(&Degree::projective(3)).unwrap();
        assert_eq!((p3.interior, p3.boundary, p3.twice_area), (1, 9, 9));
        let mut vs = p3.polygon.vertices.clone();
        vs.sort();
        // right triangle with legs 3 (the rotated image of conv{(0,0),(3,0),(0,3)})
        assert_eq!(vs, vec![(0, 0), (3, -3), (3, 0)]);
    }

    #[test]
    fn newton_polygon_start_invariance() {
        let mut d = Degree::new(2, vec![vec![1, 0], vec![1, 2], vec![-1, 1], vec![-2, -1], vec![1, -2]]);
        let base = newton_polygon(&d).unwrap();
        d.vectors.rotate_left(2);
        assert_eq!(newton_polygon(&d).unwrap(), base);
        d.vectors.reverse();
        assert_eq!(newton_polygon(&d).unwrap(), base);
    }

    #[test]
    fn newton_rejects_unbalanced() {
        assert!(newton_polygon(&Degree::new(2, vec![vec![1, 0], vec![0, 1]])).is_err());
    }
}
