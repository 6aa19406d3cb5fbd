//! Vertex census of a marked curve: unmarked vertices `m_i` and marked
//! vertices `n_i` of valency `i + 2`, plus `n_0` points inside edges.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(from = "RawVType")]
pub struct VType {
    pub m_bar: BTreeMap<usize, usize>,
    pub n_bar: BTreeMap<usize, usize>,
}

#[derive(Deserialize)]
struct RawVType {
    #[serde(default)]
    m_bar: BTreeMap<usize, usize>,
    #[serde(default)]
    n_bar: BTreeMap<usize, usize>,
}

impl From<RawVType> for VType {
    fn from(raw: RawVType) -> Self {
        VType::new(raw.m_bar, raw.n_bar)
    }
}

impl VType {
    /// Zero entries are dropped so equal census values compare and serialize equal.
    pub fn new(m_bar: BTreeMap<usize, usize>, n_bar: BTreeMap<usize, usize>) -> Self {
        VType {
            m_bar: m_bar.into_iter().filter(|&(_, c)| c > 0).collect(),
            n_bar: n_bar.into_iter().filter(|&(_, c)| c > 0).collect(),
        }
    }

    pub fn from_pairs(m: &[(usize, usize)], n: &[(usize, usize)]) -> Self {
        VType::new(m.iter().copied().collect(), n.iter().copied().collect())
    }

    /// All-trivalent census with points on edges for a degree of size `len`.
    pub fn trivalent(len: usize) -> Self {
        VType::from_pairs(&[(1, len - 2)], &[(0, len - 1)])
    }

    pub fn m(&self, i: usize) -> usize {
        self.m_bar.get(&i).copied().unwrap_or(0)
    }

    pub fn n_at(&self, i: usize) -> usize {
        self.n_bar.get(&i).copied().unwrap_or(0)
    }

    /// Number of marked points.
    pub fn n(&self) -> usize {
        self.n_bar.values().sum()
    }

    pub fn n0(&self) -> usize {
        self.n_at(0)
    }

    /// Number of ends forced by the census.
    pub fn ends(&self) -> usize {
        let s: usize = self.m_bar.iter().chain(self.n_bar.iter()).map(|(&i, &c)| i * c).sum();
        s + 2
    }

    pub fn vertex_count(&self) -> usize {
        self.m_bar.iter().filter(|(&i, _)| i >= 1).map(|(_, &c)| c).sum::<usize>()
            + self.n_bar.iter().filter(|(&i, _)| i >= 1).map(|(_, &c)| c).sum::<usize>()
    }

    pub fn finite_edges(&self) -> usize {
        self.vertex_count().saturating_sub(1)
    }

    /// Target number of internal vertices of each valency.
    pub fn valency_census(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for (&i, &c) in self.m_bar.iter().chain(self.n_bar.iter()) {
            if i >= 1 {
                *out.entry(i + 2).or_insert(0) += c;
            }
        }
        out
    }

    /// The index `i >= 2` of the single non-trivalent unmarked vertex, if any.
    pub fn special(&self) -> Option<usize> {
        self.m_bar.iter().find(|(&i, &c)| i >= 2 && c > 0).map(|(&i, _)| i)
    }

    /// Valencies of the marked points in canonical order: edge points
    /// (valency 2) first, then marked vertices by increasing valency.
    pub fn point_valencies(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (&i, &c) in &self.n_bar {
            out.extend(std::iter::repeat(i + 2).take(c));
        }
        out
    }

    /// Consistency with a degree of `len` vectors.
    pub fn check(&self, len: usize) -> Result<()> {
        if self.m_bar.contains_key(&0) {
            return Err(Error::InconsistentVType("m_0 is not defined".into()));
        }
        if self.ends() != len {
            return Err(Error::InconsistentVType(format!(
                "census forces {} ends but the degree has {len} vectors",
                self.ends()
            )));
        }
        if self.vertex_count() == 0 {
            return Err(Error::InconsistentVType("no internal vertices".into()));
        }
        Ok(())
    }

    /// Additional conditions for the cuspidal count: one more point than
    /// unmarked vertices, and at most one non-trivalent unmarked vertex.
    pub fn check_rc(&self, len: usize) -> Result<()> {
        self.check(len)?;
        let unmarked: usize = self.m_bar.values().sum();
        if self.n() != unmarked + 1 {
            return Err(Error::InconsistentVType(format!(
                "{} points but {unmarked} unmarked vertices; need one more point",
                self.n()
            )));
        }
        let multi: usize = self.m_bar.iter().filter(|(&i, _)| i >= 2).map(|(_, &c)| c).sum();
        if multi > 1 {
            return Err(Error::InconsistentVType("more than one non-trivalent unmarked vertex".into()));
        }
        Ok(())
    }

    /// Upper bound on the denominator exponent of the cuspidal invariant,
    /// `Σ_{i>=2} i (n_{2i} + n_{2i+1}) + ½ Σ_{j>=4} (j-3) m_j`, with both
    /// sums indexed by valency: a marked vertex of valency `v >= 4`
    /// contributes `floor(v/2)`, an unmarked one `(v-3)/2`.
    pub fn denominator_bound(&self) -> usize {
        let marked: usize = self.n_bar.iter().filter(|(&i, _)| i >= 2).map(|(&i, &c)| (i + 2) / 2 * c).sum();
        let unmarked: usize = self.m_bar.iter().filter(|(&i, _)| i >= 2).map(|(&i, &c)| (i - 1) * c).sum();
        marked + unmarked / 2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let vt = VType::trivalent(9);
        let s = serde_json::to_string(&vt).unwrap();
        assert_eq!(s, r#"{"m_bar":{"1":7},"n_bar":{"0":8}}"#);
        assert_eq!(serde_json::from_str::<VType>(&s).unwrap(), vt);
        let sparse: VType = serde_json::from_str(r#"{"m_bar":{"1":4,"2":0},"n_bar":{"0":5}}"#).unwrap();
        assert_eq!(sparse, VType::trivalent(6));
    }

    #[test]
    fn counts() {
        let vt = VType::from_pairs(&[(1, 2), (2, 1)], &[(0, 4)]);
        assert_eq!(vt.ends(), 6);
        assert_eq!(vt.vertex_count(), 3);
        assert_eq!(vt.special(), Some(2));
        assert!(vt.check_rc(6).is_ok());
        let marked = VType::from_pairs(&[(1, 3)], &[(0, 3), (1, 1)]);
        assert_eq!(marked.ends(), 6);
        assert!(marked.check_rc(6).is_ok());
        assert_eq!(marked.point_valencies(), vec![2, 2, 2, 3]);
        assert!(VType::trivalent(6).check(5).is_err());
        let two_special = VType::from_pairs(&[(2, 2)], &[(0, 3)]);
        assert!(two_special.check_rc(6).is_err());
    }

    #[test]
    fn denominator_bounds() {
        assert_eq!(VType::trivalent(9).denominator_bound(), 0);
        // a marked 4-valent vertex contributes 2, a marked 6-valent one 3
        assert_eq!(VType::from_pairs(&[(1, 2)], &[(0, 2), (2, 1)]).denominator_bound(), 2);
        assert_eq!(VType::from_pairs(&[(1, 4)], &[(0, 4), (4, 1)]).denominator_bound(), 3);
        // an unmarked 5-valent vertex contributes 1, a 4-valent one 1/2
        assert_eq!(VType::from_pairs(&[(1, 1), (3, 1)], &[(0, 3)]).denominator_bound(), 1);
        assert_eq!(VType::from_pairs(&[(1, 2), (2, 1)], &[(0, 4)]).denominator_bound(), 0);
    }
}
