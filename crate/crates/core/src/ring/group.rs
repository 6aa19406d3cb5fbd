//! The group ring `Z[Λ²Z^m]`: finite integer combinations of monomials
//! `z^w`, `w ∈ Λ²Z^m`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::laurent::{Coeff, LaurentZ};
use crate::error::{Error, Result};
use crate::lattice::{wedge, IntVector, WedgeIndex};

#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(into = "RawGroup", from = "RawGroup")]
pub struct GroupRingValue {
    terms: BTreeMap<WedgeIndex, Coeff>,
}

#[derive(Serialize, Deserialize)]
struct RawTerm {
    w: WedgeIndex,
    c: Coeff,
}

#[derive(Serialize, Deserialize)]
struct RawGroup {
    terms: Vec<RawTerm>,
}

impl From<GroupRingValue> for RawGroup {
    fn from(v: GroupRingValue) -> Self {
        RawGroup { terms: v.terms.into_iter().map(|(w, c)| RawTerm { w, c }).collect() }
    }
}

impl From<RawGroup> for GroupRingValue {
    fn from(raw: RawGroup) -> Self {
        let mut v = GroupRingValue::default();
        for t in raw.terms {
            v.add_term(t.w, t.c);
        }
        v
    }
}

impl GroupRingValue {
    /// The unit `z^0` in `Z[Λ²Z^m]`.
    pub fn unit(m: usize) -> Self {
        GroupRingValue::monomial(WedgeIndex::zero(m), 1)
    }

    pub fn monomial(w: WedgeIndex, c: Coeff) -> Self {
        let mut v = GroupRingValue::default();
        v.add_term(w, c);
        v
    }

    pub fn add_term(&mut self, w: WedgeIndex, c: Coeff) {
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(w.clone()).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.terms.remove(&w);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&WedgeIndex, Coeff)> {
        self.terms.iter().map(|(w, &c)| (w, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Exponent negation `z^w -> z^{-w}`.
    pub fn negate_exponents(&self) -> Self {
        GroupRingValue { terms: self.terms.iter().map(|(w, &c)| (w.neg(), c)).collect() }
    }

    pub fn scale(&self, k: Coeff) -> Self {
        let mut out = GroupRingValue { terms: BTreeMap::new() };
        for (w, c) in self.terms() {
            out.add_term(w.clone(), c * k);
        }
        out
    }

    pub fn div_exact(&self, k: Coeff) -> Result<Self> {
        if self.terms.values().any(|c| c % k != 0) {
            return Err(Error::NotDivisible(k as u64));
        }
        Ok(GroupRingValue { terms: self.terms.iter().map(|(w, c)| (w.clone(), c / k)).collect() })
    }

    pub fn coeff_sum(&self) -> Coeff {
        self.terms.values().sum()
    }
}

/// `z^{a1∧a2} - z^{a2∧a1}`; errors when `a1 ∧ a2 = 0`.
pub fn group_vertex_weight(a1: &IntVector, a2: &IntVector) -> Result<GroupRingValue> {
    let w = wedge(a1, a2)?;
    if w.is_zero() {
        return Err(Error::Collinear);
    }
    let mut v = GroupRingValue::monomial(w.clone(), 1);
    v.add_term(w.neg(), -1);
    Ok(v)
}

/// Push forward along a linear functional `λ: Λ²Z^m -> Z`.
pub fn lambda_push(v: &GroupRingValue, lambda: &[i64]) -> Result<LaurentZ> {
    let mut out = LaurentZ::zero();
    for (w, c) in v.terms() {
        if w.0.len() != lambda.len() {
            return Err(Error::DimensionMismatch { expected: w.0.len(), got: lambda.len() });
        }
        let e: i64 = w.0.iter().zip(lambda).map(|(a, b)| a * b).sum();
        out.add_term(e, c);
    }
    Ok(out)
}

impl<'a> Add for &'a GroupRingValue {
    type Output = GroupRingValue;
    fn add(self, rhs: &GroupRingValue) -> GroupRingValue {
        let mut out = self.clone();
        for (w, c) in rhs.terms() {
            out.add_term(w.clone(), c);
        }
        out
    }
}

impl<'a> Sub for &'a GroupRingValue {
    type Output = GroupRingValue;
    fn sub(self, rhs: &GroupRingValue) -> GroupRingValue {
        self + &(-rhs)
    }
}

impl<'a> Neg for &'a GroupRingValue {
    type Output = GroupRingValue;
    fn neg(self) -> GroupRingValue {
        self.scale(-1)
    }
}

impl<'a> Mul for &'a GroupRingValue {
    type Output = GroupRingValue;
    fn mul(self, rhs: &GroupRingValue) -> GroupRingValue {
        let mut out = GroupRingValue::default();
        for (w1, c1) in self.terms() {
            for (w2, c2) in rhs.terms() {
                out.add_term(w1.add(w2), c1 * c2);
            }
        }
        out
    }
}

impl Add for GroupRingValue {
    type Output = GroupRingValue;
    fn add(self, rhs: GroupRingValue) -> GroupRingValue {
        &self + &rhs
    }
}

impl Mul for GroupRingValue {
    type Output = GroupRingValue;
    fn mul(self, rhs: GroupRingValue) -> GroupRingValue {
        &self * &rhs
    }
}

impl Zero for GroupRingValue {
    fn zero() -> Self {
        GroupRingValue::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for GroupRingValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms().enumerate() {
            let (sign, abs) = if c < 0 { ("-", -c) } else { ("+", c) };
            if i == 0 {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if abs != 1 || w.is_zero() {
                write!(f, "{abs}")?;
            }
            if !w.is_zero() {
                write!(f, "z^{:?}", w.0)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for GroupRingValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupRingValue({self})")
    }
}
