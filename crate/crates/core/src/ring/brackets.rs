//! Quantized integers `[α]^-`, `[α]^+` and the refined marked-vertex weight
//! `μ⁺`, computed by splitting off pairs of vectors.

use std::cell::RefCell;
use std::collections::HashMap;

use num_traits::{One, Zero};

use super::laurent::LaurentZ;
use super::refined::RefinedValue;
use crate::error::{Error, Result};
use crate::lattice::IntVector;

/// `[α]^- = (z^α - z^{-α}) / (z - z^{-1})`.
pub fn bracket_minus(alpha: i64) -> LaurentZ {
    let n = alpha.abs();
    let sign = alpha.signum() as i128;
    LaurentZ::from_terms((0..n).map(|i| (n - 1 - 2 * i, sign)))
}

/// `[α]^+ = (z^α + z^{-α}) / (z + z^{-1})`, normalized.
pub fn bracket_plus(alpha: i64) -> RefinedValue {
    RefinedValue::new(LaurentZ::from_terms([(alpha, 1), (-alpha, 1)]), 1)
}

type V2 = [i64; 2];

fn det(a: V2, b: V2) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

thread_local! {
    static MU_MEMO: RefCell<HashMap<Vec<V2>, RefinedValue>> = RefCell::new(HashMap::new());
}

/// `μ⁺(A)` for a balanced sequence of plane vectors (zero vectors allowed).
pub fn mu_plus(a: &[IntVector]) -> Result<RefinedValue> {
    let mut vs = Vec::with_capacity(a.len());
    for v in a {
        if v.dim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, got: v.dim() });
        }
        vs.push([v.0[0], v.0[1]]);
    }
    mu_plus_raw(&vs)
}

pub(crate) fn mu_plus_raw(a: &[V2]) -> Result<RefinedValue> {
    if a.len() < 2 {
        return Err(Error::TooShort(a.len()));
    }
    let s = a.iter().fold([0, 0], |s, v| [s[0] + v[0], s[1] + v[1]]);
    if s != [0, 0] {
        return Err(Error::Unbalanced);
    }
    let mut key = a.to_vec();
    key.sort_unstable();
    Ok(mu_sorted(key))
}

fn mu_sorted(key: Vec<V2>) -> RefinedValue {
    match key.len() {
        2 => return RefinedValue::one(),
        3 => return bracket_plus(det(key[0], key[1]).abs()),
        _ => {}
    }
    if let Some(v) = MU_MEMO.with(|m| m.borrow().get(&key).cloned()) {
        return v;
    }
    let r = key.len();
    let mut total = RefinedValue::zero();
    for i in 0..r {
        for j in i + 1..r {
            let (ai, aj) = (key[i], key[j]);
            let merged = [ai[0] + aj[0], ai[1] + aj[1]];
            let mut rest: Vec<V2> =
                key.iter().enumerate().filter(|&(k, _)| k != i && k != j).map(|(_, &v)| v).collect();
            rest.push(merged);
            rest.sort_unstable();
            let split = bracket_plus(det(ai, aj).abs());
            total = &total + &(&mu_sorted(rest) * &split);
        }
    }
    MU_MEMO.with(|m| m.borrow_mut().insert(key, total.clone()));
    total
}
