//! Laurent polynomials in `z` with integer coefficients. The formal parameter
//! `y` of refined counts is `z^2`, so half-integer powers of `y` are plain
//! integer powers of `z`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

pub type Coeff = i128;

/// Sparse Laurent polynomial; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(from = "RawLaurent")]
pub struct LaurentZ {
    #[serde(rename = "z_coeffs")]
    coeffs: BTreeMap<i64, Coeff>,
}

#[derive(Deserialize)]
struct RawLaurent {
    z_coeffs: BTreeMap<i64, Coeff>,
}

impl From<RawLaurent> for LaurentZ {
    fn from(raw: RawLaurent) -> Self {
        LaurentZ::from_terms(raw.z_coeffs)
    }
}

impl LaurentZ {
    pub fn from_terms<I: IntoIterator<Item = (i64, Coeff)>>(terms: I) -> Self {
        let mut p = LaurentZ::default();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn monomial(exp: i64, c: Coeff) -> Self {
        LaurentZ::from_terms([(exp, c)])
    }

    pub fn constant(c: Coeff) -> Self {
        LaurentZ::monomial(0, c)
    }

    /// `z + z^{-1}`.
    pub fn d() -> Self {
        LaurentZ::from_terms([(1, 1), (-1, 1)])
    }

    /// `z - z^{-1}`.
    pub fn d_minus() -> Self {
        LaurentZ::from_terms([(1, 1), (-1, -1)])
    }

    pub fn add_term(&mut self, exp: i64, c: Coeff) {
        if c == 0 {
            return;
        }
        let entry = self.coeffs.entry(exp).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.coeffs.remove(&exp);
        }
    }

    pub fn coeff(&self, exp: i64) -> Coeff {
        self.coeffs.get(&exp).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, Coeff)> + '_ {
        self.coeffs.iter().map(|(&e, &c)| (e, c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn scale(&self, k: Coeff) -> Self {
        LaurentZ::from_terms(self.terms().map(|(e, c)| (e, c * k)))
    }

    pub fn shift(&self, by: i64) -> Self {
        LaurentZ { coeffs: self.coeffs.iter().map(|(&e, &c)| (e + by, c)).collect() }
    }

    /// Substitution `z -> z^{-1}`.
    pub fn mirror(&self) -> Self {
        LaurentZ { coeffs: self.coeffs.iter().map(|(&e, &c)| (-e, c)).collect() }
    }

    pub fn is_palindromic(&self) -> bool {
        *self == self.mirror()
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(LaurentZ::one(), |acc, _| &acc * self)
    }

    /// Sum of coefficients, i.e. the value at `z = 1`.
    pub fn coeff_sum(&self) -> Coeff {
        self.coeffs.values().sum()
    }

    /// Exact division by `z + z^{-1}`; `None` when it does not divide.
    pub fn div_d(&self) -> Option<Self> {
        let (lo, hi) = match (self.min_exp(), self.max_exp()) {
            (Some(lo), Some(hi)) => (lo, hi),
            _ => return Some(LaurentZ::zero()),
        };
        if hi == lo {
            return None;
        }
        // dense remainder indexed from lo
        let mut rem: Vec<Coeff> = (lo..=hi).map(|e| self.coeff(e)).collect();
        let mut quot = LaurentZ::zero();
        for top in (lo + 2..=hi).rev() {
            let c = rem[(top - lo) as usize];
            if c != 0 {
                quot.add_term(top - 1, c);
                rem[(top - lo) as usize] = 0;
                rem[(top - 2 - lo) as usize] -= c;
            }
        }
        if rem.iter().all(|&c| c == 0) {
            Some(quot)
        } else {
            None
        }
    }
}

impl Zero for LaurentZ {
    fn zero() -> Self {
        LaurentZ::default()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for LaurentZ {
    fn one() -> Self {
        LaurentZ::constant(1)
    }
}

impl<'a> Add for &'a LaurentZ {
    type Output = LaurentZ;
    fn add(self, rhs: &LaurentZ) -> LaurentZ {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c);
        }
        out
    }
}

impl<'a> Sub for &'a LaurentZ {
    type Output = LaurentZ;
    fn sub(self, rhs: &LaurentZ) -> LaurentZ {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, -c);
        }
        out
    }
}

impl<'a> Neg for &'a LaurentZ {
    type Output = LaurentZ;
    fn neg(self) -> LaurentZ {
        self.scale(-1)
    }
}

impl<'a> Mul for &'a LaurentZ {
    type Output = LaurentZ;
    fn mul(self, rhs: &LaurentZ) -> LaurentZ {
        let mut out = LaurentZ::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentZ {
            type Output = LaurentZ;
            fn $m(self, rhs: LaurentZ) -> LaurentZ {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for LaurentZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&e, &c) in self.coeffs.iter().rev() {
            let (sign, abs) = if c < 0 { ("-", -c) } else { ("+", c) };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (e, abs) {
                (0, a) => write!(f, "{a}")?,
                (1, 1) => write!(f, "z")?,
                (1, a) => write!(f, "{a}z")?,
                (e, 1) => write!(f, "z^{e}")?,
                (e, a) => write!(f, "{a}z^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentZ({self})")
    }
}
