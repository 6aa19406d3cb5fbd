//! Elements of `Z[z, z^{-1}][(z + z^{-1})^{-1}]`, the value ring of refined
//! multiplicities. Note `(z + z^{-1})^2 = y + 2 + y^{-1}`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::laurent::{Coeff, LaurentZ};
use crate::error::{Error, Result};

/// `numerator / (z + z^{-1})^den_k`, kept normalized: when `den_k > 0` the
/// numerator is not divisible by `z + z^{-1}`.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(into = "RawRefined", from = "RawRefined")]
pub struct RefinedValue {
    num: LaurentZ,
    den_k: u32,
}

#[derive(Serialize, Deserialize)]
struct RawRefined {
    z_coeffs: BTreeMap<i64, Coeff>,
    den_k: u32,
}

impl From<RefinedValue> for RawRefined {
    fn from(v: RefinedValue) -> Self {
        RawRefined { z_coeffs: v.num.terms().collect(), den_k: v.den_k }
    }
}

impl From<RawRefined> for RefinedValue {
    fn from(raw: RawRefined) -> Self {
        RefinedValue::new(LaurentZ::from_terms(raw.z_coeffs), raw.den_k)
    }
}

impl RefinedValue {
    pub fn new(num: LaurentZ, den_k: u32) -> Self {
        let mut v = RefinedValue { num, den_k };
        v.normalize();
        v
    }

    pub fn from_laurent(p: LaurentZ) -> Self {
        RefinedValue { num: p, den_k: 0 }
    }

    pub fn constant(c: Coeff) -> Self {
        RefinedValue::from_laurent(LaurentZ::constant(c))
    }

    pub fn numerator(&self) -> &LaurentZ {
        &self.num
    }

    pub fn den_k(&self) -> u32 {
        self.den_k
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den_k = 0;
            return;
        }
        while self.den_k > 0 {
            match self.num.div_d() {
                Some(q) => {
                    self.num = q;
                    self.den_k -= 1;
                }
                None => break,
            }
        }
    }

    /// Numerator over `(z + z^{-1})^k` for a chosen `k >= den_k`.
    pub fn numerator_at(&self, k: u32) -> LaurentZ {
        assert!(k >= self.den_k);
        &self.num * &LaurentZ::d().pow(k - self.den_k)
    }

    pub fn as_laurent(&self) -> Option<&LaurentZ> {
        (self.den_k == 0).then_some(&self.num)
    }

    pub fn mirror(&self) -> Self {
        // z + z^{-1} is itself invariant
        RefinedValue { num: self.num.mirror(), den_k: self.den_k }
    }

    pub fn is_palindromic(&self) -> bool {
        *self == self.mirror()
    }

    pub fn scale(&self, k: Coeff) -> Self {
        RefinedValue::new(self.num.scale(k), self.den_k)
    }

    /// Exact division of every coefficient by `k`.
    pub fn div_exact(&self, k: Coeff) -> Result<Self> {
        if self.num.terms().any(|(_, c)| c % k != 0) {
            return Err(Error::NotDivisible(k as u64));
        }
        Ok(RefinedValue { num: LaurentZ::from_terms(self.num.terms().map(|(e, c)| (e, c / k))), den_k: self.den_k })
    }

    pub fn at_one(&self) -> BigRational {
        BigRational::new(BigInt::from(self.num.coeff_sum()), BigInt::from(2).pow(self.den_k))
    }

    /// Value at `y = -1`, i.e. `z = i`, as a Gaussian rational `(re, im)`.
    pub fn at_minus_one(&self) -> Result<(BigRational, BigRational)> {
        if self.den_k > 0 {
            return Err(Error::DenominatorVanishes);
        }
        let (mut re, mut im) = (BigInt::zero(), BigInt::zero());
        for (e, c) in self.num.terms() {
            let c = BigInt::from(c);
            match e.rem_euclid(4) {
                0 => re += c,
                1 => im += c,
                2 => re -= c,
                _ => im -= c,
            }
        }
        Ok((BigRational::from_integer(re), BigRational::from_integer(im)))
    }

    /// Value at a rational `y0 > 0`, written `a + b * sqrt(y0)`.
    pub fn at_positive(&self, y0: &BigRational) -> Result<SurdValue> {
        if !y0.is_positive() {
            return Err(Error::Invalid("evaluation point must be positive".into()));
        }
        // N(s) * s^k / (y0 + 1)^k with s = sqrt(y0)
        let mut acc = SurdValue::zero(y0.clone());
        for (e, c) in self.num.terms() {
            acc = acc.add(&SurdValue::power(y0, e + self.den_k as i64).scale(&BigRational::from_integer(c.into())));
        }
        let den = (y0 + BigRational::one()).pow(self.den_k as i32);
        Ok(acc.scale(&den.recip()))
    }
}

/// `rational + surd * sqrt(radicand)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurdValue {
    pub rational: BigRational,
    pub surd: BigRational,
    pub radicand: BigRational,
}

impl SurdValue {
    fn zero(radicand: BigRational) -> Self {
        SurdValue { rational: BigRational::zero(), surd: BigRational::zero(), radicand }
    }

    /// `sqrt(y0)^e`.
    fn power(y0: &BigRational, e: i64) -> Self {
        let half = e.div_euclid(2);
        let base = y0.pow(half as i32);
        if e.rem_euclid(2) == 0 {
            SurdValue { rational: base, surd: BigRational::zero(), radicand: y0.clone() }
        } else {
            SurdValue { rational: BigRational::zero(), surd: base, radicand: y0.clone() }
        }
    }

    fn add(&self, o: &SurdValue) -> Self {
        SurdValue { rational: &self.rational + &o.rational, surd: &self.surd + &o.surd, radicand: self.radicand.clone() }
    }

    fn scale(&self, k: &BigRational) -> Self {
        SurdValue { rational: &self.rational * k, surd: &self.surd * k, radicand: self.radicand.clone() }
    }
}

impl Zero for RefinedValue {
    fn zero() -> Self {
        RefinedValue::default()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RefinedValue {
    fn one() -> Self {
        RefinedValue::constant(1)
    }
}

impl<'a> Add for &'a RefinedValue {
    type Output = RefinedValue;
    fn add(self, rhs: &RefinedValue) -> RefinedValue {
        let k = self.den_k.max(rhs.den_k);
        RefinedValue::new(&self.numerator_at(k) + &rhs.numerator_at(k), k)
    }
}

impl<'a> Sub for &'a RefinedValue {
    type Output = RefinedValue;
    fn sub(self, rhs: &RefinedValue) -> RefinedValue {
        let k = self.den_k.max(rhs.den_k);
        RefinedValue::new(&self.numerator_at(k) - &rhs.numerator_at(k), k)
    }
}

impl<'a> Neg for &'a RefinedValue {
    type Output = RefinedValue;
    fn neg(self) -> RefinedValue {
        RefinedValue { num: -&self.num, den_k: self.den_k }
    }
}

impl<'a> Mul for &'a RefinedValue {
    type Output = RefinedValue;
    fn mul(self, rhs: &RefinedValue) -> RefinedValue {
        RefinedValue::new(&self.num * &rhs.num, self.den_k + rhs.den_k)
    }
}

impl Add for RefinedValue {
    type Output = RefinedValue;
    fn add(self, rhs: RefinedValue) -> RefinedValue {
        &self + &rhs
    }
}

impl Mul for RefinedValue {
    type Output = RefinedValue;
    fn mul(self, rhs: RefinedValue) -> RefinedValue {
        &self * &rhs
    }
}

impl std::iter::Sum for RefinedValue {
    fn sum<I: Iterator<Item = RefinedValue>>(iter: I) -> Self {
        iter.fold(RefinedValue::zero(), |a, b| &a + &b)
    }
}

impl fmt::Display for RefinedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.den_k {
            0 => write!(f, "{}", self.num),
            1 => write!(f, "({}) / (z + z^-1)", self.num),
            k => write!(f, "({}) / (z + z^-1)^{k}", self.num),
        }
    }
}

impl fmt::Debug for RefinedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RefinedValue({self})")
    }
}
