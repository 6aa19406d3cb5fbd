//! Shape of the invariant: `F(y + y⁻¹) / (y + 2 + y⁻¹)^k` with a prescribed
//! degree of `F` and a bound on `k`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{newton_polygon, Degree};
use crate::ring::{Coeff, LaurentZ, RefinedValue};
use crate::trees::VType;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    /// Coefficients of `F` in `u = y + y⁻¹`, lowest degree first.
    pub f_coeffs: Vec<Coeff>,
    /// Exponent of `y + 2 + y⁻¹` in the denominator.
    pub k: usize,
    pub deg_f: usize,
    pub expected_deg_f: i64,
    pub k_bound: usize,
    pub passes: bool,
}

/// Rewrite a palindromic Laurent polynomial with even `z`-exponents as a
/// polynomial in `u = y + y⁻¹`.
pub fn in_u(p: &LaurentZ) -> Option<Vec<Coeff>> {
    if !p.is_palindromic() || p.terms().any(|(e, _)| e % 2 != 0) {
        return None;
    }
    let mut rest = p.clone();
    let top = rest.max_exp().map_or(0, |e| e / 2);
    let mut f = vec![0; top as usize + 1];
    // (y + y⁻¹)^j has z-exponents 2j, 2j-4, ..., -2j
    let u = LaurentZ::from_terms([(2, 1), (-2, 1)]);
    for j in (0..=top).rev() {
        let c = rest.coeff(2 * j);
        if c != 0 {
            f[j as usize] = c;
            rest = &rest - &u.pow(j as u32).scale(c);
        }
    }
    let exact = rest.terms().next().is_none();
    exact.then_some(f)
}

/// Check the shape of `v`. Errors when `v` is not of the form
/// `F(u)/(u+2)^k`; otherwise reports whether the degree and bound hold.
pub fn structure_check(v: &RefinedValue, degree: &Degree, vt: &VType) -> Result<StructureReport> {
    if degree.has_even_vector() {
        return Err(Error::Invalid("the degree contains an even vector".into()));
    }
    let (num, k2) = if v.den_k() % 2 == 0 { (v.numerator().clone(), v.den_k()) } else { (v.numerator_at(v.den_k() + 1), v.den_k() + 1) };
    let f_coeffs = in_u(&num).ok_or_else(|| Error::Invalid(format!("{v} is not a polynomial in y + 1/y over a power of y + 2 + 1/y")))?;
    let deg_f = f_coeffs.iter().rposition(|&c| c != 0).ok_or_else(|| Error::Invalid("zero invariant".into()))?;
    let k = k2 as usize / 2;
    let np = newton_polygon(degree)?;
    let excess = np.boundary as i64 - degree.len() as i64;
    let expected_deg_f = np.interior as i64 + excess / 2 + k as i64;
    let k_bound = vt.denominator_bound();
    let passes = excess % 2 == 0 && deg_f as i64 == expected_deg_f && k <= k_bound;
    Ok(StructureReport { f_coeffs, k, deg_f, expected_deg_f, k_bound, passes })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_shape() {
        let v = RefinedValue::from_laurent(LaurentZ::from_terms([(2, 1), (0, 10), (-2, 1)]));
        let d = Degree::projective(3);
        let r = structure_check(&v, &d, &VType::trivalent(9)).unwrap();
        assert_eq!(r.f_coeffs, vec![10, 1]);
        assert_eq!((r.k, r.deg_f, r.expected_deg_f), (0, 1, 1));
        assert!(r.passes);
    }

    #[test]
    fn line_shape() {
        let d = Degree::projective(1);
        let r = structure_check(&RefinedValue::constant(1), &d, &VType::trivalent(3)).unwrap();
        assert_eq!((r.f_coeffs.clone(), r.k, r.deg_f), (vec![1], 0, 0));
        assert!(r.passes);
    }

    #[test]
    fn asymmetric_values_fail() {
        let d = Degree::projective(1);
        let v = RefinedValue::from_laurent(LaurentZ::from_terms([(2, 1), (0, 1)]));
        assert!(structure_check(&v, &d, &VType::trivalent(3)).is_err());
        let odd = RefinedValue::from_laurent(LaurentZ::from_terms([(1, 1), (-1, 1)]));
        assert!(structure_check(&odd, &d, &VType::trivalent(3)).is_err());
    }

    #[test]
    fn denominators() {
        // 2/(z+1/z) = 2(z+1/z)/(y+2+1/y) has odd exponents upstairs
        let half = crate::ring::bracket_plus(0);
        assert!(in_u(&half.numerator_at(2)).is_none());
        assert!(structure_check(&half, &Degree::projective(1), &VType::trivalent(3)).is_err());
        // 4 + 8/D² = (4u + 16)/(u + 2)
        let v = &RefinedValue::constant(4) + &RefinedValue::new(LaurentZ::constant(8), 2);
        let p = in_u(v.numerator()).unwrap();
        assert_eq!((p, v.den_k()), (vec![16, 4], 2));
    }
}
