//! Polynomials in the uniformizer `t` with coefficients in `F_q`.
//!
//! Lattice representatives only ever need polynomial entries, so elements of
//! `O = F_q[[t]]` are carried as exact polynomials. Power-series behaviour
//! (unit inverses) is requested with an explicit precision.

use serde::{Deserialize, Serialize};

use super::field::{Field, FieldElem};
use crate::error::{Error, Result};

/// A polynomial `sum c_i t^i`, trailing zeros stripped.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LocalPoly {
    coeffs: Vec<FieldElem>,
}

impl LocalPoly {
    pub fn new(mut coeffs: Vec<FieldElem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(FieldElem::ONE)
    }

    pub fn constant(c: FieldElem) -> Self {
        Self::new(vec![c])
    }

    /// `c t^e`.
    pub fn monomial(c: FieldElem, e: usize) -> Self {
        let mut coeffs = vec![FieldElem::ZERO; e + 1];
        coeffs[e] = c;
        Self::new(coeffs)
    }

    pub fn t_pow(e: usize) -> Self {
        Self::monomial(FieldElem::ONE, e)
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs.get(i).copied().unwrap_or(FieldElem::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` stands for the degree of the zero polynomial (`-inf`).
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// `t`-adic valuation; `None` for zero (`+inf`).
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, other: &Self, f: &Field) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..len).map(|i| f.add(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn sub(&self, other: &Self, f: &Field) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..len).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn mul(&self, other: &Self, f: &Field) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![FieldElem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: FieldElem, f: &Field) -> Self {
        Self::new(self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// Reduction modulo `t^n`.
    pub fn truncated(&self, n: usize) -> Self {
        Self::new(self.coeffs.iter().take(n).copied().collect())
    }

    /// Exact division by `t^e`; the low `e` coefficients must vanish.
    pub fn div_t_pow(&self, e: usize) -> Self {
        debug_assert!(self.coeffs.iter().take(e).all(|c| c.is_zero()));
        Self::new(self.coeffs.iter().skip(e).copied().collect())
    }

    /// Inverse of a unit of `O` modulo `t^precision`.
    pub fn unit_inverse(&self, precision: usize, f: &Field) -> Result<Self> {
        let u0 = self.coeff(0);
        if u0.is_zero() {
            return Err(Error::NonUnit);
        }
        let u0_inv = f.inv(u0)?;
        let mut b = Vec::with_capacity(precision);
        for n in 0..precision {
            if n == 0 {
                b.push(u0_inv);
                continue;
            }
            let mut s = FieldElem::ZERO;
            for i in 1..=n.min(self.coeffs.len().saturating_sub(1)) {
                s = f.add(s, f.mul(self.coeffs[i], b[n - i]));
            }
            b.push(f.neg(f.mul(u0_inv, s)));
        }
        Ok(Self::new(b))
    }

    /// Renders e.g. `1 + t + (a+1)t^2`; `0` for the zero polynomial.
    pub fn format(&self, f: &Field) -> String {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, &c)| {
                let cs = f.format(c);
                let cs = if cs.contains('+') { format!("({cs})") } else { cs };
                match (i, c == FieldElem::ONE) {
                    (0, _) => cs,
                    (1, true) => "t".into(),
                    (1, false) => format!("{cs}t"),
                    (i, true) => format!("t^{i}"),
                    (i, false) => format!("{cs}t^{i}"),
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(f: &Field, c: &[i64]) -> LocalPoly {
        LocalPoly::new(c.iter().map(|&x| f.from_int(x)).collect())
    }

    #[test]
    fn geometric_series_inverse() {
        let f = Field::for_q(2).unwrap();
        let u = poly(&f, &[1, 1]);
        assert_eq!(u.unit_inverse(3, &f).unwrap(), poly(&f, &[1, 1, 1]));
    }

    #[test]
    fn inverse_of_one_and_constants() {
        let f = Field::for_q(3).unwrap();
        assert_eq!(LocalPoly::one().unit_inverse(7, &f).unwrap(), LocalPoly::one());
        assert_eq!(poly(&f, &[2]).unit_inverse(2, &f).unwrap(), poly(&f, &[2]));
    }

    #[test]
    fn non_unit_rejected() {
        let f = Field::for_q(5).unwrap();
        let err = poly(&f, &[0, 1]).unit_inverse(4, &f).unwrap_err();
        assert_eq!(err.to_string(), "non-unit in O");
    }

    #[test]
    fn degree_and_valuation_of_zero() {
        let z = LocalPoly::new(vec![FieldElem::ZERO; 3]);
        assert!(z.is_zero());
        assert_eq!(z.degree(), None);
        assert_eq!(z.valuation(), None);
    }

    #[test]
    fn formatting() {
        let f = Field::for_q(4).unwrap();
        let p = LocalPoly::new(vec![FieldElem(1), FieldElem(1), FieldElem(3)]);
        assert_eq!(p.format(&f), "1 + t + (a+1)t^2");
        assert_eq!(LocalPoly::zero().format(&f), "0");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_poly(p: i64, len: usize) -> impl Strategy<Value = Vec<i64>> {
            proptest::collection::vec(0..p, 1..len)
        }

        proptest! {
            #[test]
            fn inverse_is_inverse(c in arb_poly(3, 6), n in 1usize..10) {
                let f = Field::for_q(3).unwrap();
                let mut c = c;
                c[0] = 1 + c[0] % 2;
                let u = poly(&f, &c);
                let inv = u.unit_inverse(n, &f).unwrap();
                prop_assert!(inv.degree().is_none_or(|d| d < n));
                prop_assert_eq!(u.mul(&inv, &f).truncated(n), LocalPoly::one());
            }

            #[test]
            fn precision_is_consistent(c in arb_poly(5, 6), n in 1usize..10) {
                let f = Field::for_q(5).unwrap();
                let mut c = c;
                if c[0] == 0 { c[0] = 4; }
                let u = poly(&f, &c);
                let a = u.unit_inverse(n, &f).unwrap();
                let b = u.unit_inverse(n + 1, &f).unwrap();
                prop_assert_eq!(b.truncated(n), a);
            }
        }
    }
}
