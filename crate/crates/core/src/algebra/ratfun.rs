//! Rational functions in θ over a finite field: the concrete model of
//! `K(ζ) = F_{q^d}(θ)`.
//!
//! Canonical form: denominator monic and coprime to the numerator; zero is
//! `0/1`.

use crate::algebra::field::{FFElem, FiniteField};
use crate::algebra::poly::Poly;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    pub fn new(field: &FiniteField, num: Poly, den: Poly) -> Result<RatFun> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduced(field, num, den))
    }

    fn reduced(field: &FiniteField, num: Poly, den: Poly) -> RatFun {
        if num.is_zero() {
            return RatFun {
                num: Poly::zero(),
                den: Poly::one(field),
            };
        }
        let g = num.gcd(field, &den);
        let (mut num, mut den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (num.div_exact(field, &g), den.div_exact(field, &g))
        };
        let lc = den.leading().unwrap().clone();
        if !field.eq_elem(&lc, &field.one()) {
            let inv = field.inv(&lc).unwrap();
            num = num.scale(field, &inv);
            den = den.scale(field, &inv);
        }
        RatFun { num, den }
    }

    pub fn zero(field: &FiniteField) -> RatFun {
        RatFun {
            num: Poly::zero(),
            den: Poly::one(field),
        }
    }

    pub fn one(field: &FiniteField) -> RatFun {
        RatFun {
            num: Poly::one(field),
            den: Poly::one(field),
        }
    }

    pub fn from_poly(field: &FiniteField, p: Poly) -> RatFun {
        RatFun {
            num: p,
            den: Poly::one(field),
        }
    }

    pub fn constant(field: &FiniteField, c: FFElem) -> RatFun {
        RatFun::from_poly(field, Poly::constant(field, c))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Whether the value lies in the polynomial ring (denominator 1).
    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    pub fn add(&self, field: &FiniteField, other: &RatFun) -> RatFun {
        let num = self
            .num
            .mul(field, &other.den)
            .add(field, &other.num.mul(field, &self.den));
        let den = self.den.mul(field, &other.den);
        Self::reduced(field, num, den)
    }

    pub fn neg(&self, field: &FiniteField) -> RatFun {
        RatFun {
            num: self.num.neg(field),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, field: &FiniteField, other: &RatFun) -> RatFun {
        self.add(field, &other.neg(field))
    }

    pub fn mul(&self, field: &FiniteField, other: &RatFun) -> RatFun {
        let num = self.num.mul(field, &other.num);
        let den = self.den.mul(field, &other.den);
        Self::reduced(field, num, den)
    }

    pub fn inv(&self, field: &FiniteField) -> Result<RatFun> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduced(field, self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, field: &FiniteField, other: &RatFun) -> Result<RatFun> {
        Ok(self.mul(field, &other.inv(field)?))
    }

    pub fn pow(&self, field: &FiniteField, e: u64) -> RatFun {
        RatFun {
            num: self.num.pow(field, e),
            den: self.den.pow(field, e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::FiniteField;
    use crate::algebra::poly::parse_poly;

    #[test]
    fn canonical_form() {
        let f = FiniteField::prime(3).unwrap();
        let num = parse_poly(&f, "2*theta^2+2").unwrap(); // 2(θ²+1)
        let den = parse_poly(&f, "2*theta+2").unwrap(); // 2(θ+1)
        let r = RatFun::new(&f, num, den).unwrap();
        // (θ²+1)/(θ+1) has no common factor over F_3 (θ=-1 is not a root of θ²+1)
        assert!(r.den().is_monic(&f));
        assert_eq!(r.den(), &parse_poly(&f, "theta+1").unwrap());
    }

    #[test]
    fn field_axioms_spotcheck() {
        let f = FiniteField::prime(2).unwrap();
        let a = RatFun::new(
            &f,
            parse_poly(&f, "theta").unwrap(),
            parse_poly(&f, "theta+1").unwrap(),
        )
        .unwrap();
        let b = RatFun::new(
            &f,
            parse_poly(&f, "1").unwrap(),
            parse_poly(&f, "theta").unwrap(),
        )
        .unwrap();
        let sum = a.add(&f, &b);
        let back = sum.sub(&f, &b);
        assert_eq!(back, a);
        let prod = a.mul(&f, &b);
        let quot = prod.div(&f, &b).unwrap();
        assert_eq!(quot, a);
        assert_eq!(a.mul(&f, &a.inv(&f).unwrap()), RatFun::one(&f));
    }
}
