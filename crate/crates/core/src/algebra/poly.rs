//! Univariate polynomials over a finite field.
//!
//! A [`Poly`] stores ascending coefficients and is kept normalized (no
//! trailing zeros); the zero polynomial has an empty coefficient list and
//! its degree is the sentinel `None`, never `-1` arithmetic.
//!
//! The same type serves every coefficient field in the tower: `A = F_q[θ]`,
//! `A[ζ] = F_{q^d}[θ]`, and the factorization targets. Arithmetic takes the
//! coefficient field as context, matching [`FiniteField`].

use std::sync::Arc;

use crate::algebra::field::{FFElem, FiniteField};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<FFElem>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn from_coeffs(field: &FiniteField, coeffs: Vec<FFElem>) -> Poly {
        let mut p = Poly { coeffs };
        p.normalize(field);
        p
    }

    pub fn constant(field: &FiniteField, c: FFElem) -> Poly {
        Poly::from_coeffs(field, vec![c])
    }

    pub fn one(field: &FiniteField) -> Poly {
        Poly::constant(field, field.one())
    }

    /// The monomial `c * x^k`.
    pub fn monomial(field: &FiniteField, c: FFElem, k: usize) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![field.zero(); k + 1];
        coeffs[k] = c;
        Poly { coeffs }
    }

    /// The variable `x`.
    pub fn x(field: &FiniteField) -> Poly {
        Poly::monomial(field, field.one(), 1)
    }

    fn normalize(&mut self, _field: &FiniteField) {
        while self.coeffs.last().is_some_and(FFElem::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[FFElem] {
        &self.coeffs
    }

    /// Coefficient of `x^k` (zero beyond the degree).
    pub fn coeff(&self, field: &FiniteField, k: usize) -> FFElem {
        self.coeffs.get(k).cloned().unwrap_or_else(|| field.zero())
    }

    pub fn leading(&self) -> Option<&FFElem> {
        self.coeffs.last()
    }

    pub fn is_monic(&self, field: &FiniteField) -> bool {
        self.leading().is_some_and(|c| field.eq_elem(c, &field.one()))
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn add(&self, field: &FiniteField, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(field.add(&self.coeff(field, k), &other.coeff(field, k)));
        }
        Poly::from_coeffs(field, coeffs)
    }

    pub fn neg(&self, field: &FiniteField) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| field.neg(c)).collect(),
        }
    }

    pub fn sub(&self, field: &FiniteField, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(field.sub(&self.coeff(field, k), &other.coeff(field, k)));
        }
        Poly::from_coeffs(field, coeffs)
    }

    pub fn mul(&self, field: &FiniteField, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let prod = field.mul(a, b);
                coeffs[i + j] = field.add(&coeffs[i + j], &prod);
            }
        }
        Poly::from_coeffs(field, coeffs)
    }

    pub fn scale(&self, field: &FiniteField, c: &FFElem) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly::from_coeffs(
            field,
            self.coeffs.iter().map(|a| field.mul(a, c)).collect(),
        )
    }

    pub fn shift(&self, field: &FiniteField, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![field.zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    /// Quotient and remainder; the divisor must be nonzero.
    pub fn divrem(&self, field: &FiniteField, divisor: &Poly) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dd = divisor.degree().unwrap();
        if self.degree().is_none_or(|d| d < dd) {
            return (Poly::zero(), self.clone());
        }
        let lc_inv = field
            .inv(divisor.leading().unwrap())
            .expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![field.zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            if rem[k].is_zero() {
                continue;
            }
            let q = field.mul(&rem[k], &lc_inv);
            for (s, m) in divisor.coeffs.iter().enumerate() {
                let sub = field.mul(&q, m);
                rem[k - dd + s] = field.sub(&rem[k - dd + s], &sub);
            }
            quot[k - dd] = q;
        }
        (
            Poly::from_coeffs(field, quot),
            Poly::from_coeffs(field, rem),
        )
    }

    pub fn rem(&self, field: &FiniteField, divisor: &Poly) -> Poly {
        self.divrem(field, divisor).1
    }

    /// Exact division; panics if the remainder is nonzero.
    pub fn div_exact(&self, field: &FiniteField, divisor: &Poly) -> Poly {
        let (q, r) = self.divrem(field, divisor);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn divides(&self, field: &FiniteField, other: &Poly) -> bool {
        other.rem(field, self).is_zero()
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, field: &FiniteField, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(field, &b);
            a = b;
            b = r;
        }
        a.make_monic(field)
    }

    /// Extended gcd: returns `(g, u, v)` with `u*self + v*other = g`, `g` monic.
    pub fn ext_gcd(&self, field: &FiniteField, other: &Poly) -> (Poly, Poly, Poly) {
        let mut r0 = self.clone();
        let mut r1 = other.clone();
        let mut u0 = Poly::one(field);
        let mut u1 = Poly::zero();
        let mut v0 = Poly::zero();
        let mut v1 = Poly::one(field);
        while !r1.is_zero() {
            let (q, r) = r0.divrem(field, &r1);
            let nu = u0.sub(field, &q.mul(field, &u1));
            let nv = v0.sub(field, &q.mul(field, &v1));
            r0 = r1;
            r1 = r;
            u0 = u1;
            u1 = nu;
            v0 = v1;
            v1 = nv;
        }
        if r0.is_zero() {
            return (Poly::zero(), Poly::zero(), Poly::zero());
        }
        let lc_inv = field.inv(r0.leading().unwrap()).unwrap();
        (
            r0.scale(field, &lc_inv),
            u0.scale(field, &lc_inv),
            v0.scale(field, &lc_inv),
        )
    }

    pub fn make_monic(&self, field: &FiniteField) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some(lc) => {
                if field.eq_elem(lc, &field.one()) {
                    self.clone()
                } else {
                    let inv = field.inv(lc).unwrap();
                    self.scale(field, &inv)
                }
            }
        }
    }

    pub fn eval(&self, field: &FiniteField, x: &FFElem) -> FFElem {
        let mut acc = field.zero();
        for c in self.coeffs.iter().rev() {
            acc = field.mul(&acc, x);
            acc = field.add(&acc, c);
        }
        acc
    }

    pub fn pow(&self, field: &FiniteField, mut e: u64) -> Poly {
        let mut result = Poly::one(field);
        let mut sq = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(field, &sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(field, &sq);
            }
        }
        result
    }

    /// `self^p` via the characteristic-p identity `(Σ cᵢxⁱ)^p = Σ cᵢ^p x^{ip}`.
    pub fn pow_char(&self, field: &FiniteField) -> Poly {
        let p = field.characteristic() as usize;
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![field.zero(); (self.coeffs.len() - 1) * p + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * p] = field.pow(c, field.characteristic() as u128);
        }
        Poly::from_coeffs(field, coeffs)
    }

    /// `self^q` where `q = p^e` is a power of the characteristic.
    pub fn pow_q(&self, field: &FiniteField, q: u128) -> Poly {
        let p = field.characteristic() as u128;
        let mut e = 0;
        let mut t = q;
        while t > 1 {
            assert!(t.is_multiple_of(p), "q must be a power of the characteristic");
            t /= p;
            e += 1;
        }
        let mut out = self.clone();
        for _ in 0..e {
            out = out.pow_char(field);
        }
        out
    }

    /// `self^e mod m` by square-and-multiply.
    pub fn powmod(&self, field: &FiniteField, mut e: u128, m: &Poly) -> Poly {
        let mut result = Poly::one(field).rem(field, m);
        let mut sq = self.rem(field, m);
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(field, &sq).rem(field, m);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(field, &sq).rem(field, m);
            }
        }
        result
    }

    /// Formal derivative.
    pub fn derivative(&self, field: &FiniteField) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let p = field.characteristic();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| {
                let k_mod = field.from_u64(k as u64 % p);
                field.mul(&k_mod, c)
            })
            .collect();
        Poly::from_coeffs(field, coeffs)
    }

    /// Map coefficients into an extension field along the tower chain.
    pub fn embed(&self, sub: &Arc<FiniteField>, target: &Arc<FiniteField>) -> Result<Poly> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| target.embed_from(sub, c))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly { coeffs })
    }

    /// Apply a power of Frobenius to every coefficient.
    pub fn map_frobenius(&self, field: &FiniteField, q: u128) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| field.frobenius(c, q)).collect(),
        }
    }
}

/// Rabin irreducibility test for a monic polynomial of degree >= 1 over the
/// coefficient field: `x^{Q^m} ≡ x (mod f)` and `gcd(x^{Q^{m/ℓ}} - x, f) = 1`
/// for each prime `ℓ | m`, where `Q` is the field order.
pub fn is_irreducible(field: &FiniteField, f: &Poly) -> bool {
    let m = match f.degree() {
        None | Some(0) => return false,
        Some(m) => m,
    };
    if m == 1 {
        return true;
    }
    let q = field.order();
    let x = Poly::x(field);
    // x^{Q^k} mod f by k-fold powering with exponent Q.
    let frob_iterate = |k: usize| -> Poly {
        let mut acc = x.rem(field, f);
        for _ in 0..k {
            acc = acc.powmod(field, q, f);
        }
        acc
    };
    let full = frob_iterate(m);
    if !full.sub(field, &x).rem(field, f).is_zero() {
        return false;
    }
    let mut rest = m;
    let mut primes = Vec::new();
    let mut d = 2;
    while d * d <= rest {
        if rest % d == 0 {
            primes.push(d);
            while rest % d == 0 {
                rest /= d;
            }
        }
        d += 1;
    }
    if rest > 1 {
        primes.push(rest);
    }
    for ell in primes {
        let sub = frob_iterate(m / ell).sub(field, &x);
        if f.gcd(field, &sub).degree() != Some(0) {
            return false;
        }
    }
    true
}

/// Lexicographically-least monic irreducible of the given degree: candidates
/// are scanned in ascending counter order on the non-leading coefficients.
pub fn least_irreducible(field: &Arc<FiniteField>, degree: usize) -> Poly {
    assert!(degree >= 1);
    let q = field.order();
    let mut idx = 0u128;
    loop {
        let mut coeffs = Vec::with_capacity(degree + 1);
        let mut t = idx;
        for _ in 0..degree {
            coeffs.push(field.decode(t % q));
            t /= q;
        }
        coeffs.push(field.one());
        let cand = Poly::from_coeffs(field, coeffs);
        if is_irreducible(field, &cand) {
            return cand;
        }
        idx += 1;
        assert!(idx < q.pow(degree as u32), "no irreducible found");
    }
}

/// All polynomials with `len` coefficient slots (degree < `len`) in counter
/// order: the constant coefficient cycles fastest. This is the canonical
/// residue enumeration order.
pub fn enumerate_polys(field: &Arc<FiniteField>, len: usize) -> impl Iterator<Item = Poly> {
    let field = Arc::clone(field);
    let q = field.order();
    let total = q.pow(len as u32);
    (0..total).map(move |mut t| {
        let coeffs = (0..len)
            .map(|_| {
                let c = field.decode(t % q);
                t /= q;
                c
            })
            .collect();
        Poly::from_coeffs(&field, coeffs)
    })
}

/// Render with the given variable name, e.g. `theta^2+theta+1`.
pub fn format_poly(field: &FiniteField, p: &Poly, var: &str) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut terms = Vec::new();
    for (k, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let cs = field.format(c);
        let compound = cs.contains('+') || cs.contains('-') || cs.contains('*');
        let coef = if compound { format!("({cs})") } else { cs };
        let term = match k {
            0 => coef,
            _ => {
                let mono = if k == 1 {
                    var.to_string()
                } else {
                    format!("{var}^{k}")
                };
                if coef == "1" {
                    mono
                } else {
                    format!("{coef}*{mono}")
                }
            }
        };
        terms.push(term);
    }
    terms.join("+")
}

/// Parse either a symbolic polynomial (`theta^2+theta+1`, with `g` the
/// generator of the coefficient field) or an ascending coefficient list
/// (`1,1,1`). Coefficient entries may themselves use `g`.
pub fn parse_poly(field: &Arc<FiniteField>, text: &str) -> Result<Poly> {
    let text = text.trim();
    if text.is_empty() {
        return Err(Error::BadInput("empty polynomial".into()));
    }
    if text.contains(',') {
        let coeffs = text
            .split(',')
            .map(|tok| parse_elem(field, tok.trim()))
            .collect::<Result<Vec<_>>>()?;
        return Ok(Poly::from_coeffs(field, coeffs));
    }
    parse_symbolic(field, text)
}

/// Parse a single field element expression in the generator `g` (or the
/// field's own generator name), e.g. `g+1`, `2`, `0`.
pub fn parse_elem(field: &Arc<FiniteField>, text: &str) -> Result<FFElem> {
    let p = parse_symbolic(field, text)?;
    if p.degree().is_some_and(|d| d > 0) {
        return Err(Error::BadInput(format!(
            "'{text}' is not a constant field element"
        )));
    }
    Ok(p.coeff(field, 0))
}

fn parse_symbolic(field: &Arc<FiniteField>, text: &str) -> Result<Poly> {
    let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut result = Poly::zero();
    let mut term = String::new();
    let mut sign_negative = false;
    let mut chars = cleaned.chars().peekable();
    let mut depth = 0usize;
    let mut first = true;
    loop {
        match chars.peek().copied() {
            Some(c) if (c == '+' || c == '-') && depth == 0 && !first => {
                chars.next();
                let t = parse_term(field, &term)?;
                let t = if sign_negative { t.neg(field) } else { t };
                result = result.add(field, &t);
                term.clear();
                sign_negative = c == '-';
            }
            Some(c) => {
                if c == '(' {
                    depth += 1;
                }
                if c == ')' {
                    depth = depth.checked_sub(1).ok_or_else(|| {
                        Error::BadInput(format!("unbalanced parens in '{text}'"))
                    })?;
                }
                if first && (c == '+' || c == '-') {
                    sign_negative = c == '-';
                    chars.next();
                    first = false;
                    continue;
                }
                term.push(c);
                chars.next();
                first = false;
            }
            None => break,
        }
    }
    if depth != 0 {
        return Err(Error::BadInput(format!("unbalanced parens in '{text}'")));
    }
    let t = parse_term(field, &term)?;
    let t = if sign_negative { t.neg(field) } else { t };
    Ok(result.add(field, &t))
}

fn parse_term(field: &Arc<FiniteField>, term: &str) -> Result<Poly> {
    if term.is_empty() {
        return Err(Error::BadInput("empty term".into()));
    }
    let mut acc = Poly::one(field);
    for factor in term.split('*') {
        let f = parse_factor(field, factor)?;
        acc = acc.mul(field, &f);
    }
    Ok(acc)
}

fn parse_factor(field: &Arc<FiniteField>, factor: &str) -> Result<Poly> {
    let (base, exp) = match factor.split_once('^') {
        Some((b, e)) => {
            let exp: u64 = e
                .parse()
                .map_err(|_| Error::BadInput(format!("bad exponent '{e}'")))?;
            (b, exp)
        }
        None => (factor, 1),
    };
    let base_poly = if base.starts_with('(') && base.ends_with(')') {
        parse_symbolic(field, &base[1..base.len() - 1])?
    } else if base == "theta" || base == "x" || base == "T" || base == "X" {
        Poly::x(field)
    } else if base == "g" || base == field.gen_name() {
        let g = field
            .generator()
            .map_err(|_| Error::BadInput(format!("'{base}' is not available in this field")))?;
        Poly::constant(field, g)
    } else if let Ok(n) = base.parse::<u64>() {
        Poly::constant(field, field.from_u64(n))
    } else {
        return Err(Error::BadInput(format!("cannot parse factor '{base}'")));
    };
    Ok(base_poly.pow(field, exp))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Arc<FiniteField> {
        FiniteField::prime(2).unwrap()
    }

    fn f3() -> Arc<FiniteField> {
        FiniteField::prime(3).unwrap()
    }

    #[test]
    fn zero_polynomial_degree_is_sentinel() {
        assert_eq!(Poly::zero().degree(), None);
        let f = f2();
        assert_eq!(Poly::one(&f).degree(), Some(0));
    }

    #[test]
    fn divrem_roundtrip() {
        let f = f3();
        let a = parse_poly(&f, "theta^4+2*theta^2+1").unwrap();
        let b = parse_poly(&f, "theta^2+1").unwrap();
        let (q, r) = a.divrem(&f, &b);
        assert!(r.is_zero());
        assert_eq!(q.mul(&f, &b), a);
    }

    #[test]
    fn gcd_of_common_factor() {
        let f = f2();
        let a = parse_poly(&f, "theta^2+theta").unwrap(); // theta(theta+1)
        let b = parse_poly(&f, "theta^2+1").unwrap(); // (theta+1)^2
        let g = a.gcd(&f, &b);
        assert_eq!(g, parse_poly(&f, "theta+1").unwrap());
    }

    #[test]
    fn ext_gcd_bezout() {
        let f = f3();
        let a = parse_poly(&f, "theta^3+theta+1").unwrap();
        let b = parse_poly(&f, "theta^2+2").unwrap();
        let (g, u, v) = a.ext_gcd(&f, &b);
        let lhs = u.mul(&f, &a).add(&f, &v.mul(&f, &b));
        assert_eq!(lhs, g);
    }

    #[test]
    fn irreducibility_small_cases() {
        let f = f2();
        assert!(is_irreducible(&f, &parse_poly(&f, "theta^2+theta+1").unwrap()));
        assert!(!is_irreducible(&f, &parse_poly(&f, "theta^2+1").unwrap()));
        assert!(!is_irreducible(&f, &parse_poly(&f, "theta^2+theta").unwrap()));
        assert!(is_irreducible(&f, &parse_poly(&f, "theta^3+theta+1").unwrap()));
        let f3 = f3();
        assert!(is_irreducible(&f3, &parse_poly(&f3, "theta^2+1").unwrap()));
    }

    #[test]
    fn least_irreducible_degree_two() {
        let f = f2();
        // Candidates x^2, x^2+1, x^2+x in counter order are all reducible.
        let m = least_irreducible(&f, 2);
        assert_eq!(m, parse_poly(&f, "theta^2+theta+1").unwrap());
    }

    #[test]
    fn parse_and_format_roundtrip() {
        let f = f3();
        let p = parse_poly(&f, "2*theta^3+theta+2").unwrap();
        assert_eq!(format_poly(&f, &p, "theta"), "2*theta^3+theta+2");
        let from_list = parse_poly(&f, "2,1,0,2").unwrap();
        assert_eq!(p, from_list);
    }

    #[test]
    fn parse_with_generator_coefficient() {
        let f2 = f2();
        let m = vec![f2.one(), f2.one(), f2.one()];
        let f4 = FiniteField::extension_unchecked(&f2, m, "g");
        let p = parse_poly(&f4, "theta^2+theta+g").unwrap();
        assert_eq!(p.degree(), Some(2));
        let g = f4.generator().unwrap();
        assert!(f4.eq_elem(&p.coeff(&f4, 0), &g));
    }

    #[test]
    fn pow_q_is_frobenius() {
        let f = f3();
        let p = parse_poly(&f, "theta^2+2*theta").unwrap();
        let cubed = p.pow(&f, 3);
        assert_eq!(p.pow_q(&f, 3), cubed);
    }
}
