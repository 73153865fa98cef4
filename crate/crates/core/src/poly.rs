//! Dense univariate polynomials over a [`Field`], low degree first.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{factor_big, factor_u64};
use crate::error::{Error, Result};
use crate::field::{Elem, Field};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    pub coeffs: Vec<Elem>,
}

impl Poly {
    pub fn new(f: &Field, mut coeffs: Vec<Elem>) -> Poly {
        while coeffs.len() > 1 && f.is_zero(coeffs.last().unwrap()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(f.zero());
        }
        Poly { coeffs }
    }

    pub fn zero(f: &Field) -> Poly {
        Poly {
            coeffs: vec![f.zero()],
        }
    }

    pub fn constant(f: &Field, c: Elem) -> Poly {
        Poly::new(f, vec![c])
    }

    /// `X - c`
    pub fn linear(f: &Field, c: &Elem) -> Poly {
        Poly::new(f, vec![f.neg(c), f.one()])
    }

    /// `X^n - a`
    pub fn binomial(f: &Field, n: usize, a: &Elem) -> Poly {
        let mut c = vec![f.zero(); n + 1];
        c[0] = f.neg(a);
        c[n] = f.one();
        Poly::new(f, c)
    }

    /// The `k`-th cyclotomic polynomial.
    pub fn cyclotomic(f: &Field, k: usize) -> Poly {
        let mut p = Poly::binomial(f, k, &f.one());
        for d in (1..k).filter(|d| k.is_multiple_of(*d)) {
            p = p
                .divrem(f, &Poly::cyclotomic(f, d))
                .expect("monic divisor")
                .0;
        }
        p
    }

    pub fn x(f: &Field) -> Poly {
        Poly::new(f, vec![f.zero(), f.one()])
    }

    pub fn is_zero(&self, f: &Field) -> bool {
        self.coeffs.len() == 1 && f.is_zero(&self.coeffs[0])
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn lead(&self) -> &Elem {
        self.coeffs.last().unwrap()
    }

    pub fn add(&self, f: &Field, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = f.zero();
        let c = (0..n)
            .map(|i| {
                f.add(
                    self.coeffs.get(i).unwrap_or(&z),
                    o.coeffs.get(i).unwrap_or(&z),
                )
            })
            .collect();
        Poly::new(f, c)
    }

    pub fn neg(&self, f: &Field) -> Poly {
        Poly::new(f, self.coeffs.iter().map(|c| f.neg(c)).collect())
    }

    pub fn sub(&self, f: &Field, o: &Poly) -> Poly {
        self.add(f, &o.neg(f))
    }

    pub fn mul(&self, f: &Field, o: &Poly) -> Poly {
        let mut c = vec![f.zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] = f.add(&c[i + j], &f.mul(a, b));
            }
        }
        Poly::new(f, c)
    }

    pub fn scale(&self, f: &Field, s: &Elem) -> Poly {
        Poly::new(f, self.coeffs.iter().map(|c| f.mul(c, s)).collect())
    }

    pub fn monic(&self, f: &Field) -> Result<Poly> {
        let inv = f.inv(self.lead())?;
        Ok(self.scale(f, &inv))
    }

    pub fn divrem(&self, f: &Field, d: &Poly) -> Result<(Poly, Poly)> {
        if d.is_zero(f) {
            return Err(Error::DivisionByZero);
        }
        let inv = f.inv(d.lead())?;
        let mut r = self.coeffs.clone();
        let dd = d.degree();
        if self.degree() < dd || self.is_zero(f) {
            return Ok((Poly::zero(f), self.clone()));
        }
        let mut q = vec![f.zero(); self.degree() - dd + 1];
        for i in (0..q.len()).rev() {
            let c = f.mul(&r[i + dd], &inv);
            if !f.is_zero(&c) {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[i + j] = f.sub(&r[i + j], &f.mul(&c, dc));
                }
            }
            q[i] = c;
        }
        r.truncate(dd.max(1));
        Ok((Poly::new(f, q), Poly::new(f, r)))
    }

    pub fn rem(&self, f: &Field, d: &Poly) -> Result<Poly> {
        Ok(self.divrem(f, d)?.1)
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, f: &Field, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero(f) {
            let r = a.rem(f, &b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        if a.is_zero(f) {
            a
        } else {
            a.monic(f).expect("nonzero")
        }
    }

    pub fn powmod(&self, f: &Field, mut e: u128, m: &Poly) -> Result<Poly> {
        let mut acc = Poly::constant(f, f.one()).rem(f, m)?;
        let mut b = self.rem(f, m)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &b).rem(f, m)?;
            }
            b = b.mul(f, &b).rem(f, m)?;
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn eval(&self, f: &Field, x: &Elem) -> Elem {
        self.coeffs
            .iter()
            .rev()
            .fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    /// Irreducibility over a finite field (Rabin's test).
    pub fn is_irreducible_finite(&self, f: &Field) -> Result<bool> {
        let order = f
            .order()
            .ok_or_else(|| Error::Unsupported("Rabin test needs a finite field".into()))?
            as u128;
        let n = self.degree();
        if n == 0 {
            return Ok(false);
        }
        let m = self.monic(f)?;
        let x = Poly::x(f);
        let mut frob = vec![x.rem(f, &m)?];
        for _ in 0..n {
            let next = frob.last().unwrap().powmod(f, order, &m)?;
            frob.push(next);
        }
        if frob[n] != x.rem(f, &m)? {
            return Ok(false);
        }
        for (l, _) in factor_u64(n as u64) {
            let h = frob[n / l as usize].sub(f, &x);
            if m.gcd(f, &h).degree() != 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Roots in F. Finite fields are scanned; over Q the rational root
    /// theorem is applied to the cleared-denominator integer polynomial.
    pub fn roots(&self, f: &Field) -> Result<Vec<Elem>> {
        if self.is_zero(f) {
            return Err(Error::Precondition("roots of the zero polynomial".into()));
        }
        if f.is_finite() {
            return Ok(f
                .elements()
                .into_iter()
                .filter(|x| f.is_zero(&self.eval(f, x)))
                .collect());
        }
        let rats: Vec<&BigRational> = self
            .coeffs
            .iter()
            .map(|c| f.as_rational(c).unwrap())
            .collect();
        let den = rats.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let mut ints: Vec<BigInt> = rats.iter().map(|r| (*r * &den).to_integer()).collect();
        let mut out = Vec::new();
        if ints[0].is_zero() {
            out.push(f.zero());
            while ints.len() > 1 && ints[0].is_zero() {
                ints.remove(0);
            }
        }
        if ints.len() == 1 {
            return Ok(out);
        }
        let c0 = ints[0].magnitude().clone();
        let cn = ints.last().unwrap().magnitude().clone();
        let num_divs = divisors(&c0)?;
        let den_divs = divisors(&cn)?;
        let mut seen = std::collections::BTreeSet::new();
        for a in &num_divs {
            for b in &den_divs {
                for sign in [1i32, -1] {
                    let r =
                        BigRational::new(BigInt::from(a.clone()) * sign, BigInt::from(b.clone()));
                    if seen.insert(r.clone()) {
                        let e = Elem::Rat(r);
                        if f.is_zero(&self.eval(f, &e)) {
                            out.push(e);
                        }
                    }
                }
            }
        }
        out.sort();
        Ok(out)
    }

    pub fn format(&self, f: &Field) -> String {
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if f.is_zero(c) {
                continue;
            }
            let cs = f.format_elem(c);
            let t = match i {
                0 => cs,
                _ => {
                    let mono = if i == 1 {
                        "X".to_string()
                    } else {
                        format!("X^{i}")
                    };
                    if f.is_one(c) {
                        mono
                    } else {
                        format!("{cs}*{mono}")
                    }
                }
            };
            terms.push(t);
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

fn divisors(n: &BigUint) -> Result<Vec<BigUint>> {
    let mut out = vec![BigUint::one()];
    for (p, e) in factor_big(n)? {
        let mut next = Vec::new();
        for d in &out {
            let mut pk = BigUint::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        out = next;
    }
    Ok(out)
}

/// Whether `X^q - a` is irreducible for prime `q`: exactly when `a` is not a q-th power.
pub fn binomial_irreducible(f: &Field, q: u64, a: &Elem) -> Result<bool> {
    if f.is_zero(a) {
        return Ok(false);
    }
    Ok(!f
        .power_class(a, q, crate::field::ClassMode::QthPowers)?
        .is_trivial())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rabin_matches_binomial_rule() {
        let f = Field::prime(7).unwrap();
        for a in 1..7 {
            let a = f.from_i64(a);
            let p = Poly::binomial(&f, 3, &a);
            assert_eq!(
                p.is_irreducible_finite(&f).unwrap(),
                binomial_irreducible(&f, 3, &a).unwrap()
            );
        }
    }

    #[test]
    fn rational_roots() {
        let q = Field::rationals();
        // (2X - 3)(X + 1) X = 2X^3 - X^2 - 3X
        let p = Poly::new(
            &q,
            vec![q.zero(), q.from_i64(-3), q.from_i64(-1), q.from_i64(2)],
        );
        let r = p.roots(&q).unwrap();
        assert_eq!(
            r,
            vec![q.from_i64(-1), q.zero(), q.parse_elem("3/2").unwrap()]
        );
        assert!(Poly::binomial(&q, 2, &q.from_i64(2))
            .roots(&q)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn cyclotomics() {
        let q = Field::rationals();
        let p12 = Poly::cyclotomic(&q, 12);
        // X^4 - X^2 + 1
        assert_eq!(
            p12,
            Poly::new(
                &q,
                vec![q.one(), q.zero(), q.from_i64(-1), q.zero(), q.one()]
            )
        );
        assert_eq!(Poly::cyclotomic(&q, 7).degree(), 6);
    }

    #[test]
    fn division_identity() {
        let f = Field::prime(5).unwrap();
        let a = Poly::new(&f, (0..6).map(|i| f.from_i64(i * 3 + 1)).collect());
        let b = Poly::new(&f, vec![f.from_i64(2), f.zero(), f.one()]);
        let (q, r) = a.divrem(&f, &b).unwrap();
        assert_eq!(q.mul(&f, &b).add(&f, &r), a);
        assert!(r.degree() < b.degree());
    }
}
