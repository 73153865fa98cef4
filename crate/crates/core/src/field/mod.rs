//! Exact fields: GF(p^k) and the rationals.
//!
//! A [`Field`] is a cheap, cloneable handle; [`Elem`] values carry no
//! reference to their field, so every operation goes through the handle.

mod classes;
mod gf;

use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, is_prime};
use crate::error::{Error, Result};
use gf::Gf;

pub use classes::{ClassMode, ClassRepr, PowerClass, UnitSubgroup};

/// Field element. Finite elements are integer encodings of their coefficient
/// vectors; rationals are kept in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Fin(u64),
    Rat(BigRational),
}

/// Cardinality that may be infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cardinal {
    Finite(u128),
    Infinite,
}

impl fmt::Display for Cardinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cardinal::Finite(n) => write!(f, "{n}"),
            Cardinal::Infinite => f.write_str("infinite"),
        }
    }
}

/// Cyclic subgroup of F^x given by a generator and its order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicUnits {
    pub generator: Elem,
    pub order: u64,
}

#[derive(Debug)]
enum Kind {
    Finite(Gf),
    Rational,
}

#[derive(Clone)]
pub struct Field(Arc<Kind>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({})", self.descriptor())
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            Kind::Finite(gf) => write!(f, "GF({})", gf.order),
            Kind::Rational => f.write_str("Q"),
        }
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        match (&*self.0, &*other.0) {
            (Kind::Finite(a), Kind::Finite(b)) => a.p == b.p && a.k == b.k,
            (Kind::Rational, Kind::Rational) => true,
            _ => false,
        }
    }
}

impl Eq for Field {}

impl Field {
    /// Parse `gf:<p>`, `gf:<p>^<k>` or `q`.
    pub fn parse(descriptor: &str) -> Result<Field> {
        let bad = || Error::BadFieldSpec(descriptor.to_string());
        let s = descriptor.trim();
        if s == "q" || s == "Q" {
            return Ok(Field::rationals());
        }
        let body = s.strip_prefix("gf:").ok_or_else(bad)?;
        let (p, k) = match body.split_once('^') {
            Some((p, k)) => (
                p.parse::<u64>().map_err(|_| bad())?,
                k.parse::<u32>().map_err(|_| bad())?,
            ),
            None => (body.parse::<u64>().map_err(|_| bad())?, 1),
        };
        Field::finite(p, k)
    }

    pub fn finite(p: u64, k: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::BadFieldSpec(format!("gf:{p}^0")));
        }
        let order = (p as u128).checked_pow(k).unwrap_or(u128::MAX);
        if order - 1 > 1u128 << 40 {
            return Err(Error::FieldTooLarge(order - 1));
        }
        Ok(Field(Arc::new(Kind::Finite(Gf::new(p, k)))))
    }

    pub fn prime(p: u64) -> Result<Field> {
        Field::finite(p, 1)
    }

    pub fn rationals() -> Field {
        Field(Arc::new(Kind::Rational))
    }

    pub fn descriptor(&self) -> String {
        match &*self.0 {
            Kind::Finite(gf) if gf.k == 1 => format!("gf:{}", gf.p),
            Kind::Finite(gf) => format!("gf:{}^{}", gf.p, gf.k),
            Kind::Rational => "q".to_string(),
        }
    }

    fn gf(&self) -> Option<&Gf> {
        match &*self.0 {
            Kind::Finite(gf) => Some(gf),
            Kind::Rational => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.gf().is_some()
    }

    /// Characteristic; 0 for the rationals.
    pub fn characteristic(&self) -> u64 {
        self.gf().map_or(0, |g| g.p)
    }

    pub fn degree(&self) -> Option<u32> {
        self.gf().map(|g| g.k)
    }

    pub fn order(&self) -> Option<u64> {
        self.gf().map(|g| g.order)
    }

    pub fn unit_order(&self) -> Option<u64> {
        self.gf().map(|g| g.unit_order)
    }

    /// Defining polynomial of GF(p^k), low degree first.
    pub fn modulus(&self) -> Option<&[u64]> {
        self.gf().map(|g| g.modulus.as_slice())
    }

    pub fn primitive_root(&self) -> Option<Elem> {
        self.gf().map(|g| Elem::Fin(g.primitive_root))
    }

    pub fn zero(&self) -> Elem {
        match &*self.0 {
            Kind::Finite(_) => Elem::Fin(0),
            Kind::Rational => Elem::Rat(BigRational::zero()),
        }
    }

    pub fn one(&self) -> Elem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Elem {
        match &*self.0 {
            Kind::Finite(gf) => Elem::Fin((v.rem_euclid(gf.p as i64)) as u64),
            Kind::Rational => Elem::Rat(BigRational::from_integer(BigInt::from(v))),
        }
    }

    pub fn from_rational(&self, num: i64, den: i64) -> Result<Elem> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        let n = self.from_i64(num);
        let d = self.from_i64(den);
        self.div(&n, &d)
    }

    pub fn is_zero(&self, a: &Elem) -> bool {
        match a {
            Elem::Fin(x) => *x == 0,
            Elem::Rat(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self, a: &Elem) -> bool {
        match a {
            Elem::Fin(x) => *x == 1,
            Elem::Rat(r) => r.is_one(),
        }
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        match (&*self.0, a, b) {
            (Kind::Finite(gf), Elem::Fin(x), Elem::Fin(y)) => Elem::Fin(gf.add(*x, *y)),
            (Kind::Rational, Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x + y),
            _ => panic!("element does not belong to {self}"),
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        match (&*self.0, a) {
            (Kind::Finite(gf), Elem::Fin(x)) => Elem::Fin(gf.neg(*x)),
            (Kind::Rational, Elem::Rat(x)) => Elem::Rat(-x),
            _ => panic!("element does not belong to {self}"),
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match (&*self.0, a, b) {
            (Kind::Finite(gf), Elem::Fin(x), Elem::Fin(y)) => Elem::Fin(gf.mul(*x, *y)),
            (Kind::Rational, Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x * y),
            _ => panic!("element does not belong to {self}"),
        }
    }

    pub fn inv(&self, a: &Elem) -> Result<Elem> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        Ok(match (&*self.0, a) {
            (Kind::Finite(gf), Elem::Fin(x)) => Elem::Fin(gf.inv(*x)),
            (Kind::Rational, Elem::Rat(x)) => Elem::Rat(x.recip()),
            _ => panic!("element does not belong to {self}"),
        })
    }

    pub fn div(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &Elem, e: u64) -> Elem {
        match (&*self.0, a) {
            (Kind::Finite(gf), Elem::Fin(x)) => Elem::Fin(gf.pow(*x, e)),
            (Kind::Rational, Elem::Rat(x)) => {
                Elem::Rat(num_traits::pow::Pow::pow(x, BigUint::from(e)))
            }
            _ => panic!("element does not belong to {self}"),
        }
    }

    /// Signed exponent; errors on zero with negative exponent.
    pub fn powi(&self, a: &Elem, e: i64) -> Result<Elem> {
        if e >= 0 {
            Ok(self.pow(a, e as u64))
        } else {
            Ok(self.pow(&self.inv(a)?, e.unsigned_abs()))
        }
    }

    /// Multiplicative order (finite fields only).
    pub fn elem_order(&self, a: &Elem) -> Result<u64> {
        let gf = self
            .gf()
            .ok_or_else(|| Error::Unsupported("element order over Q".into()))?;
        let Elem::Fin(x) = a else { unreachable!() };
        if *x == 0 {
            return Err(Error::ZeroElement);
        }
        let mut n = gf.unit_order;
        for &(l, _) in &gf.unit_factors {
            while n % l == 0 && gf.pow(*x, n / l) == 1 {
                n /= l;
            }
        }
        Ok(n)
    }

    /// Discrete logarithm to the fixed primitive root (finite fields only).
    pub fn dlog(&self, a: &Elem) -> Result<u64> {
        let gf = self
            .gf()
            .ok_or_else(|| Error::Unsupported("discrete log over Q".into()))?;
        match a {
            Elem::Fin(0) => Err(Error::ZeroElement),
            Elem::Fin(x) => Ok(gf.dlog(*x)),
            Elem::Rat(_) => panic!("element does not belong to {self}"),
        }
    }

    /// All elements of a finite field in encoding order.
    pub fn elements(&self) -> Vec<Elem> {
        match self.gf() {
            Some(gf) => (0..gf.order).map(Elem::Fin).collect(),
            None => panic!("the rationals cannot be enumerated"),
        }
    }

    /// Units in the order `g^0, g^1, ...` for the primitive root `g`.
    pub fn units(&self) -> Vec<Elem> {
        let gf = self.gf().expect("finite field");
        let mut out = Vec::with_capacity(gf.unit_order as usize);
        let mut x = 1u64;
        for _ in 0..gf.unit_order {
            out.push(Elem::Fin(x));
            x = gf.mul(x, gf.primitive_root);
        }
        out
    }

    /// Little-endian coefficient list over GF(p) (finite fields only).
    pub fn coefficients(&self, a: &Elem) -> Vec<u64> {
        match (self.gf(), a) {
            (Some(gf), Elem::Fin(x)) => gf.digits(*x),
            _ => panic!("coefficients are defined for finite-field elements"),
        }
    }

    pub fn from_coefficients(&self, c: &[u64]) -> Elem {
        let gf = self.gf().expect("finite field");
        let mut d = c.to_vec();
        d.resize(gf.k as usize, 0);
        Elem::Fin(gf.undigits(&d))
    }

    /// Parse an element: integers (any field), `num/den` (rationals or
    /// prime-subfield quotients), or `c0:c1:...` little-endian coefficients.
    pub fn parse_elem(&self, s: &str) -> Result<Elem> {
        let bad = || Error::BadElement(s.to_string());
        let s = s.trim();
        match &*self.0 {
            Kind::Finite(gf) if s.contains(':') => {
                let mut c = Vec::new();
                for part in s.split(':') {
                    let v: i64 = part.trim().parse().map_err(|_| bad())?;
                    c.push(v.rem_euclid(gf.p as i64) as u64);
                }
                if c.len() > gf.k as usize {
                    return Err(bad());
                }
                Ok(self.from_coefficients(&c))
            }
            Kind::Finite(_) => match s.split_once('/') {
                Some((n, d)) => {
                    let n: i64 = n.trim().parse().map_err(|_| bad())?;
                    let d: i64 = d.trim().parse().map_err(|_| bad())?;
                    self.from_rational(n, d).map_err(|_| bad())
                }
                None => Ok(self.from_i64(s.parse().map_err(|_| bad())?)),
            },
            Kind::Rational => {
                let (n, d) = match s.split_once('/') {
                    Some((n, d)) => (n.trim(), d.trim()),
                    None => (s, "1"),
                };
                let n: BigInt = n.parse().map_err(|_| bad())?;
                let d: BigInt = d.parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(Elem::Rat(BigRational::new(n, d)))
            }
        }
    }

    /// Canonical text form: residues for prime fields, `c0:c1:...` for
    /// extensions, `num/den` (or `num`) for rationals.
    pub fn format_elem(&self, a: &Elem) -> String {
        match (&*self.0, a) {
            (Kind::Finite(gf), Elem::Fin(x)) if gf.k == 1 => x.to_string(),
            (Kind::Finite(gf), Elem::Fin(x)) => gf
                .digits(*x)
                .iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(":"),
            (Kind::Rational, Elem::Rat(r)) if r.is_integer() => r.numer().to_string(),
            (Kind::Rational, Elem::Rat(r)) => format!("{}/{}", r.numer(), r.denom()),
            _ => panic!("element does not belong to {self}"),
        }
    }

    /// Whether F^x has an element of order `q`.
    pub fn has_order_q_element(&self, q: u64) -> bool {
        match self.gf() {
            Some(gf) => gf.unit_order % q == 0,
            None => q == 2,
        }
    }

    /// Sylow `q`-subgroup of F^x (the q-primary torsion of Q^x is ±1 for q = 2).
    pub fn sylow_q_units(&self, q: u64) -> CyclicUnits {
        match self.gf() {
            Some(gf) => {
                let (_, order) = arith::q_part(gf.unit_order, q);
                let generator = Elem::Fin(gf.pow(gf.primitive_root, gf.unit_order / order));
                CyclicUnits { generator, order }
            }
            None if q == 2 => CyclicUnits {
                generator: self.from_i64(-1),
                order: 2,
            },
            None => CyclicUnits {
                generator: self.one(),
                order: 1,
            },
        }
    }

    /// Canonical element of order `q`: `g^{|F^x|/q}` (or `-1` over Q).
    pub fn order_q_unit(&self, q: u64) -> Result<Elem> {
        if !self.has_order_q_element(q) {
            return Err(Error::Precondition(format!(
                "{self} has no unit of order {q}"
            )));
        }
        Ok(match self.gf() {
            Some(gf) => Elem::Fin(gf.pow(gf.primitive_root, gf.unit_order / q)),
            None => self.from_i64(-1),
        })
    }

    pub fn power_class(&self, x: &Elem, q: u64, mode: ClassMode) -> Result<PowerClass> {
        PowerClass::of(self, x, q, mode)
    }

    /// |F^x / S| where S = Syl_q(F^x)(F^x)^q.
    pub fn s_subgroup_index(&self, q: u64) -> Cardinal {
        match self.gf() {
            Some(gf) => Cardinal::Finite(classes::s_index(gf.unit_order, q) as u128),
            None => Cardinal::Infinite,
        }
    }

    /// |F^x / (F^x)^q|.
    pub fn qth_power_index(&self, q: u64) -> Cardinal {
        match self.gf() {
            Some(gf) => Cardinal::Finite(num_integer::gcd(q, gf.unit_order) as u128),
            None => Cardinal::Infinite,
        }
    }

    /// Whether `x` is a nonzero square.
    pub fn is_square(&self, x: &Elem) -> bool {
        !self.is_zero(x)
            && self
                .power_class(x, 2, ClassMode::QthPowers)
                .map(|c| c.is_trivial())
                .unwrap_or(false)
    }

    /// A square root of a square (the smallest-encoded one for finite fields).
    pub fn sqrt(&self, x: &Elem) -> Option<Elem> {
        match (&*self.0, x) {
            (Kind::Finite(gf), Elem::Fin(v)) => {
                (0..gf.order).find(|&r| gf.mul(r, r) == *v).map(Elem::Fin)
            }
            (Kind::Rational, Elem::Rat(r)) => {
                if r.is_negative() {
                    return None;
                }
                let n = arith::exact_sqrt(&r.numer().to_biguint()?)?;
                let d = arith::exact_sqrt(&r.denom().to_biguint()?)?;
                Some(Elem::Rat(BigRational::new(n.into(), d.into())))
            }
            _ => None,
        }
    }

    /// Rational value of an element of Q (None for finite fields).
    pub fn as_rational<'a>(&self, x: &'a Elem) -> Option<&'a BigRational> {
        match x {
            Elem::Rat(r) => Some(r),
            Elem::Fin(_) => None,
        }
    }

    /// Small integer view for prime-field residues.
    pub fn as_u64(&self, x: &Elem) -> Option<u64> {
        match x {
            Elem::Fin(v) => Some(*v),
            Elem::Rat(r) => r.to_integer().to_u64(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_descriptors() {
        let f7 = Field::parse("gf:7").unwrap();
        assert_eq!(f7.unit_order(), Some(6));
        let f9 = Field::parse("gf:3^2").unwrap();
        assert_eq!(f9.unit_order(), Some(8));
        assert_eq!(f9.descriptor(), "gf:3^2");
        assert_eq!(Field::parse("gf:4"), Err(Error::NotPrime(4)));
        assert!(matches!(Field::parse("gf:x"), Err(Error::BadFieldSpec(_))));
        assert!(matches!(Field::parse("r"), Err(Error::BadFieldSpec(_))));
        assert!(!Field::parse("q").unwrap().is_finite());
    }

    #[test]
    fn order_q_elements() {
        let f7 = Field::prime(7).unwrap();
        let q = Field::rationals();
        assert!(f7.has_order_q_element(3));
        assert!(!q.has_order_q_element(3));
        assert!(q.has_order_q_element(2));
        assert!(Field::prime(5).unwrap().has_order_q_element(2));
    }

    #[test]
    fn sylow_units() {
        let f7 = Field::prime(7).unwrap();
        let s = f7.sylow_q_units(2);
        assert_eq!((s.generator.clone(), s.order), (f7.from_i64(-1), 2));
        assert_eq!(Field::parse("gf:3^2").unwrap().sylow_q_units(2).order, 8);
        // 3-part of 6
        assert_eq!(f7.sylow_q_units(3).order, 3);
        let q = Field::rationals();
        assert_eq!(q.sylow_q_units(2).generator, q.from_i64(-1));
        assert_eq!(q.sylow_q_units(3).order, 1);
    }

    #[test]
    fn sylow_generator_has_exact_order() {
        for name in ["gf:7", "gf:13", "gf:3^2", "gf:5^2", "gf:2^4"] {
            let f = Field::parse(name).unwrap();
            for q in [2u64, 3, 5] {
                let s = f.sylow_q_units(q);
                assert!(f.is_one(&f.pow(&s.generator, s.order)));
                if s.order > 1 {
                    assert!(!f.is_one(&f.pow(&s.generator, s.order / q)));
                }
            }
        }
    }

    #[test]
    fn element_syntax_roundtrip() {
        let f = Field::parse("gf:5^2").unwrap();
        let x = f.parse_elem("3:4").unwrap();
        assert_eq!(f.format_elem(&x), "3:4");
        assert_eq!(f.coefficients(&x), vec![3, 4]);
        let q = Field::rationals();
        let r = q.parse_elem("-6/4").unwrap();
        assert_eq!(q.format_elem(&r), "-3/2");
        assert!(q.parse_elem("1/0").is_err());
        let f7 = Field::prime(7).unwrap();
        assert_eq!(f7.parse_elem("-1").unwrap(), Elem::Fin(6));
        assert_eq!(f7.parse_elem("1/2").unwrap(), Elem::Fin(4));
    }

    #[test]
    fn indices() {
        assert_eq!(
            Field::prime(11).unwrap().s_subgroup_index(2),
            Cardinal::Finite(1)
        );
        assert_eq!(
            Field::parse("gf:3^2").unwrap().s_subgroup_index(2),
            Cardinal::Finite(1)
        );
        assert_eq!(Field::rationals().s_subgroup_index(2), Cardinal::Infinite);
    }

    #[test]
    fn sqrt_values() {
        let q = Field::rationals();
        assert_eq!(
            q.sqrt(&q.parse_elem("9/4").unwrap()),
            Some(q.parse_elem("3/2").unwrap())
        );
        assert_eq!(q.sqrt(&q.from_i64(2)), None);
        let f7 = Field::prime(7).unwrap();
        assert_eq!(f7.sqrt(&f7.from_i64(2)), Some(f7.from_i64(3)));
    }
}
