//! GF(p^k) internals. Elements are encoded as `Σ c_i p^i` with `0 ≤ c_i < p`,
//! where `c_i` is the coefficient of `x^i` in the residue modulo the defining
//! polynomial.

use std::collections::HashMap;

use crate::arith::{factor_u64, mul_mod, pow_mod};

/// Fields up to this many units get exp/log tables.
const TABLE_LIMIT: u64 = 1 << 20;

#[derive(Debug)]
pub(crate) struct Gf {
    pub p: u64,
    pub k: u32,
    pub order: u64,
    /// Monic defining polynomial, low degree first, length `k + 1`.
    pub modulus: Vec<u64>,
    pub unit_order: u64,
    pub unit_factors: Vec<(u64, u32)>,
    pub primitive_root: u64,
    exp: Vec<u64>,
    log: Vec<u32>,
}

impl Gf {
    pub fn new(p: u64, k: u32) -> Gf {
        let order = p.pow(k);
        let modulus = if k == 1 {
            vec![0, 1]
        } else {
            least_irreducible(p, k)
        };
        let unit_order = order - 1;
        let mut gf = Gf {
            p,
            k,
            order,
            modulus,
            unit_order,
            unit_factors: factor_u64(unit_order),
            primitive_root: 1,
            exp: Vec::new(),
            log: Vec::new(),
        };
        gf.primitive_root = (1..order)
            .find(|&g| gf.is_generator(g))
            .expect("multiplicative group of a finite field is cyclic");
        if unit_order <= TABLE_LIMIT {
            let n = unit_order as usize;
            let mut exp = Vec::with_capacity(n);
            let mut log = vec![0u32; order as usize];
            let mut x = 1u64;
            for i in 0..n {
                exp.push(x);
                log[x as usize] = i as u32;
                x = gf.mul_slow(x, gf.primitive_root);
            }
            gf.exp = exp;
            gf.log = log;
        }
        gf
    }

    fn is_generator(&self, g: u64) -> bool {
        self.unit_factors
            .iter()
            .all(|&(l, _)| self.pow(g, self.unit_order / l) != 1)
    }

    pub fn digits(&self, mut a: u64) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.k as usize);
        for _ in 0..self.k {
            out.push(a % self.p);
            a /= self.p;
        }
        out
    }

    pub fn undigits(&self, d: &[u64]) -> u64 {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c % self.p)
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        if self.k == 1 {
            let s = a + b;
            return if s >= self.p { s - self.p } else { s };
        }
        let (mut a, mut b, mut place, mut out) = (a, b, 1u64, 0u64);
        for _ in 0..self.k {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn neg(&self, a: u64) -> u64 {
        if self.k == 1 {
            return if a == 0 { 0 } else { self.p - a };
        }
        let d: Vec<u64> = self
            .digits(a)
            .into_iter()
            .map(|c| (self.p - c) % self.p)
            .collect();
        self.undigits(&d)
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.k == 1 {
            return mul_mod(a, b, self.p);
        }
        if !self.log.is_empty() {
            let s = self.log[a as usize] as u64 + self.log[b as usize] as u64;
            return self.exp[(s % self.unit_order) as usize];
        }
        self.mul_slow(a, b)
    }

    fn mul_slow(&self, a: u64, b: u64) -> u64 {
        if self.k == 1 {
            return mul_mod(a, b, self.p);
        }
        let prod = poly_mul(&self.digits(a), &self.digits(b), self.p);
        let r = poly_rem(&prod, &self.modulus, self.p);
        let mut d = r;
        d.resize(self.k as usize, 0);
        self.undigits(&d)
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        if self.k == 1 {
            return pow_mod(a, e, self.p);
        }
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        if !self.log.is_empty() {
            let l = self.log[a as usize] as u128 * (e % self.unit_order) as u128;
            return self.exp[(l % self.unit_order as u128) as usize];
        }
        let (mut base, mut acc) = (a, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(a != 0);
        if !self.log.is_empty() {
            let l = self.log[a as usize] as u64;
            return self.exp[((self.unit_order - l) % self.unit_order) as usize];
        }
        self.pow(a, self.unit_order - 1)
    }

    /// Discrete logarithm to base `primitive_root`; table lookup or baby-step giant-step.
    pub fn dlog(&self, a: u64) -> u64 {
        debug_assert!(a != 0);
        if !self.log.is_empty() {
            return self.log[a as usize] as u64;
        }
        let n = self.unit_order;
        let m = (n as f64).sqrt().ceil() as u64;
        let mut baby = HashMap::with_capacity(m as usize);
        let mut x = 1u64;
        for j in 0..m {
            baby.entry(x).or_insert(j);
            x = self.mul(x, self.primitive_root);
        }
        let factor = self.inv(self.pow(self.primitive_root, m));
        let mut y = a;
        for i in 0..=m {
            if let Some(&j) = baby.get(&y) {
                return (i * m + j) % n;
            }
            y = self.mul(y, factor);
        }
        unreachable!("primitive root generates every unit")
    }
}

fn trim(v: &mut Vec<u64>) {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
}

pub(crate) fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    trim(&mut out);
    out
}

/// Remainder of `a` modulo the monic polynomial `m`.
pub(crate) fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (i, &c) in m.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - mul_mod(lead, c, p)) % p;
            }
        }
        r.pop();
    }
    if r.is_empty() {
        r.push(0);
    }
    trim(&mut r);
    r
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    trim(&mut a);
    trim(&mut b);
    while !(b.len() == 1 && b[0] == 0) {
        let inv = pow_mod(*b.last().unwrap(), p - 2, p);
        let monic: Vec<u64> = b.iter().map(|&c| mul_mod(c, inv, p)).collect();
        let r = poly_rem(&a, &monic, p);
        a = monic;
        b = r;
    }
    a
}

fn poly_powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = poly_rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_rem(&poly_mul(&acc, &b, p), m, p);
        }
        b = poly_rem(&poly_mul(&b, &b, p), m, p);
        e >>= 1;
    }
    acc
}

/// Rabin's test for a monic polynomial of degree `k` over GF(p).
pub(crate) fn is_irreducible_gfp(f: &[u64], p: u64) -> bool {
    let k = f.len() as u32 - 1;
    let x = vec![0u64, 1];
    // frob[i] = X^{p^i} mod f
    let mut frob = vec![poly_rem(&x, f, p)];
    for _ in 0..k {
        let next = poly_powmod(frob.last().unwrap(), p, f, p);
        frob.push(next);
    }
    if frob[k as usize] != poly_rem(&x, f, p) {
        return false;
    }
    for (l, _) in factor_u64(k as u64) {
        let mut h = frob[(k as u64 / l) as usize].clone();
        h.resize(h.len().max(2), 0);
        h[1] = (h[1] + p - 1) % p;
        trim(&mut h);
        let g = poly_gcd(f, &h, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// Lexicographically least monic irreducible polynomial of degree `k`,
/// comparing coefficients from `x^{k-1}` down to the constant term.
pub(crate) fn least_irreducible(p: u64, k: u32) -> Vec<u64> {
    let count = p.pow(k);
    for t in 0..count {
        let mut f = Vec::with_capacity(k as usize + 1);
        let mut r = t;
        for _ in 0..k {
            f.push(r % p);
            r /= p;
        }
        f.push(1);
        if f[0] != 0 && is_irreducible_gfp(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf9_modulus_and_root() {
        let gf = Gf::new(3, 2);
        // X^2 + 1 is the least irreducible quadratic over GF(3)
        assert_eq!(gf.modulus, vec![1, 0, 1]);
        assert_eq!(gf.unit_order, 8);
        let g = gf.primitive_root;
        assert_eq!(gf.pow(g, 8), 1);
        assert_ne!(gf.pow(g, 4), 1);
    }

    #[test]
    fn rabin_agrees_with_root_count_for_quadratics() {
        for p in [2u64, 3, 5, 7] {
            for c0 in 0..p {
                for c1 in 0..p {
                    let f = [c0, c1, 1];
                    let has_root = (0..p).any(|x| (c0 + c1 * x + x * x) % p == 0);
                    assert_eq!(is_irreducible_gfp(&f, p), !has_root);
                }
            }
        }
    }

    #[test]
    fn slow_and_table_paths_agree() {
        let gf = Gf::new(5, 3);
        for a in 1..gf.order {
            for b in [1u64, 7, 33, 124] {
                assert_eq!(gf.mul(a, b), gf.mul_slow(a, b));
            }
            assert_eq!(gf.mul(a, gf.inv(a)), 1);
            assert_eq!(gf.pow(gf.primitive_root, gf.dlog(a)), a);
        }
    }
}
