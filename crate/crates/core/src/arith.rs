//! Integer number theory: primality, factorization, modular helpers.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Trial division bound used before switching to Pollard rho.
pub const TRIAL_BOUND: u64 = 1_000_000;

fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_BOUND as usize;
        let mut sieve = vec![true; n + 1];
        sieve[0] = false;
        sieve[1] = false;
        let mut i = 2;
        while i * i <= n {
            if sieve[i] {
                let mut j = i * i;
                while j <= n {
                    sieve[j] = false;
                    j += i;
                }
            }
            i += 1;
        }
        sieve
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i as u64))
            .collect()
    })
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn push_factor(out: &mut Vec<(u64, u32)>, p: u64) {
    match out.iter_mut().find(|(q, _)| *q == p) {
        Some((_, e)) => *e += 1,
        None => out.push((p, 1)),
    }
}

fn rho_split(n: u64, out: &mut Vec<(u64, u32)>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        push_factor(out, n);
        return;
    }
    let d = pollard_rho(n);
    rho_split(d, out);
    rho_split(n / d, out);
}

/// Prime factorization of a machine integer, sorted by prime.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for &p in small_primes() {
        if p * p > n {
            break;
        }
        while n.is_multiple_of(p) {
            push_factor(&mut out, p);
            n /= p;
        }
    }
    rho_split(n, &mut out);
    out.sort_unstable();
    out
}

/// Prime factorization of an arbitrary-precision integer.
///
/// Trial division up to [`TRIAL_BOUND`], then Pollard rho once the cofactor
/// fits in 64 bits. Larger unfactored cofactors are reported rather than guessed.
pub fn factor_big(n: &BigUint) -> Result<Vec<(BigUint, u32)>> {
    if n.is_zero() {
        return Err(Error::ZeroElement);
    }
    if let Some(small) = n.to_u64() {
        return Ok(factor_u64(small)
            .into_iter()
            .map(|(p, e)| (BigUint::from(p), e))
            .collect());
    }
    let mut rest = n.clone();
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    for &p in small_primes() {
        let bp = BigUint::from(p);
        let mut e = 0;
        loop {
            let (q, r) = rest.div_rem(&bp);
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e > 0 {
            out.push((bp, e));
        }
        if rest.is_one() {
            return Ok(out);
        }
        if let Some(small) = rest.to_u64() {
            out.extend(
                factor_u64(small)
                    .into_iter()
                    .map(|(p, e)| (BigUint::from(p), e)),
            );
            out.sort();
            return Ok(out);
        }
    }
    Err(Error::FactorizationExhausted(n.to_string()))
}

/// Largest power of `q` dividing `n`, returned as `(exponent, q^exponent)`.
pub fn q_part(mut n: u64, q: u64) -> (u32, u64) {
    let mut e = 0;
    let mut pow = 1;
    while n > 0 && n.is_multiple_of(q) {
        n /= q;
        e += 1;
        pow *= q;
    }
    (e, pow)
}

/// Solve `x ≡ a (mod m)`, `x ≡ b (mod n)` for coprime `m`, `n`.
pub fn crt(a: u64, m: u64, b: u64, n: u64) -> u64 {
    let ext = (m as i128).extended_gcd(&(n as i128));
    debug_assert_eq!(ext.gcd, 1);
    let mn = m as i128 * n as i128;
    let x = (a as i128 * ext.y % mn * n as i128 + b as i128 * ext.x % mn * m as i128) % mn;
    ((x + mn) % mn) as u64
}

/// Integer square root if `n` is a perfect square.
pub fn exact_sqrt(n: &BigUint) -> Option<BigUint> {
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_and_factors() {
        assert!(is_prime(2) && is_prime(13) && is_prime(1_000_000_007));
        assert!(!is_prime(1) && !is_prime(4) && !is_prime(561));
        assert_eq!(factor_u64(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factor_u64(1), vec![]);
        let big = BigUint::from(1_000_000_007u64) * BigUint::from(998_244_353u64) * 12u32;
        let f = factor_big(&big).unwrap();
        assert_eq!(f.len(), 4);
    }

    #[test]
    fn huge_cofactor_is_reported() {
        let p = BigUint::from(18_446_744_073_709_551_557u64); // largest 64-bit prime
        let n = &p * &p;
        assert!(matches!(
            factor_big(&n),
            Err(Error::FactorizationExhausted(_))
        ));
    }

    #[test]
    fn crt_and_q_part() {
        assert_eq!(q_part(48, 2), (4, 16));
        assert_eq!(q_part(6, 3), (1, 3));
        let x = crt(1, 3, 0, 2);
        assert_eq!((x % 3, x % 2), (1, 0));
    }
}
