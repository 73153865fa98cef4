//! Element orders in GL(n, F) and PGL(n, F).

use num_integer::Integer;

use crate::arith::factor_u64;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Mat;
use crate::poly::Poly;

fn euler_phi(k: u64) -> u64 {
    factor_u64(k)
        .into_iter()
        .fold(1, |acc, (p, e)| acc * (p - 1) * p.pow(e - 1))
}

/// lcm of all `r` with `phi(r) <= bound`, or None on overflow.
fn cyclotomic_exponent(bound: u64) -> Option<u64> {
    let mut m: u64 = 1;
    for r in 1..=(2 * bound * bound + 2) {
        if euler_phi(r) <= bound {
            m = m.checked_mul(r / m.gcd(&r))?;
        }
    }
    Some(m)
}

/// A multiple of the exponent of GL(n, p^k), with its prime factors.
fn gl_exponent(f: &Field, n: usize) -> Result<(u64, Vec<u64>)> {
    let p = f.characteristic();
    let order = f.order().expect("finite field");
    let too_big = || Error::Unsupported(format!("element orders in GL({n}, {f}) overflow 64 bits"));
    let mut m: u64 = 1;
    let mut ppart = 1u64;
    while (ppart as usize) < n {
        ppart = ppart.checked_mul(p).ok_or_else(too_big)?;
    }
    m = m.checked_mul(ppart).ok_or_else(too_big)?;
    let mut qi: u64 = 1;
    for _ in 0..n {
        qi = qi.checked_mul(order).ok_or_else(too_big)?;
        let t = qi - 1;
        m = m.checked_mul(t / m.gcd(&t)).ok_or_else(too_big)?;
    }
    let primes = factor_u64(m).into_iter().map(|(l, _)| l).collect();
    Ok((m, primes))
}

fn reduce(m: u64, primes: &[u64], mut holds: impl FnMut(u64) -> bool) -> u64 {
    let mut m = m;
    for &l in primes {
        while m.is_multiple_of(l) && holds(m / l) {
            m /= l;
        }
    }
    m
}

/// Multiplicative order of an invertible matrix; `InfiniteOrder` over Q when unbounded.
pub fn element_order(f: &Field, g: &Mat) -> Result<u64> {
    let n = g.n();
    let one = Mat::identity(f, n);
    if f.is_finite() {
        let (m, primes) = gl_exponent(f, n)?;
        return Ok(reduce(m, &primes, |e| g.pow(f, e) == one));
    }
    // Over Q a finite-order matrix is semisimple with cyclotomic charpoly.
    let mut cp = g.charpoly(f);
    let mut m: u64 = 1;
    let kmax = 2 * (n as u64) * (n as u64) + 2;
    for k in 1..=kmax {
        if euler_phi(k) as usize > n {
            continue;
        }
        let phi = Poly::cyclotomic(f, k as usize);
        loop {
            let (quo, rem) = cp.divrem(f, &phi)?;
            if !rem.is_zero(f) {
                break;
            }
            cp = quo;
            m = m.lcm(&k);
        }
    }
    if cp.degree() > 0 || g.pow(f, m) != one {
        return Err(Error::InfiniteOrder);
    }
    let primes: Vec<u64> = factor_u64(m).into_iter().map(|(l, _)| l).collect();
    Ok(reduce(m, &primes, |e| g.pow(f, e) == one))
}

/// Order of the image of `g` in PGL(n, F).
pub fn projective_order(f: &Field, g: &Mat) -> Result<u64> {
    let n = g.n();
    let (m, primes) = if f.is_finite() {
        gl_exponent(f, n)?
    } else {
        let m = cyclotomic_exponent((n * n) as u64)
            .ok_or_else(|| Error::Unsupported(format!("projective orders in PGL({n}, Q)")))?;
        if !g.pow(f, m).is_scalar(f) {
            return Err(Error::InfiniteOrder);
        }
        (m, factor_u64(m).into_iter().map(|(l, _)| l).collect())
    };
    Ok(reduce(m, &primes, |e| g.pow(f, e).is_scalar(f)))
}
