//! The named groups: `D`, `I_α`, `d`, `H_α`, `Δ_α`, `A_α`, `G(α, b)` and
//! Singer-type abelian groups.

use crate::arith::{factor_u64, q_part};
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::group::{element_order, MatGroup};
use crate::matrix::Mat;
use crate::poly::{binomial_irreducible, Poly};

/// `I_α`: ones on the superdiagonal, `α` in the bottom-left corner.
pub fn make_i_alpha(f: &Field, q: usize, alpha: &Elem) -> Result<Mat> {
    if f.is_zero(alpha) {
        return Err(Error::Precondition("alpha must be nonzero".into()));
    }
    let mut m = Mat::zero(f, q);
    for i in 0..q - 1 {
        m.set(i, i + 1, f.one());
    }
    m.set(q - 1, 0, alpha.clone());
    Ok(m)
}

/// `d = diag(1, ξ, …, ξ^{q-1})` with `ξ` the canonical unit of order `q`.
pub fn make_d(f: &Field, q: usize) -> Result<Mat> {
    let xi = f.order_q_unit(q as u64)?;
    let d: Vec<Elem> = (0..q).map(|i| f.pow(&xi, i as u64)).collect();
    Ok(Mat::diag(f, &d))
}

/// Generators of `D`: a scalar generator of `F^x 1_q` (finite fields only),
/// then one diagonal matrix per slot carrying the Sylow generator.
pub fn make_d_gens(f: &Field, q: usize) -> Result<Vec<Mat>> {
    if !f.has_order_q_element(q as u64) {
        return Err(Error::Precondition(format!("{f} has no unit of order {q}")));
    }
    let syl = f.sylow_q_units(q as u64);
    let mut gens = Vec::new();
    if let Some(g) = f.primitive_root() {
        gens.push(Mat::scalar(f, q, &g));
    }
    for i in 0..q {
        let mut d = vec![f.one(); q];
        d[i] = syl.generator.clone();
        gens.push(Mat::diag(f, &d));
    }
    Ok(gens)
}

/// `D` as a group. Over Q the scalars are adjoined by flag.
pub fn make_d_group(f: &Field, q: usize) -> Result<MatGroup> {
    let gens = make_d_gens(f, q)?;
    MatGroup::new(f, q, gens, !f.is_finite())
}

pub fn is_case_star(f: &Field, q: usize, alpha: &Elem) -> bool {
    q == 2 && !f.is_zero(alpha) && f.is_square(&f.neg(alpha))
}

/// Parameters of `H_α = ⟨D, I_α⟩`.
#[derive(Clone, Debug)]
pub struct MonomialData {
    pub q: usize,
    pub field: Field,
    pub alpha: Elem,
    pub d_gens: Vec<Mat>,
    pub i_alpha: Mat,
    pub pi_image_order: u64,
}

impl MonomialData {
    pub fn new(f: &Field, q: usize, alpha: &Elem) -> Result<MonomialData> {
        Ok(MonomialData {
            q,
            field: f.clone(),
            alpha: alpha.clone(),
            d_gens: make_d_gens(f, q)?,
            i_alpha: make_i_alpha(f, q, alpha)?,
            pi_image_order: q as u64,
        })
    }

    /// `H_α`, with scalars adjoined.
    pub fn group(&self) -> Result<MatGroup> {
        let f = &self.field;
        let mut gens: Vec<Mat> = self
            .d_gens
            .iter()
            .filter(|g| !g.is_scalar(f))
            .cloned()
            .collect();
        gens.push(self.i_alpha.clone());
        MatGroup::new(f, self.q, gens, true)
    }
}

pub fn make_h_alpha(f: &Field, q: usize, alpha: &Elem) -> Result<MatGroup> {
    MonomialData::new(f, q, alpha)?.group()
}

/// `Σ c_i I_α^i`.
pub fn delta_element(f: &Field, i_alpha: &Mat, coeffs: &[Elem]) -> Mat {
    let q = i_alpha.n();
    let mut acc = Mat::zero(f, q);
    let mut p = Mat::identity(f, q);
    for c in coeffs {
        acc = acc.add(f, &p.scale(f, c));
        p = p.mul(f, i_alpha);
    }
    acc
}

/// Coefficients of `b ∈ Δ_α` in the basis `1, I_α, …`; they are the first row of `b`.
pub fn delta_coefficients(b: &Mat) -> Vec<Elem> {
    b.row(0).to_vec()
}

fn check_delta_field(f: &Field, q: usize, alpha: &Elem) -> Result<()> {
    if f.is_zero(alpha) || !binomial_irreducible(f, q as u64, alpha)? {
        return Err(Error::Precondition(format!(
            "X^{q} - {} is reducible over {f}",
            f.format_elem(alpha)
        )));
    }
    Ok(())
}

/// A generator of the cyclic group `Δ_α^x` (finite fields only).
pub(crate) fn delta_generator(f: &Field, i_alpha: &Mat) -> Result<Mat> {
    let size = f.order().expect("finite field");
    let target = size * size - 1;
    for c0 in f.elements() {
        for c1 in f.elements() {
            let x = delta_element(f, i_alpha, &[c0.clone(), c1]);
            if f.is_zero(&x.det(f)) {
                continue;
            }
            if element_order(f, &x)? == target {
                return Ok(x);
            }
        }
    }
    unreachable!("multiplicative group of a finite field is cyclic")
}

/// Generators of `A_α` (scalars are adjoined separately).
pub fn make_a_alpha_gens(f: &Field, q: usize, alpha: &Elem) -> Result<Vec<Mat>> {
    check_delta_field(f, q, alpha)?;
    let i_alpha = make_i_alpha(f, q, alpha)?;
    if !is_case_star(f, q, alpha) {
        return Ok(vec![i_alpha]);
    }
    if f.is_finite() {
        let x = delta_generator(f, &i_alpha)?;
        let size = f.order().unwrap();
        let (_, two_part) = q_part(size + 1, 2);
        let odd = (size + 1) / two_part;
        return Ok(vec![x.pow(f, odd)]);
    }
    let gamma = f
        .sqrt(&f.neg(alpha))
        .expect("case (*) means -alpha is a square");
    let gi = f.inv(&gamma)?;
    let one_plus = Mat::identity(f, 2).add(f, &i_alpha.scale(f, &gi));
    Ok(vec![i_alpha, one_plus])
}

pub fn make_a_alpha(f: &Field, q: usize, alpha: &Elem) -> Result<MatGroup> {
    MatGroup::new(f, q, make_a_alpha_gens(f, q, alpha)?, true)
}

/// Parameters of `G(α, b) = ⟨A_α, db⟩`.
#[derive(Clone, Debug)]
pub struct PrimitiveData {
    pub q: usize,
    pub field: Field,
    pub alpha: Elem,
    pub b_coeffs: Vec<Elem>,
    pub b: Mat,
    pub i_alpha: Mat,
    pub d: Mat,
    pub a_gens: Vec<Mat>,
    pub case_star: bool,
}

impl PrimitiveData {
    pub fn new(f: &Field, q: usize, alpha: &Elem, b_coeffs: &[Elem]) -> Result<PrimitiveData> {
        if b_coeffs.len() > q {
            return Err(Error::Precondition(format!(
                "b needs at most {q} coefficients, got {}",
                b_coeffs.len()
            )));
        }
        let a_gens = make_a_alpha_gens(f, q, alpha)?;
        let i_alpha = make_i_alpha(f, q, alpha)?;
        let mut coeffs = b_coeffs.to_vec();
        coeffs.resize(q, f.zero());
        let b = delta_element(f, &i_alpha, &coeffs);
        if f.is_zero(&b.det(f)) {
            return Err(Error::Precondition(
                "b must be a unit of Delta_alpha".into(),
            ));
        }
        Ok(PrimitiveData {
            q,
            field: f.clone(),
            alpha: alpha.clone(),
            b_coeffs: coeffs,
            b,
            i_alpha,
            d: make_d(f, q)?,
            a_gens,
            case_star: is_case_star(f, q, alpha),
        })
    }

    pub fn db(&self) -> Mat {
        self.d.mul(&self.field, &self.b)
    }

    pub fn a_group(&self) -> Result<MatGroup> {
        MatGroup::new(&self.field, self.q, self.a_gens.clone(), true)
    }

    pub fn group(&self) -> Result<MatGroup> {
        let mut gens = self.a_gens.clone();
        gens.push(self.db());
        MatGroup::new(&self.field, self.q, gens, true)
    }

    pub fn det_b(&self) -> Elem {
        self.b.det(&self.field)
    }
}

pub fn make_g_alpha_b(f: &Field, q: usize, alpha: &Elem, b_coeffs: &[Elem]) -> Result<MatGroup> {
    PrimitiveData::new(f, q, alpha, b_coeffs)?.group()
}

/// Companion matrix of a monic polynomial (last row holds `-c_0, …, -c_{n-1}`).
pub fn companion(f: &Field, p: &Poly) -> Mat {
    let n = p.degree();
    let mut m = Mat::zero(f, n);
    for i in 0..n - 1 {
        m.set(i, i + 1, f.one());
    }
    for j in 0..n {
        m.set(n - 1, j, f.neg(&p.coeffs[j]));
    }
    m
}

/// Least monic primitive polynomial of degree `q` (in the same order as field moduli).
pub fn primitive_polynomial(f: &Field, q: usize) -> Result<Poly> {
    let size = f
        .order()
        .ok_or_else(|| Error::Unsupported("primitive polynomials over Q".into()))?;
    let ext_units = size
        .checked_pow(q as u32)
        .ok_or_else(|| Error::Unsupported(format!("GF({size}^{q}) is too large")))?
        - 1;
    let primes: Vec<u64> = factor_u64(ext_units).into_iter().map(|(l, _)| l).collect();
    let elems = f.elements();
    let total = (size as u128).pow(q as u32);
    for t in 0..total {
        let mut coeffs = Vec::with_capacity(q + 1);
        let mut r = t;
        for _ in 0..q {
            coeffs.push(elems[(r % size as u128) as usize].clone());
            r /= size as u128;
        }
        coeffs.push(f.one());
        if f.is_zero(&coeffs[0]) {
            continue;
        }
        let p = Poly::new(f, coeffs);
        if !p.is_irreducible_finite(f)? {
            continue;
        }
        let x = Poly::x(f);
        let one = Poly::constant(f, f.one());
        if primes
            .iter()
            .all(|l| x.powmod(f, (ext_units / l) as u128, &p).unwrap() != one)
        {
            return Ok(p);
        }
    }
    unreachable!("primitive polynomials exist in every degree")
}

/// Singer-type abelian group: a generator of `GF(|F|^q)^x` acting on `F^q`.
pub fn make_singer(f: &Field, q: usize) -> Result<(Poly, MatGroup)> {
    let p = primitive_polynomial(f, q)?;
    let c = companion(f, &p);
    Ok((p, MatGroup::new(f, q, vec![c], true)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Cardinal;
    use crate::group::Nilpotency;

    #[test]
    fn i_alpha_shape() {
        let f = Field::prime(7).unwrap();
        let i2 = make_i_alpha(&f, 3, &f.from_i64(2)).unwrap();
        assert_eq!(i2.format(&f), "0,1,0;0,0,1;2,0,0");
        assert_eq!(i2.pow(&f, 3), Mat::scalar(&f, 3, &f.from_i64(2)));
        assert_eq!(i2.det(&f), f.from_i64(2));
        let f3 = Field::prime(3).unwrap();
        assert_eq!(
            make_i_alpha(&f3, 2, &f3.one()).unwrap().format(&f3),
            "0,1;1,0"
        );
        assert!(make_i_alpha(&f3, 2, &f3.zero()).is_err());
    }

    #[test]
    fn d_orders() {
        for (p, q, order) in [(3u64, 2usize, 4u128), (5, 2, 16), (7, 3, 54)] {
            let f = Field::prime(p).unwrap();
            assert_eq!(
                make_d_group(&f, q).unwrap().order().unwrap(),
                Cardinal::Finite(order)
            );
        }
    }

    #[test]
    fn h1_small_fields() {
        let f3 = Field::prime(3).unwrap();
        let h = make_h_alpha(&f3, 2, &f3.one()).unwrap();
        assert_eq!(h.order().unwrap(), Cardinal::Finite(8));
        assert_eq!(h.nilpotency_class().unwrap(), Nilpotency::Class(2));
        let f5 = Field::prime(5).unwrap();
        let h = make_h_alpha(&f5, 2, &f5.one()).unwrap();
        assert_eq!(h.order().unwrap(), Cardinal::Finite(32));
        assert_eq!(h.nilpotency_class().unwrap(), Nilpotency::Class(3));
    }

    #[test]
    fn a_alpha_examples() {
        let f3 = Field::prime(3).unwrap();
        let a = make_a_alpha(&f3, 2, &f3.from_i64(-1)).unwrap();
        assert_eq!(a.order().unwrap(), Cardinal::Finite(8));
        let f7 = Field::prime(7).unwrap();
        let a = make_a_alpha(&f7, 2, &f7.from_i64(-1)).unwrap();
        assert_eq!(a.order().unwrap(), Cardinal::Finite(48));
        let a = make_a_alpha(&f7, 3, &f7.from_i64(2)).unwrap();
        assert_eq!(a.projective_order().unwrap(), 3);
        assert!(make_a_alpha(&f7, 3, &f7.one()).is_err());
    }

    #[test]
    fn g_alpha_b_examples() {
        let f3 = Field::prime(3).unwrap();
        let g = make_g_alpha_b(&f3, 2, &f3.from_i64(-1), &[f3.one()]).unwrap();
        assert_eq!(g.order().unwrap(), Cardinal::Finite(16));
        assert_eq!(g.nilpotency_class().unwrap(), Nilpotency::Class(3));
        let f7 = Field::prime(7).unwrap();
        let g = make_g_alpha_b(&f7, 2, &f7.from_i64(-1), &[f7.one()]).unwrap();
        assert_eq!(g.order().unwrap(), Cardinal::Finite(96));
        assert_eq!(g.nilpotency_class().unwrap(), Nilpotency::Class(4));
        let g = make_g_alpha_b(&f7, 3, &f7.from_i64(2), &[f7.one()]).unwrap();
        assert_eq!(g.projective_order().unwrap(), 9);
        assert_eq!(g.nilpotency_class().unwrap(), Nilpotency::Class(2));
    }

    #[test]
    fn case_star_detection() {
        let f3 = Field::prime(3).unwrap();
        assert!(is_case_star(&f3, 2, &f3.from_i64(-1)));
        let f5 = Field::prime(5).unwrap();
        assert!(!is_case_star(&f5, 2, &f5.from_i64(2)));
        let f7 = Field::prime(7).unwrap();
        assert!(!is_case_star(&f7, 3, &f7.from_i64(2)));
    }

    #[test]
    fn rational_case_star() {
        let q = Field::rationals();
        let a = make_a_alpha(&q, 2, &q.from_i64(-1)).unwrap();
        assert_eq!(a.projective_order().unwrap(), 4);
        let a = make_a_alpha(&q, 2, &q.from_i64(-4)).unwrap();
        assert_eq!(a.projective_order().unwrap(), 4);
    }

    #[test]
    fn singer_orders() {
        let f5 = Field::prime(5).unwrap();
        let (_, s) = make_singer(&f5, 2).unwrap();
        assert_eq!(s.order().unwrap(), Cardinal::Finite(24));
        let f7 = Field::prime(7).unwrap();
        let (_, s) = make_singer(&f7, 3).unwrap();
        assert_eq!(s.order().unwrap(), Cardinal::Finite(342));
    }
}
