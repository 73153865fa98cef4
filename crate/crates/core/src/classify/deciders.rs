//! Determinant criteria for conjugacy.

use serde::Serialize;

use crate::construct::{delta_element, is_case_star, make_i_alpha, PrimitiveData};
use crate::error::{Error, Result};
use crate::field::{ClassMode, Elem, Field, UnitSubgroup};
use crate::matrix::Mat;
use crate::oracle::conjugator_search;
use crate::props::{ddet_a_alpha, det_group, primitivity_criterion};

/// Whether `α ∈ S = Syl_q(F^x)(F^x)^q`.
pub fn in_s(f: &Field, q: usize, alpha: &Elem) -> Result<bool> {
    Ok(f.power_class(alpha, q as u64, ClassMode::ModS)?
        .is_trivial())
}

/// Conjugacy of `H_α1` and `H_α2`: both in `S`, or both outside with `⟨α1 S⟩ = ⟨α2 S⟩`.
pub fn monomial_conjugate(f: &Field, q: usize, alpha1: &Elem, alpha2: &Elem) -> Result<bool> {
    let c1 = f.power_class(alpha1, q as u64, ClassMode::ModS)?;
    let c2 = f.power_class(alpha2, q as u64, ClassMode::ModS)?;
    Ok(match (c1.is_trivial(), c2.is_trivial()) {
        (true, true) => true,
        (false, false) => c1.same_cyclic_subgroup(&c2),
        _ => false,
    })
}

/// `I·a` for a diagonal `a`, with `I = I_1` the cyclic permutation matrix.
pub fn i_times(f: &Field, a: &[Elem]) -> Result<Mat> {
    let i = make_i_alpha(f, a.len(), &f.one())?;
    Ok(i.mul(f, &Mat::diag(f, a)))
}

/// `Ia ~ Ib` iff `det a = det b`; when they agree, a diagonal `x` with `x·Ia·x⁻¹ = Ib`.
pub fn ia_conjugate(f: &Field, a: &[Elem], b: &[Elem]) -> Result<(bool, Option<Mat>)> {
    if a.len() != b.len() {
        return Err(Error::Dimension {
            expected: a.len(),
            found: b.len(),
        });
    }
    if a.iter().chain(b).any(|x| f.is_zero(x)) {
        return Err(Error::Singular);
    }
    let prod = |v: &[Elem]| v.iter().fold(f.one(), |acc, x| f.mul(&acc, x));
    if prod(a) != prod(b) {
        return Ok((false, None));
    }
    // (Ia) has a_{i+1} at (i, i+1) and a_0 at (q-1, 0); conjugating by x
    // scales entry (i, j) by x_i / x_j
    let q = a.len();
    let mut x = vec![f.one(); q];
    for i in 0..q - 1 {
        x[i + 1] = f.div(&f.mul(&x[i], &a[i + 1]), &b[i + 1])?;
    }
    Ok((true, Some(Mat::diag(f, &x))))
}

/// `d·b_1 ~ d·b_2` (elements) iff `det b_1 = det b_2`.
pub fn db_conjugate(f: &Field, q: usize, alpha: &Elem, b1: &[Elem], b2: &[Elem]) -> Result<bool> {
    let i = make_i_alpha(f, q, alpha)?;
    Ok(delta_element(f, &i, b1).det(f) == delta_element(f, &i, b2).det(f))
}

/// Outcome of a conjugacy question that the determinant criteria may not settle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "decision", rename_all = "snake_case")]
pub enum Decision {
    Criterion { conjugate: bool },
    BruteForce { conjugate: bool },
    Undecided { reason: String },
}

impl Decision {
    pub fn conjugate(&self) -> Option<bool> {
        match self {
            Decision::Criterion { conjugate } | Decision::BruteForce { conjugate } => {
                Some(*conjugate)
            }
            Decision::Undecided { .. } => None,
        }
    }
}

/// The two determinant conditions for primitive `G(α, b_1)`, `G(α, b_2)`.
pub fn determinant_conditions(
    f: &Field,
    q: usize,
    alpha: &Elem,
    b1: &[Elem],
    b2: &[Elem],
) -> Result<bool> {
    let p1 = PrimitiveData::new(f, q, alpha, b1)?;
    let p2 = PrimitiveData::new(f, q, alpha, b2)?;
    let d1 = det_group(&p1.group()?)?;
    let d2 = det_group(&p2.group()?)?;
    if !d1.same_as(&d2) {
        return Ok(false);
    }
    let a = ddet_a_alpha(f, q, alpha)?;
    a.contains(f, &f.div(&p1.det_b(), &p2.det_b())?)
}

/// Conjugacy of primitive `G(α, b_1)` and `G(α, b_2)`.
pub fn primitive_conjugate(
    f: &Field,
    q: usize,
    alpha: &Elem,
    b1: &[Elem],
    b2: &[Elem],
) -> Result<Decision> {
    for b in [b1, b2] {
        let p = PrimitiveData::new(f, q, alpha, b)?;
        if !primitivity_criterion(f, q, alpha, &p.det_b())? {
            return Err(Error::Precondition("G(alpha, b) is not primitive".into()));
        }
    }
    if is_case_star(f, q, alpha) {
        if !f.is_finite() {
            return Ok(Decision::Undecided {
                reason: "undecided by the determinant criteria (q = 2, -alpha a square)".into(),
            });
        }
        let g1 = PrimitiveData::new(f, q, alpha, b1)?.group()?;
        let g2 = PrimitiveData::new(f, q, alpha, b2)?.group()?;
        return Ok(Decision::BruteForce {
            conjugate: conjugator_search(&g1, &g2)?.is_some(),
        });
    }
    Ok(Decision::Criterion {
        conjugate: determinant_conditions(f, q, alpha, b1, b2)?,
    })
}

/// `Ddet(G(α, b))` and the coset `det(b)·Ddet(A_α)` as text.
pub fn primitive_certificate(
    f: &Field,
    q: usize,
    alpha: &Elem,
    b: &[Elem],
) -> Result<(UnitSubgroup, String)> {
    let p = PrimitiveData::new(f, q, alpha, b)?;
    let ddet = det_group(&p.group()?)?;
    let a = ddet_a_alpha(f, q, alpha)?;
    let coset = match &a {
        UnitSubgroup::Finite { index, .. } => {
            format!("dlog(det b) = {} mod {index}", f.dlog(&p.det_b())? % index)
        }
        UnitSubgroup::ModQthPowers { .. } => format!(
            "{} * <{}>",
            f.power_class(&p.det_b(), q as u64, ClassMode::QthPowers)?
                .label(f),
            a.describe()
        ),
    };
    Ok((ddet, coset))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_classes() {
        let q = Field::rationals();
        assert!(!monomial_conjugate(&q, 2, &q.from_i64(2), &q.from_i64(3)).unwrap());
        assert!(monomial_conjugate(&q, 2, &q.from_i64(2), &q.from_i64(18)).unwrap());
        assert!(monomial_conjugate(&q, 2, &q.from_i64(2), &q.from_i64(-2)).unwrap());
        let f5 = Field::prime(5).unwrap();
        for a in 1..5 {
            assert!(monomial_conjugate(&f5, 2, &f5.from_i64(3), &f5.from_i64(a)).unwrap());
        }
    }

    #[test]
    fn ia_conjugators() {
        let f = Field::prime(7).unwrap();
        let e = |v: &[i64]| v.iter().map(|&x| f.from_i64(x)).collect::<Vec<_>>();
        let (a, b) = (e(&[1, 2]), e(&[2, 1]));
        let (ok, x) = ia_conjugate(&f, &a, &b).unwrap();
        assert!(ok);
        let x = x.unwrap();
        assert_eq!(
            Mat::conjugate(&f, &x, &i_times(&f, &a).unwrap()).unwrap(),
            i_times(&f, &b).unwrap()
        );
        let (ok, _) = ia_conjugate(&f, &e(&[1, 1]), &e(&[1, 3])).unwrap();
        assert!(!ok);
        let (ok, x) = ia_conjugate(&f, &a, &a).unwrap();
        assert!(ok && x.unwrap().is_identity(&f));
    }

    #[test]
    fn case_star_routes_to_brute_force() {
        let f = Field::prime(7).unwrap();
        let d =
            primitive_conjugate(&f, 2, &f.from_i64(-1), &[f.one()], &[f.one(), f.one()]).unwrap();
        assert_eq!(d, Decision::BruteForce { conjugate: true });
        let q = Field::rationals();
        let d =
            primitive_conjugate(&q, 2, &q.from_i64(-1), &[q.one()], &[q.one(), q.one()]).unwrap();
        assert!(d.conjugate().is_none());
    }

    #[test]
    fn rational_criterion() {
        let q = Field::rationals();
        let e = |v: &[i64]| v.iter().map(|&x| q.from_i64(x)).collect::<Vec<_>>();
        // alpha = 2: det(b) = b0^2 - 2 b1^2; 3 + I gives 7, 2 + 3I gives -14, 1 + 2I gives -7
        let d = primitive_conjugate(&q, 2, &q.from_i64(2), &e(&[3, 1]), &e(&[2, 3])).unwrap();
        assert_eq!(d, Decision::Criterion { conjugate: true });
        let d = primitive_conjugate(&q, 2, &q.from_i64(2), &e(&[3, 1]), &e(&[1, 2])).unwrap();
        assert_eq!(d, Decision::Criterion { conjugate: false });
    }
}
