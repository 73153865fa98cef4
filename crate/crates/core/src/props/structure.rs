//! Structure checks on primitive nilpotent groups and on the quotients
//! `E^x / F^x` that control them.

use serde::Serialize;

use crate::arith::q_part;
use crate::construct::{delta_element, delta_generator, is_case_star, make_d, make_i_alpha};
use crate::error::{Error, Result};
use crate::field::{Cardinal, Elem, Field};
use crate::group::{projective_order, MatGroup};
use crate::matrix::{Mat, Span};
use crate::poly::binomial_irreducible;

use super::{is_absolutely_irreducible, is_irreducible, is_primitive, projective_points};

#[derive(Clone, Debug, Default, Serialize)]
pub struct KonyukhSeries {
    pub applicable: bool,
    pub note: Option<String>,
    pub k_order: u64,
    pub k_abelian: bool,
    pub k_is_q_group: bool,
    pub sigma_dim: usize,
    pub sigma_is_field: bool,
    pub h_projective_order: u64,
    pub galois_order: u64,
    pub galois_matches_sigma: bool,
    pub galois_divides_q: bool,
    pub hh_scalar: bool,
}

impl KonyukhSeries {
    pub fn passed(&self) -> bool {
        !self.applicable
            || (self.k_abelian
                && self.k_is_q_group
                && self.sigma_is_field
                && self.galois_matches_sigma
                && self.galois_divides_q
                && self.hh_scalar)
    }
}

fn not_applicable(note: &str) -> KonyukhSeries {
    KonyukhSeries {
        applicable: false,
        note: Some(format!("not applicable: {note}")),
        ..Default::default()
    }
}

/// Whether the F-span of `elems` (commuting matrices) is a field.
fn span_is_field(f: &Field, basis: &[Mat]) -> Result<bool> {
    let n = basis[0].n();
    let mut span = Span::new(n * n);
    for b in basis {
        span.insert(f, b.as_vector());
    }
    for a in basis {
        for b in basis {
            if !span.contains(f, a.mul(f, b).as_vector()) {
                return Ok(false);
            }
        }
    }
    let s = basis.len();
    if f.is_finite() {
        let elems = f.elements();
        let total = elems.len().pow(s as u32);
        for t in 1..total {
            let mut r = t;
            let mut x = Mat::zero(f, n);
            for b in basis {
                x = x.add(f, &b.scale(f, &elems[r % elems.len()]));
                r /= elems.len();
            }
            if f.is_zero(&x.det(f)) {
                return Ok(false);
            }
        }
        return Ok(true);
    }
    // over Q a commutative subalgebra that is a field has dimension 1 or n (n prime)
    if s == 1 {
        return Ok(true);
    }
    if s != n || n > 3 {
        return Ok(false);
    }
    let mut candidates: Vec<Mat> = basis.to_vec();
    for i in 0..s {
        for j in i + 1..s {
            candidates.push(basis[i].add(f, &basis[j]));
        }
    }
    for x in candidates {
        if x.charpoly(f).roots(f)?.is_empty() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// `K = [G, G]`, `H = C_G(K)`, `Σ = ⟨K⟩_F` and the clauses relating them.
pub fn konyukh_check(g: &MatGroup) -> Result<KonyukhSeries> {
    let f = g.field();
    let q = g.degree() as u64;
    if f.characteristic() == q {
        return Ok(not_applicable("characteristic equals the degree"));
    }
    if !is_irreducible(g)?.irreducible {
        return Ok(not_applicable("reducible"));
    }
    if !is_absolutely_irreducible(g) {
        return Ok(not_applicable("not absolutely irreducible"));
    }
    if !is_primitive(g)?.primitive {
        return Ok(not_applicable("imprimitive"));
    }
    if !g.is_nilpotent()? {
        return Ok(not_applicable("not nilpotent"));
    }
    let k = g.derived_subgroup()?;
    let kc = k.closure()?;
    let k_order = kc.len() as u64;
    let (_, qpow) = q_part(k_order, q);
    let mut span = Span::new(g.degree() * g.degree());
    let mut basis = Vec::new();
    for x in kc.elements() {
        if span.insert(f, x.as_vector()) {
            basis.push(x.clone());
        }
    }
    let sigma_dim = basis.len();
    let h = g.centralizer(k.gens())?;
    let h_projective_order = h.projective_order()?;
    let galois_order = g.projective_order()? / h_projective_order;
    let hh = h.derived_subgroup()?;
    let hh_scalar = hh.closure()?.elements().iter().all(|x| x.is_scalar(f));
    Ok(KonyukhSeries {
        applicable: true,
        note: None,
        k_order,
        k_abelian: k.is_abelian(),
        k_is_q_group: qpow == k_order,
        sigma_dim,
        sigma_is_field: span_is_field(f, &basis)?,
        h_projective_order,
        galois_order,
        galois_matches_sigma: galois_order == sigma_dim as u64,
        galois_divides_q: q.is_multiple_of(galois_order),
        hh_scalar,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Syl2Case {
    /// `σ(ε_m) = -ε_m⁻¹`, quotient generated by `ε_m F^x`, order `2^{m-1}`.
    #[serde(rename = "i")]
    I,
    /// `σ(ε_m) = ε_m⁻¹`, quotient generated by `(1 + ε_m) F^x`, order `2^m`.
    #[serde(rename = "ii")]
    II,
}

#[derive(Clone, Debug, Serialize)]
pub struct Syl2Structure {
    pub case: Syl2Case,
    pub m: u32,
    pub predicted_order: u64,
    pub generator: Vec<Vec<String>>,
    pub generator_order: u64,
    /// `|Syl_2(E^x/F^x)|` by enumeration (finite fields only).
    pub brute_force_order: Option<u64>,
    pub consistent: bool,
}

/// Sylow 2-subgroup of `E^x/F^x` for `E = F(ε)`, realized as `Δ_{-1}`; the
/// involution of `E/F` is conjugation by `d = diag(1, -1)`.
pub fn syl2_quotient_structure(f: &Field) -> Result<Syl2Structure> {
    let minus_one = f.from_i64(-1);
    if f.characteristic() == 2 || f.is_square(&minus_one) {
        return Err(Error::Precondition(format!(
            "{f} contains a square root of -1"
        )));
    }
    let i = make_i_alpha(f, 2, &minus_one)?;
    let d = make_d(f, 2)?;
    let (m, eps_m) = if f.is_finite() {
        let size = f.order().unwrap();
        let x = delta_generator(f, &i)?;
        let (m, two_part) = q_part(size * size - 1, 2);
        (m, x.pow(f, (size * size - 1) / two_part))
    } else {
        // Syl_2(Q(i)^x) = <i>
        (2, i.clone())
    };
    let sigma = Mat::conjugate(f, &d, &eps_m)?;
    let inv = eps_m.inv(f)?;
    let (case, predicted_order, generator) = if sigma == inv {
        (Syl2Case::II, 1u64 << m, Mat::identity(f, 2).add(f, &eps_m))
    } else if sigma == inv.scale(f, &minus_one) {
        (Syl2Case::I, 1u64 << (m - 1), eps_m.clone())
    } else {
        return Err(Error::Precondition(
            "conjugation by d is not the involution of E".into(),
        ));
    };
    let generator_order = projective_order(f, &generator)?;
    let brute_force_order = if f.is_finite() {
        let mut count = 0u64;
        for v in projective_points(f, 2) {
            let x = delta_element(f, &i, &v);
            let o = projective_order(f, &x)?;
            if o.is_power_of_two() {
                count += 1;
            }
        }
        Some(count)
    } else {
        None
    };
    let consistent = generator_order == predicted_order
        && brute_force_order.is_none_or(|b| b == predicted_order);
    Ok(Syl2Structure {
        case,
        m,
        predicted_order,
        generator: generator.to_strings(f),
        generator_order,
        brute_force_order,
        consistent,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SylqGenerator {
    pub generator: Vec<Vec<String>>,
    pub generator_order: u64,
    pub quotient_order: Option<u64>,
    pub sylow_order: Option<u64>,
    pub consistent: bool,
}

/// `Syl_q(Δ_α^x / F^x) = ⟨I_α F^x⟩`, checked by enumeration over finite fields.
pub fn sylq_quotient_generator(f: &Field, q: usize, alpha: &Elem) -> Result<SylqGenerator> {
    if !f.has_order_q_element(q as u64) {
        return Err(Error::Precondition(format!("{f} has no unit of order {q}")));
    }
    if !binomial_irreducible(f, q as u64, alpha)? {
        return Err(Error::Precondition("X^q - alpha is reducible".into()));
    }
    if is_case_star(f, q, alpha) {
        return Err(Error::Precondition(
            "Delta_alpha = F(epsilon); use the Sylow 2 quotient structure instead".into(),
        ));
    }
    let a = make_i_alpha(f, q, alpha)?;
    let generator_order = projective_order(f, &a)?;
    let (quotient_order, sylow_order) = if f.is_finite() {
        let mut total = 0u64;
        let mut count = 0u64;
        for v in projective_points(f, q) {
            total += 1;
            let o = projective_order(f, &delta_element(f, &a, &v))?;
            if q_part(o, q as u64).1 == o {
                count += 1;
            }
        }
        (Some(total), Some(count))
    } else {
        (None, None)
    };
    let consistent =
        generator_order == q as u64 && sylow_order.is_none_or(|s| s == generator_order);
    Ok(SylqGenerator {
        generator: a.to_strings(f),
        generator_order,
        quotient_order,
        sylow_order,
        consistent,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct NormalAbelianWitness {
    pub generators: Vec<Vec<Vec<String>>>,
    pub projective_order: u64,
    pub order: Cardinal,
}

/// Largest irreducible abelian normal subgroup among the normal closures of
/// single elements (with scalars adjoined).
pub fn normal_abelian_check(g: &MatGroup) -> Result<Option<NormalAbelianWitness>> {
    let f = g.field();
    let mut best: Option<MatGroup> = None;
    let mut consider = |cand: MatGroup| -> Result<()> {
        if !cand.is_abelian() || !is_irreducible(&cand)?.irreducible {
            return Ok(());
        }
        let better = match &best {
            None => true,
            Some(b) => cand.projective_order()? > b.projective_order()?,
        };
        if better {
            best = Some(cand);
        }
        Ok(())
    };
    if g.is_abelian() {
        consider(g.clone())?;
    } else {
        for x in g.closure()?.elements() {
            if x.is_scalar(f) {
                continue;
            }
            consider(g.normal_closure(vec![x.clone()], true)?)?;
        }
    }
    let Some(b) = best else { return Ok(None) };
    Ok(Some(NormalAbelianWitness {
        generators: b.gens().iter().map(|x| x.to_strings(f)).collect(),
        projective_order: b.projective_order()?,
        order: b.order()?,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{make_g_alpha_b, make_h_alpha};

    #[test]
    fn konyukh_on_g_minus_one() {
        let f3 = Field::prime(3).unwrap();
        let g = make_g_alpha_b(&f3, 2, &f3.from_i64(-1), &[f3.one()]).unwrap();
        let r = konyukh_check(&g).unwrap();
        assert!(r.applicable && r.passed(), "{r:?}");
        let f7 = Field::prime(7).unwrap();
        let g = make_g_alpha_b(&f7, 2, &f7.from_i64(-1), &[f7.one()]).unwrap();
        let r = konyukh_check(&g).unwrap();
        assert!(r.applicable && r.passed(), "{r:?}");
        assert_eq!(r.sigma_dim, 2);
        let h = make_h_alpha(&f3, 2, &f3.one()).unwrap();
        let r = konyukh_check(&h).unwrap();
        assert!(!r.applicable);
        assert_eq!(r.note.as_deref(), Some("not applicable: imprimitive"));
    }

    #[test]
    fn syl2_cases() {
        for (p, m, order) in [(3u64, 3u32, 4u64), (7, 4, 8)] {
            let f = Field::prime(p).unwrap();
            let s = syl2_quotient_structure(&f).unwrap();
            assert_eq!((s.case, s.m, s.predicted_order), (Syl2Case::I, m, order));
            assert!(s.consistent);
        }
        let q = Field::rationals();
        let s = syl2_quotient_structure(&q).unwrap();
        assert_eq!(
            (s.case, s.predicted_order, s.generator_order),
            (Syl2Case::II, 4, 4)
        );
        assert!(syl2_quotient_structure(&Field::prime(5).unwrap()).is_err());
    }

    #[test]
    fn sylq_generators() {
        let f5 = Field::prime(5).unwrap();
        let s = sylq_quotient_generator(&f5, 2, &f5.from_i64(2)).unwrap();
        assert_eq!((s.quotient_order, s.sylow_order), (Some(6), Some(2)));
        let f7 = Field::prime(7).unwrap();
        let s = sylq_quotient_generator(&f7, 3, &f7.from_i64(2)).unwrap();
        assert_eq!(
            (s.quotient_order, s.sylow_order, s.consistent),
            (Some(57), Some(3), true)
        );
        let q = Field::rationals();
        let s = sylq_quotient_generator(&q, 2, &q.from_i64(3)).unwrap();
        assert_eq!(s.generator_order, 2);
    }

    #[test]
    fn normal_abelian_witnesses() {
        let f3 = Field::prime(3).unwrap();
        let g = make_g_alpha_b(&f3, 2, &f3.from_i64(-1), &[f3.one()]).unwrap();
        let w = normal_abelian_check(&g).unwrap().unwrap();
        assert_eq!(w.order, Cardinal::Finite(8));
        let f7 = Field::prime(7).unwrap();
        let g = make_g_alpha_b(&f7, 2, &f7.from_i64(-1), &[f7.one()]).unwrap();
        let w = normal_abelian_check(&g).unwrap().unwrap();
        assert_eq!(w.order, Cardinal::Finite(48));
    }
}
