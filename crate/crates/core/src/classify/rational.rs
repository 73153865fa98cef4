//! Streams of representatives over the rationals.

use std::collections::BTreeSet;

use super::{
    monomial_conjugate, monomial_rep, primitive_rep, suppressed, Certificate, ClassRep, Parameters,
    Suppressed, Tag, RULE_EXCEPTION_II, RULE_H1,
};
use crate::arith::factor_u64;
use crate::construct::{make_i_alpha, PrimitiveData};
use crate::error::{Error, Result};
use crate::field::{ClassMode, Elem, Field};
use crate::group::MatGroup;
use crate::oracle::conjugator_search;
use crate::poly::Poly;
use crate::props::det_group;

/// Largest height searched for primitive parameters before giving up.
const MAX_HEIGHT: i64 = 400;

/// Signed `q`-th-power-free part of a nonzero rational, as an element of `Q`.
pub fn canonical_squarefree(f: &Field, x: &Elem, q: usize) -> Result<Elem> {
    Ok(f.power_class(x, q as u64, ClassMode::QthPowers)?
        .representative(f))
}

/// Signed squarefree part of a nonzero integer.
pub fn squarefree_part(n: i64) -> i64 {
    assert!(n != 0);
    let mut out = n.signum();
    for (p, e) in factor_u64(n.unsigned_abs()) {
        if e % 2 == 1 {
            out *= p as i64;
        }
    }
    out
}

fn is_qth_power_free(n: u64, q: u32) -> bool {
    factor_u64(n).iter().all(|&(_, e)| e < q)
}

/// The nontrivial square classes `{-α, -N, αN}` of `Ddet(G(α, b))` with `N = det(b)`.
pub fn v_triple(alpha: i64, norm: i64) -> [i64; 3] {
    let mut v = [
        squarefree_part(-alpha),
        squarefree_part(-norm),
        squarefree_part(squarefree_part(alpha) * squarefree_part(norm)),
    ];
    v.sort();
    v
}

/// Squarefree integers other than `±1`, ordered by absolute value, positive first.
fn squarefree_alphas() -> impl Iterator<Item = i64> {
    (2i64..)
        .filter(|&n| is_qth_power_free(n as u64, 2))
        .flat_map(|n| [n, -n])
}

fn h_stream(f: &Field, limit: usize) -> Result<Vec<ClassRep>> {
    let mut kept: Vec<Elem> = Vec::new();
    let mut out = Vec::new();
    for n in (2i64..).filter(|&n| is_qth_power_free(n as u64, 2)) {
        if out.len() >= limit {
            break;
        }
        let a = f.from_i64(n);
        let mut fresh = true;
        for k in &kept {
            if monomial_conjugate(f, 2, k, &a)? {
                fresh = false;
                break;
            }
        }
        if fresh {
            kept.push(a.clone());
            out.push(monomial_rep(f, 2, &a)?);
        }
    }
    Ok(out)
}

/// Primitive `G(α, b)` outside case (*), identified up to conjugacy by `Ddet`.
fn g_stream(f: &Field, limit: usize) -> Result<(Vec<ClassRep>, Vec<Suppressed>)> {
    let mut seen: BTreeSet<[i64; 3]> = BTreeSet::new();
    let mut absorbed: BTreeSet<(i64, i64)> = BTreeSet::new();
    let mut out = Vec::new();
    let mut supp = Vec::new();
    'height: for h in 2..=MAX_HEIGHT {
        let alphas: Vec<i64> = squarefree_alphas().take_while(|a| a.abs() <= h).collect();
        for &alpha in &alphas {
            for b0 in 0..=h {
                for b1 in 1..=h {
                    if alpha.abs().max(b0).max(b1) != h {
                        continue;
                    }
                    if out.len() >= limit {
                        break 'height;
                    }
                    let norm = b0 * b0 - alpha * b1 * b1;
                    let s = squarefree_part(norm);
                    if s == 1 || s == squarefree_part(-alpha) {
                        // det(b) in Ddet(A_α): imprimitive
                        continue;
                    }
                    let a = f.from_i64(alpha);
                    let b = [f.from_i64(b0), f.from_i64(b1)];
                    if s == -1 || s == alpha {
                        if supp.len() < limit && absorbed.insert((alpha, s)) {
                            let rep = primitive_rep(f, 2, &a, &b)?;
                            let g = rep.group.clone().unwrap();
                            supp.push(suppressed(rep.name(), RULE_EXCEPTION_II, g, None));
                        }
                        continue;
                    }
                    if seen.insert(v_triple(alpha, norm)) {
                        out.push(primitive_rep(f, 2, &a, &b)?);
                    }
                }
            }
        }
    }
    Ok((out, supp))
}

fn gcd(a: i64, b: i64) -> i64 {
    num_integer::gcd(a, b)
}

/// `G(-1, b)` for Gaussian integers `b`, deduplicated by conjugator search.
fn case_star_stream(f: &Field, limit: usize) -> Result<Vec<ClassRep>> {
    let minus_one = f.from_i64(-1);
    let mut cands: Vec<(i64, i64)> = Vec::new();
    let bound = 60i64;
    for b0 in 1..=bound {
        for b1 in 0..=b0 {
            if gcd(b0, b1) == 1 {
                cands.push((b0, b1));
            }
        }
    }
    cands.sort_by_key(|&(x, y)| (x * x + y * y, x));
    let mut kept: Vec<((i64, i64), MatGroup)> = Vec::new();
    let mut out = Vec::new();
    for (b0, b1) in cands {
        if out.len() >= limit {
            break;
        }
        let b = [f.from_i64(b0), f.from_i64(b1)];
        let g = PrimitiveData::new(f, 2, &minus_one, &b)?.group()?;
        let ddet = det_group(&g)?;
        let mut fresh = true;
        for ((c0, c1), k) in &kept {
            // b / c lies in Q^x <i, 1 + i> iff x y (x - y)(x + y) = 0 for b * conj(c) = x + y i
            let x = b0 * c0 + b1 * c1;
            let y = b1 * c0 - b0 * c1;
            if x == 0 || y == 0 || x == y || x == -y {
                fresh = false;
                break;
            }
            if !ddet.same_as(&det_group(k)?) {
                continue;
            }
            if conjugator_search(k, &g)?.is_some() {
                fresh = false;
                break;
            }
        }
        if fresh {
            let mut rep = super::primitive_rep(f, 2, &minus_one, &b)?;
            if (b0, b1) == (1, 0) {
                rep.exceptional
                    .push("contains H_1 as a proper subgroup".into());
            }
            kept.push(((b0, b1), g));
            out.push(rep);
        }
    }
    Ok(out)
}

pub(super) fn abelian_rep(f: &Field, q: usize, m: i64, field_name: String) -> Result<ClassRep> {
    let a = f.from_i64(m);
    let x = make_i_alpha(f, q, &a)?;
    let group = MatGroup::new(f, q, vec![x], true)?;
    Ok(ClassRep::new(
        Tag::AbelianSinger,
        Parameters {
            polynomial: Some(Poly::binomial(f, q, &a).format(f)),
            ..Parameters::default()
        },
        Certificate::Extension { field: field_name },
        group,
    ))
}

fn quadratic_stream(f: &Field, limit: usize) -> Result<Vec<ClassRep>> {
    std::iter::once(-1)
        .chain(squarefree_alphas())
        .take(limit)
        .map(|m| abelian_rep(f, 2, m, format!("Q(sqrt({m}))")))
        .collect()
}

/// Pure cubic fields `Q(m^(1/3))`, one per field.
fn cubic_stream(f: &Field, limit: usize) -> Result<Vec<ClassRep>> {
    let mut seen: BTreeSet<Elem> = BTreeSet::new();
    let mut out = Vec::new();
    for m in 2i64.. {
        if out.len() >= limit {
            break;
        }
        if !is_qth_power_free(m as u64, 3) {
            continue;
        }
        let a = f.from_i64(m);
        let sq = canonical_squarefree(f, &f.mul(&a, &a), 3)?;
        // Q(m^(1/3)) = Q((m^2)^(1/3))
        let key = if sq < a { sq } else { a };
        if seen.insert(key) {
            out.push(abelian_rep(f, 3, m, format!("Q({m}^(1/3))"))?);
        }
    }
    Ok(out)
}

pub(super) fn classify_rational(
    q: usize,
    f: &Field,
    limit: usize,
) -> Result<(Vec<ClassRep>, Vec<Suppressed>, Vec<String>)> {
    match q {
        2 => {
            let mut notes = vec![
                format!("each infinite family is truncated to its first {limit} entries"),
                "primitive groups outside case (*) are listed once per Ddet(G), which determines them up to conjugacy".into(),
                "G(-1, b) pairs with equal Ddet are separated by conjugator search".into(),
                "abelian classes: one per quadratic field Q(sqrt(m))".into(),
            ];
            let mut supp = Vec::new();
            let minus_one = f.from_i64(-1);
            let h1 = monomial_rep(f, 2, &f.one())?;
            let g11 = PrimitiveData::new(f, 2, &minus_one, &[f.one()])?.group()?;
            supp.push(suppressed(
                "H_1".into(),
                RULE_H1,
                h1.group.clone().unwrap(),
                Some(("G(-1, [1,0])".into(), g11)),
            ));
            let mut classes = h_stream(f, limit)?;
            let (g, absorbed) = g_stream(f, limit)?;
            classes.extend(g);
            supp.extend(absorbed);
            let star = case_star_stream(f, limit)?;
            if star.len() < limit {
                notes.push(format!(
                    "case (*) search exhausted its range after {} classes",
                    star.len()
                ));
            }
            classes.extend(star);
            classes.extend(quadratic_stream(f, limit)?);
            Ok((classes, supp, notes))
        }
        3 => {
            let notes = vec![
                "Q^x has no element of order 3: every maximal locally nilpotent subgroup is abelian".into(),
                format!("abelian classes from pure cubic fields only, first {limit}"),
            ];
            Ok((cubic_stream(f, limit)?, Vec::new(), notes))
        }
        _ => Err(Error::Unsupported(format!("q = {q} over Q"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squarefree_parts() {
        assert_eq!(squarefree_part(18), 2);
        assert_eq!(squarefree_part(-12), -3);
        assert_eq!(squarefree_part(1), 1);
        assert_eq!(v_triple(2, 7), [-7, -2, 14]);
    }

    #[test]
    fn h_stream_order() {
        let f = Field::rationals();
        let h = h_stream(&f, 3).unwrap();
        let alphas: Vec<String> = h
            .iter()
            .map(|r| r.parameters.alpha.clone().unwrap())
            .collect();
        assert_eq!(alphas, ["2", "3", "5"]);
    }

    #[test]
    fn g_stream_is_primitive_and_distinct() {
        let f = Field::rationals();
        let (g, supp) = g_stream(&f, 6).unwrap();
        assert_eq!(g.len(), 6);
        assert!(!supp.is_empty());
        let mut ddets = Vec::new();
        for r in &g {
            let grp = r.group.as_ref().unwrap();
            assert!(crate::props::is_primitive(grp).unwrap().primitive);
            let d = det_group(grp).unwrap();
            assert!(ddets.iter().all(|e: &crate::UnitSubgroup| !e.same_as(&d)));
            ddets.push(d);
        }
    }

    #[test]
    fn cubic_fields_dedupe() {
        let f = Field::rationals();
        let c = cubic_stream(&f, 4).unwrap();
        let polys: Vec<String> = c
            .iter()
            .map(|r| r.parameters.polynomial.clone().unwrap())
            .collect();
        // 4 gives the same field as 2
        assert_eq!(polys, ["X^3 + -2", "X^3 + -3", "X^3 + -5", "X^3 + -6"]);
    }
}
