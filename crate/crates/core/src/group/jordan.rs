//! Jordan decomposition of finite-order matrices and the unipotent /
//! diagonalizable splitting of nilpotent groups.

use std::collections::HashSet;

use serde::Serialize;

use crate::arith::{crt, q_part};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Mat;

use super::{element_order, MatGroup};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanPair {
    pub g_d: Mat,
    pub g_u: Mat,
}

pub fn is_unipotent(f: &Field, g: &Mat) -> bool {
    let n = g.n();
    let nil = g.sub(f, &Mat::identity(f, n));
    nil.pow(f, n as u64) == Mat::zero(f, n)
}

/// `g = g_d g_u = g_u g_d`, with `g_u` the p-part and `g_d` the p'-part of `g`.
pub fn jordan_decompose(f: &Field, g: &Mat) -> Result<JordanPair> {
    let n = g.n();
    let one = Mat::identity(f, n);
    let ord = element_order(f, g)?;
    if !f.is_finite() {
        // finite order in characteristic zero means semisimple
        return Ok(JordanPair {
            g_d: g.clone(),
            g_u: one,
        });
    }
    let (_, pa) = q_part(ord, f.characteristic());
    let m = ord / pa;
    if pa == 1 {
        return Ok(JordanPair {
            g_d: g.clone(),
            g_u: one,
        });
    }
    if m == 1 {
        return Ok(JordanPair {
            g_d: one,
            g_u: g.clone(),
        });
    }
    let eu = crt(1, pa, 0, m);
    let ed = crt(0, pa, 1, m);
    Ok(JordanPair {
        g_d: g.pow(f, ed),
        g_u: g.pow(f, eu),
    })
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SplitReport {
    pub applicable: bool,
    pub note: Option<String>,
    pub order: u64,
    pub unipotent_count: u64,
    pub semisimple_count: u64,
    pub unipotent_is_subgroup: bool,
    pub semisimple_is_subgroup: bool,
    pub unipotent_normal: bool,
    pub semisimple_normal: bool,
    pub trivial_intersection: bool,
    pub parts_commute: bool,
    pub direct_product: bool,
    pub u_parts_subgroup: bool,
    pub d_parts_subgroup: bool,
}

impl SplitReport {
    pub fn passed(&self) -> bool {
        !self.applicable
            || (self.unipotent_is_subgroup
                && self.semisimple_is_subgroup
                && self.unipotent_normal
                && self.semisimple_normal
                && self.trivial_intersection
                && self.parts_commute
                && self.direct_product
                && self.u_parts_subgroup
                && self.d_parts_subgroup)
    }
}

fn closed_under_products(f: &Field, set: &HashSet<Mat>) -> bool {
    set.iter()
        .all(|a| set.iter().all(|b| set.contains(&a.mul(f, b))))
}

fn normal_in(f: &Field, set: &HashSet<Mat>, by: &[Mat]) -> Result<bool> {
    for s in by {
        let si = s.inv(f)?;
        if !set.iter().all(|x| set.contains(&si.mul(f, x).mul(f, s))) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks that a finite nilpotent group splits as `G_u × G_d`.
pub fn splittable_check(g: &MatGroup) -> Result<SplitReport> {
    let f = g.field();
    if !f.is_finite() {
        return Err(Error::Unsupported(
            "splitting check needs a finite field".into(),
        ));
    }
    if !g.is_nilpotent()? {
        return Ok(SplitReport {
            applicable: false,
            note: Some("not applicable: group is not nilpotent".into()),
            ..Default::default()
        });
    }
    let elems = g.elements_full()?;
    let mut gu = HashSet::new();
    let mut gd = HashSet::new();
    let mut uparts = HashSet::new();
    let mut dparts = HashSet::new();
    for x in &elems {
        let jp = jordan_decompose(f, x)?;
        if jp.g_d.is_identity(f) {
            gu.insert(x.clone());
        }
        if jp.g_u.is_identity(f) {
            gd.insert(x.clone());
        }
        uparts.insert(jp.g_u);
        dparts.insert(jp.g_d);
    }
    let gens = g.gens();
    let parts_commute = gu
        .iter()
        .all(|a| gd.iter().all(|b| a.mul(f, b) == b.mul(f, a)));
    let one = Mat::identity(f, g.degree());
    let trivial_intersection = gu.intersection(&gd).all(|x| *x == one);
    // G_u G_d = G: the product map is injective, so compare cardinalities
    let direct_product = trivial_intersection && (gu.len() * gd.len()) == elems.len();
    Ok(SplitReport {
        applicable: true,
        note: None,
        order: elems.len() as u64,
        unipotent_count: gu.len() as u64,
        semisimple_count: gd.len() as u64,
        unipotent_is_subgroup: closed_under_products(f, &gu),
        semisimple_is_subgroup: closed_under_products(f, &gd),
        unipotent_normal: normal_in(f, &gu, gens)?,
        semisimple_normal: normal_in(f, &gd, gens)?,
        trivial_intersection,
        parts_commute,
        direct_product,
        u_parts_subgroup: closed_under_products(f, &uparts),
        d_parts_subgroup: closed_under_products(f, &dparts),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_element_over_gf3() {
        let f = Field::prime(3).unwrap();
        let g = Mat::parse(&f, "2,1;0,2").unwrap();
        let jp = jordan_decompose(&f, &g).unwrap();
        assert_eq!(jp.g_d.mul(&f, &jp.g_u), g);
        assert_eq!(jp.g_u.mul(&f, &jp.g_d), g);
        assert!(is_unipotent(&f, &jp.g_u) && !jp.g_u.is_identity(&f));
        assert_eq!(element_order(&f, &jp.g_d).unwrap(), 2);
    }

    #[test]
    fn semisimple_and_unipotent() {
        let f = Field::prime(7).unwrap();
        let d = Mat::parse(&f, "2,0;0,3").unwrap();
        assert_eq!(jordan_decompose(&f, &d).unwrap().g_u, Mat::identity(&f, 2));
        let u = Mat::parse(&f, "1,5;0,1").unwrap();
        assert_eq!(jordan_decompose(&f, &u).unwrap().g_d, Mat::identity(&f, 2));
    }

    #[test]
    fn split_unipotent_times_scalar() {
        let f = Field::prime(3).unwrap();
        let g = MatGroup::new(
            &f,
            2,
            vec![
                Mat::parse(&f, "1,1;0,1").unwrap(),
                Mat::parse(&f, "2,0;0,2").unwrap(),
            ],
            false,
        )
        .unwrap();
        let r = splittable_check(&g).unwrap();
        assert!(r.passed());
        assert_eq!((r.unipotent_count, r.semisimple_count), (3, 2));
    }
}
