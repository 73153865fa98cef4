//! Maximality among nilpotent subgroups by adjoining single elements.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;

use super::search::normalizer_elements;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::group::MatGroup;
use crate::matrix::Mat;
use crate::props::projective_points;

/// Largest `|PGL(n, F)|` enumerated by the exhaustive mode.
pub const EXHAUSTIVE_LIMIT: u128 = 200_000;

/// `|GL(n, F)|` for finite `F`, if it fits.
pub fn gl_order(f: &Field, n: usize) -> Option<u128> {
    let s = f.order()? as u128;
    let sn = s.checked_pow(n as u32)?;
    let mut acc: u128 = 1;
    for i in 0..n as u32 {
        acc = acc.checked_mul(sn - s.checked_pow(i)?)?;
    }
    Some(acc)
}

/// Projective representatives of `PGL(n, F)`: invertible matrices whose
/// first nonzero entry is 1.
pub fn pgl_elements(f: &Field, n: usize) -> Result<Vec<Mat>> {
    let size = f
        .order()
        .ok_or_else(|| Error::Unsupported("enumerating GL over Q".into()))? as u128;
    let total = gl_order(f, n).ok_or(Error::AmbientTooLarge(u128::MAX))?;
    let proj = total / (size - 1);
    if proj > EXHAUSTIVE_LIMIT {
        return Err(Error::AmbientTooLarge(total));
    }
    let elems = f.elements();
    let rest = (n * (n - 1)) as u32;
    let mut out = Vec::with_capacity(proj as usize);
    for first in projective_points(f, n) {
        for t in 0..size.pow(rest) {
            let mut entries = first.clone();
            let mut r = t;
            for _ in 0..rest {
                entries.push(elems[(r % size) as usize].clone());
                r /= size;
            }
            let m = Mat::from_entries(n, entries);
            if !f.is_zero(&m.det(f)) {
                out.push(m);
            }
        }
    }
    Ok(out)
}

/// How the candidate elements were chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MaximalityMode {
    /// Every element of `GL(n, F)`, one representative per coset `gG`.
    Exhaustive,
    /// Only elements normalizing `G`: a proper nilpotent overgroup `H` always
    /// satisfies `N_H(G) > G`, so this is complete as well.
    Normalizer,
}

#[derive(Clone, Debug)]
pub struct AdjunctionWitness {
    pub element: Mat,
    pub overgroup: MatGroup,
    pub nilpotency_class: usize,
}

#[derive(Clone, Debug)]
pub struct MaximalityVerdict {
    pub maximal: bool,
    pub mode: MaximalityMode,
    pub ambient_order: u128,
    /// Ambient elements outside `G` that were covered by the test.
    pub covered: u128,
    pub adjunctions: usize,
    pub witness: Option<AdjunctionWitness>,
}

/// The same group with `F^x` adjoined, or a scalar it is missing.
fn with_scalars(g: &MatGroup) -> Result<std::result::Result<MatGroup, Mat>> {
    if g.scalars_adjoined() {
        return Ok(Ok(g.clone()));
    }
    let f = g.field();
    let root = f.primitive_root().expect("finite field");
    let s = Mat::scalar(f, g.degree(), &root);
    if !g.contains(&s)? {
        return Ok(Err(s));
    }
    Ok(Ok(
        MatGroup::new(f, g.degree(), g.gens().to_vec(), true)?.with_cap(g.cap())
    ))
}

fn test_adjunctions(g: &MatGroup, reps: &[Mat]) -> Result<Option<AdjunctionWitness>> {
    let found = reps
        .par_iter()
        .map(|t| -> Result<Option<AdjunctionWitness>> {
            let k = g.adjoin(t)?;
            Ok(k.nilpotency_class()?.class().map(|c| AdjunctionWitness {
                element: t.clone(),
                overgroup: k,
                nilpotency_class: c,
            }))
        })
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        });
    found.transpose().map(Option::flatten)
}

/// Left coset representatives of `G` among `candidates`, skipping `G` itself.
fn coset_reps(g: &MatGroup, candidates: &[Mat]) -> Result<(Vec<Mat>, u128)> {
    let f = g.field();
    let elems = g.closure()?;
    let mut covered: HashSet<Mat> = elems.elements().iter().cloned().collect();
    let mut reps = Vec::new();
    let mut outside = 0u128;
    for x in candidates {
        let key = x.projective_canonical(f);
        if covered.contains(&key) {
            continue;
        }
        reps.push(key.clone());
        for h in elems.elements() {
            if covered.insert(key.mul(f, h).projective_canonical(f)) {
                outside += 1;
            }
        }
    }
    Ok((reps, outside))
}

/// Decides whether `G` is maximal among nilpotent subgroups of `GL(n, F)`.
pub fn maximality_check(g: &MatGroup, mode: MaximalityMode) -> Result<MaximalityVerdict> {
    let f = g.field();
    if !f.is_finite() {
        return Err(Error::Unsupported(
            "maximality by enumeration over Q".into(),
        ));
    }
    let ambient_order = gl_order(f, g.degree()).ok_or(Error::AmbientTooLarge(u128::MAX))?;
    let units = f.unit_order().unwrap() as u128;
    let g = match with_scalars(g)? {
        Ok(g) => g,
        Err(s) => {
            let overgroup = MatGroup::new(f, g.degree(), g.gens().to_vec(), true)?;
            let class = overgroup.nilpotency_class()?.class();
            return Ok(MaximalityVerdict {
                maximal: class.is_none(),
                mode,
                ambient_order,
                covered: 0,
                adjunctions: 1,
                witness: class.map(|c| AdjunctionWitness {
                    element: s,
                    overgroup,
                    nilpotency_class: c,
                }),
            });
        }
    };
    let candidates = match mode {
        MaximalityMode::Exhaustive => pgl_elements(f, g.degree())?,
        MaximalityMode::Normalizer => normalizer_elements(&g)?,
    };
    let (reps, outside) = coset_reps(&g, &candidates)?;
    let witness = test_adjunctions(&g, &reps)?;
    Ok(MaximalityVerdict {
        maximal: witness.is_none(),
        mode,
        ambient_order,
        covered: outside * units,
        adjunctions: reps.len(),
        witness,
    })
}

/// Exhaustive when `PGL(n, F)` is small enough, otherwise the normalizer mode.
pub fn auto_mode(f: &Field, n: usize) -> MaximalityMode {
    match (gl_order(f, n), f.unit_order()) {
        (Some(total), Some(u)) if total / u as u128 <= EXHAUSTIVE_LIMIT => {
            MaximalityMode::Exhaustive
        }
        _ => MaximalityMode::Normalizer,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{make_g_alpha_b, make_h_alpha, make_singer};

    #[test]
    fn ambient_orders() {
        let f3 = Field::prime(3).unwrap();
        assert_eq!(gl_order(&f3, 2), Some(48));
        assert_eq!(pgl_elements(&f3, 2).unwrap().len(), 24);
        let f7 = Field::prime(7).unwrap();
        assert_eq!(gl_order(&f7, 3), Some(33_784_128));
        assert!(pgl_elements(&f7, 3).is_err());
    }

    #[test]
    fn gl23_maximality() {
        let f = Field::prime(3).unwrap();
        let g = make_g_alpha_b(&f, 2, &f.from_i64(-1), &[f.one()]).unwrap();
        for mode in [MaximalityMode::Exhaustive, MaximalityMode::Normalizer] {
            let v = maximality_check(&g, mode).unwrap();
            assert!(v.maximal);
        }
        let v = maximality_check(&g, MaximalityMode::Exhaustive).unwrap();
        assert_eq!(v.covered, 48 - 16);
        let h = make_h_alpha(&f, 2, &f.one()).unwrap();
        let v = maximality_check(&h, MaximalityMode::Exhaustive).unwrap();
        assert!(!v.maximal);
        let w = v.witness.unwrap();
        assert_eq!(w.overgroup.order().unwrap(), crate::Cardinal::Finite(16));
        let (_, s) = make_singer(&f, 2).unwrap();
        let v = maximality_check(&s, MaximalityMode::Exhaustive).unwrap();
        assert!(!v.maximal);
    }

    #[test]
    fn missing_scalars_are_a_witness() {
        let f = Field::prime(5).unwrap();
        let g = MatGroup::new(&f, 2, vec![Mat::parse(&f, "0,1;1,0").unwrap()], false).unwrap();
        let v = maximality_check(&g, MaximalityMode::Exhaustive).unwrap();
        assert!(!v.maximal);
    }
}
