//! Full subgroup lattice of a tiny `GL(n, F)`.

use std::collections::{HashMap, HashSet, VecDeque};

use fixedbitset::FixedBitSet;
use serde::Serialize;

use super::maximal::gl_order;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::group::{MatGroup, DEFAULT_CAP};
use crate::matrix::Mat;
use crate::props::{is_irreducible, is_primitive, projective_points};

/// Largest ambient group whose lattice is enumerated.
pub const LATTICE_LIMIT: u128 = 500;

#[derive(Clone, Debug)]
pub struct LatticeClass {
    pub representative: MatGroup,
    pub order: u64,
    pub conjugates: usize,
    pub nilpotency_class: usize,
    pub abelian: bool,
    pub primitive: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LatticeSummary {
    pub ambient_order: u128,
    pub subgroups: usize,
    pub nilpotent: usize,
    pub maximal_nilpotent: usize,
    pub classes: usize,
}

#[derive(Clone, Debug)]
pub struct LatticeReport {
    pub summary: LatticeSummary,
    /// Irreducible maximal nilpotent subgroups up to conjugacy, by decreasing order.
    pub classes: Vec<LatticeClass>,
}

struct Table {
    elems: Vec<Mat>,
    mul: Vec<Vec<u16>>,
    inv: Vec<u16>,
    id: u16,
}

impl Table {
    fn new(f: &Field, n: usize) -> Result<Table> {
        let size =
            f.order()
                .ok_or_else(|| Error::Unsupported("lattice over Q".into()))? as usize;
        let mut elems = Vec::new();
        let e = f.elements();
        for first in projective_points(f, n) {
            let rest = n * n - n;
            for t in 0..size.pow(rest as u32) {
                let mut entries = first.clone();
                let mut r = t;
                for _ in 0..rest {
                    entries.push(e[r % size].clone());
                    r /= size;
                }
                let m = Mat::from_entries(n, entries);
                if !f.is_zero(&m.det(f)) {
                    for u in f.units() {
                        elems.push(m.scale(f, &u));
                    }
                }
            }
        }
        elems.sort();
        let index: HashMap<Mat, u16> = elems
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i as u16))
            .collect();
        let mul: Vec<Vec<u16>> = elems
            .iter()
            .map(|a| elems.iter().map(|b| index[&a.mul(f, b)]).collect())
            .collect();
        let inv = elems
            .iter()
            .map(|a| index[&a.inv(f).expect("invertible")])
            .collect();
        let id = index[&Mat::identity(f, n)];
        Ok(Table {
            elems,
            mul,
            inv,
            id,
        })
    }

    fn generate(&self, gens: &[u16]) -> FixedBitSet {
        let mut set = FixedBitSet::with_capacity(self.elems.len());
        let id = self.id;
        set.insert(id as usize);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul[x as usize][g as usize];
                if !set.put(y as usize) {
                    queue.push_back(y);
                }
            }
        }
        set
    }

    fn conjugate(&self, set: &FixedBitSet, t: u16) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.elems.len());
        let ti = self.inv[t as usize] as usize;
        for x in set.ones() {
            out.insert(self.mul[self.mul[t as usize][x] as usize][ti] as usize);
        }
        out
    }
}

/// Enumerates every subgroup of `GL(n, F)` (`|GL| ≤ 500`) by joining cyclic
/// subgroups, then keeps the irreducible maximal nilpotent ones up to conjugacy.
pub fn exhaustive_classification(f: &Field, n: usize) -> Result<LatticeReport> {
    let total = gl_order(f, n).ok_or(Error::AmbientTooLarge(u128::MAX))?;
    if total > LATTICE_LIMIT {
        return Err(Error::AmbientTooLarge(total));
    }
    let table = Table::new(f, n)?;
    let mut subgroups: HashMap<FixedBitSet, Vec<u16>> = HashMap::new();
    let mut cyclic: Vec<(FixedBitSet, u16)> = Vec::new();
    for x in 0..table.elems.len() as u16 {
        let s = table.generate(&[x]);
        if !subgroups.contains_key(&s) {
            subgroups.insert(s.clone(), vec![x]);
            cyclic.push((s, x));
        }
    }
    let mut frontier: Vec<FixedBitSet> = subgroups.keys().cloned().collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for h in &frontier {
            let gens = subgroups[h].clone();
            for (c, x) in &cyclic {
                if c.is_subset(h) {
                    continue;
                }
                let mut g2 = gens.clone();
                g2.push(*x);
                let j = table.generate(&g2);
                if !subgroups.contains_key(&j) {
                    subgroups.insert(j.clone(), g2);
                    next.push(j);
                }
            }
        }
        frontier = next;
    }
    let mut all: Vec<(FixedBitSet, Vec<u16>)> = subgroups.into_iter().collect();
    all.sort_by(|a, b| {
        b.0.count_ones(..).cmp(&a.0.count_ones(..)).then_with(|| {
            a.0.ones()
                .collect::<Vec<_>>()
                .cmp(&b.0.ones().collect::<Vec<_>>())
        })
    });
    let to_group = |set: &FixedBitSet| -> Result<MatGroup> {
        let elems: Vec<Mat> = set.ones().map(|i| table.elems[i].clone()).collect();
        MatGroup::from_elements(f, n, &elems, false, DEFAULT_CAP)
    };
    let mut nilpotent: Vec<(usize, usize)> = Vec::new();
    for (i, (set, _)) in all.iter().enumerate() {
        if let Some(c) = to_group(set)?.nilpotency_class()?.class() {
            nilpotent.push((i, c));
        }
    }
    let maximal: Vec<(usize, usize)> = nilpotent
        .iter()
        .filter(|(i, _)| {
            !nilpotent.iter().any(|(j, _)| {
                j != i
                    && all[*i].0.is_subset(&all[*j].0)
                    && all[*j].0.count_ones(..) > all[*i].0.count_ones(..)
            })
        })
        .cloned()
        .collect();
    let mut seen: HashSet<FixedBitSet> = HashSet::new();
    let mut classes = Vec::new();
    for (i, class) in &maximal {
        let set = &all[*i].0;
        if seen.contains(set) {
            continue;
        }
        let orbit: HashSet<FixedBitSet> = (0..table.elems.len() as u16)
            .map(|t| table.conjugate(set, t))
            .collect();
        let group = to_group(set)?;
        let irreducible = is_irreducible(&group)?.irreducible;
        let conjugates = orbit.len();
        seen.extend(orbit);
        if !irreducible {
            continue;
        }
        classes.push(LatticeClass {
            order: set.count_ones(..) as u64,
            conjugates,
            nilpotency_class: *class,
            abelian: group.is_abelian(),
            primitive: is_primitive(&group)?.primitive,
            representative: group,
        });
    }
    Ok(LatticeReport {
        summary: LatticeSummary {
            ambient_order: total,
            subgroups: all.len(),
            nilpotent: nilpotent.len(),
            maximal_nilpotent: maximal.len(),
            classes: classes.len(),
        },
        classes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl23_has_one_class() {
        let f = Field::prime(3).unwrap();
        let r = exhaustive_classification(&f, 2).unwrap();
        assert_eq!(r.summary.ambient_order, 48);
        assert_eq!(r.classes.len(), 1);
        let c = &r.classes[0];
        assert_eq!((c.order, c.nilpotency_class, c.conjugates), (16, 3, 3));
        assert!(c.primitive);
    }

    #[test]
    fn gl22_only_abelian() {
        let f = Field::prime(2).unwrap();
        let r = exhaustive_classification(&f, 2).unwrap();
        assert_eq!(r.classes.len(), 1);
        assert!(r.classes[0].abelian);
        assert_eq!(r.classes[0].order, 3);
    }

    #[test]
    fn too_large() {
        let f = Field::prime(7).unwrap();
        assert!(exhaustive_classification(&f, 2).is_err());
    }
}
