//! Finitely generated matrix groups, enumerated by breadth-first closure.
//!
//! A group may carry the flag `scalars`: it then means `⟨gens⟩·F^x 1_n`, and
//! only the projective image (canonical coset representatives) is stored.

mod jordan;
mod order;

use std::collections::{HashMap, VecDeque};
use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Cardinal, Field};
use crate::matrix::Mat;

pub use jordan::{is_unipotent, jordan_decompose, splittable_check, JordanPair, SplitReport};
pub use order::{element_order, projective_order};

/// Default closure budget.
pub const DEFAULT_CAP: usize = 1 << 22;

/// Enumerated element set (projective representatives when scalars are adjoined).
#[derive(Debug)]
pub struct Closure {
    elems: Vec<Mat>,
    index: HashMap<Mat, usize>,
}

impl Closure {
    pub fn elements(&self) -> &[Mat] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// Position of an already canonicalized element.
    pub fn position(&self, key: &Mat) -> Option<usize> {
        self.index.get(key).copied()
    }
}

/// Incremental closure under right multiplication.
pub(crate) struct Builder {
    f: Field,
    projective: bool,
    cap: usize,
    elems: Vec<Mat>,
    index: HashMap<Mat, usize>,
    gens: Vec<Mat>,
}

impl Builder {
    pub(crate) fn new(f: &Field, n: usize, projective: bool, cap: usize) -> Builder {
        let one = Mat::identity(f, n);
        let mut index = HashMap::new();
        index.insert(one.clone(), 0);
        Builder {
            f: f.clone(),
            projective,
            cap,
            elems: vec![one],
            index,
            gens: Vec::new(),
        }
    }

    pub(crate) fn key(&self, m: &Mat) -> Mat {
        if self.projective {
            m.projective_canonical(&self.f)
        } else {
            m.clone()
        }
    }

    pub(crate) fn contains(&self, m: &Mat) -> bool {
        self.index.contains_key(&self.key(m))
    }

    /// Adjoin a generator; false if it already lies in the group.
    pub(crate) fn add_gen(&mut self, g: &Mat) -> Result<bool> {
        let g = self.key(g);
        if self.index.contains_key(&g) {
            return Ok(false);
        }
        self.gens.push(g.clone());
        let mut queue: VecDeque<(usize, usize)> = VecDeque::new();
        let last = self.gens.len() - 1;
        for i in 0..self.elems.len() {
            queue.push_back((i, last));
        }
        while let Some((i, j)) = queue.pop_front() {
            let prod = self.key(&self.elems[i].mul(&self.f, &self.gens[j]));
            if self.index.contains_key(&prod) {
                continue;
            }
            if self.elems.len() >= self.cap {
                return Err(Error::ClosureCap(self.cap));
            }
            let k = self.elems.len();
            self.index.insert(prod.clone(), k);
            self.elems.push(prod);
            for jj in 0..self.gens.len() {
                queue.push_back((k, jj));
            }
        }
        Ok(true)
    }

    pub(crate) fn finish(self) -> (Vec<Mat>, Closure) {
        (
            self.gens,
            Closure {
                elems: self.elems,
                index: self.index,
            },
        )
    }
}

/// Smallest subgroup containing `seeds` and normalized by every element of `by`.
pub(crate) fn normal_closure(
    f: &Field,
    n: usize,
    seeds: Vec<Mat>,
    by: &[Mat],
    projective: bool,
    cap: usize,
) -> Result<(Vec<Mat>, Closure)> {
    let conj: Vec<(Mat, Mat)> = by
        .iter()
        .map(|s| Ok((s.clone(), s.inv(f)?)))
        .collect::<Result<_>>()?;
    let mut b = Builder::new(f, n, projective, cap);
    let mut queue: VecDeque<Mat> = seeds.into();
    while let Some(x) = queue.pop_front() {
        if b.add_gen(&x)? {
            for (s, si) in &conj {
                queue.push_back(si.mul(f, &x).mul(f, s));
            }
        }
    }
    Ok(b.finish())
}

/// Result of a nilpotency computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Nilpotency {
    Class(usize),
    NotNilpotent,
}

impl Nilpotency {
    pub fn is_nilpotent(&self) -> bool {
        matches!(self, Nilpotency::Class(_))
    }

    pub fn class(&self) -> Option<usize> {
        match self {
            Nilpotency::Class(c) => Some(*c),
            Nilpotency::NotNilpotent => None,
        }
    }
}

#[derive(Debug)]
pub struct MatGroup {
    field: Field,
    n: usize,
    gens: Vec<Mat>,
    scalars: bool,
    cap: usize,
    cache: OnceLock<Arc<Closure>>,
}

impl Clone for MatGroup {
    fn clone(&self) -> Self {
        let cache = OnceLock::new();
        if let Some(c) = self.cache.get() {
            let _ = cache.set(c.clone());
        }
        MatGroup {
            field: self.field.clone(),
            n: self.n,
            gens: self.gens.clone(),
            scalars: self.scalars,
            cap: self.cap,
            cache,
        }
    }
}

impl MatGroup {
    pub fn new(field: &Field, n: usize, gens: Vec<Mat>, scalars: bool) -> Result<MatGroup> {
        for g in &gens {
            if g.n() != n {
                return Err(Error::Dimension {
                    expected: n,
                    found: g.n(),
                });
            }
            if field.is_zero(&g.det(field)) {
                return Err(Error::Singular);
            }
        }
        Ok(MatGroup {
            field: field.clone(),
            n,
            gens,
            scalars,
            cap: DEFAULT_CAP,
            cache: OnceLock::new(),
        })
    }

    /// Group whose element set is already known to be closed.
    pub(crate) fn from_elements(
        field: &Field,
        n: usize,
        elems: &[Mat],
        scalars: bool,
        cap: usize,
    ) -> Result<MatGroup> {
        let mut b = Builder::new(field, n, scalars, cap);
        for e in elems {
            if !b.contains(e) {
                b.add_gen(e)?;
            }
        }
        let (gens, closure) = b.finish();
        let g = MatGroup {
            field: field.clone(),
            n,
            gens,
            scalars,
            cap,
            cache: OnceLock::new(),
        };
        let _ = g.cache.set(Arc::new(closure));
        Ok(g)
    }

    fn with_closure(
        field: &Field,
        n: usize,
        gens: Vec<Mat>,
        closure: Closure,
        scalars: bool,
        cap: usize,
    ) -> MatGroup {
        let g = MatGroup {
            field: field.clone(),
            n,
            gens,
            scalars,
            cap,
            cache: OnceLock::new(),
        };
        let _ = g.cache.set(Arc::new(closure));
        g
    }

    pub fn with_cap(mut self, cap: usize) -> MatGroup {
        self.cap = cap;
        self.cache = OnceLock::new();
        self
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn gens(&self) -> &[Mat] {
        &self.gens
    }

    pub fn scalars_adjoined(&self) -> bool {
        self.scalars
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Same group with one more generator.
    pub fn adjoin(&self, g: &Mat) -> Result<MatGroup> {
        let mut gens = self.gens.clone();
        gens.push(g.clone());
        Ok(MatGroup::new(&self.field, self.n, gens, self.scalars)?.with_cap(self.cap))
    }

    /// Canonical key used by the closure (projective representative when scalars are adjoined).
    pub fn key(&self, m: &Mat) -> Mat {
        if self.scalars {
            m.projective_canonical(&self.field)
        } else {
            m.clone()
        }
    }

    pub fn closure(&self) -> Result<Arc<Closure>> {
        if let Some(c) = self.cache.get() {
            return Ok(c.clone());
        }
        if !self.field.is_finite() {
            // cheap rejection of generators that cannot lie in a finite closure
            for g in &self.gens {
                if self.scalars {
                    projective_order(&self.field, g)?;
                } else {
                    element_order(&self.field, g)?;
                }
            }
        }
        let mut b = Builder::new(&self.field, self.n, self.scalars, self.cap);
        for g in &self.gens {
            b.add_gen(g)?;
        }
        let (_, closure) = b.finish();
        let _ = self.cache.set(Arc::new(closure));
        Ok(self.cache.get().unwrap().clone())
    }

    pub fn contains(&self, m: &Mat) -> Result<bool> {
        Ok(self.closure()?.position(&self.key(m)).is_some())
    }

    /// Order of the image in PGL(n, F).
    pub fn projective_order(&self) -> Result<u64> {
        let c = self.closure()?;
        if self.scalars {
            return Ok(c.len() as u64);
        }
        let mut seen = std::collections::HashSet::new();
        for e in c.elements() {
            seen.insert(e.projective_canonical(&self.field));
        }
        Ok(seen.len() as u64)
    }

    pub fn order(&self) -> Result<Cardinal> {
        let c = self.closure()?;
        if !self.scalars {
            return Ok(Cardinal::Finite(c.len() as u128));
        }
        Ok(match self.field.unit_order() {
            Some(u) => Cardinal::Finite(c.len() as u128 * u as u128),
            None => Cardinal::Infinite,
        })
    }

    /// Every element as an actual matrix (finite fields only).
    pub fn elements_full(&self) -> Result<Vec<Mat>> {
        let c = self.closure()?;
        if !self.scalars {
            return Ok(c.elements().to_vec());
        }
        if !self.field.is_finite() {
            return Err(Error::Unsupported(
                "enumerating a group containing Q^x".into(),
            ));
        }
        let units = self.field.units();
        let mut out = Vec::with_capacity(c.len() * units.len());
        for x in c.elements() {
            for u in &units {
                out.push(x.scale(&self.field, u));
            }
        }
        Ok(out)
    }

    pub fn is_abelian(&self) -> bool {
        let f = &self.field;
        self.gens.iter().enumerate().all(|(i, a)| {
            self.gens[i + 1..]
                .iter()
                .all(|b| a.mul(f, b) == b.mul(f, a))
        })
    }

    pub fn is_trivial(&self) -> bool {
        let scalar_part_trivial = !self.scalars || self.field.unit_order() == Some(1);
        scalar_part_trivial && self.gens.iter().all(|g| g.is_identity(&self.field))
    }

    /// Whether `t` normalizes the group (`t g t⁻¹ ∈ G` for every generator).
    pub fn normalized_by(&self, t: &Mat) -> Result<bool> {
        let ti = t.inv(&self.field)?;
        for g in &self.gens {
            let c = t.mul(&self.field, g).mul(&self.field, &ti);
            if !self.contains(&c)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Normal closure of `seeds` in `G`.
    pub fn normal_closure(&self, seeds: Vec<Mat>, scalars: bool) -> Result<MatGroup> {
        let (gens, c) = normal_closure(&self.field, self.n, seeds, &self.gens, scalars, self.cap)?;
        Ok(MatGroup::with_closure(
            &self.field,
            self.n,
            gens,
            c,
            scalars,
            self.cap,
        ))
    }

    /// `[G, G]`, as a group without adjoined scalars.
    pub fn derived_subgroup(&self) -> Result<MatGroup> {
        let f = &self.field;
        let mut seeds = Vec::new();
        for (i, a) in self.gens.iter().enumerate() {
            for b in &self.gens[i + 1..] {
                seeds.push(Mat::commutator(f, a, b)?);
            }
        }
        let (gens, c) = normal_closure(f, self.n, seeds, &self.gens, false, self.cap)?;
        Ok(MatGroup::with_closure(f, self.n, gens, c, false, self.cap))
    }

    /// `[N, G]` for a normal subgroup `N` (given by generators).
    fn commutator_with(&self, normal: &MatGroup) -> Result<MatGroup> {
        let f = &self.field;
        let mut seeds = Vec::new();
        for a in &normal.gens {
            for b in &self.gens {
                seeds.push(Mat::commutator(f, a, b)?);
            }
        }
        let (gens, c) = normal_closure(f, self.n, seeds, &self.gens, false, self.cap)?;
        Ok(MatGroup::with_closure(f, self.n, gens, c, false, self.cap))
    }

    /// Orders of `γ_2, γ_3, …` until the series reaches the identity or stabilizes.
    pub fn lower_central_series(&self) -> Result<(Vec<u64>, Nilpotency)> {
        if self.is_trivial() {
            return Ok((Vec::new(), Nilpotency::Class(0)));
        }
        let mut orders = Vec::new();
        let mut term = self.derived_subgroup()?;
        let mut class = 1;
        loop {
            let size = term.closure()?.len() as u64;
            orders.push(size);
            if size == 1 {
                return Ok((orders, Nilpotency::Class(class)));
            }
            let next = self.commutator_with(&term)?;
            if next.closure()?.len() as u64 == size {
                return Ok((orders, Nilpotency::NotNilpotent));
            }
            term = next;
            class += 1;
        }
    }

    pub fn nilpotency_class(&self) -> Result<Nilpotency> {
        Ok(self.lower_central_series()?.1)
    }

    pub fn is_nilpotent(&self) -> Result<bool> {
        Ok(self.nilpotency_class()?.is_nilpotent())
    }

    /// Elements of `G` commuting with every matrix in `with`.
    pub fn centralizer(&self, with: &[Mat]) -> Result<MatGroup> {
        let f = &self.field;
        let c = self.closure()?;
        let keep: Vec<Mat> = c
            .elements()
            .iter()
            .filter(|x| with.iter().all(|s| x.mul(f, s) == s.mul(f, x)))
            .cloned()
            .collect();
        MatGroup::from_elements(f, self.n, &keep, self.scalars, self.cap)
    }

    pub fn center(&self) -> Result<MatGroup> {
        let gens = self.gens.clone();
        self.centralizer(&gens)
    }

    /// Generators rendered in the matrix literal syntax.
    pub fn format_gens(&self) -> Vec<String> {
        self.gens.iter().map(|g| g.format(&self.field)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(f: &Field, s: &str) -> Mat {
        Mat::parse(f, s).unwrap()
    }

    #[test]
    fn small_closures() {
        let f3 = Field::prime(3).unwrap();
        let g = MatGroup::new(&f3, 2, vec![m(&f3, "0,1;1,0")], false).unwrap();
        assert_eq!(g.order().unwrap(), Cardinal::Finite(2));
        assert_eq!(g.nilpotency_class().unwrap(), Nilpotency::Class(1));
        let gl = MatGroup::new(&f3, 2, vec![m(&f3, "2,0;0,1"), m(&f3, "2,1;2,0")], false).unwrap();
        assert_eq!(gl.order().unwrap(), Cardinal::Finite(48));
        assert_eq!(gl.nilpotency_class().unwrap(), Nilpotency::NotNilpotent);
        assert_eq!(gl.center().unwrap().order().unwrap(), Cardinal::Finite(2));
        assert_eq!(
            gl.derived_subgroup().unwrap().order().unwrap(),
            Cardinal::Finite(24)
        );
    }

    #[test]
    fn unipotent_over_q_is_infinite() {
        let q = Field::rationals();
        let g = MatGroup::new(&q, 2, vec![m(&q, "1,1;0,1")], false).unwrap();
        assert_eq!(g.closure().unwrap_err(), Error::InfiniteOrder);
        let capped = MatGroup::new(&q, 2, vec![m(&q, "1,1;0,1")], true).unwrap();
        assert!(capped.closure().is_err());
    }

    #[test]
    fn cap_is_enforced() {
        let f = Field::prime(5).unwrap();
        let g = MatGroup::new(
            &f,
            2,
            vec![m(&f, "2,0;0,1"), m(&f, "1,1;0,1"), m(&f, "0,1;1,0")],
            false,
        )
        .unwrap()
        .with_cap(100);
        assert_eq!(g.closure().unwrap_err(), Error::ClosureCap(100));
    }

    #[test]
    fn rational_projective_closure() {
        let q = Field::rationals();
        // A_{-1}: ⟨I_{-1}, 1 + I_{-1}⟩ mod scalars is cyclic of order 4
        let g = MatGroup::new(&q, 2, vec![m(&q, "0,1;-1,0"), m(&q, "1,1;-1,1")], true).unwrap();
        assert_eq!(g.projective_order().unwrap(), 4);
        assert_eq!(g.order().unwrap(), Cardinal::Infinite);
        assert_eq!(g.nilpotency_class().unwrap(), Nilpotency::Class(1));
    }
}
