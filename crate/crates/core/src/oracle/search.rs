//! Conjugator search by linear constraints.
//!
//! A matrix `t` with `t g t⁻¹ = c` satisfies the linear system `t g = c t`.
//! For each generator `g` of the source group we branch over the candidate
//! images `c` (elements of the target group, times a scalar when scalars are
//! adjoined) and intersect solution spaces; the leaves are then searched for
//! an invertible member.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::group::MatGroup;
use crate::matrix::{nullspace, Mat};

/// Largest number of vectors enumerated in one leaf space.
const LEAF_LIMIT: u128 = 5_000_000;

/// Solutions `λ` of `λ^n = x`.
pub(crate) fn nth_roots(f: &Field, x: &Elem, n: usize) -> Vec<Elem> {
    if f.is_finite() {
        return f
            .units()
            .into_iter()
            .filter(|l| f.pow(l, n as u64) == *x)
            .collect();
    }
    let r = f.as_rational(x).expect("rational element");
    let root = |v: &BigInt| -> Option<BigInt> {
        if v.is_negative() && n.is_multiple_of(2) {
            return None;
        }
        let c = if v.is_negative() {
            -(-v).nth_root(n as u32)
        } else {
            v.nth_root(n as u32)
        };
        (num_traits::pow(c.clone(), n) == *v).then_some(c)
    };
    let (Some(a), Some(b)) = (root(r.numer()), root(r.denom())) else {
        return Vec::new();
    };
    let l = BigRational::new(a, b);
    if n.is_multiple_of(2) && !l.is_zero() {
        vec![Elem::Rat(-l.clone()), Elem::Rat(l)]
    } else {
        vec![Elem::Rat(l)]
    }
}

fn unit_matrix(f: &Field, n: usize, k: usize) -> Mat {
    let mut m = Mat::zero(f, n);
    m.set(k / n, k % n, f.one());
    m
}

/// Solutions of `t g = c t` inside the span of `basis`.
fn restrict(f: &Field, basis: &[Mat], g: &Mat, c: &Mat) -> Vec<Mat> {
    let n = g.n();
    let images: Vec<Mat> = basis
        .iter()
        .map(|b| b.mul(f, g).sub(f, &c.mul(f, b)))
        .collect();
    let rows: Vec<Vec<Elem>> = (0..n * n)
        .map(|e| images.iter().map(|m| m.as_vector()[e].clone()).collect())
        .collect();
    nullspace(f, &rows, basis.len())
        .into_iter()
        .map(|y| {
            let mut t = Mat::zero(f, n);
            for (b, c) in basis.iter().zip(&y) {
                if !f.is_zero(c) {
                    t = t.add(f, &b.scale(f, c));
                }
            }
            t
        })
        .collect()
}

fn combine(f: &Field, basis: &[Mat], y: &[Elem]) -> Mat {
    let mut t = Mat::zero(f, basis[0].n());
    for (b, c) in basis.iter().zip(y) {
        if !f.is_zero(c) {
            t = t.add(f, &b.scale(f, c));
        }
    }
    t
}

/// Invertible members of the span of `basis`: all of them up to scalars
/// (finite fields), or the first one found.
fn invertibles(f: &Field, basis: &[Mat], all: bool) -> Result<Vec<Mat>> {
    let m = basis.len();
    let n = basis[0].n();
    let mut out = Vec::new();
    if f.is_finite() {
        let elems = f.elements();
        let size = elems.len() as u128;
        let count = (0..m as u32).map(|i| size.pow(i)).sum::<u128>();
        if count > LEAF_LIMIT {
            return Err(Error::AmbientTooLarge(count));
        }
        // vectors whose first nonzero coordinate is 1
        for lead in 0..m {
            let free = m - lead - 1;
            for t in 0..size.pow(free as u32) {
                let mut y = vec![f.zero(); m];
                y[lead] = f.one();
                let mut r = t;
                for slot in y.iter_mut().skip(lead + 1) {
                    *slot = elems[(r % size) as usize].clone();
                    r /= size;
                }
                let x = combine(f, basis, &y);
                if !f.is_zero(&x.det(f)) {
                    out.push(x.projective_canonical(f));
                    if !all {
                        return Ok(out);
                    }
                }
            }
        }
        return Ok(out);
    }
    if all {
        return Err(Error::Unsupported(
            "enumerating all conjugators over Q".into(),
        ));
    }
    // det is a polynomial of degree n on the span; if it is not identically
    // zero it is nonzero somewhere on the grid {0, …, n}^m
    let grid = (n + 1) as u128;
    let count = grid.pow(m as u32);
    if count > LEAF_LIMIT {
        return Err(Error::AmbientTooLarge(count));
    }
    for t in 1..count {
        let mut r = t;
        let y: Vec<Elem> = (0..m)
            .map(|_| {
                let v = (r % grid) as i64;
                r /= grid;
                f.from_i64(v)
            })
            .collect();
        let x = combine(f, basis, &y);
        if !f.is_zero(&x.det(f)) {
            out.push(x.projective_canonical(f));
            return Ok(out);
        }
    }
    Ok(out)
}

/// Branching search for `t` with `t s_i t⁻¹ ∈ targets_i` for every source `s_i`.
struct Search<'a> {
    f: &'a Field,
    n: usize,
    sources: Vec<Mat>,
    targets: Vec<Vec<Mat>>,
}

impl<'a> Search<'a> {
    /// Candidate images of the sources inside `g2`.
    fn new(sources: Vec<Mat>, g2: &'a MatGroup) -> Result<Search<'a>> {
        let f = g2.field();
        let n = g2.degree();
        let closure = g2.closure()?;
        let mut targets = Vec::with_capacity(sources.len());
        for s in &sources {
            let det = s.det(f);
            let tr = s.trace(f);
            let cp = s.charpoly(f);
            let mut cands = Vec::new();
            for h in closure.elements() {
                let lambdas = if g2.scalars_adjoined() {
                    let dh = h.det(f);
                    nth_roots(f, &f.div(&det, &dh)?, n)
                } else {
                    vec![f.one()]
                };
                for l in lambdas {
                    let c = h.scale(f, &l);
                    if c.trace(f) == tr && c.det(f) == det && c.charpoly(f) == cp {
                        cands.push(c);
                    }
                }
            }
            targets.push(cands);
        }
        Ok(Search {
            f,
            n,
            sources,
            targets,
        })
    }

    fn full_basis(&self) -> Vec<Mat> {
        (0..self.n * self.n)
            .map(|k| unit_matrix(self.f, self.n, k))
            .collect()
    }

    fn dfs(&self, level: usize, basis: &[Mat], all: bool, out: &mut Vec<Mat>) -> Result<bool> {
        if level == self.sources.len() {
            let found = invertibles(self.f, basis, all)?;
            let hit = !found.is_empty();
            out.extend(found);
            return Ok(hit && !all);
        }
        for c in &self.targets[level] {
            let nb = restrict(self.f, basis, &self.sources[level], c);
            if nb.is_empty() {
                continue;
            }
            if self.dfs(level + 1, &nb, all, out)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Runs the first level in parallel; results keep the sequential order.
    fn run(&self, all: bool) -> Result<Vec<Mat>> {
        if self.sources.is_empty() {
            return Ok(vec![Mat::identity(self.f, self.n)]);
        }
        let base = self.full_basis();
        let branch = |c: &Mat| -> Result<Vec<Mat>> {
            let nb = restrict(self.f, &base, &self.sources[0], c);
            let mut out = Vec::new();
            if !nb.is_empty() {
                self.dfs(1, &nb, all, &mut out)?;
            }
            Ok(out)
        };
        if all {
            let parts: Vec<Result<Vec<Mat>>> = self.targets[0].par_iter().map(branch).collect();
            let mut out = Vec::new();
            for p in parts {
                out.extend(p?);
            }
            return Ok(out);
        }
        let first = self.targets[0]
            .par_iter()
            .map(branch)
            .find_map_first(|r| match r {
                Ok(v) if v.is_empty() => None,
                other => Some(other),
            });
        match first {
            Some(r) => r,
            None => Ok(Vec::new()),
        }
    }
}

fn nonscalar_gens(g: &MatGroup) -> Vec<Mat> {
    let f = g.field();
    g.gens()
        .iter()
        .filter(|x| !x.is_scalar(f))
        .cloned()
        .collect()
}

fn check_pair(g1: &MatGroup, g2: &MatGroup) -> Result<()> {
    if g1.field() != g2.field() || g1.degree() != g2.degree() {
        return Err(Error::Precondition(
            "groups must share field and degree".into(),
        ));
    }
    if g1.scalars_adjoined() != g2.scalars_adjoined() {
        return Err(Error::Precondition(
            "both groups must agree on adjoined scalars".into(),
        ));
    }
    Ok(())
}

/// Some `t` with `t G1 t⁻¹ ≤ G2`.
pub fn embedding_search(g1: &MatGroup, g2: &MatGroup) -> Result<Option<Mat>> {
    check_pair(g1, g2)?;
    let search = Search::new(nonscalar_gens(g1), g2)?;
    Ok(search.run(false)?.into_iter().next())
}

/// Some `t` with `t G1 t⁻¹ = G2` (modulo scalars when they are adjoined), or `None`.
pub fn conjugator_search(g1: &MatGroup, g2: &MatGroup) -> Result<Option<Mat>> {
    check_pair(g1, g2)?;
    if g1.closure()?.len() != g2.closure()?.len() {
        return Ok(None);
    }
    embedding_search(g1, g2)
}

/// Some `t` with `t a t⁻¹ = b`.
pub fn element_conjugator(f: &Field, a: &Mat, b: &Mat) -> Result<Option<Mat>> {
    if a.charpoly(f) != b.charpoly(f) {
        return Ok(None);
    }
    let search = Search {
        f,
        n: a.n(),
        sources: vec![a.clone()],
        targets: vec![vec![b.clone()]],
    };
    Ok(search.run(false)?.into_iter().next())
}

/// Projective representatives of `N_{GL}(G)` for `G ⊇ F^x` over a finite field.
pub fn normalizer_elements(g: &MatGroup) -> Result<Vec<Mat>> {
    if !g.field().is_finite() || !g.scalars_adjoined() {
        return Err(Error::Precondition(
            "normalizers are enumerated for groups containing F^x over finite fields".into(),
        ));
    }
    let search = Search::new(nonscalar_gens(g), g)?;
    let mut out = search.run(true)?;
    out.sort();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{make_g_alpha_b, make_h_alpha};

    #[test]
    fn rational_roots() {
        let q = Field::rationals();
        let r = nth_roots(&q, &q.from_rational(4, 9).unwrap(), 2);
        assert_eq!(r.len(), 2);
        assert!(nth_roots(&q, &q.from_i64(2), 2).is_empty());
        assert_eq!(nth_roots(&q, &q.from_i64(-8), 3), vec![q.from_i64(-2)]);
        let f7 = Field::prime(7).unwrap();
        assert_eq!(nth_roots(&f7, &f7.one(), 3).len(), 3);
    }

    #[test]
    fn element_conjugators() {
        let f = Field::prime(7).unwrap();
        let a = Mat::parse(&f, "0,1;2,0").unwrap();
        let b = Mat::parse(&f, "0,2;1,0").unwrap();
        let t = element_conjugator(&f, &a, &b).unwrap().unwrap();
        assert_eq!(Mat::conjugate(&f, &t, &a).unwrap(), b);
        let c = Mat::parse(&f, "0,1;3,0").unwrap();
        assert!(element_conjugator(&f, &a, &c).unwrap().is_none());
    }

    #[test]
    fn identity_conjugates_group_to_itself() {
        let f = Field::prime(3).unwrap();
        let g = make_g_alpha_b(&f, 2, &f.from_i64(-1), &[f.one()]).unwrap();
        let t = conjugator_search(&g, &g).unwrap().unwrap();
        assert!(g.normalized_by(&t).unwrap());
        let h = make_h_alpha(&f, 2, &f.one()).unwrap();
        assert!(conjugator_search(&h, &g).unwrap().is_none());
        let t = embedding_search(&h, &g).unwrap().unwrap();
        for x in h.gens() {
            assert!(g.contains(&Mat::conjugate(&f, &t, x).unwrap()).unwrap());
        }
    }

    #[test]
    fn normalizer_of_sylow_is_itself() {
        // G(-1,1) over GF(3) is a Sylow 2-subgroup of GL(2,3), self-normalizing
        let f = Field::prime(3).unwrap();
        let g = make_g_alpha_b(&f, 2, &f.from_i64(-1), &[f.one()]).unwrap();
        assert_eq!(normalizer_elements(&g).unwrap().len(), 8);
        // H_1 mod scalars is a Klein four-group generated by transpositions of
        // the projective line, so its normalizer in PGL(2,3) = S_4 has order 8
        let h = make_h_alpha(&f, 2, &f.one()).unwrap();
        assert_eq!(normalizer_elements(&h).unwrap().len(), 8);
    }

    #[test]
    fn rational_conjugacy_of_monomial_groups() {
        let q = Field::rationals();
        let h2 = make_h_alpha(&q, 2, &q.from_i64(2)).unwrap();
        let h18 = make_h_alpha(&q, 2, &q.from_i64(18)).unwrap();
        let h3 = make_h_alpha(&q, 2, &q.from_i64(3)).unwrap();
        assert!(conjugator_search(&h2, &h18).unwrap().is_some());
        assert!(conjugator_search(&h2, &h3).unwrap().is_none());
    }
}
