//! Representation-theoretic properties of matrix groups.

mod structure;
pub mod suite;

use std::collections::HashSet;

use serde::Serialize;

use crate::construct::{is_case_star, make_i_alpha};
use crate::error::{Error, Result};
use crate::field::{Elem, Field, UnitSubgroup};
use crate::group::MatGroup;
use crate::matrix::{nullspace, Mat, Span};
use crate::poly::binomial_irreducible;

pub use structure::{
    konyukh_check, normal_abelian_check, syl2_quotient_structure, sylq_quotient_generator,
    KonyukhSeries, NormalAbelianWitness, Syl2Case, Syl2Structure, SylqGenerator,
};

/// Scale so the first nonzero coordinate is 1.
pub fn canonical_line(f: &Field, v: &[Elem]) -> Vec<Elem> {
    match v.iter().find(|x| !f.is_zero(x)) {
        Some(lead) if !f.is_one(lead) => {
            let inv = f.inv(lead).expect("nonzero");
            v.iter().map(|x| f.mul(x, &inv)).collect()
        }
        _ => v.to_vec(),
    }
}

/// Canonical representatives of the points of `P^{n-1}(F)` (finite fields).
pub fn projective_points(f: &Field, n: usize) -> Vec<Vec<Elem>> {
    let elems = f.elements();
    let mut out = Vec::new();
    for lead in 0..n {
        let free = n - lead - 1;
        let total = elems.len().pow(free as u32);
        for t in 0..total {
            let mut v = vec![f.zero(); n];
            v[lead] = f.one();
            let mut r = t;
            for slot in v.iter_mut().skip(lead + 1) {
                *slot = elems[r % elems.len()].clone();
                r /= elems.len();
            }
            out.push(v);
        }
    }
    out
}

/// Span of the orbit of `v` under the generators.
pub fn spin(f: &Field, gens: &[Mat], v: &[Elem]) -> Span {
    let mut span = Span::new(v.len());
    let mut queue = vec![v.to_vec()];
    span.insert(f, v);
    while let Some(w) = queue.pop() {
        for g in gens {
            let gw = g.apply(f, &w);
            if span.insert(f, &gw) {
                queue.push(gw);
            }
        }
    }
    span
}

/// Dimension of the F-span of the group inside the full matrix algebra.
pub fn enveloping_dim(g: &MatGroup) -> usize {
    let f = g.field();
    let n = g.degree();
    let one = Mat::identity(f, n);
    let mut span = Span::new(n * n);
    let mut basis = vec![one.clone()];
    span.insert(f, one.as_vector());
    let mut i = 0;
    while i < basis.len() {
        for s in g.gens() {
            let p = basis[i].mul(f, s);
            if span.insert(f, p.as_vector()) {
                basis.push(p);
            }
        }
        i += 1;
    }
    span.rank()
}

pub fn is_absolutely_irreducible(g: &MatGroup) -> bool {
    enveloping_dim(g) == g.degree() * g.degree()
}

#[derive(Clone, Debug)]
pub struct Irreducibility {
    pub irreducible: bool,
    /// Basis of a proper invariant subspace when reducible.
    pub witness: Option<Vec<Vec<Elem>>>,
    pub method: &'static str,
}

fn reducible(witness: Vec<Vec<Elem>>, method: &'static str) -> Irreducibility {
    Irreducibility {
        irreducible: false,
        witness: Some(witness),
        method,
    }
}

fn irreducible(method: &'static str) -> Irreducibility {
    Irreducibility {
        irreducible: true,
        witness: None,
        method,
    }
}

/// Common eigenlines of the given matrices with rational eigenvalues (Q only).
fn common_eigenlines(f: &Field, mats: &[Mat]) -> Result<Option<Vec<Elem>>> {
    let n = mats[0].n();
    let roots: Vec<Vec<Elem>> = mats
        .iter()
        .map(|m| m.charpoly(f).roots(f))
        .collect::<Result<_>>()?;
    if roots.iter().any(|r| r.is_empty()) {
        return Ok(None);
    }
    let mut idx = vec![0usize; mats.len()];
    loop {
        let mut rows = Vec::new();
        for (m, (r, &i)) in mats.iter().zip(roots.iter().zip(&idx)) {
            let shifted = m.sub(f, &Mat::scalar(f, n, &r[i]));
            for k in 0..n {
                rows.push(shifted.row(k).to_vec());
            }
        }
        if let Some(v) = nullspace(f, &rows, n).into_iter().next() {
            return Ok(Some(canonical_line(f, &v)));
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return Ok(None);
            }
            idx[k] += 1;
            if idx[k] < roots[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Whether the group acts irreducibly on `F^q`, with an invariant subspace as witness otherwise.
pub fn is_irreducible(g: &MatGroup) -> Result<Irreducibility> {
    let f = g.field();
    let n = g.degree();
    let gens: Vec<Mat> = g
        .gens()
        .iter()
        .filter(|x| !x.is_scalar(f))
        .cloned()
        .collect();
    if gens.is_empty() {
        let mut e1 = vec![f.zero(); n];
        e1[0] = f.one();
        return Ok(if n == 1 {
            irreducible("dimension one")
        } else {
            reducible(vec![e1], "scalar group")
        });
    }
    if f.is_finite() {
        for v in projective_points(f, n) {
            let s = spin(f, &gens, &v);
            if s.rank() < n {
                return Ok(reducible(s.basis(), "exhaustive spin"));
            }
        }
        return Ok(irreducible("exhaustive spin"));
    }
    if enveloping_dim(g) == n * n {
        return Ok(irreducible("enveloping algebra is full"));
    }
    for x in &gens {
        let cp = x.charpoly(f);
        let binomial = cp.coeffs[1..n].iter().all(|c| f.is_zero(c))
            && binomial_irreducible(f, n as u64, &f.neg(&cp.coeffs[0]))?;
        if binomial || (n <= 3 && cp.roots(f)?.is_empty()) {
            return Ok(irreducible(
                "generator with irreducible characteristic polynomial",
            ));
        }
    }
    if n > 3 {
        return Err(Error::Unsupported(format!(
            "irreducibility over Q in degree {n} beyond the algebra-dimension test"
        )));
    }
    if let Some(v) = common_eigenlines(f, &gens)? {
        return Ok(reducible(vec![v], "common rational eigenline"));
    }
    let transposed: Vec<Mat> = gens.iter().map(|x| x.transpose()).collect();
    if let Some(u) = common_eigenlines(f, &transposed)? {
        // the annihilator of an invariant line of the transposes is invariant
        let hyper = nullspace(f, &[u], n);
        return Ok(reducible(hyper, "invariant hyperplane"));
    }
    Ok(irreducible("no invariant line or hyperplane"))
}

#[derive(Clone, Debug)]
pub struct Primitivity {
    pub primitive: bool,
    /// `q` independent lines permuted by the group, when imprimitive.
    pub system: Option<Vec<Vec<Elem>>>,
}

/// Orbit of a line under the generators, stopping once it exceeds `limit` lines.
fn line_orbit(f: &Field, gens: &[Mat], v: &[Elem], limit: usize) -> Option<Vec<Vec<Elem>>> {
    let start = canonical_line(f, v);
    let mut seen = HashSet::new();
    seen.insert(start.clone());
    let mut orbit = vec![start];
    let mut i = 0;
    while i < orbit.len() {
        for g in gens {
            let w = canonical_line(f, &g.apply(f, &orbit[i]));
            if seen.insert(w.clone()) {
                orbit.push(w);
                if orbit.len() > limit {
                    return None;
                }
            }
        }
        i += 1;
    }
    Some(orbit)
}

fn system_from(f: &Field, gens: &[Mat], v: &[Elem]) -> Option<Vec<Vec<Elem>>> {
    let n = v.len();
    let orbit = line_orbit(f, gens, v, n)?;
    if orbit.len() != n {
        return None;
    }
    let mut span = Span::new(n);
    for w in &orbit {
        span.insert(f, w);
    }
    (span.rank() == n).then_some(orbit)
}

/// Searches for a system of `q` independent lines permuted by an irreducible group.
pub fn is_primitive(g: &MatGroup) -> Result<Primitivity> {
    let f = g.field();
    let n = g.degree();
    let gens: Vec<Mat> = g
        .gens()
        .iter()
        .filter(|x| !x.is_scalar(f))
        .cloned()
        .collect();
    let found = |v: &[Elem]| system_from(f, &gens, v);
    if f.is_finite() {
        for v in projective_points(f, n) {
            if let Some(sys) = found(&v) {
                return Ok(Primitivity {
                    primitive: false,
                    system: Some(sys),
                });
            }
        }
        return Ok(Primitivity {
            primitive: true,
            system: None,
        });
    }
    if n > 3 {
        return Err(Error::Unsupported(format!(
            "primitivity over Q in degree {n}"
        )));
    }
    // Over Q the lines of a system are either eigenlines of a nonscalar element
    // fixing every line, or (when no such element exists) any cyclic vector works.
    let mut candidates: Vec<Vec<Elem>> = (0..n)
        .map(|i| {
            let mut e = vec![f.zero(); n];
            e[i] = f.one();
            e
        })
        .collect();
    for x in g.closure()?.elements() {
        if x.is_scalar(f) {
            continue;
        }
        for r in x.charpoly(f).roots(f)? {
            let shifted = x.sub(f, &Mat::scalar(f, n, &r));
            let rows: Vec<Vec<Elem>> = (0..n).map(|k| shifted.row(k).to_vec()).collect();
            let ns = nullspace(f, &rows, n);
            if ns.len() == 1 {
                candidates.push(ns[0].clone());
            }
        }
    }
    for v in candidates {
        if let Some(sys) = found(&v) {
            return Ok(Primitivity {
                primitive: false,
                system: Some(sys),
            });
        }
    }
    Ok(Primitivity {
        primitive: true,
        system: None,
    })
}

/// `Ddet(G)`: generated by generator determinants, plus `(F^x)^q` when scalars are adjoined.
pub fn det_group(g: &MatGroup) -> Result<UnitSubgroup> {
    let f = g.field();
    let dets: Vec<Elem> = g.gens().iter().map(|x| x.det(f)).collect();
    UnitSubgroup::generated(f, g.degree() as u64, &dets, g.scalars_adjoined())
}

/// `⟨(-1)^{q-1} α, (F^x)^q⟩ = Ddet(A_α)` outside case (*).
pub fn ddet_a_alpha(f: &Field, q: usize, alpha: &Elem) -> Result<UnitSubgroup> {
    let det_i = make_i_alpha(f, q, alpha)?.det(f);
    UnitSubgroup::generated(f, q as u64, &[det_i], true)
}

/// Primitivity of `G(α, b)` predicted from `det(b)` alone.
pub fn primitivity_criterion(f: &Field, q: usize, alpha: &Elem, det_b: &Elem) -> Result<bool> {
    if is_case_star(f, q, alpha) {
        return Ok(true);
    }
    Ok(!ddet_a_alpha(f, q, alpha)?.contains(f, det_b)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct ModuleDecomposition {
    pub invariant_subspace: Option<Vec<Vec<String>>>,
    pub block_system: Option<Vec<Vec<String>>>,
    pub enveloping_dim: usize,
}

/// Irreducibility witness, block system and enveloping dimension in one report.
pub fn module_decomposition(g: &MatGroup) -> Result<ModuleDecomposition> {
    let f = g.field();
    let fmt = |vs: Vec<Vec<Elem>>| -> Vec<Vec<String>> {
        vs.iter()
            .map(|v| v.iter().map(|x| f.format_elem(x)).collect())
            .collect()
    };
    let irr = is_irreducible(g)?;
    let block_system = if irr.irreducible {
        is_primitive(g)?.system.map(fmt)
    } else {
        None
    };
    Ok(ModuleDecomposition {
        invariant_subspace: irr.witness.map(fmt),
        block_system,
        enveloping_dim: enveloping_dim(g),
    })
}
