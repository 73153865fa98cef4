//! The classification list: `H_1`, the monomial family `H_α`, the primitive
//! family `G(α, b)` and the Singer-type abelian groups, with conjugacy
//! deciders and class counts.

pub mod audit;
mod deciders;
mod rational;
mod verify;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::arith::{is_prime, q_part};
use crate::construct::{is_case_star, make_h_alpha, make_singer, PrimitiveData};
use crate::error::{Error, Result};
use crate::field::{ClassMode, Elem, Field};
use crate::group::MatGroup;
use crate::matrix::Mat;
use crate::oracle::{conjugator_search, MaximalityMode};
use crate::poly::binomial_irreducible;
use crate::props::{det_group, primitivity_criterion};

pub use deciders::{
    db_conjugate, determinant_conditions, i_times, ia_conjugate, in_s, monomial_conjugate,
    primitive_certificate, primitive_conjugate, Decision,
};
pub use rational::{canonical_squarefree, squarefree_part, v_triple};
pub use verify::{verify_rep, ClassFormula, FormulaReading, MaximalSummary, Verified};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Tag {
    MonomialH,
    PrimitiveG,
    AbelianSinger,
}

impl Tag {
    pub fn label(&self) -> &'static str {
        match self {
            Tag::MonomialH => "MonomialH",
            Tag::PrimitiveG => "PrimitiveG",
            Tag::AbelianSinger => "AbelianSinger",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Parameters {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub polynomial: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// The subgroup `⟨αS⟩` of `F^x/S`.
    MonomialClass { alpha_s: String },
    /// `Ddet(G(α, b))` and the coset of `det(b)` modulo `Ddet(A_α)`.
    Determinants { ddet: String, det_b_coset: String },
    /// `G(-1, b)`: no determinant criterion applies.
    CaseStar {
        ddet: String,
        det_b: String,
        conjugacy: String,
    },
    /// The extension field realized by the enveloping algebra.
    Extension { field: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassRep {
    pub tag: Tag,
    pub parameters: Parameters,
    pub certificate: Certificate,
    pub exceptional: Vec<String>,
    pub generators: Vec<Vec<Vec<String>>>,
    pub scalars_adjoined: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verified: Option<Verified>,
    #[serde(skip)]
    pub group: Option<MatGroup>,
}

impl ClassRep {
    fn new(
        tag: Tag,
        parameters: Parameters,
        certificate: Certificate,
        group: MatGroup,
    ) -> ClassRep {
        let f = group.field().clone();
        ClassRep {
            tag,
            parameters,
            certificate,
            exceptional: Vec::new(),
            generators: group.gens().iter().map(|g| g.to_strings(&f)).collect(),
            scalars_adjoined: group.scalars_adjoined(),
            verified: None,
            group: Some(group),
        }
    }

    /// `H_α` with its certificate.
    pub fn monomial(f: &Field, q: usize, alpha: &Elem) -> Result<ClassRep> {
        check_q(q)?;
        monomial_rep(f, q, alpha)
    }

    /// `G(α, b)` for `b = Σ b_i I_α^i`.
    pub fn primitive(f: &Field, q: usize, alpha: &Elem, b: &[Elem]) -> Result<ClassRep> {
        check_q(q)?;
        primitive_rep(f, q, alpha, b)
    }

    /// The Singer-type group over a finite field; over `Q`, the unit group of
    /// `Q(m^(1/q))` given by its generator `I_m`.
    pub fn abelian(f: &Field, q: usize, m: Option<i64>) -> Result<ClassRep> {
        check_q(q)?;
        match (f.is_finite(), m) {
            (true, _) => singer_rep(f, q),
            (false, Some(m)) => {
                let a = f.from_i64(m);
                if !binomial_irreducible(f, q as u64, &a)? {
                    return Err(Error::Precondition(format!(
                        "X^{q} - {m} is reducible over Q"
                    )));
                }
                rational::abelian_rep(f, q, m, format!("Q({m}^(1/{q}))"))
            }
            (false, None) => Err(Error::Precondition(
                "an abelian group over Q needs the parameter m".into(),
            )),
        }
    }

    /// One-line name such as `G(-1, 1 + 1*I)`.
    pub fn name(&self) -> String {
        let p = &self.parameters;
        match self.tag {
            Tag::MonomialH => format!("H_{}", p.alpha.as_deref().unwrap_or("?")),
            Tag::PrimitiveG => format!(
                "G({}, [{}])",
                p.alpha.as_deref().unwrap_or("?"),
                p.b.as_ref().map(|b| b.join(",")).unwrap_or_default()
            ),
            Tag::AbelianSinger => format!("Singer({})", p.polynomial.as_deref().unwrap_or("?")),
        }
    }
}

/// A candidate that the classification rules remove.
#[derive(Clone, Debug, Serialize)]
pub struct Suppressed {
    pub candidate: String,
    pub rule: String,
    pub generators: Vec<Vec<Vec<String>>>,
    #[serde(skip)]
    pub group: Option<MatGroup>,
    /// Parameters of a listed group expected to contain a conjugate of the candidate.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub absorbed_by: Option<String>,
    #[serde(skip)]
    pub absorber: Option<MatGroup>,
}

/// A class count that may be infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Count {
    Finite(u64),
    Infinite,
}

impl Serialize for Count {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Count::Finite(n) => s.serialize_u64(*n),
            Count::Infinite => s.serialize_str("infinite"),
        }
    }
}

impl std::fmt::Display for Count {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Count::Finite(n) => write!(f, "{n}"),
            Count::Infinite => f.write_str("infinite"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassCount {
    pub count: Count,
    pub breakdown: BTreeMap<&'static str, Count>,
    /// Infinite quotients that make the count infinite.
    pub infinite_because: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub q: usize,
    pub field: String,
    pub classes: Vec<ClassRep>,
    pub suppressed: Vec<Suppressed>,
    pub count: ClassCount,
    pub notes: Vec<String>,
}

#[derive(Clone, Copy, Debug)]
pub struct ClassifyOptions {
    /// Entries per infinite family.
    pub limit: usize,
    pub verify: bool,
    /// Run the adjunction maximality test while verifying (finite fields).
    pub maximality: bool,
    pub maximality_mode: Option<MaximalityMode>,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            limit: 25,
            verify: true,
            maximality: true,
            maximality_mode: None,
        }
    }
}

pub(crate) const RULE_H1: &str =
    "q = 2 and sqrt(-1) is not in F: H_1 is a proper subgroup of G(-1, 1)";
pub(crate) const RULE_SINGER: &str =
    "q = 2 and sqrt(-1) is not in F: the projective image is a 2-group, so the group lies in some G(-1, b)";
pub(crate) const RULE_EXCEPTION_II: &str =
    "q = 2, sqrt(-1) not in F, alpha not in -F^2 and det(b) in -F^2 or alpha*F^2: conjugate to a proper subgroup of G(-1, c) with det(c) = alpha";

fn check_q(q: usize) -> Result<()> {
    if q < 2 || !is_prime(q as u64) {
        return Err(Error::NotPrime(q as u64));
    }
    Ok(())
}

fn elem_strings(f: &Field, v: &[Elem]) -> Vec<String> {
    v.iter().map(|x| f.format_elem(x)).collect()
}

fn b_coefficients(f: &Field, q: usize, index: u64) -> Vec<Elem> {
    let elems = f.elements();
    let s = elems.len() as u64;
    let mut r = index;
    (0..q)
        .map(|_| {
            let c = elems[(r % s) as usize].clone();
            r /= s;
            c
        })
        .collect()
}

/// Whether `sqrt(-1)` is missing from `F` with `q = 2`.
pub fn epsilon_missing(f: &Field, q: usize) -> bool {
    q == 2 && f.has_order_q_element(2) && !f.is_square(&f.from_i64(-1))
}

fn monomial_rep(f: &Field, q: usize, alpha: &Elem) -> Result<ClassRep> {
    let cls = f.power_class(alpha, q as u64, ClassMode::ModS)?;
    let alpha_s = if cls.is_trivial() {
        "S".to_string()
    } else {
        format!("<{} S>", cls.label(f))
    };
    Ok(ClassRep::new(
        Tag::MonomialH,
        Parameters {
            alpha: Some(f.format_elem(alpha)),
            ..Parameters::default()
        },
        Certificate::MonomialClass { alpha_s },
        make_h_alpha(f, q, alpha)?,
    ))
}

fn primitive_rep(f: &Field, q: usize, alpha: &Elem, b: &[Elem]) -> Result<ClassRep> {
    let p = PrimitiveData::new(f, q, alpha, b)?;
    let group = p.group()?;
    let params = Parameters {
        alpha: Some(f.format_elem(alpha)),
        b: Some(elem_strings(f, &p.b_coeffs)),
        polynomial: None,
    };
    let certificate = if p.case_star {
        Certificate::CaseStar {
            ddet: det_group(&group)?.describe(),
            det_b: f.format_elem(&p.det_b()),
            conjugacy: if f.is_finite() {
                "decided by conjugator search".into()
            } else {
                "undecided by the determinant criteria".into()
            },
        }
    } else {
        let (ddet, det_b_coset) = primitive_certificate(f, q, alpha, b)?;
        Certificate::Determinants {
            ddet: ddet.describe(),
            det_b_coset,
        }
    };
    Ok(ClassRep::new(Tag::PrimitiveG, params, certificate, group))
}

fn singer_rep(f: &Field, q: usize) -> Result<ClassRep> {
    let (poly, group) = make_singer(f, q)?;
    let size = f.order().expect("finite field");
    Ok(ClassRep::new(
        Tag::AbelianSinger,
        Parameters {
            polynomial: Some(poly.format(f)),
            ..Parameters::default()
        },
        Certificate::Extension {
            field: format!("GF({size}^{q})"),
        },
        group,
    ))
}

fn suppressed(
    candidate: String,
    rule: &str,
    group: MatGroup,
    absorber: Option<(String, MatGroup)>,
) -> Suppressed {
    let f = group.field().clone();
    let (absorbed_by, absorber) = match absorber {
        Some((n, g)) => (Some(n), Some(g)),
        None => (None, None),
    };
    Suppressed {
        candidate,
        rule: rule.into(),
        generators: group.gens().iter().map(|g| g.to_strings(&f)).collect(),
        group: Some(group),
        absorbed_by,
        absorber,
    }
}

/// Coset representatives `b` of `Δ_{-1}^x` modulo `A_{-1}F^x`, deduplicated
/// up to conjugacy of `G(-1, b)` by conjugator search.
fn case_star_reps(f: &Field) -> Result<Vec<Vec<Elem>>> {
    let minus_one = f.from_i64(-1);
    let a = PrimitiveData::new(f, 2, &minus_one, &[f.one()])?.a_group()?;
    let size = f.order().expect("finite field");
    let i = crate::construct::make_i_alpha(f, 2, &minus_one)?;
    let mut cosets: Vec<Mat> = Vec::new();
    let mut reps: Vec<Vec<Elem>> = Vec::new();
    for idx in 0..size * size {
        let b = b_coefficients(f, 2, idx);
        let m = crate::construct::delta_element(f, &i, &b);
        if f.is_zero(&m.det(f)) {
            continue;
        }
        let mut new = true;
        for c in &cosets {
            if a.contains(&m.mul(f, &c.inv(f)?))? {
                new = false;
                break;
            }
        }
        if new {
            cosets.push(m);
            reps.push(b);
        }
    }
    let groups: Vec<MatGroup> = reps
        .iter()
        .map(|b| PrimitiveData::new(f, 2, &minus_one, b)?.group())
        .collect::<Result<_>>()?;
    let mut kept: Vec<usize> = Vec::new();
    for (j, g) in groups.iter().enumerate() {
        let mut fresh = true;
        for &k in &kept {
            if conjugator_search(&groups[k], g)?.is_some() {
                fresh = false;
                break;
            }
        }
        if fresh {
            kept.push(j);
        }
    }
    Ok(kept.into_iter().map(|j| reps[j].clone()).collect())
}

fn classify_finite(f: &Field, q: usize) -> Result<(Vec<ClassRep>, Vec<Suppressed>, Vec<String>)> {
    let mut classes = Vec::new();
    let mut supp = Vec::new();
    let mut notes = Vec::new();
    let eps_missing = epsilon_missing(f, q);
    let units = f.units();
    if !f.has_order_q_element(q as u64) {
        notes.push(format!(
            "F^x has no element of order {q}: every maximal locally nilpotent subgroup is abelian"
        ));
        classes.push(singer_rep(f, q)?);
        return Ok((classes, supp, notes));
    }

    // H_1 and the monomial family
    let h1 = monomial_rep(f, q, &f.one())?;
    if eps_missing {
        let g11 = PrimitiveData::new(f, 2, &f.from_i64(-1), &[f.one()])?.group()?;
        supp.push(suppressed(
            "H_1".into(),
            RULE_H1,
            h1.group.clone().unwrap(),
            Some(("G(-1, [1,0])".into(), g11)),
        ));
    } else {
        classes.push(h1);
    }
    let mut alpha_classes: Vec<Elem> = Vec::new();
    for a in &units {
        if in_s(f, q, a)? {
            continue;
        }
        let mut fresh = true;
        for b in &alpha_classes {
            if monomial_conjugate(f, q, a, b)? {
                fresh = false;
                break;
            }
        }
        if fresh {
            alpha_classes.push(a.clone());
            classes.push(monomial_rep(f, q, a)?);
        }
    }
    if alpha_classes.is_empty() {
        notes.push("F^x/S is trivial, so the monomial family is {H_1} up to conjugacy".into());
    }

    // primitive groups outside case (*)
    let size = f.order().expect("finite field");
    let total = (size as u128).pow(q as u32).min(100_000) as u64;
    let mut seen_alpha: Vec<Elem> = Vec::new();
    let mut noncase: Vec<(Elem, Vec<Elem>)> = Vec::new();
    for a in &units {
        if is_case_star(f, q, a) || !binomial_irreducible(f, q as u64, a)? {
            continue;
        }
        let cls = f.power_class(a, q as u64, ClassMode::QthPowers)?;
        if seen_alpha.iter().any(|s| {
            f.power_class(s, q as u64, ClassMode::QthPowers)
                .map(|c| c == cls)
                .unwrap_or(false)
        }) {
            continue;
        }
        seen_alpha.push(a.clone());
        let mut kept: Vec<Vec<Elem>> = Vec::new();
        for idx in 1..total {
            let b = b_coefficients(f, q, idx);
            let Ok(p) = PrimitiveData::new(f, q, a, &b) else {
                continue;
            };
            if !primitivity_criterion(f, q, a, &p.det_b())? {
                continue;
            }
            let mut fresh = true;
            for k in &kept {
                if determinant_conditions(f, q, a, k, &b)? {
                    fresh = false;
                    break;
                }
            }
            if fresh {
                kept.push(b);
            }
        }
        noncase.extend(kept.into_iter().map(|b| (a.clone(), b)));
    }
    let minus_one = f.from_i64(-1);
    let mut noncase_groups: Vec<MatGroup> = Vec::new();
    for (a, b) in noncase {
        let rep = primitive_rep(f, q, &a, &b)?;
        let g = rep.group.clone().unwrap();
        if eps_missing && !is_case_star(f, q, &a) {
            let db = PrimitiveData::new(f, q, &a, &b)?.det_b();
            if f.is_square(&f.neg(&db)) || f.is_square(&f.div(&db, &a)?) {
                supp.push(suppressed(rep.name(), RULE_EXCEPTION_II, g, None));
                continue;
            }
        }
        let mut fresh = true;
        for k in &noncase_groups {
            if conjugator_search(k, &g)?.is_some() {
                fresh = false;
                break;
            }
        }
        if fresh {
            noncase_groups.push(g);
            classes.push(rep);
        }
    }
    if q == 2 && eps_missing {
        let reps = case_star_reps(f)?;
        notes.push(format!(
            "case (*): {} class(es) of G(-1, b) after conjugator search",
            reps.len()
        ));
        for (n, b) in reps.iter().enumerate() {
            let mut rep = primitive_rep(f, q, &minus_one, b)?;
            if n == 0 && b.iter().skip(1).all(|x| f.is_zero(x)) {
                rep.exceptional
                    .push("contains H_1 as a proper subgroup".into());
            }
            classes.push(rep);
        }
    }

    // Singer-type abelian class
    let singer = singer_rep(f, q)?;
    let proj = size + 1;
    if eps_missing && proj.is_power_of_two() {
        let absorber = classes
            .iter()
            .find(|c| c.tag == Tag::PrimitiveG)
            .map(|c| (c.name(), c.group.clone().unwrap()));
        supp.push(suppressed(
            singer.name(),
            RULE_SINGER,
            singer.group.clone().unwrap(),
            absorber,
        ));
    } else {
        classes.push(singer);
    }
    let (_, qpart) = q_part(f.unit_order().unwrap(), q as u64);
    notes.push(format!("|Syl_{q}(F^x)| = {qpart}"));
    Ok((classes, supp, notes))
}

/// Representatives of the conjugacy classes of irreducible maximal locally
/// nilpotent subgroups of `GL(q, F)`. Infinite families are truncated to
/// `options.limit` entries each.
pub fn classify(q: usize, f: &Field, options: &ClassifyOptions) -> Result<Classification> {
    check_q(q)?;
    let (mut classes, suppressed, notes) = if f.is_finite() {
        classify_finite(f, q)?
    } else {
        rational::classify_rational(q, f, options.limit)?
    };
    if options.verify {
        let mode = options.maximality_mode;
        let maximality = options.maximality;
        let verified: Vec<Verified> = classes
            .par_iter()
            .map(|c| verify_rep(c, maximality, mode))
            .collect::<Result<_>>()?;
        for (c, v) in classes.iter_mut().zip(verified) {
            c.verified = Some(v);
        }
    }
    let count = count_from(q, f, &classes);
    Ok(Classification {
        q,
        field: f.descriptor(),
        classes,
        suppressed,
        count,
        notes,
    })
}

fn count_from(q: usize, f: &Field, classes: &[ClassRep]) -> ClassCount {
    let mut breakdown = BTreeMap::new();
    for tag in [Tag::MonomialH, Tag::PrimitiveG, Tag::AbelianSinger] {
        breakdown.insert(tag.label(), Count::Finite(0));
    }
    if f.is_finite() {
        for c in classes {
            if let Some(Count::Finite(n)) = breakdown.get_mut(c.tag.label()) {
                *n += 1;
            }
        }
        return ClassCount {
            count: Count::Finite(classes.len() as u64),
            breakdown,
            infinite_because: Vec::new(),
        };
    }
    let mut because = Vec::new();
    if f.has_order_q_element(q as u64) {
        breakdown.insert(Tag::MonomialH.label(), Count::Infinite);
        breakdown.insert(Tag::PrimitiveG.label(), Count::Infinite);
        because.push("F^x/S is infinite (monomial family)".into());
        because.push(format!("F^x/(F^x)^{q} is infinite (primitive family)"));
    }
    breakdown.insert(Tag::AbelianSinger.label(), Count::Infinite);
    because.push(format!(
        "infinitely many extensions of degree {q} (abelian family)"
    ));
    ClassCount {
        count: Count::Infinite,
        breakdown,
        infinite_because: because,
    }
}

/// Number of conjugacy classes, with a breakdown per family.
pub fn count_classes(q: usize, f: &Field) -> Result<ClassCount> {
    check_q(q)?;
    if !f.is_finite() {
        if q > 3 {
            return Err(Error::Unsupported(format!("q = {q} over Q")));
        }
        return Ok(count_from(q, f, &[]));
    }
    let (classes, _, _) = classify_finite(f, q)?;
    Ok(count_from(q, f, &classes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Cardinal;

    fn quick() -> ClassifyOptions {
        ClassifyOptions {
            maximality: false,
            ..ClassifyOptions::default()
        }
    }

    #[test]
    fn gl23_single_class() {
        let f = Field::prime(3).unwrap();
        let c = classify(2, &f, &quick()).unwrap();
        assert_eq!(c.classes.len(), 1);
        let g = &c.classes[0];
        assert_eq!(g.tag, Tag::PrimitiveG);
        assert_eq!(
            g.group.as_ref().unwrap().order().unwrap(),
            Cardinal::Finite(16)
        );
        assert_eq!(c.suppressed.len(), 2);
        assert_eq!(c.count.count, Count::Finite(1));
    }

    #[test]
    fn gl25_two_classes() {
        let f = Field::prime(5).unwrap();
        let c = classify(2, &f, &quick()).unwrap();
        let tags: Vec<Tag> = c.classes.iter().map(|r| r.tag).collect();
        assert_eq!(tags, vec![Tag::MonomialH, Tag::AbelianSinger]);
        let v = c.classes[0].verified.as_ref().unwrap();
        assert_eq!(v.nilpotency_class, Some(3));
    }

    #[test]
    fn gl27_one_class_and_gl211_two() {
        let f7 = Field::prime(7).unwrap();
        let c = classify(2, &f7, &quick()).unwrap();
        assert_eq!(c.classes.len(), 1);
        assert_eq!(c.classes[0].tag, Tag::PrimitiveG);
        let f11 = Field::prime(11).unwrap();
        let c = classify(2, &f11, &quick()).unwrap();
        let tags: Vec<Tag> = c.classes.iter().map(|r| r.tag).collect();
        assert_eq!(tags, vec![Tag::PrimitiveG, Tag::AbelianSinger]);
    }

    #[test]
    fn no_order_q_unit_is_abelian_only() {
        let f5 = Field::prime(5).unwrap();
        let c = classify(3, &f5, &quick()).unwrap();
        assert_eq!(c.classes.len(), 1);
        assert_eq!(c.classes[0].tag, Tag::AbelianSinger);
        let f2 = Field::prime(2).unwrap();
        assert_eq!(count_classes(2, &f2).unwrap().count, Count::Finite(1));
    }

    #[test]
    fn rejects_composite_degree() {
        let f = Field::prime(5).unwrap();
        assert!(classify(4, &f, &quick()).is_err());
    }
}
