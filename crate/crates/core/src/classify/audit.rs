//! Cross-checks of the classification and its conjugacy criteria against the
//! brute-force oracles.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::rational::{squarefree_part, v_triple};
use super::{
    db_conjugate, determinant_conditions, epsilon_missing, i_times, ia_conjugate,
    monomial_conjugate, primitive_conjugate, Classification, Decision, Tag,
};
use crate::construct::{is_case_star, make_h_alpha, PrimitiveData};
use crate::error::Result;
use crate::field::{Elem, Field};
use crate::group::MatGroup;
use crate::matrix::Mat;
use crate::oracle::{
    ambient_name, auto_mode, conjugator_search, element_conjugator, embedding_search,
    exhaustive_classification, gl_order, maximality_check, Check, MaximalityMode, OracleReport,
    Verdict, Witness, LATTICE_LIMIT,
};
use crate::poly::binomial_irreducible;
use crate::props::{is_primitive, primitivity_criterion};

#[derive(Clone, Copy, Debug)]
pub struct AuditOptions {
    pub seed: u64,
    /// Random instances drawn when a family is too large to enumerate.
    pub samples: usize,
    pub lattice: bool,
    pub maximality_mode: Option<MaximalityMode>,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions {
            seed: 0,
            samples: 400,
            lattice: true,
            maximality_mode: None,
        }
    }
}

/// Outcome of comparing a criterion with brute force over many instances.
struct Tally {
    name: &'static str,
    instances: usize,
    first_disagreement: Option<(String, Option<Witness>)>,
}

impl Tally {
    fn new(name: &'static str) -> Tally {
        Tally {
            name,
            instances: 0,
            first_disagreement: None,
        }
    }

    fn record(&mut self, agree: bool, what: impl FnOnce() -> (String, Option<Witness>)) {
        self.instances += 1;
        if !agree && self.first_disagreement.is_none() {
            self.first_disagreement = Some(what());
        }
    }

    fn merge(&mut self, other: Tally) {
        self.instances += other.instances;
        if self.first_disagreement.is_none() {
            self.first_disagreement = other.first_disagreement;
        }
    }

    fn check(self) -> Check {
        match self.first_disagreement {
            None => Check::new(
                self.name,
                Verdict::Pass,
                if self.instances == 0 {
                    "no instances in range".to_string()
                } else {
                    format!(
                        "criterion and brute force agree on {} instances",
                        self.instances
                    )
                },
            ),
            Some((detail, w)) => Check::new(
                self.name,
                Verdict::Fail,
                format!("disagreement among {} instances: {detail}", self.instances),
            )
            .with_witness(w),
        }
        .expect(Verdict::Pass)
    }
}

fn rng(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Indices `0..total`, or a sorted random sample of `samples` of them.
fn pick(total: u64, samples: usize, r: &mut ChaCha8Rng) -> Vec<u64> {
    if total <= samples as u64 {
        return (0..total).collect();
    }
    let mut v: Vec<u64> = (0..samples).map(|_| r.gen_range(0..total)).collect();
    v.sort_unstable();
    v.dedup();
    v
}

fn digits(f: &Field, pool: &[Elem], q: usize, mut idx: u64) -> Vec<Elem> {
    let _ = f;
    let s = pool.len() as u64;
    (0..q)
        .map(|_| {
            let c = pool[(idx % s) as usize].clone();
            idx /= s;
            c
        })
        .collect()
}

fn fmt_vec(f: &Field, v: &[Elem]) -> String {
    format!(
        "[{}]",
        v.iter()
            .map(|x| f.format_elem(x))
            .collect::<Vec<_>>()
            .join(",")
    )
}

fn alphas_with_delta_field(f: &Field, q: usize) -> Result<Vec<Elem>> {
    let mut out = Vec::new();
    for a in f.units() {
        if binomial_irreducible(f, q as u64, &a)? {
            out.push(a);
        }
    }
    Ok(out)
}

/// Invertible `b ∈ Δ_α` drawn from all coefficient vectors.
fn b_sample(f: &Field, q: usize, samples: usize, r: &mut ChaCha8Rng) -> Vec<Vec<Elem>> {
    let elems = f.elements();
    let total = (elems.len() as u64).pow(q as u32);
    pick(total, samples, r)
        .into_iter()
        .map(|i| digits(f, &elems, q, i))
        .filter(|b| b.iter().any(|x| !f.is_zero(x)))
        .collect()
}

fn ia_tally(f: &Field, q: usize, opts: &AuditOptions) -> Result<Tally> {
    let units = f.units();
    let total = (units.len() as u64).pow(2 * q as u32);
    let mut r = rng(opts.seed, 1);
    let idx = pick(total, opts.samples * 4, &mut r);
    let per: Vec<Tally> = idx
        .par_iter()
        .map(|&i| -> Result<Tally> {
            let mut t = Tally::new("diagonal_twist_conjugacy");
            let both = digits(f, &units, 2 * q, i);
            let (a, b) = both.split_at(q);
            let (ia, ib) = (i_times(f, a)?, i_times(f, b)?);
            let (crit, x) = ia_conjugate(f, a, b)?;
            let brute = element_conjugator(f, &ia, &ib)?.is_some();
            let explicit_ok = match &x {
                Some(x) => Mat::conjugate(f, x, &ia)? == ib,
                None => true,
            };
            t.record(crit == brute && explicit_ok, || {
                (
                    format!(
                        "a = {}, b = {}: criterion {crit}, search {brute}",
                        fmt_vec(f, a),
                        fmt_vec(f, b)
                    ),
                    None,
                )
            });
            Ok(t)
        })
        .collect::<Result<_>>()?;
    let mut t = Tally::new("diagonal_twist_conjugacy");
    per.into_iter().for_each(|p| t.merge(p));
    Ok(t)
}

fn monomial_tally(f: &Field, q: usize) -> Result<Tally> {
    let mut t = Tally::new("monomial_conjugacy");
    if !f.has_order_q_element(q as u64) {
        return Ok(t);
    }
    let units = f.units();
    let bases = [f.one(), f.primitive_root().unwrap_or_else(|| f.one())];
    let groups: Vec<MatGroup> = units
        .iter()
        .map(|a| make_h_alpha(f, q, a))
        .collect::<Result<_>>()?;
    let base_groups: Vec<MatGroup> = bases
        .iter()
        .map(|a| make_h_alpha(f, q, a))
        .collect::<Result<_>>()?;
    for (a, g) in units.iter().zip(&groups) {
        for (b, h) in bases.iter().zip(&base_groups) {
            let crit = monomial_conjugate(f, q, a, b)?;
            let found = conjugator_search(g, h)?;
            let brute = found.is_some();
            t.record(crit == brute, || {
                (
                    format!(
                        "alpha = {}, {}: criterion {crit}, search {brute}",
                        f.format_elem(a),
                        f.format_elem(b)
                    ),
                    found.as_ref().map(|m| Witness::conjugator(f, m)),
                )
            });
        }
    }
    Ok(t)
}

fn primitivity_tally(f: &Field, q: usize, opts: &AuditOptions) -> Result<Tally> {
    let mut t = Tally::new("primitivity_criterion");
    if !f.has_order_q_element(q as u64) {
        return Ok(t);
    }
    let mut r = rng(opts.seed, 3);
    for a in alphas_with_delta_field(f, q)? {
        let bs = b_sample(f, q, opts.samples / 4 + 1, &mut r);
        let per: Vec<Option<(bool, bool, String)>> = bs
            .par_iter()
            .map(|b| -> Result<Option<(bool, bool, String)>> {
                let Ok(p) = PrimitiveData::new(f, q, &a, b) else {
                    return Ok(None);
                };
                let crit = primitivity_criterion(f, q, &a, &p.det_b())?;
                let brute = is_primitive(&p.group()?)?.primitive;
                Ok(Some((crit, brute, fmt_vec(f, b))))
            })
            .collect::<Result<_>>()?;
        for (crit, brute, b) in per.into_iter().flatten() {
            t.record(crit == brute, || {
                (
                    format!(
                        "alpha = {}, b = {b}: criterion {crit}, block search {}",
                        f.format_elem(&a),
                        brute
                    ),
                    None,
                )
            });
        }
    }
    Ok(t)
}

fn db_tally(f: &Field, q: usize, opts: &AuditOptions) -> Result<Tally> {
    let mut t = Tally::new("db_element_conjugacy");
    if !f.has_order_q_element(q as u64) {
        return Ok(t);
    }
    let mut r = rng(opts.seed, 4);
    let per_alpha = ((opts.samples as f64).sqrt() as usize).max(4);
    for a in alphas_with_delta_field(f, q)? {
        let datas: Vec<PrimitiveData> = b_sample(f, q, per_alpha, &mut r)
            .iter()
            .filter_map(|b| PrimitiveData::new(f, q, &a, b).ok())
            .collect();
        let pairs: Vec<(usize, usize)> = (0..datas.len())
            .flat_map(|i| (i..datas.len()).map(move |j| (i, j)))
            .collect();
        let per: Vec<(bool, bool, usize, usize)> = pairs
            .par_iter()
            .map(|&(i, j)| -> Result<(bool, bool, usize, usize)> {
                let (x, y) = (&datas[i], &datas[j]);
                let crit = db_conjugate(f, q, &a, &x.b_coeffs, &y.b_coeffs)?;
                let brute = element_conjugator(f, &x.db(), &y.db())?.is_some();
                Ok((crit, brute, i, j))
            })
            .collect::<Result<_>>()?;
        for (crit, brute, i, j) in per {
            t.record(crit == brute, || {
                (
                    format!(
                        "alpha = {}, b1 = {}, b2 = {}: criterion {crit}, search {brute}",
                        f.format_elem(&a),
                        fmt_vec(f, &datas[i].b_coeffs),
                        fmt_vec(f, &datas[j].b_coeffs)
                    ),
                    None,
                )
            });
        }
    }
    Ok(t)
}

fn primitive_pairs_tally(f: &Field, q: usize, opts: &AuditOptions) -> Result<Tally> {
    let mut t = Tally::new("primitive_conjugacy");
    if !f.has_order_q_element(q as u64) {
        return Ok(t);
    }
    let mut r = rng(opts.seed, 5);
    for a in alphas_with_delta_field(f, q)? {
        if is_case_star(f, q, &a) {
            continue;
        }
        let prim: Vec<PrimitiveData> = b_sample(f, q, opts.samples / 4 + 1, &mut r)
            .iter()
            .filter_map(|b| PrimitiveData::new(f, q, &a, b).ok())
            .filter(|p| primitivity_criterion(f, q, &a, &p.det_b()).unwrap_or(false))
            .take(12)
            .collect();
        for i in 0..prim.len() {
            for j in i..prim.len() {
                let (x, y) = (&prim[i], &prim[j]);
                let crit = primitive_conjugate(f, q, &a, &x.b_coeffs, &y.b_coeffs)?.conjugate();
                let found = conjugator_search(&x.group()?, &y.group()?)?;
                t.record(crit == Some(found.is_some()), || {
                    (
                        format!(
                            "alpha = {}, b1 = {}, b2 = {}: criterion {crit:?}, search {}",
                            f.format_elem(&a),
                            fmt_vec(f, &x.b_coeffs),
                            fmt_vec(f, &y.b_coeffs),
                            found.is_some()
                        ),
                        found.as_ref().map(|m| Witness::conjugator(f, m)),
                    )
                });
            }
        }
    }
    Ok(t)
}

/// Agreement of every conjugacy and primitivity criterion with brute force over a finite field.
pub fn criteria_checks(q: usize, f: &Field, opts: &AuditOptions) -> Result<Vec<Check>> {
    let mut checks = vec![
        ia_tally(f, q, opts)?.check(),
        monomial_tally(f, q)?.check(),
        primitivity_tally(f, q, opts)?.check(),
        db_tally(f, q, opts)?.check(),
        primitive_pairs_tally(f, q, opts)?.check(),
    ];
    if epsilon_missing(f, q) {
        // α ∉ -F^2 with X^2 - α irreducible needs a nonsquare α, but every
        // nonsquare lies in -F^2 when sqrt(-1) is missing
        let n = alphas_with_delta_field(f, q)?
            .iter()
            .filter(|a| !is_case_star(f, q, a))
            .count();
        checks.push(
            Check::from_bool(
                "exception_ii_instances",
                n == 0,
                format!("{n} parameters alpha outside -F^2 define a field Delta_alpha"),
            )
            .expect(Verdict::Pass),
        );
    }
    Ok(checks)
}

/// Rationals, `q = 2`: determinant criteria against conjugator search, the
/// `-1`-absorption of exception parameters, and `H_α ~ H_{αt²}`.
pub fn rational_checks(limit: usize, opts: &AuditOptions) -> Result<Vec<Check>> {
    let f = Field::rationals();
    let mut checks = Vec::new();

    // monomial stream: distinct classes, and invariance under square twists
    let c = super::classify(
        2,
        &f,
        &super::ClassifyOptions {
            limit,
            verify: false,
            maximality: false,
            maximality_mode: None,
        },
    )?;
    let hs: Vec<&super::ClassRep> = c
        .classes
        .iter()
        .filter(|r| r.tag == Tag::MonomialH)
        .collect();
    let mut t = Tally::new("monomial_stream_distinct");
    for i in 0..hs.len() {
        for j in i + 1..hs.len() {
            let (g, h) = (hs[i].group.as_ref().unwrap(), hs[j].group.as_ref().unwrap());
            let found = conjugator_search(g, h)?;
            t.record(found.is_none(), || {
                (
                    format!("{} and {} are conjugate", hs[i].name(), hs[j].name()),
                    found.as_ref().map(|m| Witness::conjugator(&f, m)),
                )
            });
        }
    }
    checks.push(t.check());

    let mut r = rng(opts.seed, 7);
    let mut t = Tally::new("monomial_square_twist");
    for _ in 0..100 {
        let k = r.gen_range(0..hs.len());
        let alpha_txt = hs[k].parameters.alpha.clone().unwrap();
        let alpha = f.parse_elem(&alpha_txt)?;
        let (n, d) = (r.gen_range(1..=40i64), r.gen_range(1..=40i64));
        let t2 = f.from_rational(n * n, d * d)?;
        let beta = f.mul(&alpha, &t2);
        let crit = monomial_conjugate(&f, 2, &alpha, &beta)?;
        let found = conjugator_search(hs[k].group.as_ref().unwrap(), &make_h_alpha(&f, 2, &beta)?)?;
        t.record(crit && found.is_some(), || {
            (
                format!(
                    "alpha = {alpha_txt}, t = {n}/{d}: criterion {crit}, search {}",
                    found.is_some()
                ),
                None,
            )
        });
    }
    checks.push(t.check());

    // primitive groups outside case (*): same alpha by the determinant
    // conditions, any alpha by Ddet
    let mut prim: Vec<(i64, i64, i64, MatGroup)> = Vec::new();
    'outer: for alpha in [2i64, -2, 3, -3, 5, 6, -6, 7] {
        for b0 in 0..=5i64 {
            for b1 in 1..=4i64 {
                let norm = b0 * b0 - alpha * b1 * b1;
                let s = squarefree_part(norm);
                if [1, -alpha, -1, alpha]
                    .iter()
                    .any(|&x| squarefree_part(x) == s)
                {
                    continue;
                }
                let g = PrimitiveData::new(
                    &f,
                    2,
                    &f.from_i64(alpha),
                    &[f.from_i64(b0), f.from_i64(b1)],
                )?
                .group()?;
                prim.push((alpha, b0, b1, g));
                if prim.len() >= opts.samples.clamp(8, 48) {
                    break 'outer;
                }
            }
        }
    }
    let mut same = Tally::new("primitive_conjugacy_rational");
    let mut cross = Tally::new("primitive_ddet_conjugacy_rational");
    for i in 0..prim.len() {
        for j in i + 1..prim.len() {
            let (a1, x0, x1, g1) = &prim[i];
            let (a2, y0, y1, g2) = &prim[j];
            let found = conjugator_search(g1, g2)?;
            let brute = found.is_some();
            let describe = || {
                (
                    format!("G({a1}, {x0}+{x1}I) vs G({a2}, {y0}+{y1}I): search {brute}"),
                    found.as_ref().map(|m| Witness::conjugator(&f, m)),
                )
            };
            if a1 == a2 {
                let crit = determinant_conditions(
                    &f,
                    2,
                    &f.from_i64(*a1),
                    &[f.from_i64(*x0), f.from_i64(*x1)],
                    &[f.from_i64(*y0), f.from_i64(*y1)],
                )?;
                same.record(crit == brute, describe);
            } else {
                let n1 = x0 * x0 - a1 * x1 * x1;
                let n2 = y0 * y0 - a2 * y1 * y1;
                let crit = v_triple(*a1, n1) == v_triple(*a2, n2);
                cross.record(crit == brute, describe);
            }
        }
    }
    checks.push(same.check());
    checks.push(cross.check());

    // case (*) over Q: no criterion, the decider must say so
    let undecided = primitive_conjugate(
        &f,
        2,
        &f.from_i64(-1),
        &[f.one()],
        &[f.from_i64(2), f.one()],
    )?;
    checks.push(
        Check::from_bool(
            "case_star_undecided_rational",
            matches!(undecided, Decision::Undecided { .. }),
            format!("{undecided:?}"),
        )
        .expect(Verdict::Pass),
    );

    // exception (ii): G(α, b) with sqf(det b) ∈ {-1, α} embeds properly in
    // G(-1, c) with det(c) = c0^2 + c1^2 = α
    let mut t = Tally::new("exception_ii_embedding");
    for alpha in [2i64, 5, 10, 13, 17] {
        let (c0, c1) = (0..=alpha)
            .flat_map(|x| (0..=x).map(move |y| (x, y)))
            .find(|(x, y)| x * x + y * y == alpha)
            .expect("alpha is a sum of two squares");
        let big = PrimitiveData::new(&f, 2, &f.from_i64(-1), &[f.from_i64(c0), f.from_i64(c1)])?
            .group()?;
        for target in [-1, alpha] {
            let Some((b0, b1)) = (0..=12i64)
                .flat_map(|x| (1..=12i64).map(move |y| (x, y)))
                .find(|(x, y)| squarefree_part(x * x - alpha * y * y) == target)
            else {
                continue;
            };
            let g =
                PrimitiveData::new(&f, 2, &f.from_i64(alpha), &[f.from_i64(b0), f.from_i64(b1)])?
                    .group()?;
            let found = embedding_search(&g, &big)?;
            let proper = g.projective_order()? < big.projective_order()?;
            t.record(found.is_some() && proper, || {
                (
                    format!(
                        "G({alpha}, {b0}+{b1}I) into G(-1, {c0}+{c1}I): found {}, proper {proper}",
                        found.is_some()
                    ),
                    None,
                )
            });
        }
    }
    checks.push(t.check());
    Ok(checks)
}

/// Brute-force audit of a classification: maximality of each representative,
/// non-maximality of each suppressed candidate, pairwise non-conjugacy, the
/// full lattice where it is small, and the criterion checks.
pub fn audit(c: &Classification, f: &Field, opts: &AuditOptions) -> Result<OracleReport> {
    let q = c.q;
    let mut report = OracleReport::new(format!("classification for q = {q}"), ambient_name(f, q));
    let finite = f.is_finite();
    let mode = opts.maximality_mode.unwrap_or_else(|| auto_mode(f, q));

    if finite {
        let checks: Vec<Check> = c
            .classes
            .par_iter()
            .map(|rep| -> Result<Check> {
                let g = rep.group.as_ref().unwrap();
                let v = maximality_check(g, mode)?;
                let w = v.witness.as_ref().map(|w| Witness::overgroup(f, w));
                Ok(Check::from_bool(
                    format!("maximal {}", rep.name()),
                    v.maximal,
                    format!(
                        "{} coset representatives adjoined ({mode:?})",
                        v.adjunctions
                    ),
                )
                .expect(Verdict::Pass)
                .with_witness(w))
            })
            .collect::<Result<_>>()?;
        report.checks.extend(checks);
        for s in &c.suppressed {
            let g = s.group.as_ref().unwrap();
            let v = maximality_check(g, mode)?;
            report.checks.push(
                Check::from_bool(
                    format!("not maximal {}", s.candidate),
                    !v.maximal,
                    s.rule.clone(),
                )
                .expect(Verdict::Pass)
                .with_witness(v.witness.as_ref().map(|w| Witness::overgroup(f, w))),
            );
        }
    }
    for s in &c.suppressed {
        let (Some(name), Some(big)) = (&s.absorbed_by, &s.absorber) else {
            continue;
        };
        let g = s.group.as_ref().unwrap();
        let found = embedding_search(g, big)?;
        report.checks.push(
            Check::from_bool(
                format!("{} embeds in {name}", s.candidate),
                found.is_some(),
                "conjugator search".to_string(),
            )
            .expect(Verdict::Pass)
            .with_witness(found.as_ref().map(|m| Witness::conjugator(f, m))),
        );
    }

    // pairwise non-conjugacy within a family (groups with finite projective image)
    let with_finite_image: Vec<&super::ClassRep> = c
        .classes
        .iter()
        .filter(|r| finite || r.tag != Tag::AbelianSinger)
        .collect();
    let mut pairs = Tally::new("pairwise_non_conjugate");
    for i in 0..with_finite_image.len() {
        for j in i + 1..with_finite_image.len() {
            let (a, b) = (with_finite_image[i], with_finite_image[j]);
            if a.tag != b.tag {
                continue;
            }
            let found = conjugator_search(a.group.as_ref().unwrap(), b.group.as_ref().unwrap())?;
            pairs.record(found.is_none(), || {
                (
                    format!("{} and {} are conjugate", a.name(), b.name()),
                    found.as_ref().map(|m| Witness::conjugator(f, m)),
                )
            });
        }
    }
    report.checks.push(pairs.check());

    if opts.lattice && finite && gl_order(f, q).is_some_and(|n| n <= LATTICE_LIMIT) {
        let lat = exhaustive_classification(f, q)?;
        report.checks.push(
            Check::from_bool(
                "lattice class count",
                lat.classes.len() == c.classes.len(),
                format!(
                    "{} subgroups, {} nilpotent, {} maximal nilpotent, {} irreducible classes; classification lists {}",
                    lat.summary.subgroups,
                    lat.summary.nilpotent,
                    lat.summary.maximal_nilpotent,
                    lat.classes.len(),
                    c.classes.len()
                ),
            )
            .expect(Verdict::Pass),
        );
        for lc in &lat.classes {
            let lg = MatGroup::new(f, q, lc.representative.gens().to_vec(), true)?;
            let mut hit = None;
            for rep in &c.classes {
                if let Some(t) = conjugator_search(&lg, rep.group.as_ref().unwrap())? {
                    hit = Some((rep.name(), t));
                    break;
                }
            }
            let name = format!("lattice class of order {} listed", lc.order);
            report.checks.push(
                match hit {
                    Some((n, t)) => Check::new(name, Verdict::Pass, format!("conjugate to {n}"))
                        .with_witness(Some(Witness::conjugator(f, &t))),
                    None => {
                        Check::new(name, Verdict::Fail, "no listed representative is conjugate")
                            .with_witness(Some(Witness::MissedClass {
                                generators: lc
                                    .representative
                                    .gens()
                                    .iter()
                                    .map(|g| g.to_strings(f))
                                    .collect(),
                                order: lc.order,
                            }))
                    }
                }
                .expect(Verdict::Pass),
            );
        }
    }

    if finite {
        report.checks.extend(criteria_checks(q, f, opts)?);
    } else if q == 2 {
        let limit = c
            .classes
            .iter()
            .filter(|r| r.tag == Tag::MonomialH)
            .count()
            .max(1);
        report.checks.extend(rational_checks(limit, opts)?);
    }
    Ok(report)
}
