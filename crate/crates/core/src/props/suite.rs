//! Seeded invariant suite over a fixed fleet of nilpotent test groups.

use std::collections::{BTreeSet, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::construct::{make_a_alpha, make_d_group, make_g_alpha_b, make_h_alpha, make_singer};
use crate::error::Result;
use crate::field::{ClassMode, Elem, Field};
use crate::group::{element_order, is_unipotent, jordan_decompose, splittable_check, MatGroup};
use crate::matrix::Mat;
use crate::oracle::{Check, OracleReport, Verdict};

use super::{
    is_absolutely_irreducible, is_irreducible, is_primitive, konyukh_check, normal_abelian_check,
    syl2_quotient_structure, sylq_quotient_generator,
};

#[derive(Clone, Copy, Debug)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Random pairs per field for the arithmetic identities.
    pub samples: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: 0,
            samples: 1000,
        }
    }
}

fn gf(p: u64, k: u32) -> Field {
    Field::finite(p, k).expect("small test field")
}

fn all_matrices(f: &Field, n: usize) -> Vec<Mat> {
    let elems = f.elements();
    let total = elems.len().pow((n * n) as u32);
    (0..total)
        .map(|mut t| {
            let e = (0..n * n)
                .map(|_| {
                    let x = elems[t % elems.len()].clone();
                    t /= elems.len();
                    x
                })
                .collect();
            Mat::from_entries(n, e)
        })
        .filter(|m| !f.is_zero(&m.det(f)))
        .collect()
}

/// Named finite nilpotent groups used by the structural properties, plus
/// `GL(2, 3)` itself as a non-nilpotent control.
pub fn test_fleet() -> Result<Vec<(String, MatGroup)>> {
    let f3 = gf(3, 1);
    let f5 = gf(5, 1);
    let f7 = gf(7, 1);
    let f9 = gf(3, 2);
    let e = |f: &Field, v: i64| f.from_i64(v);
    let unitri = Mat::from_rows(vec![vec![e(&f3, 1), e(&f3, 1)], vec![e(&f3, 0), e(&f3, 1)]]);
    let mut fleet = vec![
        (
            "unitriangular GF(3)".to_string(),
            MatGroup::new(&f3, 2, vec![unitri.clone()], false)?,
        ),
        (
            "unitriangular x <2> GF(3)".to_string(),
            MatGroup::new(&f3, 2, vec![unitri, Mat::scalar(&f3, 2, &e(&f3, 2))], false)?,
        ),
        ("D GF(3)".into(), make_d_group(&f3, 2)?),
        ("H_1 GF(3)".into(), make_h_alpha(&f3, 2, &f3.one())?),
        ("A_-1 GF(3)".into(), make_a_alpha(&f3, 2, &e(&f3, -1))?),
        (
            "G(-1, 1) GF(3)".into(),
            make_g_alpha_b(&f3, 2, &e(&f3, -1), &[f3.one()])?,
        ),
        ("Singer GF(3)".into(), make_singer(&f3, 2)?.1),
        ("H_1 GF(5)".into(), make_h_alpha(&f5, 2, &f5.one())?),
        ("H_2 GF(5)".into(), make_h_alpha(&f5, 2, &e(&f5, 2))?),
        ("Singer GF(5)".into(), make_singer(&f5, 2)?.1),
        ("H_1 GF(7)".into(), make_h_alpha(&f7, 2, &f7.one())?),
        (
            "G(-1, 1) GF(7)".into(),
            make_g_alpha_b(&f7, 2, &e(&f7, -1), &[f7.one()])?,
        ),
        ("H_1 GF(9)".into(), make_h_alpha(&f9, 2, &f9.one())?),
        (
            "H_1 GF(7) degree 3".into(),
            make_h_alpha(&f7, 3, &f7.one())?,
        ),
    ];
    let gl23 = all_matrices(&f3, 2);
    fleet.push(("GL(2, 3)".into(), MatGroup::new(&f3, 2, gl23, false)?));
    Ok(fleet)
}

/// Class by the upper central series on the full element set, independent of
/// the lower-central-series code in `group`.
pub fn upper_central_class(g: &MatGroup) -> Result<Option<usize>> {
    let f = g.field();
    let elems = g.elements_full()?;
    let gens = g.gens();
    let one = Mat::identity(f, g.degree());
    let mut z: HashSet<Mat> = HashSet::from([one]);
    let mut steps = 0;
    while z.len() < elems.len() {
        let mut next = HashSet::new();
        for x in &elems {
            let mut central = true;
            for s in gens {
                if !z.contains(&Mat::commutator(f, x, s)?) {
                    central = false;
                    break;
                }
            }
            if central {
                next.insert(x.clone());
            }
        }
        if next.len() == z.len() {
            return Ok(None);
        }
        z = next;
        steps += 1;
    }
    Ok(Some(steps))
}

fn random_elem(f: &Field, r: &mut ChaCha8Rng) -> Elem {
    match f.order() {
        Some(_) => {
            let k = f.degree().unwrap_or(1) as usize;
            let p = f.characteristic();
            let c: Vec<u64> = (0..k).map(|_| r.gen_range(0..p)).collect();
            f.from_coefficients(&c)
        }
        None => f
            .from_rational(r.gen_range(-30..=30), r.gen_range(1..=12))
            .expect("nonzero denominator"),
    }
}

fn random_unit(f: &Field, r: &mut ChaCha8Rng) -> Elem {
    loop {
        let x = random_elem(f, r);
        if !f.is_zero(&x) {
            return x;
        }
    }
}

fn random_invertible(f: &Field, n: usize, r: &mut ChaCha8Rng) -> Mat {
    loop {
        let m = Mat::from_entries(n, (0..n * n).map(|_| random_elem(f, r)).collect());
        if !f.is_zero(&m.det(f)) {
            return m;
        }
    }
}

fn counted(name: &str, failures: usize, total: usize, first: Option<String>) -> Check {
    let detail = match first {
        None => format!("{total} instances"),
        Some(s) => format!("{failures} of {total} instances fail; first: {s}"),
    };
    Check::from_bool(name.to_string(), failures == 0, detail).expect(Verdict::Pass)
}

struct Count {
    failures: usize,
    total: usize,
    first: Option<String>,
}

impl Count {
    fn new() -> Count {
        Count {
            failures: 0,
            total: 0,
            first: None,
        }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.total += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(what());
            }
        }
    }

    fn check(self, name: &str) -> Check {
        counted(name, self.failures, self.total, self.first)
    }
}

fn arithmetic_checks(opts: &SuiteOptions, out: &mut Vec<Check>) -> Result<()> {
    let fields = [
        gf(3, 1),
        gf(7, 1),
        gf(13, 1),
        gf(3, 2),
        gf(2, 3),
        Field::rationals(),
    ];
    let mut r = ChaCha8Rng::seed_from_u64(opts.seed);
    let (mut det, mut cp, mut ch, mut cls, mut twist) = (
        Count::new(),
        Count::new(),
        Count::new(),
        Count::new(),
        Count::new(),
    );
    for f in &fields {
        let n = if f.is_finite() { 3 } else { 2 };
        for _ in 0..opts.samples {
            let a = random_invertible(f, n, &mut r);
            let b = random_invertible(f, n, &mut r);
            let ab = a.mul(f, &b);
            det.record(ab.det(f) == f.mul(&a.det(f), &b.det(f)), || {
                format!("{f}: {}", a.format(f))
            });
        }
        for _ in 0..opts.samples / 2 {
            let m = random_invertible(f, n, &mut r);
            let t = random_invertible(f, n, &mut r);
            let c = Mat::conjugate(f, &t, &m)?;
            cp.record(c.charpoly(f) == m.charpoly(f), || {
                format!("{f}: {}", m.format(f))
            });
            ch.record(m.eval_poly(f, &m.charpoly(f)) == Mat::zero(f, n), || {
                format!("{f}: {}", m.format(f))
            });
        }
        for q in [2u64, 3] {
            for _ in 0..opts.samples {
                let (x, y) = (random_unit(f, &mut r), random_unit(f, &mut r));
                let cx = f.power_class(&x, q, ClassMode::QthPowers)?;
                let cy = f.power_class(&y, q, ClassMode::QthPowers)?;
                let cxy = f.power_class(&f.mul(&x, &y), q, ClassMode::QthPowers)?;
                cls.record(cx.mul(&cy) == cxy, || {
                    format!(
                        "{f}, q = {q}: x = {}, y = {}",
                        f.format_elem(&x),
                        f.format_elem(&y)
                    )
                });
                if !f.is_finite() {
                    let t = random_unit(f, &mut r);
                    let xt = f.mul(&x, &f.pow(&t, q));
                    twist.record(f.power_class(&xt, q, ClassMode::QthPowers)? == cx, || {
                        format!(
                            "q = {q}: x = {}, t = {}",
                            f.format_elem(&x),
                            f.format_elem(&t)
                        )
                    });
                }
            }
        }
    }
    out.push(det.check("det_multiplicative"));
    out.push(cp.check("charpoly_conjugation_invariant"));
    out.push(ch.check("cayley_hamilton"));
    out.push(cls.check("power_class_homomorphism"));
    out.push(twist.check("rational_power_class_twist_invariant"));
    Ok(())
}

/// Every commuting factorization `g = d·u` with `u` unipotent and `d` of
/// order prime to 3 is the Jordan pair, for every `g` in `GL(2, 3)`.
pub fn jordan_uniqueness_gl23() -> Result<Check> {
    let f = gf(3, 1);
    let all = all_matrices(&f, 2);
    let unipotents: Vec<&Mat> = all.iter().filter(|u| is_unipotent(&f, u)).collect();
    let mut c = Count::new();
    for g in &all {
        let jp = jordan_decompose(&f, g)?;
        let mut found = 0;
        for u in &unipotents {
            let d = g.mul(&f, &u.inv(&f)?);
            if d.mul(&f, u) != u.mul(&f, &d) || element_order(&f, &d)? % 3 == 0 {
                continue;
            }
            found += 1;
            c.record(d == jp.g_d && **u == jp.g_u, || g.format(&f));
        }
        c.record(found == 1, || {
            format!("{}: {found} factorizations", g.format(&f))
        });
    }
    Ok(c.check("jordan_uniqueness_gl23"))
}

fn fleet_checks(opts: &SuiteOptions, out: &mut Vec<Check>) -> Result<()> {
    let mut r = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x5eed);
    let fleet = test_fleet()?;
    let (mut split, mut ucs, mut shuffle, mut burnside, mut dichotomy) = (
        Count::new(),
        Count::new(),
        Count::new(),
        Count::new(),
        Count::new(),
    );
    for (name, g) in &fleet {
        let f = g.field();
        let nilpotent = g.is_nilpotent()?;
        if nilpotent {
            let s = splittable_check(g)?;
            split.record(s.passed(), || format!("{name}: {s:?}"));
        }
        if matches!(g.order()?, crate::field::Cardinal::Finite(n) if n <= 1 << 12) {
            let measured = g.nilpotency_class()?.class();
            let upper = upper_central_class(g)?;
            ucs.record(measured == upper, || {
                format!("{name}: lower {measured:?}, upper {upper:?}")
            });
        }
        let base: BTreeSet<Mat> = g.closure()?.elements().iter().cloned().collect();
        for _ in 0..5 {
            let mut gens = g.gens().to_vec();
            gens.shuffle(&mut r);
            let h = MatGroup::new(f, g.degree(), gens, g.scalars_adjoined())?;
            let set: BTreeSet<Mat> = h.closure()?.elements().iter().cloned().collect();
            shuffle.record(set == base, || {
                format!("{name}: generator order changed the closure")
            });
        }
        if base.len() <= 400 {
            let again = MatGroup::new(
                f,
                g.degree(),
                base.iter().cloned().collect(),
                g.scalars_adjoined(),
            )?;
            shuffle.record(again.closure()?.len() == base.len(), || {
                format!("{name}: closure not idempotent")
            });
        }
        let irr = is_irreducible(g)?.irreducible;
        burnside.record(!is_absolutely_irreducible(g) || irr, || name.clone());
        if irr && !g.is_abelian() {
            let p = is_primitive(g)?;
            dichotomy.record(p.primitive != p.system.is_some(), || {
                format!("{name}: {p:?}")
            });
        }
    }
    out.push(split.check("splitting_direct_product"));
    out.push(ucs.check("lower_upper_central_class_agree"));
    out.push(shuffle.check("closure_generator_order_and_idempotence"));
    out.push(burnside.check("absolutely_irreducible_implies_irreducible"));
    out.push(dichotomy.check("primitive_or_monomial"));
    Ok(())
}

fn structure_checks(out: &mut Vec<Check>) -> Result<()> {
    let mut k = Count::new();
    for p in [3u64, 7] {
        let f = gf(p, 1);
        let g = make_g_alpha_b(&f, 2, &f.from_i64(-1), &[f.one()])?;
        let s = konyukh_check(&g)?;
        k.record(s.applicable && s.passed(), || format!("GF({p}): {s:?}"));
    }
    let f3 = gf(3, 1);
    let h1 = konyukh_check(&make_h_alpha(&f3, 2, &f3.one())?)?;
    k.record(!h1.applicable, || {
        "H_1 over GF(3) was not filtered as imprimitive".into()
    });
    out.push(k.check("derived_series_field_clauses"));

    let mut na = Count::new();
    for (p, expect) in [(3u64, 8u128), (7, 48)] {
        let f = gf(p, 1);
        let g = make_g_alpha_b(&f, 2, &f.from_i64(-1), &[f.one()])?;
        let w = normal_abelian_check(&g)?;
        na.record(
            w.as_ref()
                .is_some_and(|w| w.order == crate::field::Cardinal::Finite(expect)),
            || format!("GF({p}): {w:?}"),
        );
    }
    out.push(na.check("irreducible_abelian_normal_subgroup"));

    let mut s2 = Count::new();
    for p in [3u64, 7, 11, 19, 23] {
        let s = syl2_quotient_structure(&gf(p, 1))?;
        s2.record(
            s.consistent && s.brute_force_order == Some(s.predicted_order),
            || format!("GF({p}): {s:?}"),
        );
    }
    let sq = syl2_quotient_structure(&Field::rationals())?;
    s2.record(sq.consistent && sq.predicted_order == 4, || {
        format!("Q: {sq:?}")
    });
    out.push(s2.check("syl2_quotient_order"));

    let mut sq = Count::new();
    for (p, q, a) in [(5u64, 2usize, 2i64), (7, 3, 2), (13, 3, 2), (13, 2, 2)] {
        let f = gf(p, 1);
        let s = sylq_quotient_generator(&f, q, &f.from_i64(a))?;
        sq.record(s.consistent, || format!("GF({p}), q = {q}: {s:?}"));
    }
    out.push(sq.check("sylq_quotient_generator"));
    Ok(())
}

/// Runs every invariant of the suite. Deterministic for a fixed seed.
pub fn property_suite(opts: &SuiteOptions) -> Result<OracleReport> {
    let mut report = OracleReport::new("property suite", "test fleet");
    arithmetic_checks(opts, &mut report.checks)?;
    report.checks.push(jordan_uniqueness_gl23()?);
    fleet_checks(opts, &mut report.checks)?;
    structure_checks(&mut report.checks)?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn upper_class_examples() {
        let fleet = test_fleet().unwrap();
        let get = |n: &str| &fleet.iter().find(|(m, _)| m == n).unwrap().1;
        assert_eq!(upper_central_class(get("H_1 GF(3)")).unwrap(), Some(2));
        assert_eq!(upper_central_class(get("H_1 GF(5)")).unwrap(), Some(3));
        assert_eq!(upper_central_class(get("GL(2, 3)")).unwrap(), None);
    }

    #[test]
    fn jordan_gl23() {
        let c = jordan_uniqueness_gl23().unwrap();
        assert_eq!(c.verdict, Verdict::Pass, "{}", c.detail);
    }
}
