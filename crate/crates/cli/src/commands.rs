use locnilp::classify::audit::{audit, AuditOptions};
use locnilp::classify::{
    classify, db_conjugate, i_times, ia_conjugate, monomial_conjugate, primitive_conjugate,
    verify_rep, ClassRep, ClassifyOptions, Decision,
};
use locnilp::construct::{make_h_alpha, PrimitiveData};
use locnilp::oracle::{conjugator_search, element_conjugator, OracleReport, Verdict};
use locnilp::props::suite::{property_suite, SuiteOptions};
use locnilp::{Elem, Error, Field, Mat, Result};

use crate::output::Report;
use crate::{Command, Common, ConjKind, GroupKind, Outcome, Target};

fn field_of(t: &Target) -> Result<Field> {
    if t.q < 2 || !locnilp::arith::is_prime(t.q as u64) {
        return Err(Error::Precondition(format!(
            "--q must be prime, got {}",
            t.q
        )));
    }
    Field::parse(&t.field).map_err(|e| match e {
        Error::NotPrime(p) => Error::Precondition(format!(
            "field `{}`: {p} is not prime (prime powers are written gf:<p>^<k>)",
            t.field
        )),
        e => e,
    })
}

fn elems(f: &Field, s: &str) -> Result<Vec<Elem>> {
    s.split(',').map(|x| f.parse_elem(x)).collect()
}

fn elem(f: &Field, s: &str) -> Result<Elem> {
    f.parse_elem(s)
}

fn need<'a>(v: &'a Option<String>, flag: &str) -> Result<&'a str> {
    v.as_deref()
        .ok_or_else(|| Error::Precondition(format!("--{flag} is required for this kind")))
}

fn json(e: serde_json::Error) -> Error {
    Error::Precondition(format!("serialization failed: {e}"))
}

fn yes_no(b: bool) -> String {
    b.to_string()
}

pub fn dispatch(cmd: &Command, common: &Common) -> Result<Outcome> {
    match cmd {
        Command::Classify {
            target,
            limit,
            no_verify,
            no_maximality,
            maximality_mode,
        } => classify_cmd(
            target,
            &ClassifyOptions {
                limit: *limit,
                verify: !no_verify,
                maximality: !no_maximality,
                maximality_mode: maximality_mode.map(Into::into),
            },
        ),
        Command::Verify {
            target,
            kind,
            alpha,
            b,
            no_maximality,
            maximality_mode,
        } => {
            let f = field_of(target)?;
            let rep = match kind {
                GroupKind::H => {
                    ClassRep::monomial(&f, target.q, &elem(&f, need(alpha, "alpha")?)?)?
                }
                GroupKind::G => ClassRep::primitive(
                    &f,
                    target.q,
                    &elem(&f, need(alpha, "alpha")?)?,
                    &elems(&f, need(b, "b")?)?,
                )?,
                GroupKind::Abelian => {
                    let m = match alpha {
                        Some(s) => Some(
                            s.trim()
                                .parse::<i64>()
                                .map_err(|_| Error::BadElement(s.clone()))?,
                        ),
                        None => None,
                    };
                    ClassRep::abelian(&f, target.q, m)?
                }
            };
            verify_cmd(
                target,
                &f,
                rep,
                !no_maximality,
                maximality_mode.map(Into::into),
            )
        }
        Command::Conj {
            target,
            kind,
            a,
            b,
            alpha,
        } => conj_cmd(target, *kind, a, b, alpha),
        Command::Oracle {
            target,
            limit,
            samples,
            no_lattice,
            maximality_mode,
        } => {
            let f = field_of(target)?;
            let c = classify(
                target.q,
                &f,
                &ClassifyOptions {
                    limit: *limit,
                    verify: false,
                    maximality: false,
                    maximality_mode: None,
                },
            )?;
            let r = audit(
                &c,
                &f,
                &AuditOptions {
                    seed: common.seed,
                    samples: *samples,
                    lattice: !no_lattice,
                    maximality_mode: maximality_mode.map(Into::into),
                },
            )?;
            let mut rep = Report::new("oracle");
            rep.field("q", target.q as u64)
                .field("field", f.descriptor());
            rep.field("seed", common.seed);
            oracle_outcome(rep, &r)
        }
        Command::Props { samples } => {
            let r = property_suite(&SuiteOptions {
                seed: common.seed,
                samples: *samples,
            })?;
            let mut rep = Report::new("props");
            rep.field("seed", common.seed);
            oracle_outcome(rep, &r)
        }
    }
}

fn classify_cmd(t: &Target, opts: &ClassifyOptions) -> Result<Outcome> {
    let f = field_of(t)?;
    let c = classify(t.q, &f, opts)?;
    let mut r = Report::new("classify");
    r.field("q", t.q as u64).field("field", c.field.clone());
    if !f.is_finite() {
        r.field("limit", opts.limit as u64);
    }
    r.value("count", &c.count).map_err(json)?;
    r.value("classes", &c.classes).map_err(json)?;
    r.value("suppressed", &c.suppressed).map_err(json)?;
    r.value("notes", &c.notes).map_err(json)?;
    r.header(&[
        "tag",
        "name",
        "order",
        "projective_order",
        "nilpotency_class",
        "primitive",
        "maximal",
        "certificate",
    ]);
    r.line(format!(
        "GL({}, {}): class count {}",
        t.q, c.field, c.count.count
    ));
    let mut unsound = false;
    for rep in &c.classes {
        let v = rep.verified.as_ref();
        unsound |= v.is_some_and(|v| !v.sound());
        let opt = |s: Option<String>| s.unwrap_or_default();
        let cert = serde_json::to_string(&rep.certificate).map_err(json)?;
        r.row(vec![
            rep.tag.label().into(),
            rep.name(),
            opt(v.map(|v| v.order.clone())),
            opt(v.and_then(|v| v.projective_order).map(|x| x.to_string())),
            opt(v.and_then(|v| v.nilpotency_class).map(|x| x.to_string())),
            opt(v.and_then(|v| v.primitive).map(yes_no)),
            opt(v
                .and_then(|v| v.maximal.as_ref())
                .map(|m| yes_no(m.maximal))),
            cert,
        ]);
        let mut line = format!("{} [{}]", rep.name(), rep.tag.label());
        if let Some(v) = v {
            line += &format!(" order {}", v.order);
            if let Some(k) = v.nilpotency_class {
                line += &format!(", class {k}");
            }
            if let Some(m) = &v.maximal {
                line += &format!(", maximal {}", m.maximal);
            }
        }
        r.line(line);
    }
    for s in &c.suppressed {
        r.line(format!("suppressed {}: {}", s.candidate, s.rule));
    }
    Ok(Outcome {
        report: r,
        discrepancy: unsound,
    })
}

fn verify_cmd(
    t: &Target,
    f: &Field,
    mut rep: ClassRep,
    maximality: bool,
    mode: Option<locnilp::oracle::MaximalityMode>,
) -> Result<Outcome> {
    let v = verify_rep(&rep, maximality, mode)?;
    let mut r = Report::new("verify");
    r.field("q", t.q as u64).field("field", f.descriptor());
    r.field("sound", v.sound());
    r.header(&["property", "value"]);
    let mut kv = vec![
        ("name", rep.name()),
        ("order", v.order.clone()),
        ("irreducible", yes_no(v.irreducible)),
        ("absolutely_irreducible", yes_no(v.absolutely_irreducible)),
        ("nilpotent", yes_no(v.nilpotent)),
    ];
    if let Some(p) = v.projective_order {
        kv.push(("projective_order", p.to_string()));
    }
    if let Some(p) = v.primitive {
        kv.push(("primitive", yes_no(p)));
    }
    if let Some(k) = v.nilpotency_class {
        kv.push(("nilpotency_class", k.to_string()));
    }
    for rd in &v.class_formula.readings {
        let val = rd
            .value
            .map(|x| format!("{x:.4}"))
            .unwrap_or_else(|| "infinite".into());
        kv.push((
            "class_formula",
            format!("{} = {val} (matches: {})", rd.expression, rd.matches),
        ));
    }
    if let Some(m) = &v.maximal {
        kv.push(("maximal", yes_no(m.maximal)));
        kv.push(("ambient_order", m.ambient_order.clone()));
    }
    if let Some(a) = v.maximal_abelian {
        kv.push(("maximal_abelian", yes_no(a)));
    }
    kv.push(("sound", yes_no(v.sound())));
    for (k, val) in kv {
        r.line(format!("{k}: {val}"));
        r.row(vec![k.into(), val]);
    }
    rep.verified = Some(v);
    r.value("group", &rep).map_err(json)?;
    Ok(Outcome {
        report: r,
        discrepancy: false,
    })
}

/// Brute-force answer, or the reason it could not be computed.
fn brute(res: Result<Option<Mat>>) -> std::result::Result<Option<Mat>, String> {
    res.map_err(|e| e.to_string())
}

fn conj_cmd(
    t: &Target,
    kind: ConjKind,
    a: &str,
    b: &str,
    alpha: &Option<String>,
) -> Result<Outcome> {
    let f = field_of(t)?;
    let q = t.q;
    let mut r = Report::new("conj");
    r.field("q", q as u64).field("field", f.descriptor());
    let (criterion, explicit, search): (Option<bool>, Option<Mat>, _) = match kind {
        ConjKind::Ia => {
            let (x, y) = (elems(&f, a)?, elems(&f, b)?);
            for v in [&x, &y] {
                if v.len() != q {
                    return Err(Error::Dimension {
                        expected: q,
                        found: v.len(),
                    });
                }
            }
            let (ok, conj) = ia_conjugate(&f, &x, &y)?;
            let s = brute(element_conjugator(&f, &i_times(&f, &x)?, &i_times(&f, &y)?));
            (Some(ok), conj, s)
        }
        ConjKind::H => {
            let (x, y) = (elem(&f, a)?, elem(&f, b)?);
            let ok = monomial_conjugate(&f, q, &x, &y)?;
            let s = brute(conjugator_search(
                &make_h_alpha(&f, q, &x)?,
                &make_h_alpha(&f, q, &y)?,
            ));
            (Some(ok), None, s)
        }
        ConjKind::Db => {
            let al = elem(&f, need(alpha, "alpha")?)?;
            let (x, y) = (elems(&f, a)?, elems(&f, b)?);
            let ok = db_conjugate(&f, q, &al, &x, &y)?;
            let (px, py) = (
                PrimitiveData::new(&f, q, &al, &x)?,
                PrimitiveData::new(&f, q, &al, &y)?,
            );
            let s = brute(element_conjugator(&f, &px.db(), &py.db()));
            (Some(ok), None, s)
        }
        ConjKind::G => {
            let al = elem(&f, need(alpha, "alpha")?)?;
            let (x, y) = (elems(&f, a)?, elems(&f, b)?);
            let d = primitive_conjugate(&f, q, &al, &x, &y)?;
            r.value("decision", &d).map_err(json)?;
            if let Decision::Undecided { reason } = &d {
                r.line(format!("decision: {reason}"));
            }
            let s = brute(conjugator_search(
                &PrimitiveData::new(&f, q, &al, &x)?.group()?,
                &PrimitiveData::new(&f, q, &al, &y)?.group()?,
            ));
            (d.conjugate(), None, s)
        }
    };
    let mut lines = Vec::new();
    match criterion {
        Some(c) => {
            r.field("conjugate", c);
            lines.push(format!("conjugate: {c}"));
        }
        None => {
            r.field("conjugate", serde_json::Value::Null);
            lines.push("conjugate: undecided".into());
        }
    }
    if let Some(x) = &explicit {
        r.value("conjugator", &x.to_strings(&f)).map_err(json)?;
        lines.push(format!("conjugator: {}", x.format(&f)));
    }
    let mut discrepancy = false;
    match &search {
        Ok(found) => {
            let b = found.is_some();
            r.field("brute_force", b);
            lines.push(format!("brute_force: {b}"));
            if let Some(m) = found {
                r.value("search_conjugator", &m.to_strings(&f))
                    .map_err(json)?;
                lines.push(format!("search_conjugator: {}", m.format(&f)));
            }
            discrepancy = criterion.is_some_and(|c| c != b);
        }
        Err(why) => {
            r.field("brute_force", serde_json::Value::Null);
            r.field("brute_force_skipped", why.clone());
            lines.push(format!("brute_force: skipped ({why})"));
        }
    }
    r.field("agree", !discrepancy);
    r.header(&["key", "value"]);
    for l in lines {
        let (k, v) = l.split_once(": ").unwrap_or((&l, ""));
        r.row(vec![k.into(), v.into()]);
        r.line(l.clone());
    }
    Ok(Outcome {
        report: r,
        discrepancy,
    })
}

fn oracle_outcome(mut r: Report, o: &OracleReport) -> Result<Outcome> {
    let d = o.discrepancies();
    r.field("target", o.target.clone())
        .field("ambient", o.ambient.clone());
    r.field("discrepancies", d as u64);
    r.value("checks", &o.checks).map_err(json)?;
    r.header(&["name", "verdict", "expected", "detail"]);
    let label = |v: Verdict| match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
        Verdict::Partial => "partial",
    };
    for c in &o.checks {
        r.row(vec![
            c.name.clone(),
            label(c.verdict).into(),
            c.expected.map(label).unwrap_or("").into(),
            c.detail.clone(),
        ]);
        let mark = if c.is_discrepancy() {
            "DISCREPANCY"
        } else {
            label(c.verdict)
        };
        r.line(format!("{mark} {}: {}", c.name, c.detail));
    }
    r.line(format!("{} checks, {d} discrepancies", o.checks.len()));
    Ok(Outcome {
        report: r,
        discrepancy: d > 0,
    })
}
