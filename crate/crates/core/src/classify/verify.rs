//! Independent checks run on each emitted representative.

use serde::Serialize;

use super::{ClassRep, Tag};
use crate::arith::q_part;
use crate::error::Result;
use crate::field::{Cardinal, Field};
use crate::group::MatGroup;
use crate::matrix::{nullspace, Mat};
use crate::oracle::{auto_mode, maximality_check, MaximalityMode};
use crate::props::{is_absolutely_irreducible, is_irreducible, is_primitive};

#[derive(Clone, Debug, Serialize)]
pub struct FormulaReading {
    pub expression: String,
    /// `None` when the quantity is infinite.
    pub value: Option<f64>,
    pub matches: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassFormula {
    pub measured: Option<usize>,
    pub readings: Vec<FormulaReading>,
}

impl ClassFormula {
    pub fn any_match(&self) -> bool {
        self.readings.iter().any(|r| r.matches)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MaximalSummary {
    pub maximal: bool,
    pub mode: MaximalityMode,
    pub ambient_order: String,
    pub covered: String,
    pub adjunctions: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verified {
    pub order: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub projective_order: Option<u64>,
    pub irreducible: bool,
    pub absolutely_irreducible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub primitive: Option<bool>,
    pub nilpotent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nilpotency_class: Option<usize>,
    pub class_formula: ClassFormula,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub maximal: Option<MaximalSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub maximal_abelian: Option<bool>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Verified {
    /// Irreducible, nilpotent and, where tested, maximal.
    pub fn sound(&self) -> bool {
        self.irreducible
            && self.nilpotent
            && self.maximal.as_ref().is_none_or(|m| m.maximal)
            && self.maximal_abelian != Some(false)
    }
}

/// Dimension of the algebra of matrices commuting with every generator.
pub fn commutant_dim(g: &MatGroup) -> usize {
    let f = g.field();
    let n = g.degree();
    let mut rows = Vec::new();
    for s in g.gens() {
        for i in 0..n {
            for j in 0..n {
                // (X s - s X)_{ij}
                let mut row = vec![f.zero(); n * n];
                for k in 0..n {
                    let a = i * n + k;
                    row[a] = f.add(&row[a], s.get(k, j));
                    let b = k * n + j;
                    row[b] = f.sub(&row[b], s.get(i, k));
                }
                rows.push(row);
            }
        }
    }
    nullspace(f, &rows, n * n).len()
}

fn reading(expression: String, value: Option<f64>, measured: Option<usize>) -> FormulaReading {
    let matches = matches!((value, measured), (Some(v), Some(m)) if (v - m as f64).abs() < 1e-9);
    FormulaReading {
        expression,
        value,
        matches,
    }
}

fn class_formula(rep: &ClassRep, f: &Field, q: usize, measured: Option<usize>) -> ClassFormula {
    let mut readings = Vec::new();
    let syl_q = match f.unit_order() {
        Some(u) => q_part(u, q as u64).1,
        None if q == 2 => 2,
        None => 1,
    };
    match rep.tag {
        Tag::MonomialH => {
            let e = (syl_q as f64).log(q as f64);
            readings.push(reading(
                format!(
                    "1 + (q - 1) log_{q} |Syl_{q}(F^x)| = 1 + {} log_{q} {syl_q}",
                    q - 1
                ),
                Some(1.0 + (q - 1) as f64 * e),
                measured,
            ));
        }
        Tag::PrimitiveG if matches!(rep.certificate, super::Certificate::CaseStar { .. }) => {
            // |Syl_2(Δ_{-1}^x)|: 2-part of |F|^2 - 1, or 4 over Q (±1, ±i)
            let syl_delta = match f.order() {
                Some(s) => q_part(s * s - 1, 2).1,
                None => 4,
            };
            let product = f.unit_order().map(|u| syl_delta * u / syl_q);
            readings.push(reading(
                match product {
                    Some(p) => format!("log_2 |Syl_2(Delta^x) F^x 1_2| = log_2 {p}"),
                    None => "log_2 |Syl_2(Delta^x) F^x 1_2| (infinite)".into(),
                },
                product.map(|p| (p as f64).log2()),
                measured,
            ));
            readings.push(reading(
                format!("log_2 |Syl_2(Delta^x)| = log_2 {syl_delta}"),
                Some((syl_delta as f64).log2()),
                measured,
            ));
        }
        Tag::PrimitiveG => readings.push(reading(
            "class 2 (|G/F^x 1_q| = q^2)".into(),
            Some(2.0),
            measured,
        )),
        Tag::AbelianSinger => readings.push(reading("abelian".into(), Some(1.0), measured)),
    }
    ClassFormula { measured, readings }
}

/// Runs the structural checks, and the adjunction maximality test when
/// requested over a finite field.
pub fn verify_rep(
    rep: &ClassRep,
    maximality: bool,
    mode: Option<MaximalityMode>,
) -> Result<Verified> {
    let g = rep
        .group
        .as_ref()
        .expect("representative carries its group");
    let f = g.field();
    let q = g.degree();
    let mut notes = Vec::new();
    let irreducible = is_irreducible(g)?.irreducible;
    let absolutely_irreducible = is_absolutely_irreducible(g);
    let rational_abelian = !f.is_finite() && rep.tag == Tag::AbelianSinger;
    let (order, projective_order, primitive, nilpotency_class) = if rational_abelian {
        // the full unit group of the extension; only its generators are listed
        let witness = Mat::scalar(f, q, &f.from_i64(2)).add(f, &g.gens()[0]);
        match crate::group::projective_order(f, &witness) {
            Err(crate::Error::InfiniteOrder) => notes.push(format!(
                "2 + X has infinite projective order, so the projective image is not a {q}-group"
            )),
            Ok(n) => notes.push(format!("2 + X has projective order {n}")),
            Err(e) => return Err(e),
        }
        (Cardinal::Infinite.to_string(), None, None, Some(1))
    } else {
        let order = g.order()?.to_string();
        let proj = g.projective_order()?;
        let primitive = is_primitive(g)?.primitive;
        (
            order,
            Some(proj),
            Some(primitive),
            g.nilpotency_class()?.class(),
        )
    };
    let maximal = if maximality && f.is_finite() {
        let mode = mode.unwrap_or_else(|| auto_mode(f, q));
        let v = maximality_check(g, mode)?;
        Some(MaximalSummary {
            maximal: v.maximal,
            mode: v.mode,
            ambient_order: v.ambient_order.to_string(),
            covered: v.covered.to_string(),
            adjunctions: v.adjunctions,
        })
    } else {
        None
    };
    let maximal_abelian = if rep.tag == Tag::AbelianSinger {
        let dim = commutant_dim(g);
        Some(match f.order() {
            Some(s) => dim == q && g.order()? == Cardinal::Finite((s as u128).pow(q as u32) - 1),
            None => dim == q,
        })
    } else {
        None
    };
    Ok(Verified {
        order,
        projective_order,
        irreducible,
        absolutely_irreducible,
        primitive,
        nilpotent: nilpotency_class.is_some(),
        nilpotency_class,
        class_formula: class_formula(rep, f, q, nilpotency_class),
        maximal,
        maximal_abelian,
        notes,
    })
}
