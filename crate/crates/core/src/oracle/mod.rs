//! Brute-force verification: adjunction maximality, conjugator search and
//! subgroup-lattice classification of tiny general linear groups.

mod lattice;
mod maximal;
mod search;

use serde::Serialize;

use crate::field::Field;
use crate::matrix::Mat;

pub use lattice::{
    exhaustive_classification, LatticeClass, LatticeReport, LatticeSummary, LATTICE_LIMIT,
};
pub use maximal::{
    auto_mode, gl_order, maximality_check, pgl_elements, AdjunctionWitness, MaximalityMode,
    MaximalityVerdict, EXHAUSTIVE_LIMIT,
};
pub use search::{conjugator_search, element_conjugator, embedding_search, normalizer_elements};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Partial,
}

/// Concrete evidence attached to a verdict.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    NilpotentOvergroup {
        adjoined: Vec<Vec<String>>,
        overgroup_order: String,
        nilpotency_class: usize,
    },
    Conjugator {
        matrix: Vec<Vec<String>>,
    },
    MissedClass {
        generators: Vec<Vec<Vec<String>>>,
        order: u64,
    },
    Text {
        detail: String,
    },
}

impl Witness {
    pub fn conjugator(f: &Field, t: &Mat) -> Witness {
        Witness::Conjugator {
            matrix: t.to_strings(f),
        }
    }

    pub fn overgroup(f: &Field, w: &AdjunctionWitness) -> Witness {
        Witness::NilpotentOvergroup {
            adjoined: w.element.to_strings(f),
            overgroup_order: w
                .overgroup
                .order()
                .map(|c| c.to_string())
                .unwrap_or_else(|e| e.to_string()),
            nilpotency_class: w.nilpotency_class,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    /// What the classification predicts for this check, when it predicts anything.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<Verdict>,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl Check {
    pub fn new(name: impl Into<String>, verdict: Verdict, detail: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            verdict,
            expected: None,
            detail: detail.into(),
            witness: None,
        }
    }

    pub fn expect(mut self, v: Verdict) -> Check {
        self.expected = Some(v);
        self
    }

    pub fn with_witness(mut self, w: Option<Witness>) -> Check {
        self.witness = w;
        self
    }

    pub fn from_bool(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Check {
        Check::new(name, if ok { Verdict::Pass } else { Verdict::Fail }, detail)
    }

    /// A prediction that the brute-force result contradicts.
    pub fn is_discrepancy(&self) -> bool {
        matches!(self.expected, Some(e) if e != self.verdict && self.verdict != Verdict::Partial)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub target: String,
    pub ambient: String,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl OracleReport {
    pub fn new(target: impl Into<String>, ambient: impl Into<String>) -> OracleReport {
        OracleReport {
            target: target.into(),
            ambient: ambient.into(),
            checks: Vec::new(),
            elapsed_ms: None,
        }
    }

    pub fn discrepancies(&self) -> usize {
        self.checks.iter().filter(|c| c.is_discrepancy()).count()
    }
}

/// `GL(n, F)` in text.
pub fn ambient_name(f: &Field, n: usize) -> String {
    match f.order() {
        Some(s) => format!("GL({n},{s})"),
        None => format!("GL({n},Q)"),
    }
}
