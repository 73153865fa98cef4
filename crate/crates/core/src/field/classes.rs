//! Power classes `F^x/(F^x)^q`, `F^x/S`, and subgroups of `F^x` that are
//! tracked through determinants.

use std::collections::BTreeMap;

use num_bigint::{BigUint, Sign};
use num_integer::gcd;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{Elem, Field};
use crate::arith::{factor_big, q_part};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassMode {
    /// Modulo `(F^x)^q`.
    QthPowers,
    /// Modulo `S = Syl_q(F^x)(F^x)^q`.
    ModS,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ClassRepr {
    /// Discrete log of a representative, reduced modulo the subgroup index.
    Finite { residue: u64, modulus: u64 },
    /// Sign bit plus the exponents (mod q) of the q-th-power-free part.
    Rational {
        negative: bool,
        exponents: BTreeMap<BigUint, u32>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PowerClass {
    pub q: u64,
    pub mode: ClassMode,
    pub repr: ClassRepr,
}

/// Index of `S` in a cyclic group of order `n`.
pub(super) fn s_index(n: u64, q: u64) -> u64 {
    let (_, qa) = q_part(n, q);
    gcd(gcd(q, n), n / qa)
}

impl PowerClass {
    pub fn of(field: &Field, x: &Elem, q: u64, mode: ClassMode) -> Result<PowerClass> {
        if field.is_zero(x) {
            return Err(Error::ZeroElement);
        }
        let repr = match field.unit_order() {
            Some(n) => {
                let modulus = match mode {
                    ClassMode::QthPowers => gcd(q, n),
                    ClassMode::ModS => s_index(n, q),
                };
                ClassRepr::Finite {
                    residue: field.dlog(x)? % modulus,
                    modulus,
                }
            }
            None => {
                let r = field.as_rational(x).expect("rational element");
                let negative =
                    r.numer().sign() == Sign::Minus && q == 2 && mode == ClassMode::QthPowers;
                let mut exponents = BTreeMap::new();
                let num = r.numer().magnitude().clone();
                let den = r.denom().magnitude().clone();
                for (p, e) in factor_big(&num)? {
                    let e = (e as u64 % q) as u32;
                    if e != 0 {
                        exponents.insert(p, e);
                    }
                }
                for (p, e) in factor_big(&den)? {
                    // 1/p^e ≡ p^{-e}
                    let e = ((q - e as u64 % q) % q) as u32;
                    if e != 0 {
                        let slot = exponents.entry(p).or_insert(0);
                        *slot = ((*slot as u64 + e as u64) % q) as u32;
                    }
                }
                exponents.retain(|_, e| *e != 0);
                ClassRepr::Rational {
                    negative,
                    exponents,
                }
            }
        };
        Ok(PowerClass { q, mode, repr })
    }

    pub fn is_trivial(&self) -> bool {
        match &self.repr {
            ClassRepr::Finite { residue, .. } => *residue == 0,
            ClassRepr::Rational {
                negative,
                exponents,
            } => !negative && exponents.is_empty(),
        }
    }

    pub fn mul(&self, other: &PowerClass) -> PowerClass {
        assert_eq!((self.q, self.mode), (other.q, other.mode));
        let repr = match (&self.repr, &other.repr) {
            (
                ClassRepr::Finite {
                    residue: a,
                    modulus,
                },
                ClassRepr::Finite { residue: b, .. },
            ) => ClassRepr::Finite {
                residue: (a + b) % modulus,
                modulus: *modulus,
            },
            (
                ClassRepr::Rational {
                    negative: s1,
                    exponents: e1,
                },
                ClassRepr::Rational {
                    negative: s2,
                    exponents: e2,
                },
            ) => {
                let mut exponents = e1.clone();
                for (p, e) in e2 {
                    let slot = exponents.entry(p.clone()).or_insert(0);
                    *slot = ((*slot as u64 + *e as u64) % self.q) as u32;
                }
                exponents.retain(|_, e| *e != 0);
                ClassRepr::Rational {
                    negative: s1 ^ s2,
                    exponents,
                }
            }
            _ => panic!("power classes from different fields"),
        };
        PowerClass { repr, ..*self }
    }

    pub fn pow(&self, r: u64) -> PowerClass {
        let mut acc = self.identity();
        for _ in 0..r % self.q {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn identity(&self) -> PowerClass {
        let repr = match &self.repr {
            ClassRepr::Finite { modulus, .. } => ClassRepr::Finite {
                residue: 0,
                modulus: *modulus,
            },
            ClassRepr::Rational { .. } => ClassRepr::Rational {
                negative: false,
                exponents: BTreeMap::new(),
            },
        };
        PowerClass { repr, ..*self }
    }

    /// Whether `self` lies in the cyclic subgroup generated by `other`.
    pub fn in_span_of(&self, other: &PowerClass) -> bool {
        (0..self.q).any(|r| other.pow(r) == *self)
    }

    /// Whether `⟨self⟩ = ⟨other⟩`.
    pub fn same_cyclic_subgroup(&self, other: &PowerClass) -> bool {
        self.in_span_of(other) && other.in_span_of(self)
    }

    /// Canonical representative element of the class.
    pub fn representative(&self, field: &Field) -> Elem {
        match &self.repr {
            ClassRepr::Finite { residue, .. } => {
                field.pow(&field.primitive_root().expect("finite field"), *residue)
            }
            ClassRepr::Rational {
                negative,
                exponents,
            } => {
                let mut n = BigUint::one();
                for (p, e) in exponents {
                    n *= num_traits::pow(p.clone(), *e as usize);
                }
                let v = num_bigint::BigInt::from(n);
                let v = if *negative { -v } else { v };
                Elem::Rat(num_rational::BigRational::from_integer(v))
            }
        }
    }

    /// Text form: `g^r mod m` (finite) or signed q-th-power-free integer.
    pub fn label(&self, field: &Field) -> String {
        field.format_elem(&self.representative(field))
    }

    /// Sparse coordinates over GF(q): key 0 is the sign, keys p > 0 are primes.
    fn coordinates(&self) -> Vec<(BigUint, u64)> {
        match &self.repr {
            ClassRepr::Finite { residue, .. } => vec![(BigUint::one(), *residue)],
            ClassRepr::Rational {
                negative,
                exponents,
            } => {
                let mut v: Vec<(BigUint, u64)> = Vec::new();
                if *negative {
                    v.push((BigUint::zero(), 1));
                }
                v.extend(exponents.iter().map(|(p, e)| (p.clone(), *e as u64)));
                v
            }
        }
    }
}

type Row = (BigUint, BTreeMap<BigUint, u64>);

/// A subgroup of F^x. Over finite fields it is stored exactly by its index in
/// the cyclic group F^x; over Q only subgroups containing `(Q^x)^q` are
/// representable, as a GF(q)-span of power classes.
#[derive(Clone, Debug)]
pub enum UnitSubgroup {
    Finite { unit_order: u64, index: u64 },
    ModQthPowers { q: u64, basis: Vec<Row> },
}

impl UnitSubgroup {
    /// Subgroup generated by `gens`, together with `(F^x)^q` when `with_qth_powers`.
    pub fn generated(
        field: &Field,
        q: u64,
        gens: &[Elem],
        with_qth_powers: bool,
    ) -> Result<UnitSubgroup> {
        match field.unit_order() {
            Some(n) => {
                let mut index = n;
                if with_qth_powers {
                    index = gcd(index, q);
                }
                for g in gens {
                    index = gcd(index, field.dlog(g)?);
                }
                // gcd(n, 0) = n keeps the trivial subgroup at index n
                Ok(UnitSubgroup::Finite {
                    unit_order: n,
                    index: if index == 0 { n } else { index },
                })
            }
            None => {
                if !with_qth_powers {
                    return Err(Error::Unsupported(
                        "subgroups of Q^x not containing the q-th powers".into(),
                    ));
                }
                let mut sub = UnitSubgroup::ModQthPowers {
                    q,
                    basis: Vec::new(),
                };
                for g in gens {
                    let c = PowerClass::of(field, g, q, ClassMode::QthPowers)?;
                    sub.insert(c.coordinates());
                }
                Ok(sub)
            }
        }
    }

    fn reduce(q: u64, basis: &[Row], v: &[(BigUint, u64)]) -> BTreeMap<BigUint, u64> {
        let mut v: BTreeMap<BigUint, u64> =
            v.iter().filter(|&(_, e)| e % q != 0).cloned().collect();
        for (pivot, row) in basis {
            if let Some(&c) = v.get(pivot) {
                for (k, e) in row {
                    let slot = v.entry(k.clone()).or_insert(0);
                    *slot = (*slot + q - (c * e) % q) % q;
                }
                v.retain(|_, e| *e != 0);
            }
        }
        v
    }

    fn insert(&mut self, v: Vec<(BigUint, u64)>) {
        let UnitSubgroup::ModQthPowers { q, basis } = self else {
            return;
        };
        let q = *q;
        let r = Self::reduce(q, basis, &v);
        let Some((pivot, &lead)) = r.iter().next() else {
            return;
        };
        let pivot = pivot.clone();
        let inv = crate::arith::pow_mod(lead, q - 2, q);
        let row: BTreeMap<BigUint, u64> = r.into_iter().map(|(k, e)| (k, e * inv % q)).collect();
        // reduced echelon form: the new pivot must vanish from the other rows
        for (_, other) in basis.iter_mut() {
            if let Some(&c) = other.get(&pivot) {
                for (k, e) in &row {
                    let slot = other.entry(k.clone()).or_insert(0);
                    *slot = (*slot + q - (c * e) % q) % q;
                }
                other.retain(|_, e| *e != 0);
            }
        }
        basis.push((pivot, row));
        basis.sort_by(|a, b| a.0.cmp(&b.0));
    }

    pub fn contains(&self, field: &Field, x: &Elem) -> Result<bool> {
        match self {
            UnitSubgroup::Finite { index, .. } => Ok(field.dlog(x)? % index == 0),
            UnitSubgroup::ModQthPowers { q, basis } => {
                let c = PowerClass::of(field, x, *q, ClassMode::QthPowers)?;
                Ok(Self::reduce(*q, basis, &c.coordinates()).is_empty())
            }
        }
    }

    /// Index in F^x, when finite.
    pub fn index(&self) -> Option<u64> {
        match self {
            UnitSubgroup::Finite { index, .. } => Some(*index),
            UnitSubgroup::ModQthPowers { .. } => None,
        }
    }

    /// Dimension of the image in `F^x/(F^x)^q` (rational case).
    pub fn rank(&self) -> Option<usize> {
        match self {
            UnitSubgroup::ModQthPowers { basis, .. } => Some(basis.len()),
            UnitSubgroup::Finite { .. } => None,
        }
    }

    pub fn same_as(&self, other: &UnitSubgroup) -> bool {
        match (self, other) {
            (UnitSubgroup::Finite { index: a, .. }, UnitSubgroup::Finite { index: b, .. }) => {
                a == b
            }
            (
                UnitSubgroup::ModQthPowers { q, basis: a },
                UnitSubgroup::ModQthPowers { basis: b, .. },
            ) => {
                a.len() == b.len()
                    && a.iter()
                        .all(|(_, v)| Self::reduce(*q, b, &flat(v)).is_empty())
                    && b.iter()
                        .all(|(_, v)| Self::reduce(*q, a, &flat(v)).is_empty())
            }
            _ => false,
        }
    }

    /// Human-readable description.
    pub fn describe(&self) -> String {
        match self {
            UnitSubgroup::Finite { unit_order, index } => {
                format!("index {index} in F^x (order {})", unit_order / index)
            }
            UnitSubgroup::ModQthPowers { q, basis } => {
                let gens: Vec<String> = basis
                    .iter()
                    .map(|(_, row)| {
                        row.iter()
                            .map(|(k, e)| {
                                let base = if k.is_zero() {
                                    "-1".to_string()
                                } else {
                                    k.to_string()
                                };
                                if *e == 1 {
                                    base
                                } else {
                                    format!("{base}^{e}")
                                }
                            })
                            .collect::<Vec<_>>()
                            .join("*")
                    })
                    .collect();
                format!("<{}>(Q^x)^{q}", gens.join(", "))
            }
        }
    }
}

fn flat(v: &BTreeMap<BigUint, u64>) -> Vec<(BigUint, u64)> {
    v.iter().map(|(k, e)| (k.clone(), *e)).collect()
}
