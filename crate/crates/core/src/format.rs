//! JSON-facing forms of groups, matrices and vectors.
//!
//! Rationals are written as `"a/b"` strings and primes as integers. Matrices are lists of rows,
//! except bases in a local form, which are lists of columns. Parsing validates rationals and
//! primes during deserialization, so serde_json errors carry the line and column.

use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{input, Result};
use crate::exactlin::{fmt_rational, is_prime, parse_rational, Matrix, Rational, RationalVector};
use crate::groups::{GeneratorScheme, LocalData, LocalizedGroup};

/// A rational that (de)serializes as a string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Q(pub Rational);

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Q;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational as a string \"a/b\" or an integer")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Q, E> {
                parse_rational(v).map(Q).map_err(E::custom)
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Q, E> {
                Ok(Q(Rational::from_integer(v.into())))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Q, E> {
                Ok(Q(Rational::from_integer(v.into())))
            }
        }
        d.deserialize_any(V)
    }
}

/// A prime, checked on parse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Prime(pub u64);

impl<'de> Deserialize<'de> for Prime {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let p = u64::deserialize(d)?;
        if !is_prime(p) {
            return Err(de::Error::custom(format!("{p} is not a prime below 2^32")));
        }
        Ok(Prime(p))
    }
}

pub fn vector_form(v: &[Rational]) -> Vec<Q> {
    v.iter().cloned().map(Q).collect()
}

pub fn from_vector_form(v: &[Q]) -> RationalVector {
    v.iter().map(|x| x.0.clone()).collect()
}

pub fn matrix_form(m: &Matrix) -> Vec<Vec<Q>> {
    m.row_vectors().iter().map(|r| vector_form(r)).collect()
}

pub fn from_matrix_form(rows: &[Vec<Q>]) -> Result<Matrix> {
    Matrix::from_rows(&rows.iter().map(|r| from_vector_form(r)).collect::<Vec<_>>())
}

fn columns_form(m: &Matrix) -> Vec<Vec<Q>> {
    m.columns().iter().map(|c| vector_form(c)).collect()
}

pub(crate) fn ser_matrix<S: Serializer>(m: &Matrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    matrix_form(m).serialize(s)
}

pub(crate) fn ser_vector<S: Serializer>(v: &RationalVector, s: S) -> std::result::Result<S::Ok, S::Error> {
    vector_form(v).serialize(s)
}

pub(crate) fn ser_group<S: Serializer>(g: &LocalizedGroup, s: S) -> std::result::Result<S::Ok, S::Error> {
    LocalForm::from_group(g).serialize(s)
}

/// Serde helpers for an optional rational vector field.
pub mod opt_vector {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<RationalVector>, s: S) -> std::result::Result<S::Ok, S::Error> {
        v.as_ref().map(|v| vector_form(v)).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<RationalVector>, D::Error> {
        Ok(Option::<Vec<Q>>::deserialize(d)?.map(|v| from_vector_form(&v)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorForm {
    pub vector: Vec<Q>,
    #[serde(default)]
    pub inverted_primes: Vec<Prime>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalEntry {
    pub prime: Prime,
    pub divisible_basis: Vec<Vec<Q>>,
    pub lattice_basis: Vec<Vec<Q>>,
}

/// The stored fields of a [`LocalizedGroup`]; bases are lists of columns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalForm {
    pub ambient_rank: usize,
    pub span_basis: Vec<Vec<Q>>,
    pub base_lattice: Vec<Vec<Q>>,
    #[serde(default)]
    pub locals: Vec<LocalEntry>,
}

impl LocalForm {
    pub fn from_group(g: &LocalizedGroup) -> Self {
        Self {
            ambient_rank: g.ambient_rank(),
            span_basis: columns_form(g.span_basis()),
            base_lattice: columns_form(g.base_lattice()),
            locals: g
                .locals()
                .iter()
                .map(|m| LocalEntry {
                    prime: Prime(m.prime()),
                    divisible_basis: columns_form(m.divisible_basis()),
                    lattice_basis: columns_form(m.lattice_basis()),
                })
                .collect(),
        }
    }

    pub fn to_group(&self) -> Result<LocalizedGroup> {
        let n = self.ambient_rank;
        let cols = |c: &[Vec<Q>]| -> Result<Vec<RationalVector>> {
            c.iter()
                .map(|v| {
                    if v.len() != n {
                        return input(format!("basis vector of length {} in ambient rank {n}", v.len()));
                    }
                    Ok(from_vector_form(v))
                })
                .collect()
        };
        let mut locals = Vec::new();
        for e in &self.locals {
            locals.push(LocalData::from_gens(e.prime.0, n, &cols(&e.divisible_basis)?, &cols(&e.lattice_basis)?)?);
        }
        LocalizedGroup::from_local_form(n, &cols(&self.span_basis)?, &cols(&self.base_lattice)?, locals)
    }
}

/// A group file: either `ambient_rank` plus `generators`, or a `local_form`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient_rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<GeneratorForm>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub local_form: Option<LocalForm>,
}

impl GroupFile {
    pub fn from_scheme(s: &GeneratorScheme) -> Self {
        Self {
            ambient_rank: Some(s.ambient),
            generators: Some(
                s.generators
                    .iter()
                    .map(|g| GeneratorForm {
                        vector: vector_form(&g.vector),
                        inverted_primes: g.inverted_primes.iter().map(|&p| Prime(p)).collect(),
                    })
                    .collect(),
            ),
            local_form: None,
        }
    }

    pub fn from_group(g: &LocalizedGroup) -> Self {
        Self { local_form: Some(LocalForm::from_group(g)), ..Self::default() }
    }

    /// The generator scheme, if the file is in generator form.
    pub fn scheme(&self) -> Result<Option<GeneratorScheme>> {
        let Some(gens) = &self.generators else { return Ok(None) };
        let Some(n) = self.ambient_rank else {
            return input("generator form needs \"ambient_rank\"");
        };
        let mut s = GeneratorScheme::new(n);
        for g in gens {
            s.push(from_vector_form(&g.vector), g.inverted_primes.iter().map(|p| p.0));
        }
        s.validate()?;
        Ok(Some(s))
    }

    pub fn to_group(&self) -> Result<LocalizedGroup> {
        match (&self.generators, &self.local_form) {
            (Some(_), None) => LocalizedGroup::from_generators(&self.scheme()?.expect("generator form")),
            (None, Some(lf)) => {
                if self.ambient_rank.is_some_and(|n| n != lf.ambient_rank) {
                    return input("\"ambient_rank\" disagrees with the local form");
                }
                lf.to_group()
            }
            (Some(_), Some(_)) => input("give either \"generators\" or \"local_form\", not both"),
            (None, None) => input("group file needs \"generators\" or \"local_form\""),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::q;

    #[test]
    fn local_form_round_trip() {
        let g = LocalizedGroup::from_generators(
            &GeneratorScheme::new(2).with(vec![q(1), q(0)], [7]).with(vec![q(0), q(1)], [11]).with(vec![q(1), q(1)], [13]),
        )
        .unwrap();
        let file = GroupFile::from_group(&g);
        assert_eq!(file.to_group().unwrap(), g);
        let scheme_file = GroupFile::from_scheme(&g.generators().unwrap());
        assert_eq!(scheme_file.to_group().unwrap(), g);
    }

    #[test]
    fn empty_file_rejected() {
        assert!(GroupFile::default().to_group().is_err());
    }
}
