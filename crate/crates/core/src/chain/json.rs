//! JSON documents for chain complexes. Entries are ring-element strings;
//! field order and entry order are deterministic.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::matrix::{Coefficient, CoefficientSpec, Matrix};

use super::{ChainComplex, ChainError, ChainMap, GradedBasis, Label, MapRelation};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabelDoc {
    pub id: String,
    pub degree: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DifferentialDoc {
    pub degree: i32,
    /// `(row id, column id, entry)`.
    pub entries: Vec<(String, String, String)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexDoc {
    pub coefficients: CoefficientSpec,
    pub basis: Vec<LabelDoc>,
    pub differentials: Vec<DifferentialDoc>,
}

pub fn parse_rational(s: &str) -> Result<Rational64, ChainError> {
    let s = s.trim();
    let bad = || ChainError::Parse(format!("bad rational `{s}`"));
    match s.split_once('/') {
        Some((a, b)) => {
            let den: i64 = b.trim().parse().map_err(|_| bad())?;
            if den == 0 {
                return Err(bad());
            }
            Ok(Rational64::new(a.trim().parse().map_err(|_| bad())?, den))
        }
        None => Ok(Rational64::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn basis_to_doc(b: &GradedBasis) -> Vec<LabelDoc> {
    b.all_labels()
        .map(|l| LabelDoc { id: l.id.clone(), degree: l.degree, value: l.value.map(|v| v.to_string()) })
        .collect()
}

pub fn basis_from_doc(docs: &[LabelDoc]) -> Result<GradedBasis, ChainError> {
    let labels = docs
        .iter()
        .map(|d| {
            Ok(Label {
                id: d.id.clone(),
                degree: d.degree,
                value: d.value.as_deref().map(parse_rational).transpose()?,
            })
        })
        .collect::<Result<Vec<_>, ChainError>>()?;
    GradedBasis::new(labels)
}

/// Nonzero entries of a matrix between two bases, keyed by label ids.
pub fn matrix_entries<R: Coefficient>(
    m: &Matrix<R>,
    rows: &[Label],
    cols: &[Label],
) -> Vec<(String, String, String)> {
    m.nonzero_entries()
        .into_iter()
        .map(|(r, c, v)| (rows[r].id.clone(), cols[c].id.clone(), v.to_string()))
        .collect()
}

pub fn matrix_from_entries<R: Coefficient>(
    ctx: &R::Context,
    entries: &[(String, String, String)],
    rows: &[Label],
    cols: &[Label],
) -> Result<Matrix<R>, ChainError> {
    let mut m = Matrix::zeros(ctx, rows.len(), cols.len());
    for (r, c, v) in entries {
        let i = rows.iter().position(|l| &l.id == r).ok_or_else(|| ChainError::UnknownLabel(r.clone()))?;
        let j = cols.iter().position(|l| &l.id == c).ok_or_else(|| ChainError::UnknownLabel(c.clone()))?;
        m.set(i, j, R::parse(ctx, v)?);
    }
    Ok(m)
}

impl<R: Coefficient> ChainComplex<R> {
    pub fn to_doc(&self) -> ComplexDoc {
        let b = self.basis();
        ComplexDoc {
            coefficients: R::describe(self.context()),
            basis: basis_to_doc(b),
            differentials: self
                .degrees()
                .filter_map(|i| {
                    let entries = matrix_entries(&self.d(i), b.labels(i - 1), b.labels(i));
                    (!entries.is_empty()).then_some(DifferentialDoc { degree: i, entries })
                })
                .collect(),
        }
    }

    pub fn from_doc(ctx: &R::Context, doc: &ComplexDoc) -> Result<Self, ChainError> {
        if R::describe(ctx) != doc.coefficients {
            return Err(ChainError::WrongCoefficients);
        }
        let basis = basis_from_doc(&doc.basis)?;
        let diffs = doc
            .differentials
            .iter()
            .map(|d| {
                matrix_from_entries(ctx, &d.entries, basis.labels(d.degree - 1), basis.labels(d.degree))
                    .map(|m| (d.degree, m))
            })
            .collect::<Result<Vec<_>, _>>()?;
        ChainComplex::new(ctx, basis, diffs)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("complex documents serialise")
    }
}

/// Per-degree matrices of a graded map, keyed by source degree.
pub fn map_to_doc<R: Coefficient>(f: &ChainMap<R>) -> Vec<DifferentialDoc> {
    f.source
        .degrees()
        .filter_map(|i| {
            let entries = matrix_entries(&f.at(i), f.target.basis().labels(i + f.shift), f.source.basis().labels(i));
            (!entries.is_empty()).then_some(DifferentialDoc { degree: i, entries })
        })
        .collect()
}

pub fn map_from_doc<R: Coefficient>(
    source: &ChainComplex<R>,
    target: &ChainComplex<R>,
    shift: i32,
    relation: MapRelation,
    docs: &[DifferentialDoc],
) -> Result<ChainMap<R>, ChainError> {
    let ctx = source.context();
    let mats = docs
        .iter()
        .map(|d| {
            let rows = target.basis().labels(d.degree + shift);
            let cols = source.basis().labels(d.degree);
            matrix_from_entries(ctx, &d.entries, rows, cols).map(|m| (d.degree, m))
        })
        .collect::<Result<Vec<_>, _>>()?;
    ChainMap::new(source.clone(), target.clone(), shift, relation, mats)
}
