use serde::Serialize;

use crate::chain::{ChainComplex, ChainMap};
use crate::matrix::Coefficient;
use crate::rings::NovikovElement;

use super::AssemblyError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntryDiscrepancy {
    pub degree: i32,
    pub row: String,
    pub col: String,
    pub left: String,
    pub right: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CongruenceReport {
    pub order: i64,
    pub holds: bool,
    pub first_discrepancy: Option<EntryDiscrepancy>,
}

/// Compares two complexes on the same basis entry by entry modulo `z^n`.
pub fn diff_congruence(
    a: &ChainComplex<NovikovElement>,
    b: &ChainComplex<NovikovElement>,
    n: i64,
) -> Result<CongruenceReport, AssemblyError> {
    if a.basis() != b.basis() {
        return Err(AssemblyError::BasisMismatch(format!(
            "dims {:?} vs {:?}",
            a.basis().dims(),
            b.basis().dims()
        )));
    }
    for i in a.degrees() {
        let (da, db) = (a.d(i), b.d(i));
        for r in 0..da.rows() {
            for c in 0..da.cols() {
                if !da.get(r, c).congruent(db.get(r, c), n) {
                    let d = EntryDiscrepancy {
                        degree: i,
                        row: a.basis().labels(i - 1)[r].id.clone(),
                        col: a.basis().labels(i)[c].id.clone(),
                        left: da.get(r, c).to_string(),
                        right: db.get(r, c).to_string(),
                    };
                    return Ok(CongruenceReport { order: n, holds: false, first_discrepancy: Some(d) });
                }
            }
        }
    }
    Ok(CongruenceReport { order: n, holds: true, first_discrepancy: None })
}

/// True iff `j i` is the identity (to the coefficients' precision).
pub fn retraction_check<R: Coefficient>(i: &ChainMap<R>, j: &ChainMap<R>) -> Result<bool, AssemblyError> {
    if i.target.basis() != j.source.basis() || i.source.basis() != j.target.basis() || i.shift + j.shift != 0 {
        return Err(AssemblyError::ShapeMismatch("j does not compose with i to an endomorphism".into()));
    }
    let ji = j.compose(i)?;
    Ok(ji.is_identity())
}
