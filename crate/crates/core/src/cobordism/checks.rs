use std::collections::BTreeSet;

use num_rational::Rational64;
use serde::Serialize;

use crate::chain::{ChainComplex, ChainMap, MapDefect, ValueFiltration};
use crate::matrix::{Coefficient, Matrix};

use super::CobordismError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GlueReport {
    pub holds: bool,
    /// Nonzero entries of `phi - theta' theta''`, by source degree.
    pub discrepancy: Vec<MapDefect>,
}

/// Compares the attaching map with the composite `theta' theta''`.
pub fn glue_check<R: Coefficient>(
    phi: &ChainMap<R>,
    thetaprime: &ChainMap<R>,
    thetasecond: &ChainMap<R>,
) -> Result<GlueReport, CobordismError> {
    if phi.source.basis() != thetasecond.source.basis()
        || phi.target.basis() != thetaprime.target.basis()
        || thetasecond.target.basis() != thetaprime.source.basis()
        || phi.shift != thetaprime.shift + thetasecond.shift
    {
        return Err(CobordismError::ShapeMismatch("phi, theta' and theta'' are not composable".into()));
    }
    let mut discrepancy = Vec::new();
    for i in phi.source.degrees() {
        let j = i + thetasecond.shift;
        let diff = phi.at(i).sub(&thetaprime.at(j).mul(&thetasecond.at(i)));
        let rows = phi.target.basis().labels(i + phi.shift);
        let cols = phi.source.basis().labels(i);
        discrepancy.extend(diff.nonzero_entries().into_iter().map(|(r, c, v)| MapDefect {
            degree: i,
            row: rows[r].id.clone(),
            col: cols[c].id.clone(),
            value: v.to_string(),
        }));
    }
    Ok(GlueReport { holds: discrepancy.is_empty(), discrepancy })
}

/// Label ids of the four blocks of a two-parameter square complex: `f0`
/// (bottom corner, no shift), `f1` and `f2` (the two edges, shift 1) and
/// `f3` (top corner, shift 2).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SquarePartition {
    pub f0: Vec<String>,
    pub f1: Vec<String>,
    pub f2: Vec<String>,
    pub f3: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SettingViolation {
    pub u: String,
    pub v: String,
    pub sum: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SettingReport {
    /// Pairs `(u, v)` with `f3(u) - f0(v) < epsilon` that were checked.
    pub checked_pairs: usize,
    pub violations: Vec<SettingViolation>,
}

impl SettingReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

/// For `u` in the `f3` block and `v` in the `f0` block two degrees below
/// with `f3(u) - f0(v) < epsilon`, checks that the composites of the
/// square's differential through `f1` and through `f2` cancel.
pub fn setting_check(
    square: &ChainComplex<i64>,
    partition: &SquarePartition,
    values: &ValueFiltration,
    epsilon: Rational64,
) -> Result<SettingReport, CobordismError> {
    let basis = square.basis();
    let blocks = [&partition.f0, &partition.f1, &partition.f2, &partition.f3];
    let mut seen = BTreeSet::new();
    for id in blocks.iter().flat_map(|b| b.iter()) {
        if !basis.contains(id) {
            return Err(CobordismError::BadPartition(format!("`{id}` is not a basis label")));
        }
        if !seen.insert(id.as_str()) {
            return Err(CobordismError::BadPartition(format!("`{id}` is in two blocks")));
        }
    }
    if seen.len() != basis.total_dim() {
        return Err(CobordismError::BadPartition("blocks do not cover the basis".into()));
    }
    for id in partition.f0.iter().chain(&partition.f3) {
        if values.value(id).is_none() {
            return Err(CobordismError::BadPartition(format!("`{id}` has no value")));
        }
    }
    let middle: BTreeSet<&str> = partition.f1.iter().chain(&partition.f2).map(String::as_str).collect();
    let mut report = SettingReport { checked_pairs: 0, violations: Vec::new() };
    for u in &partition.f3 {
        let (k, ui) = basis.position(u).expect("checked above");
        let du = square.d(k);
        let dd = square.d(k - 1);
        let mids = basis.labels(k - 1);
        for v in &partition.f0 {
            let (kv, vi) = basis.position(v).expect("checked above");
            if kv != k - 2 {
                continue;
            }
            if values.value(u).unwrap() - values.value(v).unwrap() >= epsilon {
                continue;
            }
            report.checked_pairs += 1;
            let sum: i64 = mids
                .iter()
                .enumerate()
                .filter(|(_, l)| middle.contains(l.id.as_str()))
                .map(|(x, _)| dd.get(vi, x) * du.get(x, ui))
                .sum();
            if sum != 0 {
                report.violations.push(SettingViolation { u: u.clone(), v: v.clone(), sum });
            }
        }
    }
    Ok(report)
}

/// True iff `a`, with rows and columns reordered by `order`, is upper
/// triangular with diagonal entries `+1` or `-1`.
pub fn triangularity_in_order(a: &Matrix<i64>, order: &[usize]) -> bool {
    let n = a.rows();
    if a.cols() != n || order.len() != n {
        return false;
    }
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (0..n).collect::<Vec<_>>() {
        return false;
    }
    (0..n).all(|r| {
        (0..n).all(|c| {
            let e = *a.get(order[r], order[c]);
            match r.cmp(&c) {
                std::cmp::Ordering::Equal => e == 1 || e == -1,
                std::cmp::Ordering::Greater => e == 0,
                std::cmp::Ordering::Less => true,
            }
        })
    })
}

/// [`triangularity_in_order`] for the order by increasing value (ties by
/// id). `ids` names the rows and columns of `a`.
pub fn triangularity_check(a: &Matrix<i64>, ids: &[String], values: &ValueFiltration) -> bool {
    if ids.len() != a.rows() {
        return false;
    }
    let ordered = values.order(ids.iter().map(String::as_str));
    if ordered.len() != ids.len() {
        return false;
    }
    let order: Vec<usize> =
        ordered.iter().map(|id| ids.iter().position(|x| x == id).expect("order returns given ids")).collect();
    triangularity_in_order(a, &order)
}
