//! Ranks over the field of rational Laurent series by elimination with
//! pivots of minimal z-order.
//!
//! Choosing a pivot of minimal order keeps every update `b - a p^{-1} c`
//! at the precision of its inputs, so the certified precision never
//! degrades during elimination.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::matrix::Matrix;
use crate::rings::{NovikovElement, Precision};

use super::{ChainComplex, ChainError};

#[derive(Clone, Debug)]
struct QSeries {
    coeffs: BTreeMap<i64, BigRational>,
    precision: Precision,
}

fn pmin(a: Precision, b: Precision) -> Precision {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) | (None, x) => x,
    }
}

fn padd(a: Precision, b: Option<i64>) -> Precision {
    match (a, b) {
        (Some(x), Some(y)) => Some(x + y),
        _ => None,
    }
}

impl QSeries {
    fn from_novikov(e: &NovikovElement) -> Result<Self, ChainError> {
        let mut coeffs = BTreeMap::new();
        for (j, c) in e.coeffs() {
            let v = c.as_integer().ok_or(ChainError::WrongCoefficients)?;
            coeffs.insert(j, BigRational::from_integer(BigInt::from(v)));
        }
        Ok(QSeries { coeffs, precision: e.precision() })
    }

    fn order(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    fn valuation(&self) -> Option<i64> {
        self.order().or(self.precision)
    }

    fn insert(&mut self, j: i64, v: BigRational) {
        if self.precision.is_some_and(|p| j >= p) {
            return;
        }
        let sum = self.coeffs.remove(&j).map_or(v.clone(), |x| x + v);
        if !sum.is_zero() {
            self.coeffs.insert(j, sum);
        }
    }

    fn sub(&self, other: &Self) -> Self {
        let mut out = QSeries { coeffs: self.coeffs.clone(), precision: pmin(self.precision, other.precision) };
        out.coeffs.retain(|j, _| out.precision.is_none_or(|p| *j < p));
        for (j, c) in &other.coeffs {
            out.insert(*j, -c.clone());
        }
        out
    }

    fn mul(&self, other: &Self) -> Self {
        let precision = pmin(padd(self.precision, other.valuation()), padd(other.precision, self.valuation()));
        let mut out = QSeries { coeffs: BTreeMap::new(), precision };
        for (i, a) in &self.coeffs {
            for (j, b) in &other.coeffs {
                out.insert(i + j, a * b);
            }
        }
        out
    }

    /// Inverse of a series with known order `m`, to the precision it certifies.
    fn inverse(&self) -> Self {
        let m = self.order().expect("pivot is nonzero");
        let lead = self.coeffs[&m].clone();
        let precision = self.precision.map(|p| p - 2 * m);
        let mut r: BTreeMap<i64, BigRational> = BTreeMap::new();
        let top = precision.expect("entries are capped at the working precision");
        for j in -m..top {
            let k = j + m;
            let mut rhs = if k == 0 { BigRational::one() } else { BigRational::zero() };
            for (i, a) in self.coeffs.range(m + 1..) {
                let idx = k - i;
                if idx < -m {
                    break;
                }
                if let Some(rv) = r.get(&idx) {
                    rhs -= a * rv;
                }
            }
            let rj = rhs / &lead;
            if !rj.is_zero() {
                r.insert(j, rj);
            }
        }
        QSeries { coeffs: r, precision }
    }
}

/// Rank of a matrix over Q((z)), certified modulo `z^n`.
///
/// Entries vanishing modulo `z^n` are treated as zero. An entry with no
/// known terms whose precision is below `n` cannot be decided and yields
/// [`ChainError::PrecisionExhausted`].
pub fn novikov_rank(m: &Matrix<NovikovElement>, n: i64) -> Result<usize, ChainError> {
    let mut a: Vec<Vec<QSeries>> = (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| QSeries::from_novikov(m.get(i, j))).collect())
        .collect::<Result<_, _>>()?;
    for row in a.iter_mut() {
        for e in row.iter_mut() {
            e.coeffs.retain(|j, _| *j < n);
            e.precision = pmin(e.precision, Some(n));
        }
    }
    let mut rank = 0;
    let mut rows: Vec<usize> = (0..m.rows()).collect();
    let mut cols: Vec<usize> = (0..m.cols()).collect();
    loop {
        let mut best: Option<(i64, usize, usize)> = None;
        for (ri, &i) in rows.iter().enumerate() {
            for (ci, &j) in cols.iter().enumerate() {
                let e = &a[i][j];
                match e.order() {
                    Some(o) if best.is_none_or(|b| o < b.0) => best = Some((o, ri, ci)),
                    Some(_) => {}
                    None => {
                        if e.precision.is_some_and(|p| p < n) {
                            return Err(ChainError::PrecisionExhausted { needed: n, available: e.precision.unwrap_or(n) });
                        }
                    }
                }
            }
        }
        let Some((_, ri, ci)) = best else { break };
        let pi = rows.remove(ri);
        let pj = cols.remove(ci);
        let inv = a[pi][pj].inverse();
        for &i in &rows {
            if a[i][pj].order().is_none() {
                continue;
            }
            let factor = a[i][pj].mul(&inv);
            for &j in &cols {
                let upd = factor.mul(&a[pi][j]);
                a[i][j] = a[i][j].sub(&upd);
                a[i][j].coeffs.retain(|k, _| *k < n);
            }
        }
        rank += 1;
    }
    Ok(rank)
}

/// Betti numbers over Q((z)) in every degree, certified modulo `z^n`.
pub fn novikov_ranks(c: &ChainComplex<NovikovElement>, n: i64) -> Result<Vec<(i32, usize)>, ChainError> {
    if c.context().ring.rank() != 0 {
        return Err(ChainError::WrongCoefficients);
    }
    let ranks: BTreeMap<i32, usize> = c
        .degrees()
        .map(|i| novikov_rank(&c.d(i), n).map(|r| (i, r)))
        .collect::<Result<_, _>>()?;
    Ok(c
        .degrees()
        .map(|i| {
            let out = ranks.get(&i).copied().unwrap_or(0);
            let inc = ranks.get(&(i + 1)).copied().unwrap_or(0);
            (i, c.dim(i) - out - inc)
        })
        .collect())
}
