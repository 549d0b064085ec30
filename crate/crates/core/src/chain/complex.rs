use crate::matrix::{Coefficient, Matrix};
use crate::rings::NovikovElement;

use super::{ChainError, GradedBasis};

/// A based free chain complex. `d(i)` maps degree `i` to degree `i - 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainComplex<R: Coefficient> {
    ctx: R::Context,
    basis: GradedBasis,
    diffs: Vec<Matrix<R>>,
}

/// A nonzero entry of `d(i-1) d(i)`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct SquareDefect {
    /// Source degree `i` of the composite `d(i-1) d(i)`.
    pub degree: i32,
    pub row: String,
    pub col: String,
    pub value: String,
}

impl<R: Coefficient> ChainComplex<R> {
    /// Builds a complex; degrees without a given differential get zero maps.
    pub fn new(
        ctx: &R::Context,
        basis: GradedBasis,
        diffs: impl IntoIterator<Item = (i32, Matrix<R>)>,
    ) -> Result<Self, ChainError> {
        let mut out = Self::zero_differential(ctx, basis);
        for (i, m) in diffs {
            let expected = (out.basis.dim(i - 1), out.basis.dim(i));
            if m.shape() != expected {
                return Err(ChainError::ShapeMismatch(format!(
                    "d_{i} has shape {:?}, expected {:?}",
                    m.shape(),
                    expected
                )));
            }
            if expected.0 * expected.1 == 0 {
                continue;
            }
            let k = (i - *out.basis.degrees().start()) as usize;
            out.diffs[k] = m;
        }
        Ok(out)
    }

    pub fn zero_differential(ctx: &R::Context, basis: GradedBasis) -> Self {
        let diffs = basis
            .degrees()
            .map(|i| Matrix::zeros(ctx, basis.dim(i - 1), basis.dim(i)))
            .collect();
        ChainComplex { ctx: ctx.clone(), basis, diffs }
    }

    pub fn context(&self) -> &R::Context {
        &self.ctx
    }

    pub fn basis(&self) -> &GradedBasis {
        &self.basis
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        self.basis.degrees()
    }

    pub fn dim(&self, i: i32) -> usize {
        self.basis.dim(i)
    }

    /// The differential `C_i -> C_{i-1}`.
    pub fn d(&self, i: i32) -> Matrix<R> {
        let range = self.basis.degrees();
        if range.contains(&i) {
            self.diffs[(i - range.start()) as usize].clone()
        } else {
            Matrix::zeros(&self.ctx, self.basis.dim(i - 1), self.basis.dim(i))
        }
    }

    pub fn d_ref(&self, i: i32) -> Option<&Matrix<R>> {
        let range = self.basis.degrees();
        range.contains(&i).then(|| &self.diffs[(i - range.start()) as usize])
    }

    pub fn map_differentials(&self, f: impl Fn(i32, &Matrix<R>) -> Matrix<R>) -> Self {
        let start = *self.basis.degrees().start();
        ChainComplex {
            ctx: self.ctx.clone(),
            basis: self.basis.clone(),
            diffs: self
                .diffs
                .iter()
                .enumerate()
                .map(|(k, m)| f(start + k as i32, m))
                .collect(),
        }
    }

    /// Same complex with a different coefficient context (used to change
    /// precision).
    pub fn with_context(&self, ctx: R::Context, f: impl Fn(&Matrix<R>) -> Matrix<R>) -> Self {
        ChainComplex {
            ctx,
            basis: self.basis.clone(),
            diffs: self.diffs.iter().map(f).collect(),
        }
    }

    /// Lists every entry where `d(i-1) d(i)` is not zero. Empty means the
    /// complex passes.
    pub fn verify(&self) -> Vec<SquareDefect> {
        self.defects(|m| m.nonzero_entries().into_iter().map(|(r, c, v)| (r, c, v.to_string())).collect())
    }

    fn defects(&self, nonzero: impl Fn(&Matrix<R>) -> Vec<(usize, usize, String)>) -> Vec<SquareDefect> {
        let mut out = Vec::new();
        for i in self.degrees() {
            if self.dim(i - 2) == 0 || self.dim(i) == 0 {
                continue;
            }
            let sq = self.d(i - 1).mul(&self.d(i));
            for (r, c, value) in nonzero(&sq) {
                out.push(SquareDefect {
                    degree: i,
                    row: self.basis.labels(i - 2)[r].id.clone(),
                    col: self.basis.labels(i)[c].id.clone(),
                    value,
                });
            }
        }
        out
    }

    /// Direct sum with per-part signs on the differentials.
    pub fn direct_sum(parts: &[(&ChainComplex<R>, i64)]) -> Self {
        let ctx = parts.first().map(|p| p.0.ctx.clone()).expect("at least one summand");
        let bases: Vec<GradedBasis> = parts.iter().map(|p| p.0.basis.clone()).collect();
        let (basis, _) = GradedBasis::direct_sum(&bases);
        let mut diffs = Vec::new();
        for i in basis.degrees() {
            let heights: Vec<usize> = parts.iter().map(|p| p.0.dim(i - 1)).collect();
            let widths: Vec<usize> = parts.iter().map(|p| p.0.dim(i)).collect();
            let blocks: Vec<Vec<Option<Matrix<R>>>> = (0..parts.len())
                .map(|r| {
                    (0..parts.len())
                        .map(|c| {
                            (r == c).then(|| parts[r].0.d(i).scale(&R::from_int(&ctx, parts[r].1)))
                        })
                        .collect()
                })
                .collect();
            diffs.push((i, Matrix::blocks(&ctx, &heights, &widths, &blocks)));
        }
        ChainComplex::new(&ctx, basis, diffs).expect("block shapes agree")
    }
}

impl ChainComplex<NovikovElement> {
    /// Defects of `d^2` modulo `z^n`.
    pub fn verify_mod(&self, n: i64) -> Vec<SquareDefect> {
        self.defects(|m| {
            m.nonzero_entries()
                .into_iter()
                .filter_map(|(r, c, v)| {
                    let t = v.truncate(n);
                    (!t.is_zero()).then(|| (r, c, t.to_string()))
                })
                .collect()
        })
    }

    /// Every differential entry reduced modulo `z^n`.
    pub fn truncate(&self, n: i64) -> Self {
        let mut ctx = self.ctx.clone();
        ctx.precision = Some(ctx.precision.map_or(n, |p| p.min(n)));
        let p = ctx.precision;
        self.with_context(ctx, |m| m.with_precision(p))
    }
}
