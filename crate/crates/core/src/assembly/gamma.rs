use std::sync::Arc;

use serde::Serialize;

use crate::chain::{ChainComplex, ChainMap, GradedBasis, MapRelation};
use crate::matrix::{Matrix, NovikovContext};
use crate::rings::{NovikovElement, Precision, RingContext};

use super::AssemblyError;

/// One fundamental domain's worth of data `(F, D, theta, theta', psi)`:
/// `theta: F_i -> D_{i-1}`, `theta': D_i -> F_i`, `psi: D_i -> D_i`, the
/// last carrying one factor of `z` in the assembled complexes. Entries
/// are exact elements of nonnegative z-degree.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraicCobordism {
    pub f: ChainComplex<NovikovElement>,
    pub d: ChainComplex<NovikovElement>,
    pub theta: ChainMap<NovikovElement>,
    pub thetaprime: ChainMap<NovikovElement>,
    pub psi: ChainMap<NovikovElement>,
}

/// Nonzero entry of `d_E^2` modulo `z^n`. Blocks are numbered 1..3 in the
/// order `D_{i-1}`, `D_i`, `F_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GammaViolation {
    pub block: (usize, usize),
    pub degree: i32,
    pub row: String,
    pub col: String,
    pub value: String,
}

fn z_times(m: &Matrix<NovikovElement>) -> Matrix<NovikovElement> {
    m.map(|x| x.shift(1))
}

fn at_precision(m: &Matrix<NovikovElement>, n: i64) -> Matrix<NovikovElement> {
    m.with_precision(Some(n))
}

impl AlgebraicCobordism {
    pub fn new(
        f: ChainComplex<NovikovElement>,
        d: ChainComplex<NovikovElement>,
        theta: ChainMap<NovikovElement>,
        thetaprime: ChainMap<NovikovElement>,
        psi: ChainMap<NovikovElement>,
    ) -> Result<Self, AssemblyError> {
        let ok = |m: &ChainMap<NovikovElement>, s: &ChainComplex<NovikovElement>, t: &ChainComplex<NovikovElement>, shift| {
            m.source.basis() == s.basis() && m.target.basis() == t.basis() && m.shift == shift
        };
        if f.context() != d.context() {
            return Err(AssemblyError::ShapeMismatch("F and D have different coefficients".into()));
        }
        if !ok(&theta, &f, &d, -1) || !ok(&thetaprime, &d, &f, 0) || !ok(&psi, &d, &d, 0) {
            return Err(AssemblyError::ShapeMismatch("theta, theta' or psi has the wrong shape".into()));
        }
        let gamma = AlgebraicCobordism { f, d, theta, thetaprime, psi };
        let negative = gamma.all_matrices().any(|m| {
            (0..m.rows()).any(|r| (0..m.cols()).any(|c| m.get(r, c).order().is_some_and(|o| o < 0)))
        });
        if negative {
            return Err(AssemblyError::NegativeDegreePresent);
        }
        Ok(gamma)
    }

    pub fn from_matrices(
        f: ChainComplex<NovikovElement>,
        d: ChainComplex<NovikovElement>,
        theta: Vec<(i32, Matrix<NovikovElement>)>,
        thetaprime: Vec<(i32, Matrix<NovikovElement>)>,
        psi: Vec<(i32, Matrix<NovikovElement>)>,
    ) -> Result<Self, AssemblyError> {
        let theta = ChainMap::new(f.clone(), d.clone(), -1, MapRelation::Anticommute, theta)?;
        let thetaprime = ChainMap::new(d.clone(), f.clone(), 0, MapRelation::Commute, thetaprime)?;
        let psi = ChainMap::new(d.clone(), d.clone(), 0, MapRelation::Commute, psi)?;
        Self::new(f, d, theta, thetaprime, psi)
    }

    fn all_matrices(&self) -> impl Iterator<Item = &Matrix<NovikovElement>> {
        self.f
            .degrees()
            .filter_map(|i| self.f.d_ref(i))
            .chain(self.d.degrees().filter_map(|i| self.d.d_ref(i)))
            .chain(self.theta.matrices().map(|(_, m)| m))
            .chain(self.thetaprime.matrices().map(|(_, m)| m))
            .chain(self.psi.matrices().map(|(_, m)| m))
    }

    pub fn ring(&self) -> &Arc<RingContext> {
        &self.f.context().ring
    }

    fn context_at(&self, precision: Precision) -> NovikovContext {
        NovikovContext::new(self.ring().clone(), precision)
    }

    /// Basis of `E`: prism copies of `D` (ids suffixed `xI`) one degree up,
    /// then `D`, then `F`.
    fn e_basis(&self) -> GradedBasis {
        let prisms = self.d.basis().shifted(1).relabeled(|id| format!("{id}xI"));
        GradedBasis::direct_sum(&[prisms, self.d.basis().clone(), self.f.basis().clone()]).0
    }

    fn build_e_unchecked(&self, n: i64) -> ChainComplex<NovikovElement> {
        let ctx = self.context_at(Some(n));
        let (d, f) = (&self.d, &self.f);
        let basis = self.e_basis();
        let dims = |i: i32| [d.dim(i - 1), d.dim(i), f.dim(i)];
        let p = |m: Matrix<NovikovElement>| at_precision(&m, n);
        let diffs = basis
            .degrees()
            .map(|i| {
                let one_minus_zpsi = Matrix::identity(&ctx, d.dim(i - 1)).sub(&p(z_times(&self.psi.at(i - 1))));
                let blocks = vec![
                    vec![Some(p(d.d(i - 1).neg())), None, None],
                    vec![Some(one_minus_zpsi), Some(p(d.d(i))), Some(p(self.theta.at(i)))],
                    vec![Some(p(z_times(&self.thetaprime.at(i - 1)).neg())), None, Some(p(f.d(i)))],
                ];
                (i, Matrix::blocks(&ctx, &dims(i - 1), &dims(i), &blocks))
            })
            .collect::<Vec<_>>();
        ChainComplex::new(&ctx, basis, diffs).expect("E blocks have matching shapes")
    }

    /// Entries of `d_E^2` that do not vanish modulo `z^n`.
    pub fn validate(&self, n: i64) -> Vec<GammaViolation> {
        let e = self.build_e_unchecked(n);
        let (d, f) = (&self.d, &self.f);
        let block_of = |degree: i32, pos: usize| {
            let sizes = [d.dim(degree - 1), d.dim(degree), f.dim(degree)];
            let mut acc = 0;
            for (k, s) in sizes.iter().enumerate() {
                acc += s;
                if pos < acc {
                    return k + 1;
                }
            }
            sizes.len()
        };
        let mut out = Vec::new();
        for i in e.degrees() {
            let sq = e.d(i - 1).mul(&e.d(i));
            let rows = e.basis().labels(i - 2);
            let cols = e.basis().labels(i);
            for (r, c, v) in sq.nonzero_entries() {
                out.push(GammaViolation {
                    block: (block_of(i - 2, r), block_of(i, c)),
                    degree: i,
                    row: rows[r].id.clone(),
                    col: cols[c].id.clone(),
                    value: v.to_string(),
                });
            }
        }
        out
    }

    fn checked(&self, n: i64) -> Result<(), AssemblyError> {
        let v = self.validate(n);
        if v.is_empty() {
            Ok(())
        } else {
            Err(AssemblyError::InvalidGamma(v))
        }
    }

    /// `E_i = D_{i-1} + D_i + F_i` with differential
    /// `[[-d_D, 0, 0], [1 - z psi, d_D, theta], [-z theta', 0, d_F]]`
    /// at precision `n`.
    pub fn build_e(&self, n: i64) -> Result<ChainComplex<NovikovElement>, AssemblyError> {
        self.checked(n)?;
        Ok(self.build_e_unchecked(n))
    }

    /// The complex on the basis of `F` with differential
    /// `d_F + sum_j z theta' (z psi)^j theta`, modulo `z^n`.
    pub fn assemble_fhat(&self, n: i64) -> Result<ChainComplex<NovikovElement>, AssemblyError> {
        self.checked(n)?;
        let ctx = self.context_at(Some(n));
        let f = &self.f;
        let diffs = f
            .degrees()
            .map(|i| {
                let mut out = at_precision(&f.d(i), n);
                let tp = at_precision(&z_times(&self.thetaprime.at(i - 1)), n);
                let zpsi = at_precision(&z_times(&self.psi.at(i - 1)), n);
                // t = (z psi)^j theta; every factor of z psi raises the order
                let mut t = at_precision(&self.theta.at(i), n);
                for _ in 0..n.max(0) {
                    if t.is_zero() {
                        break;
                    }
                    out = out.add(&tp.mul(&t)).truncate(n);
                    t = zpsi.mul(&t).truncate(n);
                }
                (i, out)
            })
            .collect::<Vec<_>>();
        Ok(ChainComplex::new(&ctx, f.basis().clone(), diffs)?)
    }
}
