use std::fmt;

use serde::Serialize;

use crate::chain::{ChainComplex, ChainMap, GradedBasis, MapRelation};
use crate::matrix::{Coefficient, Matrix};

use super::CobordismError;

/// Complexes of a cobordism: `D` and `D'` at the two ends, `F` for the
/// interior, with `theta: F_i -> D_{i-1}`, `theta': D'_i -> F_i` and
/// `psi: D'_i -> D_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct MorseTriple<R: Coefficient> {
    pub d: ChainComplex<R>,
    pub f: ChainComplex<R>,
    pub dprime: ChainComplex<R>,
    pub theta: ChainMap<R>,
    pub thetaprime: ChainMap<R>,
    pub psi: ChainMap<R>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TripleIdentity {
    /// `d_D theta + theta d_F = 0`
    ThetaAnticommutes,
    /// `d_F theta' - theta' d_D' = 0`
    ThetaPrimeCommutes,
    /// `d_D psi - psi d_D' + theta theta' = 0`
    PsiHomotopy,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityViolation {
    pub identity: TripleIdentity,
    pub degree: i32,
    pub row: String,
    pub col: String,
    pub value: String,
}

impl fmt::Display for IdentityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} in degree {} at ({}, {}): {}", self.identity, self.degree, self.row, self.col, self.value)
    }
}

fn check_map<R: Coefficient>(
    m: &ChainMap<R>,
    source: &ChainComplex<R>,
    target: &ChainComplex<R>,
    shift: i32,
    name: &str,
) -> Result<(), CobordismError> {
    if m.source.basis() != source.basis() || m.target.basis() != target.basis() || m.shift != shift {
        return Err(CobordismError::ShapeMismatch(format!("{name} has the wrong source, target or shift")));
    }
    Ok(())
}

pub(crate) fn violations<R: Coefficient>(
    identity: TripleIdentity,
    degree: i32,
    m: &Matrix<R>,
    rows: &GradedBasis,
    row_degree: i32,
    cols: &GradedBasis,
) -> impl Iterator<Item = IdentityViolation> {
    let r = rows.labels(row_degree).to_vec();
    let c = cols.labels(degree).to_vec();
    m.nonzero_entries().into_iter().map(move |(i, j, v)| IdentityViolation {
        identity,
        degree,
        row: r[i].id.clone(),
        col: c[j].id.clone(),
        value: v.to_string(),
    })
}

impl<R: Coefficient> MorseTriple<R> {
    /// Checks shapes; the identities are checked by [`MorseTriple::validate`].
    pub fn new(
        d: ChainComplex<R>,
        f: ChainComplex<R>,
        dprime: ChainComplex<R>,
        theta: ChainMap<R>,
        thetaprime: ChainMap<R>,
        psi: ChainMap<R>,
    ) -> Result<Self, CobordismError> {
        check_map(&theta, &f, &d, -1, "theta")?;
        check_map(&thetaprime, &dprime, &f, 0, "thetaprime")?;
        check_map(&psi, &dprime, &d, 0, "psi")?;
        Ok(MorseTriple { d, f, dprime, theta, thetaprime, psi })
    }

    /// Builds a triple from per-degree matrices; missing degrees are zero.
    pub fn from_matrices(
        d: ChainComplex<R>,
        f: ChainComplex<R>,
        dprime: ChainComplex<R>,
        theta: Vec<(i32, Matrix<R>)>,
        thetaprime: Vec<(i32, Matrix<R>)>,
        psi: Vec<(i32, Matrix<R>)>,
    ) -> Result<Self, CobordismError> {
        let theta = ChainMap::new(f.clone(), d.clone(), -1, MapRelation::Anticommute, theta)?;
        let thetaprime = ChainMap::new(dprime.clone(), f.clone(), 0, MapRelation::Commute, thetaprime)?;
        let psi = ChainMap::new(dprime.clone(), d.clone(), 0, MapRelation::Commute, psi)?;
        Self::new(d, f, dprime, theta, thetaprime, psi)
    }

    fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        let all = [self.d.degrees(), self.f.degrees(), self.dprime.degrees()];
        let lo = all.iter().filter(|r| !r.is_empty()).map(|r| *r.start()).min().unwrap_or(0);
        let hi = all.iter().filter(|r| !r.is_empty()).map(|r| *r.end()).max().unwrap_or(-1);
        lo..=hi + 1
    }

    /// Every nonzero entry of the three identities.
    pub fn validate(&self) -> Vec<IdentityViolation> {
        let (d, f, dp) = (&self.d, &self.f, &self.dprime);
        let mut out = Vec::new();
        for i in self.degrees() {
            let a = d.d(i - 1).mul(&self.theta.at(i)).add(&self.theta.at(i - 1).mul(&f.d(i)));
            out.extend(violations(TripleIdentity::ThetaAnticommutes, i, &a, d.basis(), i - 2, f.basis()));
            let b = f.d(i).mul(&self.thetaprime.at(i)).sub(&self.thetaprime.at(i - 1).mul(&dp.d(i)));
            out.extend(violations(TripleIdentity::ThetaPrimeCommutes, i, &b, f.basis(), i - 1, dp.basis()));
            let c = d
                .d(i)
                .mul(&self.psi.at(i))
                .sub(&self.psi.at(i - 1).mul(&dp.d(i)))
                .add(&self.theta.at(i).mul(&self.thetaprime.at(i)));
            out.extend(violations(TripleIdentity::PsiHomotopy, i, &c, d.basis(), i - 1, dp.basis()));
        }
        out
    }

    /// The complex on `D_i + F_i + D'_{i-1}` with differential
    /// `[[d_D, theta, -psi], [0, d_F, -theta'], [0, 0, -d_D']]`.
    pub fn assemble(&self) -> Result<ChainComplex<R>, CobordismError> {
        let violations = self.validate();
        if !violations.is_empty() {
            return Err(CobordismError::IdentityViolation(violations));
        }
        Ok(self.assemble_unchecked())
    }

    pub(crate) fn assemble_unchecked(&self) -> ChainComplex<R> {
        let ctx = self.d.context().clone();
        let (d, f, dp) = (&self.d, &self.f, &self.dprime);
        let (basis, _) = GradedBasis::direct_sum(&[d.basis().clone(), f.basis().clone(), dp.basis().shifted(1)]);
        let diffs = basis
            .degrees()
            .map(|i| {
                let heights = [d.dim(i - 1), f.dim(i - 1), dp.dim(i - 2)];
                let widths = [d.dim(i), f.dim(i), dp.dim(i - 1)];
                let blocks = vec![
                    vec![Some(d.d(i)), Some(self.theta.at(i)), Some(self.psi.at(i - 1).neg())],
                    vec![None, Some(f.d(i)), Some(self.thetaprime.at(i - 1).neg())],
                    vec![None, None, Some(dp.d(i - 1).neg())],
                ];
                (i, Matrix::blocks(&ctx, &heights, &widths, &blocks))
            })
            .collect::<Vec<_>>();
        ChainComplex::new(&ctx, basis, diffs).expect("triple blocks have matching shapes")
    }

    /// The continuation map `D' -> D` of a cobordism without interior
    /// critical points: the flow count, which is `-psi` in the block form.
    pub fn continuation_map(&self) -> Result<ChainMap<R>, CobordismError> {
        if self.f.basis().total_dim() != 0 {
            return Err(CobordismError::NotSimple);
        }
        let mats = self.dprime.degrees().map(|i| (i, self.psi.at(i).neg())).collect::<Vec<_>>();
        let map = ChainMap::new(self.dprime.clone(), self.d.clone(), 0, MapRelation::Commute, mats)?;
        let defects = map.defects();
        if !defects.is_empty() {
            return Err(CobordismError::NotAChainMap { name: "psi".into(), defects });
        }
        Ok(map)
    }
}
