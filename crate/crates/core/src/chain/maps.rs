use crate::matrix::{Coefficient, Matrix};

use super::{ChainComplex, ChainError, GradedBasis};

/// How a map interacts with the differentials: `d f = f d` or `d f = -f d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapRelation {
    Commute,
    Anticommute,
}

impl MapRelation {
    pub fn compose(self, other: MapRelation) -> MapRelation {
        if self == other {
            MapRelation::Commute
        } else {
            MapRelation::Anticommute
        }
    }

    pub fn sign(self) -> i64 {
        match self {
            MapRelation::Commute => -1,
            MapRelation::Anticommute => 1,
        }
    }
}

/// A graded map `source_i -> target_{i+shift}` given by one matrix per
/// source degree.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainMap<R: Coefficient> {
    pub source: ChainComplex<R>,
    pub target: ChainComplex<R>,
    pub shift: i32,
    pub relation: MapRelation,
    mats: Vec<(i32, Matrix<R>)>,
}

/// Nonzero entry of `d f -+ f d`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct MapDefect {
    pub degree: i32,
    pub row: String,
    pub col: String,
    pub value: String,
}

impl<R: Coefficient> ChainMap<R> {
    /// Unchecked constructor; missing degrees are zero. Use
    /// [`ChainMap::defects`] or [`ChainMap::checked`] to validate.
    pub fn new(
        source: ChainComplex<R>,
        target: ChainComplex<R>,
        shift: i32,
        relation: MapRelation,
        mats: impl IntoIterator<Item = (i32, Matrix<R>)>,
    ) -> Result<Self, ChainError> {
        let ctx = source.context().clone();
        let mut given: std::collections::BTreeMap<i32, Matrix<R>> = mats.into_iter().collect();
        let mut out = Vec::new();
        for i in source.degrees() {
            let shape = (target.dim(i + shift), source.dim(i));
            let m = given.remove(&i).unwrap_or_else(|| Matrix::zeros(&ctx, shape.0, shape.1));
            if m.shape() != shape {
                return Err(ChainError::ShapeMismatch(format!(
                    "map in degree {i} has shape {:?}, expected {:?}",
                    m.shape(),
                    shape
                )));
            }
            out.push((i, m));
        }
        if let Some((i, m)) = given.into_iter().find(|(_, m)| m.rows() * m.cols() > 0) {
            return Err(ChainError::ShapeMismatch(format!(
                "map given in degree {i} ({:?}) outside the source range",
                m.shape()
            )));
        }
        Ok(ChainMap { source, target, shift, relation, mats: out })
    }

    pub fn checked(self) -> Result<Self, ChainError> {
        let defects = self.defects();
        if defects.is_empty() {
            Ok(self)
        } else {
            Err(ChainError::NotAChainMap(defects))
        }
    }

    pub fn identity(c: &ChainComplex<R>) -> Self {
        let ctx = c.context();
        let mats: Vec<_> = c.degrees().map(|i| (i, Matrix::identity(ctx, c.dim(i)))).collect();
        ChainMap::new(c.clone(), c.clone(), 0, MapRelation::Commute, mats).expect("square identity")
    }

    pub fn zero(source: &ChainComplex<R>, target: &ChainComplex<R>, shift: i32, relation: MapRelation) -> Self {
        ChainMap::new(source.clone(), target.clone(), shift, relation, []).expect("zero map")
    }

    /// The matrix `source_i -> target_{i+shift}`.
    pub fn at(&self, i: i32) -> Matrix<R> {
        self.mats
            .iter()
            .find(|(d, _)| *d == i)
            .map(|(_, m)| m.clone())
            .unwrap_or_else(|| {
                Matrix::zeros(self.source.context(), self.target.dim(i + self.shift), self.source.dim(i))
            })
    }

    pub fn matrices(&self) -> impl Iterator<Item = (i32, &Matrix<R>)> {
        self.mats.iter().map(|(i, m)| (*i, m))
    }

    /// Entries where `d f = f d` (or `d f = -f d`) fails.
    pub fn defects(&self) -> Vec<MapDefect> {
        let mut out = Vec::new();
        let rel = -self.relation.sign();
        let ctx = self.source.context();
        for i in self.source.degrees() {
            let lhs = self.target.d(i + self.shift).mul(&self.at(i));
            let rhs = self.at(i - 1).mul(&self.source.d(i));
            let diff = lhs.sub(&rhs.scale(&R::from_int(ctx, rel)));
            for (r, c, v) in diff.nonzero_entries() {
                out.push(MapDefect {
                    degree: i,
                    row: self.target.basis().labels(i + self.shift - 1)[r].id.clone(),
                    col: self.source.basis().labels(i)[c].id.clone(),
                    value: v.to_string(),
                });
            }
        }
        out
    }

    /// `self` after `first`.
    pub fn compose(&self, first: &ChainMap<R>) -> Result<Self, ChainError> {
        if first.target.basis() != self.source.basis() {
            return Err(ChainError::ShapeMismatch("composition: bases differ".into()));
        }
        let mats: Vec<_> = first
            .source
            .degrees()
            .map(|i| (i, self.at(i + first.shift).mul(&first.at(i))))
            .collect();
        ChainMap::new(
            first.source.clone(),
            self.target.clone(),
            self.shift + first.shift,
            self.relation.compose(first.relation),
            mats,
        )
    }

    pub fn scale(&self, c: i64) -> Self {
        let k = R::from_int(self.source.context(), c);
        ChainMap { mats: self.mats.iter().map(|(i, m)| (*i, m.scale(&k))).collect(), ..self.clone() }
    }

    pub fn is_identity(&self) -> bool {
        self.shift == 0 && self.mats.iter().all(|(_, m)| m.is_identity())
    }
}

/// Chain homotopy `psi` with `d psi + psi d = to - from`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainHomotopy<R: Coefficient> {
    pub from: ChainMap<R>,
    pub to: ChainMap<R>,
    mats: Vec<(i32, Matrix<R>)>,
}

impl<R: Coefficient> ChainHomotopy<R> {
    /// `mats` maps `source_i -> target_{i+1}`. Both maps must be degree-0
    /// commuting maps between the same complexes.
    pub fn new(
        from: ChainMap<R>,
        to: ChainMap<R>,
        mats: impl IntoIterator<Item = (i32, Matrix<R>)>,
    ) -> Result<Self, ChainError> {
        if from.shift != 0 || to.shift != 0 || from.relation != MapRelation::Commute || to.relation != MapRelation::Commute {
            return Err(ChainError::Unsupported("homotopies between degree-0 commuting maps only".into()));
        }
        if from.source.basis() != to.source.basis() || from.target.basis() != to.target.basis() {
            return Err(ChainError::ShapeMismatch("homotopy endpoints have different complexes".into()));
        }
        let ctx = from.source.context().clone();
        let given: std::collections::BTreeMap<i32, Matrix<R>> = mats.into_iter().collect();
        let mut out = Vec::new();
        for i in from.source.degrees() {
            let shape = (from.target.dim(i + 1), from.source.dim(i));
            let m = given.get(&i).cloned().unwrap_or_else(|| Matrix::zeros(&ctx, shape.0, shape.1));
            if m.shape() != shape {
                return Err(ChainError::ShapeMismatch(format!("homotopy in degree {i}")));
            }
            out.push((i, m));
        }
        Ok(ChainHomotopy { from, to, mats: out })
    }

    pub fn at(&self, i: i32) -> Matrix<R> {
        self.mats
            .iter()
            .find(|(d, _)| *d == i)
            .map(|(_, m)| m.clone())
            .unwrap_or_else(|| {
                Matrix::zeros(self.from.source.context(), self.from.target.dim(i + 1), self.from.source.dim(i))
            })
    }

    /// True iff `d psi + psi d = to - from` in every degree.
    pub fn holds(&self) -> bool {
        let src = &self.from.source;
        let tgt = &self.from.target;
        src.degrees().all(|i| {
            let lhs = tgt.d(i + 1).mul(&self.at(i)).add(&self.at(i - 1).mul(&src.d(i)));
            lhs.sub(&self.to.at(i).sub(&self.from.at(i))).is_zero()
        })
    }

    /// The homotopy `-psi` from `to` back to `from`.
    pub fn reverse(&self) -> Self {
        ChainHomotopy {
            from: self.to.clone(),
            to: self.from.clone(),
            mats: self.mats.iter().map(|(i, m)| (*i, m.neg())).collect(),
        }
    }
}

/// Algebraic mapping cone of `f: C -> D`:
/// `C(f)_i = D_i + C_{i-1-shift}` with differential `[[d_D, f], [0, s d_C]]`,
/// `s = -1` for commuting maps and `s = +1` for anticommuting ones.
pub fn mapping_cone<R: Coefficient>(f: &ChainMap<R>) -> Result<ChainComplex<R>, ChainError> {
    let defects = f.defects();
    if !defects.is_empty() {
        return Err(ChainError::NotAChainMap(defects));
    }
    Ok(cone_unchecked(f))
}

pub(crate) fn cone_unchecked<R: Coefficient>(f: &ChainMap<R>) -> ChainComplex<R> {
    let ctx = f.source.context().clone();
    let c_shift = 1 + f.shift;
    let shifted = f.source.basis().shifted(c_shift);
    let (basis, _) = GradedBasis::direct_sum(&[f.target.basis().clone(), shifted]);
    let s = R::from_int(&ctx, f.relation.sign());
    let mut diffs = Vec::new();
    for i in basis.degrees() {
        let dd = f.target.d(i);
        let phi = f.at(i - c_shift);
        let dc = f.source.d(i - c_shift).scale(&s);
        let heights = [f.target.dim(i - 1), f.source.dim(i - 1 - c_shift)];
        let widths = [f.target.dim(i), f.source.dim(i - c_shift)];
        let blocks = vec![vec![Some(dd), Some(phi)], vec![None, Some(dc)]];
        diffs.push((i, Matrix::blocks(&ctx, &heights, &widths, &blocks)));
    }
    ChainComplex::new(&ctx, basis, diffs).expect("cone blocks have matching shapes")
}

/// The block map `[[1, -psi], [0, 1]]: C(from) -> C(to)`.
///
/// With `d psi + psi d = to - from` this is a chain isomorphism; the
/// inverse is the same construction for the reversed homotopy.
pub fn cone_iso<R: Coefficient>(h: &ChainHomotopy<R>) -> Result<ChainMap<R>, ChainError> {
    if !h.holds() {
        return Err(ChainError::HomotopyIdentityFails);
    }
    let src = mapping_cone(&h.from)?;
    let tgt = mapping_cone(&h.to)?;
    let ctx = src.context().clone();
    let c = &h.from.source;
    let d = &h.from.target;
    let mut mats = Vec::new();
    for i in src.degrees() {
        let heights = [d.dim(i), c.dim(i - 1)];
        let widths = heights;
        let blocks = vec![
            vec![Some(Matrix::identity(&ctx, d.dim(i))), Some(h.at(i - 1).neg())],
            vec![None, Some(Matrix::identity(&ctx, c.dim(i - 1)))],
        ];
        mats.push((i, Matrix::blocks(&ctx, &heights, &widths, &blocks)));
    }
    ChainMap::new(src, tgt, 0, MapRelation::Commute, mats)?.checked()
}
