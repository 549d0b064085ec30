use crate::chain::{mapping_cone, ChainComplex, ChainMap, GradedBasis, MapRelation};
use crate::matrix::{Coefficient, Matrix};

use super::CobordismError;

/// A level `N` with complex `D` splitting a complex into a lower part
/// `F'` and an upper part `F''`. `theta': D_i -> F'_i` commutes with the
/// differentials, `theta'': F''_i -> D_{i-1}` anticommutes, and the
/// optional attaching map `phi: F''_i -> F'_{i-1}` anticommutes.
#[derive(Clone, Debug, PartialEq)]
pub struct SplittingData<R: Coefficient> {
    pub d: ChainComplex<R>,
    pub fprime: ChainComplex<R>,
    pub fsecond: ChainComplex<R>,
    pub thetaprime: ChainMap<R>,
    pub thetasecond: ChainMap<R>,
    pub phi: Option<ChainMap<R>>,
}

/// The mapping cone of `phi` with its short exact sequence
/// `0 -> F' -> C(phi) -> F'' -> 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct AttachingCone<R: Coefficient> {
    pub complex: ChainComplex<R>,
    pub inclusion: ChainMap<R>,
    pub projection: ChainMap<R>,
}

/// The split complex `C_h` on `F'_i + D_{i-1} + D_i + F''_i`, the
/// inclusion `p_h` of the collar complex, and its cokernel.
#[derive(Clone, Debug, PartialEq)]
pub struct SplittingComplex<R: Coefficient> {
    pub complex: ChainComplex<R>,
    /// Collar complex on `D_{i-1} + D_i`, differential `[[-d_D, 0], [1, d_D]]`.
    pub collar: ChainComplex<R>,
    /// `p_h(x, y) = (-theta'(y), x, y, 0)`.
    pub p_h: ChainMap<R>,
    /// Cokernel of `p_h` on `F'_i + F''_i`.
    pub coker: ChainComplex<R>,
    /// `(a, x, y, w) -> (a + theta'(y), w)`.
    pub quotient: ChainMap<R>,
    /// Mapping cone of `theta' theta''`.
    pub cone: ChainComplex<R>,
}

impl<R: Coefficient> SplittingComplex<R> {
    /// Entrywise equality of the cokernel and `C(theta' theta'')`.
    pub fn coker_matches_cone(&self) -> bool {
        self.coker == self.cone
    }
}

fn check_map<R: Coefficient>(
    m: &ChainMap<R>,
    source: &ChainComplex<R>,
    target: &ChainComplex<R>,
    shift: i32,
    relation: MapRelation,
    name: &str,
) -> Result<(), CobordismError> {
    if m.source.basis() != source.basis()
        || m.target.basis() != target.basis()
        || m.shift != shift
        || m.relation != relation
    {
        return Err(CobordismError::ShapeMismatch(format!(
            "{name} must map with shift {shift} and relation {relation:?} between the declared complexes"
        )));
    }
    let defects = m.defects();
    if !defects.is_empty() {
        return Err(CobordismError::NotAChainMap { name: name.into(), defects });
    }
    Ok(())
}

/// Prism copy of `D` in degree `i + 1`, ids suffixed with `xI`.
fn prism_basis(d: &GradedBasis) -> GradedBasis {
    d.shifted(1).relabeled(|id| format!("{id}xI"))
}

impl<R: Coefficient> SplittingData<R> {
    pub fn new(
        d: ChainComplex<R>,
        fprime: ChainComplex<R>,
        fsecond: ChainComplex<R>,
        thetaprime: ChainMap<R>,
        thetasecond: ChainMap<R>,
        phi: Option<ChainMap<R>>,
    ) -> Result<Self, CobordismError> {
        check_map(&thetaprime, &d, &fprime, 0, MapRelation::Commute, "thetaprime")?;
        check_map(&thetasecond, &fsecond, &d, -1, MapRelation::Anticommute, "thetasecond")?;
        if let Some(phi) = &phi {
            check_map(phi, &fsecond, &fprime, -1, MapRelation::Anticommute, "phi")?;
        }
        Ok(SplittingData { d, fprime, fsecond, thetaprime, thetasecond, phi })
    }

    /// Builds from per-degree matrices (missing degrees are zero).
    pub fn from_matrices(
        d: ChainComplex<R>,
        fprime: ChainComplex<R>,
        fsecond: ChainComplex<R>,
        thetaprime: Vec<(i32, Matrix<R>)>,
        thetasecond: Vec<(i32, Matrix<R>)>,
        phi: Option<Vec<(i32, Matrix<R>)>>,
    ) -> Result<Self, CobordismError> {
        let tp = ChainMap::new(d.clone(), fprime.clone(), 0, MapRelation::Commute, thetaprime)?;
        let ts = ChainMap::new(fsecond.clone(), d.clone(), -1, MapRelation::Anticommute, thetasecond)?;
        let phi = phi
            .map(|m| ChainMap::new(fsecond.clone(), fprime.clone(), -1, MapRelation::Anticommute, m))
            .transpose()?;
        Self::new(d, fprime, fsecond, tp, ts, phi)
    }

    /// `theta' theta'': F''_i -> F'_{i-1}`.
    pub fn composite(&self) -> ChainMap<R> {
        self.thetaprime.compose(&self.thetasecond).expect("validated splitting maps compose")
    }

    /// `C(phi)` together with the inclusion of `F'` and projection to `F''`.
    pub fn attaching_cone(&self) -> Result<AttachingCone<R>, CobordismError> {
        let phi = self.phi.as_ref().ok_or(CobordismError::MissingAttachingMap)?;
        cone_with_sequence(phi)
    }

    pub fn splitting_complex(&self) -> Result<SplittingComplex<R>, CobordismError> {
        let ctx = self.d.context().clone();
        let (fp, d, fs) = (&self.fprime, &self.d, &self.fsecond);
        let tp = |i: i32| self.thetaprime.at(i);
        let ts = |i: i32| self.thetasecond.at(i);
        let one = |n: usize| Matrix::identity(&ctx, n);

        let prisms = prism_basis(d.basis());
        let (basis, _) =
            GradedBasis::direct_sum(&[fp.basis().clone(), prisms.clone(), d.basis().clone(), fs.basis().clone()]);
        let dims = |i: i32| [fp.dim(i), d.dim(i - 1), d.dim(i), fs.dim(i)];
        let diffs = basis
            .degrees()
            .map(|i| {
                let blocks = vec![
                    vec![Some(fp.d(i)), Some(tp(i - 1).neg()), None, None],
                    vec![None, Some(d.d(i - 1).neg()), None, None],
                    vec![None, Some(one(d.dim(i - 1))), Some(d.d(i)), Some(ts(i))],
                    vec![None, None, None, Some(fs.d(i))],
                ];
                (i, Matrix::blocks(&ctx, &dims(i - 1), &dims(i), &blocks))
            })
            .collect::<Vec<_>>();
        let complex = ChainComplex::new(&ctx, basis, diffs)?;

        let (collar_basis, _) = GradedBasis::direct_sum(&[prisms, d.basis().clone()]);
        let collar_dims = |i: i32| [d.dim(i - 1), d.dim(i)];
        let collar_diffs = collar_basis
            .degrees()
            .map(|i| {
                let blocks = vec![
                    vec![Some(d.d(i - 1).neg()), None],
                    vec![Some(one(d.dim(i - 1))), Some(d.d(i))],
                ];
                (i, Matrix::blocks(&ctx, &collar_dims(i - 1), &collar_dims(i), &blocks))
            })
            .collect::<Vec<_>>();
        let collar = ChainComplex::new(&ctx, collar_basis, collar_diffs)?;

        let p_mats = collar
            .degrees()
            .map(|i| {
                let blocks = vec![
                    vec![None, Some(tp(i).neg())],
                    vec![Some(one(d.dim(i - 1))), None],
                    vec![None, Some(one(d.dim(i)))],
                    vec![None, None],
                ];
                (i, Matrix::blocks(&ctx, &dims(i), &collar_dims(i), &blocks))
            })
            .collect::<Vec<_>>();
        let p_h = ChainMap::new(collar.clone(), complex.clone(), 0, MapRelation::Commute, p_mats)?;

        // cokernel: the quotient map q and the section s of the F' + F'' part
        let coker_dims = |i: i32| [fp.dim(i), fs.dim(i)];
        let q = |i: i32| {
            let blocks = vec![
                vec![Some(one(fp.dim(i))), None, Some(tp(i)), None],
                vec![None, None, None, Some(one(fs.dim(i)))],
            ];
            Matrix::blocks(&ctx, &coker_dims(i), &dims(i), &blocks)
        };
        let s = |i: i32| {
            let blocks = vec![
                vec![Some(one(fp.dim(i))), None],
                vec![None, None],
                vec![None, None],
                vec![None, Some(one(fs.dim(i)))],
            ];
            Matrix::blocks(&ctx, &dims(i), &coker_dims(i), &blocks)
        };
        let (coker_basis, _) = GradedBasis::direct_sum(&[fp.basis().clone(), fs.basis().clone()]);
        let coker_diffs = coker_basis
            .degrees()
            .map(|i| (i, q(i - 1).mul(&complex.d(i)).mul(&s(i))))
            .collect::<Vec<_>>();
        let coker = ChainComplex::new(&ctx, coker_basis, coker_diffs)?;
        let quotient = ChainMap::new(
            complex.clone(),
            coker.clone(),
            0,
            MapRelation::Commute,
            complex.degrees().map(|i| (i, q(i))).collect::<Vec<_>>(),
        )?;

        // exactness witnesses: p_h and q are chain maps, q p_h = 0, q s = 1,
        // and p_h has the left inverse (a, x, y, w) -> (x, y)
        let mut failures = Vec::new();
        for (name, defects) in [("p_h", p_h.defects()), ("quotient", quotient.defects())] {
            if !defects.is_empty() {
                return Err(CobordismError::NotAChainMap { name: name.into(), defects });
            }
        }
        for i in complex.degrees() {
            if !q(i).mul(&p_h.at(i)).is_zero() {
                failures.push(format!("q p_h != 0 in degree {i}"));
            }
            if !q(i).mul(&s(i)).is_identity() {
                failures.push(format!("q s != 1 in degree {i}"));
            }
            let r = Matrix::blocks(
                &ctx,
                &collar_dims(i),
                &dims(i),
                &[vec![None, Some(one(d.dim(i - 1))), None, None], vec![None, None, Some(one(d.dim(i))), None]],
            );
            if !r.mul(&p_h.at(i)).is_identity() {
                failures.push(format!("p_h is not split injective in degree {i}"));
            }
        }
        if !failures.is_empty() {
            return Err(CobordismError::ShapeMismatch(failures.join("; ")));
        }

        let cone = mapping_cone(&self.composite())?;
        Ok(SplittingComplex { complex, collar, p_h, coker, quotient, cone })
    }
}

fn cone_with_sequence<R: Coefficient>(phi: &ChainMap<R>) -> Result<AttachingCone<R>, CobordismError> {
    let complex = mapping_cone(phi)?;
    let ctx = complex.context().clone();
    let (fp, fs) = (&phi.target, &phi.source);
    let c_shift = 1 + phi.shift;
    let inc = complex
        .degrees()
        .map(|i| {
            let m = Matrix::blocks(&ctx, &[fp.dim(i), fs.dim(i - c_shift)], &[fp.dim(i)], &[
                vec![Some(Matrix::identity(&ctx, fp.dim(i)))],
                vec![None],
            ]);
            (i, m)
        })
        .collect::<Vec<_>>();
    let inclusion = ChainMap::new(fp.clone(), complex.clone(), 0, MapRelation::Commute, inc.into_iter().filter(|(i, _)| fp.degrees().contains(i)))?;
    let shifted = ChainComplex::new(
        &ctx,
        fs.basis().shifted(c_shift),
        fs.degrees().map(|i| (i + c_shift, fs.d(i).scale(&R::from_int(&ctx, phi.relation.sign())))).collect::<Vec<_>>(),
    )?;
    let proj = complex
        .degrees()
        .map(|i| {
            let m = Matrix::blocks(&ctx, &[fs.dim(i - c_shift)], &[fp.dim(i), fs.dim(i - c_shift)], &[vec![
                None,
                Some(Matrix::identity(&ctx, fs.dim(i - c_shift))),
            ]]);
            (i, m)
        })
        .collect::<Vec<_>>();
    let projection = ChainMap::new(complex.clone(), shifted, 0, MapRelation::Commute, proj)?;
    for (name, m) in [("inclusion", &inclusion), ("projection", &projection)] {
        let defects = m.defects();
        if !defects.is_empty() {
            return Err(CobordismError::NotAChainMap { name: name.into(), defects });
        }
    }
    Ok(AttachingCone { complex, inclusion, projection })
}
