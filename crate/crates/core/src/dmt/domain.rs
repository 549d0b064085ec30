use std::collections::{BTreeMap, BTreeSet};

use crate::assembly::AlgebraicCobordism;
use crate::chain::{ChainComplex, ChainMap, GradedBasis, Label, MapRelation};
use crate::matrix::{Matrix, NovikovContext};
use crate::rings::{GroupRingElement, NovikovElement, RingContext};

use super::blocks::{block_complex, block_map, entries, stray_entries, Block};
use super::field::{checked_roles, Role};
use serde::{Deserialize, Serialize};

use super::{level_id, morse_complex, CellComplex, CellComplexDoc, Collar, DmtError, VectorField};

/// A fundamental domain of an infinite cyclic cover: `P` with two
/// interfaces and an identification `rho` of the right one with the left
/// one. Copy `z^j` of `P` sits to the left of copy `z^{j-1}`, its right
/// interface glued to their left interface. The field must leave the left
/// interface unpaired.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FundamentalDomain {
    pub p: CellComplex,
    /// `(right cell, left cell)` pairs.
    pub rho: Vec<(String, String)>,
    pub field: VectorField,
    /// A splitting collar occupying `N x [0, 3]` at the left interface.
    pub collar: Option<Collar>,
}

fn copy_id(id: &str, j: usize) -> String {
    format!("{id}#{j}")
}

impl FundamentalDomain {
    pub fn new(p: CellComplex, rho: Vec<(String, String)>, field: VectorField, collar: Option<Collar>) -> Result<Self, DmtError> {
        let right: Vec<String> = rho.iter().map(|(r, _)| r.clone()).collect();
        let left: Vec<String> = rho.iter().map(|(_, l)| l.clone()).collect();
        if !p.is_subcomplex(&right) || !p.is_subcomplex(&left) {
            return Err(DmtError::GluingMismatch("interfaces must be subcomplexes".into()));
        }
        let l_set: BTreeSet<&String> = left.iter().collect();
        if right.iter().any(|r| l_set.contains(r)) || l_set.len() != left.len() {
            return Err(DmtError::GluingMismatch("interfaces must be disjoint and rho injective".into()));
        }
        if let Some((a, b)) = field.pairs.iter().find(|(a, b)| l_set.contains(a) || l_set.contains(b)) {
            return Err(DmtError::CollarPattern(format!("left interface cell paired in ({a}, {b})")));
        }
        let map: BTreeMap<String, String> = rho.iter().map(|(r, l)| (l.clone(), r.clone())).collect();
        // identifying the interfaces checks that rho respects boundaries
        p.identify(&map)?;
        checked_roles(&p, &field)?;
        Ok(FundamentalDomain { p, rho, field, collar })
    }

    /// `N x [0, m]` with `sigma@m` glued to `sigma@0`.
    pub fn product(n: &CellComplex, m: usize, field: VectorField, collar: bool) -> Result<Self, DmtError> {
        let p = n.product_interval(m);
        let rho = n.cells().iter().map(|c| (level_id(&c.id, m), level_id(&c.id, 0))).collect();
        Self::new(p, rho, field, collar.then(|| Collar::new("", n.clone())))
    }

    /// The same domain with the splitting collar built from `v_n`.
    pub fn split(&self, v_n: &VectorField) -> Result<Self, DmtError> {
        let collar = self.collar.as_ref().ok_or_else(|| DmtError::CollarPattern("domain has no collar".into()))?;
        let field = super::insert_splitting_collar(&self.p, &self.field, collar, v_n)?;
        Self::new(self.p.clone(), self.rho.clone(), field, self.collar.clone())
    }

    pub fn left(&self) -> Vec<String> {
        self.rho.iter().map(|(_, l)| l.clone()).collect()
    }

    /// Copies `0..=l` glued along the interfaces; the left interface of the
    /// last copy is deleted. Ids get the suffix `#j`.
    pub fn unroll(&self, l: usize) -> Result<(CellComplex, VectorField), DmtError> {
        let copies: Vec<CellComplex> = (0..=l).map(|j| self.p.relabeled(|id| copy_id(id, j))).collect::<Result<_, _>>()?;
        let whole = CellComplex::union(&copies.iter().collect::<Vec<_>>())?;
        let mut map = BTreeMap::new();
        for j in 0..l {
            for (r, lc) in &self.rho {
                map.insert(copy_id(lc, j), copy_id(r, j + 1));
            }
        }
        let glued = whole.identify(&map)?;
        let last: Vec<String> = self.left().iter().map(|lc| copy_id(lc, l)).collect();
        let k = glued.quotient(&last)?;
        let v = VectorField::new(
            (0..=l).flat_map(|j| self.field.pairs.iter().map(move |(a, b)| (copy_id(a, j), copy_id(b, j)))),
        );
        checked_roles(&k, &v)?;
        Ok((k, v))
    }

    /// `P` with its interfaces identified and the same field, if acyclic.
    pub fn closed(&self) -> Result<(CellComplex, VectorField), DmtError> {
        let map: BTreeMap<String, String> = self.rho.iter().map(|(r, l)| (l.clone(), r.clone())).collect();
        let k = self.p.identify(&map)?;
        checked_roles(&k, &self.field)?;
        Ok((k, self.field.clone()))
    }

    /// Critical cells of `P` in graded order. The left interface belongs
    /// to the neighbouring copy and is skipped.
    pub fn critical(&self) -> Vec<Label> {
        let roles = checked_roles(&self.p, &self.field).expect("validated");
        let left: BTreeSet<String> = self.left().into_iter().collect();
        self.p
            .graded_order()
            .into_iter()
            .filter(|&c| roles[c] == Role::Critical && !left.contains(&self.p.cell(c).id))
            .map(|c| Label::new(self.p.cell(c).id.clone(), self.p.dim_of(c) as i32))
            .collect()
    }

    /// The Morse complex of the cover over `Z((z))`, modulo `z^(l+1)`: the
    /// coefficient of `z^j` counts flow from copy 0 to copy `j`.
    pub fn z_graded_complex(&self, l: usize) -> Result<ChainComplex<NovikovElement>, DmtError> {
        let (k, v) = self.unroll(l)?;
        let e = entries(&morse_complex(&k, &v)?);
        let precision = Some(l as i64 + 1);
        let ctx = NovikovContext::integral(precision);
        let basis = GradedBasis::new(self.critical())?;
        let mut coeffs: BTreeMap<(String, String), BTreeMap<i64, i64>> = BTreeMap::new();
        for ((c, r), a) in &e {
            let Some(tau) = c.strip_suffix("#0") else { continue };
            let (sigma, j) = r.rsplit_once('#').expect("copy suffix");
            coeffs.entry((tau.to_string(), sigma.to_string())).or_default().insert(j.parse().expect("copy index"), *a);
        }
        let diffs: Vec<_> = basis
            .degrees()
            .map(|i| {
                let (rows, cols) = (basis.labels(i - 1), basis.labels(i));
                let m = Matrix::from_fn(&ctx, rows.len(), cols.len(), |r, c| {
                    let poly = coeffs.get(&(cols[c].id.clone(), rows[r].id.clone()));
                    NovikovElement::from_coeffs(
                        &ctx.ring,
                        poly.into_iter().flatten().map(|(j, a)| (*j, GroupRingElement::from_int(&ctx.ring, *a))),
                        precision,
                    )
                });
                (i, m)
            })
            .collect();
        Ok(ChainComplex::new(&ctx, basis, diffs)?)
    }

    /// Reads `(F, D, theta, theta', psi)` off two unrolled copies of a
    /// domain with a splitting collar.
    pub fn extract_gamma(&self) -> Result<AlgebraicCobordism, DmtError> {
        let collar = self.collar.as_ref().ok_or_else(|| DmtError::CollarPattern("domain has no splitting collar".into()))?;
        let (k, v) = self.unroll(1)?;
        let e = entries(&morse_complex(&k, &v)?);
        let mut blocks: [[Block; 3]; 2] = Default::default();
        const BAND: usize = 0;
        const LEVEL: usize = 1;
        const INTERIOR: usize = 2;
        for crit in self.critical() {
            let (kind, label, deg) = if let Some(s) = collar.n.cells().iter().find(|s| collar.level(&s.id, 2) == crit.id) {
                (LEVEL, s.id.clone(), crit.degree)
            } else if let Some(s) = collar.n.cells().iter().find(|s| collar.prism(&s.id, 2) == crit.id) {
                (BAND, s.id.clone(), crit.degree - 1)
            } else if collar.cells().contains(&crit.id) {
                return Err(DmtError::CollarPattern(format!("unexpected critical collar cell `{}`", crit.id)));
            } else {
                (INTERIOR, crit.id.clone(), crit.degree)
            };
            for (j, copy) in blocks.iter_mut().enumerate() {
                copy[kind].push(label.clone(), copy_id(&crit.id, j), deg);
            }
        }
        let cells = |j: usize, kind: usize| blocks[j][kind].cells().collect::<Vec<_>>();
        let mut stray = Vec::new();
        stray.extend(stray_entries(&e, &cells(0, LEVEL), &[cells(0, BAND), cells(0, INTERIOR), cells(1, BAND), cells(1, LEVEL), cells(1, INTERIOR)].concat()));
        stray.extend(stray_entries(&e, &cells(0, INTERIOR), &[cells(0, BAND), cells(1, BAND), cells(1, LEVEL), cells(1, INTERIOR)].concat()));
        stray.extend(stray_entries(&e, &cells(0, BAND), &[cells(0, INTERIOR), cells(1, BAND)].concat()));
        let [b0, b1] = &blocks;
        let dc = block_complex(&e, &b0[LEVEL], 1);
        let band = block_complex(&e, &b0[BAND], -1);
        if band.basis() != dc.basis() || (dc.degrees()).any(|i| band.d(i) != dc.d(i)) {
            stray.push("band differential is not -d_D".into());
        }
        let unit = block_map(&e, &b0[BAND], &dc, &b0[LEVEL], &dc, 0, MapRelation::Commute, 1);
        if !unit.is_identity() {
            stray.push("band to level map is not the identity".into());
        }
        if !stray.is_empty() {
            return Err(DmtError::CollarPattern(stray.join("; ")));
        }
        let fc = block_complex(&e, &b0[INTERIOR], 1);
        let theta = block_map(&e, &b0[INTERIOR], &fc, &b0[LEVEL], &dc, -1, MapRelation::Anticommute, 1);
        let thetaprime = block_map(&e, &b0[BAND], &dc, &b1[INTERIOR], &fc, 0, MapRelation::Commute, -1);
        let psi = block_map(&e, &b0[BAND], &dc, &b1[LEVEL], &dc, 0, MapRelation::Commute, -1);
        let ctx = NovikovContext::new(RingContext::integers(), None);
        Ok(AlgebraicCobordism::new(
            to_novikov(&fc, &ctx),
            to_novikov(&dc, &ctx),
            map_to_novikov(&theta, &ctx),
            map_to_novikov(&thetaprime, &ctx),
            map_to_novikov(&psi, &ctx),
        )?)
    }
}

pub fn to_novikov(c: &ChainComplex<i64>, ctx: &NovikovContext) -> ChainComplex<NovikovElement> {
    let diffs: Vec<_> = c.degrees().map(|i| (i, Matrix::from_integer(ctx, &c.d(i)))).collect();
    ChainComplex::new(ctx, c.basis().clone(), diffs).expect("same shapes")
}

pub fn map_to_novikov(f: &ChainMap<i64>, ctx: &NovikovContext) -> ChainMap<NovikovElement> {
    ChainMap::new(
        to_novikov(&f.source, ctx),
        to_novikov(&f.target, ctx),
        f.shift,
        f.relation,
        f.matrices().map(|(i, m)| (i, Matrix::from_integer(ctx, m))),
    )
    .expect("same shapes")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CollarDoc {
    pub tag: String,
    pub n: CellComplexDoc,
}

/// `P`, the interface identification as `(right, left)` pairs, the field,
/// and the splitting collar when one is installed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FundamentalDomainDoc {
    pub p: CellComplexDoc,
    pub rho: Vec<(String, String)>,
    pub field: VectorField,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub collar: Option<CollarDoc>,
}

impl FundamentalDomain {
    pub fn to_doc(&self) -> FundamentalDomainDoc {
        FundamentalDomainDoc {
            p: self.p.to_doc(),
            rho: self.rho.clone(),
            field: self.field.clone(),
            collar: self.collar.as_ref().map(|c| CollarDoc { tag: c.tag.clone(), n: c.n.to_doc() }),
        }
    }

    pub fn from_doc(doc: &FundamentalDomainDoc) -> Result<Self, DmtError> {
        let collar = match &doc.collar {
            Some(c) => Some(Collar::new(c.tag.clone(), CellComplex::from_doc(&c.n)?)),
            None => None,
        };
        Self::new(CellComplex::from_doc(&doc.p)?, doc.rho.clone(), doc.field.clone(), collar)
    }
}
