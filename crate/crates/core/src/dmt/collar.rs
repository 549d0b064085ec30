use std::collections::{BTreeMap, BTreeSet};

use num_rational::Rational64;

use crate::chain::{ChainComplex, ChainMap, MapRelation, ValueFiltration};
use crate::cobordism::{triangularity_check, MorseTriple, SplittingData};

use super::blocks::{block_complex, block_map, entries, stray_entries, Block, Entries};
use super::field::{checked_roles, morse_heights, Role};
use super::{level_id, morse_complex, prism_id, CellComplex, DmtError, VectorField};

/// A collar `N x [0, 3]` embedded in a larger complex; its cells are the
/// product cells of `n` with ids prefixed by `tag`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Collar {
    pub tag: String,
    pub n: CellComplex,
}

pub const COLLAR_LENGTH: usize = 3;

impl Collar {
    pub fn new(tag: impl Into<String>, n: CellComplex) -> Self {
        Collar { tag: tag.into(), n }
    }

    pub fn level(&self, sigma: &str, t: usize) -> String {
        format!("{}{}", self.tag, level_id(sigma, t))
    }

    pub fn prism(&self, sigma: &str, t: usize) -> String {
        format!("{}{}", self.tag, prism_id(sigma, t))
    }

    /// `N x [0, 3]` with tagged ids.
    pub fn complex(&self) -> CellComplex {
        self.n.product_interval(COLLAR_LENGTH).relabeled(|id| format!("{}{id}", self.tag)).expect("tagging keeps ids unique")
    }

    /// `sigma@t -> sigma@(t-1):t` for every cell and every `t` in `levels`.
    pub fn transverse(&self, levels: impl IntoIterator<Item = usize> + Clone) -> VectorField {
        let mut v = VectorField::empty();
        for t in levels {
            for c in self.n.cells() {
                v.push(self.level(&c.id, t), self.prism(&c.id, t));
            }
        }
        v
    }

    /// All collar cells, including level 0.
    pub fn cells(&self) -> BTreeSet<String> {
        self.complex().cells().iter().map(|c| c.id.clone()).collect()
    }

    /// Level 2 copy of `v_n` together with the band pairs on `[1, 2]`.
    pub fn split_pairs(&self, v_n: &VectorField) -> VectorField {
        let mut v = VectorField::empty();
        for (s, t) in &v_n.pairs {
            v.push(self.level(s, 2), self.level(t, 2));
        }
        for (s, t) in &v_n.pairs {
            v.push(self.prism(s, 2), self.prism(t, 2));
        }
        v
    }
}

/// Replaces the transverse pattern on level 2 of `collar` by `v_n` on the
/// level and on the band `N x [1, 2]`. Levels 1 and 3 stay transverse.
pub fn insert_splitting_collar(
    m: &CellComplex,
    v: &VectorField,
    collar: &Collar,
    v_n: &VectorField,
) -> Result<VectorField, DmtError> {
    for id in collar.cells() {
        if !m.contains(&id) {
            return Err(DmtError::CollarPattern(format!("collar cell `{id}` is missing")));
        }
    }
    let have: BTreeSet<(String, String)> = v.pairs.iter().cloned().collect();
    let level2 = collar.transverse([2]);
    for pair in collar.transverse(1..=COLLAR_LENGTH).pairs {
        if !have.contains(&pair) {
            return Err(DmtError::CollarPattern(format!("{} is not paired into {}", pair.0, pair.1)));
        }
    }
    let report = super::validate_field(&collar.n, v_n);
    if !report.is_valid() {
        return Err(DmtError::InvalidField(report.violations));
    }
    let drop: BTreeSet<(String, String)> = level2.pairs.into_iter().collect();
    let mut out = VectorField::new(v.pairs.iter().filter(|p| !drop.contains(*p)).cloned());
    out.pairs.extend(collar.split_pairs(v_n).pairs);
    checked_roles(m, &out)?;
    Ok(out)
}

/// `L` and `R` glued to the two ends of a collar. `L` and `R` contain the
/// cells of `N` under their original ids; everything else is prefixed by
/// `L.` and `R.`.
#[derive(Clone, Debug)]
pub struct SplitManifold {
    pub complex: CellComplex,
    pub collar: Collar,
    /// The field with a transverse collar.
    pub unsplit: VectorField,
}

/// Blocks of a split manifold, read off its Morse complexes.
#[derive(Clone, Debug)]
pub struct SplitReading {
    pub field: VectorField,
    pub data: SplittingData<i64>,
    pub split_morse: ChainComplex<i64>,
    pub unsplit_morse: ChainComplex<i64>,
}

fn rename_side(k: &CellComplex, n: &CellComplex, prefix: &str) -> Result<CellComplex, DmtError> {
    k.relabeled(|id| format!("{prefix}{id}"))
        .and_then(|c| {
            for nc in n.cells() {
                if !c.contains(&format!("{prefix}{}", nc.id)) {
                    return Err(DmtError::GluingMismatch(format!("`{}` is missing from the {prefix} side", nc.id)));
                }
            }
            Ok(c)
        })
}

impl SplitManifold {
    /// `v_r` must leave the cells of `N` in `R` unpaired: they are paired
    /// into the collar.
    pub fn glue(
        l: &CellComplex,
        v_l: &VectorField,
        n: &CellComplex,
        r: &CellComplex,
        v_r: &VectorField,
    ) -> Result<Self, DmtError> {
        let collar = Collar::new("c.", n.clone());
        let lp = rename_side(l, n, "L.")?;
        let rp = rename_side(r, n, "R.")?;
        let whole = CellComplex::union(&[&lp, &collar.complex(), &rp])?;
        let mut map = BTreeMap::new();
        for c in n.cells() {
            map.insert(format!("L.{}", c.id), collar.level(&c.id, 0));
            map.insert(format!("R.{}", c.id), collar.level(&c.id, COLLAR_LENGTH));
        }
        let complex = whole.identify(&map)?;
        let rename = |id: &str| {
            let key = id.to_string();
            map.get(&key).cloned().unwrap_or(key)
        };
        let n_ids: BTreeSet<&str> = n.cells().iter().map(|c| c.id.as_str()).collect();
        if let Some((a, b)) = v_r.pairs.iter().find(|(a, b)| n_ids.contains(a.as_str()) || n_ids.contains(b.as_str())) {
            return Err(DmtError::CollarPattern(format!("R pairs boundary cells ({a}, {b})")));
        }
        let mut unsplit = VectorField::new(v_l.pairs.iter().map(|(a, b)| (rename(&format!("L.{a}")), rename(&format!("L.{b}")))));
        unsplit.pairs.extend(v_r.pairs.iter().map(|(a, b)| (format!("R.{a}"), format!("R.{b}"))));
        unsplit.pairs.extend(collar.transverse(1..=COLLAR_LENGTH).pairs);
        checked_roles(&complex, &unsplit)?;
        Ok(SplitManifold { complex, collar, unsplit })
    }

    /// Inserts the splitting collar for `v_n` and reads `F'`, `F''`, `D`,
    /// `theta'`, `theta''` and the attaching map of the unsplit field.
    pub fn read(&self, v_n: &VectorField) -> Result<SplitReading, DmtError> {
        let field = insert_splitting_collar(&self.complex, &self.unsplit, &self.collar, v_n)?;
        let split_morse = morse_complex(&self.complex, &field)?;
        let unsplit_morse = morse_complex(&self.complex, &self.unsplit)?;
        let (split_e, unsplit_e) = (entries(&split_morse), entries(&unsplit_morse));
        let roles = checked_roles(&self.complex, &field)?;

        let c = &self.collar;
        let (mut fp, mut fs, mut d, mut band) = (Block::default(), Block::default(), Block::default(), Block::default());
        for (k, cell) in self.complex.cells().iter().enumerate() {
            if roles[k] != Role::Critical {
                continue;
            }
            let id = &cell.id;
            let deg = cell.dim as i32;
            if id.starts_with("L.") || id.starts_with(c.tag.as_str()) && id.ends_with("@0") {
                fp.push(id.clone(), id.clone(), deg);
            } else if id.starts_with("R.") {
                fs.push(id.clone(), id.clone(), deg);
            } else if let Some(s) = c.n.cells().iter().find(|s| c.level(&s.id, 2) == *id) {
                d.push(s.id.clone(), id.clone(), deg);
            } else if let Some(s) = c.n.cells().iter().find(|s| c.prism(&s.id, 2) == *id) {
                band.push(s.id.clone(), id.clone(), deg - 1);
            } else {
                return Err(DmtError::CollarPattern(format!("unexpected critical cell `{id}`")));
            }
        }
        check_pattern(&split_e, &fp, &fs, &d, &band)?;
        let dc = block_complex(&split_e, &d, 1);
        let fpc = block_complex(&split_e, &fp, 1);
        let fsc = block_complex(&split_e, &fs, 1);
        let tp = block_map(&split_e, &band, &dc, &fp, &fpc, 0, MapRelation::Commute, -1);
        let ts = block_map(&split_e, &fs, &fsc, &d, &dc, -1, MapRelation::Anticommute, 1);
        let phi = block_map(&unsplit_e, &fs, &fsc, &fp, &fpc, -1, MapRelation::Anticommute, 1);
        let data = SplittingData::new(dc, fpc, fsc, tp, ts, Some(phi))?;
        Ok(SplitReading { field, data, split_morse, unsplit_morse })
    }
}

/// Entries that the splitting block form forces to vanish, plus the
/// identity block from the band to level 2 and `-d_D` on the band.
fn check_pattern(e: &Entries, fp: &Block, fs: &Block, d: &Block, band: &Block) -> Result<(), DmtError> {
    let fpv: Vec<&str> = fp.cells().collect();
    let fsv: Vec<&str> = fs.cells().collect();
    let dv: Vec<&str> = d.cells().collect();
    let bv: Vec<&str> = band.cells().collect();
    let mut stray = Vec::new();
    stray.extend(stray_entries(e, &fpv, &[&fsv[..], &dv, &bv].concat()));
    stray.extend(stray_entries(e, &dv, &[&fpv[..], &fsv, &bv].concat()));
    stray.extend(stray_entries(e, &fsv, &bv));
    stray.extend(stray_entries(e, &fsv, &fpv));
    stray.extend(stray_entries(e, &bv, &fsv));
    for (l, cell, _) in &band.members {
        for (l2, cell2, _) in &d.members {
            let want = i64::from(l == l2);
            let got = e.get(&(cell.clone(), cell2.clone())).copied().unwrap_or(0);
            if got != want {
                stray.push(format!("{cell} -> {cell2}: {got}, expected {want}"));
            }
        }
        for (l2, cell2, _) in &band.members {
            let got = e.get(&(cell.clone(), cell2.clone())).copied().unwrap_or(0);
            let want = -e
                .get(&(d.members.iter().find(|m| &m.0 == l).unwrap().1.clone(), d.members.iter().find(|m| &m.0 == l2).unwrap().1.clone()))
                .copied()
                .unwrap_or(0);
            if got != want {
                stray.push(format!("{cell} -> {cell2}: {got}, expected {want}"));
            }
        }
    }
    if stray.is_empty() {
        Ok(())
    } else {
        Err(DmtError::CollarPattern(stray.join("; ")))
    }
}

/// The cobordism `N x [0, 1]` relative to `N x {0}`, with `v_level` on the
/// remaining end and the band pairs of `v_band` on the prisms. The end is
/// `D`, the prisms carry `D'` and `F` is empty.
pub fn collar_cobordism(n: &CellComplex, v_level: &VectorField, v_band: &VectorField) -> Result<(CellComplex, VectorField), DmtError> {
    let full = n.product_interval(1);
    let bottom: Vec<String> = n.cells().iter().map(|c| level_id(&c.id, 0)).collect();
    let w = full.quotient(&bottom)?;
    let mut v = VectorField::new(v_level.pairs.iter().map(|(a, b)| (level_id(a, 1), level_id(b, 1))));
    v.pairs.extend(v_band.pairs.iter().map(|(a, b)| (prism_id(a, 1), prism_id(b, 1))));
    checked_roles(&w, &v)?;
    Ok((w, v))
}

/// Reads the triple `(D, F, D')` of a collar-shaped cobordism `N x [0, m]`
/// relative to its left end: `D` is the critical part of the right end,
/// `D'` the critical prisms on `[0, 1]` (one degree down) and `F` the rest.
pub fn cobordism_triple(w: &CellComplex, v: &VectorField, n: &CellComplex, m: usize) -> Result<MorseTriple<i64>, DmtError> {
    let morse = morse_complex(w, v)?;
    let e = entries(&morse);
    let (mut d, mut f, mut dp) = (Block::default(), Block::default(), Block::default());
    for l in morse.basis().all_labels() {
        if let Some(s) = n.cells().iter().find(|s| level_id(&s.id, m) == l.id) {
            d.push(s.id.clone(), l.id.clone(), l.degree);
        } else if let Some(s) = n.cells().iter().find(|s| prism_id(&s.id, 1) == l.id) {
            dp.push(s.id.clone(), l.id.clone(), l.degree - 1);
        } else {
            f.push(l.id.clone(), l.id.clone(), l.degree);
        }
    }
    let dv: Vec<&str> = d.cells().collect();
    let fv: Vec<&str> = f.cells().collect();
    let pv: Vec<&str> = dp.cells().collect();
    let mut stray = stray_entries(&e, &dv, &[&fv[..], &pv].concat());
    stray.extend(stray_entries(&e, &fv, &pv));
    if !stray.is_empty() {
        return Err(DmtError::CollarPattern(stray.join("; ")));
    }
    let dc = block_complex(&e, &d, 1);
    let fc = block_complex(&e, &f, 1);
    let dpc = block_complex(&e, &dp, -1);
    let theta = block_map(&e, &f, &fc, &d, &dc, -1, MapRelation::Anticommute, 1);
    let tp = block_map(&e, &dp, &dpc, &f, &fc, 0, MapRelation::Commute, -1);
    let psi = block_map(&e, &dp, &dpc, &d, &dc, 0, MapRelation::Commute, -1);
    Ok(MorseTriple::new(dc, fc, dpc, theta, tp, psi)?)
}

/// The continuation map from the Morse complex of `from` to that of `to`,
/// read off the collar `N x [0, 1]` carrying `from` on the band and `to` on
/// the right end.
pub fn continuation(n: &CellComplex, from: &VectorField, to: &VectorField) -> Result<ChainMap<i64>, DmtError> {
    let (w, v) = collar_cobordism(n, to, from)?;
    Ok(cobordism_triple(&w, &v, n, 1)?.continuation_map()?)
}

/// The composite `Crit(v) -> Crit(perturbed) -> Crit(v)` of the two collar
/// continuations.
pub fn collar_composite(n: &CellComplex, v: &VectorField, perturbed: &VectorField) -> Result<ChainMap<i64>, DmtError> {
    let there = continuation(n, v, perturbed)?;
    let back = continuation(n, perturbed, v)?;
    Ok(back.compose(&there)?)
}

/// Whether every degree of [`collar_composite`] is unitriangular up to
/// sign when critical cells are ordered by the heights of `v`.
pub fn collar_composite_is_triangular(n: &CellComplex, v: &VectorField, perturbed: &VectorField) -> Result<bool, DmtError> {
    let c = collar_composite(n, v, perturbed)?;
    let h = morse_heights(n, v)?;
    let values = ValueFiltration::new(
        n.cells().iter().zip(&h).map(|(c, &x)| (c.id.clone(), Rational64::from_integer(x))),
    );
    Ok(c.source.degrees().all(|d| {
        let ids: Vec<String> = c.source.basis().labels(d).iter().map(|l| l.id.clone()).collect();
        triangularity_check(&c.at(d), &ids, &values)
    }))
}
