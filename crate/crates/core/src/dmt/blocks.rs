use std::collections::BTreeMap;

use crate::chain::{ChainComplex, ChainMap, GradedBasis, Label, MapRelation};
use crate::matrix::Matrix;

use super::CellComplex;

/// Nonzero entries of a Morse differential, keyed `(column cell, row cell)`.
pub type Entries = BTreeMap<(String, String), i64>;

pub fn entries(c: &ChainComplex<i64>) -> Entries {
    let mut out = BTreeMap::new();
    for i in c.degrees() {
        for (r, col, a) in c.d(i).nonzero_entries() {
            out.insert((c.basis().labels(i)[col].id.clone(), c.basis().labels(i - 1)[r].id.clone()), a);
        }
    }
    out
}

/// A block of critical cells: `(label, cell id, degree)`.
#[derive(Clone, Debug, Default)]
pub struct Block {
    pub members: Vec<(String, String, i32)>,
}

impl Block {
    pub fn push(&mut self, label: impl Into<String>, cell: impl Into<String>, degree: i32) {
        self.members.push((label.into(), cell.into(), degree));
    }

    pub fn basis(&self) -> GradedBasis {
        GradedBasis::new(self.members.iter().map(|(l, _, d)| Label::new(l.clone(), *d))).expect("labels are unique")
    }

    fn cell_of(&self) -> BTreeMap<&str, &str> {
        self.members.iter().map(|(l, c, _)| (l.as_str(), c.as_str())).collect()
    }

    pub fn cells(&self) -> impl Iterator<Item = &str> {
        self.members.iter().map(|(_, c, _)| c.as_str())
    }
}

/// Matrix `source_i -> target_{i+shift}` read off `entries`, scaled by `sign`.
pub fn block_matrix(
    e: &Entries,
    src: &Block,
    src_basis: &GradedBasis,
    tgt: &Block,
    tgt_basis: &GradedBasis,
    i: i32,
    shift: i32,
    sign: i64,
) -> Matrix<i64> {
    let (sc, tc) = (src.cell_of(), tgt.cell_of());
    let cols = src_basis.labels(i);
    let rows = tgt_basis.labels(i + shift);
    Matrix::from_fn(&(), rows.len(), cols.len(), |r, c| {
        let key = (sc[cols[c].id.as_str()].to_string(), tc[rows[r].id.as_str()].to_string());
        sign * e.get(&key).copied().unwrap_or(0)
    })
}

/// The complex on a block with differential read off `entries`.
pub fn block_complex(e: &Entries, b: &Block, sign: i64) -> ChainComplex<i64> {
    let basis = b.basis();
    let diffs: Vec<_> = basis.degrees().map(|i| (i, block_matrix(e, b, &basis, b, &basis, i, -1, sign))).collect();
    ChainComplex::new(&(), basis, diffs).expect("shapes match")
}

pub fn block_map(
    e: &Entries,
    src: &Block,
    src_c: &ChainComplex<i64>,
    tgt: &Block,
    tgt_c: &ChainComplex<i64>,
    shift: i32,
    relation: MapRelation,
    sign: i64,
) -> ChainMap<i64> {
    let mats: Vec<_> = src_c
        .degrees()
        .map(|i| (i, block_matrix(e, src, src_c.basis(), tgt, tgt_c.basis(), i, shift, sign)))
        .collect();
    ChainMap::new(src_c.clone(), tgt_c.clone(), shift, relation, mats).expect("shapes match")
}

/// Entries from a cell in `src` to a cell in `tgt`, for pattern checks.
pub fn stray_entries(e: &Entries, src: &[&str], tgt: &[&str]) -> Vec<String> {
    e.iter()
        .filter(|((c, r), _)| src.contains(&c.as_str()) && tgt.contains(&r.as_str()))
        .map(|((c, r), a)| format!("{c} -> {r}: {a}"))
        .collect()
}

pub fn dim_of(k: &CellComplex, id: &str) -> i32 {
    k.dim_of(k.position(id).expect("known cell")) as i32
}
