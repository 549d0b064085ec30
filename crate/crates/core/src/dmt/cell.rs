use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::chain::{ChainComplex, GradedBasis, Label};
use crate::matrix::Matrix;

use super::DmtError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub id: String,
    pub dim: usize,
    /// `(face id, incidence)`.
    #[serde(default)]
    pub boundary: Vec<(String, i64)>,
}

impl Cell {
    pub fn new(id: impl Into<String>, dim: usize, boundary: Vec<(String, i64)>) -> Self {
        Cell { id: id.into(), dim, boundary }
    }
}

/// A finite CW complex given by cells and integer incidences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellComplex {
    cells: Vec<Cell>,
    index: HashMap<String, usize>,
    faces: Vec<Vec<(usize, i64)>>,
    cofaces: Vec<Vec<(usize, i64)>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellComplexDoc {
    pub cells: Vec<Cell>,
}

/// Level `t` copy of a cell in a product with an interval.
pub fn level_id(id: &str, t: usize) -> String {
    format!("{id}@{t}")
}

/// Prism `sigma x [t-1, t]`.
pub fn prism_id(id: &str, t: usize) -> String {
    format!("{id}@{}:{t}", t - 1)
}

impl CellComplex {
    /// Validates ids, face dimensions and `d^2 = 0`. Cells are kept in the
    /// given order.
    pub fn new(cells: Vec<Cell>) -> Result<Self, DmtError> {
        let mut index = HashMap::new();
        for (k, c) in cells.iter().enumerate() {
            if index.insert(c.id.clone(), k).is_some() {
                return Err(DmtError::DuplicateCell(c.id.clone()));
            }
        }
        let mut faces = vec![Vec::new(); cells.len()];
        let mut cofaces = vec![Vec::new(); cells.len()];
        for (k, c) in cells.iter().enumerate() {
            let mut merged: BTreeMap<usize, i64> = BTreeMap::new();
            for (f, inc) in &c.boundary {
                let &j = index.get(f).ok_or_else(|| DmtError::UnknownCell(f.clone()))?;
                if cells[j].dim + 1 != c.dim {
                    return Err(DmtError::BadFace { cell: c.id.clone(), face: f.clone() });
                }
                *merged.entry(j).or_default() += inc;
            }
            for (j, inc) in merged {
                if inc != 0 {
                    faces[k].push((j, inc));
                    cofaces[j].push((k, inc));
                }
            }
        }
        let out = CellComplex { cells, index, faces, cofaces };
        for k in 0..out.cells.len() {
            let mut sq: BTreeMap<usize, i64> = BTreeMap::new();
            for &(j, a) in &out.faces[k] {
                for &(i, b) in &out.faces[j] {
                    *sq.entry(i).or_default() += a * b;
                }
            }
            if let Some((i, _)) = sq.iter().find(|(_, v)| **v != 0) {
                return Err(DmtError::NotSquareZero { cell: out.cells[k].id.clone(), face: out.cells[*i].id.clone() });
            }
        }
        Ok(out)
    }

    /// All faces of the given facets; incidence of deleting the `i`-th of
    /// the sorted vertices is `(-1)^i`. Cell ids are the vertices joined
    /// by `-`.
    pub fn from_simplicial(facets: &[Vec<usize>]) -> Result<Self, DmtError> {
        let mut seen = BTreeSet::new();
        let mut simplices: BTreeSet<(usize, Vec<usize>)> = BTreeSet::new();
        for f in facets {
            let mut s = f.clone();
            s.sort_unstable();
            s.dedup();
            if s.len() != f.len() || s.is_empty() {
                return Err(DmtError::DuplicateFacet(format!("{f:?}")));
            }
            if !seen.insert(s.clone()) {
                return Err(DmtError::DuplicateFacet(format!("{f:?}")));
            }
            // every nonempty subset
            let n = s.len();
            for mask in 1u64..(1 << n) {
                let sub: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| s[i]).collect();
                simplices.insert((sub.len() - 1, sub));
            }
        }
        let name = |s: &[usize]| s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("-");
        let cells = simplices
            .iter()
            .map(|(dim, s)| {
                let boundary = if *dim == 0 {
                    vec![]
                } else {
                    (0..s.len())
                        .map(|i| {
                            let mut f = s.clone();
                            f.remove(i);
                            (name(&f), if i % 2 == 0 { 1 } else { -1 })
                        })
                        .collect()
                };
                Cell::new(name(s), *dim, boundary)
            })
            .collect();
        Self::new(cells)
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    pub fn cell(&self, k: usize) -> &Cell {
        &self.cells[k]
    }

    pub fn dim_of(&self, k: usize) -> usize {
        self.cells[k].dim
    }

    /// Faces of cell `k` with nonzero incidence, as positions.
    pub fn faces(&self, k: usize) -> &[(usize, i64)] {
        &self.faces[k]
    }

    pub fn cofaces(&self, k: usize) -> &[(usize, i64)] {
        &self.cofaces[k]
    }

    /// `<d tau, sigma>` for positions.
    pub fn incidence(&self, tau: usize, sigma: usize) -> i64 {
        self.faces[tau].iter().find(|(j, _)| *j == sigma).map_or(0, |(_, v)| *v)
    }

    /// True iff every incidence is `+1` or `-1`.
    pub fn is_regular(&self) -> bool {
        self.faces.iter().flatten().all(|(_, v)| v.abs() == 1)
    }

    pub fn dimension(&self) -> Option<usize> {
        self.cells.iter().map(|c| c.dim).max()
    }

    pub fn f_vector(&self) -> Vec<usize> {
        let mut out = vec![0; self.dimension().map_or(0, |d| d + 1)];
        for c in &self.cells {
            out[c.dim] += 1;
        }
        out
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector().iter().enumerate().map(|(d, n)| if d % 2 == 0 { *n as i64 } else { -(*n as i64) }).sum()
    }

    /// Cells ordered by dimension, then by position.
    pub fn graded_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.cells.len()).collect();
        order.sort_by_key(|&k| (self.cells[k].dim, k));
        order
    }

    /// Cellular chain complex restricted to `keep` positions (all cells when
    /// `None`), basis in graded order.
    pub fn cellular_complex(&self) -> ChainComplex<i64> {
        let order = self.graded_order();
        let basis = GradedBasis::new(order.iter().map(|&k| Label::new(self.cells[k].id.clone(), self.cells[k].dim as i32)))
            .expect("cell ids are unique");
        let diffs = basis
            .degrees()
            .filter(|&i| i >= 1)
            .map(|i| {
                let rows = basis.labels(i - 1);
                let cols = basis.labels(i);
                let m = Matrix::from_fn(&(), rows.len(), cols.len(), |r, c| {
                    self.incidence(self.index[&cols[c].id], self.index[&rows[r].id])
                });
                (i, m)
            })
            .collect::<Vec<_>>();
        ChainComplex::new(&(), basis, diffs).expect("cellular boundary has matching shapes")
    }

    /// True iff the cells form a subcomplex (closed under taking faces).
    pub fn is_subcomplex(&self, ids: &[String]) -> bool {
        let set: BTreeSet<&str> = ids.iter().map(String::as_str).collect();
        ids.iter().all(|id| {
            self.position(id)
                .is_some_and(|k| self.faces[k].iter().all(|(j, _)| set.contains(self.cells[*j].id.as_str())))
        })
    }

    /// The relative complex `K / A` for a subcomplex `A`: its cells are
    /// deleted and dropped from every boundary.
    pub fn quotient(&self, remove: &[String]) -> Result<Self, DmtError> {
        if !self.is_subcomplex(remove) {
            return Err(DmtError::GluingMismatch("removed cells do not form a subcomplex".into()));
        }
        let gone: BTreeSet<&str> = remove.iter().map(String::as_str).collect();
        let cells = self
            .cells
            .iter()
            .filter(|c| !gone.contains(c.id.as_str()))
            .map(|c| Cell {
                id: c.id.clone(),
                dim: c.dim,
                boundary: c.boundary.iter().filter(|(f, _)| !gone.contains(f.as_str())).cloned().collect(),
            })
            .collect();
        Self::new(cells)
    }

    /// Same complex with every id rewritten.
    pub fn relabeled(&self, f: impl Fn(&str) -> String) -> Result<Self, DmtError> {
        Self::new(
            self.cells
                .iter()
                .map(|c| Cell {
                    id: f(&c.id),
                    dim: c.dim,
                    boundary: c.boundary.iter().map(|(x, v)| (f(x), *v)).collect(),
                })
                .collect(),
        )
    }

    /// Disjoint union; ids must not collide.
    pub fn union(parts: &[&CellComplex]) -> Result<Self, DmtError> {
        Self::new(parts.iter().flat_map(|p| p.cells.iter().cloned()).collect())
    }

    /// Identifies cells: every key of `map` is replaced by its value, which
    /// must be a cell with the same dimension and the same (renamed)
    /// boundary.
    pub fn identify(&self, map: &BTreeMap<String, String>) -> Result<Self, DmtError> {
        let rename = |x: &str| map.get(x).cloned().unwrap_or_else(|| x.to_string());
        for (from, to) in map {
            let a = self.position(from).ok_or_else(|| DmtError::UnknownCell(from.clone()))?;
            let b = self.position(to).ok_or_else(|| DmtError::UnknownCell(to.clone()))?;
            let norm = |k: usize| {
                let mut v: Vec<(String, i64)> =
                    self.faces[k].iter().map(|(j, i)| (rename(&self.cells[*j].id), *i)).collect();
                v.sort();
                v
            };
            if self.cells[a].dim != self.cells[b].dim || norm(a) != norm(b) {
                return Err(DmtError::GluingMismatch(format!("`{from}` and `{to}` have different boundaries")));
            }
        }
        Self::new(
            self.cells
                .iter()
                .filter(|c| !map.contains_key(&c.id))
                .map(|c| Cell {
                    id: c.id.clone(),
                    dim: c.dim,
                    boundary: c.boundary.iter().map(|(x, v)| (rename(x), *v)).collect(),
                })
                .collect(),
        )
    }

    /// `K x [0, m]` with levels `sigma@t` and prisms `sigma@(t-1):t`,
    /// `d(sigma x I) = sigma x {t} - sigma x {t-1} - (d sigma) x I`.
    pub fn product_interval(&self, m: usize) -> Self {
        let mut cells = Vec::new();
        for t in 0..=m {
            for c in &self.cells {
                cells.push(Cell::new(
                    level_id(&c.id, t),
                    c.dim,
                    c.boundary.iter().map(|(f, v)| (level_id(f, t), *v)).collect(),
                ));
            }
        }
        for t in 1..=m {
            for c in &self.cells {
                let mut b = vec![(level_id(&c.id, t), 1), (level_id(&c.id, t - 1), -1)];
                b.extend(c.boundary.iter().map(|(f, v)| (prism_id(f, t), -v)));
                cells.push(Cell::new(prism_id(&c.id, t), c.dim + 1, b));
            }
        }
        Self::new(cells).expect("products of valid complexes are valid")
    }

    /// `K x [0, 1]`.
    pub fn cylinder(&self) -> Self {
        self.product_interval(1)
    }

    /// The cone on `K` with apex `apex`: cells `apex*sigma` with
    /// `d(apex*v) = v - apex` and `d(apex*sigma) = sigma - apex*(d sigma)`.
    pub fn cone(&self, apex: &str) -> Self {
        let join = |id: &str| format!("{apex}*{id}");
        let mut cells = self.cells.clone();
        cells.push(Cell::new(apex, 0, vec![]));
        for c in &self.cells {
            let b = if c.dim == 0 {
                vec![(c.id.clone(), 1), (apex.to_string(), -1)]
            } else {
                std::iter::once((c.id.clone(), 1)).chain(c.boundary.iter().map(|(f, v)| (join(f), -v))).collect()
            };
            cells.push(Cell::new(join(&c.id), c.dim + 1, b));
        }
        Self::new(cells).expect("cones of valid complexes are valid")
    }

    pub fn to_doc(&self) -> CellComplexDoc {
        CellComplexDoc { cells: self.cells.clone() }
    }

    pub fn from_doc(doc: &CellComplexDoc) -> Result<Self, DmtError> {
        Self::new(doc.cells.clone())
    }
}
