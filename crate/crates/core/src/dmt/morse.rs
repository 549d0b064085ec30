use std::collections::BTreeMap;

use crate::chain::{ChainComplex, GradedBasis, Label};
use crate::matrix::Matrix;

use super::field::{checked_roles, Role};
use super::{CellComplex, DmtError, VectorField};

/// Memoized gradient flow from single cells to critical cells.
///
/// `flow(sigma)` is `sigma` itself when critical, zero on heads, and
/// otherwise `sum -<d V(sigma), s'><d V(sigma), sigma> flow(s')` over the
/// faces `s' != sigma` of `V(sigma)`.
pub struct Flow<'a> {
    k: &'a CellComplex,
    roles: Vec<Role>,
    memo: Vec<Option<BTreeMap<usize, i64>>>,
}

impl<'a> Flow<'a> {
    pub fn new(k: &'a CellComplex, v: &VectorField) -> Result<Self, DmtError> {
        let roles = checked_roles(k, v)?;
        Ok(Flow { k, roles, memo: vec![None; k.len()] })
    }

    pub fn is_critical(&self, c: usize) -> bool {
        self.roles[c] == Role::Critical
    }

    pub fn role(&self, c: usize) -> Role {
        self.roles[c]
    }

    /// Flow of the cell at position `c`, keyed by critical positions.
    pub fn flow(&mut self, c: usize) -> BTreeMap<usize, i64> {
        if let Some(m) = &self.memo[c] {
            return m.clone();
        }
        // iterative post-order over the acyclic tail graph
        let mut stack = vec![(c, false)];
        while let Some((s, expanded)) = stack.pop() {
            if self.memo[s].is_some() {
                continue;
            }
            match self.roles[s] {
                Role::Critical => {
                    self.memo[s] = Some(BTreeMap::from([(s, 1)]));
                }
                Role::Head(_) => {
                    self.memo[s] = Some(BTreeMap::new());
                }
                Role::Tail(t) => {
                    let faces = self.k.faces(t);
                    if !expanded {
                        stack.push((s, true));
                        for &(f, _) in faces {
                            if f != s && self.memo[f].is_none() {
                                stack.push((f, false));
                            }
                        }
                        continue;
                    }
                    let own = self.k.incidence(t, s);
                    let mut out: BTreeMap<usize, i64> = BTreeMap::new();
                    for &(f, inc) in faces {
                        if f == s {
                            continue;
                        }
                        let w = -inc * own;
                        for (x, a) in self.memo[f].as_ref().expect("children first") {
                            *out.entry(*x).or_default() += w * a;
                        }
                    }
                    out.retain(|_, v| *v != 0);
                    self.memo[s] = Some(out);
                }
            }
        }
        self.memo[c].clone().expect("computed")
    }

    /// Flow of an integer chain given as `(position, coefficient)`.
    pub fn flow_chain(&mut self, chain: &[(usize, i64)]) -> BTreeMap<usize, i64> {
        let mut out: BTreeMap<usize, i64> = BTreeMap::new();
        for &(c, a) in chain {
            for (x, b) in self.flow(c) {
                *out.entry(x).or_default() += a * b;
            }
        }
        out.retain(|_, v| *v != 0);
        out
    }

    /// Morse boundary of a critical cell: `sum <d tau, s> flow(s)`.
    pub fn boundary(&mut self, tau: usize) -> BTreeMap<usize, i64> {
        let faces = self.k.faces(tau).to_vec();
        self.flow_chain(&faces)
    }
}

/// The Morse complex of `(k, v)` over Z, basis the critical cells in cell
/// order (grouped by dimension).
pub fn morse_complex(k: &CellComplex, v: &VectorField) -> Result<ChainComplex<i64>, DmtError> {
    let mut flow = Flow::new(k, v)?;
    let crit: Vec<usize> = k.graded_order().into_iter().filter(|&c| flow.is_critical(c)).collect();
    let basis = GradedBasis::new(crit.iter().map(|&c| Label::new(k.cell(c).id.clone(), k.dim_of(c) as i32)))
        .expect("cell ids are unique");
    let mut diffs = Vec::new();
    for i in basis.degrees().filter(|&i| i >= 1) {
        let rows = basis.labels(i - 1);
        let cols = basis.labels(i);
        let mut m = Matrix::zeros(&(), rows.len(), cols.len());
        let row_pos: BTreeMap<usize, usize> =
            rows.iter().enumerate().map(|(r, l)| (k.position(&l.id).expect("known"), r)).collect();
        for (ci, l) in cols.iter().enumerate() {
            let tau = k.position(&l.id).expect("known");
            for (x, a) in flow.boundary(tau) {
                m.set(row_pos[&x], ci, a);
            }
        }
        diffs.push((i, m));
    }
    Ok(ChainComplex::new(&(), basis, diffs).expect("Morse blocks have matching shapes"))
}
