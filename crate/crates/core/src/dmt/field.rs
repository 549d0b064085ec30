use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{CellComplex, DmtError};

/// A discrete vector field: pairs `(sigma, tau)` with `sigma` a regular
/// face of `tau`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VectorField {
    pub pairs: Vec<(String, String)>,
}

/// Role of a cell with respect to a field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Critical,
    /// Lower cell of a pair; holds the position of its partner.
    Tail(usize),
    /// Upper cell of a pair.
    Head(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldReport {
    pub violations: Vec<String>,
}

impl FieldReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl VectorField {
    pub fn new(pairs: impl IntoIterator<Item = (String, String)>) -> Self {
        VectorField { pairs: pairs.into_iter().collect() }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn push(&mut self, sigma: impl Into<String>, tau: impl Into<String>) {
        self.pairs.push((sigma.into(), tau.into()));
    }

    /// Drops every pair touching one of `ids`.
    pub fn without(&self, ids: &BTreeSet<String>) -> Self {
        VectorField::new(self.pairs.iter().filter(|(a, b)| !ids.contains(a) && !ids.contains(b)).cloned())
    }

    pub fn partner(&self, id: &str) -> Option<&str> {
        self.pairs.iter().find_map(|(a, b)| {
            if a == id {
                Some(b.as_str())
            } else if b == id {
                Some(a.as_str())
            } else {
                None
            }
        })
    }
}

/// Roles of every cell; fails on anything that is not a matching of
/// regular face pairs. Acyclicity is not checked here.
pub(crate) fn roles(k: &CellComplex, v: &VectorField) -> Result<Vec<Role>, Vec<String>> {
    let mut roles = vec![Role::Critical; k.len()];
    let mut errs = Vec::new();
    for (s, t) in &v.pairs {
        let (Some(a), Some(b)) = (k.position(s), k.position(t)) else {
            errs.push(format!("pair ({s}, {t}) names an unknown cell"));
            continue;
        };
        if k.dim_of(a) + 1 != k.dim_of(b) {
            errs.push(format!("pair ({s}, {t}) does not raise dimension by one"));
            continue;
        }
        if k.incidence(b, a).abs() != 1 {
            errs.push(format!("pair ({s}, {t}) is not a regular face pair"));
            continue;
        }
        if roles[a] != Role::Critical || roles[b] != Role::Critical {
            errs.push(format!("pair ({s}, {t}) reuses a cell"));
            continue;
        }
        roles[a] = Role::Tail(b);
        roles[b] = Role::Head(a);
    }
    if errs.is_empty() {
        Ok(roles)
    } else {
        Err(errs)
    }
}

/// Edges of the modified Hasse graph restricted to tails: `sigma -> sigma'`
/// when `sigma'` is a tail and a face of `V(sigma)` other than `sigma`.
fn find_cycle(k: &CellComplex, roles: &[Role]) -> Option<Vec<usize>> {
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state = vec![0u8; k.len()];
    for start in 0..k.len() {
        if !matches!(roles[start], Role::Tail(_)) || state[start] != 0 {
            continue;
        }
        let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
        state[start] = 1;
        while let Some(&mut (s, ref mut next)) = stack.last_mut() {
            let Role::Tail(t) = roles[s] else { unreachable!() };
            let faces = k.faces(t);
            if *next < faces.len() {
                let (f, _) = faces[*next];
                *next += 1;
                if f == s || !matches!(roles[f], Role::Tail(_)) {
                    continue;
                }
                match state[f] {
                    0 => {
                        state[f] = 1;
                        stack.push((f, 0));
                    }
                    1 => {
                        let from = stack.iter().position(|(x, _)| *x == f).expect("on stack");
                        return Some(stack[from..].iter().map(|(x, _)| *x).collect());
                    }
                    _ => {}
                }
            } else {
                state[s] = 2;
                stack.pop();
            }
        }
    }
    None
}

/// Checks that `v` is a matching of regular face pairs with no closed
/// V-path.
pub fn validate_field(k: &CellComplex, v: &VectorField) -> FieldReport {
    let roles = match roles(k, v) {
        Ok(r) => r,
        Err(violations) => return FieldReport { violations },
    };
    let violations = match find_cycle(k, &roles) {
        Some(cycle) => {
            let names: Vec<&str> = cycle.iter().map(|&c| k.cell(c).id.as_str()).collect();
            vec![format!("closed V-path through {}", names.join(" -> "))]
        }
        None => vec![],
    };
    FieldReport { violations }
}

pub(crate) fn checked_roles(k: &CellComplex, v: &VectorField) -> Result<Vec<Role>, DmtError> {
    let report = validate_field(k, v);
    if !report.is_valid() {
        return Err(DmtError::InvalidField(report.violations));
    }
    Ok(roles(k, v).expect("validated"))
}

/// Critical cells in cell order.
pub fn critical_cells(k: &CellComplex, v: &VectorField) -> Result<Vec<String>, DmtError> {
    let roles = checked_roles(k, v)?;
    Ok((0..k.len()).filter(|&c| roles[c] == Role::Critical).map(|c| k.cell(c).id.clone()).collect())
}

/// Critical cell counts per dimension.
pub fn critical_counts(k: &CellComplex, v: &VectorField) -> Result<BTreeMap<usize, usize>, DmtError> {
    let mut out = BTreeMap::new();
    for id in critical_cells(k, v)? {
        *out.entry(k.cell(k.position(&id).expect("known")).dim).or_insert(0) += 1;
    }
    Ok(out)
}

/// Greedy random acyclic matching: candidate regular pairs are tried in a
/// seeded random order and kept when they leave the field acyclic. Cells
/// in `frozen` stay unmatched.
pub fn random_acyclic_field(k: &CellComplex, seed: u64, frozen: &BTreeSet<String>, keep_probability: f64) -> VectorField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut candidates: Vec<(usize, usize)> = (0..k.len())
        .flat_map(|t| k.faces(t).iter().filter(|(_, v)| v.abs() == 1).map(move |(s, _)| (*s, t)))
        .filter(|(s, t)| !frozen.contains(&k.cell(*s).id) && !frozen.contains(&k.cell(*t).id))
        .collect();
    candidates.shuffle(&mut rng);
    let mut roles = vec![Role::Critical; k.len()];
    let mut field = VectorField::empty();
    for (s, t) in candidates {
        if roles[s] != Role::Critical || roles[t] != Role::Critical || !rng.gen_bool(keep_probability) {
            continue;
        }
        roles[s] = Role::Tail(t);
        roles[t] = Role::Head(s);
        if find_cycle(k, &roles).is_some() {
            roles[s] = Role::Critical;
            roles[t] = Role::Critical;
        } else {
            field.push(k.cell(s).id.clone(), k.cell(t).id.clone());
        }
    }
    field
}

/// Every acyclic field on `k`, in a fixed order. Only sensible for very
/// small complexes.
pub fn all_acyclic_fields(k: &CellComplex) -> Vec<VectorField> {
    let candidates: Vec<(usize, usize)> = (0..k.len())
        .flat_map(|t| k.faces(t).iter().filter(|(_, v)| v.abs() == 1).map(move |(s, _)| (*s, t)))
        .collect();
    let mut out = Vec::new();
    let mut roles = vec![Role::Critical; k.len()];
    let mut chosen = Vec::new();
    fn go(
        k: &CellComplex,
        cands: &[(usize, usize)],
        at: usize,
        roles: &mut Vec<Role>,
        chosen: &mut Vec<(usize, usize)>,
        out: &mut Vec<VectorField>,
    ) {
        if at == cands.len() {
            out.push(VectorField::new(chosen.iter().map(|&(s, t)| (k.cell(s).id.clone(), k.cell(t).id.clone()))));
            return;
        }
        go(k, cands, at + 1, roles, chosen, out);
        let (s, t) = cands[at];
        if roles[s] == Role::Critical && roles[t] == Role::Critical {
            roles[s] = Role::Tail(t);
            roles[t] = Role::Head(s);
            if find_cycle(k, roles).is_none() {
                chosen.push((s, t));
                go(k, cands, at + 1, roles, chosen, out);
                chosen.pop();
            }
            roles[s] = Role::Critical;
            roles[t] = Role::Critical;
        }
    }
    go(k, &candidates, 0, &mut roles, &mut chosen, &mut out);
    out
}

/// A discrete Morse function for `v`: the height of each cell in the Hasse
/// diagram with every pair merged into one node. It strictly decreases from
/// a cell to its faces except across a pair, where it is constant.
pub fn morse_heights(k: &CellComplex, v: &VectorField) -> Result<Vec<i64>, DmtError> {
    let roles = checked_roles(k, v)?;
    let node = |c: usize| match roles[c] {
        Role::Tail(h) => h,
        _ => c,
    };
    let mut height: Vec<Option<i64>> = vec![None; k.len()];
    for start in k.graded_order() {
        let mut stack = vec![(node(start), false)];
        while let Some((n, expanded)) = stack.pop() {
            if height[n].is_some() {
                continue;
            }
            let members: Vec<usize> = match roles[n] {
                Role::Head(t) => vec![n, t],
                _ => vec![n],
            };
            let below: Vec<usize> = members
                .iter()
                .flat_map(|&m| k.faces(m).iter().map(|&(f, _)| node(f)))
                .filter(|&f| f != n)
                .collect();
            if expanded {
                height[n] = Some(below.iter().map(|&f| height[f].expect("children first") + 1).max().unwrap_or(0));
            } else {
                stack.push((n, true));
                stack.extend(below.into_iter().filter(|&f| height[f].is_none()).map(|f| (f, false)));
            }
        }
    }
    Ok((0..k.len()).map(|c| height[node(c)].expect("every node visited")).collect())
}
