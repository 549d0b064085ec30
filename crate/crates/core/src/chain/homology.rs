use std::fmt;

use num_integer::Integer;

use crate::matrix::Matrix;

use super::ChainComplex;

/// `Z^betti + Z/t_1 + ... + Z/t_r` with `t_1 | t_2 | ... | t_r`, all `t > 1`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct HomologyGroup {
    pub betti: usize,
    pub torsion: Vec<u64>,
}

impl HomologyGroup {
    pub fn free(betti: usize) -> Self {
        HomologyGroup { betti, torsion: vec![] }
    }

    pub fn new(betti: usize, torsion: Vec<u64>) -> Self {
        HomologyGroup { betti, torsion }
    }

    pub fn is_zero(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.betti {
            0 => {}
            1 => parts.push("Z".to_string()),
            b => parts.push(format!("Z^{b}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join("+"))
        }
    }
}

/// Invariant factors (nonzero diagonal of the Smith normal form), in
/// divisibility order.
pub fn smith_diagonal(m: &Matrix<i64>) -> Vec<u64> {
    let mut a: Vec<Vec<i128>> = (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| *m.get(i, j) as i128).collect())
        .collect();
    let (rows, cols) = m.shape();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero absolute value in the remaining block
        let Some((pi, pj)) = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| a[i][j] != 0)
            .min_by_key(|&(i, j)| a[i][j].abs())
        else {
            break;
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = a[t][t];
            let mut dirty = false;
            for i in t + 1..rows {
                let q = a[i][t].div_euclid(p);
                if q != 0 {
                    for j in t..cols {
                        a[i][j] -= q * a[t][j];
                    }
                }
                dirty |= a[i][t] != 0;
            }
            for j in t + 1..cols {
                let q = a[t][j].div_euclid(p);
                if q != 0 {
                    for row in a.iter_mut().skip(t) {
                        row[j] -= q * row[t];
                    }
                }
                dirty |= a[t][j] != 0;
            }
            if !dirty {
                break;
            }
            // move the smallest remainder in row/column t to the pivot
            let (mut bi, mut bj, mut best) = (t, t, a[t][t].abs());
            for i in t + 1..rows {
                if a[i][t] != 0 && a[i][t].abs() < best {
                    (bi, bj, best) = (i, t, a[i][t].abs());
                }
            }
            for j in t + 1..cols {
                if a[t][j] != 0 && a[t][j].abs() < best {
                    (bi, bj, best) = (t, j, a[t][j].abs());
                }
            }
            a.swap(t, bi);
            for row in a.iter_mut() {
                row.swap(t, bj);
            }
        }
        diag.push(a[t][t].unsigned_abs() as u64);
        t += 1;
    }
    // normalise to divisibility order
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            let g = diag[i].gcd(&diag[j]);
            let l = diag[i].lcm(&diag[j]);
            diag[i] = g;
            diag[j] = l;
        }
    }
    diag
}

pub fn integer_rank(m: &Matrix<i64>) -> usize {
    smith_diagonal(m).len()
}

/// Integral homology in every degree of the complex.
pub fn homology_z(c: &ChainComplex<i64>) -> Vec<(i32, HomologyGroup)> {
    let factors: Vec<(i32, Vec<u64>)> = c
        .degrees()
        .map(|i| (i, smith_diagonal(&c.d(i))))
        .chain(std::iter::once((c.degrees().end() + 1, vec![])))
        .collect();
    c.degrees()
        .map(|i| {
            let k = (i - c.degrees().start()) as usize;
            let rank_out = factors[k].1.len();
            let incoming = &factors[k + 1].1;
            let betti = c.dim(i) - rank_out - incoming.len();
            let torsion = incoming.iter().copied().filter(|t| *t > 1).collect();
            (i, HomologyGroup { betti, torsion })
        })
        .collect()
}
