use num_integer::Integer;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::chain::{ChainComplex, GradedBasis, Label};
use crate::matrix::{Matrix, NovikovContext};
use crate::rings::{GroupRingElement, NovikovElement};

use super::DmtError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalPoint {
    pub label: String,
    /// 0 for a minimum, 1 for a maximum.
    pub index: u8,
    /// Value of the lift along one traversal starting at the first point.
    pub value: Rational64,
}

/// A Morse function on the circle, listed once around the circle in the
/// positive direction. `winding` is the degree of the map to the circle;
/// 0 means real valued. Going once around adds `winding` to the lift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircleFunction {
    pub points: Vec<CriticalPoint>,
    pub winding: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalPointDoc {
    pub label: String,
    pub index: u8,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircleFunctionDoc {
    pub points: Vec<CriticalPointDoc>,
    pub winding: u32,
}

impl CircleFunction {
    pub fn to_doc(&self) -> CircleFunctionDoc {
        CircleFunctionDoc {
            points: self
                .points
                .iter()
                .map(|p| CriticalPointDoc { label: p.label.clone(), index: p.index, value: p.value.to_string() })
                .collect(),
            winding: self.winding,
        }
    }

    pub fn from_doc(doc: &CircleFunctionDoc) -> Result<Self, DmtError> {
        let points = doc
            .points
            .iter()
            .map(|p| {
                Ok(CriticalPoint { label: p.label.clone(), index: p.index, value: crate::chain::json::parse_rational(&p.value)? })
            })
            .collect::<Result<_, DmtError>>()?;
        Self::new(points, doc.winding)
    }

    pub fn new(points: Vec<CriticalPoint>, winding: u32) -> Result<Self, DmtError> {
        let f = CircleFunction { points, winding };
        f.check()?;
        Ok(f)
    }

    /// Builds from `(label, index, value)` triples.
    pub fn from_triples(points: &[(&str, u8, Rational64)], winding: u32) -> Result<Self, DmtError> {
        Self::new(
            points.iter().map(|(l, i, v)| CriticalPoint { label: l.to_string(), index: *i, value: *v }).collect(),
            winding,
        )
    }

    fn len(&self) -> usize {
        self.points.len()
    }

    /// Lifted value at sequence position `k` (any integer).
    fn lifted(&self, k: i64) -> Rational64 {
        let n = self.len() as i64;
        let (turns, pos) = k.div_mod_floor(&n);
        self.points[pos as usize].value + Rational64::from_integer(turns * i64::from(self.winding))
    }

    fn check(&self) -> Result<(), DmtError> {
        let n = self.len();
        if n == 0 {
            return Ok(());
        }
        let bad = |why: String| Err(DmtError::NotAlternating(why));
        if n % 2 != 0 {
            return bad("odd number of critical points".into());
        }
        let mut seen = std::collections::BTreeSet::new();
        for (i, p) in self.points.iter().enumerate() {
            if p.index > 1 {
                return bad(format!("`{}` has index {}", p.label, p.index));
            }
            if !seen.insert(p.label.as_str()) {
                return bad(format!("duplicate label `{}`", p.label));
            }
            if p.index == self.points[(i + 1) % n].index {
                return bad(format!("`{}` and its successor have the same index", p.label));
            }
        }
        for k in 0..n as i64 {
            let (l, v, r) = (self.lifted(k - 1), self.lifted(k), self.lifted(k + 1));
            let ok = if self.points[k as usize].index == 1 { v > l && v > r } else { v < l && v < r };
            if !ok {
                return bad(format!("value of `{}` is inconsistent with its neighbours", self.points[k as usize].label));
            }
        }
        Ok(())
    }

    fn basis(&self) -> GradedBasis {
        GradedBasis::new(self.points.iter().map(|p| Label::with_value(p.label.clone(), i32::from(p.index), p.value)))
            .expect("labels are unique")
    }

    /// `(max, [(min position, sign, turns)])`: each maximum flows to its
    /// right neighbour with sign +1 and to its left neighbour with sign -1.
    /// `turns` is how many periods the endpoint lies below the basis lift.
    fn flows(&self) -> Vec<(usize, Vec<(usize, i64, i64)>)> {
        let n = self.len() as i64;
        let w = i64::from(self.winding);
        // the basis lift of each point is the one whose value lies in [0, w)
        let base_turn = |k: i64| -> i64 {
            if w == 0 {
                return 0;
            }
            let v = self.lifted(k);
            (v / Rational64::from_integer(w)).floor().to_integer()
        };
        (0..n)
            .filter(|&k| self.points[k as usize].index == 1)
            .map(|k| {
                let own = base_turn(k);
                let ends = [(k + 1, 1), (k - 1, -1)]
                    .into_iter()
                    .map(|(q, sign)| {
                        let pos = q.rem_euclid(n);
                        // lifted end sits `own` periods below the max's basis lift relative to q's
                        let turns = base_turn(q) - own;
                        (pos as usize, sign, turns)
                    })
                    .collect();
                (k as usize, ends)
            })
            .collect()
    }

    pub fn morse(&self) -> Result<ChainComplex<i64>, DmtError> {
        circle_morse(self)
    }
}

/// Real-valued case: `d(max) = right min - left min`.
pub fn circle_morse(f: &CircleFunction) -> Result<ChainComplex<i64>, DmtError> {
    if f.winding != 0 {
        return Err(DmtError::WrongWinding(f.winding));
    }
    let basis = f.basis();
    let mut m = Matrix::zeros(&(), basis.dim(0), basis.dim(1));
    for (k, ends) in f.flows() {
        let col = basis.position(&f.points[k].label).expect("known").1;
        for (pos, sign, _) in ends {
            let row = basis.position(&f.points[pos].label).expect("known").1;
            m.set(row, col, m.get(row, col) + sign);
        }
    }
    Ok(ChainComplex::new(&(), basis, [(1, m)])?)
}

/// Circle-valued case over `Z((z))` modulo `z^n`: each flow line from a
/// maximum carries `z^j`, `j` the number of periods its endpoint lies below
/// the basis lifts (those with values in `[0, w)`).
pub fn circle_novikov(f: &CircleFunction, n: i64) -> Result<ChainComplex<NovikovElement>, DmtError> {
    if f.winding == 0 {
        return Err(DmtError::WrongWinding(0));
    }
    let ctx = NovikovContext::integral(Some(n));
    let basis = f.basis();
    let mut m: Matrix<NovikovElement> = Matrix::zeros(&ctx, basis.dim(0), basis.dim(1));
    for (k, ends) in f.flows() {
        let col = basis.position(&f.points[k].label).expect("known").1;
        for (pos, sign, turns) in ends {
            let row = basis.position(&f.points[pos].label).expect("known").1;
            let term = NovikovElement::term(&ctx.ring, GroupRingElement::from_int(&ctx.ring, sign), -turns, Some(n));
            let sum = m.get(row, col).try_add(&term).expect("same ring");
            m.set(row, col, sum);
        }
    }
    Ok(ChainComplex::new(&ctx, basis, [(1, m)])?)
}
