use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::RingError;

/// The coefficient group ring Z[Z^k] together with its monodromy twist.
///
/// The twist is an integral matrix `A` with `|det A| = 1` acting on
/// exponent vectors, `zeta(x^v) = x^(A v)`. Rank zero gives the integers.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawContext", into = "RawContext")]
pub struct RingContext {
    rank: usize,
    twist: Vec<Vec<i64>>,
    #[serde(skip)]
    inverse: Vec<Vec<i64>>,
}

#[derive(Serialize, Deserialize)]
struct RawContext {
    rank: usize,
    twist: Vec<Vec<i64>>,
}

impl TryFrom<RawContext> for RingContext {
    type Error = RingError;
    fn try_from(raw: RawContext) -> Result<Self, RingError> {
        RingContext::new(raw.rank, raw.twist)
    }
}

impl From<RingContext> for RawContext {
    fn from(ctx: RingContext) -> Self {
        RawContext { rank: ctx.rank, twist: ctx.twist }
    }
}

impl fmt::Debug for RingContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RingContext")
            .field("rank", &self.rank)
            .field("twist", &self.twist)
            .finish()
    }
}

impl RingContext {
    pub fn new(rank: usize, twist: Vec<Vec<i64>>) -> Result<Self, RingError> {
        if twist.len() != rank || twist.iter().any(|row| row.len() != rank) {
            return Err(RingError::InvalidTwist(format!(
                "twist must be {rank}x{rank}"
            )));
        }
        let det = determinant(&twist);
        if det.abs() != 1 {
            return Err(RingError::InvalidTwist(format!(
                "twist determinant is {det}, expected +-1"
            )));
        }
        let inverse = adjugate(&twist)
            .into_iter()
            .map(|row| row.into_iter().map(|x| x * det).collect())
            .collect();
        Ok(RingContext { rank, twist, inverse })
    }

    /// The integers: trivial group, no twist.
    pub fn integers() -> Arc<Self> {
        Arc::new(RingContext { rank: 0, twist: vec![], inverse: vec![] })
    }

    pub fn untwisted(rank: usize) -> Arc<Self> {
        let id = identity(rank);
        Arc::new(RingContext { rank, twist: id.clone(), inverse: id })
    }

    pub fn twisted(rank: usize, twist: Vec<Vec<i64>>) -> Result<Arc<Self>, RingError> {
        RingContext::new(rank, twist).map(Arc::new)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn twist(&self) -> &[Vec<i64>] {
        &self.twist
    }

    pub fn is_untwisted(&self) -> bool {
        self.twist == identity(self.rank)
    }

    /// Applies `zeta^power` to an exponent vector.
    pub fn act(&self, power: i64, v: &[i64]) -> Vec<i64> {
        let m = if power >= 0 { &self.twist } else { &self.inverse };
        let mut out = v.to_vec();
        for _ in 0..power.unsigned_abs() {
            out = m
                .iter()
                .map(|row| row.iter().zip(&out).map(|(a, b)| a * b).sum())
                .collect();
        }
        out
    }
}

fn identity(k: usize) -> Vec<Vec<i64>> {
    (0..k)
        .map(|i| (0..k).map(|j| i64::from(i == j)).collect())
        .collect()
}

fn minor(m: &[Vec<i64>], row: usize, col: usize) -> Vec<Vec<i64>> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != row)
        .map(|(_, r)| {
            r.iter()
                .enumerate()
                .filter(|(j, _)| *j != col)
                .map(|(_, x)| *x)
                .collect()
        })
        .collect()
}

fn determinant(m: &[Vec<i64>]) -> i64 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * determinant(&minor(m, 0, j))
            })
            .sum(),
    }
}

fn adjugate(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = m.len();
    if n == 1 {
        return vec![vec![1]];
    }
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                    sign * determinant(&minor(m, j, i))
                })
                .collect()
        })
        .collect()
}
