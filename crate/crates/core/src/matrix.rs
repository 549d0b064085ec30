//! Dense matrices over the three coefficient rings used by chain complexes.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::rings::{NovikovElement, Precision, RingContext, RingError};

/// A coefficient ring. Contexts carry whatever is needed to build constants.
pub trait Coefficient: Clone + PartialEq + fmt::Debug + fmt::Display {
    type Context: Clone + PartialEq + fmt::Debug;

    fn zero(ctx: &Self::Context) -> Self;
    fn from_int(ctx: &Self::Context, c: i64) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// Zero to the precision the element carries.
    fn is_zero(&self) -> bool;
    fn parse(ctx: &Self::Context, s: &str) -> Result<Self, RingError>;
    fn describe(ctx: &Self::Context) -> CoefficientSpec;

    fn one(ctx: &Self::Context) -> Self {
        Self::from_int(ctx, 1)
    }

    /// Zero with no precision loss when multiplied; products with it may be
    /// skipped.
    fn is_exact_zero(&self) -> bool {
        self.is_zero()
    }

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
}

/// Serialisable description of a coefficient context.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoefficientSpec {
    Integer,
    Novikov { ring: RingContext, precision: Option<i64> },
}

impl Coefficient for i64 {
    type Context = ();

    fn zero(_: &()) -> Self {
        0
    }
    fn from_int(_: &(), c: i64) -> Self {
        c
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn parse(_: &(), s: &str) -> Result<Self, RingError> {
        s.trim().parse().map_err(|_| RingError::Parse(s.to_string()))
    }
    fn describe(_: &()) -> CoefficientSpec {
        CoefficientSpec::Integer
    }
}

/// Context for Novikov coefficients: the group ring and the precision at
/// which constants are created (`None` for exact Laurent polynomials).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NovikovContext {
    pub ring: Arc<RingContext>,
    pub precision: Precision,
}

impl NovikovContext {
    pub fn new(ring: Arc<RingContext>, precision: Precision) -> Self {
        NovikovContext { ring, precision }
    }

    pub fn integral(precision: Precision) -> Self {
        NovikovContext { ring: RingContext::integers(), precision }
    }
}

impl Coefficient for NovikovElement {
    type Context = NovikovContext;

    fn zero(ctx: &NovikovContext) -> Self {
        NovikovElement::zero(&ctx.ring, ctx.precision)
    }
    fn from_int(ctx: &NovikovContext, c: i64) -> Self {
        NovikovElement::from_int(&ctx.ring, c, ctx.precision)
    }
    fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("matrix entries share a ring context")
    }
    fn neg(&self) -> Self {
        NovikovElement::neg(self)
    }
    fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("matrix entries share a ring context")
    }
    fn is_zero(&self) -> bool {
        NovikovElement::is_zero(self)
    }
    fn is_exact_zero(&self) -> bool {
        NovikovElement::is_zero(self) && self.is_exact()
    }
    fn parse(ctx: &NovikovContext, s: &str) -> Result<Self, RingError> {
        NovikovElement::parse(&ctx.ring, s)
    }
    fn describe(ctx: &NovikovContext) -> CoefficientSpec {
        CoefficientSpec::Novikov { ring: (*ctx.ring).clone(), precision: ctx.precision }
    }
}

/// Row-major dense matrix. Column `j` is the image of the `j`-th source
/// basis vector.
#[derive(Clone, PartialEq)]
pub struct Matrix<R: Coefficient> {
    ctx: R::Context,
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

impl<R: Coefficient> Matrix<R> {
    pub fn zeros(ctx: &R::Context, rows: usize, cols: usize) -> Self {
        Matrix { ctx: ctx.clone(), rows, cols, data: vec![R::zero(ctx); rows * cols] }
    }

    pub fn identity(ctx: &R::Context, n: usize) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m.set(i, i, R::one(ctx));
        }
        m
    }

    pub fn from_fn(
        ctx: &R::Context,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> R,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { ctx: ctx.clone(), rows, cols, data }
    }

    pub fn from_rows(ctx: &R::Context, rows: Vec<Vec<R>>, cols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let n = rows.len();
        Matrix { ctx: ctx.clone(), rows: n, cols, data: rows.into_iter().flatten().collect() }
    }

    pub fn context(&self) -> &R::Context {
        &self.ctx
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.data[i * self.cols + j] = v;
    }

    pub fn map(&self, f: impl Fn(&R) -> R) -> Self {
        Matrix {
            ctx: self.ctx.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.map(|x| x.neg())
    }

    pub fn scale(&self, c: &R) -> Self {
        self.map(|x| c.mul(x))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in add");
        Matrix {
            ctx: self.ctx.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let mut out = Self::zeros(&self.ctx, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_exact_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a.mul(other.get(k, j));
                    let idx = i * out.cols + j;
                    out.data[idx] = out.data[idx].add(&prod);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(&self.ctx, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(R::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j {
                        e.sub(&R::one(&self.ctx)).is_zero()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    /// Positions and values of entries that are not zero.
    pub fn nonzero_entries(&self) -> Vec<(usize, usize, R)> {
        let mut out = Vec::new();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = self.get(i, j);
                if !e.is_zero() {
                    out.push((i, j, e.clone()));
                }
            }
        }
        out
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(&self.ctx, rows.len(), cols.len(), |i, j| {
            self.get(rows[i], cols[j]).clone()
        })
    }

    /// Assembles a block matrix. `blocks[r][c]` of `None` is a zero block;
    /// row heights and column widths are given explicitly.
    pub fn blocks(
        ctx: &R::Context,
        heights: &[usize],
        widths: &[usize],
        blocks: &[Vec<Option<Matrix<R>>>],
    ) -> Self {
        let rows: usize = heights.iter().sum();
        let cols: usize = widths.iter().sum();
        let mut out = Self::zeros(ctx, rows, cols);
        let mut r0 = 0;
        for (br, h) in heights.iter().enumerate() {
            let mut c0 = 0;
            for (bc, w) in widths.iter().enumerate() {
                if let Some(b) = &blocks[br][bc] {
                    assert_eq!(b.shape(), (*h, *w), "block ({br},{bc}) has wrong shape");
                    for i in 0..*h {
                        for j in 0..*w {
                            out.set(r0 + i, c0 + j, b.get(i, j).clone());
                        }
                    }
                }
                c0 += w;
            }
            r0 += h;
        }
        out
    }
}

impl<R: Coefficient> fmt::Debug for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Matrix<NovikovElement> {
    /// Entrywise congruence modulo `z^n`.
    pub fn congruent(&self, other: &Self, n: i64) -> bool {
        self.shape() == other.shape()
            && self.data.iter().zip(&other.data).all(|(a, b)| a.congruent(b, n))
    }

    pub fn truncate(&self, n: i64) -> Self {
        self.map(|x| x.truncate(n))
    }

    pub fn with_precision(&self, precision: Precision) -> Self {
        let mut out = self.map(|x| x.with_precision(precision));
        out.ctx.precision = precision;
        out
    }

    /// Embeds an integer matrix.
    pub fn from_integer(ctx: &NovikovContext, m: &Matrix<i64>) -> Self {
        Self::from_fn(ctx, m.rows(), m.cols(), |i, j| {
            NovikovElement::from_int(&ctx.ring, *m.get(i, j), ctx.precision)
        })
    }
}
