use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::{RingContext, RingError};

/// An element of Z[Z^k]: a finite integer combination of monomials `x^v`.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupRingElement {
    ctx: Arc<RingContext>,
    terms: BTreeMap<Vec<i64>, i64>,
}

impl GroupRingElement {
    pub fn zero(ctx: &Arc<RingContext>) -> Self {
        GroupRingElement { ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    pub fn from_int(ctx: &Arc<RingContext>, c: i64) -> Self {
        Self::monomial(ctx, c, vec![0; ctx.rank()])
    }

    pub fn one(ctx: &Arc<RingContext>) -> Self {
        Self::from_int(ctx, 1)
    }

    pub fn monomial(ctx: &Arc<RingContext>, c: i64, exponent: Vec<i64>) -> Self {
        assert_eq!(exponent.len(), ctx.rank(), "exponent length must equal the rank");
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(exponent, c);
        }
        GroupRingElement { ctx: ctx.clone(), terms }
    }

    pub fn from_terms(
        ctx: &Arc<RingContext>,
        terms: impl IntoIterator<Item = (Vec<i64>, i64)>,
    ) -> Self {
        let mut out = Self::zero(ctx);
        for (v, c) in terms {
            out.add_term(v, c);
        }
        out
    }

    pub fn context(&self) -> &Arc<RingContext> {
        &self.ctx
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, i64)> {
        self.terms.iter().map(|(v, c)| (v, *c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some((sign, exponent))` when the element is `+-x^v`.
    pub fn as_signed_monomial(&self) -> Option<(i64, &Vec<i64>)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (v, c) = self.terms.iter().next()?;
        (c.abs() == 1).then_some((*c, v))
    }

    /// Integer value of a constant element, if it is one.
    pub fn as_integer(&self) -> Option<i64> {
        match self.terms.len() {
            0 => Some(0),
            1 => {
                let (v, c) = self.terms.iter().next()?;
                v.iter().all(|e| *e == 0).then_some(*c)
            }
            _ => None,
        }
    }

    pub(crate) fn add_term(&mut self, v: Vec<i64>, c: i64) {
        if c == 0 {
            return;
        }
        let sum = self.terms.get(&v).copied().unwrap_or(0) + c;
        if sum == 0 {
            self.terms.remove(&v);
        } else {
            self.terms.insert(v, sum);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (v, c) in &other.terms {
            out.add_term(v.clone(), *c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        GroupRingElement {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(v, c)| (v.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(&self.ctx);
        for (u, a) in &self.terms {
            for (w, b) in &other.terms {
                let v = u.iter().zip(w).map(|(x, y)| x + y).collect();
                out.add_term(v, a * b);
            }
        }
        out
    }

    pub fn scale(&self, c: i64) -> Self {
        let mut out = Self::zero(&self.ctx);
        for (v, a) in &self.terms {
            out.add_term(v.clone(), a * c);
        }
        out
    }

    /// `zeta^power` applied to every monomial.
    pub fn twist(&self, power: i64) -> Self {
        if power == 0 || self.ctx.is_untwisted() {
            return self.clone();
        }
        let mut out = Self::zero(&self.ctx);
        for (v, c) in &self.terms {
            out.add_term(self.ctx.act(power, v), *c);
        }
        out
    }

    /// Inverse of a unit `+-x^v`.
    pub fn unit_inverse(&self) -> Result<Self, RingError> {
        let (sign, v) = self.as_signed_monomial().ok_or(RingError::NotUnit)?;
        Ok(Self::monomial(&self.ctx, sign, v.iter().map(|e| -e).collect()))
    }

    pub(crate) fn fmt_term(ctx: &RingContext, v: &[i64], c: i64) -> String {
        if ctx.rank() == 0 {
            format!("({c})")
        } else {
            let exps: Vec<String> = v.iter().map(|e| e.to_string()).collect();
            format!("({c})*x^[{}]", exps.join(","))
        }
    }

    pub fn parse(ctx: &Arc<RingContext>, s: &str) -> Result<Self, RingError> {
        let s = s.trim();
        let mut out = Self::zero(ctx);
        if s == "0" {
            return Ok(out);
        }
        for piece in s.split(" + ") {
            let (c, v) = super::text::parse_coefficient_monomial(ctx, piece.trim())?;
            out.add_term(v, c);
        }
        Ok(out)
    }
}

impl fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(v, c)| Self::fmt_term(&self.ctx, v, *c))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
